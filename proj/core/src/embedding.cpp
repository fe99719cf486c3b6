#include "kpframe/embedding.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>

#include "kpframe/linalg.hpp"

namespace kpf {

namespace {

double max_entry_norm(const HermitianPoint<double>& a) {
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::sqrt(a.at(i, j).norm()));
  return m;
}

// Positions of A_0..A_N among the entries of (X_i conj X_j): (i, j, component).
std::vector<std::array<int, 3>> coordinate_layout(int k) {
  std::vector<std::array<int, 3>> out{{0, 0, 0}};
  for (int c = 0; c < k; ++c) out.push_back({0, 1, c});
  for (int c = 0; c < k; ++c) out.push_back({0, 2, c});
  out.push_back({1, 1, 0});
  for (int c = 0; c < k; ++c) out.push_back({1, 2, c});
  out.push_back({2, 2, 0});
  return out;
}

using PolyElement = AlgebraElement<Polynomial>;

PolyElement coordinate_element(int k, int j) {
  PolyElement x(k);
  for (int c = 0; c < k; ++c) x[c] = Polynomial::variable(Symbol::coordinate(j, c));
  return x;
}

PolyElement form_element(int k, int j, int l) {
  PolyElement x(k);
  for (int c = 0; c < k; ++c) x[c] = Polynomial::variable(Symbol::form_component(j, l, c));
  return x;
}

// Splits p into sum over coordinate monomials m of (form-symbol polynomial) * m.
std::map<Monomial, Polynomial> split_by_coordinates(const Polynomial& p) {
  std::map<Monomial, Polynomial> out;
  for (const auto& [m, c] : p.terms()) {
    Monomial::Storage coords;
    Monomial::Storage rest;
    for (Symbol s : m.symbols()) (s.kind() == SymbolKind::Coordinate ? coords : rest).push_back(s);
    out[Monomial::from_symbols(coords)] += Polynomial::term(Monomial::from_symbols(rest), c);
  }
  return out;
}

void check_associative_k(int k, const char* what) {
  if (k != 1 && k != 2 && k != 4)
    throw std::invalid_argument(std::string(what) + " supports k = 1, 2, 4 only, got " + std::to_string(k));
}

}  // namespace

PointDefects point_defects(const HermitianPoint<double>& a) {
  PointDefects d;
  d.hermitian = max_entry_norm(a - a.conj_transpose());
  d.idempotent = max_entry_norm(HermitianPoint<double>::jordan(a, a) - a);
  d.trace = std::abs(a.trace() - 1.0);
  return d;
}

bool satisfies_point_invariants(const HermitianPoint<Rational>& a) {
  return a == a.conj_transpose() && HermitianPoint<Rational>::jordan(a, a) == a && a.trace() == Rational(1);
}

int affine_span_dimension(int k, const std::vector<HermitianPoint<double>>& samples, double tol) {
  check_algebra_dim(k);
  if (static_cast<int>(samples.size()) < 3 * k + 4)
    throw std::invalid_argument("affine_span_dimension needs at least 3k+4 samples");
  const auto base = samples.front().real_coordinates();
  Eigen::MatrixXd m(samples.size(), base.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto x = samples[s].real_coordinates();
    for (std::size_t c = 0; c < x.size(); ++c) m(Eigen::Index(s), Eigen::Index(c)) = x[c] - base[c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank;
}

int affine_span_dimension(int k, const std::vector<HermitianPoint<Rational>>& samples) {
  check_algebra_dim(k);
  if (static_cast<int>(samples.size()) < 3 * k + 4)
    throw std::invalid_argument("affine_span_dimension needs at least 3k+4 samples");
  const auto base = samples.front().real_coordinates();
  RationalMatrix m(static_cast<int>(samples.size()), static_cast<int>(base.size()));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto x = samples[s].real_coordinates();
    for (std::size_t c = 0; c < x.size(); ++c) m(int(s), int(c)) = x[c] - base[c];
  }
  return m.rank();
}

std::vector<Polynomial> standard_coordinates(int k) {
  check_associative_k(k, "standard_coordinates");
  std::array<PolyElement, 3> x{coordinate_element(k, 0), coordinate_element(k, 1), coordinate_element(k, 2)};
  std::vector<Polynomial> out;
  for (const auto& [i, j, c] : coordinate_layout(k)) out.push_back((x[std::size_t(i)] * x[std::size_t(j)].conj())[c]);
  return out;
}

PolyMatrix derive_maurer_cartan(int k) {
  check_associative_k(k, "derive_maurer_cartan");
  std::array<PolyElement, 3> x{coordinate_element(k, 0), coordinate_element(k, 1), coordinate_element(k, 2)};
  std::array<PolyElement, 3> dx{PolyElement(k), PolyElement(k), PolyElement(k)};
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) dx[std::size_t(j)] = dx[std::size_t(j)] + form_element(k, j, l) * x[std::size_t(l)];

  const auto layout = coordinate_layout(k);
  const int dim = static_cast<int>(layout.size());
  std::vector<Polynomial> a;
  std::vector<Polynomial> da;
  for (const auto& [i, j, c] : layout) {
    const auto& xi = x[std::size_t(i)];
    const auto& xj = x[std::size_t(j)];
    a.push_back((xi * xj.conj())[c]);
    da.push_back((dx[std::size_t(i)] * xj.conj() + xi * dx[std::size_t(j)].conj())[c]);
  }

  std::map<Monomial, int> rows;
  std::vector<std::map<Monomial, Polynomial>> a_split;
  std::vector<std::map<Monomial, Polynomial>> da_split;
  for (const auto& p : a) {
    a_split.push_back(split_by_coordinates(p));
    for (const auto& [m, _] : a_split.back()) rows.emplace(m, 0);
  }
  for (const auto& p : da) {
    da_split.push_back(split_by_coordinates(p));
    for (const auto& [m, _] : da_split.back()) rows.emplace(m, 0);
  }
  int r = 0;
  for (auto& [m, idx] : rows) idx = r++;

  RationalMatrix basis(r, dim);
  for (int j = 0; j < dim; ++j)
    for (const auto& [m, coeff] : a_split[std::size_t(j)]) basis(rows.at(m), j) = coeff.constant_term();
  if (basis.rank() != dim) throw std::logic_error("standard coordinates are not linearly independent");

  PolyMatrix out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    std::vector<Polynomial> rhs(static_cast<std::size_t>(r));
    for (const auto& [m, coeff] : da_split[std::size_t(i)]) rhs[std::size_t(rows.at(m))] = coeff;
    auto sol = solve_polynomial_rhs(basis, std::move(rhs));
    if (!sol) throw std::logic_error("dA_" + std::to_string(i) + " is not a combination of the A_j");
    for (int j = 0; j < dim; ++j) out.at(i, j) = std::move((*sol)[std::size_t(j)]);
  }
  return out;
}

// ---------------------------------------------------------------- numeric probes

AlgebraElement<double> random_element(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  AlgebraElement<double> x(k);
  for (int c = 0; c < k; ++c) x[c] = nd(rng);
  return x;
}

KVector<double> random_unit_vector(int k, std::mt19937_64& rng) {
  KVector<double> v{random_element(k, rng), random_element(k, rng), random_element(k, rng)};
  const double n = std::sqrt(v[0].norm() + v[1].norm() + v[2].norm());
  for (auto& x : v) x = x * (1.0 / n);
  return v;
}

HermitianPoint<double> random_hermitian(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  HermitianPoint<double> h(k);
  for (int i = 0; i < 3; ++i) {
    h.at(i, i) = AlgebraElement<double>::real(k, nd(rng));
    for (int j = i + 1; j < 3; ++j) {
      h.at(i, j) = random_element(k, rng);
      h.at(j, i) = h.at(i, j).conj();
    }
  }
  return h;
}

HermitianPoint<double> projector(const KVector<double>& v) {
  HermitianPoint<double> a(v[0].k());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a.at(i, j) = v[std::size_t(i)] * v[std::size_t(j)].conj();
  return a;
}

double frobenius(const HermitianPoint<double>& x, const HermitianPoint<double>& y) {
  double s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += x.at(i, j).dot(y.at(i, j));
  return s;
}

double height(const HermitianPoint<double>& xi, const HermitianPoint<double>& a) { return frobenius(xi, a); }

namespace {

KVector<double> right_multiply(const KVector<double>& v, const AlgebraElement<double>& q) {
  return {v[0] * q, v[1] * q, v[2] * q};
}

// Left multiplication by xi on K^3 as a symmetric 3k x 3k real matrix.
Eigen::MatrixXd real_representation(const HermitianPoint<double>& xi) {
  const int k = xi.k();
  Eigen::MatrixXd m(3 * k, 3 * k);
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < k; ++c) {
      const auto e = AlgebraElement<double>::unit(k, c);
      for (int i = 0; i < 3; ++i) {
        const auto col = xi.at(i, j) * e;
        for (int d = 0; d < k; ++d) m(i * k + d, j * k + c) = col[d];
      }
    }
  return m;
}

KVector<double> column_vector(int k, const Eigen::VectorXd& col) {
  KVector<double> v{AlgebraElement<double>(k), AlgebraElement<double>(k), AlgebraElement<double>(k)};
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < k; ++d) v[std::size_t(i)][d] = col(i * k + d);
  const double n = std::sqrt(v[0].norm() + v[1].norm() + v[2].norm());
  for (auto& x : v) x = x * (1.0 / n);
  return v;
}

}  // namespace

std::vector<KVector<double>> tangent_directions(const KVector<double>& v) {
  const int k = v[0].k();
  check_associative_k(k, "tangent_directions");
  // Complete v to a K-orthonormal basis by Gram-Schmidt against coordinate vectors.
  std::vector<KVector<double>> frame{v};
  for (int e = 0; e < 3 && frame.size() < 3; ++e) {
    KVector<double> w{AlgebraElement<double>(k), AlgebraElement<double>(k), AlgebraElement<double>(k)};
    w[std::size_t(e)] = AlgebraElement<double>::real(k, 1.0);
    for (const auto& f : frame) {
      // w -= f (f^* w)
      AlgebraElement<double> proj(k);
      for (int i = 0; i < 3; ++i) proj = proj + f[std::size_t(i)].conj() * w[std::size_t(i)];
      for (int i = 0; i < 3; ++i) w[std::size_t(i)] = w[std::size_t(i)] - f[std::size_t(i)] * proj;
    }
    const double n = std::sqrt(w[0].norm() + w[1].norm() + w[2].norm());
    if (n < 1e-6) continue;
    for (auto& x : w) x = x * (1.0 / n);
    frame.push_back(w);
  }
  std::vector<KVector<double>> out;
  for (std::size_t f = 1; f < frame.size(); ++f)
    for (int c = 0; c < k; ++c) out.push_back(right_multiply(frame[f], AlgebraElement<double>::unit(k, c)));
  return out;
}

HermitianPoint<double> chart_point(const KVector<double>& v, const std::vector<KVector<double>>& u,
                                   const std::vector<double>& t) {
  KVector<double> w = v;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (int i = 0; i < 3; ++i) w[std::size_t(i)] = w[std::size_t(i)] + u[a][std::size_t(i)] * t[a];
  const double n2 = w[0].norm() + w[1].norm() + w[2].norm();
  return projector(w) * (1.0 / n2);
}

std::vector<std::vector<double>> chart_hessian(const KVector<double>& v, const std::vector<KVector<double>>& u,
                                               const std::function<double(const HermitianPoint<double>&)>& f,
                                               double step) {
  const std::size_t d = u.size();
  auto eval = [&](std::size_t a, double sa, std::size_t b, double sb) {
    std::vector<double> t(d, 0.0);
    if (a < d) t[a] += sa;
    if (b < d) t[b] += sb;
    return f(chart_point(v, u, t));
  };
  const double f0 = eval(d, 0, d, 0);
  std::vector<std::vector<double>> h(d, std::vector<double>(d));
  for (std::size_t a = 0; a < d; ++a) {
    h[a][a] = (eval(a, step, d, 0) - 2 * f0 + eval(a, -step, d, 0)) / (step * step);
    for (std::size_t b = a + 1; b < d; ++b) {
      h[a][b] = (eval(a, step, b, step) - eval(a, step, b, -step) - eval(a, -step, b, step) +
                 eval(a, -step, b, -step)) /
                (4 * step * step);
      h[b][a] = h[a][b];
    }
  }
  return h;
}

std::vector<CriticalPoint> height_critical_points(int k, const HermitianPoint<double>& xi) {
  check_associative_k(k, "height_critical_points");
  if (xi.k() != k) throw std::invalid_argument("height matrix has the wrong algebra dimension");
  const Eigen::MatrixXd m = real_representation(xi);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("height matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int g = 1; g < 3; ++g)
    if (ev(g * k) - ev(g * k - 1) < 1e-9 * scale) throw DegenerateHeight("height function has a repeated eigenvalue");

  std::array<KVector<double>, 3> vecs;
  for (int g = 0; g < 3; ++g) vecs[std::size_t(g)] = column_vector(k, es.eigenvectors().col(g * k));

  std::vector<CriticalPoint> out;
  for (int g = 0; g < 3; ++g) {
    CriticalPoint cp;
    cp.vector = vecs[std::size_t(g)];
    cp.point = projector(cp.vector);
    cp.value = height(xi, cp.point);
    std::vector<KVector<double>> u;
    for (int o = 0; o < 3; ++o) {
      if (o == g) continue;
      for (int c = 0; c < k; ++c) u.push_back(right_multiply(vecs[std::size_t(o)], AlgebraElement<double>::unit(k, c)));
    }
    const auto h = chart_hessian(cp.vector, u, [&](const HermitianPoint<double>& a) { return height(xi, a); });
    Eigen::MatrixXd hm(Eigen::Index(h.size()), Eigen::Index(h.size()));
    for (std::size_t a = 0; a < h.size(); ++a)
      for (std::size_t b = 0; b < h.size(); ++b) hm(Eigen::Index(a), Eigen::Index(b)) = h[a][b];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(hm, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < hs.eigenvalues().size(); ++i) {
      const double e = hs.eigenvalues()(i);
      if (std::abs(e) < 1e-6) throw DegenerateHeight("degenerate critical point");
      if (e < 0) ++cp.index;
      cp.hessian_eigenvalues.push_back(e);
    }
    out.push_back(std::move(cp));
  }
  return out;
}

std::vector<std::vector<HermitianPoint<double>>> second_fundamental_form(const KVector<double>& v,
                                                                          const std::vector<KVector<double>>& u) {
  const auto p = projector(v);
  std::vector<std::vector<HermitianPoint<double>>> out(u.size());
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = 0; b < u.size(); ++b) {
      HermitianPoint<double> s(v[0].k());
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          s.at(i, j) = u[a][std::size_t(i)] * u[b][std::size_t(j)].conj() + u[b][std::size_t(i)] * u[a][std::size_t(j)].conj();
      if (a == b) s = s - p * 2.0;
      out[a].push_back(normal_projection(v, s));
    }
  return out;
}

HermitianPoint<double> normal_projection(const KVector<double>& v, const HermitianPoint<double>& xi) {
  const int k = v[0].k();
  HermitianPoint<double> out = xi;
  const double tr = xi.trace() / 3.0;
  for (int i = 0; i < 3; ++i) out.at(i, i) = out.at(i, i) - AlgebraElement<double>::real(k, tr);
  for (const auto& u : tangent_directions(v)) {
    HermitianPoint<double> t(k);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.at(i, j) = u[std::size_t(i)] * v[std::size_t(j)].conj() + v[std::size_t(i)] * u[std::size_t(j)].conj();
    out = out - t * (frobenius(out, t) / frobenius(t, t));
  }
  return out;
}

}  // namespace kpf
