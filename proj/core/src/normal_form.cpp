#include "kpframe/normal_form.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace kpf {

const std::array<std::array<int, 8>, 8>& hurwitz_table() {
  static const std::array<std::array<int, 8>, 8> table = {{
      {1, -2, -3, -4, -5, -6, -7, -8},
      {2, 1, -4, 3, -6, 5, -8, 7},
      {3, 4, 1, -2, -7, 8, 5, -6},
      {4, -3, 2, 1, 8, 7, -6, -5},
      {5, 6, 7, -8, 1, -2, -3, 4},
      {6, -5, -8, -7, 2, 1, 4, 3},
      {7, 8, -5, 6, 3, -4, 1, -2},
      {8, -7, 6, 5, -4, -3, 2, 1},
  }};
  return table;
}

PolyMatrix hurwitz_family(int k) {
  check_algebra_dim(k);
  PolyMatrix b(k, k);
  const auto& t = hurwitz_table();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int v = t[std::size_t(i)][std::size_t(j)];
      if (std::abs(v) > k) continue;
      b.at(i, j) = Polynomial::variable(Symbol::s(std::abs(v))) * Rational(v > 0 ? 1 : -1);
    }
  return b;
}

RationalMatrix hurwitz_B(int k, const std::vector<Rational>& s) {
  check_algebra_dim(k);
  if (static_cast<int>(s.size()) != k) throw std::invalid_argument("expected k parameter values");
  RationalMatrix b(k, k);
  const auto& t = hurwitz_table();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const int v = t[std::size_t(i)][std::size_t(j)];
      if (std::abs(v) > k) continue;
      b(i, j) = v > 0 ? s[std::size_t(v - 1)] : Rational(-s[std::size_t(-v - 1)]);
    }
  return b;
}

std::vector<Symbol> normal_parameters(int k) {
  check_algebra_dim(k);
  std::vector<Symbol> out{Symbol::w(1)};
  for (int i = 1; i <= k; ++i) out.push_back(Symbol::s(i));
  out.push_back(Symbol::w(2));
  return out;
}

PolyMatrix shape_operator_family(int k) {
  const PolyMatrix b = hurwitz_family(k);
  const Polynomial w1 = Polynomial::variable(Symbol::w(1));
  const Polynomial w2 = Polynomial::variable(Symbol::w(2));
  PolyMatrix s(2 * k, 2 * k);
  for (int i = 0; i < k; ++i) {
    s.at(i, i) = w1;
    s.at(k + i, k + i) = w2;
    for (int j = 0; j < k; ++j) {
      const Rational sign = ((i == 0) == (j == 0)) ? Rational(1) : Rational(-1);
      s.at(i, k + j) = b.at(i, j) * sign;
      s.at(k + j, i) = b.at(i, j) * sign;
    }
  }
  return s;
}

std::string QuadraticFormSet::form_to_string(int mu) const {
  const RationalMatrix& m = at(mu);
  std::ostringstream os;
  bool first = true;
  for (int a = 0; a < m.rows(); ++a)
    for (int b = 0; b < m.cols(); ++b) {
      const Rational& c = m(a, b);
      if (sgn(c) == 0) continue;
      os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
      const Rational mag = abs(c);
      if (mag != 1) os << to_string(mag) << "*";
      os << "w" << a + 1 << "*w" << b + 1;
      first = false;
    }
  return first ? "0" : os.str();
}

QuadraticFormSet qmu_from_normal_form(int k) {
  const PolyMatrix s = shape_operator_family(k);
  QuadraticFormSet out;
  out.k = k;
  out.ctx = DarbouxContext::for_k(k);
  const int n = out.ctx.n;
  for (Symbol p : normal_parameters(k)) {
    RationalMatrix q(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) q(a, b) = s.at(a, b).linear_coefficient(p) / 2;
    out.q.push_back(std::move(q));
  }
  return out;
}

std::vector<LinearRelation> relations_from_qmu(const QuadraticFormSet& q) {
  const int n = q.ctx.n;
  std::vector<LinearRelation> out;
  for (int a = 1; a <= n; ++a)
    for (int mu = n + 1; mu <= q.ctx.N; ++mu) {
      const RationalMatrix& m = q.at(mu);
      if (!(m == m.transpose())) throw std::invalid_argument("quadratic form is not symmetric");
      LinearRelation rel;
      rel.terms[FormGenerator(a, mu)] = 1;
      for (int b = 1; b <= n; ++b)
        if (sgn(m(a - 1, b - 1)) != 0) rel.terms[FormGenerator::basis(b)] = -m(a - 1, b - 1);
      rel.label = "normal form " + FormGenerator(a, mu).to_string();
      out.push_back(std::move(rel));
    }
  return out;
}

std::vector<LinearRelation> iiihat_constraints(int k) {
  if (k != 2)
    throw std::invalid_argument("third-form constraints are only tabulated for k = 2; use replay_iiihat for k = " +
                                std::to_string(k));
  return {
      LinearRelation::parse("w5,8 = 0", "third form w5,8"),
      LinearRelation::parse("w8,5 = 0", "third form w8,5"),
      LinearRelation::parse("w5,5 + 2*w6,5 + 2*w6,8 + w8,8 = w5,6 + 2*w6,6 + w8,6", "third form v1+v3"),
      LinearRelation::parse("w5,5 + 2*w7,5 + 2*w7,8 + w8,8 = w5,7 + 2*w7,7 + w8,7", "third form v1+v4"),
      LinearRelation::parse("w5,5 - 2*w7,5 - 2*w7,8 + w8,8 = -w5,7 + 2*w7,7 - w8,7", "third form v2+v3"),
  };
}

namespace {

std::string direction_label(const std::vector<Rational>& w) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t a = 0; a < w.size(); ++a) {
    if (sgn(w[a]) == 0) continue;
    if (!first) os << (sgn(w[a]) < 0 ? "-" : "+");
    os << "v" << a + 1;
    first = false;
  }
  return os.str();
}

}  // namespace

std::vector<Direction> all_probe_directions(int n) {
  std::vector<Direction> dirs;
  for (int a = 0; a < n; ++a) {
    Direction w(static_cast<std::size_t>(n));
    w[std::size_t(a)] = 1;
    dirs.push_back(w);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int sign : {1, -1}) {
        Direction w(static_cast<std::size_t>(n));
        w[std::size_t(a)] = 1;
        w[std::size_t(b)] = sign;
        dirs.push_back(w);
      }
  return dirs;
}

std::vector<Direction> tabulated_probe_directions() {
  auto dirs = all_probe_directions(4);
  dirs.resize(4);
  for (auto [a, b] : {std::pair{0, 2}, std::pair{0, 3}, std::pair{1, 2}}) {
    Direction w(4);
    w[std::size_t(a)] = 1;
    w[std::size_t(b)] = 1;
    dirs.push_back(w);
  }
  return dirs;
}

std::vector<LinearRelation> replay_iiihat(const QuadraticFormSet& q, const std::vector<Direction>& dirs) {
  const int n = q.ctx.n;
  const int m = q.ctx.N - n;
  std::vector<LinearRelation> out;
  for (const auto& w : dirs) {
    if (static_cast<int>(w.size()) != n) throw std::invalid_argument("direction has the wrong length");
    std::vector<Rational> c(static_cast<std::size_t>(m));
    for (int mu = 0; mu < m; ++mu)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) c[std::size_t(mu)] += w[std::size_t(a)] * w[std::size_t(b)] * q.q[std::size_t(mu)](a, b);
    RationalMatrix second(n, m);
    for (int g = 0; g < n; ++g)
      for (int mu = 0; mu < m; ++mu)
        for (int b = 0; b < n; ++b) second(g, mu) += w[std::size_t(b)] * q.q[std::size_t(mu)](b, g);
    for (const auto& lambda : second.nullspace()) {
      LinearRelation rel;
      for (int nu = 0; nu < m; ++nu) {
        if (sgn(lambda[std::size_t(nu)]) == 0) continue;
        for (int mu = 0; mu < m; ++mu) {
          if (sgn(c[std::size_t(mu)]) == 0) continue;
          auto& slot = rel.terms[FormGenerator(n + 1 + mu, n + 1 + nu)];
          slot += lambda[std::size_t(nu)] * c[std::size_t(mu)];
        }
      }
      for (auto it = rel.terms.begin(); it != rel.terms.end();)
        it = sgn(it->second) == 0 ? rel.terms.erase(it) : std::next(it);
      if (rel.empty()) continue;
      rel.label = "third form " + direction_label(w);
      out.push_back(std::move(rel));
    }
  }
  return out;
}

namespace {

SparseEchelon::Row relation_row(const LinearRelation& r) {
  SparseEchelon::Row row;
  for (const auto& [g, c] : r.terms) row[g.row * 256 + g.col] = c;
  return row;
}

std::size_t span_rank(const std::vector<const std::vector<LinearRelation>*>& lists) {
  SparseEchelon e;
  for (const auto* l : lists)
    for (const auto& r : *l) e.insert(relation_row(r));
  return e.rank();
}

}  // namespace

bool spans_subset(const std::vector<LinearRelation>& x, const std::vector<LinearRelation>& y) {
  return span_rank({&y}) == span_rank({&x, &y});
}

bool same_span(const std::vector<LinearRelation>& x, const std::vector<LinearRelation>& y) {
  return spans_subset(x, y) && spans_subset(y, x);
}

}  // namespace kpf
