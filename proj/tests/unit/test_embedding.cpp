#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "kpframe/embedding.hpp"
#include "kpframe/pipeline.hpp"
#include "support.hpp"

using namespace kpf;
using kpf::test::Gen;

namespace {

template <class T>
AlgebraElement<T> random_exact(Gen& gen, int k) {
  AlgebraElement<T> x(k);
  for (int c = 0; c < k; ++c) x[c] = T(gen.rational(4));
  return x;
}

AlgebraElement<double> random_float(Gen& gen, int k) {
  AlgebraElement<double> x(k);
  for (int c = 0; c < k; ++c) x[c] = gen.real();
  return x;
}

// Coordinates of the explicit embedding: |X_0|^2, X_0 conj(X_1), X_0 conj(X_2), |X_1|^2, X_1 conj(X_2), |X_2|^2,
// the off-diagonal products contributing all k real components.
std::vector<double> explicit_coordinates(const std::array<AlgebraElement<double>, 3>& x) {
  const int k = x[0].k();
  std::vector<double> out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const AlgebraElement<double> p = x[std::size_t(i)] * x[std::size_t(j)].conj();
      for (int c = 0; c < (i == j ? 1 : k); ++c) out.push_back(p[c]);
    }
  return out;
}

HermitianPoint<double> diagonal(int k, double a, double b, double c) {
  HermitianPoint<double> xi(k);
  xi.at(0, 0) = AlgebraElement<double>::real(k, a);
  xi.at(1, 1) = AlgebraElement<double>::real(k, b);
  xi.at(2, 2) = AlgebraElement<double>::real(k, c);
  return xi;
}

double max_abs(const HermitianPoint<double>& a) {
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::sqrt(a.at(i, j).norm()));
  return m;
}

}  // namespace

TEST_SUITE("embedding") {

TEST_CASE("composition law and conjugation on exact elements") {
  Gen gen(21);
  for (int k : {1, 2, 4, 8}) {
    CAPTURE(k);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_exact<Rational>(gen, k), y = random_exact<Rational>(gen, k);
      CHECK((x * y).norm() == x.norm() * y.norm());
      CHECK((x * y).conj() == y.conj() * x.conj());
      CHECK((x * x) * y == x * (x * y));  // alternative law
      CHECK((x * x.conj())[0] == x.norm());
    }
  }
  const auto e1 = AlgebraElement<Rational>::unit(4, 1), e2 = AlgebraElement<Rational>::unit(4, 2);
  CHECK(e1 * e2 == AlgebraElement<Rational>::unit(4, 3));
  CHECK(e2 * e1 == -AlgebraElement<Rational>::unit(4, 3));

  // Octonions are not associative.
  bool associative = true;
  for (int a = 1; a < 8 && associative; ++a)
    for (int b = 1; b < 8 && associative; ++b)
      for (int c = 1; c < 8 && associative; ++c) {
        const auto x = AlgebraElement<Rational>::unit(8, a), y = AlgebraElement<Rational>::unit(8, b),
                   z = AlgebraElement<Rational>::unit(8, c);
        associative = (x * y) * z == x * (y * z);
      }
  CHECK_FALSE(associative);
  CHECK_THROWS(AlgebraElement<double>(3));
}

TEST_CASE("veronese points") {
  for (int k : {1, 2, 4, 8}) {
    KVector<Rational> e{AlgebraElement<Rational>::real(k, 1), AlgebraElement<Rational>(k), AlgebraElement<Rational>(k)};
    const HermitianPoint<Rational> a = veronese_point(e, 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(a.at(i, j) == AlgebraElement<Rational>::real(k, i == 0 && j == 0 ? 1 : 0));
  }

  Gen gen(22);
  for (int k : {1, 2, 4, 8}) {
    CAPTURE(k);
    for (int trial = 0; trial < 20; ++trial) {
      KVector<Rational> x{random_exact<Rational>(gen, k), random_exact<Rational>(gen, k), random_exact<Rational>(gen, k)};
      if (x[0].norm() == 0) x[0][0] = 1;
      CHECK(satisfies_point_invariants(veronese_point(x, 0)));

      KVector<double> v{random_float(gen, k), random_float(gen, k), random_float(gen, k)};
      const PointDefects d = point_defects(veronese_point(v, 0));
      CHECK(d.hermitian < 1e-12);
      CHECK(d.idempotent < 1e-12);
      CHECK(d.trace < 1e-12);
    }
  }

  // Entries are X_i conj(X_j) / |X|^2 in the associative cases.
  for (int k : {1, 2, 4}) {
    KVector<Rational> x{random_exact<Rational>(gen, k), random_exact<Rational>(gen, k), random_exact<Rational>(gen, k)};
    x[1][0] = 3;
    const Rational total = x[0].norm() + x[1].norm() + x[2].norm();
    for (int chart : {0, 1, 2}) {
      if (x[std::size_t(chart)].norm() == 0) continue;
      const HermitianPoint<Rational> a = veronese_point(x, chart);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(a.at(i, j) == (x[std::size_t(i)] * x[std::size_t(j)].conj()) * (1 / total));
    }
  }

  KVector<double> zero{AlgebraElement<double>(2), AlgebraElement<double>(2), AlgebraElement<double>(2)};
  CHECK_THROWS(veronese_point(zero, 0));
  KVector<double> off_chart{AlgebraElement<double>(8), AlgebraElement<double>::real(8, 1), AlgebraElement<double>(8)};
  CHECK_THROWS(veronese_point(off_chart, 0));
  CHECK_NOTHROW(veronese_point(off_chart, 1));
}

TEST_CASE("affine span of the standard embedding") {
  std::mt19937_64 rng(23);
  auto sample = [&](int k, int count) {
    std::vector<HermitianPoint<double>> pts;
    for (int i = 0; i < count; ++i) pts.push_back(veronese_point(random_unit_vector(k, rng), 0));
    return pts;
  };
  CHECK(affine_span_dimension(1, sample(1, 20)) == 5);
  CHECK(affine_span_dimension(2, sample(2, 30)) == 8);
  CHECK(affine_span_dimension(4, sample(4, 40)) == 14);

  const auto one = sample(2, 1);
  CHECK(affine_span_dimension(2, std::vector<HermitianPoint<double>>(12, one[0])) == 0);
  CHECK_THROWS(affine_span_dimension(2, sample(2, 5)));

  Gen gen(24);
  std::vector<HermitianPoint<Rational>> exact;
  for (int i = 0; i < 20; ++i) {
    KVector<Rational> x{random_exact<Rational>(gen, 2), random_exact<Rational>(gen, 2), random_exact<Rational>(gen, 2)};
    x[0][0] += 7;
    exact.push_back(veronese_point(x, 0));
  }
  CHECK(affine_span_dimension(2, exact) == 8);
}

TEST_CASE("standard coordinates for k = 2 are the tabulated quadratics") {
  auto C = [](int j) { return Polynomial::variable(Symbol::coordinate(j, 0)); };
  auto D = [](int j) { return Polynomial::variable(Symbol::coordinate(j, 1)); };
  const std::vector<Polynomial> expected{
      C(0) * C(0) + D(0) * D(0), C(0) * C(1) + D(0) * D(1), C(1) * D(0) - C(0) * D(1),
      C(0) * C(2) + D(0) * D(2), C(2) * D(0) - C(0) * D(2), C(1) * C(1) + D(1) * D(1),
      C(1) * C(2) + D(1) * D(2), C(2) * D(1) - C(1) * D(2), C(2) * C(2) + D(2) * D(2)};
  CHECK(standard_coordinates(2) == expected);

  Gen gen(25);
  for (int k : {1, 2, 4}) {
    const auto coords = standard_coordinates(k);
    REQUIRE(int(coords.size()) == 3 * k + 3);
    std::array<AlgebraElement<double>, 3> x{random_float(gen, k), random_float(gen, k), random_float(gen, k)};
    const auto direct = explicit_coordinates(x);
    for (std::size_t i = 0; i < coords.size(); ++i) {
      const double v = test::evaluate(coords[i], [&](Symbol s) { return x[std::size_t(s.index(1))][s.index(0)]; });
      CHECK(v == doctest::Approx(direct[i]).epsilon(1e-12));
    }
  }
  CHECK_THROWS(standard_coordinates(8));
}

TEST_CASE("derived Maurer-Cartan matrices") {
  CHECK(derive_maurer_cartan(2) == test::read_poly_matrix("standard_k2.txt"));
  CHECK(derive_maurer_cartan(2).at(0, 1) == Polynomial::parse("2*alpha_01"));
  CHECK(derive_maurer_cartan(2).at(5, 1) == Polynomial::parse("2*alpha_10"));
  for (int k : {1, 2, 4}) {
    const PolyMatrix m = derive_maurer_cartan(k);
    const int dim = 3 * k + 3;
    REQUIRE(m.rows() == dim);
    REQUIRE(m.cols() == dim);
    for (int j = 2 * k + 1; j < dim; ++j) CHECK(m.at(0, j).is_zero());
    // Every entry is a linear form in the embedding-form symbols.
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) CHECK(m.at(i, j).degree() <= 1);
  }
  CHECK_THROWS(derive_maurer_cartan(8));
  CHECK_THROWS(derive_maurer_cartan(3));
}

TEST_CASE("Maurer-Cartan rows agree with finite differences of the explicit embedding") {
  Gen gen(26);
  for (int k : {1, 2, 4}) {
    CAPTURE(k);
    const PolyMatrix mc = derive_maurer_cartan(k);
    const int dim = mc.rows();
    double worst = 0;
    for (int curve = 0; curve < 10; ++curve) {
      std::array<AlgebraElement<double>, 3> x{random_float(gen, k), random_float(gen, k), random_float(gen, k)};
      AlgebraElement<double> theta[3][3];
      for (auto& row : theta)
        for (auto& t : row) t = random_float(gen, k);
      // X_j(t) = X_j + t sum_l theta_jl X_l, so dX_j = sum_l theta_jl X_l at t = 0.
      auto at = [&](double t) {
        std::array<AlgebraElement<double>, 3> y = x;
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) y[std::size_t(j)] = y[std::size_t(j)] + (theta[j][l] * x[std::size_t(l)]) * t;
        return explicit_coordinates(y);
      };
      const double h = 1e-4;
      const auto plus = at(h), minus = at(-h), here = at(0);
      auto form_value = [&](Symbol s) { return theta[s.index(1)][s.index(2)][s.index(0)]; };
      for (int i = 0; i < dim; ++i) {
        const double numeric = (plus[std::size_t(i)] - minus[std::size_t(i)]) / (2 * h);
        double symbolic = 0;
        for (int j = 0; j < dim; ++j) symbolic += test::evaluate(mc.at(i, j), form_value) * here[std::size_t(j)];
        worst = std::max(worst, std::abs(numeric - symbolic));
      }
    }
    MESSAGE("k = " << k << ": max finite-difference error " << worst);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("height functions with distinct eigenvalues have three critical points") {
  for (int k : {1, 2, 4}) {
    const auto cps = height_critical_points(k, diagonal(k, 0, 1, 2));
    REQUIRE(cps.size() == 3);
    for (int c = 0; c < 3; ++c) {
      CHECK(cps[std::size_t(c)].value == doctest::Approx(c));
      CHECK(cps[std::size_t(c)].index == c * k);
      CHECK(cps[std::size_t(c)].point.at(c, c)[0] == doctest::Approx(1));
    }
  }

  std::mt19937_64 rng(27);
  for (int k : {1, 2, 4}) {
    CAPTURE(k);
    int perfect = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const HermitianPoint<double> xi = random_hermitian(k, rng);
      const auto cps = height_critical_points(k, xi);
      std::multiset<int> indices;
      for (const auto& cp : cps) {
        indices.insert(cp.index);
        CHECK(cp.value == doctest::Approx(height(xi, cp.point)).epsilon(1e-9));
        // Critical: the chart gradient vanishes.
        const auto u = tangent_directions(cp.vector);
        for (std::size_t a = 0; a < u.size(); ++a) {
          std::vector<double> t(u.size(), 0.0);
          t[a] = 1e-5;
          const double up = height(xi, chart_point(cp.vector, u, t));
          t[a] = -1e-5;
          const double down = height(xi, chart_point(cp.vector, u, t));
          CHECK(std::abs(up - down) / 2e-5 < 1e-6);
        }
      }
      if (cps.size() == 3 && indices == std::multiset<int>{0, k, 2 * k}) ++perfect;
    }
    CHECK(perfect == 50);
  }
  CHECK_THROWS_AS(height_critical_points(2, diagonal(2, 1, 1, 2)), DegenerateHeight);
}

TEST_CASE("chart geometry") {
  std::mt19937_64 rng(28);
  for (int k : {1, 2, 4}) {
    const KVector<double> v = random_unit_vector(k, rng);
    const auto u = tangent_directions(v);
    REQUIRE(int(u.size()) == 2 * k);
    for (std::size_t a = 0; a < u.size(); ++a) {
      double along_v = 0;
      for (int i = 0; i < 3; ++i) along_v += u[a][std::size_t(i)].dot(v[std::size_t(i)]);
      CHECK(std::abs(along_v) < 1e-12);
      for (std::size_t b = 0; b < u.size(); ++b) {
        double ip = 0;
        for (int i = 0; i < 3; ++i) ip += u[a][std::size_t(i)].dot(u[b][std::size_t(i)]);
        CHECK(ip == doctest::Approx(a == b ? 1.0 : 0.0));
      }
    }
    const auto II = second_fundamental_form(v, u);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b) CHECK(max_abs(II[a][b] - II[b][a]) < 1e-12);
  }
}

TEST_CASE("Hessian of a height function is the second fundamental form paired with xi") {
  for (int k : {1, 2, 4})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const double dev = hessian_continuation_deviation(k, seed);
      CAPTURE(k);
      CHECK(dev < 1e-6);
      CHECK(hessian_continuation_check(k, seed));
    }
  CHECK(hessian_continuation_deviation(2, 5, 0.0) == 0.0);
}

}  // TEST_SUITE
