#include <set>
#include <sstream>

#include "doctest.h"
#include "kpframe/normal_form.hpp"
#include "support.hpp"

using namespace kpf;
using kpf::test::Gen;

namespace {

Polynomial quadratic(const RationalMatrix& q) {
  Polynomial out;
  for (int a = 0; a < q.rows(); ++a)
    for (int b = 0; b < q.cols(); ++b)
      out += q(a, b) * (Polynomial::variable(Symbol::generic(a + 1)) * Polynomial::variable(Symbol::generic(b + 1)));
  return out;
}

Polynomial sum_of_squares(int k) {
  Polynomial out;
  for (int i = 1; i <= k; ++i) out += Polynomial::variable(Symbol::s(i)) * Polynomial::variable(Symbol::s(i));
  return out;
}

// Same relation up to a nonzero rational factor.
bool proportional(const LinearRelation& x, const LinearRelation& y) {
  if (x.terms.size() != y.terms.size()) return false;
  if (x.terms.empty()) return true;
  const Rational f = y.terms.begin()->second / x.terms.begin()->second;
  for (const auto& [g, c] : x.terms) {
    auto it = y.terms.find(g);
    if (it == y.terms.end() || it->second != c * f) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("normal_form") {

TEST_CASE("Hurwitz blocks") {
  const Rational s1(3), s2(-5);
  const RationalMatrix b = hurwitz_B(2, {s1, s2});
  CHECK(b(0, 0) == s1);
  CHECK(b(0, 1) == -s2);
  CHECK(b(1, 0) == s2);
  CHECK(b(1, 1) == s1);

  for (int k : {1, 2, 4, 8}) {
    std::vector<Rational> e1(std::size_t(k), Rational(0));
    e1[0] = 1;
    const RationalMatrix id = hurwitz_B(k, e1);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) CHECK(id(i, j) == Rational(i == j ? 1 : 0));
  }

  Gen gen(31);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Rational> s;
    Rational norm = 0;
    for (int i = 0; i < 8; ++i) {
      s.push_back(gen.rational(9));
      norm += s.back() * s.back();
    }
    const RationalMatrix b8 = hurwitz_B(8, s);
    const RationalMatrix btb = b8.transpose() * b8;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) CHECK(btb(i, j) == (i == j ? norm : Rational(0)));
  }
  CHECK_THROWS(hurwitz_B(3, {1, 2, 3}));
  CHECK_THROWS(hurwitz_B(2, {1}));
}

TEST_CASE("Hurwitz families are orthogonal as polynomial identities") {
  for (int k : {1, 2, 4, 8}) {
    const PolyMatrix b = hurwitz_family(k);
    const PolyMatrix btb = b.transpose() * b;
    const Polynomial n = sum_of_squares(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) CHECK(btb.at(i, j) == (i == j ? n : Polynomial()));
    // Linear in s.
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) CHECK(b.at(i, j).degree() == 1);
  }
}

TEST_CASE("shape operator family") {
  for (int k : {1, 2, 4, 8}) {
    const PolyMatrix s = shape_operator_family(k);
    REQUIRE(s.rows() == 2 * k);
    CHECK(s.is_symmetric());
    std::map<Symbol, Polynomial> only_w1;
    for (Symbol p : normal_parameters(k)) only_w1[p] = Polynomial(p == Symbol::w(1) ? 1 : 0);
    const PolyMatrix w1 = s.substitute(only_w1);
    for (int i = 0; i < 2 * k; ++i)
      for (int j = 0; j < 2 * k; ++j) CHECK(w1.at(i, j) == Polynomial(i == j && i < k ? 1 : 0));
    CHECK(normal_parameters(k).size() == std::size_t(k + 2));
  }
}

TEST_CASE("quadratic forms of the k = 2 normal form") {
  const QuadraticFormSet q = qmu_from_normal_form(2);
  REQUIRE(q.q.size() == 4);
  for (const auto& line : test::data_lines("quadratic_forms_k2.txt")) {
    std::istringstream is(line);
    int mu = 0;
    is >> mu;
    std::string rest;
    std::getline(is, rest);
    CAPTURE(mu);
    CHECK(quadratic(q.at(mu)) == Polynomial::parse(rest));
  }
  CHECK(q.form_to_string(5) == "1/2*w1*w1 + 1/2*w2*w2");

  const QuadraticFormSet q1 = qmu_from_normal_form(1);
  CHECK(quadratic(q1.at(3)) == Polynomial::parse("1/2*x1*x1"));
  CHECK(quadratic(q1.at(4)) == Polynomial::parse("x1*x2"));
  CHECK(quadratic(q1.at(5)) == Polynomial::parse("1/2*x2*x2"));

  for (int k : {1, 2, 4, 8}) {
    const QuadraticFormSet qk = qmu_from_normal_form(k);
    CHECK(qk.q.size() == std::size_t(k + 2));
    for (const auto& m : qk.q) CHECK(m == m.transpose());
  }
}

TEST_CASE("normal-form relations") {
  const auto rules = relations_from_qmu(qmu_from_normal_form(2));
  const auto printed = test::read_relations("normal_form_rules_k2.txt");
  REQUIRE(rules.size() == 16);
  REQUIRE(printed.size() == 16);
  for (const auto& p : printed) {
    int hits = 0;
    for (const auto& r : rules) hits += proportional(p, r) ? 1 : 0;
    CHECK_MESSAGE(hits == 1, p.label);
  }
  CHECK(same_span(rules, printed));

  QuadraticFormSet zero = qmu_from_normal_form(2);
  for (auto& m : zero.q) m = RationalMatrix(4, 4);
  for (const auto& r : relations_from_qmu(zero)) {
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms.begin()->first.row >= 1);
    CHECK(r.terms.begin()->first.col >= 5);
  }

  // k = 4: one rule per tangent row and normal column, matching the tabulated block.
  const auto rules4 = relations_from_qmu(qmu_from_normal_form(4));
  CHECK(rules4.size() == 48);
  const ConnectionMatrix golden = test::read_connection("final_frame_k4.txt", 4);
  int nonzero = 0;
  for (const auto& r : rules4) {
    FormGenerator lhs;
    for (const auto& [g, c] : r.terms)
      if (!g.is_basis(8)) lhs = g;
    OneForm expected;
    for (const auto& [g, c] : r.terms)
      if (g != lhs) expected.add(g, Polynomial(-c / r.terms.at(lhs)));
    CHECK_MESSAGE(golden.at(lhs.row, lhs.col) == expected, lhs.to_string());
    nonzero += expected.is_zero() ? 0 : 1;
  }
  CHECK(nonzero == 40);
}

TEST_CASE("third-form constraints") {
  const auto tabulated = iiihat_constraints(2);
  const auto printed = test::read_relations("third_form_k2.txt");
  REQUIRE(tabulated.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(proportional(tabulated[i], printed[i]));
  for (const auto& r : tabulated)
    for (const auto& [g, c] : r.terms) {
      CHECK(g.row >= 5);
      CHECK(g.col >= 5);
    }
  CHECK_THROWS_AS(iiihat_constraints(4), std::invalid_argument);

  const QuadraticFormSet q = qmu_from_normal_form(2);
  const auto replayed = replay_iiihat(q, tabulated_probe_directions());
  CHECK(same_span(replayed, printed));

  // Probing every direction pair finds further independent constraints containing the tabulated ones.
  const auto everything = replay_iiihat(q, all_probe_directions(4));
  CHECK(spans_subset(printed, everything));
  CHECK_FALSE(spans_subset(everything, printed));
  CHECK(all_probe_directions(4).size() == 4 + 2 * 6);
}

TEST_CASE("span comparisons") {
  const auto x = std::vector{LinearRelation::parse("w5,5 = w6,6"), LinearRelation::parse("w6,6 = w7,7")};
  const auto y = std::vector{LinearRelation::parse("w5,5 = w7,7"), LinearRelation::parse("2*w5,5 = 2*w6,6")};
  CHECK(same_span(x, y));
  CHECK(spans_subset({LinearRelation::parse("w6,6 - w7,7 = 0")}, x));
  CHECK_FALSE(spans_subset({LinearRelation::parse("w6,6 = 0")}, x));
}

}  // TEST_SUITE
