#pragma once

#include <boost/container/small_vector.hpp>

#include <compare>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kpframe/rational.hpp"
#include "kpframe/symbol.hpp"

namespace kpf {

// Commutative monomial: sorted multiset of symbols.
class Monomial {
 public:
  using Storage = boost::container::small_vector<Symbol, 4>;

  Monomial() = default;
  explicit Monomial(Symbol s) { syms_.push_back(s); }
  static Monomial from_symbols(Storage syms);

  std::size_t degree() const { return syms_.size(); }
  bool is_one() const { return syms_.empty(); }
  const Storage& symbols() const { return syms_; }
  int count(Symbol s) const;
  bool contains(Symbol s) const { return count(s) > 0; }
  // Removes one occurrence of s; s must be present.
  Monomial without(Symbol s) const;

  friend Monomial operator*(const Monomial& x, const Monomial& y);
  friend bool operator==(const Monomial& x, const Monomial& y) { return x.syms_ == y.syms_; }
  friend std::strong_ordering operator<=>(const Monomial& x, const Monomial& y);

  std::string to_string() const;

 private:
  Storage syms_;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Terms are kept sorted by monomial with no zero coefficients, so equality is structural.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Polynomial(int c) : Polynomial(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  static Polynomial variable(Symbol s);
  static Polynomial term(const Monomial& m, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
  Rational constant_term() const;
  int degree() const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  std::set<Symbol> symbols() const;
  bool contains(Symbol s) const;
  // Coefficient of the degree-one monomial s (zero if absent).
  Rational linear_coefficient(Symbol s) const;
  // True if s appears in some monomial of degree >= 2.
  bool nonlinear_in(Symbol s) const;
  // Sum of terms whose monomial contains s exactly once, divided by s. Used to split p = s*q + r.
  Polynomial coefficient_of(Symbol s) const;
  Polynomial without(Symbol s) const;

  Polynomial substitute(const std::function<const Polynomial*(Symbol)>& lookup) const;
  Polynomial substitute(const std::map<Symbol, Polynomial>& values) const;
  Polynomial substitute(Symbol s, const Polynomial& value) const;

  // Partial derivative with respect to s.
  Polynomial derivative(Symbol s) const;

  // Primitive integer form with positive leading coefficient (leading = largest monomial).
  Polynomial canonical() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  Polynomial& operator*=(const Polynomial& other);
  // this += c * other, the hot path of all elimination loops.
  void add_scaled(const Polynomial& other, const Rational& c);
  void add_product(const Polynomial& x, const Polynomial& y, const Rational& c = Rational(1));

  friend Polynomial operator+(Polynomial x, const Polynomial& y) { return x += y; }
  friend Polynomial operator-(Polynomial x, const Polynomial& y) { return x -= y; }
  friend Polynomial operator*(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator*(Polynomial x, const Rational& c) { return x *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial x) { return x *= c; }
  friend Polynomial operator-(Polynomial x);

  friend bool operator==(const Polynomial& x, const Polynomial& y) { return x.terms_ == y.terms_; }
  friend std::strong_ordering operator<=>(const Polynomial& x, const Polynomial& y);

  std::string to_string() const;
  static Polynomial parse(std::string_view text);

 private:
  explicit Polynomial(std::vector<Term> sorted_terms) : terms_(std::move(sorted_terms)) {}
  std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

}  // namespace kpf
