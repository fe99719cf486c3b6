#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "kpframe/polynomial.hpp"

namespace kpf {

// The abstract connection form w_{row,col}. Ordered lexicographically on (row, col).
struct FormGenerator {
  std::uint8_t row = 0;
  std::uint8_t col = 0;

  FormGenerator() = default;
  FormGenerator(int r, int c);

  // w_{0,alpha}, alpha >= 1.
  static FormGenerator basis(int alpha) { return {0, alpha}; }
  bool is_basis(int n) const { return row == 0 && col >= 1 && col <= n; }

  std::string to_string() const;  // "w1,5"
  static FormGenerator parse(std::string_view text);

  friend bool operator==(FormGenerator, FormGenerator) = default;
  friend auto operator<=>(FormGenerator x, FormGenerator y) {
    return std::pair(x.row, x.col) <=> std::pair(y.row, y.col);
  }
};

class OneForm {
 public:
  using Map = std::map<FormGenerator, Polynomial>;

  OneForm() = default;
  OneForm(FormGenerator g);  // NOLINT(google-explicit-constructor)
  static OneForm term(FormGenerator g, const Polynomial& coeff);

  bool is_zero() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }
  Polynomial coefficient(FormGenerator g) const;

  // True iff every generator present is a basis form w_{0,alpha}, 1 <= alpha <= n.
  bool is_basis_span(int n) const;
  // Every coefficient is a rational constant.
  bool has_constant_coefficients() const;

  void add(FormGenerator g, const Polynomial& coeff);
  void add_scaled(const OneForm& other, const Polynomial& coeff);
  void add_scaled(const OneForm& other, const Rational& coeff);

  OneForm& operator+=(const OneForm& other);
  OneForm& operator-=(const OneForm& other);
  friend OneForm operator+(OneForm x, const OneForm& y) { return x += y; }
  friend OneForm operator-(OneForm x, const OneForm& y) { return x -= y; }
  friend OneForm operator*(const Polynomial& p, const OneForm& f);
  friend OneForm operator-(const OneForm& f);
  friend bool operator==(const OneForm&, const OneForm&) = default;

  OneForm map_coefficients(const std::function<Polynomial(const Polynomial&)>& fn) const;

  std::string to_string() const;
  static OneForm parse(std::string_view text);

 private:
  Map terms_;
};

// 2-form over generator pairs (g, h) with g < h.
class TwoForm {
 public:
  using Key = std::pair<FormGenerator, FormGenerator>;
  using Map = std::map<Key, Polynomial>;

  bool is_zero() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }

  // Adds coeff * (g ^ h); stores under the ordered pair with the sign flipped if g > h; drops g == h.
  void add(FormGenerator g, FormGenerator h, const Polynomial& coeff);
  void add_scaled(const TwoForm& other, const Rational& c);

  TwoForm& operator+=(const TwoForm& other);
  TwoForm& operator-=(const TwoForm& other);
  friend TwoForm operator+(TwoForm x, const TwoForm& y) { return x += y; }
  friend TwoForm operator-(TwoForm x, const TwoForm& y) { return x -= y; }
  friend bool operator==(const TwoForm&, const TwoForm&) = default;

  std::string to_string() const;

 private:
  Map terms_;
};

// Bilinear antisymmetric product.
TwoForm wedge(const OneForm& f, const OneForm& g);
// Accumulates coeff * (f ^ g) into out.
void wedge_into(TwoForm& out, const OneForm& f, const OneForm& g, const Rational& coeff = Rational(1));

// Coefficient of each basis pair w_p ^ w_q (p < q). Throws if a non-basis generator is present.
std::map<std::pair<int, int>, Polynomial> collect(const TwoForm& tf, int n);

}  // namespace kpf
