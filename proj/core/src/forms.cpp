#include "kpframe/forms.hpp"

#include <charconv>
#include <stdexcept>

namespace kpf {

FormGenerator::FormGenerator(int r, int c) {
  if (r < 0 || r > 255 || c < 0 || c > 255) throw std::out_of_range("form generator index out of range");
  row = static_cast<std::uint8_t>(r);
  col = static_cast<std::uint8_t>(c);
}

std::string FormGenerator::to_string() const { return "w" + std::to_string(row) + "," + std::to_string(col); }

FormGenerator FormGenerator::parse(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("cannot parse form generator '" + std::string(text) + "'"); };
  if (text.size() < 4 || text.front() != 'w') fail();
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) fail();
  int r = 0, c = 0;
  auto [p1, e1] = std::from_chars(text.data() + 1, text.data() + comma, r);
  auto [p2, e2] = std::from_chars(text.data() + comma + 1, text.data() + text.size(), c);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != text.data() + comma || p2 != text.data() + text.size()) fail();
  return {r, c};
}

// ---------------------------------------------------------------- OneForm

OneForm::OneForm(FormGenerator g) { terms_.emplace(g, Polynomial(1)); }

OneForm OneForm::term(FormGenerator g, const Polynomial& coeff) {
  OneForm f;
  f.add(g, coeff);
  return f;
}

Polynomial OneForm::coefficient(FormGenerator g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Polynomial() : it->second;
}

bool OneForm::is_basis_span(int n) const {
  for (const auto& [g, p] : terms_)
    if (!g.is_basis(n)) return false;
  return true;
}

bool OneForm::has_constant_coefficients() const {
  for (const auto& [g, p] : terms_)
    if (!p.is_constant()) return false;
  return true;
}

void OneForm::add(FormGenerator g, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(g, coeff);
  if (inserted) return;
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

void OneForm::add_scaled(const OneForm& other, const Polynomial& coeff) {
  if (coeff.is_zero()) return;
  for (const auto& [g, p] : other.terms_) add(g, p * coeff);
}

void OneForm::add_scaled(const OneForm& other, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  for (const auto& [g, p] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(g);
    it->second.add_scaled(p, coeff);
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OneForm& OneForm::operator+=(const OneForm& other) {
  add_scaled(other, Rational(1));
  return *this;
}

OneForm& OneForm::operator-=(const OneForm& other) {
  add_scaled(other, Rational(-1));
  return *this;
}

OneForm operator*(const Polynomial& p, const OneForm& f) {
  OneForm out;
  out.add_scaled(f, p);
  return out;
}

OneForm operator-(const OneForm& f) {
  OneForm out;
  out.add_scaled(f, Rational(-1));
  return out;
}

OneForm OneForm::map_coefficients(const std::function<Polynomial(const Polynomial&)>& fn) const {
  OneForm out;
  for (const auto& [g, p] : terms_) out.add(g, fn(p));
  return out;
}

std::string OneForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, p] : terms_) {
    if (p.size() == 1) {
      const auto& [m, c] = p.terms().front();
      const bool negative = sgn(c) < 0;
      out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
      Rational mag = abs(c);
      if (!m.is_one()) out += (mag != 1 ? mag.get_str() + "*" : "") + m.to_string() + "*";
      else if (mag != 1) out += mag.get_str() + "*";
    } else {
      out += first ? "(" : " + (";
      out += p.to_string() + ")*";
    }
    out += g.to_string();
    first = false;
  }
  return out;
}

OneForm OneForm::parse(std::string_view text) {
  OneForm out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip_ws();
  if (text.substr(pos) == "0") return out;
  while (pos < text.size()) {
    int sign = 1;
    skip_ws();
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip_ws();
    }
    Polynomial coeff(sign);
    if (pos < text.size() && text[pos] == '(') {
      const auto close = text.find(')', pos);
      if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != '*')
        throw std::invalid_argument("bad parenthesised coefficient in one-form");
      coeff *= Polynomial::parse(text.substr(pos + 1, close - pos - 1));
      pos = close + 2;
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '+' && text[end] != '-') ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    const auto wpos = chunk.rfind('w');
    if (wpos == std::string_view::npos) throw std::invalid_argument("one-form term without generator");
    if (wpos > 0) {
      if (chunk[wpos - 1] != '*') throw std::invalid_argument("expected '*' before generator");
      coeff *= Polynomial::parse(chunk.substr(0, wpos - 1));
    }
    out.add(FormGenerator::parse(chunk.substr(wpos)), coeff);
    pos = end;
    skip_ws();
  }
  return out;
}

// ---------------------------------------------------------------- TwoForm

void TwoForm::add(FormGenerator g, FormGenerator h, const Polynomial& coeff) {
  if (g == h || coeff.is_zero()) return;
  Key key = g < h ? Key{g, h} : Key{h, g};
  auto [it, inserted] = terms_.try_emplace(key);
  it->second.add_scaled(coeff, Rational(g < h ? 1 : -1));
  if (it->second.is_zero()) terms_.erase(it);
}

void TwoForm::add_scaled(const TwoForm& other, const Rational& c) {
  if (sgn(c) == 0) return;
  for (const auto& [key, p] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(key);
    it->second.add_scaled(p, c);
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TwoForm& TwoForm::operator+=(const TwoForm& other) {
  add_scaled(other, Rational(1));
  return *this;
}

TwoForm& TwoForm::operator-=(const TwoForm& other) {
  add_scaled(other, Rational(-1));
  return *this;
}

std::string TwoForm::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, p] : terms_) {
    if (!first) out += " + ";
    out += "(" + p.to_string() + ")*" + key.first.to_string() + "^" + key.second.to_string();
    first = false;
  }
  return out;
}

void wedge_into(TwoForm& out, const OneForm& f, const OneForm& g, const Rational& coeff) {
  for (const auto& [gf, pf] : f.terms()) {
    for (const auto& [gg, pg] : g.terms()) {
      if (gf == gg) continue;
      Polynomial prod;
      prod.add_product(pf, pg, coeff);
      out.add(gf, gg, prod);
    }
  }
}

TwoForm wedge(const OneForm& f, const OneForm& g) {
  TwoForm out;
  wedge_into(out, f, g);
  return out;
}

std::map<std::pair<int, int>, Polynomial> collect(const TwoForm& tf, int n) {
  std::map<std::pair<int, int>, Polynomial> out;
  for (const auto& [key, p] : tf.terms()) {
    if (!key.first.is_basis(n) || !key.second.is_basis(n))
      throw std::invalid_argument("collect: non-basis generator in " + key.first.to_string() + "^" +
                                  key.second.to_string());
    out.emplace(std::pair<int, int>(key.first.col, key.second.col), p);
  }
  return out;
}

}  // namespace kpf
