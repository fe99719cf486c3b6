#include "kpframe/polynomial.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kpf {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  if (s.empty()) throw std::invalid_argument("empty rational");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    const bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
    if (!ok) throw std::invalid_argument("bad rational literal '" + std::string(text) + "'");
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::from_symbols(Storage syms) {
  std::sort(syms.begin(), syms.end());
  Monomial m;
  m.syms_ = std::move(syms);
  return m;
}

int Monomial::count(Symbol s) const {
  return static_cast<int>(std::count(syms_.begin(), syms_.end(), s));
}

Monomial Monomial::without(Symbol s) const {
  Monomial m = *this;
  auto it = std::find(m.syms_.begin(), m.syms_.end(), s);
  if (it == m.syms_.end()) throw std::logic_error("symbol not in monomial");
  m.syms_.erase(it);
  return m;
}

Monomial operator*(const Monomial& x, const Monomial& y) {
  Monomial m;
  m.syms_.resize(x.syms_.size() + y.syms_.size());
  std::merge(x.syms_.begin(), x.syms_.end(), y.syms_.begin(), y.syms_.end(), m.syms_.begin());
  return m;
}

std::strong_ordering operator<=>(const Monomial& x, const Monomial& y) {
  // Graded: lower degree first, then lexicographic on the sorted symbol keys.
  if (x.syms_.size() != y.syms_.size()) return x.syms_.size() <=> y.syms_.size();
  return std::lexicographical_compare_three_way(x.syms_.begin(), x.syms_.end(), y.syms_.begin(), y.syms_.end());
}

std::string Monomial::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < syms_.size(); ++i) {
    if (i) out += '*';
    out += syms_[i].to_string();
  }
  return out;
}

// ---------------------------------------------------------------- Polynomial

namespace {

using Term = Polynomial::Term;

bool term_less(const Term& x, const Term& y) { return x.first < y.first; }

// Sorts and combines like terms, dropping zeros.
std::vector<Term> normalize(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_less);
  std::vector<Term> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (!out.empty() && out.back().first == t.first) {
      out.back().second += t.second;
    } else {
      if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
  return out;
}

// Merges y*c into x.
std::vector<Term> merge_scaled(const std::vector<Term>& x, const std::vector<Term>& y, const Rational& c) {
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, y[j].second * c);
      ++j;
    } else {
      Rational v = x[i].second + y[j].second * c;
      if (sgn(v) != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace_back(Monomial(), c);
}

Polynomial Polynomial::variable(Symbol s) { return term(Monomial(s), Rational(1)); }

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p;
  if (sgn(c) != 0) p.terms_.emplace_back(m, c);
  return p;
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.front().first.is_one()) return terms_.front().second;
  return Rational(0);
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(terms_.back().first.degree());
}

std::set<Symbol> Polynomial::symbols() const {
  std::set<Symbol> out;
  for (const auto& [m, c] : terms_) out.insert(m.symbols().begin(), m.symbols().end());
  return out;
}

bool Polynomial::contains(Symbol s) const {
  for (const auto& [m, c] : terms_)
    if (m.contains(s)) return true;
  return false;
}

Rational Polynomial::linear_coefficient(Symbol s) const {
  for (const auto& [m, c] : terms_)
    if (m.degree() == 1 && m.symbols()[0] == s) return c;
  return Rational(0);
}

bool Polynomial::nonlinear_in(Symbol s) const {
  for (const auto& [m, c] : terms_)
    if (m.degree() >= 2 && m.contains(s)) return true;
  return false;
}

Polynomial Polynomial::coefficient_of(Symbol s) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_)
    if (m.count(s) == 1) out.emplace_back(m.without(s), c);
  return Polynomial(normalize(std::move(out)));
}

Polynomial Polynomial::without(Symbol s) const {
  std::vector<Term> out;
  for (const auto& t : terms_)
    if (!t.first.contains(s)) out.push_back(t);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::substitute(const std::function<const Polynomial*(Symbol)>& lookup) const {
  std::vector<Term> kept;
  Polynomial replaced;
  for (const auto& [m, c] : terms_) {
    bool touched = false;
    for (Symbol s : m.symbols())
      if (lookup(s)) {
        touched = true;
        break;
      }
    if (!touched) {
      kept.emplace_back(m, c);
      continue;
    }
    Polynomial acc(c);
    for (Symbol s : m.symbols()) {
      const Polynomial* v = lookup(s);
      acc *= v ? *v : variable(s);
      if (acc.is_zero()) break;
    }
    replaced += acc;
  }
  Polynomial result(std::move(kept));  // kept preserves sorted order
  result += replaced;
  return result;
}

Polynomial Polynomial::substitute(const std::map<Symbol, Polynomial>& values) const {
  if (values.empty()) return *this;
  return substitute([&](Symbol s) -> const Polynomial* {
    auto it = values.find(s);
    return it == values.end() ? nullptr : &it->second;
  });
}

Polynomial Polynomial::substitute(Symbol s, const Polynomial& value) const {
  if (!contains(s)) return *this;
  return substitute([&](Symbol t) -> const Polynomial* { return t == s ? &value : nullptr; });
}

Polynomial Polynomial::derivative(Symbol s) const {
  std::vector<Term> out;
  for (const auto& [m, c] : terms_) {
    const int e = m.count(s);
    if (e > 0) out.emplace_back(m.without(s), c * e);
  }
  return Polynomial(normalize(std::move(out)));
}

Polynomial Polynomial::canonical() const {
  if (terms_.empty()) return *this;
  mpz_class den_lcm = 1;
  mpz_class num_gcd = 0;
  for (const auto& [m, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (sgn(terms_.back().second) < 0) scale = -scale;
  Polynomial out = *this;
  out *= scale;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) return *this = other;
  terms_ = merge_scaled(terms_, other.terms_, Rational(1));
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  terms_ = merge_scaled(terms_, other.terms_, Rational(-1));
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

void Polynomial::add_scaled(const Polynomial& other, const Rational& c) {
  if (other.terms_.empty() || sgn(c) == 0) return;
  terms_ = merge_scaled(terms_, other.terms_, c);
}

void Polynomial::add_product(const Polynomial& x, const Polynomial& y, const Rational& c) {
  if (x.terms_.empty() || y.terms_.empty() || sgn(c) == 0) return;
  std::vector<Term> prod;
  prod.reserve(x.terms_.size() * y.terms_.size());
  for (const auto& [mx, cx] : x.terms_)
    for (const auto& [my, cy] : y.terms_) prod.emplace_back(mx * my, cx * cy * c);
  terms_ = merge_scaled(terms_, normalize(std::move(prod)), Rational(1));
}

Polynomial operator*(const Polynomial& x, const Polynomial& y) {
  Polynomial out;
  out.add_product(x, y);
  return out;
}

Polynomial operator-(Polynomial x) {
  for (auto& t : x.terms_) t.second = -t.second;
  return x;
}

std::strong_ordering operator<=>(const Polynomial& x, const Polynomial& y) {
  const std::size_t n = std::min(x.terms_.size(), y.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = x.terms_[i].first <=> y.terms_[i].first; c != 0) return c;
    const int d = cmp(x.terms_[i].second, y.terms_[i].second);
    if (d != 0) return d < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return x.terms_.size() <=> y.terms_.size();
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = sgn(c) < 0;
    Rational mag = abs(c);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += m.to_string();
    }
  }
  return out;
}

Polynomial Polynomial::parse(std::string_view text) {
  std::vector<Term> terms;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip_ws();
  if (text.substr(pos) == "0") return {};
  while (pos < text.size()) {
    int sign = 1;
    skip_ws();
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip_ws();
    }
    std::size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != ' ' &&
           !(text[end] == '-' && end > pos && text[end - 1] != '^'))
      ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    if (chunk.empty()) throw std::invalid_argument("empty term in polynomial '" + std::string(text) + "'");
    Rational coeff(sign);
    Monomial::Storage syms;
    std::size_t start = 0;
    while (start <= chunk.size()) {
      std::size_t star = chunk.find('*', start);
      if (star == std::string_view::npos) star = chunk.size();
      std::string_view factor = chunk.substr(start, star - start);
      if (factor.empty()) throw std::invalid_argument("empty factor in polynomial");
      if (factor.front() >= '0' && factor.front() <= '9')
        coeff *= parse_rational(factor);
      else
        syms.push_back(Symbol::parse(factor));
      start = star + 1;
    }
    terms.emplace_back(Monomial::from_symbols(std::move(syms)), coeff);
    pos = end;
    skip_ws();
  }
  return Polynomial(normalize(std::move(terms)));
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

}  // namespace kpf
