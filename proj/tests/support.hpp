#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpframe/connection.hpp"
#include "kpframe/forms.hpp"
#include "kpframe/poly_matrix.hpp"
#include "kpframe/polynomial.hpp"
#include "kpframe/rewrite.hpp"

namespace kpf::test {

inline std::string data_path(const std::string& name) { return std::string(KPFRAME_TEST_DATA) + "/" + name; }

// Non-empty, non-comment lines of a data file.
inline std::vector<std::string> data_lines(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing test data " + name);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline std::vector<std::vector<std::string>> data_cells(const std::string& name) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : data_lines(name)) {
    std::istringstream is(line);
    std::vector<std::string> row;
    std::string cell;
    while (is >> cell) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

inline PolyMatrix read_poly_matrix(const std::string& name) {
  const auto cells = data_cells(name);
  PolyMatrix m(int(cells.size()), int(cells.at(0).size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = Polynomial::parse(cells.at(std::size_t(i)).at(std::size_t(j)));
  return m;
}

inline ConnectionMatrix read_connection(const std::string& name, int k) {
  const auto cells = data_cells(name);
  ConnectionMatrix m(DarbouxContext::for_k(k));
  if (int(cells.size()) != m.size()) throw std::runtime_error(name + ": wrong row count");
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) m.set(i, j, OneForm::parse(cells.at(std::size_t(i)).at(std::size_t(j))));
  return m;
}

inline std::vector<LinearRelation> read_relations(const std::string& name) {
  std::vector<LinearRelation> out;
  for (const auto& line : data_lines(name)) out.push_back(LinearRelation::parse(line, line));
  return out;
}

inline std::vector<Polynomial> read_polynomials(const std::string& name) {
  std::vector<Polynomial> out;
  for (const auto& line : data_lines(name)) out.push_back(Polynomial::parse(line));
  return out;
}

template <class Lookup>
double evaluate(const Polynomial& p, const Lookup& value) {
  double total = 0;
  for (const auto& [m, c] : p.terms()) {
    double t = c.get_d();
    for (Symbol s : m.symbols()) t *= value(s);
    total += t;
  }
  return total;
}

// Hand-rolled generators. Everything is driven by an explicit seed so failures replay.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  double real(double lo = -1, double hi = 1) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Rational rational(int span = 5) {
    Rational q(integer(-span, span));
    q /= integer(1, 3);
    return q;
  }

  // Sparse polynomial in generic symbols x1..x_nsym of degree <= 2.
  Polynomial polynomial(int nsym = 4, int max_terms = 3) {
    Polynomial p;
    const int terms = integer(0, max_terms);
    for (int t = 0; t < terms; ++t) {
      Monomial::Storage syms;
      const int deg = integer(0, 2);
      for (int d = 0; d < deg; ++d) syms.push_back(Symbol::generic(integer(1, nsym)));
      p += Polynomial::term(Monomial::from_symbols(syms), rational());
    }
    return p;
  }

  FormGenerator generator(int dim) { return {integer(0, dim - 1), integer(0, dim - 1)}; }

  OneForm one_form(int dim, int max_terms = 4) {
    OneForm f;
    const int terms = integer(0, max_terms);
    for (int t = 0; t < terms; ++t) f.add(generator(dim), polynomial());
    return f;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace kpf::test
