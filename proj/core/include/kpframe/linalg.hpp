#pragma once

#include <map>
#include <optional>
#include <vector>

#include "kpframe/polynomial.hpp"

namespace kpf {

// Dense matrix over the rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * std::size_t(cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return a_[std::size_t(i) * std::size_t(cols_) + std::size_t(j)]; }
  const Rational& operator()(int i, int j) const { return a_[std::size_t(i) * std::size_t(cols_) + std::size_t(j)]; }

  RationalMatrix transpose() const;
  friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y);
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

  // In-place reduced row-echelon form; returns the pivot columns.
  std::vector<int> rref();
  int rank() const;
  // Basis of {x : M x = 0}, one vector per free column.
  std::vector<std::vector<Rational>> nullspace() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> a_;
};

// Solves M c = rhs where the right-hand sides are polynomials. Returns nullopt if a row of M reduces to
// zero while its right-hand side does not; free columns (rank deficiency) are set to zero.
std::optional<std::vector<Polynomial>> solve_polynomial_rhs(RationalMatrix m, std::vector<Polynomial> rhs);

// Row echelon basis built one sparse row at a time; rows in the span of earlier rows are dropped.
class SparseEchelon {
 public:
  using Row = std::map<int, Rational>;

  // Returns true if the row was independent of the rows inserted so far.
  bool insert(Row row);
  std::size_t rank() const { return pivots_.size(); }
  // Basis of the kernel over columns 0..cols-1, obtained from the fully reduced echelon form.
  std::vector<Row> nullspace(int cols) const;

 private:
  void reduce(Row& row) const;
  std::map<int, Row> pivots_;  // pivot column -> row with leading entry 1 at that column
};

}  // namespace kpf
