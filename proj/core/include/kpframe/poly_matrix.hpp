#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kpframe/polynomial.hpp"

namespace kpf {

// Dense matrix with Polynomial entries.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(std::size_t(rows) * std::size_t(cols)) {}
  static PolyMatrix identity(int n) {
    PolyMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Polynomial(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Polynomial& at(int i, int j) { return e_[index(i, j)]; }
  const Polynomial& at(int i, int j) const { return e_[index(i, j)]; }

  PolyMatrix transpose() const {
    PolyMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }
  PolyMatrix substitute(const std::map<Symbol, Polynomial>& values) const {
    PolyMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].substitute(values);
    return out;
  }
  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (!(at(i, j) == at(j, i))) return false;
    return true;
  }

  friend PolyMatrix operator*(const PolyMatrix& x, const PolyMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
    PolyMatrix out(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int j = 0; j < y.cols_; ++j) {
        Polynomial acc;
        for (int t = 0; t < x.cols_; ++t) acc.add_product(x.at(i, t), y.at(t, j));
        out.at(i, j) = std::move(acc);
      }
    return out;
  }
  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    return std::size_t(i) * std::size_t(cols_) + std::size_t(j);
  }
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Polynomial> e_;
};

}  // namespace kpf
