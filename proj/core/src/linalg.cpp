#include "kpframe/linalg.hpp"

#include <stdexcept>

namespace kpf {

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
  if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
  RationalMatrix out(x.rows_, y.cols_);
  for (int i = 0; i < x.rows_; ++i)
    for (int t = 0; t < x.cols_; ++t) {
      const Rational& v = x(i, t);
      if (sgn(v) == 0) continue;
      for (int j = 0; j < y.cols_; ++j) out(i, j) += v * y(t, j);
    }
  return out;
}

std::vector<int> RationalMatrix::rref() {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols_ && r < rows_; ++c) {
    int p = -1;
    for (int i = r; i < rows_; ++i)
      if (sgn((*this)(i, c)) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
    const Rational inv = 1 / (*this)(r, c);
    for (int j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == r || sgn((*this)(i, c)) == 0) continue;
      const Rational f = (*this)(i, c);
      for (int j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int RationalMatrix::rank() const {
  RationalMatrix copy = *this;
  return static_cast<int>(copy.rref().size());
}

std::vector<std::vector<Rational>> RationalMatrix::nullspace() const {
  RationalMatrix r = *this;
  const auto pivots = r.rref();
  std::vector<bool> is_pivot(std::size_t(cols_), false);
  for (int c : pivots) is_pivot[std::size_t(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < cols_; ++f) {
    if (is_pivot[std::size_t(f)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols_));
    v[std::size_t(f)] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[std::size_t(pivots[i])] = -r(int(i), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Polynomial>> solve_polynomial_rhs(RationalMatrix m, std::vector<Polynomial> rhs) {
  if (static_cast<int>(rhs.size()) != m.rows()) throw std::invalid_argument("right-hand side size mismatch");
  const int rows = m.rows();
  const int cols = m.cols();
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(m(i, c)) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < cols; ++j) std::swap(m(p, j), m(r, j));
      std::swap(rhs[std::size_t(p)], rhs[std::size_t(r)]);
    }
    const Rational inv = 1 / m(r, c);
    for (int j = c; j < cols; ++j) m(r, j) *= inv;
    rhs[std::size_t(r)] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (int j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
      rhs[std::size_t(i)].add_scaled(rhs[std::size_t(r)], -f);
    }
    pivots.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!rhs[std::size_t(i)].is_zero()) return std::nullopt;
  std::vector<Polynomial> out(static_cast<std::size_t>(cols));
  for (std::size_t i = 0; i < pivots.size(); ++i) out[std::size_t(pivots[i])] = std::move(rhs[i]);
  return out;
}

void SparseEchelon::reduce(Row& row) const {
  // Eliminate pivot columns in increasing order; elimination only introduces larger columns.
  auto it = row.begin();
  while (it != row.end()) {
    auto pv = pivots_.find(it->first);
    if (pv == pivots_.end()) {
      ++it;
      continue;
    }
    const Rational f = it->second;
    const int col = it->first;
    for (const auto& [c, v] : pv->second) {
      Rational& slot = row[c];
      slot -= f * v;
    }
    row.erase(col);
    for (auto jt = row.begin(); jt != row.end();) jt = sgn(jt->second) == 0 ? row.erase(jt) : std::next(jt);
    it = row.upper_bound(col);
  }
}

bool SparseEchelon::insert(Row row) {
  for (auto it = row.begin(); it != row.end();) it = sgn(it->second) == 0 ? row.erase(it) : std::next(it);
  reduce(row);
  if (row.empty()) return false;
  const int lead = row.begin()->first;
  const Rational inv = 1 / row.begin()->second;
  for (auto& [c, v] : row) v *= inv;
  pivots_.emplace(lead, std::move(row));
  return true;
}

std::vector<SparseEchelon::Row> SparseEchelon::nullspace(int cols) const {
  // Back-substitute to reduced form, largest pivot first.
  std::map<int, Row> reduced;
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    Row row = it->second;
    for (auto jt = std::next(row.begin()); jt != row.end();) {
      auto pv = reduced.find(jt->first);
      if (pv == reduced.end()) {
        ++jt;
        continue;
      }
      const Rational f = jt->second;
      const int col = jt->first;
      for (const auto& [c, v] : pv->second) row[c] -= f * v;
      row.erase(col);
      for (auto kt = std::next(row.begin()); kt != row.end();)
        kt = sgn(kt->second) == 0 ? row.erase(kt) : std::next(kt);
      jt = row.upper_bound(col);
    }
    reduced.emplace(it->first, std::move(row));
  }
  std::vector<Row> basis;
  for (int f = 0; f < cols; ++f) {
    if (reduced.count(f)) continue;
    Row v;
    v[f] = 1;
    for (const auto& [p, row] : reduced) {
      auto e = row.find(f);
      if (e != row.end()) v[p] = -e->second;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace kpf
