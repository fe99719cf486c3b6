#include "kpframe/frame_change.hpp"

#include <set>
#include <stdexcept>

namespace kpf {

FrameChange::FrameChange(int dim) : dim_(dim), t_(std::size_t(dim * dim)) {
  if (dim < 1) throw std::invalid_argument("frame change dimension must be positive");
  for (int i = 0; i < dim; ++i) t_[std::size_t(i * dim + i)] = Polynomial(1);
}

void FrameChange::set(int i, int j, Polynomial p) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw std::out_of_range("frame change index out of range");
  t_[std::size_t(i * dim_ + j)] = std::move(p);
}

std::vector<int> FrameChange::witness() const {
  for (int i = 0; i < dim_; ++i)
    if (!(at(i, i) == Polynomial(1))) return {};
  // Row i depends on column j (T[i][j] != 0): j must precede i. Kahn's algorithm, smallest index first.
  std::vector<int> indeg(std::size_t(dim_), 0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && !at(i, j).is_zero()) ++indeg[std::size_t(i)];
  std::vector<int> order;
  std::set<int> ready;
  for (int i = 0; i < dim_; ++i)
    if (indeg[std::size_t(i)] == 0) ready.insert(i);
  while (!ready.empty()) {
    const int j = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(j);
    for (int i = 0; i < dim_; ++i)
      if (i != j && !at(i, j).is_zero() && --indeg[std::size_t(i)] == 0) ready.insert(i);
  }
  if (static_cast<int>(order.size()) != dim_) return {};
  return order;
}

FrameChange FrameChange::inverse() const {
  const auto order = witness();
  if (order.empty()) throw std::invalid_argument("frame change is not unipotent");
  // T X = I by forward substitution along the witness: X[i][*] = e_i - sum_{j != i} T[i][j] X[j][*].
  FrameChange inv(dim_);
  for (int i : order) {
    for (int c = 0; c < dim_; ++c) {
      Polynomial acc = (i == c) ? Polynomial(1) : Polynomial();
      for (int j = 0; j < dim_; ++j) {
        if (j == i || at(i, j).is_zero()) continue;
        const Polynomial& xj = inv.at(j, c);
        if (xj.is_zero()) continue;
        acc.add_product(at(i, j), xj, Rational(-1));
      }
      inv.set(i, c, std::move(acc));
    }
  }
  return inv;
}

FrameChange FrameChange::compose_after(const FrameChange& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("frame change dimension mismatch");
  FrameChange out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Polynomial acc;
      for (int t = 0; t < dim_; ++t) acc.add_product(at(i, t), other.at(t, j));
      out.set(i, j, std::move(acc));
    }
  return out;
}

std::vector<Symbol> FrameChange::parameters() const {
  std::set<Symbol> syms;
  for (const auto& p : t_)
    for (Symbol s : p.symbols()) syms.insert(s);
  return {syms.begin(), syms.end()};
}

OneForm differential(const Polynomial& p, int n) {
  OneForm out;
  for (Symbol s : p.symbols()) {
    const Polynomial partial = p.derivative(s);
    for (int i = 1; i <= n; ++i)
      out.add(FormGenerator::basis(i), partial * Polynomial::variable(Symbol::derivative(s, i)));
  }
  return out;
}

ConnectionMatrix apply_frame_change(const ConnectionMatrix& omega, const FrameChange& fc) {
  const int dim = omega.size();
  if (fc.dim() != dim) throw std::invalid_argument("frame change dimension mismatch");
  const FrameChange inv = fc.inverse();
  const int n = omega.context().n;
  // M = dT + T Omega
  std::vector<OneForm> m(std::size_t(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      OneForm f = fc.at(i, j).is_constant() ? OneForm() : differential(fc.at(i, j), n);
      for (int t = 0; t < dim; ++t) {
        if (fc.at(i, t).is_zero()) continue;
        const OneForm& w = omega.at(t, j);
        if (!w.is_zero()) f.add_scaled(w, fc.at(i, t));
      }
      m[std::size_t(i * dim + j)] = std::move(f);
    }
  ConnectionMatrix out(omega.context());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      OneForm f;
      for (int t = 0; t < dim; ++t) {
        if (inv.at(t, j).is_zero()) continue;
        const OneForm& mt = m[std::size_t(i * dim + t)];
        if (!mt.is_zero()) f.add_scaled(mt, inv.at(t, j));
      }
      out.set(i, j, std::move(f));
    }
  return out;
}

}  // namespace kpf
