#pragma once

#include <vector>

#include "kpframe/connection.hpp"

namespace kpf {

// New frame A~ = T A with T unipotent. The witness is an index ordering under which T is unit lower
// triangular, so T^{-1} has polynomial entries.
class FrameChange {
 public:
  explicit FrameChange(int dim);
  static FrameChange identity(int dim) { return FrameChange(dim); }

  int dim() const { return dim_; }
  const Polynomial& at(int i, int j) const { return t_[std::size_t(i * dim_ + j)]; }
  void set(int i, int j, Polynomial p);

  // Empty if T is not unipotent (non-unit diagonal or a cycle among off-diagonal entries).
  std::vector<int> witness() const;
  bool is_unipotent() const { return !witness().empty(); }

  FrameChange inverse() const;
  // (this * other): applying other first, then this.
  FrameChange compose_after(const FrameChange& other) const;

  // Change parameters appearing in T.
  std::vector<Symbol> parameters() const;

  friend bool operator==(const FrameChange&, const FrameChange&) = default;

 private:
  int dim_;
  std::vector<Polynomial> t_;
};

// Omega~ = (dT + T Omega) T^{-1}. dT uses derivative symbols p_{;i} times basis forms w_i.
ConnectionMatrix apply_frame_change(const ConnectionMatrix& omega, const FrameChange& fc);

// d of a polynomial in change parameters: sum over parameters p of (dP/dp) * sum_i p_{;i} w_i.
OneForm differential(const Polynomial& p, int n);

}  // namespace kpf
