#pragma once

#include <vector>

#include "kpframe/rewrite.hpp"

namespace kpf {

// (N+1)x(N+1) matrix of one-forms with dA_j = sum_k w_{jk} A_k: entry (j,k) is the A_k-component of dA_j.
class ConnectionMatrix {
 public:
  explicit ConnectionMatrix(DarbouxContext ctx);

  // Entry (i,j) = w_{ij}, with the Darboux zeros in row 0.
  static ConnectionMatrix generic(DarbouxContext ctx);
  // Entry (i,j) = generator-level normal form of w_{ij} under rs.
  static ConnectionMatrix from_rewrite(const RewriteSystem& rs);

  const DarbouxContext& context() const { return ctx_; }
  int size() const { return ctx_.dim(); }
  const OneForm& at(int i, int j) const { return entries_[index(i, j)]; }
  void set(int i, int j, OneForm f) { entries_[index(i, j)] = std::move(f); }

  // Row 0 is (w_00, w_1..w_n, 0..0).
  bool satisfies_darboux() const;

  ConnectionMatrix map(const std::function<OneForm(const OneForm&)>& fn) const;

  friend bool operator==(const ConnectionMatrix&, const ConnectionMatrix&) = default;

 private:
  std::size_t index(int i, int j) const;
  DarbouxContext ctx_;
  std::vector<OneForm> entries_;
};

// d w_{ij} = sum_k Omega_{ik} ^ Omega_{kj}, using the entries of omega (so Darboux zeros and any
// rewritten entries are honoured).
TwoForm structure_differential(FormGenerator g, const ConnectionMatrix& omega);

// Same identity, fully expanded in the coframe using rs.
TwoForm expanded_structure_differential(FormGenerator g, const RewriteSystem& rs);

}  // namespace kpf
