#include "kpframe/connection.hpp"

#include <stdexcept>

namespace kpf {

ConnectionMatrix::ConnectionMatrix(DarbouxContext ctx) : ctx_(ctx), entries_(std::size_t(ctx.dim() * ctx.dim())) {}

std::size_t ConnectionMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw std::out_of_range("connection matrix index out of range");
  return std::size_t(i * size() + j);
}

ConnectionMatrix ConnectionMatrix::generic(DarbouxContext ctx) {
  ConnectionMatrix m(ctx);
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      const FormGenerator g(i, j);
      if (!ctx.is_zero(g)) m.set(i, j, OneForm(g));
    }
  return m;
}

ConnectionMatrix ConnectionMatrix::from_rewrite(const RewriteSystem& rs) {
  ConnectionMatrix m(rs.context());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) m.set(i, j, rs.rewrite(FormGenerator(i, j)));
  return m;
}

bool ConnectionMatrix::satisfies_darboux() const {
  for (int j = 1; j < size(); ++j) {
    const FormGenerator g(0, j);
    if (ctx_.is_basis(g) ? !(at(0, j) == OneForm(g)) : !at(0, j).is_zero()) return false;
  }
  return true;
}

ConnectionMatrix ConnectionMatrix::map(const std::function<OneForm(const OneForm&)>& fn) const {
  ConnectionMatrix out(ctx_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = fn(entries_[i]);
  return out;
}

TwoForm structure_differential(FormGenerator g, const ConnectionMatrix& omega) {
  omega.context().check(g);
  TwoForm out;
  for (int k = 0; k < omega.size(); ++k) {
    const OneForm& x = omega.at(g.row, k);
    if (x.is_zero()) continue;
    const OneForm& y = omega.at(k, g.col);
    if (y.is_zero()) continue;
    wedge_into(out, x, y);
  }
  return out;
}

TwoForm expanded_structure_differential(FormGenerator g, const RewriteSystem& rs) {
  const auto& ctx = rs.context();
  ctx.check(g);
  TwoForm out;
  for (int k = 0; k <= ctx.N; ++k) {
    const OneForm& x = rs.expand(FormGenerator(g.row, k));
    if (x.is_zero()) continue;
    const OneForm& y = rs.expand(FormGenerator(k, g.col));
    if (y.is_zero()) continue;
    wedge_into(out, x, y);
  }
  return out;
}

}  // namespace kpf
