#include "kpframe/solver.hpp"

#include <limits>

namespace kpf {

OneForm Substitution::apply(const OneForm& f) const {
  return f.map_coefficients([&](const Polynomial& p) { return apply(p); });
}

LinearSolver::LinearSolver(const std::vector<Symbol>& unknown_order, PivotPolicy policy) : policy_(policy) {
  for (std::size_t i = 0; i < unknown_order.size(); ++i) priority_.emplace(unknown_order[i], i);
}

Polynomial LinearSolver::reduce(const Polynomial& p) const {
  if (assign_.empty()) return p;
  return p.substitute([&](Symbol s) -> const Polynomial* {
    auto it = assign_.find(s);
    return it == assign_.end() ? nullptr : &it->second;
  });
}

bool LinearSolver::pick_pivot(const Polynomial& p, Symbol& out) const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  if (policy_ == PivotPolicy::LinearEquationsOnly && p.degree() > 1) return false;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() != 1) continue;
    const Symbol s = m.symbols()[0];
    auto it = priority_.find(s);
    if (it == priority_.end() || it->second >= best) continue;
    if (p.nonlinear_in(s)) continue;
    best = it->second;
    out = s;
  }
  return best != std::numeric_limits<std::size_t>::max();
}

void LinearSolver::eliminate(Symbol v, const Polynomial& p) {
  const Rational c = p.linear_coefficient(v);
  Polynomial rhs = p - Polynomial::variable(v) * c;
  rhs *= Rational(-1) / c;
  if (auto it = users_.find(v); it != users_.end()) {
    const std::unordered_set<Symbol> affected = std::move(it->second);
    users_.erase(it);
    for (Symbol u : affected) {
      Polynomial& old = assign_.at(u);
      Polynomial updated = old.substitute(v, rhs);
      for (Symbol s : rhs.symbols()) users_[s].insert(u);
      for (Symbol s : old.symbols())
        if (s != v && !updated.contains(s)) users_[s].erase(u);
      old = std::move(updated);
    }
  }
  for (Symbol s : rhs.symbols()) users_[s].insert(v);
  assign_.emplace(v, std::move(rhs));
}

void LinearSolver::add_all(std::vector<std::pair<Polynomial, std::vector<std::string>>> eqs) {
  auto pending = std::move(eqs);
  for (auto& r : residual_) pending.push_back(std::move(r));
  residual_.clear();
  bool progress = true;
  while (progress) {
    progress = false;
    std::vector<std::pair<Polynomial, std::vector<std::string>>> next;
    for (auto& [p, tags] : pending) {
      Polynomial q = reduce(p);
      if (q.is_zero()) continue;
      if (q.is_constant()) {
        std::string msg = "inconsistent system: " + q.to_string() + " = 0";
        if (!tags.empty()) msg += " (from " + tags.front() + ")";
        throw InconsistentSystem(msg, tags);
      }
      Symbol v;
      if (pick_pivot(q, v)) {
        eliminate(v, q);
        progress = true;
      } else {
        next.emplace_back(std::move(q), std::move(tags));
      }
    }
    pending = std::move(next);
  }
  residual_ = std::move(pending);
}

void LinearSolver::add(const EquationSystem& sys) {
  std::vector<std::pair<Polynomial, std::vector<std::string>>> eqs;
  eqs.reserve(sys.size());
  for (const auto& eq : sys.equations()) eqs.emplace_back(eq.poly, eq.provenance);
  add_all(std::move(eqs));
}

void LinearSolver::add(const Polynomial& p, const std::string& tag) {
  add_all({{p, {tag}}});
}

std::vector<Polynomial> LinearSolver::residual() const {
  std::vector<Polynomial> out;
  out.reserve(residual_.size());
  for (const auto& [p, tags] : residual_) out.push_back(reduce(p));
  return out;
}

Substitution LinearSolver::result() const { return Substitution{assign_, residual()}; }

Substitution solve_linear(const EquationSystem& sys, const std::vector<Symbol>& unknowns, PivotPolicy policy) {
  LinearSolver solver(unknowns, policy);
  solver.add(sys);
  return solver.result();
}

}  // namespace kpf
