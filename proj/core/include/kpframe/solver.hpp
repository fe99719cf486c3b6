#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kpframe/equations.hpp"

namespace kpf {

// Triangular assignments (no assigned symbol occurs in any right side) plus equations that could not be
// solved linearly.
struct Substitution {
  std::map<Symbol, Polynomial> assignments;
  std::vector<Polynomial> residual;

  Polynomial apply(const Polynomial& p) const { return p.substitute(assignments); }
  OneForm apply(const OneForm& f) const;
  bool empty() const { return assignments.empty() && residual.empty(); }
};

class InconsistentSystem : public std::runtime_error {
 public:
  InconsistentSystem(const std::string& what, std::vector<std::string> tags)
      : std::runtime_error(what), tags_(std::move(tags)) {}
  const std::vector<std::string>& tags() const { return tags_; }

 private:
  std::vector<std::string> tags_;
};

// Which reduced equations may supply a pivot.
enum class PivotPolicy {
  AnyLinearOccurrence,  // any equation in which some unknown occurs linearly with a constant coefficient
  LinearEquationsOnly,  // only equations of total degree <= 1 after reduction
};

// Incremental exact elimination. Unknowns are pivoted in the caller's priority order; a symbol is a
// pivot candidate only if it occurs linearly with a constant coefficient. Equations with no candidate
// wait in the residual and are retried whenever new pivots appear, until nothing changes.
class LinearSolver {
 public:
  explicit LinearSolver(const std::vector<Symbol>& unknown_order,
                        PivotPolicy policy = PivotPolicy::AnyLinearOccurrence);

  void add(const EquationSystem& sys);
  void add(const Polynomial& p, const std::string& tag);
  void add_all(std::vector<std::pair<Polynomial, std::vector<std::string>>> eqs);

  Polynomial reduce(const Polynomial& p) const;
  bool is_unknown(Symbol s) const { return priority_.count(s) > 0; }
  const std::map<Symbol, Polynomial>& assignments() const { return assign_; }
  std::vector<Polynomial> residual() const;
  Substitution result() const;

 private:
  void eliminate(Symbol v, const Polynomial& p);
  bool pick_pivot(const Polynomial& p, Symbol& out) const;

  std::unordered_map<Symbol, std::size_t> priority_;
  PivotPolicy policy_;
  std::map<Symbol, Polynomial> assign_;
  std::unordered_map<Symbol, std::unordered_set<Symbol>> users_;
  std::vector<std::pair<Polynomial, std::vector<std::string>>> residual_;
};

// Sequential elimination of sys in the given pivot order. Deterministic given (sys, unknowns).
Substitution solve_linear(const EquationSystem& sys, const std::vector<Symbol>& unknowns,
                          PivotPolicy policy = PivotPolicy::AnyLinearOccurrence);

}  // namespace kpf
