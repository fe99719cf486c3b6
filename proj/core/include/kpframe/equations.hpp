#pragma once

#include <map>
#include <string>
#include <vector>

#include "kpframe/connection.hpp"

namespace kpf {

struct Equation {
  Polynomial poly;  // asserted = 0, canonical form
  std::vector<std::string> provenance;
};

// Polynomial equations, deduplicated after canonicalisation. Tracks how many coefficient slots were
// generated (raw), how many of those were identically zero, and how many were nonzero before dedup.
class EquationSystem {
 public:
  void add(const Polynomial& p, const std::string& tag);
  // Rebuilds a system from stored equations and counters (deserialization).
  static EquationSystem restore(std::vector<Equation> eqs, std::size_t raw, std::size_t zero);
  void append(const EquationSystem& other);

  const std::vector<Equation>& equations() const { return eqs_; }
  std::size_t size() const { return eqs_.size(); }
  bool empty() const { return eqs_.empty(); }
  std::size_t raw_count() const { return raw_; }
  std::size_t zero_count() const { return zero_; }
  std::size_t nonzero_count() const { return raw_ - zero_; }

  bool contains(const Polynomial& p) const;

 private:
  std::vector<Equation> eqs_;
  std::map<Polynomial, std::size_t> index_;
  std::size_t raw_ = 0;
  std::size_t zero_ = 0;
};

// d(sum c_g w_g) expanded in the coframe; one equation per basis pair w_p ^ w_q (p < q).
EquationSystem differentiate_relation(const LinearRelation& rel, const RewriteSystem& rs);

// Relation lhs = rhs with rhs in basis span; symbolic coefficients on rhs are rejected.
EquationSystem differentiate_relation(FormGenerator lhs, const OneForm& rhs, const RewriteSystem& rs);

// Differentiates every relation, fanning out over worker threads; the merge order is the input order.
EquationSystem differentiate_relations(const std::vector<LinearRelation>& rels, const RewriteSystem& rs,
                                       int workers = 0);

// Coefficient equations of an expanded one-form that must vanish: one per basis form w_i.
void add_vanishing_coefficients(EquationSystem& sys, const OneForm& expanded, int n, const std::string& tag);

// Worker count from KPFRAME_WORKERS, defaulting to the hardware concurrency (at least 1).
int default_worker_count();

}  // namespace kpf
