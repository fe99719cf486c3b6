#include "kpframe/equations.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace kpf {

void EquationSystem::add(const Polynomial& p, const std::string& tag) {
  ++raw_;
  if (p.is_zero()) {
    ++zero_;
    return;
  }
  Polynomial c = p.canonical();
  auto it = index_.find(c);
  if (it != index_.end()) {
    eqs_[it->second].provenance.push_back(tag);
    return;
  }
  index_.emplace(c, eqs_.size());
  eqs_.push_back(Equation{std::move(c), {tag}});
}

EquationSystem EquationSystem::restore(std::vector<Equation> eqs, std::size_t raw, std::size_t zero) {
  if (zero > raw || eqs.size() > raw - zero) throw std::invalid_argument("equation counters are inconsistent");
  EquationSystem out;
  out.raw_ = raw;
  out.zero_ = zero;
  for (auto& eq : eqs) {
    if (!out.index_.emplace(eq.poly, out.eqs_.size()).second) throw std::invalid_argument("duplicate equation");
    out.eqs_.push_back(std::move(eq));
  }
  return out;
}

void EquationSystem::append(const EquationSystem& other) {
  raw_ += other.raw_;
  zero_ += other.zero_;
  for (const auto& eq : other.eqs_) {
    auto it = index_.find(eq.poly);
    if (it != index_.end()) {
      auto& prov = eqs_[it->second].provenance;
      prov.insert(prov.end(), eq.provenance.begin(), eq.provenance.end());
      continue;
    }
    index_.emplace(eq.poly, eqs_.size());
    eqs_.push_back(eq);
  }
}

bool EquationSystem::contains(const Polynomial& p) const {
  return !p.is_zero() && index_.count(p.canonical()) > 0;
}

EquationSystem differentiate_relation(const LinearRelation& rel, const RewriteSystem& rs) {
  const int n = rs.context().n;
  TwoForm total;
  for (const auto& [g, c] : rel.terms) total.add_scaled(expanded_structure_differential(g, rs), c);
  const auto coeffs = collect(total, n);
  EquationSystem sys;
  const std::string label = rel.label.empty() ? rel.to_string() : rel.label;
  for (int p = 1; p <= n; ++p)
    for (int q = p + 1; q <= n; ++q) {
      auto it = coeffs.find({p, q});
      sys.add(it == coeffs.end() ? Polynomial() : it->second,
              label + " : w" + std::to_string(p) + "^w" + std::to_string(q));
    }
  return sys;
}

EquationSystem differentiate_relation(FormGenerator lhs, const OneForm& rhs, const RewriteSystem& rs) {
  if (!rhs.has_constant_coefficients())
    throw std::invalid_argument("unsupported relation: symbolic coefficient on right side of " + lhs.to_string());
  if (!rhs.is_basis_span(rs.context().n))
    throw std::invalid_argument("right side of " + lhs.to_string() + " is not in the basis span");
  return differentiate_relation(LinearRelation::from_forms(OneForm(lhs), rhs), rs);
}

int default_worker_count() {
  if (const char* env = std::getenv("KPFRAME_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

EquationSystem differentiate_relations(const std::vector<LinearRelation>& rels, const RewriteSystem& rs,
                                       int workers) {
  if (workers <= 0) workers = default_worker_count();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(rels.size())));
  std::vector<EquationSystem> parts(rels.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < rels.size(); ++i) parts[i] = differentiate_relation(rels[i], rs);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = std::size_t(w); i < rels.size(); i += std::size_t(workers))
          parts[i] = differentiate_relation(rels[i], rs);
      });
    for (auto& t : pool) t.join();
  }
  EquationSystem out;
  for (const auto& part : parts) out.append(part);
  return out;
}

void add_vanishing_coefficients(EquationSystem& sys, const OneForm& expanded, int n, const std::string& tag) {
  for (int i = 1; i <= n; ++i)
    sys.add(expanded.coefficient(FormGenerator::basis(i)), tag + " : w" + std::to_string(i));
  for (const auto& [g, p] : expanded.terms())
    if (!g.is_basis(n)) throw std::invalid_argument("add_vanishing_coefficients: form not in basis span");
}

}  // namespace kpf
