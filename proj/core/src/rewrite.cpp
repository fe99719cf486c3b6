#include "kpframe/rewrite.hpp"

#include <stdexcept>

namespace kpf {

void DarbouxContext::check(FormGenerator g) const {
  if (!in_range(g))
    throw std::out_of_range("generator " + g.to_string() + " outside frame of size " + std::to_string(dim()));
}

// ---------------------------------------------------------------- LinearRelation

LinearRelation LinearRelation::parse(std::string_view text, std::string label) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("relation needs '=': " + std::string(text));
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  return from_forms(OneForm::parse(trim(text.substr(0, eq))), OneForm::parse(trim(text.substr(eq + 1))),
                    std::move(label));
}

LinearRelation LinearRelation::from_forms(const OneForm& lhs, const OneForm& rhs, std::string label) {
  if (!lhs.has_constant_coefficients() || !rhs.has_constant_coefficients())
    throw std::invalid_argument("unsupported relation: symbolic coefficient in " + lhs.to_string() + " = " +
                                rhs.to_string());
  LinearRelation rel;
  rel.label = std::move(label);
  OneForm diff = lhs - rhs;
  for (const auto& [g, p] : diff.terms()) rel.terms.emplace(g, p.constant_term());
  return rel;
}

OneForm LinearRelation::as_form() const {
  OneForm f;
  for (const auto& [g, c] : terms) f.add(g, Polynomial(c));
  return f;
}

std::string LinearRelation::to_string() const { return as_form().to_string() + " = 0"; }

// ---------------------------------------------------------------- RewriteSystem

RewriteSystem::RewriteSystem(DarbouxContext ctx, int generation) : ctx_(ctx), generation_(generation) {
  if (ctx_.n < 1 || ctx_.N < ctx_.n) throw std::invalid_argument("invalid Darboux context");
  rebuild_cache();
}

RewriteSystem RewriteSystem::from_relations(DarbouxContext ctx, const std::vector<LinearRelation>& relations,
                                            int generation) {
  RewriteSystem rs(ctx, generation);
  return rs.with_relations(relations);
}

RewriteSystem RewriteSystem::with_relations(const std::vector<LinearRelation>& relations) const {
  RewriteSystem out = *this;
  for (const auto& rel : relations) out.insert(rel);
  out.rebuild_cache();
  return out;
}

RewriteSystem RewriteSystem::with_generation(int generation) const {
  RewriteSystem out = *this;
  out.generation_ = generation;
  out.rebuild_cache();
  return out;
}

RewriteSystem RewriteSystem::without_generic_expansion(FormGenerator g) const {
  RewriteSystem out = *this;
  out.no_generic_.insert(g);
  out.rebuild_cache();
  return out;
}

bool RewriteSystem::is_free(FormGenerator g) const {
  return !ctx_.is_basis(g) && !ctx_.is_zero(g) && !has_rule(g);
}

void RewriteSystem::insert(const LinearRelation& rel) {
  // Reduce by existing pivots, dropping identically-zero generators.
  Rhs row;
  for (const auto& [g, c] : rel.terms) {
    ctx_.check(g);
    if (ctx_.is_zero(g) || sgn(c) == 0) continue;
    auto it = rules_.find(g);
    if (it == rules_.end()) {
      row[g] += c;
      if (sgn(row[g]) == 0) row.erase(g);
      continue;
    }
    for (const auto& [h, v] : it->second) {
      row[h] += c * v;
      if (sgn(row[h]) == 0) row.erase(h);
    }
  }
  if (row.empty()) return;
  const FormGenerator pivot = row.rbegin()->first;
  if (ctx_.is_basis(pivot))
    throw std::invalid_argument("relation '" + rel.label + "' forces a linear dependency among basis forms");
  const Rational lead = row.rbegin()->second;
  row.erase(pivot);
  Rhs rhs;
  for (const auto& [h, v] : row) rhs.emplace(h, -v / lead);
  for (auto& [q, qrhs] : rules_) {
    auto it = qrhs.find(pivot);
    if (it == qrhs.end()) continue;
    const Rational cq = it->second;
    qrhs.erase(it);
    for (const auto& [h, v] : rhs) {
      qrhs[h] += cq * v;
      if (sgn(qrhs[h]) == 0) qrhs.erase(h);
    }
  }
  rules_.emplace(pivot, std::move(rhs));
}

void RewriteSystem::rebuild_cache() {
  const int dim = ctx_.dim();
  cache_.assign(std::size_t(dim * dim), OneForm());
  cache_ok_.assign(std::size_t(dim * dim), true);
  auto generic = [&](FormGenerator g) {
    OneForm f;
    for (int i = 1; i <= ctx_.n; ++i) f.add(FormGenerator::basis(i), Polynomial::variable(b(g, i)));
    return f;
  };
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const FormGenerator g(r, c);
      OneForm& slot = cache_[std::size_t(r * dim + c)];
      if (ctx_.is_basis(g)) {
        slot = OneForm(g);
      } else if (ctx_.is_zero(g)) {
        slot = OneForm();
      } else if (auto it = rules_.find(g); it != rules_.end()) {
        for (const auto& [h, v] : it->second) {
          if (ctx_.is_basis(h)) {
            slot.add(h, Polynomial(v));
          } else if (no_generic_.count(h)) {
            cache_ok_[std::size_t(r * dim + c)] = false;
          } else {
            slot.add_scaled(generic(h), v);
          }
        }
      } else if (no_generic_.count(g)) {
        cache_ok_[std::size_t(r * dim + c)] = false;
      } else {
        slot = generic(g);
      }
    }
  }
}

OneForm RewriteSystem::rewrite(FormGenerator g) const {
  ctx_.check(g);
  if (ctx_.is_zero(g)) return {};
  if (auto it = rules_.find(g); it != rules_.end()) {
    OneForm f;
    for (const auto& [h, v] : it->second) f.add(h, Polynomial(v));
    return f;
  }
  return OneForm(g);
}

OneForm RewriteSystem::rewrite(const OneForm& f) const {
  OneForm out;
  for (const auto& [g, p] : f.terms()) out.add_scaled(rewrite(g), p);
  return out;
}

const OneForm& RewriteSystem::expand(FormGenerator g) const {
  ctx_.check(g);
  const std::size_t idx = std::size_t(g.row * ctx_.dim() + g.col);
  if (!cache_ok_[idx])
    throw std::logic_error("no rule for " + g.to_string() + " and generic expansion is disabled");
  return cache_[idx];
}

OneForm RewriteSystem::expand(const OneForm& f) const {
  OneForm out;
  for (const auto& [g, p] : f.terms()) out.add_scaled(expand(g), p);
  return out;
}

TwoForm RewriteSystem::expand(const TwoForm& tf) const {
  TwoForm out;
  for (const auto& [key, p] : tf.terms()) {
    const OneForm& x = expand(key.first);
    const OneForm& y = expand(key.second);
    for (const auto& [gx, px] : x.terms())
      for (const auto& [gy, py] : y.terms()) {
        if (gx == gy) continue;
        out.add(gx, gy, px * py * p);
      }
  }
  return out;
}

std::vector<FormGenerator> RewriteSystem::free_generators() const {
  std::vector<FormGenerator> out;
  for (int r = 0; r < ctx_.dim(); ++r)
    for (int c = 0; c < ctx_.dim(); ++c)
      if (is_free(FormGenerator(r, c))) out.emplace_back(r, c);
  return out;
}

std::vector<Symbol> RewriteSystem::b_symbols() const {
  std::vector<Symbol> out;
  for (FormGenerator g : free_generators())
    if (!no_generic_.count(g))
      for (int i = 1; i <= ctx_.n; ++i) out.push_back(b(g, i));
  return out;
}

std::vector<LinearRelation> RewriteSystem::rules_as_relations() const {
  std::vector<LinearRelation> out;
  for (const auto& [pivot, rhs] : rules_) {
    LinearRelation rel;
    rel.terms.emplace(pivot, Rational(1));
    for (const auto& [h, v] : rhs) rel.terms.emplace(h, -v);
    rel.label = "rule " + pivot.to_string();
    out.push_back(std::move(rel));
  }
  return out;
}

}  // namespace kpf
