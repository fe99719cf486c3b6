#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kpframe/forms.hpp"

namespace kpf {

// Frame {A_0; A_1..A_n; A_{n+1}..A_N}. w_{0,alpha} (1 <= alpha <= n) is the coframe basis and
// w_{0,mu} (mu > n) vanishes identically.
struct DarbouxContext {
  int n = 0;
  int N = 0;

  static DarbouxContext for_k(int k) { return {2 * k, 3 * k + 2}; }
  int dim() const { return N + 1; }
  bool is_basis(FormGenerator g) const { return g.is_basis(n); }
  bool is_zero(FormGenerator g) const { return g.row == 0 && g.col > n; }
  bool in_range(FormGenerator g) const { return g.row <= N && g.col <= N; }
  void check(FormGenerator g) const;

  friend bool operator==(const DarbouxContext&, const DarbouxContext&) = default;
};

// sum_g c_g w_g = 0 with rational constant coefficients.
struct LinearRelation {
  std::map<FormGenerator, Rational> terms;
  std::string label;

  LinearRelation() = default;
  LinearRelation(std::map<FormGenerator, Rational> t, std::string l = {}) : terms(std::move(t)), label(std::move(l)) {}

  // "w1,5 = 1/2*w0,1", "w5,8 = 0", "w5,5 + 2*w6,5 = w5,6".
  static LinearRelation parse(std::string_view text, std::string label = {});
  // Builds lhs - rhs = 0; rhs must have constant coefficients.
  static LinearRelation from_forms(const OneForm& lhs, const OneForm& rhs, std::string label = {});

  OneForm as_form() const;
  bool empty() const { return terms.empty(); }
  std::string to_string() const;
};

// Known relations in reduced row-echelon form. Each rule maps a pivot generator (the largest generator
// of its relation) to a rational combination of non-pivot generators, so one application is final.
// Unruled generators expand to sum_i b^i_{jk} w_i with b-symbols tagged by the frame generation.
class RewriteSystem {
 public:
  using Rhs = std::map<FormGenerator, Rational>;

  explicit RewriteSystem(DarbouxContext ctx, int generation = 0);
  static RewriteSystem from_relations(DarbouxContext ctx, const std::vector<LinearRelation>& relations,
                                      int generation = 0);

  RewriteSystem with_relations(const std::vector<LinearRelation>& relations) const;
  RewriteSystem with_generation(int generation) const;
  // Disables generic b-expansion for g; expanding g without a rule then throws.
  RewriteSystem without_generic_expansion(FormGenerator g) const;

  const DarbouxContext& context() const { return ctx_; }
  int generation() const { return generation_; }
  const std::map<FormGenerator, Rhs>& rules() const { return rules_; }
  bool has_rule(FormGenerator g) const { return rules_.count(g) > 0; }
  bool is_free(FormGenerator g) const;

  // Generator-level normal form: zero, the basis form itself, the rule's right side, or g.
  OneForm rewrite(FormGenerator g) const;
  OneForm rewrite(const OneForm& f) const;

  // Basis-span expansion.
  const OneForm& expand(FormGenerator g) const;
  OneForm expand(const OneForm& f) const;
  TwoForm expand(const TwoForm& tf) const;

  Symbol b(FormGenerator g, int i) const { return Symbol::b(g.row, g.col, i, generation_); }

  // Non-basis, non-zero, non-pivot generators in generator order.
  std::vector<FormGenerator> free_generators() const;
  // b-symbols of all free generators, in generator order then basis index.
  std::vector<Symbol> b_symbols() const;

  std::vector<LinearRelation> rules_as_relations() const;

 private:
  void insert(const LinearRelation& rel);
  void rebuild_cache();

  DarbouxContext ctx_;
  int generation_ = 0;
  std::map<FormGenerator, Rhs> rules_;
  std::set<FormGenerator> no_generic_;
  std::vector<OneForm> cache_;
  std::vector<bool> cache_ok_;
};

}  // namespace kpf
