#pragma once

#include <array>
#include <string>
#include <vector>

#include "kpframe/algebra.hpp"
#include "kpframe/linalg.hpp"
#include "kpframe/poly_matrix.hpp"
#include "kpframe/rewrite.hpp"

namespace kpf {

// Signed index table of the 8x8 Hurwitz family: entry v means sign(v) * s_|v|.
const std::array<std::array<int, 8>, 8>& hurwitz_table();

// Upper-left k x k block of the family, symbolic in s_1..s_k.
PolyMatrix hurwitz_family(int k);
// Same block evaluated at rational s (s has length k).
RationalMatrix hurwitz_B(int k, const std::vector<Rational>& s);

// Normal-form parameters in normal-index order: w1, s_1..s_k, w2 -> 2k+1 .. 3k+2.
std::vector<Symbol> normal_parameters(int k);

// [[w1 I, D B D], [(D B D)^T, w2 I]] with D = diag(1, -1, .., -1).
PolyMatrix shape_operator_family(int k);

// Q_mu = sum q_{alpha beta mu} w_alpha w_beta for mu = n+1..N, with q symmetric in alpha, beta.
struct QuadraticFormSet {
  int k = 0;
  DarbouxContext ctx;
  std::vector<RationalMatrix> q;  // q[mu - n - 1](alpha - 1, beta - 1)

  const RationalMatrix& at(int mu) const { return q.at(std::size_t(mu - ctx.n - 1)); }
  // "1/2*(w1*w1 + w2*w2)" style rendering of Q_mu.
  std::string form_to_string(int mu) const;
};

QuadraticFormSet qmu_from_normal_form(int k);

// w_{alpha mu} = sum_beta q_{alpha beta mu} w_beta, one relation per (alpha, mu).
std::vector<LinearRelation> relations_from_qmu(const QuadraticFormSet& q);

// The vanishing third-form constraints as printed for k = 2: w5,8 = 0, w8,5 = 0 and three mixed relations.
// Throws std::invalid_argument for any other k.
std::vector<LinearRelation> iiihat_constraints(int k);

// Tangent directions as coefficient vectors over v_1..v_n.
using Direction = std::vector<Rational>;
// v_a, then v_a + v_b and v_a - v_b for a < b.
std::vector<Direction> all_probe_directions(int n);
// v_1..v_4, v_1 + v_3, v_1 + v_4, v_2 + v_3: the choices that give the tabulated k = 2 constraints.
std::vector<Direction> tabulated_probe_directions();

// Mechanical re-derivation of the third-form constraints from q: for each direction w, the normal vector
// d^2 A_0 / dw^2 = sum_mu c_mu A_mu is differentiated and projected onto the annihilator of II(w, T).
// Returns one relation per (w, annihilator vector).
std::vector<LinearRelation> replay_iiihat(const QuadraticFormSet& q, const std::vector<Direction>& directions);

// True if both relation lists span the same space of linear forms.
bool same_span(const std::vector<LinearRelation>& x, const std::vector<LinearRelation>& y);
// True if every relation of x lies in the span of y.
bool spans_subset(const std::vector<LinearRelation>& x, const std::vector<LinearRelation>& y);

}  // namespace kpf
