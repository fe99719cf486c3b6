#include "kpframe/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "kpframe/embedding.hpp"
#include "kpframe/linalg.hpp"
#include "kpframe/normal_form.hpp"

namespace kpf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void emit(const PipelineLog& log, const std::string& msg) {
  if (log) log(msg);
}

SystemCounts counts_of(const EquationSystem& sys) {
  return {sys.raw_count(), sys.zero_count(), sys.size()};
}

std::vector<LinearRelation> concat(std::vector<LinearRelation> x, const std::vector<LinearRelation>& y) {
  x.insert(x.end(), y.begin(), y.end());
  return x;
}

// b-symbols of larger generators are eliminated first, so the smaller names survive.
std::vector<Symbol> b_order(const RewriteSystem& rs) {
  std::vector<Symbol> syms = rs.b_symbols();
  std::sort(syms.begin(), syms.end(), [](Symbol x, Symbol y) {
    const auto kx = std::tuple(-x.index(0), -x.index(1), x.index(2));
    const auto ky = std::tuple(-y.index(0), -y.index(1), y.index(2));
    return kx < ky;
  });
  return syms;
}

LinearSolver solve_b(const EquationSystem& sys, const RewriteSystem& rs, const std::string& stage) {
  LinearSolver solver(b_order(rs), PivotPolicy::LinearEquationsOnly);
  try {
    solver.add(sys);
  } catch (const InconsistentSystem& e) {
    throw StageFailure(stage, e.what(), e.tags());
  }
  return solver;
}

OneForm relation_on(const ConnectionMatrix& omega, const LinearRelation& rel) {
  OneForm out;
  for (const auto& [g, c] : rel.terms) out.add_scaled(omega.at(g.row, g.col), c);
  return out;
}

// Coefficient equations of every relation on the changed matrix, reduced by the b-solution.
EquationSystem relation_equations(const RewriteSystem& rs, const LinearSolver& bsol, const ConnectionMatrix& changed,
                                  const std::vector<LinearRelation>& rels, const std::string& prefix) {
  EquationSystem sys;
  const int n = rs.context().n;
  for (const auto& r : rels) {
    const OneForm e = rs.expand(relation_on(changed, r));
    const std::string tag = prefix + " " + (r.label.empty() ? r.to_string() : r.label);
    for (int i = 1; i <= n; ++i) sys.add(bsol.reduce(e.coefficient(FormGenerator::basis(i))), tag + " : w" + std::to_string(i));
  }
  return sys;
}

std::vector<Symbol> parameter_order(const StageSpec& spec) {
  std::vector<Symbol> out;
  for (const auto& p : spec.placements) out.push_back(p.param);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Everything a stage needs in its current frame.
struct StageFrame {
  std::vector<LinearRelation> relations;
  RewriteSystem rs;
  EquationSystem carried;
  EquationSystem axioms;
  LinearSolver bsol;
  ConnectionMatrix changed;
};

StageFrame build_frame(const PipelineState& state, const StageSpec& spec) {
  auto rels = concat(state.relations, spec.axioms);
  RewriteSystem rs = RewriteSystem::from_relations(state.ctx, rels, state.generation);
  EquationSystem carried = differentiate_relations(state.relations, rs, default_worker_count());
  EquationSystem axioms = differentiate_relations(spec.axioms, rs, default_worker_count());
  EquationSystem all = carried;
  all.append(axioms);
  LinearSolver bsol = solve_b(all, rs, spec.name);
  ConnectionMatrix changed = apply_frame_change(ConnectionMatrix::from_rewrite(rs), spec.frame_change(state.ctx.dim()));
  return {std::move(rels), std::move(rs), std::move(carried), std::move(axioms), std::move(bsol), std::move(changed)};
}

std::vector<std::string> target_failures(const StageFrame& f, const StageSpec& spec,
                                         const std::map<Symbol, Polynomial>& values) {
  std::vector<std::string> out;
  const EquationSystem sys = relation_equations(f.rs, f.bsol, f.changed, spec.targets, "target");
  for (const auto& eq : sys.equations()) {
    const Polynomial r = f.bsol.reduce(eq.poly.substitute(values));
    if (!r.is_zero()) out.push_back(eq.provenance.front() + " : " + r.to_string());
  }
  return out;
}

std::map<Symbol, Polynomial> published_in(const RewriteSystem& rs, const StageSpec& spec) {
  std::map<Symbol, Polynomial> out;
  for (const auto& [param, terms] : spec.published) {
    Polynomial p;
    for (const auto& t : terms) p.add_scaled(rs.expand(t.gen).coefficient(FormGenerator::basis(t.basis)), t.coeff);
    out.emplace(param, std::move(p));
  }
  return out;
}

// Null vectors of the linear b-normal forms of the free generators give relations among them.
std::vector<LinearRelation> discover(const RewriteSystem& rs, const LinearSolver& bsol) {
  const int n = rs.context().n;
  const auto gens = rs.free_generators();
  std::map<Symbol, int> free_index;
  std::vector<std::vector<Polynomial>> nf(gens.size());
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (int i = 1; i <= n; ++i) {
      Polynomial p = bsol.reduce(Polynomial::variable(rs.b(gens[c], i)));
      if (p.degree() > 1) throw std::logic_error("nonlinear b normal form for " + gens[c].to_string());
      for (Symbol s : p.symbols()) free_index.emplace(s, 0);
      nf[c].push_back(std::move(p));
    }
  int next = 0;
  for (auto& [s, idx] : free_index) idx = next++;

  // Row (i, f): coefficient of free symbol f in b^i_g, one column per generator.
  std::map<int, SparseEchelon::Row> rows;
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (int i = 0; i < n; ++i)
      for (const auto& [m, coeff] : nf[c][std::size_t(i)].terms()) {
        if (m.is_one()) continue;
        rows[i * next + free_index.at(m.symbols()[0])][int(c)] = coeff;
      }
  SparseEchelon ech;
  for (auto& [key, row] : rows) ech.insert(std::move(row));

  std::vector<LinearRelation> out;
  for (const auto& v : ech.nullspace(int(gens.size()))) {
    LinearRelation rel;
    for (const auto& [c, coeff] : v) rel.terms[gens[std::size_t(c)]] = coeff;
    for (int i = 0; i < n; ++i) {
      Rational k;
      for (const auto& [c, coeff] : v) k += coeff * nf[std::size_t(c)][std::size_t(i)].constant_term();
      if (sgn(k) != 0) rel.terms[FormGenerator::basis(i + 1)] -= k;
    }
    rel.label = "consequence";
    out.push_back(std::move(rel));
  }
  return out;
}

LinearRelation rel(const std::string& text, const std::string& label = {}) {
  return LinearRelation::parse(text, label.empty() ? text : label);
}

PublishedTerm term(int coeff, int basis, int row, int col) { return {Rational(coeff), basis, FormGenerator(row, col)}; }

}  // namespace

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::Init: return "init";
    case Stage::AfterChange1: return "after-change-1";
    case Stage::AfterChange2: return "after-change-2";
    case Stage::AfterChange3: return "after-change-3";
    case Stage::AfterChange4: return "after-change-4";
    case Stage::Solved: return "solved";
  }
  return "unknown";
}

FrameChange StageSpec::frame_change(int dim) const {
  FrameChange fc(dim);
  for (const auto& p : placements) fc.set(p.row, p.col, Polynomial::variable(p.param));
  return fc;
}

PipelineState init_state(int k) {
  check_algebra_dim(k);
  PipelineState s;
  s.k = k;
  s.ctx = DarbouxContext::for_k(k);
  s.relations = relations_from_qmu(qmu_from_normal_form(k));
  s.rs = RewriteSystem::from_relations(s.ctx, s.relations, 0);
  StageRecord rec;
  rec.name = "normal form";
  rec.notes.push_back(std::to_string(s.relations.size()) + " normal-form relations");
  s.ledger.push_back(std::move(rec));
  return s;
}

std::vector<StageSpec> standard_stages(int k) {
  if (k != 2) throw std::invalid_argument("frame-change stages are only tabulated for k = 2");
  std::vector<StageSpec> out;

  StageSpec s1;
  s1.name = "first frame change";
  s1.stage = Stage::AfterChange1;
  s1.shape = "tangent shift A~_j = A_j + a_j A_0, j = 1..4";
  for (int j = 1; j <= 4; ++j) s1.placements.push_back({j, 0, Symbol::a(j)});
  s1.axioms = iiihat_constraints(2);
  s1.targets = {rel("w1,3 = w2,4"), rel("w1,4 = -w2,3"), rel("w3,1 = w4,2"), rel("w4,1 = -w3,2")};
  s1.published[Symbol::a(1)] = {term(1, 1, 0, 0), term(2, 1, 7, 7), term(-1, 1, 8, 8), term(-2, 1, 2, 2),
                                term(-1, 3, 7, 7), term(1, 3, 6, 6)};
  s1.published[Symbol::a(2)] = {term(-1, 1, 4, 1), term(-2, 4, 7, 7), term(-1, 4, 0, 0), term(1, 4, 8, 8),
                                term(2, 4, 2, 2), term(-1, 1, 3, 2), term(1, 2, 0, 0), term(-2, 2, 4, 4),
                                term(1, 2, 8, 8)};
  s1.published[Symbol::a(3)] = {term(1, 3, 0, 0), term(1, 3, 7, 7), term(1, 3, 6, 6), term(-2, 3, 2, 2),
                                term(-1, 3, 8, 8)};
  s1.published[Symbol::a(4)] = {term(-1, 1, 4, 1), term(-1, 1, 3, 2)};
  s1.notes.push_back("a_2 is checked with -b^1_41; the printed +b^1_41 does not satisfy the targets");
  out.push_back(std::move(s1));

  StageSpec s2;
  s2.name = "second frame change";
  s2.stage = Stage::AfterChange2;
  s2.shape = "normal mix A~_mu = A_mu + sum_alpha l_{mu,alpha} A_alpha, mu = 5..8";
  for (int j = 5; j <= 8; ++j)
    for (int a = 1; a <= 4; ++a) s2.placements.push_back({j, a, Symbol::l(j, a)});
  s2.targets = {rel("w6,6 = w7,7")};
  out.push_back(std::move(s2));

  StageSpec s3;
  s3.name = "third frame change";
  s3.stage = Stage::AfterChange3;
  s3.shape = "single-vector shifts A~_5 = A_5 + a_5 A_0, A~_8 = A_8 + a_8 A_0";
  s3.placements = {{5, 0, Symbol::a(5)}, {8, 0, Symbol::a(8)}};
  s3.targets = {rel("w5,3 = 0"), rel("w5,4 = 0"), rel("w8,1 = 0"), rel("w8,2 = 0")};
  s3.published[Symbol::a(5)] = {term(2, 1, 1, 0), term(-2, 1, 7, 4)};
  s3.published[Symbol::a(8)] = {term(2, 4, 4, 0), term(-2, 4, 6, 2)};
  s3.notes.push_back("targets follow the matrix positions (5,3), (5,4), (8,1), (8,2); the text names w5,2 instead of w5,4");
  out.push_back(std::move(s3));

  StageSpec s4;
  s4.name = "fourth frame change";
  s4.stage = Stage::AfterChange4;
  s4.shape = "single-vector shifts A~_6 = A_6 + a_6 A_0, A~_7 = A_7 + a_7 A_0";
  s4.placements = {{6, 0, Symbol::a(6)}, {7, 0, Symbol::a(7)}};
  s4.targets = {rel("w6,3 = w1,0"), rel("w6,4 = w2,0"), rel("w7,3 = -w2,0"), rel("w7,4 = w1,0")};
  s4.published[Symbol::a(6)] = {term(2, 2, 4, 0), term(-1, 2, 8, 4)};
  s4.published[Symbol::a(7)] = {term(2, 1, 4, 0), term(-1, 1, 8, 4)};
  out.push_back(std::move(s4));
  return out;
}

std::vector<LinearRelation> final_relation_list(int k) {
  if (k != 2) throw std::invalid_argument("the final relation list is only tabulated for k = 2");
  const char* texts[] = {
      "w1,3 = w2,4",     "w2,3 = -w1,4",    "w3,1 = w4,2",     "w3,2 = -w4,1",  "w1,1 = w2,2",
      "w1,2 = -w2,1",    "w3,3 = w4,4",     "w3,4 = -w4,3",    "w6,6 = w7,7",   "w6,7 = -w7,6",
      "w3,1 = w6,5",     "w4,1 = w7,5",     "2*w3,1 = w8,6",   "2*w4,1 = w8,7", "w1,3 = w6,8",
      "w1,4 = w7,8",     "2*w1,3 = w5,6",   "2*w1,4 = w5,7",   "w5,3 = 0",      "w5,4 = 0",
      "w8,1 = 0",        "w8,2 = 0",        "w6,3 = w7,4",     "w7,3 = -w6,4",  "w6,1 = -w7,2",
      "w7,1 = w6,2",
  };
  std::vector<LinearRelation> out;
  for (const char* t : texts) out.push_back(rel(t, std::string("final ") + t));
  return out;
}

ConnectionMatrix tabulated_final_frame(int k) {
  if (k != 2) throw std::invalid_argument("the final frame is only tabulated for k = 2");
  static const char* rows[9][9] = {
      {"w0,0", "w0,1", "w0,2", "w0,3", "w0,4", "0", "0", "0", "0"},
      {"w1,0", "w1,1", "w1,2", "w1,3", "w1,4", "1/2*w0,1", "1/2*w0,3", "1/2*w0,4", "0"},
      {"w2,0", "-w1,2", "w1,1", "-w1,4", "w1,3", "1/2*w0,2", "1/2*w0,4", "-1/2*w0,3", "0"},
      {"w3,0", "w3,1", "w3,2", "w3,3", "w3,4", "0", "1/2*w0,1", "-1/2*w0,2", "1/2*w0,3"},
      {"w4,0", "-w3,2", "w3,1", "-w3,4", "w3,3", "0", "1/2*w0,2", "1/2*w0,1", "1/2*w0,4"},
      {"0", "2*w1,0", "2*w2,0", "0", "0", "w5,5", "2*w1,3", "2*w1,4", "0"},
      {"0", "w3,0", "w4,0", "w1,0", "w2,0", "w3,1", "w6,6", "w6,7", "w1,3"},
      {"0", "w4,0", "-w3,0", "-w2,0", "w1,0", "-w3,2", "-w6,7", "w6,6", "w1,4"},
      {"0", "0", "0", "2*w3,0", "2*w4,0", "0", "2*w3,1", "-2*w3,2", "w8,8"},
  };
  ConnectionMatrix m(DarbouxContext::for_k(2));
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) m.set(i, j, OneForm::parse(rows[i][j]));
  return m;
}

PipelineState run_stage(const PipelineState& state, const StageSpec& spec, const PipelineLog& log) {
  const auto t0 = Clock::now();
  if (spec.placements.empty() && spec.targets.empty() && spec.axioms.empty()) {
    PipelineState out = state;
    StageRecord rec;
    rec.name = spec.name.empty() ? "identity" : spec.name;
    rec.notes.push_back("identity change");
    out.ledger.push_back(std::move(rec));
    return out;
  }
  if (static_cast<int>(spec.stage) <= static_cast<int>(state.stage))
    throw std::invalid_argument(spec.name + ": stage " + stage_name(spec.stage) + " does not follow " +
                                stage_name(state.stage));
  emit(log, spec.name + ": " + spec.shape);

  StageFrame f = build_frame(state, spec);
  StageRecord rec;
  rec.name = spec.name;
  rec.notes = spec.notes;
  rec.systems["carried relations"] = counts_of(f.carried);
  if (!spec.axioms.empty()) rec.systems["axioms"] = counts_of(f.axioms);
  rec.solved = f.bsol.assignments().size();
  rec.residual = f.bsol.residual().size();
  emit(log, "  differentiated " + std::to_string(state.relations.size()) + " relations: " +
                std::to_string(f.carried.raw_count()) + " equations, " + std::to_string(f.carried.nonzero_count()) +
                " nonzero; solved " + std::to_string(rec.solved) + " b-symbols, " + std::to_string(rec.residual) +
                " nonlinear left");

  // Parameters first, then whatever is left must vanish modulo the b-solution.
  EquationSystem psys = relation_equations(f.rs, f.bsol, f.changed, spec.targets, "target");
  psys.append(relation_equations(f.rs, f.bsol, f.changed, f.relations, "preserve"));
  rec.systems["parameter equations"] = counts_of(psys);
  LinearSolver params(parameter_order(spec));
  try {
    params.add(psys);
  } catch (const InconsistentSystem& e) {
    throw StageFailure(spec.name, e.what(), e.tags());
  }
  std::vector<std::string> failures;
  for (const auto& eq : psys.equations()) {
    const Polynomial r = f.bsol.reduce(params.reduce(eq.poly));
    if (!r.is_zero()) failures.push_back(eq.provenance.front() + " : " + r.to_string());
  }
  if (!failures.empty()) throw StageFailure(spec.name, "target relations are unsatisfiable", failures);
  rec.parameters = params.assignments();
  for (const auto& [p, v] : rec.parameters) emit(log, "  " + p.to_string() + " = " + v.to_string());

  if (!spec.published.empty()) {
    rec.published_checked = true;
    rec.published_failures = target_failures(f, spec, published_in(f.rs, spec));
    emit(log, std::string("  published parameters ") + (rec.published_failures.empty() ? "satisfy" : "violate") +
                  " the targets");
  }

  PipelineState out = state;
  out.stage = spec.stage;
  out.generation = state.generation + 1;
  out.relations = concat(f.relations, spec.targets);
  out.rs = RewriteSystem::from_relations(out.ctx, out.relations, out.generation);
  for (const auto& t : spec.targets) rec.added_relations.push_back(t.to_string());
  rec.seconds = seconds_since(t0);
  out.ledger.push_back(std::move(rec));
  return out;
}

PipelineState derive_consequences(const PipelineState& state, const PipelineLog& log) {
  const auto t0 = Clock::now();
  PipelineState out = state;
  StageRecord rec;
  rec.name = "consequences";
  for (int round = 0;; ++round) {
    const EquationSystem sys = differentiate_relations(out.relations, out.rs, default_worker_count());
    const LinearSolver bsol = solve_b(sys, out.rs, rec.name);
    rec.systems["round " + std::to_string(round)] = counts_of(sys);
    rec.solved = bsol.assignments().size();
    rec.residual = bsol.residual().size();
    const auto found = discover(out.rs, bsol);
    if (found.empty()) break;
    out.relations = concat(out.relations, found);
    out.rs = RewriteSystem::from_relations(out.ctx, out.relations, out.generation);
    for (const auto& r : found) {
      rec.added_relations.push_back(r.to_string());
      emit(log, "  forced " + r.to_string());
    }
  }
  rec.seconds = seconds_since(t0);
  out.ledger.push_back(std::move(rec));
  return out;
}

std::vector<std::string> check_parameters(const PipelineState& state, const StageSpec& spec,
                                          const std::map<Symbol, Polynomial>& values) {
  return target_failures(build_frame(state, spec), spec, values);
}

std::map<Symbol, Polynomial> published_values(const PipelineState& state, const StageSpec& spec) {
  return published_in(RewriteSystem::from_relations(state.ctx, concat(state.relations, spec.axioms), state.generation),
                      spec);
}

bool preserves_relations(const RewriteSystem& rs, const std::vector<LinearRelation>& relations) {
  return std::all_of(relations.begin(), relations.end(),
                     [&](const LinearRelation& r) { return rs.rewrite(r.as_form()).is_zero(); });
}

namespace {

// Coefficient rows of linear polynomials over a shared symbol index.
struct LinearCoordinates {
  std::map<Symbol, int> index;

  SparseEchelon::Row row(const Polynomial& p) {
    SparseEchelon::Row r;
    for (const auto& [m, c] : p.terms()) {
      if (m.degree() != 1) throw std::invalid_argument("standard entry is not a linear form: " + p.to_string());
      const auto [it, fresh] = index.emplace(m.symbols()[0], int(index.size()));
      r[it->second] = c;
    }
    return r;
  }
};

}  // namespace

std::vector<LinearRelation> standard_relations(const PolyMatrix& standard, const DarbouxContext& ctx) {
  if (standard.rows() != ctx.dim() || standard.cols() != ctx.dim())
    throw std::invalid_argument("standard matrix has the wrong size");
  std::vector<FormGenerator> gens;
  for (int i = 0; i <= ctx.N; ++i)
    for (int j = 0; j <= ctx.N; ++j)
      if (!ctx.is_zero(FormGenerator(i, j))) gens.emplace_back(i, j);
  LinearCoordinates coords;
  std::map<int, SparseEchelon::Row> by_symbol;
  for (std::size_t c = 0; c < gens.size(); ++c)
    for (const auto& [s, v] : coords.row(standard.at(gens[c].row, gens[c].col))) by_symbol[s][int(c)] = v;
  SparseEchelon ech;
  for (auto& [s, row] : by_symbol) ech.insert(std::move(row));
  std::vector<LinearRelation> out;
  for (const auto& v : ech.nullspace(int(gens.size()))) {
    LinearRelation r;
    for (const auto& [c, coeff] : v) r.terms[gens[std::size_t(c)]] = coeff;
    r.label = "standard";
    out.push_back(std::move(r));
  }
  return out;
}

Verdict compare_named(const ConnectionMatrix& omega, const PolyMatrix& standard) {
  const DarbouxContext& ctx = omega.context();
  if (standard.rows() != ctx.dim() || standard.cols() != ctx.dim())
    throw std::invalid_argument("standard matrix has the wrong size");
  Verdict v;
  v.omega = omega;

  std::set<FormGenerator> names;
  for (int i = 0; i <= ctx.N; ++i)
    for (int j = 0; j <= ctx.N; ++j)
      for (const auto& [g, c] : omega.at(i, j).terms()) {
        if (!c.is_constant()) throw std::invalid_argument("connection entry has symbolic coefficients");
        names.insert(g);
      }
  v.free_forms = names.size();

  LinearCoordinates coords;
  SparseEchelon ech;
  std::size_t independent = 0;
  for (FormGenerator g : names) independent += ech.insert(coords.row(standard.at(g.row, g.col))) ? 1 : 0;
  v.independent_forms = independent;
  v.renaming_injective = independent == names.size();

  for (int i = 0; i <= ctx.N; ++i)
    for (int j = 0; j <= ctx.N; ++j) {
      const OneForm& entry = omega.at(i, j);
      Polynomial renamed;
      for (const auto& [g, c] : entry.terms()) renamed.add_scaled(standard.at(g.row, g.col), c.constant_term());
      if (!(renamed == standard.at(i, j)))
        v.diffs.push_back({i, j, standard.at(i, j).to_string(), renamed.to_string()});
      // A name must stand for its own entry.
      else if (names.count(FormGenerator(i, j)) && !(entry == OneForm(FormGenerator(i, j))))
        v.diffs.push_back({i, j, FormGenerator(i, j).to_string(), entry.to_string()});
    }
  v.match = v.diffs.empty();
  return v;
}

Verdict compare_with_standard(const RewriteSystem& rs, const PolyMatrix& standard) {
  Verdict v = compare_named(ConnectionMatrix::from_rewrite(rs), standard);
  v.match = v.match && v.renaming_injective;
  return v;
}

Verdict final_solve_and_verify(const PipelineState& state, const PolyMatrix& standard,
                               const std::optional<ConnectionMatrix>& golden, const PipelineLog& log) {
  const auto final_list = final_relation_list(state.k);
  PipelineState s = state;
  s.relations = concat(s.relations, final_list);
  s.rs = RewriteSystem::from_relations(s.ctx, s.relations, s.generation);

  const EquationSystem final_sys = differentiate_relations(final_list, s.rs, default_worker_count());
  const LinearSolver bsol = solve_b(final_sys, s.rs, "final solve");
  emit(log, "final solve: " + std::to_string(final_list.size()) + " relations, " +
                std::to_string(final_sys.raw_count()) + " equations, " + std::to_string(final_sys.nonzero_count()) +
                " nonzero, " + std::to_string(bsol.assignments().size()) + " b-symbols solved");

  s = derive_consequences(s, log);

  Verdict v = compare_with_standard(s.rs, standard);
  v.final_raw = final_sys.raw_count();
  v.final_nonzero = final_sys.nonzero_count();
  v.final_distinct = final_sys.size();
  v.solved = bsol.assignments().size();
  for (const auto& p : bsol.residual()) v.residuals.push_back(p.to_string());

  if (golden) {
    v.golden_checked = true;
    if (golden->size() != s.ctx.dim()) throw std::invalid_argument("golden matrix has the wrong size");
    for (int i = 0; i <= s.ctx.N; ++i)
      for (int j = 0; j <= s.ctx.N; ++j) {
        const OneForm expected = s.rs.rewrite(golden->at(i, j));
        const OneForm actual = s.rs.rewrite(FormGenerator(i, j));
        if (!(expected == actual)) v.golden_diffs.push_back({i, j, golden->at(i, j).to_string(), actual.to_string()});
      }
    v.match = v.match && v.golden_diffs.empty();
  }
  emit(log, std::string("verdict: ") + (v.match ? "match" : "mismatch") + " (" + std::to_string(v.diffs.size()) +
                " entry differences, " + std::to_string(v.free_forms) + " independent forms)");
  return v;
}

RunReport run_pipeline(int k, const PolyMatrix& standard, const std::optional<ConnectionMatrix>& golden,
                       const PipelineLog& log) {
  const auto t0 = Clock::now();
  RunReport report;
  report.k = k;
  PipelineState s = init_state(k);
  try {
    for (const auto& spec : standard_stages(k)) {
      s = run_stage(s, spec, log);
      // The final solve closes the last frame itself.
      if (s.stage == Stage::AfterChange2 || s.stage == Stage::AfterChange3) s = derive_consequences(s, log);
    }
    report.verdict = final_solve_and_verify(s, standard, golden, log);
  } catch (const StageFailure& e) {
    report.failed_stage = e.stage();
    report.failure_residuals = e.residuals();
    report.failure_residuals.insert(report.failure_residuals.begin(), e.what());
    emit(log, std::string("stage failure: ") + e.what());
  }
  report.stages = s.ledger;
  report.seconds = seconds_since(t0);
  return report;
}

SystemCounts generate_stage_one(int k, int workers) {
  const PipelineState s = init_state(k);
  const EquationSystem sys =
      differentiate_relations(s.relations, s.rs, workers > 0 ? workers : default_worker_count());
  return counts_of(sys);
}

StageRecord survey_stage_one(int k, const std::vector<LinearRelation>& axioms, const PipelineLog& log) {
  const auto t0 = Clock::now();
  const PipelineState s = init_state(k);
  const auto rels = concat(s.relations, axioms);
  const RewriteSystem rs = RewriteSystem::from_relations(s.ctx, rels, 0);
  StageRecord rec;
  rec.name = "stage-one survey";
  const EquationSystem carried = differentiate_relations(s.relations, rs, default_worker_count());
  const EquationSystem extra = differentiate_relations(axioms, rs, default_worker_count());
  rec.systems["carried relations"] = counts_of(carried);
  if (!axioms.empty()) rec.systems["axioms"] = counts_of(extra);
  EquationSystem all = carried;
  all.append(extra);
  emit(log, "stage one, k = " + std::to_string(k) + ": " + std::to_string(all.raw_count()) + " equations, " +
                std::to_string(all.size()) + " distinct");
  const LinearSolver bsol = solve_b(all, rs, rec.name);
  rec.solved = bsol.assignments().size();
  rec.residual = bsol.residual().size();
  emit(log, "  solved " + std::to_string(rec.solved) + " b-symbols, " + std::to_string(rec.residual) + " nonlinear left");
  rec.seconds = seconds_since(t0);
  return rec;
}

double hessian_continuation_deviation(int k, std::uint64_t seed, double xi_scale) {
  std::mt19937_64 rng(seed);
  const KVector<double> first = random_unit_vector(k, rng);
  // Second point: a small step away from the first along a random direction.
  KVector<double> second = first;
  const KVector<double> step = random_unit_vector(k, rng);
  double norm = 0;
  for (int i = 0; i < 3; ++i) {
    second[std::size_t(i)] = second[std::size_t(i)] + step[std::size_t(i)] * 0.05;
    norm += second[std::size_t(i)].norm();
  }
  if (norm < 1e-12) throw std::runtime_error("degenerate sample pair");
  for (auto& x : second) x = x * (1.0 / std::sqrt(norm));

  double worst = 0;
  for (const KVector<double>* v : std::array{&first, static_cast<const KVector<double>*>(&second)}) {
    const HermitianPoint<double> xi = normal_projection(*v, random_hermitian(k, rng)) * xi_scale;
    const auto u = tangent_directions(*v);
    const auto hess = chart_hessian(*v, u, [&](const HermitianPoint<double>& a) { return height(xi, a); });
    const auto second_form = second_fundamental_form(*v, u);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b)
        worst = std::max(worst, std::abs(hess[a][b] - frobenius(second_form[a][b], xi)));
  }
  return worst;
}

bool hessian_continuation_check(int k, std::uint64_t seed, double tol) {
  return hessian_continuation_deviation(k, seed) <= tol;
}

}  // namespace kpf
