#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "kpframe/embedding.hpp"
#include "kpframe/normal_form.hpp"
#include "kpframe/pipeline.hpp"
#include "kpframe/serialize.hpp"

namespace {

using namespace kpf;

constexpr int kMatch = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int k = 2;
  std::string format = "text";
  std::string output;
  std::string report;
  std::string standard;
  std::string golden;
  std::string what = "standard";
  std::uint64_t seed = 1;
  int samples = 50;
  bool long_running = false;
};

void require_k(const RunConfig& cfg, std::initializer_list<int> allowed, const std::string& why) {
  for (int k : allowed)
    if (cfg.k == k) return;
  throw UsageError("k = " + std::to_string(cfg.k) + " is not supported here: " + why);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw UsageError("cannot write " + cfg.output);
  out << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string render(const RunConfig& cfg, const PolyMatrix& m) {
  if (cfg.format == "json") return to_json(m).dump(2) + "\n";
  if (cfg.format == "latex") return latex_matrix(m);
  return text_matrix(m);
}

std::string render(const RunConfig& cfg, const ConnectionMatrix& m) {
  if (cfg.format == "json") return to_json(m).dump(2) + "\n";
  if (cfg.format == "latex") return latex_matrix(m);
  return text_matrix(m);
}

int cmd_derive_standard(const RunConfig& cfg) {
  require_k(cfg, {1, 2, 4}, "the standard matrix is derived for the associative algebras R, C, H (k = 1, 2, 4)");
  emit(cfg, render(cfg, derive_maurer_cartan(cfg.k)));
  return kMatch;
}

int survey(const RunConfig& cfg) {
  std::ostringstream log;
  auto sink = [&](const std::string& s) { log << s << "\n"; };
  std::vector<LinearRelation> candidates;
  if (cfg.k == 4) {
    candidates = replay_iiihat(qmu_from_normal_form(4), all_probe_directions(8));
    sink("third-form candidates (derived, not tabulated): " + std::to_string(candidates.size()));
  }
  Json j = {{"schema", kSchemaVersion}, {"k", cfg.k}, {"certified", false}};
  if (cfg.k == 8) {
    const SystemCounts c = generate_stage_one(8);
    sink("stage one, k = 8: " + std::to_string(c.raw) + " equations, " + std::to_string(c.nonzero()) + " nonzero, " +
         std::to_string(c.distinct) + " distinct");
    j["stage_one"] = to_json(c);
  } else {
    j["stage_one"] = to_json(survey_stage_one(cfg.k, candidates, sink));
  }
  sink("no frame-change stages are tabulated for k = " + std::to_string(cfg.k) + "; no verdict is certified");
  if (!cfg.report.empty()) {
    std::ofstream(cfg.report) << j.dump(2) << "\n";
  }
  emit(cfg, cfg.format == "json" ? j.dump(2) + "\n" : log.str());
  return kMismatch;
}

int cmd_verify_proof(const RunConfig& cfg) {
  require_k(cfg, {2, 4, 8}, "the staged replay needs k = 2 (k = 4 and 8 generate equations only)");
  if (cfg.k != 2) {
    if (!cfg.long_running) throw UsageError("k = " + std::to_string(cfg.k) + " needs --long-running");
    return survey(cfg);
  }
  const PolyMatrix standard =
      cfg.standard.empty() ? derive_maurer_cartan(2) : from_json<PolyMatrix>(read_json(cfg.standard));
  const ConnectionMatrix golden =
      cfg.golden.empty() ? tabulated_final_frame(2) : from_json<ConnectionMatrix>(read_json(cfg.golden));

  std::ostringstream log;
  const RunReport report = run_pipeline(2, standard, golden, [&](const std::string& s) { log << s << "\n"; });
  const Json j = to_json(report);
  if (!cfg.report.empty()) std::ofstream(cfg.report) << j.dump(2) << "\n";

  const bool ok = report.failed_stage.empty() && report.verdict.match;
  if (cfg.format == "json") {
    emit(cfg, j.dump(2) + "\n");
  } else if (cfg.format == "latex") {
    emit(cfg, latex_matrix(report.verdict.omega));
  } else {
    std::ostringstream os;
    os << log.str();
    for (const auto& st : report.stages)
      for (const auto& [name, c] : st.systems)
        os << st.name << " / " << name << ": " << c.raw << " equations (" << c.zero << " identically zero, "
           << c.distinct << " distinct)\n";
    for (const auto& d : report.verdict.diffs)
      os << "entry (" << d.row << "," << d.col << "): expected " << d.expected << ", got " << d.actual << "\n";
    for (const auto& d : report.verdict.golden_diffs)
      os << "tabulated entry (" << d.row << "," << d.col << "): " << d.expected << " vs " << d.actual << "\n";
    for (const auto& r : report.failure_residuals) os << "  " << r << "\n";
    const Verdict& v = report.verdict;
    os << "final system: " << v.final_raw << " equations (" << v.final_nonzero << " nonzero), " << v.solved
       << " b-symbols solved; " << v.independent_forms << " of " << v.free_forms << " surviving forms independent\n";
    os << (ok ? "MATCH" : "MISMATCH") << " in " << report.seconds << " s\n";
    emit(cfg, os.str());
  }
  return ok ? kMatch : kMismatch;
}

int cmd_tightness(const RunConfig& cfg) {
  require_k(cfg, {1, 2, 4}, "height functions are sampled for k = 1, 2, 4");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  std::mt19937_64 rng(cfg.seed);
  std::map<int, int> count_histogram;
  std::map<std::string, int> index_histogram;
  int perfect = 0;
  int degenerate = 0;
  for (int t = 0; t < cfg.samples; ++t) {
    const HermitianPoint<double> xi = random_hermitian(cfg.k, rng);
    try {
      const auto cps = height_critical_points(cfg.k, xi);
      ++count_histogram[int(cps.size())];
      std::string key;
      for (const auto& cp : cps) key += (key.empty() ? "" : ",") + std::to_string(cp.index);
      ++index_histogram["{" + key + "}"];
      if (cps.size() == 3 && cps[0].index == 0 && cps[1].index == cfg.k && cps[2].index == 2 * cfg.k) ++perfect;
    } catch (const DegenerateHeight&) {
      ++degenerate;
    }
  }
  std::vector<HermitianPoint<double>> points;
  for (int i = 0; i < 4 * (3 * cfg.k + 4); ++i) points.push_back(projector(random_unit_vector(cfg.k, rng)));
  const int span = affine_span_dimension(cfg.k, points);

  Json j = {{"schema", kSchemaVersion}, {"k", cfg.k}, {"seed", cfg.seed}, {"samples", cfg.samples},
            {"perfect", perfect},        {"degenerate", degenerate}, {"affine_span", span}};
  for (const auto& [n, c] : count_histogram) j["critical_point_counts"][std::to_string(n)] = c;
  for (const auto& [key, c] : index_histogram) j["index_sets"][key] = c;
  if (cfg.format == "json") {
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "k = " << cfg.k << ", " << cfg.samples << " height functions, seed " << cfg.seed << "\n";
    for (const auto& [n, c] : count_histogram) os << "  " << c << " with " << n << " critical points\n";
    for (const auto& [key, c] : index_histogram) os << "  " << c << " with indices " << key << "\n";
    if (degenerate) os << "  " << degenerate << " degenerate\n";
    os << perfect << "/" << cfg.samples << " perfect, affine span " << span << "\n";
    emit(cfg, os.str());
  }
  return perfect == cfg.samples && span == 3 * cfg.k + 2 ? kMatch : kMismatch;
}

int cmd_hurwitz(const RunConfig& cfg) {
  require_k(cfg, {1, 2, 4, 8}, "Hurwitz families exist for k = 1, 2, 4, 8");
  const PolyMatrix b = hurwitz_family(cfg.k);
  Polynomial sum;
  for (int i = 1; i <= cfg.k; ++i) sum += Polynomial::variable(Symbol::s(i)) * Polynomial::variable(Symbol::s(i));
  PolyMatrix expected(cfg.k, cfg.k);
  for (int i = 0; i < cfg.k; ++i) expected.at(i, i) = sum;
  const bool ok = b.transpose() * b == expected;
  if (cfg.format == "json") {
    emit(cfg, Json{{"k", cfg.k}, {"B", to_json(b)}, {"orthogonal", ok}}.dump(2) + "\n");
  } else {
    emit(cfg, render(cfg, b) + (cfg.format == "latex" ? "" : std::string("B^T B = (") + sum.to_string() + ") I: " +
                                                                 (ok ? "yes" : "no") + "\n"));
  }
  return ok ? kMatch : kMismatch;
}

int cmd_export(const RunConfig& cfg) {
  if (cfg.what == "standard") return cmd_derive_standard(cfg);
  if (cfg.what == "final-frame") {
    require_k(cfg, {2}, "the final frame is tabulated for k = 2");
    emit(cfg, render(cfg, tabulated_final_frame(2)));
    return kMatch;
  }
  if (cfg.what == "normal-form") {
    require_k(cfg, {1, 2, 4, 8}, "normal forms exist for k = 1, 2, 4, 8");
    const auto rels = relations_from_qmu(qmu_from_normal_form(cfg.k));
    if (cfg.format == "json") {
      Json j = Json::array();
      for (const auto& r : rels) j.push_back(to_json(r));
      emit(cfg, j.dump(2) + "\n");
    } else {
      std::string out;
      for (const auto& r : rels) out += r.to_string() + "\n";
      emit(cfg, out);
    }
    return kMatch;
  }
  if (cfg.what == "stage-one") {
    require_k(cfg, {1, 2, 4, 8}, "normal forms exist for k = 1, 2, 4, 8");
    const PipelineState s = init_state(cfg.k);
    const EquationSystem sys = differentiate_relations(s.relations, s.rs);
    if (cfg.format == "json") {
      emit(cfg, to_json(sys).dump(2) + "\n");
    } else {
      std::string out;
      for (const auto& eq : sys.equations()) out += eq.poly.to_string() + "    [" + eq.provenance.front() + "]\n";
      emit(cfg, out);
    }
    return kMatch;
  }
  throw UsageError("unknown export item " + cfg.what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maurer-Cartan frames of projective planes: derivation, staged verification, numeric probes"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "algebra dimension (1, 2, 4, 8)")->capture_default_str();
    sub->add_option("--format", cfg.format, "json, latex or text")
        ->check(CLI::IsMember({"json", "latex", "text"}))
        ->capture_default_str();
    sub->add_option("--output,-o", cfg.output, "write to this file instead of stdout");
  };

  auto* derive = app.add_subcommand("derive-standard", "Maurer-Cartan matrix of the standard embedding");
  common(derive);

  auto* verify = app.add_subcommand("verify-proof", "replay the staged frame normalization and compare");
  common(verify);
  verify->add_option("--report", cfg.report, "also write the JSON run report here");
  verify->add_option("--standard", cfg.standard, "standard matrix as JSON (default: derived)");
  verify->add_option("--golden", cfg.golden, "tabulated final frame as JSON (default: built in)");
  verify->add_flag("--long-running", cfg.long_running, "allow the k = 4 and k = 8 generation runs");

  auto* tight = app.add_subcommand("tightness", "sample height functions on the standard embedding");
  common(tight);
  tight->add_option("--samples", cfg.samples, "number of height functions")->capture_default_str();
  tight->add_option("--seed", cfg.seed, "random seed")->capture_default_str();

  auto* hurwitz = app.add_subcommand("hurwitz", "Hurwitz family and its orthogonality identity");
  common(hurwitz);

  auto* exp = app.add_subcommand("export", "write derived artifacts");
  common(exp);
  exp->add_option("--what", cfg.what, "standard, final-frame, normal-form or stage-one")
      ->check(CLI::IsMember({"standard", "final-frame", "normal-form", "stage-one"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*derive) return cmd_derive_standard(cfg);
    if (*verify) return cmd_verify_proof(cfg);
    if (*tight) return cmd_tightness(cfg);
    if (*hurwitz) return cmd_hurwitz(cfg);
    if (*exp) return cmd_export(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
