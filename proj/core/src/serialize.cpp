#include "kpframe/serialize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace kpf {

Json to_json(const Polynomial& p) { return p.to_string(); }
Json to_json(const OneForm& f) { return f.to_string(); }

Json to_json(const LinearRelation& r) { return {{"relation", r.to_string()}, {"label", r.label}}; }

Json to_json(const PolyMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

Json to_json(const ConnectionMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return {{"n", m.context().n}, {"N", m.context().N}, {"entries", std::move(rows)}};
}

Json to_json(const EquationSystem& sys) {
  Json eqs = Json::array();
  for (const auto& eq : sys.equations()) eqs.push_back({{"poly", eq.poly.to_string()}, {"provenance", eq.provenance}});
  return {{"raw", sys.raw_count()}, {"zero", sys.zero_count()}, {"equations", std::move(eqs)}};
}

Json to_json(const SystemCounts& c) {
  return {{"raw", c.raw}, {"zero", c.zero}, {"nonzero", c.nonzero()}, {"distinct", c.distinct}};
}

Json to_json(const StageRecord& r) {
  Json systems = Json::object();
  for (const auto& [name, c] : r.systems) systems[name] = to_json(c);
  Json params = Json::object();
  for (const auto& [s, p] : r.parameters) params[s.to_string()] = p.to_string();
  return {{"name", r.name},
          {"systems", std::move(systems)},
          {"solved", r.solved},
          {"residual", r.residual},
          {"parameters", std::move(params)},
          {"published_checked", r.published_checked},
          {"published_failures", r.published_failures},
          {"added_relations", r.added_relations},
          {"notes", r.notes},
          {"seconds", r.seconds}};
}

namespace {

Json diffs_json(const std::vector<EntryDiff>& diffs) {
  Json out = Json::array();
  for (const auto& d : diffs)
    out.push_back({{"row", d.row}, {"col", d.col}, {"expected", d.expected}, {"actual", d.actual}});
  return out;
}

std::vector<EntryDiff> diffs_from(const Json& j) {
  std::vector<EntryDiff> out;
  for (const auto& d : j)
    out.push_back({d.at("row").get<int>(), d.at("col").get<int>(), d.at("expected").get<std::string>(),
                   d.at("actual").get<std::string>()});
  return out;
}

void check_schema(const Json& j) {
  if (j.contains("schema") && j.at("schema").get<std::string>() != kSchemaVersion)
    throw std::invalid_argument("unsupported schema " + j.at("schema").get<std::string>());
}

}  // namespace

Json to_json(const Verdict& v) {
  return {{"match", v.match},
          {"final_equations", {{"raw", v.final_raw}, {"nonzero", v.final_nonzero}, {"distinct", v.final_distinct}}},
          {"solved", v.solved},
          {"free_forms", v.free_forms},
          {"independent_forms", v.independent_forms},
          {"renaming_injective", v.renaming_injective},
          {"golden_checked", v.golden_checked},
          {"diffs", diffs_json(v.diffs)},
          {"golden_diffs", diffs_json(v.golden_diffs)},
          {"residuals", v.residuals},
          {"omega", to_json(v.omega)}};
}

Json to_json(const RunReport& r) {
  Json stages = Json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  Json out = {{"schema", kSchemaVersion}, {"k", r.k},           {"stages", std::move(stages)},
              {"seconds", r.seconds},     {"verdict", to_json(r.verdict)}};
  if (!r.failed_stage.empty()) {
    out["failed_stage"] = r.failed_stage;
    out["failure_residuals"] = r.failure_residuals;
  }
  return out;
}

template <>
Polynomial from_json<Polynomial>(const Json& j) {
  return Polynomial::parse(j.get<std::string>());
}

template <>
OneForm from_json<OneForm>(const Json& j) {
  return OneForm::parse(j.get<std::string>());
}

template <>
LinearRelation from_json<LinearRelation>(const Json& j) {
  return LinearRelation::parse(j.at("relation").get<std::string>(), j.value("label", std::string()));
}

template <>
PolyMatrix from_json<PolyMatrix>(const Json& j) {
  PolyMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  const Json& e = j.at("entries");
  if (static_cast<int>(e.size()) != m.rows()) throw std::invalid_argument("matrix row count mismatch");
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(e[std::size_t(i)].size()) != m.cols()) throw std::invalid_argument("matrix column count mismatch");
    for (int jj = 0; jj < m.cols(); ++jj) m.at(i, jj) = Polynomial::parse(e[std::size_t(i)][std::size_t(jj)].get<std::string>());
  }
  return m;
}

template <>
ConnectionMatrix from_json<ConnectionMatrix>(const Json& j) {
  const DarbouxContext ctx{j.at("n").get<int>(), j.at("N").get<int>()};
  ConnectionMatrix m(ctx);
  const Json& e = j.at("entries");
  if (static_cast<int>(e.size()) != ctx.dim()) throw std::invalid_argument("connection matrix size mismatch");
  for (int i = 0; i < ctx.dim(); ++i) {
    if (static_cast<int>(e[std::size_t(i)].size()) != ctx.dim()) throw std::invalid_argument("connection matrix size mismatch");
    for (int jj = 0; jj < ctx.dim(); ++jj) m.set(i, jj, OneForm::parse(e[std::size_t(i)][std::size_t(jj)].get<std::string>()));
  }
  return m;
}

template <>
EquationSystem from_json<EquationSystem>(const Json& j) {
  std::vector<Equation> eqs;
  for (const auto& e : j.at("equations"))
    eqs.push_back({Polynomial::parse(e.at("poly").get<std::string>()), e.at("provenance").get<std::vector<std::string>>()});
  return EquationSystem::restore(std::move(eqs), j.at("raw").get<std::size_t>(), j.at("zero").get<std::size_t>());
}

template <>
SystemCounts from_json<SystemCounts>(const Json& j) {
  return {j.at("raw").get<std::size_t>(), j.at("zero").get<std::size_t>(), j.at("distinct").get<std::size_t>()};
}

template <>
StageRecord from_json<StageRecord>(const Json& j) {
  StageRecord r;
  r.name = j.at("name").get<std::string>();
  for (const auto& [name, c] : j.at("systems").items()) r.systems[name] = from_json<SystemCounts>(c);
  r.solved = j.at("solved").get<std::size_t>();
  r.residual = j.at("residual").get<std::size_t>();
  for (const auto& [s, p] : j.at("parameters").items())
    r.parameters.emplace(Symbol::parse(s), Polynomial::parse(p.get<std::string>()));
  r.published_checked = j.at("published_checked").get<bool>();
  r.published_failures = j.at("published_failures").get<std::vector<std::string>>();
  r.added_relations = j.at("added_relations").get<std::vector<std::string>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.seconds = j.at("seconds").get<double>();
  return r;
}

template <>
Verdict from_json<Verdict>(const Json& j) {
  Verdict v;
  v.match = j.at("match").get<bool>();
  const Json& fe = j.at("final_equations");
  v.final_raw = fe.at("raw").get<std::size_t>();
  v.final_nonzero = fe.at("nonzero").get<std::size_t>();
  v.final_distinct = fe.at("distinct").get<std::size_t>();
  v.solved = j.at("solved").get<std::size_t>();
  v.free_forms = j.at("free_forms").get<std::size_t>();
  v.independent_forms = j.at("independent_forms").get<std::size_t>();
  v.renaming_injective = j.at("renaming_injective").get<bool>();
  v.golden_checked = j.at("golden_checked").get<bool>();
  v.diffs = diffs_from(j.at("diffs"));
  v.golden_diffs = diffs_from(j.at("golden_diffs"));
  v.residuals = j.at("residuals").get<std::vector<std::string>>();
  v.omega = from_json<ConnectionMatrix>(j.at("omega"));
  return v;
}

template <>
RunReport from_json<RunReport>(const Json& j) {
  check_schema(j);
  RunReport r;
  r.k = j.at("k").get<int>();
  for (const auto& s : j.at("stages")) r.stages.push_back(from_json<StageRecord>(s));
  r.seconds = j.at("seconds").get<double>();
  r.verdict = from_json<Verdict>(j.at("verdict"));
  r.failed_stage = j.value("failed_stage", std::string());
  if (j.contains("failure_residuals")) r.failure_residuals = j.at("failure_residuals").get<std::vector<std::string>>();
  return r;
}

// ---------------------------------------------------------------- display

namespace {

constexpr const char* kGreek[] = {"\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\zeta", "\\eta", "\\theta"};

std::string index_pair(int i, int j, bool comma) {
  return "{" + std::to_string(i) + (comma ? "," : "") + std::to_string(j) + "}";
}

std::string latex_symbol(Symbol s) {
  if (s.kind() != SymbolKind::EmbeddingForm) return s.to_string();
  const int j = s.index(1);
  const int k = s.index(2);
  const std::string head = kGreek[s.index(0)];
  if (j == 0 && k > 0) return head + "_{" + std::to_string(k) + "}";
  return head + "_" + index_pair(j, k, false);
}

std::string latex_generator(FormGenerator g, bool comma) {
  if (g.row == 0 && g.col > 0) return "\\omega_{" + std::to_string(g.col) + "}";
  return "\\omega_" + index_pair(g.row, g.col, comma);
}

// One signed term c * atom in the printed style.
void latex_term(std::string& out, bool first, const Rational& c, const std::string& atom) {
  const bool negative = sgn(c) < 0;
  out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
  const Rational mag = abs(c);
  const mpz_class num = mag.get_num();
  const mpz_class den = mag.get_den();
  std::string body;
  if (atom.empty()) body = num.get_str();
  else if (num == 1) body = atom;
  else body = num.get_str() + "\\," + atom;
  if (den == 1) out += body;
  else out += "{" + body + "\\over " + den.get_str() + "}";
}

std::string latex_poly(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    std::string atom;
    for (Symbol s : m.symbols()) atom += (atom.empty() ? "" : " ") + latex_symbol(s);
    latex_term(out, first, c, atom);
    first = false;
  }
  return out;
}

std::string latex_form(const OneForm& f, bool comma) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, p] : f.terms()) {
    if (p.is_constant()) {
      latex_term(out, first, p.constant_term(), latex_generator(g, comma));
    } else {
      out += (first ? "(" : " + (") + latex_poly(p) + ")\\," + latex_generator(g, comma);
    }
    first = false;
  }
  return out;
}

std::string latex_grid(const std::vector<std::vector<std::string>>& cells) {
  std::string out = "\\left(\n\\matrix{";
  for (const auto& row : cells) {
    out += " ";
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " & " : "") + row[j];
    out += " \\cr\n";
  }
  out += "}\n\\right)\n";
  return out;
}

std::string text_grid(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells)
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (width.size() <= j) width.push_back(0);
      width[j] = std::max(width[j], row[j].size());
    }
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      os << row[j];
      if (j + 1 < row.size()) os << std::string(width[j] - row[j].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string latex_matrix(const PolyMatrix& m) {
  std::vector<std::vector<std::string>> cells(std::size_t(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) cells[std::size_t(i)].push_back(latex_poly(m.at(i, j)));
  return latex_grid(cells);
}

std::string latex_matrix(const ConnectionMatrix& m) {
  const bool comma = m.size() >= 10;
  std::vector<std::vector<std::string>> cells(std::size_t(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) cells[std::size_t(i)].push_back(latex_form(m.at(i, j), comma));
  return latex_grid(cells);
}

std::string text_matrix(const PolyMatrix& m) {
  std::vector<std::vector<std::string>> cells(std::size_t(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      std::string s = m.at(i, j).to_string();
      s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
      cells[std::size_t(i)].push_back(std::move(s));
    }
  return text_grid(cells);
}

std::string text_matrix(const ConnectionMatrix& m) {
  std::vector<std::vector<std::string>> cells(std::size_t(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) {
      std::string s = m.at(i, j).to_string();
      s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
      cells[std::size_t(i)].push_back(std::move(s));
    }
  return text_grid(cells);
}

}  // namespace kpf
