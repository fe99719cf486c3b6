#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "kpframe/connection.hpp"
#include "kpframe/equations.hpp"
#include "kpframe/pipeline.hpp"
#include "kpframe/poly_matrix.hpp"

namespace kpf {

using Json = nlohmann::json;

// Written into every top-level document; bumped on incompatible layout changes.
inline constexpr const char* kSchemaVersion = "kpframe/1";

Json to_json(const Polynomial& p);
Json to_json(const OneForm& f);
Json to_json(const LinearRelation& r);
Json to_json(const PolyMatrix& m);
Json to_json(const ConnectionMatrix& m);
Json to_json(const EquationSystem& sys);
Json to_json(const SystemCounts& c);
Json to_json(const StageRecord& r);
Json to_json(const Verdict& v);
Json to_json(const RunReport& r);

template <class T>
T from_json(const Json& j);

template <> Polynomial from_json<Polynomial>(const Json& j);
template <> OneForm from_json<OneForm>(const Json& j);
template <> LinearRelation from_json<LinearRelation>(const Json& j);
template <> PolyMatrix from_json<PolyMatrix>(const Json& j);
template <> ConnectionMatrix from_json<ConnectionMatrix>(const Json& j);
template <> EquationSystem from_json<EquationSystem>(const Json& j);
template <> SystemCounts from_json<SystemCounts>(const Json& j);
template <> StageRecord from_json<StageRecord>(const Json& j);
template <> Verdict from_json<Verdict>(const Json& j);
template <> RunReport from_json<RunReport>(const Json& j);

// Plain-TeX \matrix display in the layout of the printed matrices: w_{0,a} as \omega_{a}, halves as
// {x \over 2}, embedding forms as \alpha_{jk}. Generator index pairs get a comma once the frame has 10 or more vectors.
std::string latex_matrix(const PolyMatrix& m);
std::string latex_matrix(const ConnectionMatrix& m);

// Whitespace-aligned rows, one entry string per cell.
std::string text_matrix(const PolyMatrix& m);
std::string text_matrix(const ConnectionMatrix& m);

}  // namespace kpf
