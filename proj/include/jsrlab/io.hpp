#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "jsrlab/equality.hpp"
#include "jsrlab/higher_order.hpp"
#include "jsrlab/markov.hpp"
#include "jsrlab/prob.hpp"
#include "jsrlab/system.hpp"

namespace jsrlab::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "0.1.0";

/// Parsed input document. Letters are one-based in the file.
struct SystemSpec {
  std::string name;
  MatrixTuple tuple;
  std::optional<MarkovChain> chain;
  std::optional<HigherOrderChain> higher_order;
};

/// Throws Error(InvalidInput) with "line L: /json/pointer: message" on any
/// syntax or schema problem, and rewraps model validation failures the same way.
SystemSpec parse_spec(std::string_view text);
SystemSpec load_spec(const std::filesystem::path& path);

/// The chain with an invariant probability attached. A chain given without nu
/// gets its unique invariant probability, or the uniform mixture of the extreme
/// ones when there are several; `note` says which.
MarkovChain with_invariant(const MarkovChain& chain, std::string* note = nullptr);

json to_json(const Word& w);
json to_json(const Matrix& m);
json to_json(const JsrBracket& b);
json to_json(const ExpectationCurve& c);
json to_json(const McEstimate& e);
json to_json(const CycleRecord& c);
json to_json(const EqualityVerdict& v);
json to_json(const DistinctCycleResult& r);
json to_json(const std::optional<OrthogonalCertificate>& c);
json to_json(const std::optional<FinitenessWitness>& w);
json to_json(const IrreducibilityVerdict& v);
json to_json(const AnalysisReport& r);

/// The two built-in example systems as spec documents.
json example_spec(int which);

/// UTC timestamp, ISO 8601.
std::string utc_timestamp();

}  // namespace jsrlab::io
