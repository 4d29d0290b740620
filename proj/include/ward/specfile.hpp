#pragma once

#include <string>

#include "json.hpp"
#include "ward/loopgroup.hpp"

namespace ward {

// A construction document plus its built solution.  `spec` is the normalized
// declarative form (records are unwrapped back to it).
struct SpecBuild {
  ExtendedSolution psi;
  bool su_normalize = false;
  nlohmann::json spec;
};

// Parses the file as JSON.  IOError when unreadable, SyntaxError on bad JSON.
nlohmann::json load_json_file(const std::string& path);

// Builds the solution a spec document declares.  Documents carry
// "construction": one of one_soliton | bt_chain | limiting | gbt_compose |
// uniton, with complex numbers written as strings ("a+bi") and rational data
// as expression strings.  SchemaError messages carry the offending field path.
SpecBuild build_from_spec(const nlohmann::json& doc);

// True when the document is a persisted construction record.
bool is_record(const nlohmann::json& doc);

// Reloadable record: the spec plus a summary (degree, poles, ranks,
// provenance).  Rebuilding from it reproduces the evaluator pointwise.
nlohmann::json make_record(const SpecBuild& built);

// Accepts either a raw spec or a record produced by make_record.
SpecBuild build_from_file(const std::string& path);

// "degree D, poles [(a+bi,m), ...], ranks [r1, ...], provenance P"
std::string build_summary(const ExtendedSolution& psi);

}  // namespace ward
