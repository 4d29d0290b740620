#include "ward/specfile.hpp"

#include <cmath>
#include <fstream>
#include <iterator>

#include "ward/backlund.hpp"
#include "ward/errors.hpp"
#include "ward/limiting.hpp"
#include "ward/rational.hpp"
#include "ward/uniton.hpp"

namespace ward {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key + ": missing");
  return *it;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + ": expected a string");
  return j.get<std::string>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

Complex as_pole(const json& j, const std::string& path) {
  std::string s = as_string(j, path);
  Complex z;
  try {
    z = complex_parse(s);
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  if (std::abs(z.imag()) < 1e-12) throw SchemaError(path + ": pole must be non-real");
  return z;
}

RationalFunction as_expr(const json& j, const std::string& path) {
  std::string s = as_string(j, path);
  try {
    return rat_parse(s);
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

// one column: a nonempty array of expression strings
std::vector<RationalFunction> as_column_entries(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of entries");
  std::vector<RationalFunction> col;
  for (size_t r = 0; r < j.size(); ++r)
    col.push_back(as_expr(j[r], path + "[" + std::to_string(r) + "]"));
  return col;
}

RationalMap as_column(const json& j, const std::string& path) {
  return map_from_rationals({as_column_entries(j, path)});
}

// a map: a nonempty array of equal-length columns, at least two rows
RationalMap as_map(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of columns");
  std::vector<std::vector<RationalFunction>> cols;
  size_t rows = 0;
  for (size_t c = 0; c < j.size(); ++c) {
    std::string cpath = path + "[" + std::to_string(c) + "]";
    auto col = as_column_entries(j[c], cpath);
    if (c == 0) rows = col.size();
    if (col.size() != rows) throw SchemaError(cpath + ": column length mismatch");
    cols.push_back(std::move(col));
  }
  if (rows < 2) throw SchemaError(path + ": needs at least two rows");
  return map_from_rationals(cols);
}

ColumnSequence as_sequence(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of columns");
  ColumnSequence seq;
  for (size_t i = 0; i < j.size(); ++i)
    seq.push_back(as_column(j[i], path + "[" + std::to_string(i) + "]"));
  return seq;
}

std::vector<int> as_int_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

ExtendedSolution build_construction(const json& doc, const std::string& path);

ExtendedSolution build_one(const json& doc, const std::string& path) {
  Complex z = as_pole(require_field(doc, "pole", path), path + ".pole");
  RationalMap v = as_map(require_field(doc, "map", path), path + ".map");
  return one_soliton(z, v);
}

ExtendedSolution build_bt(const json& doc, const std::string& path) {
  const json& base = require_field(doc, "base", path);
  ExtendedSolution psi = base.contains("construction")
                             ? build_construction(base, path + ".base")
                             : build_one(base, path + ".base");
  const json& steps = require_field(doc, "steps", path);
  if (!steps.is_array() || steps.empty())
    throw SchemaError(path + ".steps: expected a nonempty array");
  for (size_t i = 0; i < steps.size(); ++i) {
    std::string spath = path + ".steps[" + std::to_string(i) + "]";
    Complex z = as_pole(require_field(steps[i], "pole", spath), spath + ".pole");
    RationalMap v = as_map(require_field(steps[i], "map", spath), spath + ".map");
    if (v.n != psi.n) throw SchemaError(spath + ".map: row count differs from the base dimension");
    psi = bt_apply(psi, z, span_field(z, v));
  }
  return psi;
}

ExtendedSolution build_lim(const json& doc, const std::string& path) {
  LimitingData data;
  data.z = as_pole(require_field(doc, "pole", path), path + ".pole");
  data.k = as_int(require_field(doc, "k", path), path + ".k");
  if (data.k < 1) throw SchemaError(path + ".k: must be at least 1");
  const json& seqs = require_field(doc, "sequences", path);
  if (!seqs.is_array() || seqs.empty())
    throw SchemaError(path + ".sequences: expected a nonempty array");
  for (size_t i = 0; i < seqs.size(); ++i)
    data.columns.push_back(as_sequence(seqs[i], path + ".sequences[" + std::to_string(i) + "]"));
  if (doc.contains("rank_data")) data.rank_data = as_int_list(doc["rank_data"], path + ".rank_data");
  return build_chain(data).second;
}

ExtendedSolution build_gbt(const json& doc, const std::string& path) {
  const json& parts = require_field(doc, "parts", path);
  if (!parts.is_array() || parts.empty())
    throw SchemaError(path + ".parts: expected a nonempty array");
  std::vector<ExtendedSolution> built;
  for (size_t i = 0; i < parts.size(); ++i)
    built.push_back(build_construction(parts[i], path + ".parts[" + std::to_string(i) + "]"));
  return compose_multi(built);
}

ExtendedSolution build_uni(const json& doc, const std::string& path) {
  UnitonSpec spec;
  spec.n = as_int(require_field(doc, "n", path), path + ".n");
  spec.k = as_int(require_field(doc, "k", path), path + ".k");
  spec.partition = as_int_list(require_field(doc, "partition", path), path + ".partition");
  const json& seqs = require_field(doc, "sequences", path);
  if (!seqs.is_array() || seqs.empty())
    throw SchemaError(path + ".sequences: expected a nonempty array");
  for (size_t i = 0; i < seqs.size(); ++i)
    spec.maps.push_back(as_sequence(seqs[i], path + ".sequences[" + std::to_string(i) + "]"));
  if (doc.contains("extra_spanners")) {
    const json& ex = doc["extra_spanners"];
    if (!ex.is_array()) throw SchemaError(path + ".extra_spanners: expected an array");
    for (size_t i = 0; i < ex.size(); ++i)
      spec.extra_spanners.push_back(
          as_column(ex[i], path + ".extra_spanners[" + std::to_string(i) + "]"));
  }
  return uniton_build(spec);
}

ExtendedSolution build_construction(const json& doc, const std::string& path) {
  std::string kind = as_string(require_field(doc, "construction", path), path + ".construction");
  if (kind == "one_soliton") return build_one(doc, path);
  if (kind == "bt_chain") return build_bt(doc, path);
  if (kind == "limiting") return build_lim(doc, path);
  if (kind == "gbt_compose") return build_gbt(doc, path);
  if (kind == "uniton") return build_uni(doc, path);
  throw SchemaError(path + ".construction: unknown construction '" + kind + "'");
}

}  // namespace

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SyntaxError("invalid JSON in " + path);
  return doc;
}

SpecBuild build_from_spec(const nlohmann::json& doc) {
  SpecBuild out;
  if (doc.contains("su_normalize")) {
    if (!doc["su_normalize"].is_boolean())
      throw SchemaError("$.su_normalize: expected a boolean");
    out.su_normalize = doc["su_normalize"].get<bool>();
  }
  out.psi = build_construction(doc, "$");
  out.spec = doc;
  return out;
}

bool is_record(const nlohmann::json& doc) {
  return doc.is_object() && doc.contains("record_version");
}

nlohmann::json make_record(const SpecBuild& built) {
  json rec;
  rec["record_version"] = 1;
  rec["spec"] = built.spec;
  json summary;
  summary["dimension"] = built.psi.n;
  PoleData pd = pole_data(built.psi);
  summary["degree"] = pd.degree();
  json poles = json::array();
  for (const auto& e : pd.poles) poles.push_back({complex_print(e.z), e.mult});
  summary["poles"] = poles;
  json ranks = json::array();
  for (const auto& f : built.psi.factors) ranks.push_back(f.pi->rank());
  summary["ranks"] = ranks;
  summary["provenance"] = built.psi.provenance;
  rec["summary"] = summary;
  return rec;
}

SpecBuild build_from_file(const std::string& path) {
  json doc = load_json_file(path);
  if (is_record(doc)) return build_from_spec(require_field(doc, "spec", "$"));
  return build_from_spec(doc);
}

std::string build_summary(const ExtendedSolution& psi) {
  PoleData pd = pole_data(psi);
  std::string out = "degree " + std::to_string(pd.degree()) + ", poles [";
  for (size_t i = 0; i < pd.poles.size(); ++i) {
    if (i) out += ", ";
    out += "(" + complex_print(pd.poles[i].z) + "," + std::to_string(pd.poles[i].mult) + ")";
  }
  out += "], ranks [";
  for (size_t i = 0; i < psi.factors.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(psi.factors[i].pi->rank());
  }
  out += "], provenance " + psi.provenance;
  return out;
}

}  // namespace ward
