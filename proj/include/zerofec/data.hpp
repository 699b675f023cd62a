#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zerofec/errors.hpp"
#include "zerofec/text.hpp"
#include "zerofec/types.hpp"

namespace zerofec {

enum class VeracityLabel { Supports, Refutes };

inline std::string to_string(VeracityLabel label) {
  return label == VeracityLabel::Supports ? "SUPPORTS" : "REFUTES";
}

inline VeracityLabel veracity_label_from_string(const std::string& s) {
  if (s == "SUPPORTS") return VeracityLabel::Supports;
  if (s == "REFUTES") return VeracityLabel::Refutes;
  throw ConfigError("unknown veracity label '" + s + "'");
}

// One evaluation record: a claim, the evidence it must agree with, and
// the human-written gold correction. SUPPORTS records keep the claim as
// their own gold modulo whitespace.
struct DatasetRecord {
  std::string id;
  std::string claim;
  std::string evidence;
  std::string gold_correction;
  VeracityLabel label = VeracityLabel::Refutes;
};

// Maps the library's field names onto whatever keys a JSONL file uses.
struct FieldMap {
  std::string id = "id";
  std::string claim = "claim";
  std::string evidence = "evidence";
  std::string gold_correction = "gold_correction";
  std::string label = "label";
};

struct LoadIssue {
  std::size_t line = 0;
  std::string field;
  std::string detail;
};

struct LoadResult {
  std::vector<DatasetRecord> records;
  std::vector<LoadIssue> issues;
};

namespace detail {

inline std::string json_string_field(const nlohmann::json& obj,
                                     const std::string& key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(line, "missing field '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer())
    return std::to_string(it->get<long long>());
  throw ParseError(line, "field '" + key + "' is not a string");
}

// Joins evidence given either as a string or as an array of strings.
inline std::string json_evidence_field(const nlohmann::json& obj,
                                       const std::string& key,
                                       std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(line, "missing field '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_array()) {
    std::string joined;
    for (const auto& part : *it) {
      if (!part.is_string())
        throw ParseError(line, "field '" + key + "' mixes non-strings");
      if (!joined.empty()) joined += " ";
      joined += part.get<std::string>();
    }
    return joined;
  }
  throw ParseError(line, "field '" + key + "' is not a string or array");
}

inline std::string collapse_ws(const std::string& s) {
  std::string out;
  bool in_space = true;
  for (char ch : s) {
    if (is_ascii_space(ch)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(ch);
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline void check_record(const DatasetRecord& rec, std::size_t line) {
  if (is_blank(rec.claim))
    throw InvariantViolation(line, "claim", "must be non-empty");
  if (is_blank(rec.evidence))
    throw InvariantViolation(line, "evidence", "must be non-empty");
  if (is_blank(rec.gold_correction))
    throw InvariantViolation(line, "gold_correction", "must be non-empty");
  if (rec.label == VeracityLabel::Supports &&
      collapse_ws(rec.claim) != collapse_ws(rec.gold_correction))
    throw InvariantViolation(
        line, "gold_correction",
        "SUPPORTS record must keep the claim as its own gold");
}

}  // namespace detail

// Reads JSONL; bad lines become issues rather than stopping the load.
inline LoadResult load_dataset(std::istream& in,
                               const FieldMap& fields = FieldMap{}) {
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    try {
      nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
      if (obj.is_discarded()) throw ParseError(lineno, "not valid JSON");
      if (!obj.is_object()) throw ParseError(lineno, "line is not an object");
      DatasetRecord rec;
      rec.id = detail::json_string_field(obj, fields.id, lineno);
      rec.claim = detail::json_string_field(obj, fields.claim, lineno);
      rec.evidence = detail::json_evidence_field(obj, fields.evidence, lineno);
      rec.gold_correction =
          detail::json_string_field(obj, fields.gold_correction, lineno);
      std::string raw_label =
          detail::json_string_field(obj, fields.label, lineno);
      try {
        rec.label = veracity_label_from_string(raw_label);
      } catch (const ConfigError&) {
        throw InvariantViolation(lineno, fields.label,
                                 "must be SUPPORTS or REFUTES, got '" +
                                     raw_label + "'");
      }
      detail::check_record(rec, lineno);
      result.records.push_back(std::move(rec));
    } catch (const InvariantViolation& e) {
      result.issues.push_back({e.line(), e.field(), e.what()});
    } catch (const ParseError& e) {
      result.issues.push_back({e.line(), "", e.what()});
    }
  }
  return result;
}

// Same as load_dataset but the first problem raises.
inline std::vector<DatasetRecord> load_dataset_strict(
    std::istream& in, const FieldMap& fields = FieldMap{}) {
  LoadResult result = load_dataset(in, fields);
  if (!result.issues.empty()) {
    const LoadIssue& first = result.issues.front();
    if (first.field.empty()) throw ParseError(first.line, first.detail);
    throw InvariantViolation(first.line, first.field, first.detail);
  }
  return std::move(result.records);
}

inline LoadResult load_dataset_file(const std::string& path,
                                    const FieldMap& fields = FieldMap{}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  return load_dataset(in, fields);
}

inline std::string serialize_record(const DatasetRecord& rec) {
  nlohmann::ordered_json obj;
  obj["id"] = rec.id;
  obj["claim"] = rec.claim;
  obj["evidence"] = rec.evidence;
  obj["gold_correction"] = rec.gold_correction;
  obj["label"] = to_string(rec.label);
  return obj.dump();
}

struct DatasetStats {
  std::size_t total = 0;
  std::size_t supports = 0;
  std::size_t refutes = 0;
};

inline DatasetStats dataset_stats(const std::vector<DatasetRecord>& records) {
  DatasetStats stats;
  stats.total = records.size();
  for (const DatasetRecord& rec : records) {
    if (rec.label == VeracityLabel::Supports)
      ++stats.supports;
    else
      ++stats.refutes;
  }
  return stats;
}

inline CorrectionTask to_task(const DatasetRecord& rec) {
  return {rec.id, rec.claim, rec.evidence};
}

}  // namespace zerofec
