#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hadfem/bench.hpp"

namespace hadfem {

inline constexpr const char* kVersion = "0.1.0";

struct ReportMeta {
  std::string version = kVersion;
  std::string command;
  std::string timestamp;  // ISO 8601, UTC

  static ReportMeta now(std::string command);
};

const char* to_string(BasisKind k);
const char* to_string(Formulation f);
const char* to_string(Method m);
const char* to_string(BoundaryMode m);

// Canonical machine-readable form: {"meta": {...}, "records": [...]}.
// Absent optional values are serialized as null; re-serializing the parsed
// document reproduces it byte for byte.
nlohmann::json to_json(const RunRecord& rec);
nlohmann::json report_json(const ReportMeta& meta,
                           const std::vector<RunRecord>& records);

// Fixed column set, one row per record, 12 significant digits. Optional
// values that are absent leave their cell empty.
std::string report_csv(const std::vector<RunRecord>& records);

// 12-significant-digit formatting shared by the CSV writer and summaries.
std::string format_sig(double v);

}  // namespace hadfem
