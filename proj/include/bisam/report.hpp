#pragma once

// Report documents produced by the command-line tool, rendered as an
// aligned table, CSV, or JSON.
//
// JSON keys are stable. Reals are written at full precision in JSON and at
// four significant digits in tables and CSV; unavailable values are null
// in JSON and "n/a" elsewhere.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "bisam/adaptive.hpp"
#include "bisam/cost.hpp"
#include "bisam/dataset.hpp"
#include "bisam/iobisam.hpp"
#include "bisam/sampler.hpp"
#include "bisam/stats.hpp"

namespace bisam {

// Serializers for core types live beside them for argument-dependent lookup.
using json = nlohmann::json;

void to_json(json& j, const PairKey& p);
void from_json(const json& j, PairKey& p);
void to_json(json& j, const ReportedPair& p);
void from_json(const json& j, ReportedPair& p);
void to_json(json& j, const CostReport& c);
void from_json(const json& j, CostReport& c);
void to_json(json& j, const DatasetStats& s);
void to_json(json& j, const ErrorProfile& e);

}  // namespace bisam

namespace bisam::report {

using json = nlohmann::json;

enum class Format { table, csv, json };

/// Throws ConfigError for anything but "table", "csv" or "json".
[[nodiscard]] Format parse_format(std::string_view text);

/// Four significant digits.
[[nodiscard]] std::string number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Aligned text or CSV; the JSON format is handled per document.
[[nodiscard]] std::string render(const Table& table, Format format);

struct RunInfo {
  std::string measure;
  double delta = 0.0;
  Count mu = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const RunInfo&, const RunInfo&) = default;
};

struct MiningReport {
  RunInfo run;
  std::vector<ReportedPair> pairs;
  CostReport cost;

  friend bool operator==(const MiningReport&, const MiningReport&) = default;
};

struct ExactPairsReport {
  std::string measure;
  double delta = 0.0;
  struct Row {
    PairKey pair;
    Count co_occurrences = 0;
    double similarity = 0.0;
    friend bool operator==(const Row&, const Row&) = default;
  };
  std::vector<Row> pairs;
  Count exact_time = 0;
  Count exact_space = 0;

  friend bool operator==(const ExactPairsReport&, const ExactPairsReport&) = default;
};

struct CompareReport {
  std::string dataset;
  RunInfo run;
  CostReport cost;
  /// Signature comparisons n(n - 1) / 2 of an all-pairs LSH scan.
  Count lsh_comparisons = 0;

  friend bool operator==(const CompareReport&, const CompareReport&) = default;
};

struct AdaptiveReport {
  RunInfo run;
  std::string stop;
  std::vector<AdaptiveEmission> emissions;
  std::optional<double> stop_delta;
  std::vector<ReportedPair> reported;
  Count peak_queue_size = 0;
};

struct IOMiningReport {
  RunInfo run;
  Count memory_budget = 0;
  Count page_size = 0;
  std::vector<ReportedPair> pairs;
  IOCostReport cost;
  double page_bound = 0.0;
};

void to_json(json& j, const RunInfo& r);
void from_json(const json& j, RunInfo& r);
void to_json(json& j, const MiningReport& r);
void from_json(const json& j, MiningReport& r);
void to_json(json& j, const ExactPairsReport& r);
void from_json(const json& j, ExactPairsReport& r);
void to_json(json& j, const CompareReport& r);
void from_json(const json& j, CompareReport& r);
void to_json(json& j, const AdaptiveReport& r);
void to_json(json& j, const IOMiningReport& r);

[[nodiscard]] std::string render(const MiningReport& r, Format format);
[[nodiscard]] std::string render(const ExactPairsReport& r, Format format);
[[nodiscard]] std::string render(const CompareReport& r, Format format);
[[nodiscard]] std::string render(const DatasetStats& s, Format format);
[[nodiscard]] std::string render(const std::vector<ErrorProfile>& rows, Format format);
[[nodiscard]] std::string render(const AdaptiveReport& r, Format format);
[[nodiscard]] std::string render(const IOMiningReport& r, Format format);

}  // namespace bisam::report
