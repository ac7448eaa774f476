#include "bisam/report.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>

#include "bisam/errors.hpp"

namespace bisam {

namespace detail_json {

const char* mode_name(CostMode mode) {
  return mode == CostMode::observed ? "observed" : "expectation";
}

CostMode parse_mode(const std::string& s) {
  if (s == "observed") return CostMode::observed;
  if (s == "expectation") return CostMode::expectation;
  throw ParseError(0, fmt::format("unknown cost mode '{}'", s));
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace detail_json

using detail_json::mode_name;
using detail_json::optional_from;
using detail_json::optional_json;
using detail_json::parse_mode;

void to_json(json& j, const PairKey& p) { j = json::array({p.first, p.second}); }

void from_json(const json& j, PairKey& p) {
  p.first = j.at(0).get<ItemId>();
  p.second = j.at(1).get<ItemId>();
}

void to_json(json& j, const ReportedPair& p) {
  j = json{{"pair", p.pair},
           {"samples", p.samples},
           {"exact", p.exact},
           {"similarity", p.estimated_similarity}};
}

void from_json(const json& j, ReportedPair& p) {
  j.at("pair").get_to(p.pair);
  j.at("samples").get_to(p.samples);
  j.at("exact").get_to(p.exact);
  j.at("similarity").get_to(p.estimated_similarity);
}

void to_json(json& j, const CostReport& c) {
  j = json{{"mode", mode_name(c.mode)},
           {"item_occurrences", c.item_occurrences},
           {"distinct_items", c.distinct_items},
           {"samples", c.samples},
           {"distinct_pairs", c.distinct_pairs},
           {"bisam_time", c.bisam_time},
           {"bisam_space", c.bisam_space},
           {"exact_time", optional_json(c.exact_time)},
           {"exact_space", optional_json(c.exact_space)},
           {"time_ratio", optional_json(c.time_ratio())},
           {"space_ratio", optional_json(c.space_ratio())},
           {"output_count", c.output_count}};
}

void from_json(const json& j, CostReport& c) {
  c.mode = parse_mode(j.at("mode").get<std::string>());
  j.at("item_occurrences").get_to(c.item_occurrences);
  j.at("distinct_items").get_to(c.distinct_items);
  j.at("samples").get_to(c.samples);
  j.at("distinct_pairs").get_to(c.distinct_pairs);
  j.at("bisam_time").get_to(c.bisam_time);
  j.at("bisam_space").get_to(c.bisam_space);
  c.exact_time = optional_from<Count>(j.at("exact_time"));
  c.exact_space = optional_from<Count>(j.at("exact_space"));
  j.at("output_count").get_to(c.output_count);
}

void to_json(json& j, const DatasetStats& s) {
  j = json{{"distinct_items", s.distinct_items},
           {"transactions", s.num_transactions},
           {"item_occurrences", s.item_occurrences},
           {"avg_transaction_size", s.avg_transaction_size},
           {"max_transaction_size", s.max_transaction_size},
           {"avg_item_support", s.avg_item_support}};
}

void to_json(json& j, const ErrorProfile& e) {
  json fp = json::array();
  for (const auto& [ratio, p] : e.false_positive_at_ratio) {
    fp.push_back(json{{"ratio", ratio}, {"probability", p}});
  }
  j = json{{"mu", e.mu},
           {"false_negative", e.false_negative},
           {"false_negative_any_sample", e.false_negative_any_sample},
           {"chernoff_bound", e.chernoff_bound},
           {"false_positive", fp}};
}

}  // namespace bisam

namespace bisam::report {

using detail_json::mode_name;
using detail_json::optional_json;

namespace {

std::string optional_number(const std::optional<double>& v) {
  return v ? number(*v) : "n/a";
}

std::string optional_count(const std::optional<Count>& v) {
  return v ? std::to_string(*v) : "n/a";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Table pairs_table(const std::vector<ReportedPair>& pairs) {
  Table t;
  t.header = {"item_i", "item_j", "samples", "exact", "similarity"};
  for (const auto& p : pairs) {
    t.rows.push_back({std::to_string(p.pair.first), std::to_string(p.pair.second),
                      std::to_string(p.samples), p.exact ? "yes" : "no",
                      number(p.estimated_similarity)});
  }
  return t;
}

std::string run_line(const RunInfo& r) {
  return fmt::format("measure={} delta={} mu={} seed={}", r.measure, number(r.delta), r.mu,
                     r.seed);
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "table") return Format::table;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw ConfigError(fmt::format("unknown output format '{}'", text));
}

std::string number(double x) { return fmt::format("{:.4g}", x); }

std::string render(const Table& table, Format format) {
  std::string out;
  if (format == Format::csv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out += ',';
        out += csv_field(cells[k]);
      }
      out += '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return out;
  }
  std::vector<std::size_t> widths(table.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size() && k < widths.size(); ++k) {
      widths[k] = std::max(widths[k], cells[k].size());
    }
  };
  measure(table.header);
  for (const auto& row : table.rows) measure(row);
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) text += "  ";
      text += fmt::format("{:>{}}", cells[k], k < widths.size() ? widths[k] : 0);
    }
    out += text + '\n';
  };
  line(table.header);
  std::size_t total = 0;
  for (const auto w : widths) total += w;
  out += std::string(total + 2 * (widths.empty() ? 0 : widths.size() - 1), '-') + '\n';
  for (const auto& row : table.rows) line(row);
  return out;
}

void to_json(json& j, const RunInfo& r) {
  j = json{{"measure", r.measure}, {"delta", r.delta}, {"mu", r.mu}, {"seed", r.seed}};
}

void from_json(const json& j, RunInfo& r) {
  j.at("measure").get_to(r.measure);
  j.at("delta").get_to(r.delta);
  j.at("mu").get_to(r.mu);
  j.at("seed").get_to(r.seed);
}

void to_json(json& j, const MiningReport& r) {
  j = json{{"run", r.run}, {"pairs", r.pairs}, {"cost", r.cost}};
}

void from_json(const json& j, MiningReport& r) {
  j.at("run").get_to(r.run);
  j.at("pairs").get_to(r.pairs);
  j.at("cost").get_to(r.cost);
}

void to_json(json& j, const ExactPairsReport& r) {
  json rows = json::array();
  for (const auto& row : r.pairs) {
    rows.push_back(json{{"pair", row.pair},
                        {"co_occurrences", row.co_occurrences},
                        {"similarity", row.similarity}});
  }
  j = json{{"measure", r.measure},
           {"delta", r.delta},
           {"pairs", rows},
           {"exact_time", r.exact_time},
           {"exact_space", r.exact_space}};
}

void from_json(const json& j, ExactPairsReport& r) {
  j.at("measure").get_to(r.measure);
  j.at("delta").get_to(r.delta);
  r.pairs.clear();
  for (const auto& row : j.at("pairs")) {
    ExactPairsReport::Row out;
    row.at("pair").get_to(out.pair);
    row.at("co_occurrences").get_to(out.co_occurrences);
    row.at("similarity").get_to(out.similarity);
    r.pairs.push_back(out);
  }
  j.at("exact_time").get_to(r.exact_time);
  j.at("exact_space").get_to(r.exact_space);
}

void to_json(json& j, const CompareReport& r) {
  j = json{{"dataset", r.dataset},
           {"run", r.run},
           {"cost", r.cost},
           {"lsh_comparisons", r.lsh_comparisons}};
}

void from_json(const json& j, CompareReport& r) {
  j.at("dataset").get_to(r.dataset);
  j.at("run").get_to(r.run);
  j.at("cost").get_to(r.cost);
  j.at("lsh_comparisons").get_to(r.lsh_comparisons);
}

void to_json(json& j, const AdaptiveReport& r) {
  json stream = json::array();
  for (const auto& e : r.emissions) {
    stream.push_back(
        json{{"pair", e.pair}, {"trigger", e.trigger}, {"transaction", e.transaction}});
  }
  j = json{{"run", r.run},
           {"stop", r.stop},
           {"stop_delta", optional_json(r.stop_delta)},
           {"peak_queue_size", r.peak_queue_size},
           {"emissions", stream},
           {"reported", r.reported}};
}

void to_json(json& j, const IOMiningReport& r) {
  auto sort_json = [](const extmem::SortReport& s) {
    return json{{"records", s.records},
                {"runs", s.runs},
                {"merge_passes", s.merge_passes},
                {"pages_read", s.pages_read},
                {"pages_written", s.pages_written}};
  };
  j = json{{"run", r.run},
           {"memory_budget", r.memory_budget},
           {"page_size", r.page_size},
           {"pairs", r.pairs},
           {"io",
            {{"pages_read", r.cost.pages_read},
             {"pages_written", r.cost.pages_written},
             {"item_records", r.cost.item_records},
             {"sampled_pairs", r.cost.sampled_pairs},
             {"transactions", r.cost.transactions},
             {"distinct_items", r.cost.distinct_items},
             {"item_sort", sort_json(r.cost.item_sort)},
             {"transaction_sort", sort_json(r.cost.transaction_sort)},
             {"pair_sort", sort_json(r.cost.pair_sort)},
             {"page_bound", r.page_bound}}}};
}

std::string render(const MiningReport& r, Format format) {
  if (format == Format::json) return json(r).dump(2) + '\n';
  std::string out;
  if (format == Format::table) {
    out += run_line(r.run) + '\n';
    out += fmt::format("N={} N'={} distinct_pairs={} output={}\n\n", r.cost.item_occurrences,
                       number(r.cost.samples), number(r.cost.distinct_pairs),
                       number(r.cost.output_count));
  }
  return out + render(pairs_table(r.pairs), format);
}

std::string render(const ExactPairsReport& r, Format format) {
  if (format == Format::json) return json(r).dump(2) + '\n';
  Table t;
  t.header = {"item_i", "item_j", "co_occurrences", "similarity"};
  for (const auto& row : r.pairs) {
    t.rows.push_back({std::to_string(row.pair.first), std::to_string(row.pair.second),
                      std::to_string(row.co_occurrences), number(row.similarity)});
  }
  std::string out;
  if (format == Format::table) {
    out += fmt::format("measure={} delta={} exact_time={} exact_space={}\n\n", r.measure,
                       number(r.delta), r.exact_time, r.exact_space);
  }
  return out + render(t, format);
}

std::string render(const CompareReport& r, Format format) {
  if (format == Format::json) return json(r).dump(2) + '\n';
  const CostReport& c = r.cost;
  Table t;
  t.header = {"dataset",     "mode",        "time_bisam", "time_exact", "time_ratio",
              "space_bisam", "space_exact", "space_ratio", "delta",     "output"};
  t.rows.push_back({r.dataset, mode_name(c.mode), number(c.bisam_time),
                    optional_count(c.exact_time), optional_number(c.time_ratio()),
                    number(c.bisam_space), optional_count(c.exact_space),
                    optional_number(c.space_ratio()), number(r.run.delta),
                    number(c.output_count)});
  std::string out = render(t, format);
  if (format == Format::table) {
    out += fmt::format("\n{}\nLSH reference: {} signature comparisons\n", run_line(r.run),
                       r.lsh_comparisons);
  }
  return out;
}

std::string render(const DatasetStats& s, Format format) {
  if (format == Format::json) return json(s).dump(2) + '\n';
  Table t;
  t.header = {"distinct_items", "transactions", "item_occurrences", "avg_size", "max_size",
              "avg_support"};
  t.rows.push_back({std::to_string(s.distinct_items), std::to_string(s.num_transactions),
                    std::to_string(s.item_occurrences), number(s.avg_transaction_size),
                    std::to_string(s.max_transaction_size), number(s.avg_item_support)});
  return render(t, format);
}

std::string render(const std::vector<ErrorProfile>& rows, Format format) {
  if (format == Format::json) return json(rows).dump(2) + '\n';
  Table t;
  t.header = {"mu", "false_negative", "any_sample_miss", "chernoff_bound"};
  if (!rows.empty()) {
    for (const auto& [ratio, p] : rows.front().false_positive_at_ratio) {
      t.header.push_back(fmt::format("false_positive@{}", number(ratio)));
    }
  }
  for (const auto& e : rows) {
    std::vector<std::string> row{std::to_string(e.mu), number(e.false_negative),
                                 number(e.false_negative_any_sample), number(e.chernoff_bound)};
    for (const auto& [ratio, p] : e.false_positive_at_ratio) row.push_back(number(p));
    t.rows.push_back(std::move(row));
  }
  return render(t, format);
}

std::string render(const AdaptiveReport& r, Format format) {
  if (format == Format::json) return json(r).dump(2) + '\n';
  Table t;
  t.header = {"rank", "item_i", "item_j", "trigger", "transaction"};
  for (std::size_t k = 0; k < r.emissions.size(); ++k) {
    const auto& e = r.emissions[k];
    t.rows.push_back({std::to_string(k + 1), std::to_string(e.pair.first),
                      std::to_string(e.pair.second), number(e.trigger),
                      std::to_string(e.transaction)});
  }
  std::string out;
  if (format == Format::table) {
    out += fmt::format("measure={} mu={} seed={} stop={} stop_delta={} peak_queue={}\n\n",
                       r.run.measure, r.run.mu, r.run.seed, r.stop,
                       optional_number(r.stop_delta), r.peak_queue_size);
  }
  out += render(t, format);
  if (format == Format::table) {
    out += fmt::format("\nreported at stop_delta ({} pairs)\n\n", r.reported.size());
    out += render(pairs_table(r.reported), format);
  }
  return out;
}

std::string render(const IOMiningReport& r, Format format) {
  if (format == Format::json) return json(r).dump(2) + '\n';
  std::string out;
  if (format == Format::table) {
    const auto& c = r.cost;
    out += run_line(r.run) + '\n';
    out += fmt::format(
        "M={} B={} N={} N'={} pages_read={} pages_written={} bound={} merge_passes={}/{}/{}\n\n",
        r.memory_budget, r.page_size, c.item_records, c.sampled_pairs, c.pages_read,
        c.pages_written, number(r.page_bound), c.item_sort.merge_passes,
        c.transaction_sort.merge_passes, c.pair_sort.merge_passes);
  }
  return out + render(pairs_table(r.pairs), format);
}

}  // namespace bisam::report
