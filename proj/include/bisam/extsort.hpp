#pragma once

// External merge sort over fixed-width binary record files, with every page
// transfer counted.
//
// Record layout: W unsigned 64-bit fields, little-endian, no header. A page
// holds B records; the memory budget M is measured in records. Run
// formation sorts M records at a time; each merge pass combines up to
// floor(M/B) - 1 runs (one input page per run plus one output page).

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <queue>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "bisam/types.hpp"

namespace bisam::extmem {

template <std::size_t W>
using Record = std::array<std::uint64_t, W>;

struct SortBudget {
  Count memory_records = 0;  // M
  Count page_records = 0;    // B

  /// Throws ConfigError unless B >= 1 and M >= 3B.
  void validate() const;
  [[nodiscard]] Count fan_in() const noexcept { return memory_records / page_records - 1; }
};

struct IOCounter {
  Count pages_read = 0;
  Count pages_written = 0;
};

struct SortReport {
  Count records = 0;
  Count runs = 0;
  Count merge_passes = 0;
  Count pages_read = 0;
  Count pages_written = 0;

  /// Passes over the data, run formation included.
  [[nodiscard]] Count passes() const noexcept { return records == 0 ? 0 : 1 + merge_passes; }
};

/// Upper bound on passes: 1 + ceil(log_{floor(M/B)-1} ceil(N/M)).
[[nodiscard]] Count sort_pass_bound(Count records, const SortBudget& budget);

/// Appends records to a file one page at a time.
class PageWriter {
 public:
  PageWriter(const std::filesystem::path& path, std::size_t width, Count page_records,
             IOCounter& io);
  ~PageWriter();
  PageWriter(const PageWriter&) = delete;
  PageWriter& operator=(const PageWriter&) = delete;

  void push(const std::uint64_t* record);
  /// Flushes the last partial page and closes the file.
  void finish();
  [[nodiscard]] Count records() const noexcept { return records_; }

 private:
  void flush();

  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t width_;
  Count page_records_;
  IOCounter& io_;
  std::vector<std::uint64_t> page_;
  std::size_t fill_ = 0;
  Count records_ = 0;
  bool finished_ = false;
};

/// Reads records from a file one page at a time.
class PageReader {
 public:
  PageReader(const std::filesystem::path& path, std::size_t width, Count page_records,
             IOCounter& io);

  /// Pointer to the next record's fields, or nullptr at end of file. Valid
  /// until the following call.
  const std::uint64_t* next();
  [[nodiscard]] bool at_end();

 private:
  bool refill();

  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t width_;
  Count page_records_;
  IOCounter& io_;
  std::vector<std::uint64_t> page_;
  std::size_t pos_ = 0;
  std::size_t fill_ = 0;
  bool eof_ = false;
};

template <std::size_t W>
class RecordWriter {
 public:
  RecordWriter(const std::filesystem::path& path, Count page_records, IOCounter& io)
      : writer_(path, W, page_records, io) {}
  void push(const Record<W>& r) { writer_.push(r.data()); }
  void finish() { writer_.finish(); }
  [[nodiscard]] Count records() const noexcept { return writer_.records(); }

 private:
  PageWriter writer_;
};

template <std::size_t W>
class RecordReader {
 public:
  RecordReader(const std::filesystem::path& path, Count page_records, IOCounter& io)
      : reader_(path, W, page_records, io) {}
  bool next(Record<W>& r) {
    const std::uint64_t* p = reader_.next();
    if (p == nullptr) return false;
    std::copy(p, p + W, r.begin());
    return true;
  }

 private:
  PageReader reader_;
};

/// Creates an empty file (zero records, zero pages).
void create_empty(const std::filesystem::path& path);

/// Stable external sort of `input` into `output`. Intermediate runs live in
/// `scratch` under names prefixed by `tag` and are removed as they are
/// consumed. Page transfers are added to `io` and summarized in the report.
template <std::size_t W, typename Less>
SortReport external_sort(const std::filesystem::path& input, const std::filesystem::path& output,
                         Less less, const SortBudget& budget,
                         const std::filesystem::path& scratch, const std::string& tag,
                         IOCounter& io) {
  budget.validate();
  const IOCounter start = io;
  SortReport report;
  auto finish = [&] {
    report.pages_read = io.pages_read - start.pages_read;
    report.pages_written = io.pages_written - start.pages_written;
    return report;
  };
  auto run_path = [&](Count pass, Count index) {
    return scratch / fmt::format("{}-run{}-{}.bin", tag, pass, index);
  };

  // Run formation.
  std::vector<std::filesystem::path> runs;
  {
    RecordReader<W> in(input, budget.page_records, io);
    std::vector<Record<W>> buffer;
    buffer.reserve(budget.memory_records);
    Record<W> rec;
    bool more = in.next(rec);
    while (more) {
      buffer.clear();
      while (more && buffer.size() < budget.memory_records) {
        buffer.push_back(rec);
        more = in.next(rec);
      }
      report.records += buffer.size();
      std::stable_sort(buffer.begin(), buffer.end(), less);
      // A lone run is the output itself.
      const auto path = (!more && runs.empty()) ? output : run_path(0, runs.size());
      RecordWriter<W> out(path, budget.page_records, io);
      for (const auto& r : buffer) out.push(r);
      out.finish();
      runs.push_back(path);
    }
  }
  report.runs = runs.size();
  if (runs.empty()) {
    create_empty(output);
    return finish();
  }

  // Merge passes; consecutive groups keep the merge stable.
  const Count fan_in = budget.fan_in();
  while (runs.size() > 1) {
    ++report.merge_passes;
    std::vector<std::filesystem::path> next;
    const bool last_pass = runs.size() <= fan_in;
    for (std::size_t begin = 0; begin < runs.size(); begin += fan_in) {
      const std::size_t end = std::min<std::size_t>(runs.size(), begin + fan_in);
      const auto path = last_pass ? output : run_path(report.merge_passes, next.size());
      {
        std::vector<RecordReader<W>> readers;
        readers.reserve(end - begin);
        for (std::size_t k = begin; k < end; ++k) {
          readers.emplace_back(runs[k], budget.page_records, io);
        }
        using Head = std::pair<Record<W>, std::size_t>;
        auto later = [&](const Head& a, const Head& b) {
          if (less(b.first, a.first)) return true;
          if (less(a.first, b.first)) return false;
          return a.second > b.second;
        };
        std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
        for (std::size_t k = 0; k < readers.size(); ++k) {
          Record<W> r;
          if (readers[k].next(r)) heap.emplace(r, k);
        }
        RecordWriter<W> out(path, budget.page_records, io);
        while (!heap.empty()) {
          auto [r, k] = heap.top();
          heap.pop();
          out.push(r);
          if (readers[k].next(r)) heap.emplace(r, k);
        }
        out.finish();
      }
      for (std::size_t k = begin; k < end; ++k) {
        std::filesystem::remove(runs[k]);
      }
      next.push_back(path);
    }
    runs = std::move(next);
  }
  return finish();
}

}  // namespace bisam::extmem
