#include "bisam/iobisam.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <random>

#include <fmt/format.h>
#include <unistd.h>

#include "bisam/dataset.hpp"
#include "bisam/errors.hpp"
#include "bisam/rng.hpp"

namespace bisam {

namespace fs = std::filesystem;
using extmem::Record;
using extmem::RecordReader;
using extmem::RecordWriter;

namespace {

// A fresh directory removed with everything in it on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& parent) {
    static std::atomic<unsigned> serial{0};
    const fs::path base = parent.empty() ? fs::temp_directory_path() : parent;
    std::error_code ec;
    fs::create_directories(base, ec);
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::random_device rd;
      path_ = base / fmt::format("bisam-{}-{}-{:08x}", ::getpid(), serial++, rd());
      if (fs::create_directory(path_, ec)) {
        return;
      }
    }
    throw IoError(fmt::format("cannot create a scratch directory under '{}'", base.string()));
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  [[nodiscard]] const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

template <std::size_t W>
struct Lexicographic {
  bool operator()(const Record<W>& a, const Record<W>& b) const noexcept { return a < b; }
};

}  // namespace

void IOConfig::validate() const {
  budget().validate();
  sampling.validate();
}

double io_bound(Count item_records, Count sampled_pairs, const extmem::SortBudget& budget) {
  const Count records = item_records + sampled_pairs;
  const Count pages = std::max<Count>(1, (records + budget.page_records - 1) / budget.page_records);
  const Count runs =
      std::max<Count>(1, (records + budget.memory_records - 1) / budget.memory_records);
  const auto fan_in = static_cast<double>(budget.fan_in());
  const double depth = fan_in > 1.0 ? std::log(static_cast<double>(runs)) / std::log(fan_in)
                                    : static_cast<double>(runs - 1);
  return kIOBoundConstant * static_cast<double>(pages) * (1.0 + depth);
}

IOBiSamResult run_io_bisam(const fs::path& input, const IOConfig& config,
                           const std::optional<fs::path>& report_path) {
  config.validate();
  const SamplingConfig& sampling = config.sampling;
  const extmem::SortBudget budget = config.budget();
  const Count B = budget.page_records;
  const ScratchDir scratch(config.scratch_dir);
  const fs::path& dir = scratch.path();

  IOBiSamResult result;
  IOCostReport& cost = result.cost;
  extmem::IOCounter io;

  // Stage 0: <item, tid>.
  const fs::path raw = dir / "s0-item-tid.bin";
  {
    auto source = open_lines(input);
    RecordWriter<2> out(raw, B, io);
    std::string line;
    std::size_t line_number = 0;
    while (source->next(line)) {
      ++line_number;
      const auto items = parse_transaction_line(line, line_number);
      if (items.empty()) continue;
      for (const ItemId item : items) {
        out.push({item, cost.transactions});
      }
      ++cost.transactions;
    }
    out.finish();
    cost.item_records = out.records();
  }

  // Stage 1.
  const fs::path by_item = dir / "s1-by-item.bin";
  cost.item_sort =
      extmem::external_sort<2>(raw, by_item, Lexicographic<2>{}, budget, dir, "s1", io);
  fs::remove(raw);

  // Stage 2: supports, then the join back onto the item-sorted stream.
  const fs::path supports_file = dir / "s2-item-support.bin";
  {
    RecordReader<2> in(by_item, B, io);
    RecordWriter<2> out(supports_file, B, io);
    Record<2> rec;
    bool more = in.next(rec);
    while (more) {
      const std::uint64_t item = rec[0];
      Count support = 0;
      while (more && rec[0] == item) {
        ++support;
        more = in.next(rec);
      }
      out.push({item, support});
    }
    out.finish();
    cost.distinct_items = out.records();
  }
  const fs::path annotated = dir / "s2-tid-support-item.bin";
  {
    RecordReader<2> in(by_item, B, io);
    RecordReader<2> supports(supports_file, B, io);
    RecordWriter<3> out(annotated, B, io);
    Record<2> rec;
    Record<2> current{};
    bool have = false;
    while (in.next(rec)) {
      while (!have || current[0] != rec[0]) {
        if (!supports.next(current)) {
          throw Error("support side file is out of step with the item stream");
        }
        have = true;
      }
      out.push({rec[1], current[1], rec[0]});
    }
    out.finish();
  }
  fs::remove(by_item);
  fs::remove(supports_file);

  // Stage 3.
  const fs::path by_transaction = dir / "s3-by-transaction.bin";
  cost.transaction_sort = extmem::external_sort<3>(annotated, by_transaction, Lexicographic<3>{},
                                                   budget, dir, "s3", io);
  fs::remove(annotated);

  // Stage 4.
  const ScaledWeight weight(sampling.measure, sampling.delta, sampling.mu, cost.transactions);
  const fs::path pairs = dir / "s4-pairs.bin";
  {
    RecordReader<3> in(by_transaction, B, io);
    RecordWriter<4> out(pairs, B, io);
    std::vector<ItemId> items;
    std::vector<Count> supports;
    Record<3> rec;
    bool more = in.next(rec);
    while (more) {
      const std::uint64_t tid = rec[0];
      items.clear();
      supports.clear();
      while (more && rec[0] == tid) {
        if (items.size() == budget.memory_records) {
          throw ResourceError(fmt::format(
              "transaction {} has more items than the memory budget of {} records", tid,
              budget.memory_records));
        }
        supports.push_back(rec[1]);
        items.push_back(static_cast<ItemId>(rec[2]));
        more = in.next(rec);
      }
      const double r = rng::transaction_threshold(sampling.seed, tid);
      scan_transaction(std::span<const Count>(supports), weight, r,
                       [&](std::size_t i, std::size_t j) {
                         out.push({items[i], items[j], supports[i], supports[j]});
                       });
    }
    out.finish();
    cost.sampled_pairs = out.records();
  }
  fs::remove(by_transaction);

  // Stage 5.
  const fs::path by_pair = dir / "s5-by-pair.bin";
  cost.pair_sort =
      extmem::external_sort<4>(pairs, by_pair, Lexicographic<4>{}, budget, dir, "s5", io);
  fs::remove(pairs);
  {
    RecordReader<4> in(by_pair, B, io);
    std::optional<RecordWriter<5>> out;
    if (report_path) out.emplace(*report_path, B, io);
    Record<4> rec;
    bool more = in.next(rec);
    while (more) {
      const Record<4> head = rec;
      Count samples = 0;
      while (more && rec[0] == head[0] && rec[1] == head[1]) {
        ++samples;
        more = in.next(rec);
      }
      const PairKey pair{static_cast<ItemId>(head[0]), static_cast<ItemId>(head[1])};
      auto rp = judge_pair(pair, samples, head[2], head[3], weight, sampling, cost.transactions);
      if (!rp) continue;
      if (out) {
        out->push({rp->pair.first, rp->pair.second, rp->samples, rp->exact ? 1u : 0u,
                   std::bit_cast<std::uint64_t>(rp->estimated_similarity)});
      }
      result.report.push_back(*rp);
    }
    if (out) out->finish();
  }
  fs::remove(by_pair);

  cost.reported_pairs = result.report.size();
  cost.pages_read = io.pages_read;
  cost.pages_written = io.pages_written;
  return result;
}

std::vector<ReportedPair> read_pair_report(const fs::path& path) {
  extmem::IOCounter io;
  RecordReader<5> in(path, 1024, io);
  std::vector<ReportedPair> out;
  Record<5> rec;
  while (in.next(rec)) {
    ReportedPair rp;
    rp.pair = {static_cast<ItemId>(rec[0]), static_cast<ItemId>(rec[1])};
    rp.samples = rec[2];
    rp.exact = rec[3] != 0;
    rp.estimated_similarity = std::bit_cast<double>(rec[4]);
    out.push_back(rp);
  }
  return out;
}

}  // namespace bisam
