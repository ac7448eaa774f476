#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bisam/types.hpp"

namespace bisam {

/// m transactions over item ids, stored flat (CSR). Each transaction holds
/// distinct ids in ascending order.
class TransactionDatabase {
 public:
  TransactionDatabase() { offsets_.push_back(0); }

  /// Sorts and deduplicates `items` before appending.
  void add_transaction(std::vector<ItemId> items);
  /// Appends an already strictly ascending transaction.
  void add_normalized(std::span<const ItemId> items);

  [[nodiscard]] std::size_t size() const noexcept { return offsets_.size() - 1; }
  [[nodiscard]] bool empty() const noexcept { return size() == 0; }

  [[nodiscard]] std::span<const ItemId> operator[](std::size_t t) const noexcept {
    return {items_.data() + offsets_[t], items_.data() + offsets_[t + 1]};
  }

  /// N, total item occurrences.
  [[nodiscard]] Count item_occurrences() const noexcept { return items_.size(); }
  /// n, the number of distinct ids present.
  [[nodiscard]] Count distinct_items() const noexcept { return distinct_; }
  /// One past the largest id present (0 when there are no items).
  [[nodiscard]] std::size_t universe() const noexcept { return seen_.size(); }
  [[nodiscard]] Count max_transaction_size() const noexcept { return max_size_; }

  [[nodiscard]] std::span<const ItemId> items() const noexcept { return items_; }
  [[nodiscard]] std::span<const std::size_t> offsets() const noexcept { return offsets_; }

  friend bool operator==(const TransactionDatabase& a, const TransactionDatabase& b) {
    return a.offsets_ == b.offsets_ && a.items_ == b.items_;
  }

 private:
  void note_items(std::span<const ItemId> items);

  std::vector<std::size_t> offsets_;
  std::vector<ItemId> items_;
  std::vector<bool> seen_;
  Count distinct_ = 0;
  Count max_size_ = 0;
};

struct DatasetStats {
  Count distinct_items = 0;
  Count num_transactions = 0;
  double avg_transaction_size = 0.0;
  Count max_transaction_size = 0;
  /// sigma = N / n.
  double avg_item_support = 0.0;
  Count item_occurrences = 0;
};

struct IndependentModel {
  Count n = 0;
  Count m = 0;
  std::vector<double> probabilities;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Sequential source of text lines, plain or gzip-compressed.
class LineSource {
 public:
  virtual ~LineSource() = default;
  /// Fills `line` (without the terminator); false at end of input.
  virtual bool next(std::string& line) = 0;
};

/// Opens `path`, decompressing transparently when it ends in ".gz".
[[nodiscard]] std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path);
[[nodiscard]] std::unique_ptr<LineSource> stream_lines(std::istream& in);

/// Parses one FIMI line: whitespace-separated nonnegative integers. The
/// result is sorted and deduplicated; a blank line yields an empty vector.
[[nodiscard]] std::vector<ItemId> parse_transaction_line(std::string_view line,
                                                         std::size_t line_number);

[[nodiscard]] TransactionDatabase parse_transactions(LineSource& source);
[[nodiscard]] TransactionDatabase parse_transactions(std::istream& in);
[[nodiscard]] TransactionDatabase read_transactions(const std::filesystem::path& path);

/// FIMI text, one line per transaction. Empty transactions are written as
/// blank lines and therefore vanish on re-reading.
void write_transactions(std::ostream& out, const TransactionDatabase& db);
void write_transactions(const std::filesystem::path& path, const TransactionDatabase& db);

[[nodiscard]] DatasetStats dataset_stats(const TransactionDatabase& db);

/// Database with ids remapped onto [0, n), preserving their relative order.
struct DenseDatabase {
  TransactionDatabase db;
  /// original_ids[dense] = original id.
  std::vector<ItemId> original_ids;
};

[[nodiscard]] DenseDatabase densify(const TransactionDatabase& db);

/// n probabilities drawn uniformly from [lo, hi], p_i from draw i under `seed`.
[[nodiscard]] std::vector<double> uniform_probabilities(Count n, double lo, double hi,
                                                        std::uint64_t seed);

/// Transaction t contains item i iff keyed_uniform(seed, t, i) < p_i.
/// `threads` = 1 runs the serial reference, 0 lets OpenMP choose.
[[nodiscard]] TransactionDatabase generate_independent(const IndependentModel& model,
                                                       int threads = 0);

}  // namespace bisam
