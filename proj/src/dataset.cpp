#include "bisam/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>
#include <zlib.h>

#include "bisam/errors.hpp"
#include "bisam/kernels.hpp"
#include "bisam/rng.hpp"

namespace bisam {

void TransactionDatabase::add_transaction(std::vector<ItemId> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  add_normalized(items);
}

void TransactionDatabase::add_normalized(std::span<const ItemId> items) {
  items_.insert(items_.end(), items.begin(), items.end());
  offsets_.push_back(items_.size());
  note_items(items);
}

void TransactionDatabase::note_items(std::span<const ItemId> items) {
  max_size_ = std::max<Count>(max_size_, items.size());
  if (items.empty()) {
    return;
  }
  const std::size_t top = static_cast<std::size_t>(items.back()) + 1;
  if (top > seen_.size()) {
    seen_.resize(top, false);
  }
  for (const ItemId item : items) {
    if (!seen_[item]) {
      seen_[item] = true;
      ++distinct_;
    }
  }
}

void IndependentModel::validate() const {
  if (probabilities.size() != n) {
    throw DomainError(fmt::format("expected {} item probabilities, got {}", n,
                                  probabilities.size()));
  }
  if (n > static_cast<Count>(std::numeric_limits<ItemId>::max()) + 1) {
    throw DomainError("too many items for 32-bit ids");
  }
  for (const double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("item probabilities must lie in [0, 1]");
    }
  }
}

namespace {

class StreamLineSource final : public LineSource {
 public:
  explicit StreamLineSource(std::istream& in) : in_(in) {}
  bool next(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

 private:
  std::istream& in_;
};

class FileLineSource final : public LineSource {
 public:
  explicit FileLineSource(const std::filesystem::path& path) : in_(path) {
    if (!in_) {
      throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
  }
  bool next(std::string& line) override { return static_cast<bool>(std::getline(in_, line)); }

 private:
  std::ifstream in_;
};

class GzipLineSource final : public LineSource {
 public:
  explicit GzipLineSource(const std::filesystem::path& path)
      : path_(path.string()), file_(gzopen(path_.c_str(), "rb")) {
    if (file_ == nullptr) {
      throw IoError(fmt::format("cannot open '{}'", path_));
    }
    gzbuffer(file_, 1 << 16);
  }
  ~GzipLineSource() override { gzclose(file_); }
  GzipLineSource(const GzipLineSource&) = delete;
  GzipLineSource& operator=(const GzipLineSource&) = delete;

  bool next(std::string& line) override {
    line.clear();
    char buf[8192];
    while (true) {
      if (gzgets(file_, buf, sizeof buf) == nullptr) {
        int err = Z_OK;
        const char* msg = gzerror(file_, &err);
        if (err != Z_OK && err != Z_STREAM_END) {
          throw IoError(fmt::format("'{}': {}", path_, msg));
        }
        return !line.empty();
      }
      line += buf;
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        return true;
      }
    }
  }

 private:
  std::string path_;
  gzFile file_;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path) {
  if (path.extension() == ".gz") {
    return std::make_unique<GzipLineSource>(path);
  }
  return std::make_unique<FileLineSource>(path);
}

std::unique_ptr<LineSource> stream_lines(std::istream& in) {
  return std::make_unique<StreamLineSource>(in);
}

std::vector<ItemId> parse_transaction_line(std::string_view line, std::size_t line_number) {
  std::vector<ItemId> items;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && is_space(line[pos])) {
      ++pos;
    }
    if (pos == line.size()) {
      break;
    }
    std::size_t end = pos;
    while (end < line.size() && !is_space(line[end])) {
      ++end;
    }
    const std::string_view token = line.substr(pos, end - pos);
    if (token.front() == '-') {
      throw ParseError(line_number, fmt::format("negative item id '{}'", token));
    }
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range ||
        (ec == std::errc{} && value > std::numeric_limits<ItemId>::max())) {
      throw ParseError(line_number, fmt::format("item id '{}' out of range", token));
    }
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ParseError(line_number, fmt::format("invalid item id '{}'", token));
    }
    items.push_back(static_cast<ItemId>(value));
    pos = end;
  }
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

TransactionDatabase parse_transactions(LineSource& source) {
  TransactionDatabase db;
  std::string line;
  std::size_t line_number = 0;
  while (source.next(line)) {
    ++line_number;
    auto items = parse_transaction_line(line, line_number);
    if (!items.empty()) {
      db.add_normalized(items);
    }
  }
  return db;
}

TransactionDatabase parse_transactions(std::istream& in) {
  StreamLineSource source(in);
  return parse_transactions(source);
}

TransactionDatabase read_transactions(const std::filesystem::path& path) {
  auto source = open_lines(path);
  return parse_transactions(*source);
}

void write_transactions(std::ostream& out, const TransactionDatabase& db) {
  std::string line;
  for (std::size_t t = 0; t < db.size(); ++t) {
    line.clear();
    for (const ItemId item : db[t]) {
      if (!line.empty()) {
        line += ' ';
      }
      line += std::to_string(item);
    }
    line += '\n';
    out << line;
  }
}

void write_transactions(const std::filesystem::path& path, const TransactionDatabase& db) {
  std::ofstream out(path);
  if (!out) {
    throw IoError(fmt::format("cannot create '{}'", path.string()));
  }
  write_transactions(out, db);
  if (!out) {
    throw IoError(fmt::format("write to '{}' failed", path.string()));
  }
}

DatasetStats dataset_stats(const TransactionDatabase& db) {
  if (db.empty()) {
    throw DomainError("statistics of an empty database");
  }
  DatasetStats s;
  s.distinct_items = db.distinct_items();
  s.num_transactions = db.size();
  s.item_occurrences = db.item_occurrences();
  s.max_transaction_size = db.max_transaction_size();
  s.avg_transaction_size =
      static_cast<double>(s.item_occurrences) / static_cast<double>(s.num_transactions);
  s.avg_item_support = s.distinct_items == 0 ? 0.0
                                             : static_cast<double>(s.item_occurrences) /
                                                   static_cast<double>(s.distinct_items);
  return s;
}

DenseDatabase densify(const TransactionDatabase& db) {
  DenseDatabase out;
  std::vector<ItemId> dense(db.universe(), 0);
  {
    std::vector<bool> present(db.universe(), false);
    for (const ItemId item : db.items()) {
      present[item] = true;
    }
    for (std::size_t id = 0; id < present.size(); ++id) {
      if (present[id]) {
        dense[id] = static_cast<ItemId>(out.original_ids.size());
        out.original_ids.push_back(static_cast<ItemId>(id));
      }
    }
  }
  std::vector<ItemId> buffer;
  for (std::size_t t = 0; t < db.size(); ++t) {
    buffer.clear();
    for (const ItemId item : db[t]) {
      buffer.push_back(dense[item]);
    }
    out.db.add_normalized(buffer);
  }
  return out;
}

std::vector<double> uniform_probabilities(Count n, double lo, double hi, std::uint64_t seed) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw DomainError(fmt::format("probability range [{}, {}] is not inside [0, 1]", lo, hi));
  }
  std::vector<double> p(n);
  for (Count i = 0; i < n; ++i) {
    p[i] = lo + (hi - lo) * rng::keyed_uniform(seed ^ rng::kModelDomain, i, 0);
  }
  return p;
}

TransactionDatabase generate_independent(const IndependentModel& model, int threads) {
  model.validate();
  if (threads == 1) {
    return kernels::serial::generate_independent(model);
  }
  return kernels::omp::generate_independent(model, threads);
}

}  // namespace bisam
