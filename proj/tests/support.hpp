#pragma once

// Independent oracles and fixtures for the tests. Nothing here calls the
// library's counting or weighting code.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bisam/dataset.hpp"
#include "bisam/measures.hpp"
#include "bisam/rng.hpp"
#include "bisam/sampler.hpp"

namespace bisam::testing {

using Unordered = std::pair<ItemId, ItemId>;

inline Unordered unordered(ItemId a, ItemId b) { return a < b ? Unordered{a, b} : Unordered{b, a}; }
inline Unordered unordered(PairKey p) { return unordered(p.first, p.second); }

/// f straight from the measure table, evaluated in long double.
inline double oracle_f(MeasureKind kind, double ci, double cj, double s, double m) {
  const long double a = ci, b = cj, t = s;
  switch (kind) {
    case MeasureKind::lift: return static_cast<double>(m / (t * a * b));
    case MeasureKind::cosine: return static_cast<double>(1.0L / (t * std::sqrt(a * b)));
    case MeasureKind::jaccard: return static_cast<double>((1.0L + t) / t / (a + b));
    case MeasureKind::all_confidence: return static_cast<double>(1.0L / (t * std::max(a, b)));
    case MeasureKind::dice: return static_cast<double>(1.0L / (t * (a + b)));
    case MeasureKind::overlap_coef: return static_cast<double>(1.0L / (t * std::min(a, b)));
    default: return 0.0;
  }
}

inline double oracle_similarity(MeasureKind kind, double ci, double cj, double cij, double m) {
  const long double a = ci, b = cj, c = cij;
  switch (kind) {
    case MeasureKind::lift: return static_cast<double>(c * m / (a * b));
    case MeasureKind::cosine: return static_cast<double>(c / std::sqrt(a * b));
    case MeasureKind::jaccard: return static_cast<double>(c / (a + b - c));
    case MeasureKind::all_confidence: return static_cast<double>(c / std::max(a, b));
    case MeasureKind::dice: return static_cast<double>(c / (a + b));
    case MeasureKind::overlap_coef: return static_cast<double>(c / std::min(a, b));
    default: return 0.0;
  }
}

inline const std::vector<MeasureKind>& base_kinds() {
  static const std::vector<MeasureKind> kinds{MeasureKind::lift,           MeasureKind::cosine,
                                              MeasureKind::jaccard,        MeasureKind::all_confidence,
                                              MeasureKind::dice,           MeasureKind::overlap_coef};
  return kinds;
}

/// Random database: `m` transactions over `n` items with skewed item
/// popularity, so supports differ widely.
inline TransactionDatabase random_db(std::uint64_t seed, std::size_t m, std::size_t n,
                                     std::size_t max_size) {
  std::mt19937_64 gen(seed);
  std::vector<double> popularity(n);
  for (std::size_t i = 0; i < n; ++i) popularity[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> pick(popularity.begin(), popularity.end());
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<ItemId> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<ItemId>(i);
  std::shuffle(labels.begin(), labels.end(), gen);
  TransactionDatabase db;
  for (std::size_t t = 0; t < m; ++t) {
    std::vector<ItemId> items;
    const std::size_t b = size(gen);
    for (std::size_t k = 0; k < b; ++k) items.push_back(labels[pick(gen)]);
    db.add_transaction(items);
  }
  return db;
}

inline std::map<ItemId, Count> brute_supports(const TransactionDatabase& db) {
  std::map<ItemId, Count> out;
  for (std::size_t t = 0; t < db.size(); ++t) {
    for (const ItemId i : db[t]) ++out[i];
  }
  return out;
}

inline std::map<Unordered, Count> brute_pair_counts(const TransactionDatabase& db) {
  std::map<Unordered, Count> out;
  for (std::size_t t = 0; t < db.size(); ++t) {
    const auto txn = db[t];
    for (std::size_t a = 0; a < txn.size(); ++a) {
      for (std::size_t b = a + 1; b < txn.size(); ++b) ++out[unordered(txn[a], txn[b])];
    }
  }
  return out;
}

/// Brute-force sampler for base measures: every pair of transaction t is
/// tested against r_t, with no ordering or early exit.
inline std::map<Unordered, Count> brute_sample(const TransactionDatabase& db, MeasureKind kind,
                                               double delta, Count mu, std::uint64_t seed) {
  const auto supports = brute_supports(db);
  const auto m = static_cast<double>(db.size());
  std::map<Unordered, Count> out;
  for (std::size_t t = 0; t < db.size(); ++t) {
    const double r = rng::transaction_threshold(seed, t);
    const auto txn = db[t];
    for (std::size_t a = 0; a < txn.size(); ++a) {
      for (std::size_t b = a + 1; b < txn.size(); ++b) {
        const double f = oracle_f(kind, static_cast<double>(supports.at(txn[a])),
                                  static_cast<double>(supports.at(txn[b])), delta, m);
        if (f * static_cast<double>(mu) > r) ++out[unordered(txn[a], txn[b])];
      }
    }
  }
  return out;
}

inline std::map<Unordered, Count> as_unordered(const SampleMultiset& ms) {
  std::map<Unordered, Count> out;
  ms.for_each([&](PairKey p, Count c) { out[unordered(p)] += c; });
  return out;
}

inline TransactionDatabase db_from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_transactions(in);
}

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int serial = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("bisam-test-" + std::to_string(rd()) + "-" + std::to_string(serial++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline double relative_error(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

}  // namespace bisam::testing
