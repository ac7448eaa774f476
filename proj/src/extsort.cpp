#include "bisam/extsort.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "bisam/errors.hpp"

namespace bisam::extmem {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t out = 0;
    for (int k = 0; k < 8; ++k) {
      out = (out << 8) | ((v >> (8 * k)) & 0xFF);
    }
    return out;
  }
}

// The conversion is its own inverse.
std::uint64_t from_little_endian(std::uint64_t v) { return to_little_endian(v); }

}  // namespace

void SortBudget::validate() const {
  if (page_records < 1) {
    throw ConfigError("page size must be at least one record");
  }
  if (memory_records < 3 * page_records) {
    throw ConfigError(fmt::format("memory budget {} must hold at least three pages of {} records",
                                  memory_records, page_records));
  }
}

Count sort_pass_bound(Count records, const SortBudget& budget) {
  if (records == 0) {
    return 0;
  }
  const Count runs = (records + budget.memory_records - 1) / budget.memory_records;
  Count passes = 1;
  for (Count reach = 1; reach < runs; reach *= budget.fan_in()) {
    ++passes;
  }
  return passes;
}

void create_empty(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot create '{}'", path.string()));
  }
}

PageWriter::PageWriter(const std::filesystem::path& path, std::size_t width, Count page_records,
                       IOCounter& io)
    : path_(path),
      out_(path, std::ios::binary | std::ios::trunc),
      width_(width),
      page_records_(page_records),
      io_(io),
      page_(width * page_records) {
  if (!out_) {
    throw IoError(fmt::format("cannot create '{}'", path.string()));
  }
}

PageWriter::~PageWriter() {
  if (!finished_) {
    try {
      finish();
    } catch (...) {
    }
  }
}

void PageWriter::push(const std::uint64_t* record) {
  for (std::size_t k = 0; k < width_; ++k) {
    page_[fill_ * width_ + k] = to_little_endian(record[k]);
  }
  ++records_;
  if (++fill_ == page_records_) {
    flush();
  }
}

void PageWriter::flush() {
  if (fill_ == 0) {
    return;
  }
  out_.write(reinterpret_cast<const char*>(page_.data()),
             static_cast<std::streamsize>(fill_ * width_ * sizeof(std::uint64_t)));
  if (!out_) {
    throw IoError(fmt::format("write to '{}' failed", path_.string()));
  }
  ++io_.pages_written;
  fill_ = 0;
}

void PageWriter::finish() {
  if (finished_) {
    return;
  }
  finished_ = true;
  flush();
  out_.close();
  if (!out_) {
    throw IoError(fmt::format("closing '{}' failed", path_.string()));
  }
}

PageReader::PageReader(const std::filesystem::path& path, std::size_t width, Count page_records,
                       IOCounter& io)
    : path_(path),
      in_(path, std::ios::binary),
      width_(width),
      page_records_(page_records),
      io_(io),
      page_(width * page_records) {
  if (!in_) {
    throw IoError(fmt::format("cannot open '{}'", path.string()));
  }
}

bool PageReader::refill() {
  if (eof_) {
    return false;
  }
  const auto bytes = static_cast<std::streamsize>(page_.size() * sizeof(std::uint64_t));
  in_.read(reinterpret_cast<char*>(page_.data()), bytes);
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (in_.bad()) {
    throw IoError(fmt::format("read from '{}' failed", path_.string()));
  }
  if (got % (width_ * sizeof(std::uint64_t)) != 0) {
    throw IoError(fmt::format("'{}' ends in a partial record", path_.string()));
  }
  if (got < static_cast<std::size_t>(bytes)) {
    eof_ = true;
  }
  fill_ = got / (width_ * sizeof(std::uint64_t));
  pos_ = 0;
  if (fill_ == 0) {
    eof_ = true;
    return false;
  }
  for (std::size_t k = 0; k < fill_ * width_; ++k) {
    page_[k] = from_little_endian(page_[k]);
  }
  ++io_.pages_read;
  return true;
}

bool PageReader::at_end() { return pos_ == fill_ && !refill(); }

const std::uint64_t* PageReader::next() {
  if (at_end()) {
    return nullptr;
  }
  return page_.data() + (pos_++) * width_;
}

}  // namespace bisam::extmem
