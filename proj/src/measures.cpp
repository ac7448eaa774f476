#include "bisam/measures.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "bisam/errors.hpp"

namespace bisam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<std::pair<std::string_view, MeasureKind>, 6> kBaseNames{{
    {"lift", MeasureKind::lift},
    {"cosine", MeasureKind::cosine},
    {"jaccard", MeasureKind::jaccard},
    {"all_confidence", MeasureKind::all_confidence},
    {"dice", MeasureKind::dice},
    {"overlap_coef", MeasureKind::overlap_coef},
}};

void require_supports(Count ci, Count cj) {
  if (ci == 0 || cj == 0) {
    throw DomainError("item support must be at least 1");
  }
}

// Positive s with f(ci, cj, s) = y, or +inf when f stays above y for every s.
double invert_base(MeasureKind kind, double ci, double cj, double y, double m) {
  switch (kind) {
    case MeasureKind::lift:
      return m / (y * ci * cj);
    case MeasureKind::cosine:
      return 1.0 / (y * std::sqrt(ci * cj));
    case MeasureKind::jaccard: {
      // (1 + s) / s = y (ci + cj)  =>  s = 1 / (y (ci + cj) - 1)
      const double denom = y * (ci + cj) - 1.0;
      return denom > 0.0 ? 1.0 / denom : kInf;
    }
    case MeasureKind::all_confidence:
      return 1.0 / (y * std::max(ci, cj));
    case MeasureKind::dice:
      return 1.0 / (y * (ci + cj));
    case MeasureKind::overlap_coef:
      return 1.0 / (y * std::min(ci, cj));
    case MeasureKind::composite:
      break;
  }
  return kInf;
}

double invert_any(const MeasureSpec& measure, double ci, double cj, double y, double m);

// Bisection on the strictly decreasing composite weight; relative width 1e-15.
double invert_linear(const MeasureSpec& measure, double ci, double cj, double y, double m) {
  auto excess = [&](double s) { return detail::weight(measure, ci, cj, s, m) - y; };
  double hi = 1.0;
  int guard = 0;
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi)) {
      return kInf;
    }
  }
  double lo = hi / 2.0;
  guard = 0;
  while (excess(lo) <= 0.0) {
    lo /= 2.0;
    if (++guard > 2000 || lo == 0.0) {
      return lo;
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = lo + (hi - lo) / 2.0;
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Pick whichever endpoint lands closer to the target weight.
  return std::abs(excess(lo)) < std::abs(excess(hi)) ? lo : hi;
}

double invert_any(const MeasureSpec& measure, double ci, double cj, double y, double m) {
  if (!measure.is_composite()) {
    return invert_base(measure.kind(), ci, cj, y, m);
  }
  const auto& p = measure.parts();
  if (p.combinator == Combinator::min) {
    const double a = invert_any(p.first, ci, cj, y / p.alpha, m) / p.first_threshold;
    const double b = invert_any(p.second, ci, cj, y / p.beta, m) / p.second_threshold;
    return std::min(a, b);
  }
  return invert_linear(measure, ci, cj, y, m);
}

bool parts_equal(const CompositeParts& a, const CompositeParts& b) {
  return a.combinator == b.combinator && a.alpha == b.alpha && a.beta == b.beta &&
         a.first_threshold == b.first_threshold && a.second_threshold == b.second_threshold &&
         a.first == b.first && a.second == b.second;
}

std::string operand_text(double coef, const MeasureSpec& m, double threshold) {
  std::string out;
  if (coef != 1.0) {
    out += fmt::format("{}*", coef);
  }
  out += m.name();
  if (threshold != 1.0) {
    out += fmt::format("@{}", threshold);
  }
  return out;
}

class MeasureParser {
 public:
  explicit MeasureParser(std::string_view text) : text_(text) {}

  MeasureSpec parse() {
    MeasureSpec m = expression();
    skip_space();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DomainError(fmt::format("cannot parse measure '{}': {}", text_, why));
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(fmt::format("expected '{}'", c));
    }
  }

  std::string_view identifier() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           ((text_[pos_] >= 'a' && text_[pos_] <= 'z') || text_[pos_] == '_')) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  double number() {
    skip_space();
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr == begin) {
      fail("expected a number");
    }
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  bool number_ahead() {
    skip_space();
    return pos_ < text_.size() &&
           ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.');
  }

  MeasureSpec expression() {
    const std::string_view id = identifier();
    if (id.empty()) {
      fail("expected a measure name");
    }
    if (id == "min" || id == "linear") {
      const auto comb = id == "min" ? Combinator::min : Combinator::linear;
      expect('(');
      auto [a, fa, ta] = operand();
      expect(',');
      auto [b, fb, tb] = operand();
      expect(')');
      return compose_measures(comb, a, fa, b, fb, ta, tb);
    }
    for (const auto& [name, kind] : kBaseNames) {
      if (name == id) {
        return MeasureSpec(kind);
      }
    }
    fail(fmt::format("unknown measure '{}'", id));
  }

  std::tuple<double, MeasureSpec, double> operand() {
    double coef = 1.0;
    if (number_ahead()) {
      coef = number();
      expect('*');
    }
    MeasureSpec m = expression();
    double threshold = 1.0;
    if (accept('@')) {
      threshold = number();
    }
    return {coef, std::move(m), threshold};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MeasureSpec::MeasureSpec(MeasureKind kind) : kind_(kind) {
  if (kind == MeasureKind::composite) {
    throw DomainError("composite measures are built with compose_measures()");
  }
}

const CompositeParts& MeasureSpec::parts() const {
  if (!parts_) {
    throw DomainError("not a composite measure");
  }
  return *parts_;
}

std::string MeasureSpec::name() const {
  if (!is_composite()) {
    return std::string(measure_name(kind_));
  }
  const auto& p = *parts_;
  return fmt::format("{}({},{})", p.combinator == Combinator::min ? "min" : "linear",
                     operand_text(p.alpha, p.first, p.first_threshold),
                     operand_text(p.beta, p.second, p.second_threshold));
}

bool MeasureSpec::bounded_by_one() const noexcept {
  return kind_ != MeasureKind::lift && kind_ != MeasureKind::composite;
}

bool operator==(const MeasureSpec& a, const MeasureSpec& b) {
  if (a.kind_ != b.kind_) {
    return false;
  }
  return !a.is_composite() || parts_equal(*a.parts_, *b.parts_);
}

std::string_view measure_name(MeasureKind kind) {
  for (const auto& [name, k] : kBaseNames) {
    if (k == kind) {
      return name;
    }
  }
  return "composite";
}

MeasureSpec parse_measure(std::string_view text) { return MeasureParser(text).parse(); }

MeasureSpec compose_measures(Combinator combinator, double alpha, const MeasureSpec& first,
                             double beta, const MeasureSpec& second, double first_threshold,
                             double second_threshold) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw DomainError("composite coefficients must be positive");
  }
  if (!(first_threshold > 0.0) || !(second_threshold > 0.0)) {
    throw DomainError("composite component thresholds must be positive");
  }
  MeasureSpec out;
  out.kind_ = MeasureKind::composite;
  out.parts_ = std::make_shared<const CompositeParts>(CompositeParts{
      combinator, alpha, first, first_threshold, beta, second, second_threshold});
  return out;
}

double detail::weight(const MeasureSpec& measure, double ci, double cj, double s,
                      double m) noexcept {
  if (!measure.is_composite()) {
    return base_weight(measure.kind(), ci, cj, s, m);
  }
  const auto& p = measure.parts();
  const double a = p.alpha * weight(p.first, ci, cj, s * p.first_threshold, m);
  const double b = p.beta * weight(p.second, ci, cj, s * p.second_threshold, m);
  return p.combinator == Combinator::min ? std::min(a, b) : a + b;
}

double similarity_from_counts(const MeasureSpec& measure, Count ci, Count cj, Count cij,
                              Count m) {
  require_supports(ci, cj);
  if (cij > std::min(ci, cj)) {
    throw DomainError("co-occurrence count exceeds an item support");
  }
  return similarity_from_estimate(measure, ci, cj, static_cast<double>(cij), m);
}

double similarity_from_estimate(const MeasureSpec& measure, Count ci, Count cj, double cij,
                                Count m) {
  require_supports(ci, cj);
  if (m == 0) {
    throw DomainError("transaction count must be at least 1");
  }
  if (!(cij >= 0.0)) {
    throw DomainError("co-occurrence count must be nonnegative");
  }
  const auto a = static_cast<double>(ci);
  const auto b = static_cast<double>(cj);
  switch (measure.kind()) {
    case MeasureKind::lift:
      return cij * static_cast<double>(m) / (a * b);
    case MeasureKind::cosine:
      return cij / std::sqrt(a * b);
    case MeasureKind::jaccard:
      return cij / (a + b - cij);
    case MeasureKind::all_confidence:
      return cij / std::max(a, b);
    case MeasureKind::dice:
      return cij / (a + b);
    case MeasureKind::overlap_coef:
      return cij / std::min(a, b);
    case MeasureKind::composite:
      break;
  }
  if (cij == 0.0) {
    return 0.0;
  }
  return invert_any(measure, a, b, 1.0 / cij, static_cast<double>(m));
}

double sampling_weight(const MeasureSpec& measure, Count ci, Count cj, double s, Count m) {
  require_supports(ci, cj);
  if (!(s > 0.0)) {
    throw DomainError("similarity argument of f must be positive");
  }
  return detail::weight(measure, static_cast<double>(ci), static_cast<double>(cj), s,
                        static_cast<double>(m));
}

std::optional<double> solve_threshold_for_weight(const MeasureSpec& measure, Count ci, Count cj,
                                                 double r, Count mu, Count m) {
  require_supports(ci, cj);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("r must be positive; at r = 0 every threshold samples the pair");
  }
  if (mu == 0) {
    throw DomainError("mu must be at least 1");
  }
  const double y = r / static_cast<double>(mu);
  const double s = invert_any(measure, static_cast<double>(ci), static_cast<double>(cj), y,
                              static_cast<double>(m));
  if (!std::isfinite(s)) {
    return std::nullopt;
  }
  if (measure.kind() == MeasureKind::jaccard && s > 1.0) {
    return std::nullopt;
  }
  return s;
}

double similarity_upper_bound(const MeasureSpec& measure, Count m) {
  switch (measure.kind()) {
    case MeasureKind::lift:
      return static_cast<double>(m);
    case MeasureKind::composite:
      return kInf;
    default:
      return 1.0;
  }
}

}  // namespace bisam
