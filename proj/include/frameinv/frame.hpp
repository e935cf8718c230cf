#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frameinv/errors.hpp"
#include "frameinv/index_set.hpp"

namespace frameinv {

enum class FrameKind { jittered_fourier, integer_fourier };

inline std::string_view to_string(FrameKind kind) {
  return kind == FrameKind::jittered_fourier ? "jittered-fourier" : "integer-fourier";
}

inline FrameKind parse_frame_kind(std::string_view name) {
  if (name == "jittered-fourier" || name == "jittered") return FrameKind::jittered_fourier;
  if (name == "integer-fourier" || name == "integer") return FrameKind::integer_fourier;
  throw DomainError("unknown frame kind '" + std::string(name) +
                    "' (valid: jittered-fourier, integer-fourier)");
}

/// Largest jitter for which exponentials stay a Riesz basis (Kadec).
inline constexpr double kadec_bound = 0.25;

/// Identifier of the jitter generator; bump the suffix if the stream ever changes.
inline constexpr std::string_view jitter_rng_name = "splitmix64-v1";

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based uniform variate in [0, 1) for index j; independent of how many
/// indices are drawn, so frames of different half widths share a prefix.
inline double jitter_uniform(std::uint64_t seed, int j) noexcept {
  const auto zigzag = static_cast<std::uint64_t>(j >= 0 ? 2 * static_cast<std::int64_t>(j)
                                                        : -2 * static_cast<std::int64_t>(j) - 1);
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(zigzag + 0x632BE59BD9B4E019ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// A family of exponentials e^{-i pi lambda_j x} on [-1, 1], identified by its
/// frequency sequence over a symmetric index set.
class FrameFamily {
 public:
  FrameKind kind() const noexcept { return kind_; }
  const IndexSet& index_set() const noexcept { return index_set_; }
  int half_width() const noexcept { return index_set_.half_width(); }
  double jitter_bound() const noexcept { return delta_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> frequencies() const noexcept { return frequencies_; }
  double frequency(int j) const { return frequencies_[index_set_.position(j)]; }

  /// Provenance tag; equal for frames that agree on every shared index.
  std::string id() const {
    if (kind_ == FrameKind::integer_fourier) return "integer-fourier";
    char buf[96];
    std::snprintf(buf, sizeof buf, "jittered-fourier(delta=%.17g,seed=%llu,%s)", delta_,
                  static_cast<unsigned long long>(seed_), std::string(jitter_rng_name).c_str());
    return buf;
  }

  friend FrameFamily make_frame(FrameKind kind, int half_width, double delta, std::uint64_t seed);

 private:
  FrameKind kind_ = FrameKind::integer_fourier;
  IndexSet index_set_;
  double delta_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> frequencies_;
};

/// Builds lambda_j = j + xi_j for |j| <= half_width with xi_j uniform on
/// [-delta, delta]. The integer kind ignores delta and seed.
inline FrameFamily make_frame(FrameKind kind, int half_width, double delta = kadec_bound,
                              std::uint64_t seed = 0) {
  detail::require(half_width >= 0, "make_frame: half width must be nonnegative");
  FrameFamily frame;
  frame.kind_ = kind;
  frame.index_set_ = IndexSet(half_width);
  frame.frequencies_.resize(frame.index_set_.size());
  if (kind == FrameKind::integer_fourier) {
    for (std::size_t p = 0; p < frame.frequencies_.size(); ++p)
      frame.frequencies_[p] = frame.index_set_.index(p);
    return frame;
  }
  detail::require(std::isfinite(delta) && delta >= 0.0 && delta <= kadec_bound,
                  "make_frame: jitter bound must lie in [0, 1/4] (Kadec), got " +
                      std::to_string(delta));
  frame.delta_ = delta;
  frame.seed_ = seed;
  for (std::size_t p = 0; p < frame.frequencies_.size(); ++p) {
    const int j = frame.index_set_.index(p);
    const double u = detail::jitter_uniform(seed, j);
    frame.frequencies_[p] = j + delta * (2.0 * u - 1.0);
  }
  return frame;
}

inline FrameFamily integer_basis(int half_width) {
  return make_frame(FrameKind::integer_fourier, half_width);
}

}  // namespace frameinv
