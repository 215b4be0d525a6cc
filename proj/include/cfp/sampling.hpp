#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfp/error.hpp"
#include "cfp/metric.hpp"

namespace cfp {

/// Where hypothesis checkers draw their points from. Either a uniform box
/// [lo, hi] (a one-element bound is broadcast to every coordinate) or, when
/// `points` is nonempty, uniformly from that list.
struct SampleSpec {
  std::vector<double> lo{-10.0};
  std::vector<double> hi{10.0};
  std::size_t count = 10000;
  std::uint64_t rng_seed = 1;
  std::vector<Point> points{};
  /// Rejection budget: at most count * attempts_per_sample draws in total.
  std::size_t attempts_per_sample = 64;
  /// Witnesses stored per certificate; the full count is kept separately.
  std::size_t max_witnesses = 16;

  friend bool operator==(const SampleSpec&, const SampleSpec&) = default;
};

/// Seeded point generator. Uniform variates are built from the raw 64-bit
/// engine output so the sequence is identical across standard libraries.
class Sampler {
 public:
  Sampler(const SampleSpec& spec, std::size_t dimension)
      : spec_(spec), dimension_(dimension), engine_(spec.rng_seed) {
    if (spec_.points.empty()) {
      if (spec_.lo.size() != 1 && spec_.lo.size() != dimension_) {
        throw Error(ErrorCode::invalid_parameter, "sampler lower bound has the wrong dimension");
      }
      if (spec_.hi.size() != 1 && spec_.hi.size() != dimension_) {
        throw Error(ErrorCode::invalid_parameter, "sampler upper bound has the wrong dimension");
      }
      for (std::size_t i = 0; i < dimension_; ++i) {
        if (!(lo(i) <= hi(i))) throw Error(ErrorCode::invalid_parameter, "sampler box is empty");
      }
    } else {
      for (const auto& p : spec_.points) {
        if (p.size() != dimension_) throw Error(ErrorCode::invalid_parameter, "sample point has the wrong dimension");
      }
    }
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

  Point draw() {
    if (!spec_.points.empty()) return spec_.points[index(spec_.points.size())];
    Point p(dimension_);
    for (std::size_t i = 0; i < dimension_; ++i) p[i] = uniform(lo(i), hi(i));
    return p;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t count() const noexcept { return spec_.count; }
  std::size_t budget() const noexcept { return spec_.count * spec_.attempts_per_sample; }
  const SampleSpec& spec() const noexcept { return spec_; }

 private:
  double lo(std::size_t i) const { return spec_.lo.size() == 1 ? spec_.lo[0] : spec_.lo[i]; }
  double hi(std::size_t i) const { return spec_.hi.size() == 1 ? spec_.hi[0] : spec_.hi[i]; }

  SampleSpec spec_;
  std::size_t dimension_;
  std::mt19937_64 engine_;
};

}  // namespace cfp
