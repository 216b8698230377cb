#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "lbs/core/error.hpp"

namespace lbs {

// 10x10 discretization of a 2-D state subspace. Bins are cumulative over a
// run: revisits never decrease coverage.
class CoverageGrid {
 public:
  static constexpr int kBins = 10;

  CoverageGrid(double x_low, double x_high, double y_low, double y_high)
      : x_low_(x_low), x_high_(x_high), y_low_(y_low), y_high_(y_high) {
    if (!(x_high > x_low) || !(y_high > y_low))
      throw ConfigError("CoverageGrid: degenerate range");
    counts_.fill(0);
  }

  // Total map: out-of-range points clamp to the edge bins.
  std::pair<int, int> bin_index(double x, double y) const {
    return {index_1d(x, x_low_, x_high_), index_1d(y, y_low_, y_high_)};
  }

  // Marks the bin, returns coverage percent.
  double update(double x, double y) {
    auto [i, j] = bin_index(x, y);
    std::uint64_t& c = counts_[std::size_t(i * kBins + j)];
    if (c == 0) ++visited_;
    ++c;
    return percent();
  }

  double percent() const { return 100.0 * double(visited_) / double(kBins * kBins); }
  int visited() const { return visited_; }
  std::uint64_t count(int i, int j) const { return counts_[std::size_t(i * kBins + j)]; }

 private:
  static int index_1d(double v, double lo, double hi) {
    const int i = int(std::floor(double(kBins) * (v - lo) / (hi - lo)));
    return i < 0 ? 0 : (i >= kBins ? kBins - 1 : i);
  }

  double x_low_, x_high_, y_low_, y_high_;
  std::array<std::uint64_t, kBins * kBins> counts_{};
  int visited_ = 0;
};

}  // namespace lbs
