#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "lbs/core/rng.hpp"

namespace lbs {

// Synthetic 10-class glyph images, used as a stand-in when no IDX dataset is
// available. Seven-segment digits rendered at 28x28 with per-sample jitter:
// integer translation, stroke intensity, and speckle noise, so images within
// a class vary the way handwritten digits do.
namespace glyphs {

// segment bits: A top, B top-right, C bottom-right, D bottom, E bottom-left,
// F top-left, G middle
inline constexpr std::array<std::uint8_t, 10> kSegments = {
    0b0111111,  // 0: ABCDEF
    0b0000110,  // 1: BC
    0b1011011,  // 2: ABDEG
    0b1001111,  // 3: ABCDG
    0b1100110,  // 4: BCFG
    0b1101101,  // 5: ACDFG
    0b1111101,  // 6: ACDEFG
    0b0000111,  // 7: ABC
    0b1111111,  // 8: all
    0b1101111,  // 9: ABCDFG
};

inline constexpr int kSide = 28;

namespace detail {

inline void fill_rect(Eigen::VectorXd& img, int r0, int r1, int c0, int c1, int dr, int dc,
                      double intensity) {
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const int rr = r + dr, cc = c + dc;
      if (rr < 0 || rr >= kSide || cc < 0 || cc >= kSide) continue;
      img(rr * kSide + cc) = intensity;
    }
  }
}

}  // namespace detail

// One jittered sample of the given digit, pixels in [0, 1].
inline Eigen::VectorXd render(int digit, Rng& rng) {
  Eigen::VectorXd img = Eigen::VectorXd::Zero(kSide * kSide);
  const int dr = rng.uniform_int(5) - 2;
  const int dc = rng.uniform_int(5) - 2;
  const double base = rng.uniform(0.65, 1.0);
  const std::uint8_t seg = kSegments[std::size_t(digit)];

  auto on = [&](int bit) { return (seg >> bit) & 1; };
  const double jitter = 0.08;
  // horizontal bars: A (bit 0), G (bit 6), D (bit 3)
  if (on(0)) detail::fill_rect(img, 4, 6, 8, 19, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  if (on(6)) detail::fill_rect(img, 13, 15, 8, 19, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  if (on(3)) detail::fill_rect(img, 22, 24, 8, 19, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  // vertical bars: F (bit 5) top-left, B (bit 1) top-right, E (bit 4)
  // bottom-left, C (bit 2) bottom-right
  if (on(5)) detail::fill_rect(img, 5, 14, 6, 8, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  if (on(1)) detail::fill_rect(img, 5, 14, 19, 21, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  if (on(4)) detail::fill_rect(img, 14, 23, 6, 8, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));
  if (on(2)) detail::fill_rect(img, 14, 23, 19, 21, dr, dc, base * rng.uniform(1.0 - jitter, 1.0));

  for (Eigen::Index i = 0; i < img.size(); ++i) {
    img(i) = std::min(1.0, img(i) + rng.uniform(0.0, 0.12));
  }
  return img;
}

}  // namespace glyphs
}  // namespace lbs
