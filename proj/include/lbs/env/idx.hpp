#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "lbs/core/error.hpp"

namespace lbs {

// IDX (MNIST-style) file parsing. Big-endian headers; magic 0x00000803 (2051)
// for images, 0x00000801 (2049) for labels.

struct IdxImages {
  int count = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

struct IdxLabels {
  int count = 0;
  std::vector<std::uint8_t> labels;
};

namespace detail {

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t off,
                               const std::string& what) {
  if (off + 4 > b.size())
    throw LoadError("truncated " + what + ": unexpected end of file at byte " + std::to_string(off));
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

}  // namespace detail

inline IdxImages parse_idx_images(const std::vector<std::uint8_t>& bytes,
                                  const std::string& what = "idx image data") {
  const std::uint32_t magic = detail::read_be32(bytes, 0, what);
  if (magic != 2051u)
    throw LoadError("bad image magic " + std::to_string(magic) + " at byte 0 in " + what);
  IdxImages out;
  out.count = int(detail::read_be32(bytes, 4, what));
  out.rows = int(detail::read_be32(bytes, 8, what));
  out.cols = int(detail::read_be32(bytes, 12, what));
  const std::size_t need = std::size_t(out.count) * out.rows * out.cols;
  if (bytes.size() < 16 + need)
    throw LoadError("truncated " + what + ": unexpected end of file at byte " +
                    std::to_string(bytes.size()) + ", need " + std::to_string(16 + need));
  out.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + std::ptrdiff_t(need));
  return out;
}

inline IdxLabels parse_idx_labels(const std::vector<std::uint8_t>& bytes,
                                  const std::string& what = "idx label data") {
  const std::uint32_t magic = detail::read_be32(bytes, 0, what);
  if (magic != 2049u)
    throw LoadError("bad label magic " + std::to_string(magic) + " at byte 0 in " + what);
  IdxLabels out;
  out.count = int(detail::read_be32(bytes, 4, what));
  if (bytes.size() < 8 + std::size_t(out.count))
    throw LoadError("truncated " + what + ": unexpected end of file at byte " +
                    std::to_string(bytes.size()) + ", need " + std::to_string(8 + out.count));
  out.labels.assign(bytes.begin() + 8, bytes.begin() + 8 + out.count);
  return out;
}

inline IdxImages load_idx_images(const std::string& path) {
  return parse_idx_images(detail::read_file(path), path);
}

inline IdxLabels load_idx_labels(const std::string& path) {
  return parse_idx_labels(detail::read_file(path), path);
}

}  // namespace lbs
