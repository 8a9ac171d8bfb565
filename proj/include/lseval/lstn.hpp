#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lseval/maps.hpp"

namespace lseval::lstn {

// Layout, all integers little-endian:
//   "LSTN" | u16 version (1) | u16 ndim | ndim x u32 dims | f32 payload, row-major
inline constexpr std::uint16_t kVersion = 1;

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
};

std::vector<std::uint8_t> encode(const Tensor& t);
/// Throws ParseError (with `source` as the path) on any malformed input.
Tensor decode(const std::vector<std::uint8_t>& bytes, const std::string& source = "<memory>");

void write_file(const std::string& path, const Tensor& t);
Tensor read_file(const std::string& path);

/// [height, width]
Tensor from_map(const ScalarMap& map);
ScalarMap to_map(const Tensor& t, const std::string& source = "<memory>");

/// [5, height, width]: dxs, dys, dxe, dye, then the validity mask as 0/1.
Tensor from_field(const DisplacementField& field);
DisplacementField to_field(const Tensor& t, const std::string& source = "<memory>");

}  // namespace lseval::lstn
