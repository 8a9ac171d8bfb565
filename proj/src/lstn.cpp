#include "lseval/lstn.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lseval::lstn {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'T', 'N'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = dims.empty() ? 0 : 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode(const Tensor& t) {
  if (t.dims.size() > 0xFFFF) throw Error("too many tensor dimensions");
  if (t.element_count() != t.data.size()) {
    throw DimensionMismatch("tensor dims describe " + std::to_string(t.element_count()) +
                            " elements, payload has " + std::to_string(t.data.size()));
  }
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.reserve(8 + 4 * t.dims.size() + 4 * t.data.size());
  put_u16(out, kVersion);
  put_u16(out, static_cast<std::uint16_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  for (float f : t.data) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

Tensor decode(const std::vector<std::uint8_t>& bytes, const std::string& source) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError(source, 0, "not an LSTN tensor (bad magic)");
  }
  const auto version = static_cast<std::uint16_t>(bytes[4] | bytes[5] << 8);
  if (version != kVersion) {
    throw ParseError(source, 0, "unsupported LSTN version " + std::to_string(version));
  }
  const std::size_t ndim = bytes[6] | bytes[7] << 8;
  std::size_t offset = 8;
  if (bytes.size() < offset + 4 * ndim) throw ParseError(source, 0, "truncated LSTN header");

  Tensor t;
  std::size_t count = ndim == 0 ? 0 : 1;
  for (std::size_t k = 0; k < ndim; ++k, offset += 4) {
    t.dims.push_back(get_u32(bytes.data() + offset));
    count *= t.dims.back();
  }
  if (bytes.size() - offset != 4 * count) {
    throw ParseError(source, 0,
                     "LSTN payload is " + std::to_string(bytes.size() - offset) + " bytes, dims need " +
                         std::to_string(4 * count));
  }
  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i, offset += 4) {
    t.data[i] = std::bit_cast<float>(get_u32(bytes.data() + offset));
  }
  return t;
}

void write_file(const std::string& path, const Tensor& t) {
  const auto bytes = encode(t);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("write failed: " + path);
}

Tensor read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path, 0, "cannot open file");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode(bytes, path);
}

Tensor from_map(const ScalarMap& map) {
  return {{static_cast<std::uint32_t>(map.height()), static_cast<std::uint32_t>(map.width())},
          map.values()};
}

ScalarMap to_map(const Tensor& t, const std::string& source) {
  if (t.dims.size() != 2 || t.dims[0] == 0 || t.dims[1] == 0) {
    throw ParseError(source, 0, "expected a non-empty [height, width] tensor");
  }
  for (float v : t.data) {
    if (!std::isfinite(v)) throw ParseError(source, 0, "map contains a non-finite value");
  }
  return ScalarMap(static_cast<int>(t.dims[1]), static_cast<int>(t.dims[0]), t.data);
}

Tensor from_field(const DisplacementField& f) {
  Tensor t{{5, static_cast<std::uint32_t>(f.height), static_cast<std::uint32_t>(f.width)}, {}};
  t.data.reserve(5 * f.valid.size());
  for (const auto* ch : {&f.dxs, &f.dys, &f.dxe, &f.dye}) {
    t.data.insert(t.data.end(), ch->begin(), ch->end());
  }
  for (auto v : f.valid) t.data.push_back(v ? 1.0f : 0.0f);
  return t;
}

DisplacementField to_field(const Tensor& t, const std::string& source) {
  if (t.dims.size() != 3 || t.dims[0] != 5 || t.dims[1] == 0 || t.dims[2] == 0) {
    throw ParseError(source, 0, "expected a non-empty [5, height, width] displacement tensor");
  }
  DisplacementField f(static_cast<int>(t.dims[2]), static_cast<int>(t.dims[1]));
  const std::size_t n = f.valid.size();
  std::vector<float>* channels[4] = {&f.dxs, &f.dys, &f.dxe, &f.dye};
  for (std::size_t c = 0; c < 4; ++c) {
    std::copy(t.data.begin() + c * n, t.data.begin() + (c + 1) * n, channels[c]->begin());
  }
  for (std::size_t i = 0; i < n; ++i) {
    const float m = t.data[4 * n + i];
    if (m != 0.0f && m != 1.0f) throw ParseError(source, 0, "validity channel must be 0 or 1");
    f.valid[i] = m == 1.0f;
    if (f.valid[i] && !(std::isfinite(f.dxs[i]) && std::isfinite(f.dys[i]) &&
                        std::isfinite(f.dxe[i]) && std::isfinite(f.dye[i]))) {
      throw ParseError(source, 0, "non-finite displacement at a valid pixel");
    }
  }
  return f;
}

}  // namespace lseval::lstn
