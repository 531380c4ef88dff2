#pragma once

// Flat little-endian snapshot files.
//
//   "KGPS"              4 bytes
//   version             u32 (= 1)
//   d, k                u32, u32
//   nx[d], ny[k]        u32 each
//   box_lengths[d]      f64 each
//   torus_lengths[k]    f64 each
//   time                f64
//   u                   size x (re, im) f64, row-major
//   v                   size x (re, im) f64, row-major

#include "nlkg/spectral/field.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

inline constexpr char kSnapshotMagic[4] = {'K', 'G', 'P', 'S'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class ByteWriter {
 public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xffu));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<unsigned char>((bits >> (8 * i)) & 0xffu));
  }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<unsigned char> b) : bytes_(std::move(b)) {}
  void raw(void* p, std::size_t n) {
    need(n);
    std::memcpy(p, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw SnapshotError("snapshot: truncated file");
  }
  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const DomainSpec& spec, const FieldState& s) {
  std::size_t size = 1;
  for (int n : spec.nx) size *= static_cast<std::size_t>(n);
  for (int n : spec.ny) size *= static_cast<std::size_t>(n);
  if (s.u.size() != size || s.v.size() != size) throw SnapshotError("snapshot: field shape does not match the domain");
  detail::ByteWriter w;
  w.raw(kSnapshotMagic, 4);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(spec.d));
  w.u32(static_cast<std::uint32_t>(spec.k));
  for (int n : spec.nx) w.u32(static_cast<std::uint32_t>(n));
  for (int n : spec.ny) w.u32(static_cast<std::uint32_t>(n));
  for (double l : spec.box_lengths) w.f64(l);
  for (double l : spec.torus_lengths) w.f64(l);
  w.f64(s.time);
  for (const auto& z : s.u) {
    w.f64(z.real());
    w.f64(z.imag());
  }
  for (const auto& z : s.v) {
    w.f64(z.real());
    w.f64(z.imag());
  }
  return w.bytes();
}

struct Snapshot {
  DomainSpec spec;
  FieldState state;
};

inline Snapshot decode_snapshot(std::vector<unsigned char> bytes) {
  detail::ByteReader r(std::move(bytes));
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kSnapshotMagic, 4) != 0) throw SnapshotError("snapshot: bad magic");
  if (const auto ver = r.u32(); ver != kSnapshotVersion)
    throw SnapshotError("snapshot: unsupported version " + std::to_string(ver));
  Snapshot out;
  out.spec.d = static_cast<int>(r.u32());
  out.spec.k = static_cast<int>(r.u32());
  if (out.spec.d < 0 || out.spec.d > 16 || out.spec.k < 0 || out.spec.k > 16)
    throw SnapshotError("snapshot: implausible dimensions");
  std::size_t size = 1;
  for (int i = 0; i < out.spec.d; ++i) {
    out.spec.nx.push_back(static_cast<int>(r.u32()));
    size *= static_cast<std::size_t>(out.spec.nx.back());
  }
  for (int i = 0; i < out.spec.k; ++i) {
    out.spec.ny.push_back(static_cast<int>(r.u32()));
    size *= static_cast<std::size_t>(out.spec.ny.back());
  }
  for (int i = 0; i < out.spec.d; ++i) out.spec.box_lengths.push_back(r.f64());
  for (int i = 0; i < out.spec.k; ++i) out.spec.torus_lengths.push_back(r.f64());
  out.state.time = r.f64();
  auto read_field = [&](ComplexField& f) {
    f.resize(size);
    for (auto& z : f) {
      const double re = r.f64();
      const double im = r.f64();
      z = {re, im};
    }
  };
  read_field(out.state.u);
  read_field(out.state.v);
  if (!r.at_end()) throw SnapshotError("snapshot: trailing bytes");
  return out;
}

inline void write_snapshot(const std::string& path, const DomainSpec& spec, const FieldState& s) {
  const auto bytes = encode_snapshot(spec, s);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw SnapshotError("snapshot: cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw SnapshotError("snapshot: write failed for " + path);
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("snapshot: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_snapshot(std::move(bytes));
}

}  // namespace nlkg
