// SPDX-License-Identifier: Apache-2.0
#include "opsparse/plan_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <zlib.h>

namespace opsparse {

namespace {

constexpr char kMagic[4] = {'O', 'P', 'S', 'P'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void raw(const unsigned char* p, std::size_t n, bool checksum) {
    out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (checksum) crc_ = crc32_z(crc_, p, n);
  }
  void u32(std::uint32_t v, bool checksum = true) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    raw(b, 4, checksum);
  }
  void u64(std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    raw(b, 8, true);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::uint32_t crc() const { return static_cast<std::uint32_t>(crc_); }

 private:
  std::ostream& out_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& buf) : buf_(buf) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) {
      throw PlanFormatError(PlanFormatError::Kind::Truncated, "plan file is truncated");
    }
  }
  const std::vector<unsigned char>& buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_plan(const TransformPlan& plan, std::ostream& out) {
  const std::size_t n = plan.size();
  const MomentMatrices& M = plan.moments();
  const std::size_t d = M.degree();
  Writer w(out);
  w.raw(reinterpret_cast<const unsigned char*>(kMagic), 4, false);
  w.u32(kPlanFormatVersion, false);
  w.f64(plan.params().alpha);
  w.f64(plan.params().beta);
  w.u64(n);
  w.u64(d);
  w.f64(plan.flatness());
  for (double v : plan.theta()) w.f64(v);
  for (double v : plan.lambda()) w.f64(v);
  for (double v : plan.weights()) w.f64(v);
  for (std::size_t r = 0; r <= d; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lo = j >= r ? j - r : 0;
      const std::size_t hi = std::min(n - 1, j + r);
      for (std::size_t i = lo; i <= hi; ++i) w.f64(M.at(r, j, i));
    }
  }
  w.u32(w.crc(), false);
  if (!out) throw PlanFormatError(PlanFormatError::Kind::Io, "failed to write plan");
}

void save_plan(const TransformPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PlanFormatError(PlanFormatError::Kind::Io, "cannot open " + path.string());
  save_plan(plan, out);
  out.close();
  if (!out) throw PlanFormatError(PlanFormatError::Kind::Io, "failed to write " + path.string());
}

TransformPlan load_plan(std::istream& in, std::size_t dense_limit) {
  using Kind = PlanFormatError::Kind;
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 4) throw PlanFormatError(Kind::Truncated, "plan file is truncated");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw PlanFormatError(Kind::BadMagic, "not a plan file (bad magic)");
  }
  Reader r(buf);
  r.u32();  // magic
  const std::uint32_t version = r.u32();
  if (version != kPlanFormatVersion) {
    throw PlanFormatError(Kind::Version,
                          "unsupported plan version " + std::to_string(version));
  }
  const std::size_t payload_start = r.pos();
  const double alpha = r.f64();
  const double beta = r.f64();
  const std::uint64_t n = r.u64();
  const std::uint64_t d = r.u64();
  const double U = r.f64();
  if (n < 1 || d >= n) throw PlanFormatError(Kind::Invalid, "plan header has invalid sizes");
  // Check the declared sizes against the file length before allocating.
  long double entries = 3.0L * static_cast<long double>(n);
  for (std::uint64_t rr = 0; rr <= d; ++rr) {
    entries += static_cast<long double>(n) * static_cast<long double>(2 * rr + 1) -
               static_cast<long double>(rr) * static_cast<long double>(rr + 1);
  }
  const long double expected = 8.0L * entries + 4.0L;
  if (static_cast<long double>(r.remaining()) < expected) {
    throw PlanFormatError(Kind::Truncated, "plan file is truncated");
  }
  if (static_cast<long double>(r.remaining()) > expected) {
    throw PlanFormatError(Kind::Invalid, "trailing bytes after checksum");
  }
  const std::size_t payload_end = buf.size() - 4;
  const auto crc = static_cast<std::uint32_t>(
      crc32_z(crc32(0L, Z_NULL, 0), buf.data() + payload_start, payload_end - payload_start));
  std::uint32_t stored = 0;
  for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(buf[payload_end + i]) << (8 * i);
  if (crc != stored) throw PlanFormatError(Kind::Checksum, "plan checksum mismatch");

  std::vector<double> theta(n), lambda(n), weights(n);
  for (auto& v : theta) v = r.f64();
  for (auto& v : lambda) v = r.f64();
  for (auto& v : weights) v = r.f64();
  MomentMatrices M(n, d);
  for (std::size_t rr = 0; rr <= d; ++rr) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lo = j >= rr ? j - rr : 0;
      const std::size_t hi = std::min<std::size_t>(n - 1, j + rr);
      for (std::size_t i = lo; i <= hi; ++i) {
        const double v = r.f64();
        if (i >= j) M.upper(rr, i - j, j) = v;
      }
    }
  }
  try {
    return TransformPlan(JacobiParams(alpha, beta), std::move(theta), std::move(lambda),
                         std::move(weights), U, std::move(M), dense_limit);
  } catch (const std::invalid_argument& e) {
    throw PlanFormatError(Kind::Invalid, e.what());
  }
}

TransformPlan load_plan(const std::filesystem::path& path, std::size_t dense_limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PlanFormatError(PlanFormatError::Kind::Io, "cannot open " + path.string());
  return load_plan(in, dense_limit);
}

}  // namespace opsparse
