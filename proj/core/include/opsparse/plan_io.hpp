// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "opsparse/transform_plan.hpp"

namespace opsparse {

/// Plan file layout, all little-endian:
///   "OPSP", u32 version (1),
///   payload: f64 alpha, f64 beta, u64 N, u64 d, f64 U,
///            f64 theta[N], f64 lambda[N], f64 weights[N],
///            for r = 0..d and each row j, f64 M_r[j, max(0, j-r) .. min(N-1, j+r)],
///   u32 CRC-32 of the payload.
inline constexpr std::uint32_t kPlanFormatVersion = 1;

class PlanFormatError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, Version, Truncated, Checksum, Invalid };
  PlanFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void save_plan(const TransformPlan& plan, std::ostream& out);
void save_plan(const TransformPlan& plan, const std::filesystem::path& path);

TransformPlan load_plan(std::istream& in, std::size_t dense_limit = 4096);
TransformPlan load_plan(const std::filesystem::path& path, std::size_t dense_limit = 4096);

}  // namespace opsparse
