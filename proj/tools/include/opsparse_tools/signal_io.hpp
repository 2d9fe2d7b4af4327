// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opsparse/jacobi.hpp"

namespace opsparse::tools {

inline constexpr int kSignalVersion = 1;

/// A real vector with the Jacobi parameters it belongs to.
///   *.json : header and base64 little-endian f64 payload in one document
///   *.f64  : raw little-endian f64 payload, header in <path>.json
struct SignalFile {
  JacobiParams params;
  /// "time" for v = F^T v_hat, "transform" for coefficient vectors.
  std::string domain = "time";
  std::vector<double> data;
  /// Free-form extras (ground truth, generator settings).
  nlohmann::json meta = nlohmann::json::object();
};

class SignalFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws SignalFormatError on malformed input.
std::vector<std::uint8_t> base64_decode(const std::string& text);

std::vector<std::uint8_t> to_le_bytes(std::span<const double> values);
std::vector<double> from_le_bytes(std::span<const std::uint8_t> bytes);

nlohmann::json signal_header(const SignalFile& s);
void write_signal(const std::filesystem::path& path, const SignalFile& s);
SignalFile read_signal(const std::filesystem::path& path);

}  // namespace opsparse::tools
