// SPDX-License-Identifier: Apache-2.0
#include "opsparse_tools/signal_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

namespace opsparse::tools {

namespace {

std::filesystem::path sidecar(const std::filesystem::path& p) {
  return std::filesystem::path(p.string() + ".json");
}

bool is_raw(const std::filesystem::path& p) { return p.extension() == ".f64"; }

std::vector<std::uint8_t> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SignalFormatError("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

nlohmann::json parse_json(const std::filesystem::path& p) {
  const auto bytes = slurp(p);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw SignalFormatError(p.string() + ": " + e.what());
  }
}

SignalFile from_header(const nlohmann::json& h) {
  try {
    if (h.at("format").get<std::string>() != "opsparse-signal") {
      throw SignalFormatError("not an opsparse signal");
    }
    if (h.at("version").get<int>() != kSignalVersion) {
      throw SignalFormatError("unsupported signal version");
    }
    SignalFile s;
    s.params = JacobiParams(h.at("alpha").get<double>(), h.at("beta").get<double>());
    s.domain = h.value("domain", "time");
    s.meta = h.value("meta", nlohmann::json::object());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SignalFormatError(std::string("bad signal header: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SignalFormatError(std::string("bad signal header: ") + e.what());
  }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int len = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                  static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(len));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw SignalFormatError("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int len = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                  static_cast<int>(text.size()));
  if (len < 0) throw SignalFormatError("malformed base64 payload");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(len) - pad);
  return out;
}

std::vector<std::uint8_t> to_le_bytes(std::span<const double> values) {
  std::vector<std::uint8_t> out(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto u = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) out[8 * i + b] = static_cast<std::uint8_t>(u >> (8 * b));
  }
  return out;
}

std::vector<double> from_le_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 8 != 0) throw SignalFormatError("payload is not a whole number of f64");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
    out[i] = std::bit_cast<double>(u);
  }
  return out;
}

nlohmann::json signal_header(const SignalFile& s) {
  return {{"format", "opsparse-signal"},
          {"version", kSignalVersion},
          {"n", s.data.size()},
          {"alpha", s.params.alpha},
          {"beta", s.params.beta},
          {"domain", s.domain},
          {"encoding", "f64le"},
          {"meta", s.meta}};
}

void write_signal(const std::filesystem::path& path, const SignalFile& s) {
  nlohmann::json h = signal_header(s);
  const auto bytes = to_le_bytes(s.data);
  if (is_raw(path)) {
    std::ofstream raw(path, std::ios::binary);
    raw.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    std::ofstream side(sidecar(path));
    side << h.dump(2) << '\n';
    if (!raw || !side) throw SignalFormatError("cannot write " + path.string());
    return;
  }
  h["data"] = base64_encode(bytes);
  std::ofstream out(path);
  out << h.dump(2) << '\n';
  if (!out) throw SignalFormatError("cannot write " + path.string());
}

SignalFile read_signal(const std::filesystem::path& path) {
  const nlohmann::json h = parse_json(is_raw(path) ? sidecar(path) : path);
  SignalFile s = from_header(h);
  if (is_raw(path)) {
    s.data = from_le_bytes(slurp(path));
  } else {
    if (!h.contains("data") || !h["data"].is_string()) throw SignalFormatError("missing payload");
    s.data = from_le_bytes(base64_decode(h["data"].get<std::string>()));
  }
  if (s.data.size() != h.value("n", std::size_t{0})) {
    throw SignalFormatError("payload length does not match header n");
  }
  return s;
}

}  // namespace opsparse::tools
