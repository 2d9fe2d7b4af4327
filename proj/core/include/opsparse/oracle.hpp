// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace opsparse {

using Rng = std::mt19937_64;

/// Counted query access to a length-N real vector.  Every call to query()
/// increments the counter by one; nothing else reads the data.
class QueryOracle {
 public:
  using Access = std::function<double(std::size_t)>;

  QueryOracle() = default;
  QueryOracle(std::size_t n, Access access);

  /// Oracle over a copy of a dense vector.
  static QueryOracle from_vector(std::vector<double> values);

  std::size_t size() const { return n_; }
  std::uint64_t queries() const { return count_; }

  /// Throws std::out_of_range for j >= size().
  double query(std::size_t j);
  double operator()(std::size_t j) { return query(j); }

 private:
  std::size_t n_ = 0;
  Access access_;
  std::uint64_t count_ = 0;
};

/// Sparse transform-domain vector; zeros are never stored.
class SparseApprox {
 public:
  using Map = std::map<std::size_t, double>;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(std::size_t i) const { return entries_.count(i) != 0; }
  double get(std::size_t i) const;

  /// entries[i] += v; removes the entry if the sum is exactly zero.
  void add(std::size_t i, double v);
  void set(std::size_t i, double v);

  const Map& entries() const { return entries_; }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  std::vector<double> to_dense(std::size_t n) const;

  friend bool operator==(const SparseApprox&, const SparseApprox&) = default;

 private:
  Map entries_;
};

}  // namespace opsparse
