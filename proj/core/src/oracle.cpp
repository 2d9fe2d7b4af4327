// SPDX-License-Identifier: Apache-2.0
#include "opsparse/oracle.hpp"

#include <stdexcept>
#include <utility>

namespace opsparse {

QueryOracle::QueryOracle(std::size_t n, Access access) : n_(n), access_(std::move(access)) {
  if (!access_) throw std::invalid_argument("oracle needs an access function");
}

QueryOracle QueryOracle::from_vector(std::vector<double> values) {
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  const std::size_t n = data->size();
  return QueryOracle(n, [data](std::size_t j) { return (*data)[j]; });
}

double QueryOracle::query(std::size_t j) {
  if (j >= n_) throw std::out_of_range("oracle index out of range");
  ++count_;
  return access_(j);
}

double SparseApprox::get(std::size_t i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? 0.0 : it->second;
}

void SparseApprox::add(std::size_t i, double v) { set(i, get(i) + v); }

void SparseApprox::set(std::size_t i, double v) {
  if (v == 0.0) {
    entries_.erase(i);
  } else {
    entries_[i] = v;
  }
}

std::vector<double> SparseApprox::to_dense(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (const auto& [i, v] : entries_) {
    if (i >= n) throw std::out_of_range("sparse index exceeds dense length");
    out[i] = v;
  }
  return out;
}

}  // namespace opsparse
