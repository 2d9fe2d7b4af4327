// SPDX-License-Identifier: Apache-2.0
#include "opsparse/moments.hpp"

#include <algorithm>
#include <stdexcept>

#include "opsparse/jacobi.hpp"

namespace opsparse {

BandedSymmetric::BandedSymmetric(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), offset_(bandwidth + 2, 0) {
  for (std::size_t m = 0; m <= bw_; ++m) {
    offset_[m + 1] = offset_[m] + (m < n_ ? n_ - m : 0);
  }
  data_.assign(offset_[bw_ + 1], 0.0);
}

std::span<const double> BandedSymmetric::diagonal(std::size_t m) const {
  return {data_.data() + offset_[m], offset_[m + 1] - offset_[m]};
}

std::span<double> BandedSymmetric::diagonal(std::size_t m) {
  return {data_.data() + offset_[m], offset_[m + 1] - offset_[m]};
}

double BandedSymmetric::at(std::size_t i, std::size_t j) const {
  const std::size_t lo = std::min(i, j);
  const std::size_t m = std::max(i, j) - lo;
  if (m > bw_) return 0.0;
  return data_[offset_[m] + lo];
}

MomentMatrices::MomentMatrices(std::size_t n, std::size_t degree)
    : n_(n), d_(degree), offset_(degree + 2, 0) {
  for (std::size_t m = 0; m <= d_; ++m) {
    offset_[m + 1] = offset_[m] + (m < n_ ? (n_ - m) * (d_ + 1 - m) : 0);
  }
  data_.assign(offset_.back(), 0.0);
}

double MomentMatrices::at(std::size_t r, std::size_t i, std::size_t j) const {
  if (r > d_) throw std::out_of_range("moment degree out of range");
  const std::size_t lo = std::min(i, j);
  const std::size_t m = std::max(i, j) - lo;
  if (m > r) return 0.0;
  return data_[slot(r, m, lo)];
}

BandedSymmetric MomentMatrices::combine(std::span<const double> coeffs) const {
  if (coeffs.empty() || coeffs.size() > d_ + 1) {
    throw std::invalid_argument("filter degree exceeds moment degree");
  }
  const std::size_t D = coeffs.size() - 1;
  BandedSymmetric out(n_, D);
  for (std::size_t m = 0; m <= D && m < n_; ++m) {
    auto dst = out.diagonal(m);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      const double* run = data_.data() + slot(m, m, i);
      double acc = 0.0;
      for (std::size_t r = m; r <= D; ++r) acc += coeffs[r] * run[r - m];
      dst[i] = acc;
    }
  }
  return out;
}

void MomentMatrices::combine_row(std::span<const double> coeffs, std::size_t j,
                                 std::span<double> out) const {
  if (coeffs.empty() || coeffs.size() > d_ + 1) {
    throw std::invalid_argument("filter degree exceeds moment degree");
  }
  const std::size_t D = coeffs.size() - 1;
  const std::size_t lo = j >= D ? j - D : 0;
  const std::size_t hi = std::min(n_ - 1, j + D);
  if (out.size() != hi - lo + 1) throw std::invalid_argument("row buffer has wrong length");
  for (std::size_t i = lo; i <= hi; ++i) {
    const std::size_t m = i > j ? i - j : j - i;
    const double* run = data_.data() + slot(m, m, std::min(i, j));
    const double* c = coeffs.data() + m;
    const std::size_t len = D + 1 - m;
    // Independent partial sums keep the FP pipeline busy.
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t r = 0;
    for (; r + 4 <= len; r += 4) {
      acc[0] += c[r] * run[r];
      acc[1] += c[r + 1] * run[r + 1];
      acc[2] += c[r + 2] * run[r + 2];
      acc[3] += c[r + 3] * run[r + 3];
    }
    for (; r < len; ++r) acc[0] += c[r] * run[r];
    out[i - lo] = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  }
}

MomentMatrices build_moments(const OrthonormalRecurrence& rec, std::size_t n, std::size_t degree) {
  if (n == 0) throw std::invalid_argument("empty transform");
  if (degree >= n) throw std::invalid_argument("moment degree must be below N");
  if (rec.max_degree() + 1 < n) throw std::invalid_argument("recurrence table too short");
  MomentMatrices M(n, degree);

  // J(i, i) = b_i and J(i-1, i) = a_i, truncated to N x N.
  auto A = [&](std::size_t i) { return (i == 0 || i >= n) ? 0.0 : rec.a(i); };

  // Upper-diagonal accessor for a stored moment with bandwidth r.
  auto get = [&](std::size_t r, std::size_t i, std::size_t k) -> double {
    // i, k are valid indices with no ordering assumption.
    const std::size_t lo = std::min(i, k);
    const std::size_t m = std::max(i, k) - lo;
    if (m > r) return 0.0;
    return M.upper(r, m, lo);
  };

  for (std::size_t i = 0; i < n; ++i) M.upper(0, 0, i) = 1.0;

  for (std::size_t r = 0; r < degree; ++r) {
    const std::size_t next = r + 1;
    for (std::size_t m = 0; m <= next && m < n; ++m) {
      for (std::size_t i = 0; i + m < n; ++i) {
        const std::size_t k = i + m;
        double jm = rec.b(i) * get(r, i, k);
        if (i > 0) jm += A(i) * get(r, i - 1, k);
        if (i + 1 < n) jm += A(i + 1) * get(r, i + 1, k);
        if (r == 0) {
          M.upper(next, m, i) = jm;
        } else {
          M.upper(next, m, i) = 2.0 * jm - get(r - 1, i, k);
        }
      }
    }
  }
  return M;
}

}  // namespace opsparse
