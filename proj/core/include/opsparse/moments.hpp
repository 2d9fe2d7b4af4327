// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace opsparse {

class OrthonormalRecurrence;

/// Symmetric banded N x N matrix stored by upper diagonals.
/// diagonal(m)[i] holds entry (i, i+m) for i < N-m.
class BandedSymmetric {
 public:
  BandedSymmetric() = default;
  BandedSymmetric(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  std::span<const double> diagonal(std::size_t m) const;
  std::span<double> diagonal(std::size_t m);

  /// Entry (i, j); zero outside the band.
  double at(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

/// The moment matrices M_r = P^T D_w T_r(D_lambda) P for r = 0..d.
/// M_r has bandwidth r; entries outside the band are not stored.  For each
/// upper position (i, i+m) the values of M_m..M_d are contiguous, so a row of
/// sum_r b_r M_r reads memory sequentially.
class MomentMatrices {
 public:
  MomentMatrices() = default;
  MomentMatrices(std::size_t n, std::size_t degree);

  std::size_t size() const { return n_; }
  std::size_t degree() const { return d_; }

  /// Entry (i, j) of M_r; zero when |i - j| > r.
  double at(std::size_t r, std::size_t i, std::size_t j) const;

  /// M_r(i, i+m) for m <= r and i + m < N.
  double upper(std::size_t r, std::size_t m, std::size_t i) const { return data_[slot(r, m, i)]; }
  double& upper(std::size_t r, std::size_t m, std::size_t i) { return data_[slot(r, m, i)]; }

  /// B = sum_r coeffs[r] M_r, with coeffs.size() <= degree()+1.
  BandedSymmetric combine(std::span<const double> coeffs) const;

  /// Row j of sum_r coeffs[r] M_r restricted to columns max(0, j-D)..min(N-1, j+D),
  /// D = coeffs.size()-1.  Costs O(D^2).
  void combine_row(std::span<const double> coeffs, std::size_t j, std::span<double> out) const;

  friend bool operator==(const MomentMatrices&, const MomentMatrices&) = default;

 private:
  std::size_t slot(std::size_t r, std::size_t m, std::size_t i) const {
    return offset_[m] + i * (d_ + 1 - m) + (r - m);
  }

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

/// Builds M_0..M_d.  Gauss quadrature makes F^T Lambda F equal to the
/// tridiagonal Jacobi matrix J, so M_r = T_r(J) and
/// M_{r+1} = 2 J M_r - M_{r-1}.
MomentMatrices build_moments(const OrthonormalRecurrence& rec, std::size_t n, std::size_t degree);

}  // namespace opsparse
