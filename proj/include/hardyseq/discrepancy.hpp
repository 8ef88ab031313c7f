#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hardyseq/hfunc.hpp"

namespace hardyseq {

// N points in [0,1)^dim stored row-major.
struct PointSet {
  int dim = 1;
  std::vector<double> coords;

  std::size_t size() const { return dim > 0 ? coords.size() / static_cast<std::size_t>(dim) : 0; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }

  static PointSet from_1d(std::vector<double> xs);
};

// Sup over closed and open subintervals of [0,1] of |count/N - length|.
// O(N log N) from the sorted sample.
double discrepancy_1d(const PointSet& p);

// Axis-aligned boxes of [0,1]^dim with corners on sample coordinates and
// {0, 1}.  Guarded to dim <= 3 with N <= 300 (dim <= 2) or N <= 64 (dim 3).
double discrepancy_md(const PointSet& p);

// 1/(H+1) + sum_{h=1}^H (1/h) |(1/N) sum_n e(h x_n)|.
double erdos_turan_bound(const PointSet& p, int H);

// 1/H + (1/N) sum_{0 < phi(h) <= H} (1/r(h)) |sum_n e(<h, x_n>)| with
// phi(h) = max |h_j| and r(h) = prod max(|h_j|, 1).  Requires H^dim <= 1e7.
double koksma_szusz_bound(const PointSet& p, int H, unsigned threads = 0);

// {f(a n + b)} for n = 1..M.
PointSet fractional_points(const SubpolyFunction& f, std::int64_t M, std::int64_t a = 1,
                           std::int64_t b = 0);

// ({f(n + d_1)}, ..., {f(n + d_s)}) for n = 1..M.
PointSet shifted_points(const SubpolyFunction& f, std::int64_t M, std::span<const std::int64_t> d);

}  // namespace hardyseq
