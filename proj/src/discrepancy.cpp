#include "hardyseq/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardyseq/error.hpp"
#include "hardyseq/expsum.hpp"
#include "parallel.hpp"

namespace hardyseq {
namespace {

void check_points(const PointSet& p) {
  if (p.dim < 1) throw Error(ErrorKind::InvalidArgument, "point set dimension must be >= 1");
  if (p.coords.empty() || p.coords.size() % static_cast<std::size_t>(p.dim) != 0) {
    throw Error(ErrorKind::InvalidArgument, "point set must hold N >= 1 complete points");
  }
  for (const double c : p.coords) {
    if (!(c >= 0.0 && c < 1.0)) throw Error(ErrorKind::Domain, "point coordinates must lie in [0,1)");
  }
}

// Distinct sorted coordinates of dimension k together with 0 and 1.
std::vector<double> candidates(const PointSet& p, const std::vector<std::size_t>& rows, int k) {
  std::vector<double> c{0.0, 1.0};
  for (const auto i : rows) c.push_back(p.coords[i * p.dim + k]);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

struct BoxSearch {
  const PointSet& p;
  double n;
  std::vector<std::vector<double>> grid;  // candidate coordinates per dimension
  double best = 0.0;

  // Last dimension: best closed-box excess or open-box deficit for the
  // surviving rows, given the product w of the outer widths.
  void last(const std::vector<std::size_t>& rows, double w, bool closed) {
    const int k = p.dim - 1;
    const auto& c = grid[k];
    std::vector<double> mass(c.size(), 0.0);
    for (const auto i : rows) {
      const double x = p.coords[i * p.dim + k];
      const auto j = static_cast<std::size_t>(std::lower_bound(c.begin(), c.end(), x) - c.begin());
      mass[j] += 1.0;
    }
    if (closed) {
      // max_{i<=j} (P_j - w c_j) - (P_{i-1} - w c_i), P_j = mass[0..j] / n
      double prefix = 0.0;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < c.size(); ++j) {
        lowest = std::min(lowest, prefix - w * c[j]);
        prefix += mass[j] / n;
        best = std::max(best, (prefix - w * c[j]) - lowest);
      }
    } else {
      // max_{i<j} (w c_j - P_{j-1}) - (w c_i - P_i)
      double prefix = 0.0;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < c.size(); ++j) {
        if (j > 0) best = std::max(best, (w * c[j] - prefix) - lowest);
        prefix += mass[j] / n;
        lowest = std::min(lowest, w * c[j] - prefix);
      }
    }
  }

  void outer(int k, const std::vector<std::size_t>& rows, double w, bool closed) {
    if (k == p.dim - 1) {
      last(rows, w, closed);
      return;
    }
    const auto& c = grid[k];
    std::vector<std::size_t> inside;
    for (std::size_t lo = 0; lo < c.size(); ++lo) {
      for (std::size_t hi = closed ? lo : lo + 1; hi < c.size(); ++hi) {
        inside.clear();
        for (const auto i : rows) {
          const double x = p.coords[i * p.dim + k];
          const bool in = closed ? (x >= c[lo] && x <= c[hi]) : (x > c[lo] && x < c[hi]);
          if (in) inside.push_back(i);
        }
        outer(k + 1, inside, w * (c[hi] - c[lo]), closed);
      }
    }
  }
};

}  // namespace

PointSet PointSet::from_1d(std::vector<double> xs) {
  PointSet p;
  p.dim = 1;
  p.coords = std::move(xs);
  return p;
}

double discrepancy_1d(const PointSet& p) {
  check_points(p);
  if (p.dim != 1) throw Error(ErrorKind::InvalidArgument, "discrepancy_1d needs a 1-dimensional point set");
  std::vector<double> x = p.coords;
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = static_cast<double>(i + 1) / n - x[i];
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return std::min(1.0, 1.0 / n + hi - lo);
}

double discrepancy_md(const PointSet& p) {
  check_points(p);
  const std::size_t n = p.size();
  if (p.dim > 3 || (p.dim <= 2 && n > 300) || (p.dim == 3 && n > 64)) {
    throw Error(ErrorKind::SizeGuard,
                "exact box discrepancy is limited to dim <= 3 with N <= 300 (N <= 64 for dim 3); "
                "use koksma_szusz_bound instead");
  }
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  BoxSearch search{p, static_cast<double>(n), {}};
  for (int k = 0; k < p.dim; ++k) search.grid.push_back(candidates(p, rows, k));
  search.outer(0, rows, 1.0, true);
  search.outer(0, rows, 1.0, false);
  return std::min(1.0, search.best);
}

double erdos_turan_bound(const PointSet& p, int H) {
  check_points(p);
  if (p.dim != 1) throw Error(ErrorKind::InvalidArgument, "erdos_turan_bound needs a 1-dimensional point set");
  if (H < 1) throw Error(ErrorKind::InvalidArgument, "H must be >= 1");
  const double n = static_cast<double>(p.size());
  double total = 1.0 / (H + 1.0);
  for (int h = 1; h <= H; ++h) {
    total += std::abs(exponential_sum(p.coords, h)) / (n * h);
  }
  return total;
}

double koksma_szusz_bound(const PointSet& p, int H, unsigned threads) {
  check_points(p);
  if (H < 1) throw Error(ErrorKind::InvalidArgument, "H must be >= 1");
  if (std::pow(static_cast<double>(H), p.dim) > 1e7) {
    throw Error(ErrorKind::SizeGuard, "H^dim exceeds the lattice guard 1e7");
  }
  const int side = 2 * H + 1;
  std::size_t total = 1;
  for (int k = 0; k < p.dim; ++k) total *= static_cast<std::size_t>(side);
  const std::size_t n = p.size();

  // Lattice points in lexicographic order of (h_1, ..., h_dim), each h_j in
  // [-H, H], summed in fixed-size blocks that are merged in order, so the
  // result does not depend on the thread count.
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  detail::parallel_chunks(blocks, threads, [&](std::size_t, std::size_t first, std::size_t last) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(p.dim));
    for (std::size_t blk = first; blk < last; ++blk) {
      double acc = 0.0;
      for (std::size_t idx = blk * kBlock; idx < std::min(total, (blk + 1) * kBlock); ++idx) {
        std::size_t rest = idx;
        double r = 1.0;
        bool zero = true;
        for (int k = p.dim - 1; k >= 0; --k) {
          h[k] = static_cast<std::int64_t>(rest % side) - H;
          rest /= side;
          if (h[k] != 0) zero = false;
          r *= static_cast<double>(std::max<std::int64_t>(std::abs(h[k]), 1));
        }
        if (zero) continue;
        ComplexAccumulator s;
        for (std::size_t i = 0; i < n; ++i) {
          double phase = 0.0;
          for (int k = 0; k < p.dim; ++k) phase += static_cast<double>(h[k]) * p.coords[i * p.dim + k];
          s.add(unit_phase(phase));
        }
        acc += std::abs(s.value()) / r;
      }
      partial[blk] = acc;
    }
  });
  double sum = 0.0;
  for (const double v : partial) sum += v;
  return 1.0 / H + sum / static_cast<double>(n);
}

PointSet fractional_points(const SubpolyFunction& f, std::int64_t M, std::int64_t a, std::int64_t b) {
  if (M < 1 || a < 1) throw Error(ErrorKind::InvalidArgument, "fractional_points needs M >= 1 and a >= 1");
  PointSet p;
  p.dim = 1;
  p.coords.reserve(static_cast<std::size_t>(M));
  for (std::int64_t n = 1; n <= M; ++n) p.coords.push_back(eval_frac(f, a * n + b).frac);
  return p;
}

PointSet shifted_points(const SubpolyFunction& f, std::int64_t M, std::span<const std::int64_t> d) {
  if (M < 1 || d.empty()) throw Error(ErrorKind::InvalidArgument, "shifted_points needs M >= 1 and s >= 1");
  PointSet p;
  p.dim = static_cast<int>(d.size());
  p.coords.reserve(static_cast<std::size_t>(M) * d.size());
  for (std::int64_t n = 1; n <= M; ++n) {
    for (const auto shift : d) p.coords.push_back(eval_frac(f, n + shift).frac);
  }
  return p;
}

}  // namespace hardyseq
