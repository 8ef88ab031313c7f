#include "hardyseq/vaaler.hpp"

#include <cmath>
#include <numbers>

#include "hardyseq/error.hpp"
#include "parallel.hpp"

namespace hardyseq {
namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi h / 2) and cos(pi h / 2) are exactly 0 or +-1 for integer h.
double sin_half_pi(int h) {
  static constexpr double table[4] = {0.0, 1.0, 0.0, -1.0};
  return table[h & 3];
}
double cos_half_pi(int h) {
  static constexpr double table[4] = {1.0, 0.0, -1.0, 0.0};
  return table[h & 3];
}

double chi_real(double x) {
  const double f = x - std::floor(x);
  return f < 0.5 ? 1.0 : -1.0;
}

// cos(2 pi h (x - 1/4)) with the product reduced mod 1 before scaling.
double shifted_cos(int h, double x) {
  double t = static_cast<double>(h) * (x - std::floor(x)) - 0.25 * (h & 3);
  t -= std::floor(t);
  return std::cos(2.0 * kPi * t);
}

}  // namespace

VaalerPoly build_vaaler(int H) {
  if (H < 1) throw Error(ErrorKind::InvalidArgument, "Vaaler degree H must be >= 1");
  VaalerPoly v;
  v.H = H;
  v.a.assign(static_cast<std::size_t>(H) + 1, 0.0);
  v.b.assign(static_cast<std::size_t>(H) + 1, 0.0);
  const double inv = 1.0 / (H + 1.0);
  v.b[0] = inv;
  for (int h = 1; h <= H; ++h) {
    const double t = h * inv;
    const double s = sin_half_pi(h);
    if (s != 0.0) {
      const double angle = kPi * t;
      const double phi = angle * (1.0 - t) * std::cos(angle) / std::sin(angle) + t;
      v.a[h] = s / (kPi * h) * phi;
    }
    v.b[h] = inv * (1.0 - t) * cos_half_pi(h);
  }
  return v;
}

double eval_A(const VaalerPoly& v, double x) {
  double sum = 0.0;
  for (int h = 1; h <= v.H; h += 2) sum += v.a[h] * shifted_cos(h, x);
  return 4.0 * sum;
}

double eval_B(const VaalerPoly& v, double x) {
  double sum = 0.0;
  for (int h = 2; h <= v.H; h += 2) sum += v.b[h] * shifted_cos(h, x);
  return 2.0 * (v.b[0] + 2.0 * sum);
}

namespace {

std::complex<double> two_sided(const std::vector<double>& c, int H, double x) {
  std::complex<double> sum{0.0, 0.0};
  for (int h = -H; h <= H; ++h) {
    if (h == 0) continue;
    const double coeff = c[static_cast<std::size_t>(std::abs(h))];
    if (coeff == 0.0) continue;
    double t = h * (x - std::floor(x)) - 0.25 * h;
    t -= std::floor(t);
    sum += coeff * std::polar(1.0, 2.0 * kPi * t);
  }
  return sum;
}

}  // namespace

std::complex<double> eval_A_complex(const VaalerPoly& v, double x) {
  return 2.0 * two_sided(v.a, v.H, x);
}

std::complex<double> eval_B_complex(const VaalerPoly& v, double x) {
  return 2.0 * (v.b[0] + two_sided(v.b, v.H, x));
}

EnvelopeReport verify_envelope(int H, std::int64_t grid_size, double delta, unsigned threads) {
  if (grid_size < 1) throw Error(ErrorKind::InvalidArgument, "grid size must be >= 1");
  if (!(delta >= 0.0 && delta < 0.25)) throw Error(ErrorKind::InvalidArgument, "delta must lie in [0, 1/4)");
  const VaalerPoly v = build_vaaler(H);

  struct Partial {
    std::int64_t checked = 0;
    double excess = -INFINITY;
    double x = 0.0;
    double min_b = INFINITY;
  };
  const auto count = static_cast<std::size_t>(grid_size);
  std::vector<Partial> parts(detail::chunk_count(count, threads));
  detail::parallel_chunks(count, threads, [&](std::size_t w, std::size_t begin, std::size_t end) {
    Partial& p = parts[w];
    for (std::size_t i = begin; i < end; ++i) {
      const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(grid_size);
      const double dist = std::min({x, std::fabs(x - 0.5), 1.0 - x});
      if (dist <= delta) continue;
      ++p.checked;
      const double b = eval_B(v, x);
      const double excess = std::fabs(chi_real(x) - eval_A(v, x)) - b;
      if (excess > p.excess) {
        p.excess = excess;
        p.x = x;
      }
      p.min_b = std::min(p.min_b, b);
    }
  });

  EnvelopeReport rep;
  rep.H = H;
  rep.grid_size = grid_size;
  rep.max_excess = -INFINITY;
  rep.min_B = INFINITY;
  for (const auto& p : parts) {
    rep.points_checked += p.checked;
    if (p.excess > rep.max_excess) {
      rep.max_excess = p.excess;
      rep.worst_x = p.x;
    }
    rep.min_B = std::min(rep.min_B, p.min_b);
  }
  rep.pass = rep.points_checked > 0 && rep.max_excess <= 1e-9;
  return rep;
}

}  // namespace hardyseq
