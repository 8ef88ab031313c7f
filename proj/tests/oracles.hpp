#pragma once

// Independent reference computations used only by the tests.  Nothing here
// shares code with the library's precision kernel.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "hardyseq/hfunc.hpp"

namespace oracle {

using boost::multiprecision::mpfr_float;
using Quad = boost::multiprecision::cpp_bin_float_quad;

struct Frac {
  mpfr_float value;  // {f(n)} at the oracle precision
  double as_double() const { return value.convert_to<double>(); }
};

// {f(a n + b)} evaluated term by term as c * exp(p log x) * log(x)^k with
// `digits10` decimal digits.
inline Frac fractional_part(const hardyseq::SubpolyFunction& f, std::int64_t n, unsigned digits10) {
  mpfr_float::default_precision(digits10);
  const std::int64_t arg = f.affine().a * n + f.affine().b;
  const mpfr_float x(arg);
  const mpfr_float lx = log(x);
  mpfr_float total = 0;
  for (const auto& t : f.terms()) {
    const mpfr_float c = mpfr_float(t.coeff.get_num().get_str()) / mpfr_float(t.coeff.get_den().get_str());
    const mpfr_float p = mpfr_float(t.power.get_num().get_str()) / mpfr_float(t.power.get_den().get_str());
    mpfr_float term = c * exp(p * lx);
    for (unsigned k = 0; k < t.log_power; ++k) term *= lx;
    total += term;
  }
  return {total - floor(total)};
}

// Digits corresponding to four times the kernel's starting precision.
inline unsigned four_x_digits(const hardyseq::SubpolyFunction& f, std::int64_t n) {
  const double mag = std::max(2.0, std::fabs(f(static_cast<double>(n))));
  const double bits = 4.0 * (64.0 + std::ceil(std::log2(mag)));
  return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 5;
}

inline int chi(const mpfr_float& frac) { return frac < 0.5 ? +1 : -1; }

// chi({f(n)}) from the oracle.  A value that lands within 10^-(digits / 2)
// of 0, 1/2 or 1 is taken to sit exactly on that point (an exact integer or
// half-integer that the transcendental path only approximates), and the
// sign of the point itself is returned.
inline int expected_sign(const hardyseq::SubpolyFunction& f, std::int64_t n, unsigned digits10) {
  const Frac v = fractional_part(f, n, digits10);
  mpfr_float::default_precision(digits10);
  const mpfr_float eps = pow(mpfr_float(10), -static_cast<int>(digits10 / 2));
  if (v.value < eps || 1 - v.value < eps) return +1;
  if (abs(v.value - mpfr_float(0.5)) < eps) return -1;
  return chi(v.value);
}

// sum e(h f(n)) for n in [n1, n2], phases at 128-bit float precision.
inline std::complex<double> weyl_sum_quad(double c, std::int64_t h, std::int64_t n1, std::int64_t n2) {
  Quad re = 0, im = 0;
  const Quad two_pi = 2 * boost::math::constants::pi<Quad>();
  for (std::int64_t n = n1; n <= n2; ++n) {
    Quad v = h * pow(Quad(n), Quad(c));
    v -= floor(v);
    re += cos(two_pi * v);
    im += sin(two_pi * v);
  }
  return {re.convert_to<double>(), im.convert_to<double>()};
}

inline std::vector<std::int8_t> random_signs(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::int8_t> e(n);
  for (auto& v : e) v = (rng() & 1) ? 1 : -1;
  return e;
}

}  // namespace oracle
