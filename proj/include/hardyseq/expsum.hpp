#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardyseq/hfunc.hpp"

namespace hardyseq {

// Neumaier-compensated accumulation of complex terms.
class ComplexAccumulator {
 public:
  void add(std::complex<double> z) noexcept {
    add_component(re_, re_c_, z.real());
    add_component(im_, im_c_, z.imag());
  }
  void add(const ComplexAccumulator& other) noexcept {
    add({other.re_, other.im_});
    add({other.re_c_, other.im_c_});
  }
  std::complex<double> value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_component(double& sum, double& carry, double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  double re_ = 0.0, im_ = 0.0, re_c_ = 0.0, im_c_ = 0.0;
};

// e(t) = exp(2 pi i t), with t reduced mod 1 first.
std::complex<double> unit_phase(double t);

// sum_n e(x_n) over plain reals.
std::complex<double> exponential_sum(std::span<const double> phases, std::int64_t h = 1);

// sum_{n=n1}^{n2} e(h f(n)).  Phases are certified to 2^-30 per term.
std::complex<double> weyl_sum(const SubpolyFunction& f, std::int64_t h, std::int64_t n1,
                              std::int64_t n2, unsigned threads = 1);

// g(h, n) = sum_j h_j f(n + d_j).
struct PhaseSpec {
  SubpolyFunction f;
  std::vector<std::int64_t> h;
  std::vector<std::int64_t> d;
};

// sum_{n=1}^M e(g(h, n)).
std::complex<double> multi_phase_sum(const PhaseSpec& spec, std::int64_t M);

// L_k(h) = sum_j h_j d_j^k with 0^0 = 1.  Throws Overflow beyond int64.
std::int64_t linear_form(std::span<const std::int64_t> h, std::span<const std::int64_t> d,
                         unsigned k);

// u(h) = min{k >= 0 : L_k(h) != 0}; at most s - 1 for nonzero h and
// distinct d.
int min_nonvanishing_index(std::span<const std::int64_t> h, std::span<const std::int64_t> d);

// beta (beta - 1) ... (beta - u + 1).
double falling_factorial(double beta, int u);

struct LambdaAlpha {
  double lambda_r = 0.0;
  double alpha_r = 0.0;
};

// lambda_r = |h| (a P)^(beta - eps) P^(-r), alpha_r = (a P)^(2 eps).
LambdaAlpha lambda_alpha(const SubpolyFunction& f, std::int64_t h, std::int64_t a, double p_q,
                         int r, double eps = 0.05);

// Bound shape 1/lambda for 0 < lambda <= 1/2 (implied constant 1).
double kusmin_landau_bound(double lambda);

struct BoundInputs {
  double lambda_r = 0.0;
  double alpha_r = 1.0;
  int r = 2;
  std::int64_t bigR = 2;  // 2^(r-1)
  double X = 2.0;         // range length
  double X1 = 0.0;        // range start; the range is ]X1, X1 + X]
};

BoundInputs make_bound_inputs(double lambda_r, double alpha_r, int r, double X, double X1 = 0.0);

// X [ (a l)^(1/(2R-2)) + (l X^r)^(-1/R) (log X)^((r-1)/R) + (a log^(r-1) X / X)^(1/R) ]
// with implied constant 1.
double vdc_bound(const BoundInputs& in);

// Checks lambda_r <= |phase^(r)(x)| <= alpha_r lambda_r on `samples` points
// of ]X1, X1 + X], where phase is evaluated through its exact derivative.
bool check_bound_inputs(const SubpolyFunction& phase, const BoundInputs& in, int samples = 257);

struct WExponent {
  double exponent = 0.0;
  std::string case_label;  // "small", "medium" or "large"
};

// Exponent of M in the well-distribution bound predicted from beta(f).
WExponent predicted_w_exponent(const GrowthInfo& g);

struct RobertReport {
  bool premise_ok = false;
  double sum_abs = 0.0;
  double lower_bound = 0.0;
  bool holds = false;
};

// |sum_{n<=N} e(h / f(n))| against N/8 when f(floor(N/4)) >= 4 pi |h|.
RobertReport robert_check(const SubpolyFunction& f, std::int64_t h, std::int64_t n);

}  // namespace hardyseq
