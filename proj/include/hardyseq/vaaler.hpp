#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace hardyseq {

// Degree-H trigonometric envelope for chi: |chi(x) - A_H(x)| <= B_H(x).
// a[h] for h = 0..H (a[0] unused, a_{-h} = a_h); b[h] for h = 0..H.
struct VaalerPoly {
  int H = 1;
  std::vector<double> a;
  std::vector<double> b;
};

// a_h = sin(pi h/2)/(pi h) * (pi t (1 - t) cot(pi t) + t), t = h/(H+1)
// b_h = (1/(H+1)) (1 - t) cos(pi h/2)
VaalerPoly build_vaaler(int H);

// A_H(x) = 2 sum_{1<=|h|<=H} a_h e(h (x - 1/4)) = 4 sum_h a_h cos(2 pi h (x - 1/4)).
double eval_A(const VaalerPoly& v, double x);

// B_H(x) = 2 [b_0 + 2 sum_h b_h cos(2 pi h (x - 1/4))].
double eval_B(const VaalerPoly& v, double x);

// The same sums accumulated term by term over h = -H..H in complex
// arithmetic; the imaginary parts measure how far the two-sided sums are
// from real.
std::complex<double> eval_A_complex(const VaalerPoly& v, double x);
std::complex<double> eval_B_complex(const VaalerPoly& v, double x);

struct EnvelopeReport {
  int H = 0;
  std::int64_t grid_size = 0;
  std::int64_t points_checked = 0;
  double max_excess = 0.0;   // max of |chi - A_H| - B_H over the grid
  double worst_x = 0.0;
  double min_B = 0.0;
  bool pass = false;         // max_excess <= 1e-9
};

// Grid x_i = (i + 1/2) / grid_size, skipping points within delta of 0 or
// 1/2 mod 1.
EnvelopeReport verify_envelope(int H, std::int64_t grid_size, double delta, unsigned threads = 0);

}  // namespace hardyseq
