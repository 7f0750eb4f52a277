#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <vector>

#include "lagpsd/laguerre.hpp"
#include "lagpsd/spectra.hpp"

namespace lagpsd {

// Collocation for y' = mu y + c, y(0) = beta on the positive half-line, with
// nodes at the Laguerre zeros or extrema.

enum class Precision { Double, Extended };

struct ExtendedCoeffs;  // 50-digit copies of the coefficients

struct CollocationSolution {
  cplx mu, beta, c;
  int n = 0;
  NodeFamily family = NodeFamily::LaguerreZeros;
  std::vector<cplx> coeffs;  // a_0..a_{N-1}, dp/dt = sum a_j t^j
  cplx closure;              // a_N, zero up to rounding
  cplx k_n, d_n;
  std::vector<double> nodes;
  std::vector<cplx> values;  // p_N at the nodes
  Precision precision = Precision::Extended;
  std::shared_ptr<const ExtendedCoeffs> ext;
};

struct DirectSolution {
  std::vector<double> nodes;
  std::vector<cplx> values;  // p_N at the nodes
  double condition = 0.0;    // 1-norm condition of the collocation matrix
};

CollocationSolution colloc_recurrence(cplx mu, cplx beta, cplx c, int n, NodeFamily family,
                                      Precision prec = Precision::Extended);
DirectSolution colloc_direct(cplx mu, cplx beta, cplx c, int n, NodeFamily family,
                             Precision prec = Precision::Double);

// p_N(t) from the recurrence coefficients.
cplx colloc_eval(const CollocationSolution& s, double t);
// dp_N/dt - mu p_N - c, which equals k_N q_N(t).
cplx colloc_residual(const CollocationSolution& s, double t);
// y for the same data.
cplx exact_solution(cplx mu, cplx beta, cplx c, double t);

cplx closed_form_dN(cplx mu, int n, NodeFamily family);
cplx c_of_mu(cplx mu);

double error_bound(cplx mu, cplx beta, cplx c, int n, NodeFamily family,
                   double p_norm = std::numeric_limits<double>::infinity(), double delta = 0.0);

struct MeasuredError {
  double value = 0.0;
  double accuracy = 0.0;  // estimated absolute accuracy of value
  double horizon = 0.0;   // truncation point T
};

// ||e^{-(1/2+delta) t} (p_N - y)||_p on the half-line.
MeasuredError measured_error(const CollocationSolution& s,
                             double p_norm = std::numeric_limits<double>::infinity(),
                             double delta = 0.0);

struct CharPolySample {
  cplx mu;
  cplx computed;   // det(mu I - D_red)
  cplx predicted;  // monic closed form
};

struct ReducedDiffSpectrum {
  NodeFamily family = NodeFamily::LaguerreZeros;
  int n = 0;
  std::vector<cplx> predicted;
  Spectrum computed;
  double max_set_distance = 0.0;  // greedy pairing of computed vs predicted
  double max_re_offset = 0.0;     // max |Re - 1/2| (extrema) or |lambda - 1| (zeros)
  double trace = 0.0;
  double det = 0.0;
  std::vector<CharPolySample> samples;
  double max_sample_rel_error = 0.0;
};

Eigen::MatrixXd reduced_diff_matrix(int n, NodeFamily family);
ReducedDiffSpectrum reduced_diffmat_spectrum(int n, NodeFamily family);

}  // namespace lagpsd
