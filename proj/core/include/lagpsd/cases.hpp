#pragma once

#include <string>
#include <vector>

#include "lagpsd/spectra.hpp"

namespace lagpsd {

// One linear benchmark problem with known rightmost roots.
struct LinearCase {
  std::string id;
  ProblemTag tag = ProblemTag::DDE;
  double a = 0.0;
  KernelSpec kernel;
  double mu = 1.0;                // kernel rate, sets the default scalings
  std::vector<ExactRoot> roots;   // known roots near the target (for pairing)
  std::vector<int> targets;       // indices into roots that are studied
};

std::vector<std::string> linear_case_ids();
LinearCase linear_case(const std::string& id);

// Real root of the cubic for the sin-modulated kernel, by bisection.
double sin_kernel_cubic_root(double k0, double mu, double a, double lo, double hi);

struct ConvergenceRecord {
  std::string case_id;
  NodeFamily family = NodeFamily::LaguerreZeros;
  double rho1 = 0.0;
  double rho = 0.0;
  QuadMode quad_mode = QuadMode::Gauss;
  int n = 0;
  double abs_error = std::numeric_limits<double>::quiet_NaN();
  double eigfun_error = std::numeric_limits<double>::quiet_NaN();
  cplx matched;
  cplx exact;
  double bound_dn = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success
};

DiscretizedLinearOperator assemble_case(const LinearCase& c, NodeFamily family, int n,
                                        double rho1, double rho, QuadMode mode = QuadMode::Gauss);

// One record per (N, matched target root); failures are recorded, not thrown.
std::vector<ConvergenceRecord> convergence_study(const LinearCase& c, NodeFamily family,
                                                 double rho1, double rho,
                                                 const std::vector<int>& ns,
                                                 QuadMode mode = QuadMode::Gauss);

// Least-squares slope of log(y) against x.
double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace lagpsd
