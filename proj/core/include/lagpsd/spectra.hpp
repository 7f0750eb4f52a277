#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "lagpsd/operators.hpp"

namespace lagpsd {

struct Spectrum {
  Eigen::VectorXcd values;   // descending real part, then descending imaginary part
  Eigen::MatrixXcd vectors;  // unit columns aligned with values when requested
  bool has_vectors = false;
};

Spectrum eig_dense(const Eigen::MatrixXd& m, bool want_vectors = false);
Spectrum eig_dense(const Eigen::MatrixXcd& m, bool want_vectors = false);

// Diagonal similarity D^{-1} M D with power-of-two entries (Parlett-Reinsch).
Eigen::VectorXd balance_scaling(const Eigen::MatrixXcd& m);

struct RootMatch {
  cplx exact;
  cplx computed;
  double abs_error = 0.0;
  int multiplicity = 1;
  double eigfun_error = std::numeric_limits<double>::quiet_NaN();
  int index = -1;  // position in the spectrum
};

struct ExponentialRoots {
  cplx first, second;
  bool double_root = false;
};

// lambda = a + k0/(lambda + mu)
ExponentialRoots exact_roots_exponential(double a, double mu, double k0);

cplx char_root_solve(const LinearDDEProblem& p, cplx guess);
cplx char_root_solve(const LinearREProblem& p, cplx guess);

struct CharValue {
  cplx value;
  double scale = 1.0;  // magnitude of the terms that make up value
};

// DDE: lambda - a - L~ p_lambda with p' = lambda p, p(0) = 1 collocated on the mesh.
// RE:  1 - L~ h_lambda' with h' = lambda h + 1, h(0) = 0.
CharValue discrete_char_fn(const DiscretizedLinearOperator& op, cplx lambda);

struct ExactRoot {
  cplx value;
  int multiplicity = 1;
};

// Nearest-neighbour pairing with rejection radius half the distance to the
// closest other exact root.  Returns one match per unit of multiplicity.
std::vector<RootMatch> match_roots(const std::vector<ExactRoot>& exact, const Spectrum& s);

double eigfun_error_dde(const RootMatch& m, const Spectrum& s, const ExtendedMesh& mesh,
                        double rho);
double eigfun_error_re(const RootMatch& m, const Spectrum& s, const DiscretizedLinearOperator& op);

struct TheoreticalBound {
  cplx c_of_lambda;
  double d_n = 0.0;
  double k_p_eps = 1.0;
};

// p = +inf selects the sup norm.
TheoreticalBound theoretical_bound(cplx lambda, double rho1, int n, NodeFamily family,
                                   double p = std::numeric_limits<double>::infinity(),
                                   double eps = 0.0);

}  // namespace lagpsd
