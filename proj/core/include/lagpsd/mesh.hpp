#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lagpsd/laguerre.hpp"

namespace lagpsd {

struct ScaledMesh {
  NodeFamily family = NodeFamily::LaguerreZeros;
  int n = 0;
  double rho1 = 1.0;
  std::vector<double> t;      // positive nodes, ascending
  std::vector<double> theta;  // -t/(2 rho1), so theta_N < ... < theta_1 < 0
};

// {0} followed by the scaled nodes.
struct ExtendedMesh {
  ScaledMesh base;
  std::vector<double> nodes;
};

// Barycentric weights stored as log|beta_k| and sign, so they survive N ~ 200.
struct LogWeights {
  std::vector<double> logabs;
  std::vector<int> sign;
};

struct DifferentiationMatrix {
  Eigen::MatrixXd d;
  std::vector<double> nodes;
};

struct HalfLineQuadrature {
  QuadratureRule rule;
  double rho1 = 1.0;
  std::vector<double> nodes;    // s_j = t_j/(2 rho1)
  std::vector<double> weights;  // lambda_j e^{t_j}/(2 rho1)
};

ScaledMesh build_scaled_mesh(NodeFamily family, int n, double rho1);
ExtendedMesh extend(const ScaledMesh& m);

LogWeights barycentric_log_weights(const std::vector<double>& x);
// Normalised so that the largest magnitude is 1.
std::vector<double> barycentric_weights(const std::vector<double>& x);
inline std::vector<double> barycentric_weights(const ExtendedMesh& m) {
  return barycentric_weights(m.nodes);
}

// D[j][k] = l_k'(x_j), diagonal by negative row sum.
DifferentiationMatrix diff_matrix(const std::vector<double>& x);
inline DifferentiationMatrix diff_matrix(const ExtendedMesh& m) { return diff_matrix(m.nodes); }

// e^{rho x_j} D[j][k] e^{-rho x_k}, assembled in log space with the analytic
// diagonal sum_{k != j} 1/(x_j - x_k).  Maps weighted samples of psi to
// weighted samples of psi'.
Eigen::MatrixXd weighted_diff_matrix(const std::vector<double>& x, double rho);

// Row c with sum_k c_k X_k = p(point), p interpolating X_k e^{-rho x_k}.
// Lagrange values are formed in log space; log_scale is added to every exponent.
Eigen::VectorXd unweighted_eval_row(const std::vector<double>& x, const LogWeights& lw,
                                    double rho, double point, double log_scale = 0.0);

std::complex<double> interp_eval(const ExtendedMesh& m, const Eigen::VectorXcd& values,
                                 double point);
std::complex<double> interp_eval(const std::vector<double>& x, const Eigen::VectorXcd& values,
                                 double point);

HalfLineQuadrature half_line_quadrature(NodeFamily family, int n, double rho1);

}  // namespace lagpsd
