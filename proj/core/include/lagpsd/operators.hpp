#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>

#include "lagpsd/kernels.hpp"
#include "lagpsd/mesh.hpp"

namespace lagpsd {

enum class ProblemTag { DDE, RE };
enum class QuadMode { Gauss, Adaptive };

const char* to_string(QuadMode m);
QuadMode quad_mode_from_string(const std::string& s);

// y'(t) = a y(t) + int_0^inf k(s) y(t-s) ds
struct LinearDDEProblem {
  double a = 0.0;
  KernelSpec kernel;
  double rho = 1.0;
};

// y(t) = int_0^inf k(s) y(t-s) ds
struct LinearREProblem {
  KernelSpec kernel;
  double rho = 1.0;
};

struct DiscretizedLinearOperator {
  Eigen::MatrixXd matrix;
  ExtendedMesh mesh;
  HalfLineQuadrature quad;
  double rho = 1.0;
  ProblemTag tag = ProblemTag::DDE;
  double a = 0.0;
  Eigen::MatrixXd wd;          // weighted differentiation matrix on the extended mesh
  Eigen::VectorXd functional;  // DDE: distributed part of row 0 (N+1); RE: r (N+1)
  Eigen::VectorXd w;           // e^{rho theta_j}, j = 0..N
};

// Index alignment of quadrature nodes s_i with mesh nodes -theta; throws MeshQuadMismatch.
std::vector<int> align_quadrature(const ExtendedMesh& mesh, const HalfLineQuadrature& quad);

DiscretizedLinearOperator assemble_dde_linear(const LinearDDEProblem& p, const ScaledMesh& mesh,
                                              const HalfLineQuadrature& quad,
                                              QuadMode mode = QuadMode::Gauss);
DiscretizedLinearOperator assemble_re_linear(const LinearREProblem& p, const ScaledMesh& mesh,
                                             const HalfLineQuadrature& quad);

// Row c with c.X = sum_i q_i k(s_i) psi(-s_i), psi the unweighted prolongation
// of the weighted samples X on the extended mesh.
Eigen::VectorXd quadrature_functional_row(const std::vector<double>& nodes, double rho,
                                          const KernelSpec& k, const HalfLineQuadrature& quad);

// Same functional with the integral evaluated adaptively (tolerance ~1e-12).
Eigen::VectorXd adaptive_functional_row(const std::vector<double>& nodes, double rho,
                                        const KernelSpec& k);

// -------- nonlinear --------

struct RhoChoice {
  double rho1 = 1.0;       // mesh scaling
  double rho = 1.0;        // weight
  double quad_rho1 = 1.0;  // quadrature scaling
};

// DDE: y'(t) = head(y(t)) + int k(s) g(y(t-s)) ds
// RE:  y(t)  = outer(int k(s) y(t-s) ds), stored as an integrated state
struct ModelSpec {
  std::string name;
  ProblemTag kind = ProblemTag::DDE;
  std::map<std::string, double> params;
  KernelSpec kernel;
  std::function<double(double)> head;
  std::function<double(double)> g;
  std::function<double(double)> outer;
  // optional exact derivatives; central differences otherwise
  std::function<double(double)> head_prime, g_prime, outer_prime;
  std::function<RhoChoice(const std::map<std::string, double>&)> rho_rule;

  double param(const std::string& key) const;
};

struct DiscretizedODE {
  ProblemTag tag = ProblemTag::DDE;
  int dim = 0;
  ExtendedMesh mesh;
  HalfLineQuadrature quad;
  double rho = 1.0;
  Eigen::VectorXd w;  // e^{rho theta_j}, j = 0..N
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> rhs;
  // Linear rows exact; pointwise nonlinearities use the model derivative if given.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

DiscretizedODE assemble_nonlinear_rhs(const ModelSpec& model, const ScaledMesh& mesh,
                                      const HalfLineQuadrature& quad, double rho);
DiscretizedODE assemble_nonlinear_rhs(const ModelSpec& model, int n, NodeFamily family);

// Central difference of a scalar function with step cbrt(eps) max(1, |y|).
double scalar_derivative(const std::function<double(double)>& f, double y);

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double rel_step = 1e-6);

}  // namespace lagpsd
