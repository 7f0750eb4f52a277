#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "lagpsd/operators.hpp"
#include "lagpsd/spectra.hpp"

namespace lagpsd {

struct BerettaBredaParams {
  double delta_A = 0.5;
  double delta_J = 1.0;
  double a = 7.0;
  double b = 350.0;
  double m = 7.0;
  double tau = 2.0;
  double rho_fraction = 0.25;  // rho = rho1 = fraction * (delta_J + m/tau)
};

// y' = -dA y + b int gamma_{m/tau,m}(s) e^{-dJ s} e^{-a y(t-s)} y(t-s) ds
ModelSpec model_beretta_breda(const BerettaBredaParams& p);

// y(t) = beta0 A e^{-A},  A = int_1^inf e^{-mu s} y(t-s) ds
struct BlowfliesParams {
  double beta0 = 1.0;
  double mu = 2.0;
  double rho_factor = 0.75;       // mesh rho1 = rho = rho_factor * mu
  double quad_rho_factor = 0.5;   // quadrature rate
};
ModelSpec model_blowflies(const BlowfliesParams& p);

// Closed-form positive equilibria (head values).
double beretta_breda_equilibrium(const BerettaBredaParams& p);
double blowflies_equilibrium(double beta0, double mu);

// Discrete state of the equilibrium with head value ybar: w ybar (DDE) or
// w theta ybar (RE, integrated state).
Eigen::VectorXd equilibrium_profile(const DiscretizedODE& ode, double ybar);
// Head value of a discrete state.
double state_head(const DiscretizedODE& ode, const Eigen::VectorXd& x);

struct EquilibriumResult {
  Eigen::VectorXd state;
  double residual_norm = 0.0;
  bool converged = false;
  int newton_iters = 0;
};

// Damped Newton with a central-difference Jacobian.  Does not throw on
// failure: returns the best iterate with converged = false.
EquilibriumResult equilibrium_newton(const DiscretizedODE& ode, const Eigen::VectorXd& guess,
                                     double tol = 1e-9, int max_iter = 40);

struct StabilityResult {
  Spectrum spectrum;
  Eigen::MatrixXd jacobian;
  cplx rightmost;
  bool stable = false;
};

// Eigenvalues with Re > -rho + margin decide; stable if all have Re < -tol.
StabilityResult stability_at(const DiscretizedODE& ode, const Eigen::VectorXd& equilibrium,
                             double margin = 0.05, double tol = 1e-10);

// ---- continuation ----

struct BifurcationPoint {
  enum class Kind { BranchPoint, Hopf };
  Kind kind = Kind::Hopf;
  double param = 0.0;
  cplx lambda;
  double residual = 0.0;  // |Re lambda| at the refined point
  bool ambiguous = false;
};
const char* to_string(BifurcationPoint::Kind k);

struct BranchRow {
  double param = 0.0;
  double head = 0.0;
  cplx rightmost;
  bool stable = false;
};

struct ContinuationOptions {
  double lo = 0.0, hi = 1.0;
  int steps = 40;
  int n = 20;
  NodeFamily family = NodeFamily::LaguerreExtrema;
  double refine_tol = 1e-8;
  double newton_tol = 1e-9;
  double margin = 0.05;
  // seed head value at lo; the branch is then followed by secant prediction
  std::function<double(double)> head_guess;
};

struct ContinuationResult {
  std::vector<BranchRow> branch;
  std::vector<BifurcationPoint> points;
  std::vector<std::string> notes;
};

using ModelFactory = std::function<ModelSpec(double)>;

ContinuationResult continue_equilibrium(const ModelFactory& family, const ContinuationOptions& o);

struct HopfCurveRow {
  double m = 0.0;
  std::vector<double> taus;  // ascending
  std::string error;         // MissingHopf description, empty on success
};

std::vector<HopfCurveRow> hopf_curve_2param(const BerettaBredaParams& base,
                                            const std::vector<double>& ms, double tau_lo,
                                            double tau_hi, int steps, int n,
                                            NodeFamily family = NodeFamily::LaguerreExtrema,
                                            int workers = 1);

// ---- oracles ----

// Jacobian of the (m+1)-dimensional linear-chain ODE at its positive equilibrium.
Eigen::MatrixXd lct_jacobian(const BerettaBredaParams& p);
// Equilibrium of the chain ODE by Newton; entry 0 is the head value.
Eigen::VectorXd lct_equilibrium(const BerettaBredaParams& p);
// lambda + dA - b K G'(ybar) (nu/(lambda+nu))^m
cplx beretta_breda_char(const BerettaBredaParams& p, cplx lambda);
// Hopf values of tau from a scan over [tau_lo, tau_hi] and bisection.
std::vector<double> lct_oracle_beretta_breda(const BerettaBredaParams& p, double tau_lo,
                                             double tau_hi, int steps = 200);

// Root of (lambda + mu) e^{lambda} = mu (1 - xbar), xbar = log(beta0/mu) - mu.
cplx blowflies_char_oracle(double beta0, double mu, cplx guess);
// beta0 where the rightmost pair of the equation above reaches the imaginary axis.
struct BlowfliesHopf {
  double beta0 = 0.0;
  double omega = 0.0;
};
BlowfliesHopf blowflies_hopf_oracle(double mu);

}  // namespace lagpsd
