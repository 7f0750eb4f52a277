#include "lagpsd/models.hpp"

#include <algorithm>
#include <cmath>

#include "lagpsd/error.hpp"

namespace lagpsd {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw NumericError(ErrorKind::InvalidParameter, std::string(name) + " must be positive");
}

double bb_nu(const BerettaBredaParams& p) { return p.m / p.tau + p.delta_J; }
double bb_k(const BerettaBredaParams& p) { return std::pow((p.m / p.tau) / bb_nu(p), p.m); }

}  // namespace

ModelSpec model_beretta_breda(const BerettaBredaParams& p) {
  require_positive(p.delta_A, "delta_A");
  require_positive(p.delta_J, "delta_J");
  require_positive(p.a, "a");
  require_positive(p.b, "b");
  require_positive(p.m, "m");
  require_positive(p.tau, "tau");
  require_positive(p.rho_fraction, "rho_fraction");
  ModelSpec s;
  s.name = "beretta-breda";
  s.kind = ProblemTag::DDE;
  s.params = {{"delta_A", p.delta_A}, {"delta_J", p.delta_J}, {"a", p.a},        {"b", p.b},
              {"m", p.m},             {"tau", p.tau},         {"rho_fraction", p.rho_fraction}};
  s.kernel = KernelSpec::gamma(p.m / p.tau, p.m).scaled(p.b).damped(p.delta_J);
  const double dA = p.delta_A, a = p.a;
  s.head = [dA](double y) { return -dA * y; };
  // clamp only inside the exponent
  s.g = [a](double y) { return std::exp(-a * std::max(y, 0.0)) * y; };
  s.head_prime = [dA](double) { return -dA; };
  s.g_prime = [a](double y) { return y > 0.0 ? std::exp(-a * y) * (1.0 - a * y) : 1.0; };
  s.rho_rule = [](const std::map<std::string, double>& q) {
    double r = q.at("rho_fraction") * (q.at("delta_J") + q.at("m") / q.at("tau"));
    return RhoChoice{r, r, r};
  };
  return s;
}

ModelSpec model_blowflies(const BlowfliesParams& p) {
  require_positive(p.mu, "mu");
  if (!(p.beta0 >= 0.0)) throw NumericError(ErrorKind::InvalidParameter, "beta0 must be >= 0");
  require_positive(p.rho_factor, "rho_factor");
  require_positive(p.quad_rho_factor, "quad_rho_factor");
  ModelSpec s;
  s.name = "blowflies";
  s.kind = ProblemTag::RE;
  s.params = {{"beta0", p.beta0},
              {"mu", p.mu},
              {"rho_factor", p.rho_factor},
              {"quad_rho_factor", p.quad_rho_factor}};
  // e^{-mu s} on s >= 1
  s.kernel = KernelSpec::shifted(KernelSpec::exponential(std::exp(-p.mu), p.mu), 1.0);
  const double b0 = p.beta0;
  s.outer = [b0](double x) { return b0 * x * std::exp(-x); };
  s.outer_prime = [b0](double x) { return b0 * (1.0 - x) * std::exp(-x); };
  s.rho_rule = [](const std::map<std::string, double>& q) {
    double mu = q.at("mu");
    return RhoChoice{q.at("rho_factor") * mu, q.at("rho_factor") * mu,
                     q.at("quad_rho_factor") * mu};
  };
  return s;
}

double beretta_breda_equilibrium(const BerettaBredaParams& p) {
  const double r = p.b * bb_k(p) / p.delta_A;
  if (!(r > 1.0)) return 0.0;
  return std::log(r) / p.a;
}

double blowflies_equilibrium(double beta0, double mu) {
  if (!(beta0 > 0.0)) return 0.0;
  return (std::log(beta0 / mu) - mu) * mu * std::exp(mu);
}

Eigen::VectorXd equilibrium_profile(const DiscretizedODE& ode, double ybar) {
  if (ode.tag == ProblemTag::DDE) return ode.w * ybar;
  const Eigen::Index n = ode.dim;
  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j)
    x[j] = ode.w[j + 1] * ode.mesh.nodes[static_cast<std::size_t>(j + 1)] * ybar;
  return x;
}

double state_head(const DiscretizedODE& ode, const Eigen::VectorXd& x) {
  if (ode.tag == ProblemTag::DDE) return x[0] / ode.w[0];
  // y(0) = Y'(0) for the integrated state with Y(0) = 0
  Eigen::MatrixXd wd = weighted_diff_matrix(ode.mesh.nodes, ode.rho);
  return wd.row(0).tail(x.size()).dot(x) / ode.w[0];
}

EquilibriumResult equilibrium_newton(const DiscretizedODE& ode, const Eigen::VectorXd& guess,
                                     double tol, int max_iter) {
  if (!guess.allFinite()) throw NumericError(ErrorKind::NonFiniteInput, "non-finite Newton seed");
  EquilibriumResult r;
  r.state = guess;
  Eigen::VectorXd f = ode.rhs(guess);
  r.residual_norm = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < max_iter && r.residual_norm > tol; ++it) {
    Eigen::MatrixXd j = ode.jacobian ? ode.jacobian(r.state) : fd_jacobian(ode.rhs, r.state);
    Eigen::VectorXd dx = j.partialPivLu().solve(-f);
    if (!dx.allFinite()) break;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      Eigen::VectorXd xt = r.state + step * dx;
      Eigen::VectorXd ft;
      try {
        ft = ode.rhs(xt);
      } catch (const NumericError&) {
        continue;
      }
      double nt = ft.lpNorm<Eigen::Infinity>();
      if (nt < r.residual_norm || nt <= tol) {
        r.state = xt;
        f = ft;
        r.residual_norm = nt;
        accepted = true;
        break;
      }
    }
    r.newton_iters = it + 1;
    if (!accepted) break;
  }
  r.converged = r.residual_norm <= tol;
  return r;
}

StabilityResult stability_at(const DiscretizedODE& ode, const Eigen::VectorXd& equilibrium,
                             double margin, double tol) {
  StabilityResult s;
  s.jacobian = ode.jacobian ? ode.jacobian(equilibrium) : fd_jacobian(ode.rhs, equilibrium);
  s.spectrum = eig_dense(s.jacobian);
  s.rightmost = cplx(-INFINITY, 0.0);
  const double cut = -ode.rho + margin;
  for (Eigen::Index i = 0; i < s.spectrum.values.size(); ++i) {
    cplx v = s.spectrum.values(i);
    if (v.real() <= cut) continue;
    if (v.real() > s.rightmost.real()) s.rightmost = v;
  }
  if (std::isinf(s.rightmost.real()) && s.spectrum.values.size() > 0)
    s.rightmost = s.spectrum.values(0);
  s.stable = s.rightmost.real() < -tol;
  return s;
}

// ---- oracles ----

Eigen::MatrixXd lct_jacobian(const BerettaBredaParams& p) {
  const double mr = std::round(p.m);
  if (std::abs(p.m - mr) > 1e-12 || mr < 1 || mr > 12)
    throw NumericError(ErrorKind::InvalidParameter, "chain reduction needs an integer m in [1, 12]");
  const int m = static_cast<int>(mr);
  const double nu = bb_nu(p), k = bb_k(p);
  Eigen::VectorXd eq = lct_equilibrium(p);
  const double y = eq[0];
  const double gp = std::exp(-p.a * y) * (1.0 - p.a * y);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m + 1, m + 1);
  j(0, 0) = -p.delta_A;
  j(0, m) = p.b * k;
  j(1, 0) = nu * gp;
  j(1, 1) = -nu;
  for (int i = 2; i <= m; ++i) {
    j(i, i - 1) = nu;
    j(i, i) = -nu;
  }
  return j;
}

Eigen::VectorXd lct_equilibrium(const BerettaBredaParams& p) {
  const int m = static_cast<int>(std::round(p.m));
  const double nu = bb_nu(p), k = bb_k(p);
  auto g = [&](double y) { return std::exp(-p.a * y) * y; };
  auto gp = [&](double y) { return std::exp(-p.a * y) * (1.0 - p.a * y); };
  // reduce to the scalar equation dA y = b K g(y), solved by Newton from the log form
  double y = std::max(beretta_breda_equilibrium(p), 1e-3);
  for (int it = 0; it < 60; ++it) {
    double f = p.delta_A * y - p.b * k * g(y);
    double d = p.delta_A - p.b * k * gp(y);
    double step = f / d;
    y -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  Eigen::VectorXd x(m + 1);
  x[0] = y;
  for (int i = 1; i <= m; ++i) x[i] = g(y);
  (void)nu;
  return x;
}

cplx beretta_breda_char(const BerettaBredaParams& p, cplx lambda) {
  const double nu = bb_nu(p), k = bb_k(p), y = beretta_breda_equilibrium(p);
  const double gp = std::exp(-p.a * y) * (1.0 - p.a * y);
  return lambda + p.delta_A - p.b * k * gp * std::pow(nu / (lambda + nu), p.m);
}

namespace {

double lct_hopf_test(BerettaBredaParams p, double tau) {
  p.tau = tau;
  Spectrum s = eig_dense(lct_jacobian(p));
  double best = -INFINITY;
  for (Eigen::Index i = 0; i < s.values.size(); ++i)
    if (std::abs(s.values(i).imag()) > 1e-8) best = std::max(best, s.values(i).real());
  return best;
}

}  // namespace

std::vector<double> lct_oracle_beretta_breda(const BerettaBredaParams& p, double tau_lo,
                                             double tau_hi, int steps) {
  std::vector<double> out;
  double t0 = tau_lo, f0 = lct_hopf_test(p, t0);
  for (int i = 1; i <= steps; ++i) {
    double t1 = tau_lo + (tau_hi - tau_lo) * i / steps;
    double f1 = lct_hopf_test(p, t1);
    if (std::isfinite(f0) && std::isfinite(f1) && (f0 < 0) != (f1 < 0)) {
      double a = t0, b = t1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        double mid = 0.5 * (a + b);
        double fm = lct_hopf_test(p, mid);
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      out.push_back(0.5 * (a + b));
    }
    t0 = t1;
    f0 = f1;
  }
  return out;
}

cplx blowflies_char_oracle(double beta0, double mu, cplx guess) {
  if (!(beta0 > mu * std::exp(mu)))
    throw NumericError(ErrorKind::InvalidParameter, "needs beta0 > mu e^mu");
  const double xbar = std::log(beta0 / mu) - mu;
  const double rhs = mu * (1.0 - xbar);
  cplx z = guess;
  for (int it = 0; it < 100; ++it) {
    cplx e = std::exp(z);
    cplx f = (z + mu) * e - rhs;
    cplx d = (z + mu + 1.0) * e;
    cplx step = f / d;
    double damp = std::abs(step) > 1.0 ? 1.0 / std::abs(step) : 1.0;
    z -= damp * step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  // residual in the scaled form 1 - mu(1 - xbar) e^{-lambda}/(lambda + mu)
  cplx res = 1.0 - rhs * std::exp(-z) / (z + mu);
  if (!(std::abs(res) <= 1e-12))
    throw NumericError(ErrorKind::NoConvergence, "characteristic root did not converge");
  return z;
}

BlowfliesHopf blowflies_hopf_oracle(double mu) {
  require_positive(mu, "mu");
  // omega + atan(omega/mu) = pi on (0, pi)
  double lo = 0.0, hi = M_PI;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid + std::atan(mid / mu) < M_PI)
      lo = mid;
    else
      hi = mid;
  }
  BlowfliesHopf h;
  h.omega = 0.5 * (lo + hi);
  const double xbar = 1.0 + std::hypot(mu, h.omega) / mu;
  h.beta0 = mu * std::exp(mu + xbar);
  return h;
}

}  // namespace lagpsd
