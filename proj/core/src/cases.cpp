#include "lagpsd/cases.hpp"

#include <cmath>

#include "lagpsd/error.hpp"

namespace lagpsd {

std::vector<std::string> linear_case_ids() { return {"a1", "a2", "b", "c", "d", "e", "f", "g"}; }

double sin_kernel_cubic_root(double k0, double mu, double a, double lo, double hi) {
  auto p = [&](double l) {
    return ((l + (3 * mu - k0)) * l + (3 * mu * mu - 2 * k0 * mu + a * a - k0 * a)) * l +
           (mu * mu + a * a) * (mu - k0) - k0 * a * mu;
  };
  double flo = p(lo);
  if (flo * p(hi) > 0) throw NumericError(ErrorKind::InvalidParameter, "cubic root not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = p(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

LinearCase exp_case(const std::string& id, double a, double mu, double k0) {
  LinearCase c;
  c.id = id;
  c.tag = ProblemTag::DDE;
  c.a = a;
  c.mu = mu;
  c.kernel = KernelSpec::exponential(k0, mu);
  ExponentialRoots r = exact_roots_exponential(a, mu, k0);
  if (r.double_root) {
    c.roots.push_back({r.first, 2});
  } else {
    c.roots.push_back({r.first, 1});
    c.roots.push_back({r.second, 1});
  }
  return c;
}

LinearCase sin_case(const std::string& id, double k0, double mu, double a, double guess) {
  LinearCase c;
  c.id = id;
  c.tag = ProblemTag::RE;
  c.mu = mu;
  c.kernel = KernelSpec::sin_modulated(k0, mu, a);
  LinearREProblem p{c.kernel, mu};
  double r = std::real(char_root_solve(p, cplx(guess, 0.0)));
  c.roots.push_back({cplx(r, 0.0), 1});
  // remaining cubic roots by deflation
  const double b1 = 3 * mu - k0 + r;
  const double b0 = 3 * mu * mu - 2 * k0 * mu + a * a - k0 * a + r * b1;
  cplx disc = std::sqrt(cplx(b1 * b1 - 4 * b0, 0.0));
  for (cplx z : {0.5 * (-b1 + disc), 0.5 * (-b1 - disc)}) {
    if (z.real() <= -mu) continue;
    c.roots.push_back({char_root_solve(p, z), 1});
  }
  c.targets = {0};
  return c;
}

}  // namespace

LinearCase linear_case(const std::string& id) {
  if (id == "a1" || id == "a2") {
    LinearCase c = exp_case(id, 3.0, 2.0, -6.0);
    // roots come back as {1, 0}
    c.targets = {id == "a1" ? 1 : 0};
    return c;
  }
  if (id == "b") {
    LinearCase c = exp_case(id, 2.0, 2.0, -8.0);
    c.targets = {std::imag(c.roots[0].value) > 0 ? 0 : 1};
    return c;
  }
  if (id == "c") {
    LinearCase c = exp_case(id, 6.0, 2.0, -16.0);
    c.targets = {0};
    return c;
  }
  if (id == "d" || id == "e") {
    LinearCase c;
    c.id = id;
    c.tag = ProblemTag::DDE;
    c.a = 0.0;
    c.mu = 4.0;
    c.kernel = KernelSpec::gamma(4.0, id == "d" ? 2.0 : M_PI);
    LinearDDEProblem p{0.0, c.kernel, 2.0};
    c.roots.push_back({char_root_solve(p, cplx(0.7, 0.0)), 1});
    if (id == "e") {
      cplx z = char_root_solve(p, cplx(-3.1, 2.4));
      c.roots.push_back({z, 1});
      c.roots.push_back({std::conj(z), 1});
    }
    c.targets = {0};
    return c;
  }
  if (id == "f") return sin_case(id, 1.0, 1.0, 1.0, 0.5);
  if (id == "g") return sin_case(id, 3.0, 1.5, 1.0, 2.0);
  throw NumericError(ErrorKind::InvalidParameter, "unknown case '" + id + "'");
}

DiscretizedLinearOperator assemble_case(const LinearCase& c, NodeFamily family, int n,
                                        double rho1, double rho, QuadMode mode) {
  ScaledMesh mesh = build_scaled_mesh(family, n, rho1);
  HalfLineQuadrature quad = half_line_quadrature(family, n, rho1);
  if (c.tag == ProblemTag::DDE) return assemble_dde_linear({c.a, c.kernel, rho}, mesh, quad, mode);
  if (mode != QuadMode::Gauss)
    throw NumericError(ErrorKind::Unsupported, "adaptive quadrature is implemented for DDEs only");
  return assemble_re_linear({c.kernel, rho}, mesh, quad);
}

std::vector<ConvergenceRecord> convergence_study(const LinearCase& c, NodeFamily family,
                                                 double rho1, double rho,
                                                 const std::vector<int>& ns, QuadMode mode) {
  std::vector<ConvergenceRecord> out;
  for (int n : ns) {
    ConvergenceRecord base;
    base.case_id = c.id;
    base.family = family;
    base.rho1 = rho1;
    base.rho = rho;
    base.quad_mode = mode;
    base.n = n;
    try {
      DiscretizedLinearOperator op = assemble_case(c, family, n, rho1, rho, mode);
      Spectrum s = eig_dense(op.matrix, true);
      std::vector<RootMatch> ms = match_roots(c.roots, s);
      bool any = false;
      for (int t : c.targets) {
        for (RootMatch& m : ms) {
          if (m.exact != c.roots[static_cast<std::size_t>(t)].value) continue;
          ConvergenceRecord r = base;
          r.exact = m.exact;
          r.matched = m.computed;
          r.abs_error = m.abs_error;
          try {
            r.eigfun_error = c.tag == ProblemTag::DDE ? eigfun_error_dde(m, s, op.mesh, rho)
                                                      : eigfun_error_re(m, s, op);
          } catch (const NumericError& e) {
            r.error = e.what();
          }
          try {
            r.bound_dn = theoretical_bound(m.exact, rho1, n, family).d_n;
          } catch (const NumericError&) {
          }
          out.push_back(r);
          any = true;
        }
      }
      if (!any) {
        base.error = "no eigenvalue matched the target root";
        out.push_back(base);
      }
    } catch (const std::exception& e) {
      base.error = e.what();
      out.push_back(base);
    }
  }
  return out;
}

double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lagpsd
