#include <algorithm>
#include <cmath>
#include <future>

#include "lagpsd/error.hpp"
#include "lagpsd/models.hpp"

namespace lagpsd {

const char* to_string(BifurcationPoint::Kind k) {
  return k == BifurcationPoint::Kind::BranchPoint ? "BP" : "H";
}

namespace {

struct Sample {
  double param = 0.0;
  double head = 0.0;
  bool ok = false;
  StabilityResult stab;
  double bp_test = NAN;  // rightmost real eigenvalue
  cplx bp_lambda;
  double hopf_test = NAN;  // rightmost real part over complex pairs
  cplx hopf_lambda;
};

DiscretizedODE ode_at(const ModelFactory& family, const ContinuationOptions& o, double p) {
  return assemble_nonlinear_rhs(family(p), o.n, o.family);
}

void analyse(Sample& s, const DiscretizedODE& ode, const Eigen::VectorXd& x,
             const ContinuationOptions& o) {
  s.ok = true;
  s.head = state_head(ode, x);
  s.stab = stability_at(ode, x, o.margin);
  const double cut = -ode.rho + o.margin;
  double br = -INFINITY, hr = -INFINITY;
  for (Eigen::Index i = 0; i < s.stab.spectrum.values.size(); ++i) {
    cplx v = s.stab.spectrum.values(i);
    if (v.real() <= cut) continue;
    if (std::abs(v.imag()) <= 1e-8 * std::max(1.0, std::abs(v))) {
      if (v.real() > br) {
        br = v.real();
        s.bp_lambda = cplx(v.real(), 0.0);
      }
    } else if (v.imag() > 0 && v.real() > hr) {
      hr = v.real();
      s.hopf_lambda = v;
    }
  }
  if (std::isfinite(br)) s.bp_test = br;
  if (std::isfinite(hr)) s.hopf_test = hr;
}

Sample solve_at(const ModelFactory& family, const ContinuationOptions& o, double p, double head) {
  Sample s;
  s.param = p;
  DiscretizedODE ode = ode_at(family, o, p);
  EquilibriumResult eq = equilibrium_newton(ode, equilibrium_profile(ode, head), o.newton_tol);
  if (eq.converged) analyse(s, ode, eq.state, o);
  return s;
}

// Equilibrium with prescribed head value h and the parameter as an unknown,
// written for z = x/h so that it stays regular as h -> 0.  Near a transcritical
// point this keeps Newton off the crossing branch.
Sample solve_at_head(const ModelFactory& family, const ContinuationOptions& o, double head,
                     double p_guess) {
  Sample s;
  if (head == 0.0) return s;
  Eigen::VectorXd z0 = equilibrium_profile(ode_at(family, o, p_guess), 1.0);
  const Eigen::Index n = z0.size();
  auto full = [&](const Eigen::VectorXd& v) {
    DiscretizedODE ode = ode_at(family, o, v[n]);
    Eigen::VectorXd x = head * v.head(n);
    Eigen::VectorXd r(n + 1);
    r.head(n) = ode.rhs(x) / head;
    r[n] = state_head(ode, v.head(n)) - 1.0;
    return r;
  };
  Eigen::VectorXd v(n + 1);
  v.head(n) = z0;
  v[n] = p_guess;
  Eigen::VectorXd r = full(v);
  double nr = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 40 && nr > o.newton_tol; ++it) {
    Eigen::MatrixXd j = fd_jacobian(full, v);
    Eigen::VectorXd dv = j.partialPivLu().solve(-r);
    if (!dv.allFinite()) return s;
    double step = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
      Eigen::VectorXd vt = v + step * dv;
      Eigen::VectorXd rt;
      try {
        rt = full(vt);
      } catch (const NumericError&) {
        continue;
      }
      double nt = rt.lpNorm<Eigen::Infinity>();
      if (nt < nr) {
        v = vt;
        r = rt;
        nr = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return s;
  }
  if (nr > o.newton_tol) return s;
  s.param = v[n];
  analyse(s, ode_at(family, o, s.param), head * v.head(n), o);
  return s;
}

bool crosses(double a, double b) {
  return std::isfinite(a) && std::isfinite(b) && ((a < 0) != (b < 0));
}

// Illinois regula falsi on the parameter.
BifurcationPoint refine(const ModelFactory& family, const ContinuationOptions& o, const Sample& a0,
                        const Sample& b0, bool hopf) {
  auto test = [&](const Sample& s) { return hopf ? s.hopf_test : s.bp_test; };
  Sample a = a0, b = b0;
  double fa = test(a), fb = test(b);
  int side = 0;
  BifurcationPoint bp;
  bp.kind = hopf ? BifurcationPoint::Kind::Hopf : BifurcationPoint::Kind::BranchPoint;
  Sample best = std::abs(fa) < std::abs(fb) ? a : b;
  for (int it = 0; it < 120; ++it) {
    if (std::abs(test(best)) <= o.refine_tol) break;
    if (std::abs(b.param - a.param) <= 1e-14 * std::max(1.0, std::abs(a.param))) break;
    Sample m;
    if (hopf) {
      double p = (a.param * fb - b.param * fa) / (fb - fa);
      if (!(p > std::min(a.param, b.param) && p < std::max(a.param, b.param)))
        p = 0.5 * (a.param + b.param);
      double t = (p - a.param) / (b.param - a.param);
      m = solve_at(family, o, p, a.head + t * (b.head - a.head));
    } else {
      // regula falsi in the head value
      double h = (a.head * fb - b.head * fa) / (fb - fa);
      if (!(h > std::min(a.head, b.head) && h < std::max(a.head, b.head))) h = 0.5 * (a.head + b.head);
      double t = (h - a.head) / (b.head - a.head);
      m = solve_at_head(family, o, h, a.param + t * (b.param - a.param));
    }
    if (!m.ok || !std::isfinite(test(m)))
      throw NumericError(ErrorKind::StepFailure, "refinement lost the branch");
    double fm = test(m);
    if (std::abs(fm) < std::abs(test(best))) best = m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = m;
      fb = fm;
      if (side == 1) fa *= 0.5;
      side = 1;
    }
  }
  bp.param = best.param;
  bp.lambda = hopf ? best.hopf_lambda : best.bp_lambda;
  bp.residual = std::abs(test(best));
  return bp;
}

}  // namespace

ContinuationResult continue_equilibrium(const ModelFactory& family, const ContinuationOptions& o) {
  if (o.steps < 2 || !(o.hi != o.lo) || !std::isfinite(o.lo) || !std::isfinite(o.hi))
    throw NumericError(ErrorKind::InvalidParameter, "continuation needs a range and steps >= 2");
  if (!o.head_guess) throw NumericError(ErrorKind::InvalidParameter, "head_guess is required");
  ContinuationResult out;
  const double range = o.hi - o.lo;
  const double h0 = range / o.steps;
  const double hmin = 1e-6 * std::abs(range);

  std::vector<Sample> acc;
  Sample first = solve_at(family, o, o.lo, o.head_guess(o.lo));
  if (!first.ok) throw NumericError(ErrorKind::StepFailure, "no equilibrium at the start");
  acc.push_back(first);
  double p = o.lo;
  while ((range > 0 && p < o.hi) || (range < 0 && p > o.hi)) {
    double h = h0;
    Sample next;
    for (;;) {
      double target = p + h;
      if ((range > 0 && target > o.hi) || (range < 0 && target < o.hi)) target = o.hi;
      double pred = acc.back().head;
      if (acc.size() >= 2) {
        const Sample& a = acc[acc.size() - 2];
        const Sample& b = acc.back();
        pred = b.head + (b.head - a.head) / (b.param - a.param) * (target - b.param);
      }
      next = solve_at(family, o, target, pred);
      if (next.ok) break;
      h *= 0.5;
      if (std::abs(h) < hmin)
        throw NumericError(ErrorKind::StepFailure, "step fell below the minimum at " + std::to_string(p));
    }
    const Sample& prev = acc.back();
    bool cb = crosses(prev.bp_test, next.bp_test);
    bool ch = crosses(prev.hopf_test, next.hopf_test);
    if (cb) {
      BifurcationPoint b = refine(family, o, prev, next, false);
      b.ambiguous = ch;
      out.points.push_back(b);
    }
    if (ch) {
      BifurcationPoint b = refine(family, o, prev, next, true);
      b.ambiguous = cb;
      out.points.push_back(b);
    }
    if (cb && ch) out.notes.push_back("two test functions changed sign in one step near " +
                                      std::to_string(next.param));
    acc.push_back(next);
    p = next.param;
  }
  for (const Sample& s : acc)
    out.branch.push_back({s.param, s.head, s.stab.rightmost, s.stab.stable});
  std::sort(out.points.begin(), out.points.end(),
            [](const BifurcationPoint& a, const BifurcationPoint& b) { return a.param < b.param; });
  return out;
}

std::vector<HopfCurveRow> hopf_curve_2param(const BerettaBredaParams& base,
                                            const std::vector<double>& ms, double tau_lo,
                                            double tau_hi, int steps, int n, NodeFamily family,
                                            int workers) {
  auto one = [&](double m) {
    HopfCurveRow row;
    row.m = m;
    BerettaBredaParams bp = base;
    bp.m = m;
    ModelFactory f = [bp](double tau) {
      BerettaBredaParams q = bp;
      q.tau = tau;
      return model_beretta_breda(q);
    };
    ContinuationOptions o;
    o.lo = tau_lo;
    o.hi = tau_hi;
    o.steps = steps;
    o.n = n;
    o.family = family;
    o.head_guess = [bp](double tau) {
      BerettaBredaParams q = bp;
      q.tau = tau;
      return beretta_breda_equilibrium(q);
    };
    try {
      ContinuationResult r = continue_equilibrium(f, o);
      for (const BifurcationPoint& b : r.points)
        if (b.kind == BifurcationPoint::Kind::Hopf) row.taus.push_back(b.param);
      if (row.taus.size() < 2)
        row.error = std::string(to_string(ErrorKind::MissingHopf)) + ": found " +
                    std::to_string(row.taus.size()) + " Hopf point(s)";
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };
  std::vector<HopfCurveRow> out(ms.size());
  const std::size_t w = static_cast<std::size_t>(std::max(1, workers));
  for (std::size_t start = 0; start < ms.size(); start += w) {
    std::vector<std::future<HopfCurveRow>> fs;
    for (std::size_t i = start; i < std::min(ms.size(), start + w); ++i)
      fs.push_back(std::async(w > 1 ? std::launch::async : std::launch::deferred, one, ms[i]));
    for (std::size_t i = 0; i < fs.size(); ++i) out[start + i] = fs[i].get();
  }
  return out;
}

}  // namespace lagpsd
