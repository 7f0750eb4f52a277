#include "lagpsd/operators.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "lagpsd/error.hpp"

namespace lagpsd {

const char* to_string(QuadMode m) { return m == QuadMode::Gauss ? "gauss" : "adaptive"; }

QuadMode quad_mode_from_string(const std::string& s) {
  if (s == "gauss") return QuadMode::Gauss;
  if (s == "adaptive") return QuadMode::Adaptive;
  throw NumericError(ErrorKind::InvalidParameter, "unknown quadrature mode '" + s + "'");
}

double ModelSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw NumericError(ErrorKind::InvalidParameter, "missing parameter " + key);
  return it->second;
}

std::vector<int> align_quadrature(const ExtendedMesh& mesh, const HalfLineQuadrature& quad) {
  std::vector<int> idx;
  idx.reserve(quad.nodes.size());
  for (double s : quad.nodes) {
    int best = -1;
    for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
      double tol = 1e-12 * std::max(1.0, std::abs(s));
      if (std::abs(mesh.nodes[k] + s) <= tol) {
        best = static_cast<int>(k);
        break;
      }
    }
    if (best < 0)
      throw NumericError(ErrorKind::MeshQuadMismatch,
                         "quadrature node " + std::to_string(s) + " is not a mesh node");
    idx.push_back(best);
  }
  return idx;
}

namespace {

Eigen::VectorXd weights_at(const std::vector<double>& nodes, double rho) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t k = 0; k < nodes.size(); ++k) w[static_cast<Eigen::Index>(k)] = std::exp(rho * nodes[k]);
  return w;
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw NumericError(ErrorKind::NonFiniteRHS, what);
}

void check_rates(double rho1, double rho) {
  if (!(rho1 <= rho * (1.0 + 1e-14)))
    throw NumericError(ErrorKind::InvalidParameter, "quadrature rho1 exceeds rho");
}

// r.X = int_0^inf k(s) phi'(-s) ds, phi the unweighted integrated state.
Eigen::VectorXd re_functional(const KernelSpec& k, const ExtendedMesh& em,
                              const HalfLineQuadrature& quad, double rho,
                              const Eigen::MatrixXd& wd) {
  const auto& x = em.nodes;
  const Eigen::Index n1 = static_cast<Eigen::Index>(x.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n1);
  if (k.kind == KernelSpec::Kind::Shifted) {
    // by parts: kappa(h) phi(-h) - mu_eff int_0^inf kappa(h+u) phi(-h-u) du
    const KernelSpec& in = *k.inner;
    if (in.kind != KernelSpec::Kind::Exponential)
      throw NumericError(ErrorKind::Unsupported, "shifted RE kernels need an exponential inner");
    const double h = k.shift;
    const double mu_eff = in.mu + in.damping + k.damping;
    LogWeights lw = barycentric_log_weights(x);
    int sg = 0;
    double lk = k.log_abs(h, sg);
    if (sg == 0) return r;
    r += sg * unweighted_eval_row(x, lw, rho, -h, lk);
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
      double u = quad.nodes[i];
      int si = 0;
      double lki = k.log_abs(h + u, si);
      if (si == 0) continue;
      r -= (mu_eff * si) * unweighted_eval_row(x, lw, rho, -h - u, std::log(quad.weights[i]) + lki);
    }
    require_finite(r, "RE functional");
    return r;
  }
  std::vector<int> idx = align_quadrature(em, quad);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    double s = quad.nodes[i];
    int sg = 0;
    double lk = k.log_abs(s, sg);
    if (sg == 0) continue;
    double c = sg * std::exp(std::log(quad.weights[i]) + lk + rho * s);
    r += c * wd.row(idx[i]).transpose();
  }
  require_finite(r, "RE functional");
  return r;
}

}  // namespace

Eigen::VectorXd quadrature_functional_row(const std::vector<double>& nodes, double rho,
                                          const KernelSpec& k, const HalfLineQuadrature& quad) {
  LogWeights lw = barycentric_log_weights(nodes);
  Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    double s = quad.nodes[i];
    int sg = 0;
    double lk = k.log_abs(s, sg);
    if (sg == 0) continue;
    if (std::isinf(lk))
      throw NumericError(ErrorKind::IntegrableSingularity, "kernel singular at a quadrature node");
    row += sg * unweighted_eval_row(nodes, lw, rho, -s, std::log(quad.weights[i]) + lk);
  }
  require_finite(row, "quadrature functional");
  return row;
}

Eigen::VectorXd adaptive_functional_row(const std::vector<double>& nodes, double rho,
                                        const KernelSpec& k) {
  LogWeights lw = barycentric_log_weights(nodes);
  const std::size_t n1 = nodes.size();
  Eigen::VectorXd row(static_cast<Eigen::Index>(n1));
  boost::math::quadrature::exp_sinh<double> integrator;
  for (std::size_t c = 0; c < n1; ++c) {
    auto f = [&](double s) -> double {
      int sg = 0;
      double lk = k.log_abs(s, sg);
      if (sg == 0 || std::isinf(lk)) return 0.0;
      double x = -s;
      double ll = 0.0;
      int sl = 1;
      for (std::size_t j = 0; j < n1; ++j) {
        if (j == c) continue;
        double d = x - nodes[j];
        if (d == 0.0) return 0.0;
        ll += std::log(std::abs(d));
        if (d < 0) sl = -sl;
      }
      double v = std::exp(ll + lw.logabs[c] - rho * nodes[c] + lk);
      return sg * sl * lw.sign[c] * v;
    };
    double err = 0.0;
    row[static_cast<Eigen::Index>(c)] = integrator.integrate(f, 1e-12, &err);
  }
  require_finite(row, "adaptive functional");
  return row;
}

DiscretizedLinearOperator assemble_dde_linear(const LinearDDEProblem& p, const ScaledMesh& mesh,
                                              const HalfLineQuadrature& quad, QuadMode mode) {
  check_rates(quad.rho1, p.rho);
  DiscretizedLinearOperator op;
  op.mesh = extend(mesh);
  op.quad = quad;
  op.rho = p.rho;
  op.tag = ProblemTag::DDE;
  op.a = p.a;
  const auto& x = op.mesh.nodes;
  const Eigen::Index n1 = static_cast<Eigen::Index>(x.size());
  op.w = weights_at(x, p.rho);
  op.wd = weighted_diff_matrix(x, p.rho);
  if (mode == QuadMode::Gauss) {
    align_quadrature(op.mesh, quad);
    op.functional = quadrature_functional_row(x, p.rho, p.kernel, quad);
  } else {
    op.functional = adaptive_functional_row(x, p.rho, p.kernel);
  }
  op.matrix = Eigen::MatrixXd::Zero(n1, n1);
  op.matrix.row(0) = op.functional.transpose();
  op.matrix(0, 0) += p.a;
  op.matrix.bottomRows(n1 - 1) = op.wd.bottomRows(n1 - 1);
  return op;
}

DiscretizedLinearOperator assemble_re_linear(const LinearREProblem& p, const ScaledMesh& mesh,
                                             const HalfLineQuadrature& quad) {
  check_rates(quad.rho1, p.rho);
  DiscretizedLinearOperator op;
  op.mesh = extend(mesh);
  op.quad = quad;
  op.rho = p.rho;
  op.tag = ProblemTag::RE;
  const auto& x = op.mesh.nodes;
  const Eigen::Index n = static_cast<Eigen::Index>(x.size()) - 1;
  op.w = weights_at(x, p.rho);
  op.wd = weighted_diff_matrix(x, p.rho);
  op.functional = re_functional(p.kernel, op.mesh, quad, p.rho, op.wd);
  op.matrix = op.wd.bottomRightCorner(n, n) - op.w.tail(n) * op.functional.tail(n).transpose();
  return op;
}

DiscretizedODE assemble_nonlinear_rhs(const ModelSpec& model, const ScaledMesh& mesh,
                                      const HalfLineQuadrature& quad, double rho) {
  DiscretizedODE ode;
  ode.tag = model.kind;
  ode.mesh = extend(mesh);
  ode.quad = quad;
  ode.rho = rho;
  const auto x = ode.mesh.nodes;
  const Eigen::Index n1 = static_cast<Eigen::Index>(x.size());
  ode.w = weights_at(x, rho);
  Eigen::MatrixXd wd = weighted_diff_matrix(x, rho);

  if (model.kind == ProblemTag::DDE) {
    if (!model.head || !model.g)
      throw NumericError(ErrorKind::InvalidParameter, "DDE model needs head and g");
    ode.dim = static_cast<int>(n1);
    LogWeights lw = barycentric_log_weights(x);
    const std::size_t nq = quad.nodes.size();
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nq), n1);
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nq));
    for (std::size_t i = 0; i < nq; ++i) {
      double s = quad.nodes[i];
      int sg = 0;
      double lk = model.kernel.log_abs(s, sg);
      E.row(static_cast<Eigen::Index>(i)) = unweighted_eval_row(x, lw, rho, -s).transpose();
      if (sg != 0) coef[static_cast<Eigen::Index>(i)] = sg * std::exp(std::log(quad.weights[i]) + lk);
    }
    if (!coef.allFinite() || !E.allFinite())
      throw NumericError(ErrorKind::NonFiniteRHS, "history evaluation overflows");
    Eigen::MatrixXd body = wd.bottomRows(n1 - 1);
    auto head = model.head;
    auto g = model.g;
    auto dhead = model.head_prime ? model.head_prime : [head](double y) { return scalar_derivative(head, y); };
    auto dg = model.g_prime ? model.g_prime : [g](double y) { return scalar_derivative(g, y); };
    ode.rhs = [E, coef, body, head, g](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      Eigen::VectorXd out(u.size());
      Eigen::VectorXd y = E * u;
      double acc = head(u[0]);
      for (Eigen::Index i = 0; i < y.size(); ++i)
        if (coef[i] != 0.0) acc += coef[i] * g(y[i]);
      out[0] = acc;
      out.tail(u.size() - 1) = body * u;
      if (!out.allFinite()) throw NumericError(ErrorKind::NonFiniteRHS, "DDE right-hand side");
      return out;
    };
    ode.jacobian = [E, coef, body, dhead, dg](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
      Eigen::MatrixXd j(u.size(), u.size());
      Eigen::VectorXd y = E * u;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(u.size());
      for (Eigen::Index i = 0; i < y.size(); ++i)
        if (coef[i] != 0.0) r += (coef[i] * dg(y[i])) * E.row(i).transpose();
      r[0] += dhead(u[0]);
      j.row(0) = r.transpose();
      j.bottomRows(u.size() - 1) = body;
      return j;
    };
  } else {
    if (!model.outer) throw NumericError(ErrorKind::InvalidParameter, "RE model needs outer");
    const Eigen::Index n = n1 - 1;
    ode.dim = static_cast<int>(n);
    Eigen::VectorXd a = re_functional(model.kernel, ode.mesh, quad, rho, wd).tail(n);
    Eigen::MatrixXd body = wd.bottomRightCorner(n, n);
    Eigen::VectorXd w = ode.w.tail(n);
    auto outer = model.outer;
    auto douter = model.outer_prime ? model.outer_prime : [outer](double x) { return scalar_derivative(outer, x); };
    ode.rhs = [a, body, w, outer](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      double f = outer(a.dot(u));
      Eigen::VectorXd out = body * u - f * w;
      if (!out.allFinite()) throw NumericError(ErrorKind::NonFiniteRHS, "RE right-hand side");
      return out;
    };
    ode.jacobian = [a, body, w, douter](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
      return body - douter(a.dot(u)) * w * a.transpose();
    };
  }
  return ode;
}

DiscretizedODE assemble_nonlinear_rhs(const ModelSpec& model, int n, NodeFamily family) {
  if (!model.rho_rule) throw NumericError(ErrorKind::InvalidParameter, "model has no rho rule");
  RhoChoice rc = model.rho_rule(model.params);
  check_rates(rc.quad_rho1, rc.rho);
  ScaledMesh mesh = build_scaled_mesh(family, n, rc.rho1);
  HalfLineQuadrature quad = half_line_quadrature(family, n, rc.quad_rho1);
  return assemble_nonlinear_rhs(model, mesh, quad, rc.rho);
}

double scalar_derivative(const std::function<double(double)>& f, double y) {
  const double h = 6.0554544523933395e-06 * std::max(1.0, std::abs(y));
  return (f(y + h) - f(y - h)) / (2.0 * h);
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double rel_step) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    double h = rel_step * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return J;
}

}  // namespace lagpsd
