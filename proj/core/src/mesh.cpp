#include "lagpsd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lagpsd/error.hpp"

namespace lagpsd {

ScaledMesh build_scaled_mesh(NodeFamily family, int n, double rho1) {
  if (n < 1) throw NumericError(ErrorKind::InvalidParameter, "N must be >= 1");
  if (!(rho1 > 0.0)) throw NumericError(ErrorKind::InvalidParameter, "rho1 must be positive");
  ScaledMesh m;
  m.family = family;
  m.n = n;
  m.rho1 = rho1;
  m.t = family_nodes(family, n);
  m.theta.reserve(n);
  for (double t : m.t) m.theta.push_back(-t / (2.0 * rho1));
  return m;
}

ExtendedMesh extend(const ScaledMesh& m) {
  ExtendedMesh e;
  e.base = m;
  e.nodes.reserve(m.n + 1);
  e.nodes.push_back(0.0);
  e.nodes.insert(e.nodes.end(), m.theta.begin(), m.theta.end());
  return e;
}

namespace {

void check_distinct(const std::vector<double>& x) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (std::abs(x[i] - x[j]) <= 1e-14 * scale)
        throw NumericError(ErrorKind::DegenerateMesh,
                           "nodes " + std::to_string(i) + " and " + std::to_string(j) +
                               " coincide");
}

}  // namespace

LogWeights barycentric_log_weights(const std::vector<double>& x) {
  check_distinct(x);
  const std::size_t n = x.size();
  LogWeights w;
  w.logabs.assign(n, 0.0);
  w.sign.assign(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    int sg = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      double d = x[k] - x[j];
      s -= std::log(std::abs(d));
      if (d < 0) sg = -sg;
    }
    w.logabs[k] = s;
    w.sign[k] = sg;
  }
  return w;
}

std::vector<double> barycentric_weights(const std::vector<double>& x) {
  LogWeights lw = barycentric_log_weights(x);
  double mx = *std::max_element(lw.logabs.begin(), lw.logabs.end());
  std::vector<double> b(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) b[k] = lw.sign[k] * std::exp(lw.logabs[k] - mx);
  return b;
}

DifferentiationMatrix diff_matrix(const std::vector<double>& x) {
  LogWeights lw = barycentric_log_weights(x);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  DifferentiationMatrix D;
  D.nodes = x;
  D.d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double rs = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      double v = lw.sign[k] * lw.sign[j] * std::exp(lw.logabs[k] - lw.logabs[j]) / (x[j] - x[k]);
      D.d(j, k) = v;
      rs += v;
    }
    D.d(j, j) = -rs;
  }
  return D;
}

Eigen::MatrixXd weighted_diff_matrix(const std::vector<double>& x, double rho) {
  LogWeights lw = barycentric_log_weights(x);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      double d = x[j] - x[k];
      M(j, k) = lw.sign[k] * lw.sign[j] *
                std::exp(lw.logabs[k] - lw.logabs[j] + rho * d) / d;
      diag += 1.0 / d;
    }
    M(j, j) = diag;
  }
  return M;
}

Eigen::VectorXd unweighted_eval_row(const std::vector<double>& x, const LogWeights& lw,
                                    double rho, double point, double log_scale) {
  const std::size_t n = x.size();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  double ll = 0.0;
  int sl = 1;
  for (std::size_t k = 0; k < n; ++k) {
    double d = point - x[k];
    if (d == 0.0) {
      row[static_cast<Eigen::Index>(k)] = std::exp(log_scale - rho * x[k]);
      return row;
    }
    ll += std::log(std::abs(d));
    if (d < 0) sl = -sl;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double d = point - x[k];
    int s = sl * lw.sign[k] * (d < 0 ? -1 : 1);
    row[static_cast<Eigen::Index>(k)] =
        s * std::exp(ll + lw.logabs[k] - std::log(std::abs(d)) - rho * x[k] + log_scale);
  }
  return row;
}

std::complex<double> interp_eval(const std::vector<double>& x, const Eigen::VectorXcd& values,
                                 double point) {
  if (static_cast<std::size_t>(values.size()) != x.size())
    throw NumericError(ErrorKind::InvalidParameter, "value count does not match mesh");
  for (std::size_t k = 0; k < x.size(); ++k)
    if (point == x[k]) return values[static_cast<Eigen::Index>(k)];
  std::vector<double> b = barycentric_weights(x);
  std::complex<double> num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double c = b[k] / (point - x[k]);
    num += c * values[static_cast<Eigen::Index>(k)];
    den += c;
  }
  return num / den;
}

std::complex<double> interp_eval(const ExtendedMesh& m, const Eigen::VectorXcd& values,
                                 double point) {
  return interp_eval(m.nodes, values, point);
}

HalfLineQuadrature half_line_quadrature(NodeFamily family, int n, double rho1) {
  if (n < 1) throw NumericError(ErrorKind::InvalidParameter, "N must be >= 1");
  if (!(rho1 > 0.0)) throw NumericError(ErrorKind::InvalidParameter, "rho1 must be positive");
  HalfLineQuadrature q;
  q.rule = family == NodeFamily::LaguerreZeros ? gauss_laguerre_rule(n) : radau_laguerre_rule(n);
  q.rho1 = rho1;
  for (std::size_t j = 0; j < q.rule.nodes.size(); ++j) {
    q.nodes.push_back(q.rule.nodes[j] / (2.0 * rho1));
    q.weights.push_back(q.rule.scaled_weights[j] / (2.0 * rho1));
  }
  return q;
}

}  // namespace lagpsd
