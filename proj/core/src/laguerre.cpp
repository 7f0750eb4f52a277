#include "lagpsd/laguerre.hpp"

#include <cmath>
#include <string>

#include "lagpsd/error.hpp"

namespace lagpsd {

const char* to_string(NodeFamily f) {
  return f == NodeFamily::LaguerreZeros ? "zeros" : "extrema";
}

NodeFamily family_from_string(const std::string& s) {
  if (s == "zeros" || s == "z") return NodeFamily::LaguerreZeros;
  if (s == "extrema" || s == "e") return NodeFamily::LaguerreExtrema;
  throw NumericError(ErrorKind::InvalidParameter, "unknown node family '" + s + "'");
}

namespace {

// Runs the alpha-recurrence from a given L_0 value; returns (L_n, L_{n-1}).
struct Pair {
  double cur, prev;
};

Pair recur(int n, int alpha, double t, double l0) {
  double prev = 0.0, cur = l0;
  for (int k = 0; k < n; ++k) {
    double next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

double genlaguerre_eval(int n, int alpha, double t) {
  if (n <= 0) return 1.0;
  return recur(n, alpha, t, 1.0).cur;
}

double laguerre_eval(int n, double t) { return genlaguerre_eval(n, 0, t); }

double laguerre_deriv_eval(int n, double t) {
  if (n <= 0) return 0.0;
  return -genlaguerre_eval(n - 1, 1, t);
}

double laguerre_scaled(int n, double t) {
  double l0 = std::exp(-0.5 * t);
  if (n <= 0) return l0;
  return recur(n, 0, t, l0).cur;
}

std::vector<double> genlaguerre_zeros(int n, int alpha) {
  if (n < 1 || n > kMaxNodes)
    throw NumericError(ErrorKind::InvalidParameter,
                       "node count " + std::to_string(n) + " outside [1, 200]");
  std::vector<double> x(n);
  const double alf = alpha;
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    // initial guesses after the classic gaulag heuristics
    if (i == 0) {
      z = (1.0 + alf) * (3.0 + 0.92 * alf) / (1.0 + 2.4 * n + 1.8 * alf);
    } else if (i == 1) {
      z += (15.0 + 6.25 * alf) / (1.0 + 0.9 * alf + 2.5 * n);
    } else {
      double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alf / (1.0 + 3.5 * ai)) *
           (z - x[i - 2]) / (1.0 + 0.3 * alf);
    }
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      Pair p = recur(n, alpha, z, std::exp(-0.5 * z));
      double dp = (n * p.cur - (n + alf) * p.prev) / z;
      double dz = p.cur / dp;
      z -= dz;
      if (!std::isfinite(z)) break;
      if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) {
        ok = true;
        break;
      }
      if (std::abs(dz) <= 1e-13 * std::max(1.0, std::abs(z))) {
        // one polishing step then stop
        p = recur(n, alpha, z, std::exp(-0.5 * z));
        dp = (n * p.cur - (n + alf) * p.prev) / z;
        z -= p.cur / dp;
        ok = true;
        break;
      }
    }
    if (!ok || !(z > 0.0))
      throw NumericError(ErrorKind::ConvergenceFailure,
                         "Newton failed for node " + std::to_string(i) + " of L_" +
                             std::to_string(n) + "^(" + std::to_string(alpha) + ")");
    x[i] = z;
  }
  for (int i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1]))
      throw NumericError(ErrorKind::ConvergenceFailure, "nodes not strictly increasing");
  return x;
}

std::vector<double> family_nodes(NodeFamily f, int n) {
  return genlaguerre_zeros(n, f == NodeFamily::LaguerreZeros ? 0 : 1);
}

QuadratureRule gauss_laguerre_rule(int n) {
  QuadratureRule r;
  r.kind = QuadKind::Gauss;
  r.exactness_degree = 2 * n - 1;
  r.nodes = genlaguerre_zeros(n, 0);
  const double np1 = n + 1.0;
  for (double t : r.nodes) {
    double s = laguerre_scaled(n + 1, t);
    double sw = t / (np1 * np1 * s * s);
    r.scaled_weights.push_back(sw);
    r.weights.push_back(sw * std::exp(-t));
  }
  return r;
}

QuadratureRule radau_laguerre_rule(int n) {
  QuadratureRule r;
  r.kind = QuadKind::GaussRadau;
  r.exactness_degree = 2 * n;
  r.nodes.push_back(0.0);
  for (double t : genlaguerre_zeros(n, 1)) r.nodes.push_back(t);
  const double np1 = n + 1.0;
  for (double t : r.nodes) {
    double s = laguerre_scaled(n, t);
    double sw = 1.0 / (np1 * s * s);
    r.scaled_weights.push_back(sw);
    r.weights.push_back(sw * std::exp(-t));
  }
  return r;
}

}  // namespace lagpsd
