#pragma once

#include <string>
#include <vector>

namespace lagpsd {

enum class NodeFamily { LaguerreZeros, LaguerreExtrema };
enum class QuadKind { Gauss, GaussRadau };

const char* to_string(NodeFamily f);
NodeFamily family_from_string(const std::string& s);

struct QuadratureRule {
  std::vector<double> nodes;          // ascending, t >= 0
  std::vector<double> weights;        // lambda_j, may underflow to 0 for large t
  std::vector<double> scaled_weights; // lambda_j * exp(t_j)
  QuadKind kind = QuadKind::Gauss;
  int exactness_degree = 0;
};

inline constexpr int kMaxNodes = 200;

// L_n(t) by the three-term recurrence.
double laguerre_eval(int n, double t);
// dL_n/dt.
double laguerre_deriv_eval(int n, double t);
// exp(-t/2) L_n(t), bounded by 1 on t >= 0; safe for large t.
double laguerre_scaled(int n, double t);
// generalized L_n^{(alpha)}(t) for integer alpha >= 0.
double genlaguerre_eval(int n, int alpha, double t);

// Zeros of L_n^{(alpha)}, ascending. alpha in {0, 1}.
std::vector<double> genlaguerre_zeros(int n, int alpha);

// Positive nodes of a family: zeros of L_N or zeros of dL_{N+1}/dt.
std::vector<double> family_nodes(NodeFamily f, int n);

QuadratureRule gauss_laguerre_rule(int n);
QuadratureRule radau_laguerre_rule(int n);

}  // namespace lagpsd
