#include <gtest/gtest.h>

#include <cmath>

#include "lagpsd/cases.hpp"
#include "lagpsd/spectra.hpp"

using namespace lagpsd;

namespace {

// real root of a monic cubic by bisection
double cubic_root(double b, double c, double d, double lo, double hi) {
  auto f = [&](double x) { return ((x + b) * x + c) * x + d; };
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(m) < 0) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

double nearest(const Spectrum& s, cplx z) {
  double d = INFINITY;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) d = std::min(d, std::abs(s.values[i] - z));
  return d;
}

}  // namespace

TEST(EigDense, IdentityAndNilpotent) {
  Spectrum s = eig_dense(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5)));
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(std::abs(s.values[i] - 1.0), 0.0, 1e-14);
  Eigen::MatrixXd n(2, 2);
  n << 0, 1, 0, 0;
  Spectrum z = eig_dense(n);
  EXPECT_LE(z.values.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EigDense, CompanionMatrix) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(0, 0) = -2;
  c(0, 1) = -1;
  c(0, 2) = 1;
  c(1, 0) = 1;
  c(2, 1) = 1;
  Spectrum s = eig_dense(c);
  EXPECT_LE(nearest(s, cubic_root(2, 1, -1, 0, 1)), 1e-10);
}

TEST(EigDense, SortedAndVectorsAligned) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(12, 12);
  Spectrum s = eig_dense(a, true);
  ASSERT_TRUE(s.has_vectors);
  for (Eigen::Index i = 1; i < s.values.size(); ++i) EXPECT_GE(s.values[i - 1].real(), s.values[i].real() - 1e-12);
  Eigen::MatrixXcd ac = a.cast<cplx>();
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    Eigen::VectorXcd v = s.vectors.col(i);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LE((ac * v - s.values[i] * v).norm(), 1e-10);
  }
}

TEST(ExactRoots, ExponentialCases) {
  auto a = exact_roots_exponential(3, 2, -6);
  EXPECT_NEAR(std::min(std::abs(a.first), std::abs(a.second)), 0.0, 1e-15);
  EXPECT_NEAR(std::min(std::abs(a.first - 1.0), std::abs(a.second - 1.0)), 0.0, 1e-15);

  auto b = exact_roots_exponential(2, 2, -8);
  EXPECT_NEAR(std::abs(b.first.imag()), 2.0, 1e-15);
  EXPECT_NEAR(b.first.real(), 0.0, 1e-15);
  EXPECT_NEAR((b.first + b.second).imag(), 0.0, 1e-15);

  auto c = exact_roots_exponential(6, 2, -16);
  EXPECT_TRUE(c.double_root);
  EXPECT_NEAR(std::abs(c.first - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(c.second - 2.0), 0.0, 1e-12);
}

TEST(CharRoot, DDEAndRE) {
  LinearDDEProblem a1{3, KernelSpec::exponential(-6, 2), 1.0};
  EXPECT_LE(std::abs(char_root_solve(a1, 0.1)), 1e-12);

  LinearREProblem f{KernelSpec::sin_modulated(1, 1, 1), 1.0};
  EXPECT_NEAR(char_root_solve(f, 0.5).real(), cubic_root(2, 1, -1, 0.4, 0.5), 1e-12);

  // mu = 1.5, a = 1, k0 = 3 gives lambda^3 + 1.5 lambda^2 - 4.25 lambda - 9.375
  LinearREProblem g{KernelSpec::sin_modulated(3, 1.5, 1), 1.5};
  EXPECT_NEAR(char_root_solve(g, 2.0).real(), cubic_root(1.5, -4.25, -9.375, 2.2, 2.3), 1e-12);
}

TEST(DiscreteCharFn, VanishesAtMatrixEigenvalues) {
  auto c = linear_case("b");
  auto op = assemble_case(c, NodeFamily::LaguerreZeros, 8, 1.0, 1.0);
  Spectrum s = eig_dense(op.matrix);
  int checked = 0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values[i].real() <= -op.rho + 0.05) continue;
    CharValue v = discrete_char_fn(op, s.values[i]);
    EXPECT_LE(std::abs(v.value), 1e-8 * v.scale) << s.values[i];
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(DiscreteCharFn, ZeroKernelAndFarRight) {
  LinearDDEProblem p{0.7, KernelSpec::zero(), 1.0};
  auto op = assemble_dde_linear(p, build_scaled_mesh(NodeFamily::LaguerreZeros, 6, 1.0),
                                half_line_quadrature(NodeFamily::LaguerreZeros, 6, 1.0));
  EXPECT_LE(std::abs(discrete_char_fn(op, 0.7).value), 1e-10);

  auto a = assemble_case(linear_case("a2"), NodeFamily::LaguerreZeros, 10, 1.0, 1.0);
  EXPECT_GT(std::abs(discrete_char_fn(a, cplx(50, 3)).value), 1.0);
}

TEST(MatchRoots, PairsAndRejects) {
  Spectrum s;
  s.values.resize(3);
  s.values << cplx(1.001, 0), cplx(-0.002, 0), cplx(-7, 0);
  auto m = match_roots({{0.0, 1}, {1.0, 1}}, s);
  ASSERT_EQ(m.size(), 2u);
  for (const auto& r : m) EXPECT_LE(r.abs_error, 0.003);

  Spectrum far;
  far.values.resize(1);
  far.values << cplx(0.9, 0);
  auto none = match_roots({{0.0, 1}, {1.0, 1}}, far);
  for (const auto& r : none)
    if (r.exact == cplx(0.0, 0)) EXPECT_EQ(r.index, -1);
}

TEST(Eigfun, MachinePrecisionAtOneNode) {
  auto rec = convergence_study(linear_case("a1"), NodeFamily::LaguerreZeros, 1.0, 1.0, {1});
  ASSERT_FALSE(rec.empty());
  EXPECT_LE(rec[0].abs_error, 1e-12);
  EXPECT_LE(rec[0].eigfun_error, 1e-12);
}

TEST(Convergence, A2DecreasesInN) {
  // zeros would already be exact here
  auto rec = convergence_study(linear_case("a2"), NodeFamily::LaguerreExtrema, 1.0, 1.0, {5, 10, 20});
  ASSERT_EQ(rec.size(), 3u);
  EXPECT_GT(rec[0].abs_error, rec[1].abs_error);
  EXPECT_GT(rec[1].abs_error, rec[2].abs_error);
  EXPECT_LT(rec[2].eigfun_error, 1e-5);
}

TEST(Convergence, DoubleRootGivesTwoMatches) {
  auto rec = convergence_study(linear_case("c"), NodeFamily::LaguerreExtrema, 1.0, 1.0, {20});
  EXPECT_EQ(rec.size(), 2u);
}

TEST(Convergence, FailuresAreRecorded) {
  // rho below rho1 is rejected per row, not thrown
  auto rec = convergence_study(linear_case("a2"), NodeFamily::LaguerreZeros, 1.0, 0.5, {5});
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_FALSE(rec[0].error.empty());
}

TEST(Bound, Substitution) {
  EXPECT_EQ(theoretical_bound(0.0, 1.0, 5, NodeFamily::LaguerreZeros).d_n, 0.0);
  auto b1 = theoretical_bound(1.0, 1.0, 20, NodeFamily::LaguerreZeros);
  EXPECT_NEAR(std::abs(b1.c_of_lambda), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b1.d_n, std::pow(3.0, -20), 1e-22);
  auto b2 = theoretical_bound(cplx(0, 2), 1.0, 40, NodeFamily::LaguerreZeros);
  EXPECT_NEAR(std::abs(b2.c_of_lambda), 2.0 / std::sqrt(8.0), 1e-15);
}

TEST(Fit, LogSlope) {
  std::vector<double> x{1, 2, 3, 4}, y;
  for (double v : x) y.push_back(5.0 * std::exp(-0.7 * v));
  EXPECT_NEAR(fit_log_slope(x, y), -0.7, 1e-12);
}
