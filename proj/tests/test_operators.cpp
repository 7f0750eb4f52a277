#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lagpsd/cases.hpp"
#include "lagpsd/error.hpp"
#include "lagpsd/models.hpp"
#include "lagpsd/operators.hpp"

using namespace lagpsd;

namespace {

// composite Simpson on [0, L]
template <class F>
double simpson(F f, double L, int m = 200000) {
  const double h = L / m;
  double s = f(0.0) + f(L);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

double bisect(double (*f)(double), double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double cubic_f(double l) { return l * l * l + 2 * l * l + l - 1; }

cplx leading(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  cplx best(-INFINITY, 0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i].real() > best.real()) best = es.eigenvalues()[i];
  return best;
}

double min_abs_eig(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

DiscretizedLinearOperator dde(double a, const KernelSpec& k, NodeFamily f, int n, double rho1, double rho) {
  LinearDDEProblem p{a, k, rho};
  return assemble_dde_linear(p, build_scaled_mesh(f, n, rho1), half_line_quadrature(f, n, rho1));
}

ModelSpec linear_dde_model(double a, const KernelSpec& k) {
  ModelSpec m;
  m.name = "linear";
  m.kind = ProblemTag::DDE;
  m.kernel = k;
  m.head = [a](double y) { return a * y; };
  m.g = [](double y) { return y; };
  return m;
}

ModelSpec linear_re_model(const KernelSpec& k) {
  ModelSpec m;
  m.name = "linear-re";
  m.kind = ProblemTag::RE;
  m.kernel = k;
  m.outer = [](double y) { return y; };
  return m;
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / b.lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST(Kernels, PointValues) {
  EXPECT_DOUBLE_EQ(KernelSpec::exponential(-6, 2).eval(0.0), -6.0);
  EXPECT_EQ(KernelSpec::gamma(4, 2).eval(0.0), 0.0);
  EXPECT_NEAR(KernelSpec::sin_modulated(1, 1, 1).eval(std::numbers::pi / 2),
              2 * std::exp(-std::numbers::pi / 2), 1e-15);
  auto sh = KernelSpec::shifted(KernelSpec::exponential(1, 2), 1.0);
  EXPECT_EQ(sh.eval(0.5), 0.0);
  EXPECT_NEAR(sh.eval(1.5), std::exp(-1.0), 1e-15);
}

TEST(Kernels, LaplaceAtZero) {
  EXPECT_NEAR(KernelSpec::exponential(-6, 2).laplace(0.0).real(), -3.0, 1e-15);
  EXPECT_NEAR(KernelSpec::gamma(4, 2).laplace(0.0).real(), 1.0, 1e-15);
  auto s = KernelSpec::sin_modulated(1, 1, 1);
  EXPECT_NEAR(s.laplace(0.0).real(), 1.5, 1e-15);
  double num = simpson([&](double t) { return s.eval(t); }, 60.0);
  EXPECT_NEAR(num, 1.5, 1e-10);
}

TEST(Kernels, LaplaceAgainstQuadrature) {
  auto g = KernelSpec::gamma(3, std::numbers::pi).scaled(2.0).damped(0.5);
  const double lam = 0.4;
  double num = simpson([&](double t) { return g.eval(t) * std::exp(-lam * t); }, 60.0);
  EXPECT_NEAR(g.laplace(lam).real(), num, 1e-8);
  EXPECT_THROW(kernel_laplace(KernelSpec::exponential(1, 2), cplx(-3, 0)), NumericError);
}

TEST(DDELinear, ExactEigenvalueZeroAtOneNode) {
  for (auto f : {NodeFamily::LaguerreZeros, NodeFamily::LaguerreExtrema}) {
    auto op = dde(3, KernelSpec::exponential(-6, 2), f, 1, 1.0, 1.0);
    EXPECT_LE(min_abs_eig(op.matrix), 1e-12);
  }
}

TEST(DDELinear, ZeroKernelDecouplesHead) {
  auto op = dde(1.7, KernelSpec::zero(), NodeFamily::LaguerreZeros, 6, 1.0, 1.0);
  EXPECT_NEAR(op.matrix(0, 0), 1.7, 1e-15);
  for (Eigen::Index j = 1; j < op.matrix.cols(); ++j) EXPECT_EQ(op.matrix(0, j), 0.0);
}

TEST(DDELinear, SecondRootAtTwenty) {
  auto op = dde(3, KernelSpec::exponential(-6, 2), NodeFamily::LaguerreZeros, 20, 1.0, 1.0);
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix);
  double best = INFINITY;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    best = std::min(best, std::abs(es.eigenvalues()[i] - 1.0));
  EXPECT_LE(best, 1e-6);
}

TEST(DDELinear, MeshQuadratureMismatchRejected) {
  LinearDDEProblem p{3, KernelSpec::exponential(-6, 2), 1.0};
  auto mesh = build_scaled_mesh(NodeFamily::LaguerreZeros, 5, 1.0);
  auto quad = half_line_quadrature(NodeFamily::LaguerreZeros, 6, 1.0);
  EXPECT_THROW(assemble_dde_linear(p, mesh, quad), NumericError);
}

TEST(RELinear, UnitMassKernelHasZeroEigenvalue) {
  const double mu = 2;
  LinearREProblem p{KernelSpec::exponential(mu, mu), mu};
  for (int n : {3, 10}) {
    auto op = assemble_re_linear(p, build_scaled_mesh(NodeFamily::LaguerreZeros, n, mu / 2),
                                 half_line_quadrature(NodeFamily::LaguerreZeros, n, mu / 2));
    EXPECT_LE(min_abs_eig(op.matrix), 1e-10);
  }
}

TEST(RELinear, ZeroKernelIsShiftedReducedDiff) {
  const double rho = 1.0;
  auto mesh = build_scaled_mesh(NodeFamily::LaguerreZeros, 7, 1.0);
  LinearREProblem p{KernelSpec::zero(), rho};
  auto op = assemble_re_linear(p, mesh, half_line_quadrature(NodeFamily::LaguerreZeros, 7, 1.0));
  auto x = extend(mesh).nodes;
  Eigen::MatrixXd d = diff_matrix(x).d.bottomRightCorner(7, 7);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(7, 7);
  for (int j = 0; j < 7; ++j) w(j, j) = std::exp(rho * x[j + 1]);
  EXPECT_LE(rel_diff(op.matrix, w * d * w.inverse()), 1e-10);
  // a single defective eigenvalue of modulus 2 rho1
  Eigen::EigenSolver<Eigen::MatrixXd> es(op.matrix);
  for (Eigen::Index i = 0; i < 7; ++i) EXPECT_NEAR(std::abs(es.eigenvalues()[i]), 2.0, 0.05);
}

TEST(RELinear, SinKernelLeadingRoot) {
  const double root = bisect(cubic_f, 0.4, 0.5);
  LinearREProblem p{KernelSpec::sin_modulated(1, 1, 1), 1.0};
  auto op = assemble_re_linear(p, build_scaled_mesh(NodeFamily::LaguerreZeros, 30, 0.5),
                               half_line_quadrature(NodeFamily::LaguerreZeros, 30, 0.5));
  cplx l = leading(op.matrix);
  EXPECT_NEAR(l.real(), root, 1e-6);
  EXPECT_NEAR(l.imag(), 0.0, 1e-6);
}

TEST(Functional, AdaptiveMatchesGaussOnSmoothKernel) {
  auto x = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 12, 1.0)).nodes;
  auto k = KernelSpec::exponential(-6, 2);
  auto quad = half_line_quadrature(NodeFamily::LaguerreZeros, 12, 1.0);
  Eigen::VectorXd g = quadrature_functional_row(x, 1.0, k, quad);
  Eigen::VectorXd a = adaptive_functional_row(x, 1.0, k);
  EXPECT_LE((g - a).lpNorm<Eigen::Infinity>(), 1e-9 * g.lpNorm<Eigen::Infinity>());
}

TEST(Nonlinear, LinearModelJacobianMatchesAssembly) {
  const auto f = NodeFamily::LaguerreExtrema;
  auto mesh = build_scaled_mesh(f, 10, 1.0);
  auto quad = half_line_quadrature(f, 10, 1.0);
  auto k = KernelSpec::exponential(-6, 2);
  auto lin = assemble_dde_linear({3, k, 1.0}, mesh, quad);
  auto ode = assemble_nonlinear_rhs(linear_dde_model(3, k), mesh, quad, 1.0);
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(ode.dim);
  EXPECT_LE(rel_diff(fd_jacobian(ode.rhs, u0), lin.matrix), 1e-8);
  EXPECT_LE(rel_diff(ode.jacobian(u0), lin.matrix), 1e-12);

  auto kr = KernelSpec::sin_modulated(1, 1, 1);
  auto mr = build_scaled_mesh(f, 10, 0.5);
  auto qr = half_line_quadrature(f, 10, 0.5);
  auto linr = assemble_re_linear({kr, 1.0}, mr, qr);
  auto oder = assemble_nonlinear_rhs(linear_re_model(kr), mr, qr, 1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(oder.dim);
  EXPECT_LE(rel_diff(fd_jacobian(oder.rhs, z), linr.matrix), 1e-8);
}

TEST(Nonlinear, TrivialEquilibriumOfBerettaBreda) {
  auto ode = assemble_nonlinear_rhs(model_beretta_breda({}), 12, NodeFamily::LaguerreExtrema);
  EXPECT_EQ(ode.rhs(Eigen::VectorXd::Zero(ode.dim)).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Nonlinear, BlowfliesEquilibriumResidual) {
  BlowfliesParams p;
  p.mu = 2;
  p.beta0 = 3 * p.mu * std::exp(p.mu);
  const double ybar = std::log(3.0) * p.mu * std::exp(p.mu);
  auto ode = assemble_nonlinear_rhs(model_blowflies(p), 30, NodeFamily::LaguerreExtrema);
  Eigen::VectorXd x(ode.dim);
  for (int j = 0; j < ode.dim; ++j) x[j] = ode.w[j + 1] * ode.mesh.nodes[j + 1] * ybar;
  EXPECT_LE(ode.rhs(x).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(Nonlinear, BerettaBredaEquilibriumResidual) {
  BerettaBredaParams p;
  auto ode = assemble_nonlinear_rhs(model_beretta_breda(p), 20, NodeFamily::LaguerreExtrema);
  // delta_A y = b K e^{-a y} y with K = (nu/(nu + delta_J))^m
  const double nu = p.m / p.tau;
  const double ybar = std::log(p.b * std::pow(nu / (nu + p.delta_J), p.m) / p.delta_A) / p.a;
  Eigen::VectorXd x = ode.w * ybar;
  EXPECT_LE(ode.rhs(x).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(Nonlinear, ScalarDerivative) {
  EXPECT_NEAR(scalar_derivative([](double y) { return std::sin(y); }, 0.3), std::cos(0.3), 1e-10);
  EXPECT_NEAR(scalar_derivative([](double y) { return y * y; }, 1e4), 2e4, 1e-6);
}
