#include <gtest/gtest.h>

#include <cmath>

#include "lagpsd/error.hpp"
#include "lagpsd/mesh.hpp"

using namespace lagpsd;

TEST(ScaledMesh, Examples) {
  auto z = build_scaled_mesh(NodeFamily::LaguerreZeros, 1, 1.0);
  ASSERT_EQ(z.theta.size(), 1u);
  EXPECT_NEAR(z.theta[0], -0.5, 1e-15);

  auto e = build_scaled_mesh(NodeFamily::LaguerreExtrema, 1, 1.0);
  EXPECT_NEAR(e.theta[0], -1.0, 1e-14);

  auto z2 = build_scaled_mesh(NodeFamily::LaguerreZeros, 2, 0.5);
  EXPECT_NEAR(z2.theta[0], -(2 - std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(z2.theta[1], -(2 + std::sqrt(2.0)), 1e-14);
}

TEST(ScaledMesh, ExtendedPrependsZero) {
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreExtrema, 6, 0.7));
  ASSERT_EQ(m.nodes.size(), 7u);
  EXPECT_EQ(m.nodes[0], 0.0);
  for (std::size_t i = 1; i < m.nodes.size(); ++i) EXPECT_LT(m.nodes[i], m.nodes[i - 1]);
}

TEST(ScaledMesh, RejectsBadInput) {
  EXPECT_THROW(build_scaled_mesh(NodeFamily::LaguerreZeros, 0, 1.0), NumericError);
  EXPECT_THROW(build_scaled_mesh(NodeFamily::LaguerreZeros, 4, -1.0), NumericError);
}

TEST(Barycentric, SmallMeshes) {
  auto b2 = barycentric_weights(std::vector<double>{0.0, -1.0});
  EXPECT_NEAR(b2[0] / b2[1], -1.0, 1e-15);

  auto b3 = barycentric_weights(std::vector<double>{0.0, -1.0, -2.0});
  EXPECT_NEAR(b3[1] / b3[0], -2.0, 1e-15);
  EXPECT_NEAR(b3[2] / b3[0], 1.0, 1e-15);
}

TEST(Barycentric, LogWeightsSurviveLargeN) {
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 200, 1.0));
  auto lw = barycentric_log_weights(m.nodes);
  for (double v : lw.logabs) EXPECT_TRUE(std::isfinite(v));
  // signs alternate on an ordered mesh
  for (std::size_t i = 1; i < lw.sign.size(); ++i) EXPECT_EQ(lw.sign[i], -lw.sign[i - 1]);
}

TEST(DiffMatrix, TwoPoints) {
  auto d = diff_matrix(std::vector<double>{0.0, -1.0}).d;
  EXPECT_NEAR(d(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(d(0, 1), -1.0, 1e-15);
  EXPECT_NEAR(d(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(d(1, 1), -1.0, 1e-15);
}

TEST(DiffMatrix, ConstantsAndQuadratics) {
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 3, 1.0));
  auto d = diff_matrix(m).d;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(4), sq(4);
  EXPECT_LE((d * ones).lpNorm<Eigen::Infinity>(), 1e-13);
  for (int j = 0; j < 4; ++j) sq[j] = m.nodes[j] * m.nodes[j];
  Eigen::VectorXd dsq = d * sq;
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(dsq[j], 2 * m.nodes[j], 1e-10 * std::max(1.0, std::abs(m.nodes[j])));
}

TEST(DiffMatrix, WeightedIsSimilarityTransform) {
  const double rho = 0.8;
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreExtrema, 8, 0.6));
  Eigen::MatrixXd d = diff_matrix(m).d;
  Eigen::MatrixXd wd = weighted_diff_matrix(m.nodes, rho);
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) {
      double ref = std::exp(rho * (m.nodes[i] - m.nodes[j])) * d(i, j);
      EXPECT_NEAR(wd(i, j), ref, 1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST(Interp, ReproducesConstantsAndLines) {
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 6, 1.0));
  Eigen::VectorXcd c = Eigen::VectorXcd::Constant(7, std::complex<double>(2.5, -1.0));
  auto v = interp_eval(m, c, -0.77);
  EXPECT_NEAR(v.real(), 2.5, 1e-13);
  EXPECT_NEAR(v.imag(), -1.0, 1e-13);
  Eigen::VectorXcd lin(7);
  for (int j = 0; j < 7; ++j) lin[j] = m.nodes[j];
  EXPECT_NEAR(interp_eval(m, lin, -0.3).real(), -0.3, 1e-13);
  // at a node the stored value comes back
  EXPECT_NEAR(interp_eval(m, lin, m.nodes[3]).real(), m.nodes[3], 1e-15);
}

TEST(Interp, ExponentialOnZerosMesh) {
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 20, 0.5));
  Eigen::VectorXcd e(m.nodes.size());
  for (std::size_t j = 0; j < m.nodes.size(); ++j) e[static_cast<Eigen::Index>(j)] = std::exp(m.nodes[j]);
  EXPECT_NEAR(interp_eval(m, e, -1.0).real(), std::exp(-1.0), 1e-6);
}

TEST(Interp, UnweightedRowUndoesWeight) {
  const double rho = 0.5;
  auto m = extend(build_scaled_mesh(NodeFamily::LaguerreZeros, 10, 1.0));
  auto lw = barycentric_log_weights(m.nodes);
  Eigen::VectorXd x(m.nodes.size());
  for (std::size_t j = 0; j < m.nodes.size(); ++j)
    x[static_cast<Eigen::Index>(j)] = std::exp(rho * m.nodes[j]) * (1.0 + m.nodes[j]);
  Eigen::VectorXd row = unweighted_eval_row(m.nodes, lw, rho, -2.2);
  EXPECT_NEAR(row.dot(x), 1.0 - 2.2, 1e-11);
}

TEST(HalfLineQuad, ExactOnMappedWeight) {
  for (int n : {1, 3, 12}) {
    auto q = half_line_quadrature(NodeFamily::LaguerreZeros, n, 1.0);
    double s0 = 0, s1 = 0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j) {
      s0 += q.weights[j] * std::exp(-2 * q.nodes[j]);
      s1 += q.weights[j] * q.nodes[j] * std::exp(-2 * q.nodes[j]);
    }
    EXPECT_NEAR(s0, 0.5, 1e-12);
    EXPECT_NEAR(s1, 0.25, 1e-12);
  }
}

TEST(HalfLineQuad, NonExactCaseConverges) {
  auto q = half_line_quadrature(NodeFamily::LaguerreZeros, 20, 1.0);
  double s = 0;
  for (std::size_t j = 0; j < q.nodes.size(); ++j) s += q.weights[j] * std::exp(-4 * q.nodes[j]);
  EXPECT_NEAR(s, 0.25, 1e-10);
}

TEST(HalfLineQuad, ExtremaIncludesOrigin) {
  auto q = half_line_quadrature(NodeFamily::LaguerreExtrema, 1, 1.0);
  ASSERT_EQ(q.nodes.size(), 2u);
  EXPECT_EQ(q.nodes[0], 0.0);
  EXPECT_NEAR(q.nodes[1], 1.0, 1e-14);
  EXPECT_NEAR(q.rule.weights[0], 0.5, 1e-14);
  EXPECT_NEAR(q.rule.weights[1], 0.5, 1e-14);
}
