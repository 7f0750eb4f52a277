#include "lagpsd/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "lagpsd/error.hpp"

namespace lagpsd {

Eigen::VectorXd balance_scaling(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = m.cwiseAbs();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  const double radix = 2.0, sqrdx = 4.0;
  bool done = false;
  for (int sweep = 0; sweep < 200 && !done; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += a(j, i);
        r += a(i, j);
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        d[i] *= f;
        a.row(i) *= g;
        a.col(i) *= f;
      }
    }
  }
  return d;
}

namespace {

void sort_spectrum(Spectrum& s) {
  const Eigen::Index n = s.values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const cplx a = s.values[i], b = s.values[j];
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  Eigen::VectorXcd v(n);
  Eigen::MatrixXcd vec;
  if (s.has_vectors) vec.resize(s.vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v[k] = s.values[order[static_cast<std::size_t>(k)]];
    if (s.has_vectors) vec.col(k) = s.vectors.col(order[static_cast<std::size_t>(k)]);
  }
  s.values = v;
  if (s.has_vectors) s.vectors = vec;
}

template <class Mat>
void check_input(const Mat& m) {
  if (m.rows() != m.cols()) throw NumericError(ErrorKind::InvalidParameter, "matrix not square");
  if (!m.allFinite()) throw NumericError(ErrorKind::NonFiniteInput, "matrix has non-finite entries");
  if (m.rows() > 2000) throw NumericError(ErrorKind::InvalidParameter, "matrix larger than 2000");
}

}  // namespace

Spectrum eig_dense(const Eigen::MatrixXd& m, bool want_vectors) {
  check_input(m);
  Spectrum s;
  if (m.rows() == 0) return s;
  Eigen::VectorXd d = balance_scaling(m.cast<cplx>());
  Eigen::MatrixXd b = d.cwiseInverse().asDiagonal() * m * d.asDiagonal();
  Eigen::EigenSolver<Eigen::MatrixXd> es(b, want_vectors);
  if (es.info() != Eigen::Success) throw NumericError(ErrorKind::NoConvergence, "real QR iteration");
  s.values = es.eigenvalues();
  if (want_vectors) {
    s.vectors = d.cast<cplx>().asDiagonal() * es.eigenvectors();
    for (Eigen::Index k = 0; k < s.vectors.cols(); ++k) s.vectors.col(k).normalize();
    s.has_vectors = true;
  }
  sort_spectrum(s);
  return s;
}

Spectrum eig_dense(const Eigen::MatrixXcd& m, bool want_vectors) {
  check_input(m);
  Spectrum s;
  if (m.rows() == 0) return s;
  Eigen::VectorXd d = balance_scaling(m);
  Eigen::MatrixXcd b = d.cast<cplx>().cwiseInverse().asDiagonal() * m * d.cast<cplx>().asDiagonal();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b, want_vectors);
  if (es.info() != Eigen::Success)
    throw NumericError(ErrorKind::NoConvergence, "complex QR iteration");
  s.values = es.eigenvalues();
  if (want_vectors) {
    s.vectors = d.cast<cplx>().asDiagonal() * es.eigenvectors();
    for (Eigen::Index k = 0; k < s.vectors.cols(); ++k) s.vectors.col(k).normalize();
    s.has_vectors = true;
  }
  sort_spectrum(s);
  return s;
}

ExponentialRoots exact_roots_exponential(double a, double mu, double k0) {
  if (!(mu > 0.0)) throw NumericError(ErrorKind::InvalidParameter, "mu must be positive");
  const double disc = (mu + a) * (mu + a) + 4.0 * k0;
  const cplx sq = std::sqrt(cplx(disc, 0.0));
  ExponentialRoots r;
  r.first = 0.5 * (cplx(a - mu, 0.0) + sq);
  r.second = 0.5 * (cplx(a - mu, 0.0) - sq);
  r.double_root = std::abs(disc) <= 1e-12 * std::max(1.0, (mu + a) * (mu + a));
  if (r.double_root) r.first = r.second = cplx(0.5 * (a - mu), 0.0);
  return r;
}

namespace {

template <class G, class DG>
cplx newton(G g, DG dg, cplx z, double strip) {
  cplx gz = g(z);
  for (int it = 0; it < 100; ++it) {
    if (std::abs(gz) <= 1e-14) return z;
    cplx step = gz / dg(z);
    cplx zn = z - step;
    cplx gn = g(zn);
    int halvings = 0;
    while ((!std::isfinite(std::abs(gn)) || std::abs(gn) > std::abs(gz)) && halvings < 30) {
      step *= 0.5;
      zn = z - step;
      if (zn.real() > -strip) gn = g(zn);
      ++halvings;
    }
    if (zn.real() <= -strip)
      throw NumericError(ErrorKind::StrayedOutOfStrip, "Newton iterate left the Laplace strip");
    z = zn;
    gz = gn;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  if (!(std::abs(gz) <= 1e-12))
    throw NumericError(ErrorKind::NoConvergence, "characteristic equation residual too large");
  return z;
}

}  // namespace

cplx char_root_solve(const LinearDDEProblem& p, cplx guess) {
  const double strip = p.kernel.decay_rate();
  if (guess.real() <= -strip) throw NumericError(ErrorKind::OutOfStrip, "guess outside strip");
  return newton([&](cplx z) { return z - p.a - p.kernel.laplace(z); },
                [&](cplx z) { return 1.0 - p.kernel.laplace_deriv(z); }, guess, strip);
}

cplx char_root_solve(const LinearREProblem& p, cplx guess) {
  const double strip = p.kernel.decay_rate();
  if (guess.real() <= -strip) throw NumericError(ErrorKind::OutOfStrip, "guess outside strip");
  return newton([&](cplx z) { return 1.0 - p.kernel.laplace(z); },
                [&](cplx z) { return -p.kernel.laplace_deriv(z); }, guess, strip);
}

CharValue discrete_char_fn(const DiscretizedLinearOperator& op, cplx lambda) {
  const Eigen::Index n = op.wd.rows() - 1;
  Eigen::MatrixXcd sys = op.wd.bottomRightCorner(n, n).cast<cplx>();
  sys.diagonal().array() -= lambda;
  Eigen::VectorXcd rhs;
  if (op.tag == ProblemTag::DDE)
    rhs = -op.wd.col(0).tail(n).cast<cplx>();
  else
    rhs = op.w.tail(n).cast<cplx>();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  if (!lu.isInvertible())
    throw NumericError(ErrorKind::SingularCollocation, "collocation system is singular");
  Eigen::VectorXcd x = lu.solve(rhs);
  if (!x.allFinite())
    throw NumericError(ErrorKind::SingularCollocation, "collocation solution not finite");
  CharValue out;
  Eigen::VectorXd f = op.functional.tail(n);
  Eigen::VectorXcd terms = f.cast<cplx>().cwiseProduct(x);
  if (op.tag == ProblemTag::DDE) {
    cplx l = op.functional[0] + terms.sum();
    out.value = lambda - op.a - l;
    out.scale = std::abs(lambda) + std::abs(op.a) + std::abs(op.functional[0]) +
                terms.cwiseAbs().sum();
  } else {
    out.value = 1.0 - terms.sum();
    out.scale = 1.0 + terms.cwiseAbs().sum();
  }
  return out;
}

std::vector<RootMatch> match_roots(const std::vector<ExactRoot>& exact, const Spectrum& s) {
  std::vector<RootMatch> out;
  std::vector<bool> used(static_cast<std::size_t>(s.values.size()), false);
  for (std::size_t i = 0; i < exact.size(); ++i) {
    double radius = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < exact.size(); ++j)
      if (j != i) radius = std::min(radius, 0.5 * std::abs(exact[i].value - exact[j].value));
    for (int rep = 0; rep < exact[i].multiplicity; ++rep) {
      int best = -1;
      double bd = radius;
      for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        if (used[static_cast<std::size_t>(k)]) continue;
        double d = std::abs(s.values[k] - exact[i].value);
        if (d < bd) {
          bd = d;
          best = static_cast<int>(k);
        }
      }
      if (best < 0) continue;
      used[static_cast<std::size_t>(best)] = true;
      RootMatch m;
      m.exact = exact[i].value;
      m.computed = s.values[best];
      m.abs_error = std::abs(m.exact - m.computed);
      m.multiplicity = exact[i].multiplicity;
      m.index = best;
      out.push_back(m);
    }
  }
  return out;
}

double eigfun_error_dde(const RootMatch& m, const Spectrum& s, const ExtendedMesh& mesh,
                        double rho) {
  if (!s.has_vectors || m.index < 0)
    throw NumericError(ErrorKind::InvalidParameter, "spectrum has no eigenvectors");
  Eigen::VectorXcd v = s.vectors.col(m.index);
  if (std::abs(v[0]) < 1e-13) throw NumericError(ErrorKind::ZeroHeadComponent, "head component ~ 0");
  v /= v[0];
  double err = 0.0;
  for (std::size_t j = 1; j < mesh.nodes.size(); ++j) {
    double th = mesh.nodes[j];
    cplx ex = std::exp(rho * th) * std::exp(m.exact * th);
    err = std::max(err, std::abs(v[static_cast<Eigen::Index>(j)] - ex));
  }
  return err;
}

double eigfun_error_re(const RootMatch& m, const Spectrum& s, const DiscretizedLinearOperator& op) {
  if (!s.has_vectors || m.index < 0)
    throw NumericError(ErrorKind::InvalidParameter, "spectrum has no eigenvectors");
  const Eigen::Index n = op.wd.rows() - 1;
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n + 1);
  full.tail(n) = s.vectors.col(m.index);
  Eigen::VectorXcd d = op.wd.cast<cplx>() * full;
  for (Eigen::Index j = 0; j <= n; ++j) d[j] /= op.w[j];
  if (std::abs(d[0]) < 1e-13) throw NumericError(ErrorKind::ZeroHeadComponent, "head component ~ 0");
  d /= d[0];
  const ScaledMesh& base = op.mesh.base;
  HalfLineQuadrature q = half_line_quadrature(base.family, base.n, base.rho1);
  std::vector<int> idx = align_quadrature(op.mesh, q);
  double err = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    double th = -q.nodes[i];
    cplx ex = std::exp(m.exact * th);
    err += q.weights[i] * std::exp(op.rho * th) * std::abs(d[idx[i]] - ex);
  }
  return err;
}

TheoreticalBound theoretical_bound(cplx lambda, double rho1, int n, NodeFamily family, double p,
                                   double eps) {
  if (!(lambda.real() > -rho1))
    throw NumericError(ErrorKind::OutOfHalfPlane, "Re(lambda) <= -rho1");
  TheoreticalBound b;
  b.c_of_lambda = lambda / (lambda + 2.0 * rho1);
  if (family == NodeFamily::LaguerreZeros) {
    b.d_n = std::pow(std::abs(b.c_of_lambda), n);
  } else {
    cplx cn = std::pow(b.c_of_lambda, n);
    b.d_n = std::abs(cn / (1.0 - cn * b.c_of_lambda));
  }
  if (std::isinf(p)) {
    b.k_p_eps = 1.0;
  } else {
    if (!(eps > 0.0) || p < 1.0)
      throw NumericError(ErrorKind::InvalidDelta, "finite p needs eps > 0 and p >= 1");
    b.k_p_eps = std::pow(p * eps / (2.0 * rho1), -1.0 / p);
  }
  return b;
}

}  // namespace lagpsd
