#include "lagpsd/appendix.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>

#include "lagpsd/error.hpp"
#include "lagpsd/mesh.hpp"

namespace lagpsd {

namespace mp = boost::multiprecision;
using R50 = mp::cpp_bin_float_50;
using C50 = mp::cpp_complex_50;

struct ExtendedCoeffs {
  std::vector<C50> a;  // a_0..a_{N-1}
  C50 mu, beta, c;
};

namespace {

template <class R>
struct Cplx;
template <>
struct Cplx<double> {
  using type = std::complex<double>;
};
template <>
struct Cplx<R50> {
  using type = C50;
};

template <class C>
cplx to_double(const C& z) {
  using std::imag;
  using std::real;
  return {static_cast<double>(real(z)), static_cast<double>(imag(z))};
}

template <class C>
C from_double(cplx z) {
  return C(z.real(), z.imag());
}

template <class C>
double cabs(const C& z) {
  using std::abs;
  return static_cast<double>(abs(z));
}

// Zeros of L_n^{(alpha)} polished by Newton in the working precision.
template <class R>
std::vector<R> polished_zeros(int n, int alpha) {
  std::vector<double> x0 = genlaguerre_zeros(n, alpha);
  std::vector<R> x(x0.begin(), x0.end());
  for (R& t : x) {
    for (int it = 0; it < 6; ++it) {
      R lm1 = 1, l = R(1 + alpha) - t;
      for (int k = 1; k < n; ++k) {
        R next = ((R(2 * k + 1 + alpha) - t) * l - R(k + alpha) * lm1) / R(k + 1);
        lm1 = l;
        l = next;
      }
      R dl = (R(n) * l - R(n + alpha) * lm1) / t;
      R step = l / dl;
      t -= step;
      using std::abs;
      if (abs(step) <= abs(t) * R(1e-45)) break;
    }
  }
  return x;
}

template <class R>
std::vector<R> positive_nodes(int n, NodeFamily f) {
  return polished_zeros<R>(n, f == NodeFamily::LaguerreZeros ? 0 : 1);
}

// b_j/j!, the monomial coefficients of the monic node polynomial q_N.
template <class R>
std::vector<R> q_coeffs(int n, NodeFamily f) {
  std::vector<R> out(static_cast<std::size_t>(n + 1));
  R nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  const int m = f == NodeFamily::LaguerreZeros ? n : n + 1;
  const int off = f == NodeFamily::LaguerreZeros ? 0 : 1;
  R binom = 1;  // binom(m, off)
  if (off == 1) binom = m;
  R jfact = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      binom = binom * R(m - j - off + 1) / R(j + off);
      jfact *= j;
    }
    R sgn = ((n + j) % 2 == 0) ? R(1) : R(-1);
    out[static_cast<std::size_t>(j)] = sgn * nfact * binom / jfact;
  }
  return out;
}

template <class R>
void check_half_plane(cplx mu) {
  if (!(mu.real() < 0.5))
    throw NumericError(ErrorKind::HalfPlaneViolation, "collocation requires Re mu < 1/2");
}

template <class C>
C horner_p(const std::vector<C>& a, const C& beta, const C& t) {
  // p(t) = beta + sum_{j=1}^N a_{j-1} t^j / j
  C acc = 0;
  for (std::size_t j = a.size(); j >= 1; --j) acc = acc * t + a[j - 1] / C(static_cast<double>(j));
  return beta + acc * t;
}

template <class C>
C horner_dp(const std::vector<C>& a, const C& t) {
  C acc = 0;
  for (std::size_t j = a.size(); j-- > 0;) acc = acc * t + a[j];
  return acc;
}

template <class R>
CollocationSolution recurrence_impl(cplx mu_d, cplx beta_d, cplx c_d, int n, NodeFamily f,
                                    std::shared_ptr<ExtendedCoeffs>* keep) {
  using C = typename Cplx<R>::type;
  const C mu = from_double<C>(mu_d), beta = from_double<C>(beta_d), c = from_double<C>(c_d);
  std::vector<R> bj = q_coeffs<R>(n, f);  // b_j / j!
  // d_N N! = sum_k mu^{N-k} b_k
  C dnf = 0;
  R nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  {
    C pw = 1;
    R kfact = 1;
    for (int k = n; k >= 0; --k) {
      kfact = 1;
      for (int i = 2; i <= k; ++i) kfact *= i;
      dnf += pw * C(bj[static_cast<std::size_t>(k)] * kfact);
      pw *= mu;
    }
  }
  C mun = 1;
  for (int i = 0; i < n; ++i) mun *= mu;
  const C kn = -mun * (mu * beta + c) / dnf;
  std::vector<C> a(static_cast<std::size_t>(n));
  R b0 = bj[0];
  a[0] = mu * beta + c + kn * C(b0);
  for (int j = 1; j < n; ++j)
    a[static_cast<std::size_t>(j)] =
        mu * a[static_cast<std::size_t>(j - 1)] / C(R(j)) + kn * C(bj[static_cast<std::size_t>(j)]);
  const C closure = mu * a[static_cast<std::size_t>(n - 1)] / C(R(n)) +
                    kn * C(bj[static_cast<std::size_t>(n)]);

  CollocationSolution s;
  s.mu = mu_d;
  s.beta = beta_d;
  s.c = c_d;
  s.n = n;
  s.family = f;
  s.k_n = to_double(kn);
  s.d_n = to_double(dnf / C(nfact));
  s.closure = to_double(closure);
  for (const C& z : a) s.coeffs.push_back(to_double(z));
  for (const R& t : positive_nodes<R>(n, f)) {
    s.nodes.push_back(static_cast<double>(t));
    s.values.push_back(to_double(horner_p(a, beta, C(t))));
  }
  if (keep) {
    auto e = std::make_shared<ExtendedCoeffs>();
    for (const C& z : a) e->a.push_back(C50(z));
    e->mu = C50(mu);
    e->beta = C50(beta);
    e->c = C50(c);
    *keep = e;
  }
  return s;
}

// Gaussian elimination with partial pivoting; returns false when singular.
template <class C>
bool lu_solve(std::vector<std::vector<C>> a, std::vector<C>& b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = cabs(a[k][k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = cabs(a[i][k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (!(best > 0.0)) return false;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      C m = a[i][k] / a[k][k];
      if (m == C(0)) continue;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    C s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * b[j];
    b[k] = s / a[k][k];
  }
  return true;
}

template <class C>
double one_norm(const std::vector<std::vector<C>>& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += cabs(a[i][j]);
    best = std::max(best, s);
  }
  return best;
}

template <class R>
DirectSolution direct_impl(cplx mu_d, cplx beta_d, cplx c_d, int n, NodeFamily f) {
  using C = typename Cplx<R>::type;
  using std::exp;
  const C mu = from_double<C>(mu_d), beta = from_double<C>(beta_d), c = from_double<C>(c_d);
  std::vector<R> x{R(0)};
  for (const R& t : positive_nodes<R>(n, f)) x.push_back(t);
  const std::size_t m = x.size();
  std::vector<R> bw(m, R(1));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) bw[k] /= (x[k] - x[j]);
  // Samples weighted by e^{-t/2}: M = W D W^{-1}.
  std::vector<R> w(m);
  for (std::size_t k = 0; k < m; ++k) w[k] = exp(-x[k] / 2);
  auto dw = [&](std::size_t j, std::size_t k) -> R {
    if (j == k) {
      R s = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (i != j) s += R(1) / (x[j] - x[i]);
      return s;
    }
    return bw[k] / bw[j] / (x[j] - x[k]) * exp((x[k] - x[j]) / 2);
  };
  std::vector<std::vector<C>> a(m - 1, std::vector<C>(m - 1));
  std::vector<C> rhs(m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t k = 1; k < m; ++k) a[j - 1][k - 1] = C(dw(j, k));
    a[j - 1][j - 1] -= mu;
    rhs[j - 1] = c * C(w[j]) - C(dw(j, 0)) * beta;
  }
  DirectSolution out;
  // condition via the explicit inverse, cheap at these sizes
  {
    std::vector<std::vector<C>> inv(m - 1, std::vector<C>(m - 1));
    for (std::size_t col = 0; col < m - 1; ++col) {
      std::vector<C> e(m - 1, C(0));
      e[col] = C(1);
      if (!lu_solve(a, e)) throw NumericError(ErrorKind::SingularSystem, "collocation system is singular");
      for (std::size_t i = 0; i < m - 1; ++i) inv[i][col] = e[i];
    }
    out.condition = one_norm(a) * one_norm(inv);
  }
  if (!lu_solve(a, rhs)) throw NumericError(ErrorKind::SingularSystem, "collocation system is singular");
  for (std::size_t j = 1; j < m; ++j) {
    cplx v = to_double(rhs[j - 1] / C(w[j]));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericError(ErrorKind::SingularSystem, "collocation solve produced non-finite values");
    out.nodes.push_back(static_cast<double>(x[j]));
    out.values.push_back(v);
  }
  return out;
}

C50 exact_hp(const C50& mu, const C50& beta, const C50& c, const R50& t) {
  using mp::exp;
  if (mu == C50(0)) return beta + c * C50(t);
  C50 r = c / mu;
  return (beta + r) * exp(mu * C50(t)) - r;
}

}  // namespace

CollocationSolution colloc_recurrence(cplx mu, cplx beta, cplx c, int n, NodeFamily family,
                                      Precision prec) {
  check_half_plane<double>(mu);
  if (n < 1 || n > kMaxNodes) throw NumericError(ErrorKind::InvalidParameter, "N out of range");
  if (prec == Precision::Double) {
    CollocationSolution s = recurrence_impl<double>(mu, beta, c, n, family, nullptr);
    s.precision = Precision::Double;
    return s;
  }
  std::shared_ptr<ExtendedCoeffs> keep;
  CollocationSolution s = recurrence_impl<R50>(mu, beta, c, n, family, &keep);
  s.precision = Precision::Extended;
  s.ext = keep;
  return s;
}

DirectSolution colloc_direct(cplx mu, cplx beta, cplx c, int n, NodeFamily family, Precision prec) {
  if (n < 1 || n > kMaxNodes) throw NumericError(ErrorKind::InvalidParameter, "N out of range");
  if (prec == Precision::Double) return direct_impl<double>(mu, beta, c, n, family);
  return direct_impl<R50>(mu, beta, c, n, family);
}

cplx colloc_eval(const CollocationSolution& s, double t) {
  if (s.ext) return to_double(horner_p(s.ext->a, s.ext->beta, C50(t)));
  return horner_p(s.coeffs, s.beta, cplx(t));
}

cplx colloc_residual(const CollocationSolution& s, double t) {
  if (s.ext) {
    const C50 tt(t);
    return to_double(horner_dp(s.ext->a, tt) - s.ext->mu * horner_p(s.ext->a, s.ext->beta, tt) -
                     s.ext->c);
  }
  return horner_dp(s.coeffs, cplx(t)) - s.mu * horner_p(s.coeffs, s.beta, cplx(t)) - s.c;
}

cplx exact_solution(cplx mu, cplx beta, cplx c, double t) {
  if (mu == cplx(0.0)) return beta + c * t;
  return (beta + c / mu) * std::exp(mu * t) - c / mu;
}

cplx closed_form_dN(cplx mu, int n, NodeFamily family) {
  if (family == NodeFamily::LaguerreZeros) return std::pow(1.0 - mu, n);
  const double sgn = (n + 1) % 2 == 0 ? 1.0 : -1.0;
  return sgn * (std::pow(mu - 1.0, n + 1) - std::pow(mu, n + 1));
}

cplx c_of_mu(cplx mu) { return mu / (mu - 1.0); }

namespace {

double k_factor(double p, double delta) {
  if (std::isinf(p)) {
    if (!(delta >= 0.0)) throw NumericError(ErrorKind::InvalidDelta, "delta must be >= 0");
    return 1.0;
  }
  if (!(p >= 1.0)) throw NumericError(ErrorKind::InvalidParameter, "p must be >= 1");
  if (!(delta > 0.0)) throw NumericError(ErrorKind::InvalidDelta, "finite p needs delta > 0");
  return std::pow(p * delta, -1.0 / p);
}

}  // namespace

double error_bound(cplx mu, cplx beta, cplx c, int n, NodeFamily family, double p_norm,
                   double delta) {
  check_half_plane<double>(mu);
  const double kp = k_factor(p_norm, delta);
  const cplx cm = c_of_mu(mu);
  const double data = std::abs(mu) * std::abs(beta) + std::abs(c);
  const double gap = 0.5 - mu.real();
  if (family == NodeFamily::LaguerreZeros) return std::pow(std::abs(cm), n) * data * kp / gap;
  const cplx dn = std::pow(cm, n) / (1.0 - std::pow(cm, n + 1));
  return std::abs(dn) * data * kp / std::abs(mu - 1.0) * (2.0 + std::abs(mu) / gap);
}

MeasuredError measured_error(const CollocationSolution& s, double p_norm, double delta) {
  const bool sup = std::isinf(p_norm);
  if (!sup && delta == 0.0)
    throw NumericError(ErrorKind::TailNotNegligible, "finite p with delta = 0 has no finite tail");
  k_factor(p_norm, delta);
  std::shared_ptr<const ExtendedCoeffs> ext = s.ext;
  if (!ext) {
    CollocationSolution hp = colloc_recurrence(s.mu, s.beta, s.c, s.n, s.family);
    ext = hp.ext;
  }
  const double rate = 0.5 + delta;
  auto err = [&](double t) {
    using mp::abs;
    using mp::exp;
    const R50 tt(t);
    C50 d = horner_p(ext->a, ext->beta, C50(tt)) - exact_hp(ext->mu, ext->beta, ext->c, tt);
    return static_cast<double>(abs(d) * exp(-R50(rate) * tt));
  };
  // envelope of |w (p - y)| valid for t beyond the last node
  std::vector<double> absa;
  for (const C50& z : ext->a) absa.push_back(static_cast<double>(mp::abs(z)));
  const double absb = std::abs(s.beta), absr = s.mu == cplx(0.0) ? 0.0 : std::abs(s.c / s.mu);
  auto envelope = [&](double t) {
    double lp = std::log(absb + 1e-300);
    for (std::size_t j = 1; j <= absa.size(); ++j)
      lp = std::max(lp, std::log(absa[j - 1] / j + 1e-300) + j * std::log(t));
    double poly = std::exp(lp + std::log(static_cast<double>(absa.size() + 1)) - rate * t);
    double ypart = (absb + absr) * std::exp((s.mu.real() - rate) * t) + absr * std::exp(-rate * t);
    if (s.mu == cplx(0.0)) ypart = (absb + std::abs(s.c) * t) * std::exp(-rate * t);
    return poly + ypart;
  };

  double horizon = std::max(60.0, 16.0 * s.n + 60.0);
  MeasuredError out;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const int m = 1500 + 60 * s.n;
    const double su = std::sqrt(horizon);
    std::vector<double> ts(static_cast<std::size_t>(m + 1)), vs(ts.size());
    for (int i = 0; i <= m; ++i) {
      double u = su * i / m;
      ts[static_cast<std::size_t>(i)] = u * u;
      vs[static_cast<std::size_t>(i)] = err(u * u);
    }
    double value = 0.0, acc = 0.0;
    if (sup) {
      double grid_max = *std::max_element(vs.begin(), vs.end());
      // refine the few largest local maxima by golden section
      std::vector<int> peaks;
      for (int i = 1; i < m; ++i)
        if (vs[i] >= vs[i - 1] && vs[i] >= vs[i + 1] && vs[i] > 0.5 * grid_max) peaks.push_back(i);
      value = std::max(vs.front(), vs.back());
      value = std::max(value, grid_max);
      for (int i : peaks) {
        double lo = ts[i - 1], hi = ts[i + 1];
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = err(x1), f2 = err(x2);
        for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = err(x2);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = err(x1);
          }
        }
        value = std::max({value, f1, f2});
      }
      acc = value - grid_max;
      double tail = envelope(horizon);
      if (tail <= 1e-3 * value || value == 0.0) {
        acc = std::max(acc, tail);
        if (value == 0.0) acc = tail;
        out.value = value;
        out.accuracy = acc;
        out.horizon = horizon;
        if (tail <= 1e-3 * value || tail < 1e-300) return out;
      }
    } else {
      // 5- and 3-point Gauss-Legendre on every grid interval
      static const double x5[] = {0.0, 0.5384693101056831, 0.9061798459386640};
      static const double w5[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
      static const double x3 = 0.7745966692414834, w3a = 0.8888888888888888, w3b = 0.5555555555555556;
      double i5 = 0.0, i3 = 0.0;
      for (int i = 0; i < m; ++i) {
        double a = ts[i], b = ts[i + 1], h = 0.5 * (b - a), mid = 0.5 * (a + b);
        auto f = [&](double t) { return std::pow(err(t), p_norm); };
        double fm = f(mid);
        double s5 = w5[0] * fm;
        for (int k = 1; k < 3; ++k) s5 += w5[k] * (f(mid - h * x5[k]) + f(mid + h * x5[k]));
        double s3 = w3a * fm + w3b * (f(mid - h * x3) + f(mid + h * x3));
        i5 += h * s5;
        i3 += h * s3;
      }
      double tail = std::pow(envelope(horizon), p_norm) * 2.0 * horizon;
      value = std::pow(i5, 1.0 / p_norm);
      if (tail <= 1e-3 * i5 || i5 == 0.0) {
        out.value = value;
        double rel = i5 > 0 ? (std::abs(i5 - i3) + tail) / i5 : 0.0;
        out.accuracy = value * rel / p_norm;
        out.horizon = horizon;
        return out;
      }
    }
    horizon *= 2.0;
  }
  throw NumericError(ErrorKind::TailNotNegligible, "could not certify the truncation point");
}

Eigen::MatrixXd reduced_diff_matrix(int n, NodeFamily family) {
  std::vector<double> x{0.0};
  for (double t : family_nodes(family, n)) x.push_back(t);
  Eigen::MatrixXd d = diff_matrix(x).d;
  return d.bottomRightCorner(n, n);
}

ReducedDiffSpectrum reduced_diffmat_spectrum(int n, NodeFamily family) {
  if (n < 1 || n > 40) throw NumericError(ErrorKind::InvalidParameter, "N must be in [1, 40]");
  ReducedDiffSpectrum r;
  r.family = family;
  r.n = n;
  Eigen::MatrixXd d = reduced_diff_matrix(n, family);
  r.computed = eig_dense(d);
  r.trace = d.trace();
  r.det = d.determinant();
  const bool zeros = family == NodeFamily::LaguerreZeros;
  for (int k = 1; k <= n; ++k) {
    if (zeros) {
      r.predicted.push_back(1.0);
    } else {
      cplx e = std::polar(1.0, 2.0 * M_PI * k / (n + 1));
      r.predicted.push_back(1.0 / (1.0 - e));
    }
  }
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (cplx p : r.predicted) {
    int best = -1;
    double bd = INFINITY;
    for (int i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      double dd = std::abs(r.computed.values(i) - p);
      if (dd < bd) {
        bd = dd;
        best = i;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    r.max_set_distance = std::max(r.max_set_distance, bd);
  }
  for (int i = 0; i < n; ++i) {
    cplx v = r.computed.values(i);
    r.max_re_offset =
        std::max(r.max_re_offset, zeros ? std::abs(v - 1.0) : std::abs(v.real() - 0.5));
  }
  const cplx pts[] = {{0.3, 0.2}, {-0.7, 1.1}, {1.9, -0.4}, {0.0, 2.5}, {-1.3, 0.0}};
  Eigen::MatrixXcd dc = d.cast<cplx>();
  for (cplx mu : pts) {
    Eigen::MatrixXcd a = mu * Eigen::MatrixXcd::Identity(n, n) - dc;
    cplx det = a.partialPivLu().determinant();
    cplx pred = zeros ? std::pow(mu - 1.0, n)
                      : (std::pow(mu - 1.0, n + 1) - std::pow(mu, n + 1)) / (-(n + 1.0));
    r.samples.push_back({mu, det, pred});
    r.max_sample_rel_error = std::max(r.max_sample_rel_error, std::abs(det - pred) / std::abs(pred));
  }
  return r;
}

}  // namespace lagpsd
