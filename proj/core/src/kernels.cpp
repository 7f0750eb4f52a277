#include "lagpsd/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lagpsd/error.hpp"

namespace lagpsd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

KernelSpec KernelSpec::exponential(double k0, double mu) {
  KernelSpec k;
  k.kind = Kind::Exponential;
  k.k0 = k0;
  k.mu = mu;
  return k;
}

KernelSpec KernelSpec::gamma(double mu, double sigma) {
  if (!(mu > 0.0) || !(sigma > 0.0))
    throw NumericError(ErrorKind::InvalidParameter, "gamma kernel needs mu, sigma > 0");
  KernelSpec k;
  k.kind = Kind::Gamma;
  k.mu = mu;
  k.sigma = sigma;
  return k;
}

KernelSpec KernelSpec::sin_modulated(double k0, double mu, double a) {
  KernelSpec k;
  k.kind = Kind::SinModulated;
  k.k0 = k0;
  k.mu = mu;
  k.a = a;
  return k;
}

KernelSpec KernelSpec::shifted(const KernelSpec& inner, double shift) {
  if (!(shift >= 0.0)) throw NumericError(ErrorKind::InvalidParameter, "negative shift");
  KernelSpec k;
  k.kind = Kind::Shifted;
  k.shift = shift;
  k.inner = std::make_shared<const KernelSpec>(inner);
  return k;
}

KernelSpec KernelSpec::custom_fn(std::function<double(double)> f, double decay) {
  KernelSpec k;
  k.kind = Kind::Custom;
  k.custom = std::move(f);
  k.custom_decay = decay;
  return k;
}

KernelSpec KernelSpec::scaled(double factor) const {
  KernelSpec k = *this;
  k.scale *= factor;
  return k;
}

KernelSpec KernelSpec::damped(double delta) const {
  KernelSpec k = *this;
  k.damping += delta;
  return k;
}

double KernelSpec::decay_rate() const {
  double base = 0.0;
  switch (kind) {
    case Kind::Exponential:
    case Kind::Gamma:
    case Kind::SinModulated: base = mu; break;
    case Kind::Shifted: base = inner->decay_rate(); break;
    case Kind::Custom: base = custom_decay; break;
  }
  return base + damping;
}

bool KernelSpec::singular_at_zero() const {
  if (kind == Kind::Gamma) return sigma < 1.0;
  if (kind == Kind::Shifted) return shift == 0.0 && inner->singular_at_zero();
  return false;
}

bool KernelSpec::has_log_form() const {
  if (kind == Kind::Custom) return false;
  if (kind == Kind::Shifted) return inner->has_log_form();
  return true;
}

double KernelSpec::log_abs(double s, int& sign) const {
  double base;
  int sg = 1;
  switch (kind) {
    case Kind::Exponential:
      if (k0 == 0.0) { sign = 0; return kNegInf; }
      sg = k0 < 0 ? -1 : 1;
      base = std::log(std::abs(k0)) - mu * s;
      break;
    case Kind::Gamma:
      if (s == 0.0) {
        if (sigma > 1.0) { sign = 0; return kNegInf; }
        if (sigma < 1.0) { sign = 1; return std::numeric_limits<double>::infinity(); }
        base = std::log(mu);
      } else {
        base = sigma * std::log(mu) + (sigma - 1.0) * std::log(s) - mu * s - std::lgamma(sigma);
      }
      break;
    case Kind::SinModulated: {
      double f = std::sin(a * s) + 1.0;
      if (k0 == 0.0 || f <= 0.0) { sign = 0; return kNegInf; }
      sg = k0 < 0 ? -1 : 1;
      base = std::log(std::abs(k0)) - mu * s + std::log(f);
      break;
    }
    case Kind::Shifted: {
      if (s < shift) { sign = 0; return kNegInf; }
      base = inner->log_abs(s - shift, sg);
      if (sg == 0) { sign = 0; return kNegInf; }
      break;
    }
    case Kind::Custom: {
      double v = custom(s);
      if (v == 0.0) { sign = 0; return kNegInf; }
      sg = v < 0 ? -1 : 1;
      base = std::log(std::abs(v));
      break;
    }
    default: base = kNegInf;
  }
  if (scale == 0.0) { sign = 0; return kNegInf; }
  if (scale < 0) sg = -sg;
  sign = sg;
  return base + std::log(std::abs(scale)) - damping * s;
}

double KernelSpec::eval(double s) const {
  int sg = 0;
  double l = log_abs(s, sg);
  if (sg == 0) return 0.0;
  return sg * std::exp(l);
}

cplx KernelSpec::laplace(cplx lambda) const {
  cplx z = lambda + damping;
  cplx v;
  switch (kind) {
    case Kind::Exponential: v = k0 / (z + mu); break;
    case Kind::Gamma: v = std::pow(mu / (z + mu), sigma); break;
    case Kind::SinModulated: {
      cplx p = z + mu;
      v = k0 * (a / (p * p + a * a) + 1.0 / p);
      break;
    }
    case Kind::Shifted: {
      if (inner->kind != Kind::Exponential || inner->damping != 0.0)
        throw NumericError(ErrorKind::Unsupported,
                           "closed-form transform of a shifted kernel needs an exponential inner");
      cplx p = z + inner->mu;
      v = inner->scale * inner->k0 * std::exp(-p * shift) / p;
      break;
    }
    case Kind::Custom:
      throw NumericError(ErrorKind::Unsupported, "no closed-form transform for custom kernels");
  }
  return scale * v;
}

cplx KernelSpec::laplace_deriv(cplx lambda) const {
  cplx z = lambda + damping;
  cplx v;
  switch (kind) {
    case Kind::Exponential: v = -k0 / ((z + mu) * (z + mu)); break;
    case Kind::Gamma: v = -sigma / (z + mu) * std::pow(mu / (z + mu), sigma); break;
    case Kind::SinModulated: {
      cplx p = z + mu;
      cplx q = p * p + a * a;
      v = k0 * (-2.0 * a * p / (q * q) - 1.0 / (p * p));
      break;
    }
    case Kind::Shifted: {
      if (inner->kind != Kind::Exponential || inner->damping != 0.0)
        throw NumericError(ErrorKind::Unsupported,
                           "closed-form transform of a shifted kernel needs an exponential inner");
      cplx p = z + inner->mu;
      cplx t = inner->scale * inner->k0 * std::exp(-p * shift) / p;
      v = -t * (shift + 1.0 / p);
      break;
    }
    case Kind::Custom:
      throw NumericError(ErrorKind::Unsupported, "no closed-form transform for custom kernels");
  }
  return scale * v;
}

std::string KernelSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Exponential: os << "exponential(k0=" << k0 << ",mu=" << mu << ")"; break;
    case Kind::Gamma: os << "gamma(mu=" << mu << ",sigma=" << sigma << ")"; break;
    case Kind::SinModulated: os << "sin(k0=" << k0 << ",mu=" << mu << ",a=" << a << ")"; break;
    case Kind::Shifted: os << "shifted(" << inner->describe() << ",by=" << shift << ")"; break;
    case Kind::Custom: os << "custom(decay=" << custom_decay << ")"; break;
  }
  if (scale != 1.0) os << "*" << scale;
  if (damping != 0.0) os << "*exp(-" << damping << "s)";
  return os.str();
}

double kernel_eval(const KernelSpec& k, double s, bool* singular) {
  if (singular) *singular = (s == 0.0 && k.singular_at_zero());
  return k.eval(s);
}

cplx kernel_laplace(const KernelSpec& k, cplx lambda) {
  if (!(lambda.real() > -k.decay_rate()))
    throw NumericError(ErrorKind::OutOfStrip, "Re(lambda) outside the kernel's Laplace strip");
  return k.laplace(lambda);
}

}  // namespace lagpsd
