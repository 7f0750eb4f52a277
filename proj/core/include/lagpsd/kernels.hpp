#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>

namespace lagpsd {

using cplx = std::complex<double>;

// Delay kernels k(s), s >= 0.  Every variant carries an optional constant
// factor `scale` and extra damping e^{-damping s}.
struct KernelSpec {
  enum class Kind { Exponential, Gamma, SinModulated, Shifted, Custom };

  Kind kind = Kind::Exponential;
  double k0 = 0.0;
  double mu = 1.0;
  double sigma = 1.0;
  double a = 0.0;
  double shift = 0.0;
  double scale = 1.0;
  double damping = 0.0;
  double custom_decay = 0.0;
  std::shared_ptr<const KernelSpec> inner;
  std::function<double(double)> custom;

  static KernelSpec exponential(double k0, double mu);
  static KernelSpec gamma(double mu, double sigma);
  static KernelSpec sin_modulated(double k0, double mu, double a);
  static KernelSpec shifted(const KernelSpec& inner, double shift);
  static KernelSpec custom_fn(std::function<double(double)> f, double decay);
  static KernelSpec zero() { return exponential(0.0, 1.0); }

  KernelSpec scaled(double factor) const;
  KernelSpec damped(double delta) const;

  // |k(s)| e^{rho* s} is bounded.
  double decay_rate() const;
  bool singular_at_zero() const;
  bool has_log_form() const;

  // log|k(s)| and the sign of k(s); sign 0 means k(s) == 0.
  double log_abs(double s, int& sign) const;
  double eval(double s) const;

  cplx laplace(cplx lambda) const;
  cplx laplace_deriv(cplx lambda) const;

  std::string describe() const;
};

// Pointwise value; singular is set when k(0) is an integrable singularity.
double kernel_eval(const KernelSpec& k, double s, bool* singular = nullptr);
// Throws OutOfStrip when Re lambda <= -rho*.
cplx kernel_laplace(const KernelSpec& k, cplx lambda);

}  // namespace lagpsd
