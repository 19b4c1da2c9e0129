#include "coalesce/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "coalesce/exact.hpp"

namespace coalesce {

double AlphaFn::operator()(double c) const {
  if (!(c >= 0.0)) throw CoalesceError(ErrorCode::InvalidArgument, "alpha: c must be non-negative");
  if (c <= 1.0) return 0.0;
  if (c >= 5.0) {
    // Near 1 bisection on x loses monotonicity at the ulp level; iterate on
    // b = 1 - x instead: b = exp(-c (1 - b)) contracts with factor c b < 0.04.
    double b = std::exp(-c);
    for (int it = 0; it < 100; ++it) {
      const double next = std::exp(-c * (1.0 - b));
      if (next == b) break;
      b = next;
    }
    return 1.0 - b;
  }
  // g(x) = exp(-c x) - (1 - x) is negative on (0, alpha) and positive on (alpha, 1].
  auto g = [c](double x) { return std::expm1(-c * x) + x; };
  double lo = 0.0, hi = 1.0;
  if (c >= 2.0) {
    const double lb = 1.0 - 2.0 * std::exp(-c);
    if (lb > 0.0 && g(lb) < 0.0) lo = lb;
    const double ub = 1.0 - std::exp(-c);
    if (ub > lo && g(ub) >= 0.0) hi = ub;
  }
  for (int it = 0; it < 200 && hi - lo > tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double alpha(double c) { return AlphaFn{}(c); }

double t_star(double n, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw CoalesceError(ErrorCode::InvalidArgument, "t_star: p must lie in [0, 1)");
  return n * alpha(-n * std::log1p(-p));
}

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  std::size_t evaluations = 0;
  int max_depth;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
                 double& err) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) {
      err += std::fabs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth)
      throw CoalesceError(ErrorCode::QuadratureFailure,
                          "adaptive_simpson: no convergence near x = " + std::to_string(m));
    return recurse(a, m, fa, flm, fm, left, tol / 2.0, depth + 1, err) +
           recurse(m, b, fm, frm, fb, right, tol / 2.0, depth + 1, err);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth) {
  Simpson s{f, 0, max_depth};
  const double fa = s.eval(a), fb = s.eval(b), fm = s.eval(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  QuadratureResult result;
  result.value = s.recurse(a, b, fa, fm, fb, whole, tol, 0, result.error_estimate);
  result.evaluations = s.evaluations;
  return result;
}

double zeta3_integrand(double lambda) {
  if (lambda <= 1.0) return lambda;
  const double a = alpha(lambda);
  return lambda * std::exp(-lambda * a) * (1.0 + a);
}

double zmc_integrand(double lambda) {
  if (lambda <= 1.0) return 0.0;
  const double a = alpha(lambda);
  const double one_minus_a2 = std::exp(-lambda * a) * (1.0 + a);
  return one_minus_a2 * (-lambda * a + std::log1p(a));
}

namespace {

QuadratureResult split_integral(double (*f)(double), double tol, double tail_bound) {
  const auto left = adaptive_simpson(f, 0.0, 1.0, tol / 2.0);
  const auto right = adaptive_simpson(f, 1.0, kIntegralCutoff, tol / 2.0);
  QuadratureResult result;
  result.value = left.value + right.value;
  result.error_estimate = left.error_estimate + right.error_estimate;
  result.evaluations = left.evaluations + right.evaluations;
  result.tail_bound = tail_bound;
  return result;
}

}  // namespace

QuadratureResult zeta3_integral(double tol) {
  // lambda (1 - alpha^2) <= 2 lambda e^{-lambda alpha} and alpha >= 1 - 2e^{-lambda}.
  return split_integral(zeta3_integrand, tol, 4.0 * (kIntegralCutoff + 1.0) * std::exp(-kIntegralCutoff));
}

QuadratureResult zmc_integral(double tol) {
  return split_integral(zmc_integrand, tol, 4.0 * (kIntegralCutoff + 1.0) * std::exp(-kIntegralCutoff));
}

double zeta3_series(std::size_t terms) {
  double sum = 0.0;
  for (std::size_t k = terms; k >= 1; --k) {
    const double x = static_cast<double>(k);
    sum += 1.0 / (x * x * x);
  }
  const double n = static_cast<double>(terms);
  return sum + 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n * n * n) + 1.0 / (4.0 * n * n * n * n);
}

const Constants& constants() {
  static const Constants c = [] {
    Constants k{};
    const double ln2 = std::numbers::ln2;
    k.zeta3 = zeta3_series();
    k.zeta_mc = std::numbers::pi * std::numbers::pi / 6.0 - 3.0 + ln2 - ln2 * ln2;
    k.two_zeta3 = 2.0 * k.zeta3;
    k.zmc_integral_target = 2.0 * (k.zeta_mc + ln2);
    return k;
  }();
  return c;
}

double susceptibility_prediction(double n, double p) {
  if (n < 0.0 || p < 0.0) throw CoalesceError(ErrorCode::InvalidArgument, "susceptibility_prediction: negative argument");
  const double a = alpha(n * p);
  return a * a * n;
}

double susc_exp_target(double n, double m) {
  if (!(n > 0.0) || m < 0.0) throw CoalesceError(ErrorCode::InvalidArgument, "susc_exp_target: bad argument");
  const double a = alpha(2.0 * m / n);
  return a * a * n;
}

// GCC 11 misreads the inlined cpp_int shift as an out-of-bounds memcpy.
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wstringop-overflow"
#pragma GCC diagnostic ignored "-Wstringop-overread"
double log_big(const BigInt& x) {
  if (x <= 0) throw CoalesceError(ErrorCode::InvalidArgument, "log_big: argument must be positive");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}
#pragma GCC diagnostic pop

RatioMcAc ratio_mc_ac(std::size_t n) {
  if (n < 2 || n > 3000) throw CoalesceError(ErrorCode::UnsupportedSize, "ratio_mc_ac: n must lie in [2, 3000]");
  RatioMcAc r;
  r.n = n;
  r.k = n / 2;
  r.log_zmc = log_big(closed_form_Z(KernelKind::Multiplicative, n, r.k));
  r.log_zac = log_big(closed_form_Z(KernelKind::Additive, n, r.k));
  const double nd = static_cast<double>(n);
  r.per_half_n = (r.log_zmc - r.log_zac) / (nd / 2.0);
  r.log_zmc_over_nlogn = r.log_zmc / (nd * std::log(nd));
  return r;
}

}  // namespace coalesce
