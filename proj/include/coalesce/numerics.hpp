#pragma once

#include <cstddef>
#include <functional>

#include "coalesce/types.hpp"

namespace coalesce {

// alpha(c): largest root of exp(-c x) = 1 - x in [0, 1); zero for c <= 1.
struct AlphaFn {
  double tolerance = 1e-12;
  double operator()(double c) const;
};

double alpha(double c);

// n * alpha(n ln(1/(1-p))), the largest root of n (1-p)^t = n - t.
double t_star(double n, double p);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double tail_bound = 0.0;  // bound on the omitted integral beyond the cutoff
  std::size_t evaluations = 0;
};

// Adaptive Simpson with Richardson correction. Throws QuadratureFailure when
// the depth limit is hit before the local tolerance is met.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth = 50);

inline constexpr double kIntegralCutoff = 60.0;

// Integrands in lambda. Beyond lambda = 1 they use 1 - alpha^2 = exp(-lambda alpha)(1 + alpha).
double zeta3_integrand(double lambda);
double zmc_integrand(double lambda);

// int_0^60 lambda (1 - alpha(lambda)^2) d lambda, split at lambda = 1.
QuadratureResult zeta3_integral(double tol = 1e-11);
// int_0^60 (1 - alpha^2) ln(1 - alpha^2) d lambda.
QuadratureResult zmc_integral(double tol = 1e-11);

// sum_{k<=terms} k^-3 plus the Euler-Maclaurin tail 1/(2N^2) - 1/(2N^3) + 1/(4N^4).
double zeta3_series(std::size_t terms = 1000000);

struct Constants {
  double zeta3;
  double zeta_mc;  // zeta(2) - 3 + ln 2 - ln^2 2
  double two_zeta3;
  double zmc_integral_target;  // 2 (zeta_mc + ln 2)
};

const Constants& constants();

// alpha(np)^2 n
double susceptibility_prediction(double n, double p);
// alpha(2m/n)^2 n
double susc_exp_target(double n, double m);

// Natural log of a positive big integer.
double log_big(const BigInt& x);

struct RatioMcAc {
  std::size_t n = 0;
  std::size_t k = 0;  // floor(n / 2)
  double log_zmc = 0.0;
  double log_zac = 0.0;
  double per_half_n = 0.0;        // (ln Z_MC - ln Z_AC) / (n / 2)
  double log_zmc_over_nlogn = 0.0;  // ln Z_MC / (n ln n)
};

// Exact closed forms at k = floor(n/2); n <= 3000.
RatioMcAc ratio_mc_ac(std::size_t n);

}  // namespace coalesce
