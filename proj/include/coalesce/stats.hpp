#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace coalesce {

struct TestResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

// Pearson goodness of fit of `observed` against cell probabilities `expected_prob`.
// Neighbouring cells are pooled (in order) until each pooled cell expects at
// least `min_expected` counts; the trailing remainder joins the last pool.
TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected_prob,
                          double min_expected = 5.0);

// Two-sample chi-square homogeneity test over shared categories; categories
// with fewer than `min_count` combined observations are pooled together.
TestResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_count = 10.0);

// Kolmogorov distribution tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
// (Stephens' effective-size correction). Conservative for discrete data.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace coalesce
