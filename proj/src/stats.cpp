#include "coalesce/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "coalesce/types.hpp"

namespace coalesce {

double chi_square_sf(double statistic, double df) {
  if (df <= 0.0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

TestResult chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> expected_prob,
                          double min_expected) {
  if (observed.size() != expected_prob.size() || observed.empty())
    throw CoalesceError(ErrorCode::InvalidArgument, "chi_square_gof: size mismatch");
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);

  std::vector<double> pooled_obs, pooled_exp;
  double obs = 0.0, exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    obs += static_cast<double>(observed[i]);
    exp += expected_prob[i] * total;
    if (exp >= min_expected) {
      pooled_obs.push_back(obs);
      pooled_exp.push_back(exp);
      obs = exp = 0.0;
    }
  }
  if (exp > 0.0 || obs > 0.0) {
    if (pooled_exp.empty()) {
      pooled_obs.push_back(obs);
      pooled_exp.push_back(exp);
    } else {
      pooled_obs.back() += obs;
      pooled_exp.back() += exp;
    }
  }

  TestResult result;
  for (std::size_t i = 0; i < pooled_obs.size(); ++i) {
    if (pooled_exp[i] <= 0.0) {
      if (pooled_obs[i] > 0.0) {
        result.statistic = INFINITY;
        result.p_value = 0.0;
        return result;
      }
      continue;
    }
    const double d = pooled_obs[i] - pooled_exp[i];
    result.statistic += d * d / pooled_exp[i];
  }
  result.df = static_cast<double>(pooled_obs.size()) - 1.0;
  result.p_value = chi_square_sf(result.statistic, result.df);
  return result;
}

TestResult chi_square_two_sample(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_count) {
  if (a.size() != b.size()) throw CoalesceError(ErrorCode::InvalidArgument, "chi_square_two_sample: size mismatch");
  std::vector<double> ca, cb;
  double rest_a = 0.0, rest_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = static_cast<double>(a[i]), y = static_cast<double>(b[i]);
    if (x + y >= min_count) {
      ca.push_back(x);
      cb.push_back(y);
    } else {
      rest_a += x;
      rest_b += y;
    }
  }
  if (rest_a + rest_b > 0.0) {
    ca.push_back(rest_a);
    cb.push_back(rest_b);
  }
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    na += ca[i];
    nb += cb[i];
  }
  TestResult result;
  if (ca.size() < 2 || na == 0.0 || nb == 0.0) return result;
  const double total = na + nb;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const double col = ca[i] + cb[i];
    const double ea = na * col / total, eb = nb * col / total;
    result.statistic += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
  }
  result.df = static_cast<double>(ca.size()) - 1.0;
  result.p_value = chi_square_sf(result.statistic, result.df);
  return result;
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw CoalesceError(ErrorCode::InvalidArgument, "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  TestResult result;
  result.statistic = d;
  result.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  return result;
}

}  // namespace coalesce
