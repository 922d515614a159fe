#include "pqvrf/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pqvrf {

ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2)
    throw std::invalid_argument("chi-square needs matching bins, at least two");
  ChiSquare r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0)) throw std::invalid_argument("expected counts must be positive");
    const double d = static_cast<double>(observed[i]) - expected[i];
    r.statistic += d * d / expected[i];
  }
  r.dof = static_cast<unsigned>(observed.size() - 1);
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts) {
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  std::vector<double> expected(counts.size(), total / static_cast<double>(counts.size()));
  return chi_square(counts, expected);
}

double binomial_z(std::uint64_t successes, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double sd = std::sqrt(n * p * (1 - p));
  if (sd == 0) return static_cast<double>(successes) == n * p ? 0.0 : INFINITY;
  return (static_cast<double>(successes) - n * p) / sd;
}

}  // namespace pqvrf
