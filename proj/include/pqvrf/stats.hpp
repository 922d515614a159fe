#pragma once

// Small statistical tests used to check output distributions.

#include <cstdint>
#include <span>
#include <vector>

namespace pqvrf {

struct ChiSquare {
  double statistic = 0;
  unsigned dof = 0;
  double p_value = 1;
};

/// Goodness of fit against equal expected counts per bin.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> counts);

/// Goodness of fit against given expected counts (same length, all > 0).
ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected);

/// z-score of a binomial count against n trials at probability p.
double binomial_z(std::uint64_t successes, std::uint64_t trials, double p);

}  // namespace pqvrf
