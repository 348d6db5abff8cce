#pragma once

#include "zbdt/lattice.hpp"
#include "zbdt/payoffs.hpp"

namespace zbdt {

// Brute-force reference pricer. Enumerates every path of the non-recombined
// tree, carrying the exact running max and min of the underlying bond price;
// European prices by direct expectation of path-discounted payoffs, American
// by backward induction on the full path tree. Shares only the RateTree and
// the payoff functions with the lattice pricer — bond values and barrier
// indicators are re-derived here. Guard: expiry <= 6 (path count).
double oracle_price(const RateTree& tree, const OptionSpec& spec, double face = 100.0);

// Sum of path probabilities over all paths of `steps` transitions from the
// root; equals 1 up to accumulated rounding.
double oracle_total_probability(const RateTree& tree, int steps);

}  // namespace zbdt
