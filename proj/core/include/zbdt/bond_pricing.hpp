#pragma once

#include "zbdt/lattice.hpp"

namespace zbdt {

// Backward-induction lattice of a zero-coupon bond paying `face` at
// `maturity` periods: terminal column holds face, interior nodes hold
// E[child values] / (1 + r). Requires 1 <= maturity <= tree.horizon().
ValueLattice zc_bond_lattice(const RateTree& tree, int maturity, double face);

// Root value of the same bond.
double zc_bond_price(const RateTree& tree, int maturity, double face);

// Annually compounded yield implied by holding a claim worth `value` that
// pays `face` after `periods` full periods: (face/value)^(1/periods) - 1.
double annual_yield(double value, double face, int periods);

}  // namespace zbdt
