#pragma once

#include "zbdt/lattice.hpp"
#include "zbdt/payoffs.hpp"

#include <string>
#include <vector>

namespace zbdt {

// Value lattices per barrier-status layer, columns 0..expiry. Layer k holds
// the option value at a node conditional on the path status (including the
// node's own spot) being layer_status[k]. One layer for vanilla specs, two
// per single barrier, four for double barriers. `value` is the root value in
// the layer selected by the root spot itself.
struct PriceResult {
    double value = 0.0;
    int root_layer = 0;
    std::vector<BarrierStatus> layer_status;
    std::vector<ValueLattice> layers;

    // American only: 1.0 where immediate exercise strictly beats
    // continuation at a time before expiry, one lattice per layer.
    std::vector<ValueLattice> exercised;
};

// Backward induction of discounted expectations over the tree's transitions;
// barrier families advance the status with each child's bond price and read
// the child value from the matching layer. The underlying spot at a node is
// the price of the bond maturing at spec.bond_maturity with face `face`.
PriceResult price_european(const RateTree& tree, const OptionSpec& spec, double face = 100.0);

// As price_european, plus the exercise comparison at every node:
// V = max(payoff gated by the node's status, continuation). Dead knock-out
// layers therefore hold 0 throughout. Double-in is priced directly on four
// layers (the vanilla-minus-double-out identity fails under early exercise).
PriceResult price_american(const RateTree& tree, const OptionSpec& spec, double face = 100.0);

// Dispatch on spec.style.
PriceResult price(const RateTree& tree, const OptionSpec& spec, double face = 100.0);

std::string to_json(const PriceResult& result, const OptionSpec& spec);

}  // namespace zbdt
