#pragma once

#include "zbdt/calibration.hpp"
#include "zbdt/lattice.hpp"
#include "zbdt/market_data.hpp"

#include <string>
#include <vector>

namespace zbdt {

struct ReferenceNode {
    int time = 0;
    int state = 0;
    double value = 0;
};

// One published lattice table, flattened to nodes. Rate tables hold percent
// values over columns 0..T-1; bond tables hold currency values over columns
// 0..T including the all-face terminal column.
struct ReferenceTable {
    std::string label;
    std::vector<ReferenceNode> nodes;
};

// A bundled market scenario: the input curve, the ZBDT parameters used with
// it, the barrier levels studied on it, and the published trees to compare
// against.
struct ReferenceCase {
    std::string name;
    TermStructure curve;
    ZbdtParams zbdt_params;
    double barrier_hi = 0;
    double barrier_lo = 0;
    int option_expiry = 0;  // the S the scenario's option studies use
    ReferenceTable bdt_rates_pct;
    ReferenceTable bdt_bond_prices;
    ReferenceTable zbdt_rates_pct;
    ReferenceTable zbdt_bond_prices;
};

const ReferenceCase& example_case();
const ReferenceCase& real_case();
std::vector<const ReferenceCase*> all_cases();

// Model rates (as percent) against a published rate table.
std::vector<NodeDeviation> rate_deviations(const RateTree& tree, const ReferenceTable& table);

// Bond lattice values against a published price table.
std::vector<NodeDeviation> bond_deviations(const ValueLattice& bonds, const ReferenceTable& table);

double max_abs_deviation(const std::vector<NodeDeviation>& devs);

// Plain-text report, one line per node plus a max-deviation footer.
std::string format_deviation_report(const ReferenceTable& table,
                                    const std::vector<NodeDeviation>& devs);

}  // namespace zbdt
