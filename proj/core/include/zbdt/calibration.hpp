#pragma once

#include "zbdt/lattice.hpp"
#include "zbdt/market_data.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace zbdt {

// Solver knobs for the per-column two-condition fit. The price tolerance is
// expressed per unit of face value: a column is accepted when the model root
// price of the column's bond is within price_tol_per_face * FV of the market
// price. Spacing bounds constrain sigma_i = 0.5*ln(k_i), the log of the
// within-column rate ratio.
struct CalibrationSettings {
    double price_tol_per_face = 1e-10;
    double vol_tol = 1e-12;
    int max_iterations = 200;
    double base_lo = 1e-9;
    double base_hi = 1.0;
    double spacing_lo = 0.0;
    double spacing_hi = 2.0;
};

void validate(const CalibrationSettings& s);

struct ColumnFit {
    int column = 0;             // time index i; fits the bond of maturity i+1
    double price_residual = 0;  // model root price minus market price, currency
    double vol_residual = 0;    // 0.5*ln(y_u/y_d) minus the target vol; 0 where no vol condition applies
    double log_spacing = 0;     // solved sigma_i; the column ratio is k_i = exp(2*sigma_i)
    int iterations = 0;         // objective evaluations spent on the column
};

// Deviation of a model node value from a published reference value, in
// whatever unit the compared table uses (percent for rates, currency for
// bond prices). Filled in by reference-table comparisons, empty otherwise.
struct NodeDeviation {
    int time = 0;
    int state = 0;
    double model_value = 0;
    double reference_value = 0;
    double deviation = 0;  // model_value - reference_value
};

struct CalibrationReport {
    std::vector<ColumnFit> columns;
    int total_iterations = 0;
    std::vector<NodeDeviation> reference_deviations;
};

std::string to_json(const CalibrationReport& report);

// Raised when a bracketing endpoint pair does not straddle the root or the
// iteration budget runs out; the message carries the column and residuals.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Calibrated {
    RateTree tree;
    CalibrationReport report;
};

// Fits a BDT tree to the curve: column 0 takes r_{0,1} = yields[0]; every
// later column i solves (base, spacing) so the (i+1)-maturity bond reprices
// at the root and 0.5*ln(y_u/y_d) = vols[i], with y_u, y_d the bond's
// annually-compounded yields at nodes (1,2) and (1,1). A zero target vol
// fixes the spacing at k=1 and solves the base alone.
Calibrated calibrate_bdt(const TermStructure& ts, const CalibrationSettings& settings = {});

// Same two conditions on a ZBDT tree: expectations run over the ZBDT
// transitions (ZIRP row pinned at x0), the vol condition still reads the
// regular nodes (1,2) and (1,1).
Calibrated calibrate_zbdt(const TermStructure& ts, const ZbdtParams& params,
                          const CalibrationSettings& settings = {});

}  // namespace zbdt
