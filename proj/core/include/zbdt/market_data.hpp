#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zbdt {

/// Market term structure: annually compounded zero-coupon yields and yield
/// log-volatilities at integer maturities 1..T, plus the bond face value.
///
/// Units: yields and vols are decimal fractions internally (0.026 = 2.6%).
/// File and flag boundaries use percent; see parse/serialize below.
///
/// The volatility for maturity 1 is carried but unused by calibration: the
/// root rate is pinned by the 1-year yield alone.
struct TermStructure {
    std::vector<double> yields;  // yields[m-1] = yield for maturity m
    std::vector<double> vols;    // vols[m-1]   = yield log-vol for maturity m
    double face_value = 100.0;

    int horizon() const { return static_cast<int>(yields.size()); }
};

/// Throws std::invalid_argument if the structure violates its invariants
/// (empty, mismatched lengths, negative vol, non-positive face value).
/// Yields may be zero or negative; calibration imposes positivity separately.
void validate(const TermStructure& ts);

/// Market price of the zero-coupon bond maturing in `maturity` years:
/// FV / (1 + y_m)^m, annual discrete compounding, one period = one year.
/// Throws std::out_of_range unless 1 <= maturity <= T.
double market_zc_price(const TermStructure& ts, int maturity);

struct ParseOptions {
    // Negative yields are accepted by default (negative-rate regimes exist);
    // set to reject them at parse time.
    bool reject_negative_yields = false;
};

/// Reads a term-structure CSV:
///
///     maturity_years,yield_pct,vol_pct
///     1,2.60,40.0
///     ...
///
/// Percentages in the file, decimal fractions in the result. Lines starting
/// with '#' and blank lines are ignored; a UTF-8 BOM is tolerated.
/// Maturities must be consecutive integers starting at 1.
/// Errors are reported via std::invalid_argument with the offending line number.
TermStructure parse_term_structure(std::istream& in, const ParseOptions& opts = {});
TermStructure parse_term_structure(const std::string& text, const ParseOptions& opts = {});

/// Inverse of parse_term_structure: writes the header and one row per
/// maturity, percentages at full precision (round-trips exactly).
void serialize_term_structure(std::ostream& out, const TermStructure& ts);
std::string serialize_term_structure(const TermStructure& ts);

}  // namespace zbdt
