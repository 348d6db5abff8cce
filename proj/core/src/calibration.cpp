#include "zbdt/calibration.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "zbdt/bond_pricing.hpp"

namespace zbdt {

namespace {

[[noreturn]] void solver_fail(int column, const char* what, const std::string& detail) {
    std::ostringstream os;
    os << "calibration of column " << column << " failed on the " << what << ": " << detail;
    throw CalibrationError(os.str());
}

// Bisection refined until the interval collapses at double resolution (or
// max_iter), returning the abscissa with the smallest |residual| seen.
// Endpoints must already straddle the root.
template <class F>
std::pair<double, double> refine(F&& f, double lo, double flo, double hi, double fhi,
                                 int max_iter, int& evals) {
    double best_x = lo;
    double best_f = std::abs(flo);
    if (std::abs(fhi) < best_f) {
        best_x = hi;
        best_f = std::abs(fhi);
    }
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        ++evals;
        if (std::abs(fm) < best_f) {
            best_x = mid;
            best_f = std::abs(fm);
        }
        if (fm == 0.0) break;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return {best_x, best_f};
}

// Outcome of fitting the column base rate at a fixed spacing. The bracket
// endpoint cases tell the outer solve which way its own residual points.
enum class BaseFit {
    ok,
    price_too_low,   // even base_lo over-discounts: model price < market everywhere
    price_too_high,  // even base_hi leaves the model price above the market
};

Calibrated calibrate(Model model, const TermStructure& ts, const ZbdtParams& params,
                     const CalibrationSettings& s) {
    validate(ts);
    validate(s);
    for (size_t i = 0; i < ts.yields.size(); ++i)
        if (!(ts.yields[i] > 0.0))
            throw std::invalid_argument("calibration requires positive yields; maturity " +
                                        std::to_string(i + 1) + " is not");

    const int n = ts.horizon();
    const double fv = ts.face_value;
    const double price_tol = s.price_tol_per_face * fv;

    RateTree tree(model, n, params);
    CalibrationReport report;

    tree.set_rate({0, 1}, ts.yields[0]);
    report.columns.push_back(ColumnFit{0, 0.0, 0.0, 0.0, 0});

    StatePrices pi_root(tree, {0, 1});
    pi_root.advance();
    std::optional<StatePrices> pi_d, pi_u;
    if (n >= 2) {
        pi_d.emplace(tree, NodeId{1, 1});
        pi_u.emplace(tree, NodeId{1, 2});
    }

    for (int i = 1; i < n; ++i) {
        const int m = i + 1;
        const double market = market_zc_price(ts, m);
        const double target_vol = ts.vols[static_cast<size_t>(m - 1)];
        int evals = 0;

        auto column_value = [&](const StatePrices& pi) {
            double v = 0.0;
            for (int j = tree.min_state(i); j <= tree.max_state(i); ++j)
                v += pi.at(j) * (fv / (1.0 + tree.rate(i, j)));
            return v;
        };
        auto vol_measure = [&] {
            const double y_u = annual_yield(column_value(*pi_u), fv, m - 1);
            const double y_d = annual_yield(column_value(*pi_d), fv, m - 1);
            return 0.5 * std::log(y_u / y_d);
        };
        auto solve_base = [&](double sigma) -> BaseFit {
            auto resid = [&](double base) {
                tree.set_column(i, base, sigma);
                return column_value(pi_root) - market;
            };
            const double flo = resid(s.base_lo);
            ++evals;
            if (std::abs(flo) > price_tol && flo < 0.0) return BaseFit::price_too_low;
            const double fhi = resid(s.base_hi);
            ++evals;
            if (std::abs(fhi) > price_tol && fhi > 0.0) return BaseFit::price_too_high;
            const auto [base, best] =
                refine(resid, s.base_lo, flo, s.base_hi, fhi, s.max_iterations, evals);
            resid(base);
            ++evals;
            if (best > price_tol) {
                std::ostringstream os;
                os << "price residual " << best << " above tolerance " << price_tol;
                solver_fail(i, "base rate", os.str());
            }
            return BaseFit::ok;
        };

        double sigma = 0.0;
        if (target_vol > 0.0) {
            // Infinite residuals stand in for spacings whose base bracket
            // cannot reprice the bond at all; the sign steers the bisection.
            auto resid = [&](double sg) -> double {
                switch (solve_base(sg)) {
                    case BaseFit::price_too_low: return std::numeric_limits<double>::infinity();
                    case BaseFit::price_too_high: return -std::numeric_limits<double>::infinity();
                    case BaseFit::ok: break;
                }
                return vol_measure() - target_vol;
            };
            const double g_lo = resid(s.spacing_lo);
            if (std::abs(g_lo) <= s.vol_tol) {
                sigma = s.spacing_lo;
            } else {
                const double g_hi = resid(s.spacing_hi);
                if (std::abs(g_hi) <= s.vol_tol) {
                    sigma = s.spacing_hi;
                } else if ((g_lo > 0.0) == (g_hi > 0.0)) {
                    std::ostringstream os;
                    os << "vol condition not bracketed on [" << s.spacing_lo << ", "
                       << s.spacing_hi << "], residuals " << g_lo << " and " << g_hi;
                    solver_fail(i, "spacing", os.str());
                } else {
                    const auto [sg, best] = refine(resid, s.spacing_lo, g_lo, s.spacing_hi, g_hi,
                                                   s.max_iterations, evals);
                    if (best > s.vol_tol) {
                        std::ostringstream os;
                        os << "vol residual " << best << " above tolerance " << s.vol_tol;
                        solver_fail(i, "spacing", os.str());
                    }
                    sigma = sg;
                }
            }
            resid(sigma);
        } else {
            switch (solve_base(0.0)) {
                case BaseFit::price_too_low:
                    solver_fail(i, "base rate", "bond price below market over the whole bracket");
                case BaseFit::price_too_high:
                    solver_fail(i, "base rate", "bond price above market over the whole bracket");
                case BaseFit::ok: break;
            }
        }

        ColumnFit fit;
        fit.column = i;
        fit.price_residual = column_value(pi_root) - market;
        fit.vol_residual = target_vol > 0.0 ? vol_measure() - target_vol : 0.0;
        fit.log_spacing = sigma;
        fit.iterations = evals;
        report.columns.push_back(fit);
        report.total_iterations += evals;

        pi_root.advance();
        pi_d->advance();
        pi_u->advance();
    }

    return Calibrated{std::move(tree), std::move(report)};
}

}  // namespace

void validate(const CalibrationSettings& s) {
    if (!(s.price_tol_per_face > 0.0)) throw std::invalid_argument("price tolerance must be > 0");
    if (!(s.vol_tol > 0.0)) throw std::invalid_argument("vol tolerance must be > 0");
    if (s.max_iterations < 1) throw std::invalid_argument("max iterations must be >= 1");
    if (!(s.base_lo > 0.0) || !(s.base_lo < s.base_hi))
        throw std::invalid_argument("base rate bracket must satisfy 0 < lo < hi");
    if (!(s.spacing_lo >= 0.0) || !(s.spacing_lo < s.spacing_hi))
        throw std::invalid_argument("spacing bracket must satisfy 0 <= lo < hi");
}

Calibrated calibrate_bdt(const TermStructure& ts, const CalibrationSettings& settings) {
    return calibrate(Model::bdt, ts, ZbdtParams{}, settings);
}

Calibrated calibrate_zbdt(const TermStructure& ts, const ZbdtParams& params,
                          const CalibrationSettings& settings) {
    return calibrate(Model::zbdt, ts, params, settings);
}

std::string to_json(const CalibrationReport& report) {
    nlohmann::json j;
    j["total_iterations"] = report.total_iterations;
    j["columns"] = nlohmann::json::array();
    for (const ColumnFit& c : report.columns) {
        j["columns"].push_back({{"column", c.column},
                                {"maturity", c.column + 1},
                                {"price_residual", c.price_residual},
                                {"vol_residual", c.vol_residual},
                                {"log_spacing", c.log_spacing},
                                {"spacing_ratio", std::exp(2.0 * c.log_spacing)},
                                {"iterations", c.iterations}});
    }
    if (!report.reference_deviations.empty()) {
        j["reference_deviations"] = nlohmann::json::array();
        for (const NodeDeviation& d : report.reference_deviations) {
            j["reference_deviations"].push_back({{"time", d.time},
                                                 {"state", d.state},
                                                 {"model", d.model_value},
                                                 {"reference", d.reference_value},
                                                 {"deviation", d.deviation}});
        }
    }
    return j.dump(2);
}

}  // namespace zbdt
