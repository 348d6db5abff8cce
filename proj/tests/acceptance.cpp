// Acceptance gate: the eight published-result criteria, one pass/fail line
// each, tolerances pinned below. Run with no arguments for the full gate or
// with a single criterion number. Exit code 0 iff every executed criterion
// passed.

#include "zbdt/bond_pricing.hpp"
#include "zbdt/calibration.hpp"
#include "zbdt/implied_vol.hpp"
#include "zbdt/market_data.hpp"
#include "zbdt/oracle.hpp"
#include "zbdt/payoffs.hpp"
#include "zbdt/pricer.hpp"
#include "zbdt/reference_data.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace zbdt;

namespace {

// pinned tolerances
constexpr double kRateTolPp = 0.03;        // rate-tree entries vs published, percentage points
constexpr double kBondTol = 0.05;          // bond-tree entries vs published, currency
constexpr double kRootTol = 0.01;          // root bond price vs published, currency
constexpr double kRepriceTolPerFace = 1e-9;   // ZBDT repricing residual per unit face
constexpr double kZbdtCol1TolPp = 0.05;    // ZBDT real-case column 1, percentage points
constexpr double kOracleTol = 1e-10;       // lattice vs path-enumeration oracle, currency
constexpr double kParityTol = 1e-12;       // European in-out parity and ordering slack, currency
constexpr double kMartingaleTol = 1e-12;   // state-price vs lattice identity, currency
constexpr double kIvRoundtripTol = 1e-8;   // Black round-trip, absolute sigma
constexpr double kIvParityTol = 1e-12;     // Black put-call parity, currency

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

const RateTree& tree_of(const ReferenceCase& c, Model model) {
    // node-based map keeps earlier references valid across later insertions
    static std::map<std::string, RateTree> cache;
    std::string key = c.name + "/" + to_string(model);
    auto it = cache.find(key);
    if (it == cache.end()) {
        RateTree tree = model == Model::bdt ? calibrate_bdt(c.curve).tree
                                            : calibrate_zbdt(c.curve, c.zbdt_params).tree;
        it = cache.emplace(key, std::move(tree)).first;
    }
    return it->second;
}

OptionSpec make_spec(Style style, Kind kind, Family family, double strike, int expiry,
                     int bond_maturity, double hi, double lo) {
    OptionSpec s;
    s.style = style;
    s.kind = kind;
    s.family = family;
    s.strike = strike;
    s.expiry = expiry;
    s.bond_maturity = bond_maturity;
    if (uses_up_barrier(family)) s.barrier_hi = hi;
    if (uses_down_barrier(family)) s.barrier_lo = lo;
    return s;
}

constexpr Family kFamilies[] = {Family::vanilla,  Family::up_in,     Family::up_out,
                                Family::down_in,  Family::down_out,  Family::double_in,
                                Family::double_out};

// criterion 1/2 shared body: calibrated BDT tree vs the published tables
Outcome bdt_reproduction(const ReferenceCase& c) {
    const RateTree& tree = tree_of(c, Model::bdt);
    auto rdevs = rate_deviations(tree, c.bdt_rates_pct);
    ValueLattice bonds = zc_bond_lattice(tree, c.curve.horizon(), c.curve.face_value);
    auto bdevs = bond_deviations(bonds, c.bdt_bond_prices);

    int rate_over = 0, bond_over = 0;
    for (const auto& d : rdevs) rate_over += std::abs(d.deviation) > kRateTolPp;
    for (const auto& d : bdevs) bond_over += std::abs(d.deviation) > kBondTol;
    double root_dev = std::abs(bonds.at(0, 1) - c.bdt_bond_prices.nodes.front().value);

    Outcome o;
    o.pass = rate_over == 0 && bond_over == 0 && root_dev <= kRootTol;
    std::ostringstream os;
    os << "rates max |dev| " << fmt(max_abs_deviation(rdevs), "%.4f") << " pp (" << rate_over << "/"
       << rdevs.size() << " nodes > " << fmt(kRateTolPp, "%.2f") << "); bonds max |dev| "
       << fmt(max_abs_deviation(bdevs), "%.4f") << " (" << bond_over << "/" << bdevs.size()
       << " > " << fmt(kBondTol, "%.2f") << "); root " << fmt(bonds.at(0, 1), "%.4f") << " (|dev| "
       << fmt(root_dev, "%.4f") << " vs " << fmt(kRootTol, "%.2f") << ")";
    o.detail = os.str();
    return o;
}

Outcome criterion1() { return bdt_reproduction(example_case()); }
Outcome criterion2() { return bdt_reproduction(real_case()); }

Outcome criterion3() {
    Outcome o;
    std::ostringstream os;
    for (const ReferenceCase* c : all_cases()) {
        const RateTree& tree = tree_of(*c, Model::zbdt);
        double worst = 0.0;
        for (int m = 1; m <= c->curve.horizon(); ++m)
            worst = std::max(worst, std::abs(zc_bond_price(tree, m, c->curve.face_value) -
                                             market_zc_price(c->curve, m)));
        double root = zc_bond_price(tree, c->curve.horizon(), c->curve.face_value);
        double root_dev = std::abs(root - c->zbdt_bond_prices.nodes.front().value);
        bool ok = worst <= kRepriceTolPerFace * c->curve.face_value && root_dev <= kRootTol;
        o.pass = o.pass && ok;
        os << c->name << ": max residual " << fmt(worst) << " (tol "
           << fmt(kRepriceTolPerFace * c->curve.face_value) << "), root " << fmt(root, "%.4f")
           << " (|dev| " << fmt(root_dev, "%.4f") << "); ";
    }
    o.detail = os.str();
    return o;
}

Outcome criterion4() {
    const ReferenceCase& re = real_case();
    const RateTree& tree = tree_of(re, Model::zbdt);
    double r11 = tree.rate(1, 1) * 100.0, r12 = tree.rate(1, 2) * 100.0;
    double ref11 = 0.0, ref12 = 0.0;
    for (const ReferenceNode& n : re.zbdt_rates_pct.nodes) {
        if (n.time == 1 && n.state == 1) ref11 = n.value;
        if (n.time == 1 && n.state == 2) ref12 = n.value;
    }
    Outcome o;
    o.pass = std::abs(r11 - ref11) <= kZbdtCol1TolPp && std::abs(r12 - ref12) <= kZbdtCol1TolPp;
    o.detail = "column 1 (" + fmt(r11, "%.4f") + ", " + fmt(r12, "%.4f") + ") vs (" +
               fmt(ref11, "%.2f") + ", " + fmt(ref12, "%.2f") + ") pp, tol " +
               fmt(kZbdtCol1TolPp, "%.2f") + "; interiors reported, not asserted";

    // the full interior comparison is informational by contract
    for (const ReferenceCase* c : all_cases()) {
        const RateTree& zb = tree_of(*c, Model::zbdt);
        std::cout << "  deviation report (" << c->name << ", not asserted):\n";
        auto rd = rate_deviations(zb, c->zbdt_rates_pct);
        auto bd = bond_deviations(zc_bond_lattice(zb, c->curve.horizon(), c->curve.face_value),
                                  c->zbdt_bond_prices);
        std::cout << "    " << c->zbdt_rates_pct.label << ": max |dev| "
                  << fmt(max_abs_deviation(rd), "%.4f") << " pp over " << rd.size() << " nodes\n";
        std::cout << "    " << c->zbdt_bond_prices.label << ": max |dev| "
                  << fmt(max_abs_deviation(bd), "%.4f") << " over " << bd.size() << " nodes\n";
    }
    return o;
}

Outcome criterion5() {
    const ReferenceCase& ex = example_case();
    const RateTree& bdt = tree_of(ex, Model::bdt);
    const RateTree& zb = tree_of(ex, Model::zbdt);
    OptionSpec call =
        make_spec(Style::european, Kind::call, Family::vanilla, 90.0, 2, 10, 0, 0);
    double bdt_price = price(bdt, call).value;
    double zbdt_price = price(zb, call).value;

    BlackInputs in;
    in.underlying_bond = market_zc_price(ex.curve, 10);
    in.expiry_bond = market_zc_price(ex.curve, 2);
    in.strike = 90.0;
    in.time_to_expiry = 2.0;
    auto iv = implied_vol(bdt_price, in);

    Outcome o;
    o.pass = bdt_price == 0.0 && iv.has_value() && *iv == 0.0 && zbdt_price > 0.0;
    o.detail = "BDT price " + fmt(bdt_price) + " (exact zero required), implied vol " +
               (iv ? fmt(*iv) : std::string("none")) + ", ZBDT price " + fmt(zbdt_price) + " > 0";
    return o;
}

Outcome criterion6() {
    const ReferenceCase& ex = example_case();
    double worst = 0.0;
    int combos = 0;
    for (Model model : {Model::bdt, Model::zbdt}) {
        const RateTree& tree = tree_of(ex, model);
        for (Style style : {Style::european, Style::american})
            for (Kind kind : {Kind::call, Kind::put})
                for (Family family : kFamilies)
                    for (double strike : {70.0, 85.0, 95.0})
                        for (int expiry : {2, 3, 4, 5}) {
                            OptionSpec s = make_spec(style, kind, family, strike, expiry, 10,
                                                     90.0, 70.0);
                            worst = std::max(
                                worst, std::abs(price(tree, s).value - oracle_price(tree, s)));
                            ++combos;
                        }
    }
    Outcome o;
    o.pass = worst <= kOracleTol;
    o.detail = "max |lattice - oracle| " + fmt(worst) + " over " + std::to_string(combos) +
               " contracts (tol " + fmt(kOracleTol) + ")";
    return o;
}

Outcome criterion7() {
    const ReferenceCase& ex = example_case();
    std::ostringstream os;
    bool pass = true;

    // European in-out parity per family pair
    double parity_worst = 0.0;
    for (Model model : {Model::bdt, Model::zbdt}) {
        const RateTree& tree = tree_of(ex, model);
        for (Kind kind : {Kind::call, Kind::put})
            for (double strike : {70.0, 85.0, 95.0})
                for (int expiry : {2, 5}) {
                    double vanilla = price(tree, make_spec(Style::european, kind, Family::vanilla,
                                                           strike, expiry, 10, 90, 70))
                                         .value;
                    for (auto [fin, fout] : {std::pair{Family::up_in, Family::up_out},
                                             std::pair{Family::down_in, Family::down_out},
                                             std::pair{Family::double_in, Family::double_out}}) {
                        double in = price(tree, make_spec(Style::european, kind, fin, strike,
                                                          expiry, 10, 90, 70))
                                        .value;
                        double out = price(tree, make_spec(Style::european, kind, fout, strike,
                                                           expiry, 10, 90, 70))
                                         .value;
                        parity_worst = std::max(parity_worst, std::abs(in + out - vanilla));
                    }
                }
    }
    pass = pass && parity_worst < kParityTol;
    os << "in-out parity max " << fmt(parity_worst) << "; ";

    // American >= European, knock-out <= vanilla, strike monotonicity
    bool order_ok = true, ko_ok = true, mono_ok = true;
    for (Model model : {Model::bdt, Model::zbdt}) {
        const RateTree& tree = tree_of(ex, model);
        for (Kind kind : {Kind::call, Kind::put}) {
            for (Family family : kFamilies)
                for (double strike : {70.0, 85.0, 95.0}) {
                    double eu = price(tree, make_spec(Style::european, kind, family, strike, 5, 10,
                                                      90, 70))
                                    .value;
                    double am = price(tree, make_spec(Style::american, kind, family, strike, 5, 10,
                                                      90, 70))
                                    .value;
                    order_ok = order_ok && am >= eu - kParityTol;
                }
            for (Family out_family : {Family::up_out, Family::down_out, Family::double_out})
                for (Style style : {Style::european, Style::american})
                    for (double strike : {70.0, 85.0, 95.0}) {
                        double vanilla = price(tree, make_spec(style, kind, Family::vanilla,
                                                               strike, 5, 10, 90, 70))
                                             .value;
                        double ko = price(tree, make_spec(style, kind, out_family, strike, 5, 10,
                                                          90, 70))
                                        .value;
                        ko_ok = ko_ok && ko <= vanilla + kParityTol;
                    }
            for (Style style : {Style::european, Style::american}) {
                double last_put = -1.0, last_call = 1e300;
                for (int i = 0; i <= 40; ++i) {  // 41-point strike grid
                    double strike = 60.0 + i;
                    double put = price(tree, make_spec(style, Kind::put, Family::vanilla, strike,
                                                       5, 10, 0, 0))
                                     .value;
                    double call = price(tree, make_spec(style, Kind::call, Family::vanilla, strike,
                                                        5, 10, 0, 0))
                                      .value;
                    mono_ok = mono_ok && put >= last_put - kParityTol &&
                              call <= last_call + kParityTol;
                    last_put = put;
                    last_call = call;
                }
            }
        }
    }
    pass = pass && order_ok && ko_ok && mono_ok;
    os << "am>=eu " << (order_ok ? "ok" : "violated") << "; ko<=vanilla "
       << (ko_ok ? "ok" : "violated") << "; strike monotone " << (mono_ok ? "ok" : "violated")
       << "; ";

    // probability conservation at every node, exactly
    bool prob_ok = true;
    for (const ReferenceCase* c : all_cases())
        for (Model model : {Model::bdt, Model::zbdt}) {
            const RateTree& tree = tree_of(*c, model);
            for (int t = 0; t < tree.horizon(); ++t)
                for (NodeId n : tree.states(t)) {
                    double sum = 0.0;
                    for (const Transition& tr : tree.children(n)) sum += tr.prob;
                    prob_ok = prob_ok && sum == 1.0;
                }
        }
    pass = pass && prob_ok;
    os << "probability sums " << (prob_ok ? "exact" : "violated") << "; ";

    // martingale identity: state prices against the bond lattice
    double mart_worst = 0.0;
    for (const ReferenceCase* c : all_cases())
        for (Model model : {Model::bdt, Model::zbdt}) {
            const RateTree& tree = tree_of(*c, model);
            ValueLattice bonds = zc_bond_lattice(tree, tree.horizon(), c->curve.face_value);
            StatePrices pi(tree, {0, 1});
            for (int t = 0; t <= tree.horizon(); ++t) {
                double sum = 0.0;
                for (NodeId n : tree.states(t)) sum += pi.at(n.state) * bonds.at(n);
                mart_worst = std::max(mart_worst, std::abs(sum - bonds.at(0, 1)));
                if (t < tree.horizon()) pi.advance();
            }
        }
    pass = pass && mart_worst <= kMartingaleTol;
    os << "martingale max " << fmt(mart_worst) << "; ";

    // ZBDT with p = 0 collapses onto BDT exactly
    bool collapse_ok = true;
    RateTree zb0 = calibrate_zbdt(ex.curve, {0.0, ex.zbdt_params.q, ex.zbdt_params.x0}).tree;
    const RateTree& bdt = tree_of(ex, Model::bdt);
    for (int t = 0; t < 10; ++t)
        for (int j = 1; j <= t + 1; ++j) collapse_ok = collapse_ok && zb0.rate(t, j) == bdt.rate(t, j);
    ValueLattice b0 = zc_bond_lattice(zb0, 10, 100.0), b1 = zc_bond_lattice(bdt, 10, 100.0);
    for (int t = 0; t <= 10; ++t)
        for (int j = 1; j <= t + 1; ++j) collapse_ok = collapse_ok && b0.at(t, j) == b1.at(t, j);
    for (Style style : {Style::european, Style::american})
        for (Family family : {Family::vanilla, Family::double_out}) {
            OptionSpec s = make_spec(style, Kind::put, family, 85, 5, 10, 90, 70);
            collapse_ok = collapse_ok && price(zb0, s).value == price(bdt, s).value;
        }
    pass = pass && collapse_ok;
    os << "p=0 collapse " << (collapse_ok ? "exact" : "violated");

    return {pass, os.str()};
}

Outcome criterion8() {
    const ReferenceCase& ex = example_case();
    std::ostringstream os;
    bool pass = true;

    BlackInputs in;
    in.underlying_bond = market_zc_price(ex.curve, 10);
    in.expiry_bond = market_zc_price(ex.curve, 5);
    in.time_to_expiry = 5.0;

    // round-trip at the forward at-the-money strike, where vega is positive
    // over the whole grid
    in.strike = 82.0;
    double rt_worst = 0.0;
    for (int i = 0; i <= 30; ++i) {
        double sigma = 0.01 + i * (3.0 - 0.01) / 30.0;
        in.sigma = sigma;
        auto back = implied_vol(black_call(in), in);
        rt_worst = std::max(rt_worst, back ? std::abs(*back - sigma) : 1e300);
    }
    pass = pass && rt_worst < kIvRoundtripTol;
    os << "round-trip max " << fmt(rt_worst) << "; ";

    double parity_worst = 0.0;
    for (double strike : {70.0, 82.0, 95.0})
        for (double sigma : {0.05, 0.4, 1.5}) {
            in.strike = strike;
            in.sigma = sigma;
            double lhs = black_call(in) - black_put(in);
            double rhs = in.underlying_bond - strike / 100.0 * in.expiry_bond;
            parity_worst = std::max(parity_worst, std::abs(lhs - rhs));
        }
    pass = pass && parity_worst < kIvParityTol;
    os << "put-call parity max " << fmt(parity_worst) << "; ";

    in.strike = 95.0;
    in.sigma = 0.0;
    bool zero_ok = implied_vol(0.0, in) == 0.0;
    in.strike = 70.0;
    zero_ok = zero_ok && implied_vol(black_call(in), in) == 0.0;
    pass = pass && zero_ok;
    os << "zero convention " << (zero_ok ? "ok" : "violated") << "; ";

    // model smile ordering at S = 5
    bool order_ok = true;
    std::string ivs;
    for (double strike : {85.0, 90.0, 95.0}) {
        double sig[2];
        for (Model model : {Model::bdt, Model::zbdt}) {
            const RateTree& tree = tree_of(ex, model);
            OptionSpec s = make_spec(Style::european, Kind::call, Family::vanilla, strike, 5, 10,
                                     0, 0);
            in.strike = strike;
            in.sigma = 0.0;
            auto iv = implied_vol(price(tree, s).value, in);
            sig[model == Model::zbdt] = iv ? *iv : -1.0;
        }
        order_ok = order_ok && sig[0] >= 0.0 && sig[1] >= 0.0 && sig[1] >= sig[0];
        ivs += "K=" + fmt(strike, "%.0f") + ": " + fmt(sig[0], "%.4f") + "<=" + fmt(sig[1], "%.4f") +
               " ";
    }
    pass = pass && order_ok;
    os << "sigma_zbdt >= sigma_bdt " << (order_ok ? "ok" : "violated") << " (" << ivs << ")";

    return {pass, os.str()};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "example BDT reproduction", criterion1},
    {2, "real-case BDT reproduction", criterion2},
    {3, "ZBDT repricing exactness", criterion3},
    {4, "ZBDT real-case column 1", criterion4},
    {5, "worthless-call discriminator", criterion5},
    {6, "oracle equivalence", criterion6},
    {7, "property suite", criterion7},
    {8, "implied-vol suite", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc == 2) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 8) {
            std::cerr << "usage: acceptance [criterion 1..8]\n";
            return 2;
        }
    } else if (argc > 2) {
        std::cerr << "usage: acceptance [criterion 1..8]\n";
        return 2;
    }

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL")
                  << " - " << o.detail << "\n";
    }
    return failures == 0 ? 0 : 1;
}
