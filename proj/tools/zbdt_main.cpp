// Command-line front end: calibrate trees from term-structure CSVs, price
// single options, sweep strikes for prices or implied vols, and reproduce the
// two bundled scenarios against their embedded reference tables.
//
// Unit conventions at every file and flag boundary: rates and vols in
// percent, prices/strikes/barriers in currency. Decimals are internal only.
// All output is deterministic: fixed %.17g formatting, no time or locale
// dependence.
//
// Exit codes: 0 success, 2 validation error (bad flags, files, numbers),
// 3 solver failure, 4 semantically invalid option contract.

#include <CLI11.hpp>
#include <json.hpp>

#include "zbdt/bond_pricing.hpp"
#include "zbdt/calibration.hpp"
#include "zbdt/implied_vol.hpp"
#include "zbdt/lattice.hpp"
#include "zbdt/market_data.hpp"
#include "zbdt/oracle.hpp"
#include "zbdt/payoffs.hpp"
#include "zbdt/pricer.hpp"
#include "zbdt/reference_data.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

zbdt::TermStructure load_curve(const std::string& path, double face) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open curve file '" + path + "'");
    zbdt::TermStructure ts = zbdt::parse_term_structure(in);
    ts.face_value = face;
    zbdt::validate(ts);
    return ts;
}

zbdt::RateTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open tree file '" + path + "'");
    return zbdt::parse_rate_tree(in);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << text;
}

// Shared calibration inputs: a curve plus model selection, or a saved tree.
struct ModelArgs {
    std::string curve;
    std::string tree_file;
    std::string model = "bdt";
    double p = 0.0;
    double q = 0.0;
    double x0_pct = 0.0;
    double face = 100.0;

    void attach(CLI::App* cmd, bool allow_tree_file) {
        cmd->add_option("--curve", curve, "term-structure CSV (maturity_years,yield_pct,vol_pct)");
        cmd->add_option("--model", model, "bdt or zbdt")->capture_default_str();
        cmd->add_option("--p", p, "ZBDT entry probability into the ZIRP row");
        cmd->add_option("--q", q, "ZBDT exit probability out of the ZIRP row");
        cmd->add_option("--x0", x0_pct, "ZIRP rate, percent")->capture_default_str();
        cmd->add_option("--face", face, "bond face value, currency")->capture_default_str();
        if (allow_tree_file)
            cmd->add_option("--tree", tree_file, "saved rate-tree CSV (skips calibration)");
    }

    zbdt::ZbdtParams params() const { return {p, q, x0_pct / 100.0}; }

    zbdt::Calibrated calibrate() const {
        if (curve.empty()) throw std::invalid_argument("--curve is required");
        zbdt::TermStructure ts = load_curve(curve, face);
        if (zbdt::model_from_string(model) == zbdt::Model::bdt) return zbdt::calibrate_bdt(ts);
        return zbdt::calibrate_zbdt(ts, params());
    }

    zbdt::RateTree tree() const {
        if (!tree_file.empty()) return load_tree(tree_file);
        return calibrate().tree;
    }
};

// Option-contract flags shared by price, sweep and implied-vol.
struct SpecArgs {
    std::string style = "european";
    std::string kind = "call";
    std::string family = "vanilla";
    double strike = 0.0;
    int expiry = 1;
    int bond_maturity = 0;  // 0 = the tree horizon
    std::optional<double> hi;
    std::optional<double> lo;

    void attach(CLI::App* cmd, bool with_strike) {
        cmd->add_option("--style", style, "european or american")->capture_default_str();
        cmd->add_option("--kind", kind, "call or put")->capture_default_str();
        cmd->add_option("--family", family,
                        "vanilla, up-in, up-out, down-in, down-out, double-in, double-out")
            ->capture_default_str();
        if (with_strike) cmd->add_option("--strike", strike, "strike, currency");
        cmd->add_option("--expiry", expiry, "option expiry S, periods")->capture_default_str();
        cmd->add_option("--bond-maturity", bond_maturity,
                        "underlying bond maturity T, periods (default: tree horizon)");
        cmd->add_option("--hi", hi, "upper barrier H+, currency");
        cmd->add_option("--lo", lo, "lower barrier H-, currency");
    }

    zbdt::OptionSpec spec(const zbdt::RateTree& tree) const {
        zbdt::OptionSpec s;
        s.style = zbdt::style_from_string(style);
        s.kind = zbdt::kind_from_string(kind);
        s.family = zbdt::family_from_string(family);
        s.strike = strike;
        s.expiry = expiry;
        s.bond_maturity = bond_maturity > 0 ? bond_maturity : tree.horizon();
        s.barrier_hi = hi;
        s.barrier_lo = lo;
        return s;
    }
};

std::string bond_tree_csv(const zbdt::ValueLattice& bonds) {
    std::ostringstream os;
    os << "time,state,value\n";
    for (int t = 0; t <= bonds.last_time(); ++t)
        for (int s = bonds.min_state(t); s <= bonds.max_state(t); ++s)
            os << t << ',' << s << ',' << fmt(bonds.at(t, s)) << '\n';
    return os.str();
}

int cmd_calibrate(const ModelArgs& margs, int bond_maturity, const std::string& out) {
    zbdt::Calibrated cal = margs.calibrate();
    std::string tree_csv = zbdt::serialize_rate_tree(cal.tree);
    std::string report_json = zbdt::to_json(cal.report) + "\n";
    std::string bond_csv;
    if (bond_maturity > 0)
        bond_csv = bond_tree_csv(zbdt::zc_bond_lattice(cal.tree, bond_maturity, margs.face));

    if (out == "-") {
        std::cout << tree_csv << bond_csv << report_json;
        return 0;
    }
    std::filesystem::create_directories(out);
    write_text(out + "/rate_tree.csv", tree_csv);
    if (bond_maturity > 0) write_text(out + "/bond_tree.csv", bond_csv);
    write_text(out + "/report.json", report_json);
    return 0;
}

int cmd_price(const ModelArgs& margs, const SpecArgs& sargs, bool lattice,
              const std::string& out) {
    zbdt::RateTree tree = margs.tree();
    zbdt::OptionSpec spec = sargs.spec(tree);
    zbdt::PriceResult res = zbdt::price(tree, spec, margs.face);
    nlohmann::json j = nlohmann::json::parse(zbdt::to_json(res, spec));
    if (!lattice) j.erase("layers");
    write_text(out, j.dump(2) + "\n");
    return 0;
}

std::vector<double> strike_grid(double k_min, double k_max, double k_step) {
    if (!(k_step > 0.0) || !(k_max >= k_min))
        throw std::invalid_argument("empty strike grid: need --k-step > 0 and --k-max >= --k-min");
    std::vector<double> ks;
    int n = static_cast<int>(std::floor((k_max - k_min) / k_step + 1e-9));
    for (int i = 0; i <= n; ++i) ks.push_back(k_min + i * k_step);
    return ks;
}

// Black-implied vol of the European price at strike k; puts are converted to
// call prices through parity before inversion. Returns percent, NaN when no
// sigma can reach the price.
double implied_vol_pct(const zbdt::RateTree& tree, const zbdt::OptionSpec& spec, double face) {
    if (spec.style != zbdt::Style::european)
        throw zbdt::SpecError("implied vol is defined for European options only");
    if (spec.family != zbdt::Family::vanilla)
        throw zbdt::SpecError("implied vol is defined for vanilla options only");
    double b_t = zbdt::zc_bond_price(tree, spec.bond_maturity, face);
    double b_s = zbdt::zc_bond_price(tree, spec.expiry, face);
    double call = zbdt::price(tree, spec, face).value;
    if (spec.kind == zbdt::Kind::put) {
        call += b_t - spec.strike / face * b_s;
        if (call < 0.0) call = 0.0;  // parity noise guard for worthless calls
    }
    zbdt::BlackInputs in{b_t, b_s, spec.strike, static_cast<double>(spec.expiry), 0.0, face};
    std::optional<double> sigma = zbdt::implied_vol(call, in);
    return sigma ? *sigma * 100.0 : std::nan("");
}

int cmd_sweep(const ModelArgs& margs, const SpecArgs& sargs, double k_min, double k_max,
              double k_step, bool compare, bool vols, const std::string& out) {
    std::vector<double> ks = strike_grid(k_min, k_max, k_step);
    std::ostringstream os;
    auto value_at = [&](const zbdt::RateTree& tree, double k) {
        zbdt::OptionSpec spec = sargs.spec(tree);
        spec.strike = k;
        return vols ? implied_vol_pct(tree, spec, margs.face)
                    : zbdt::price(tree, spec, margs.face).value;
    };
    if (compare) {
        if (margs.curve.empty()) throw std::invalid_argument("--compare requires --curve");
        zbdt::TermStructure ts = load_curve(margs.curve, margs.face);
        zbdt::RateTree bdt = zbdt::calibrate_bdt(ts).tree;
        zbdt::RateTree zbdt_tree = zbdt::calibrate_zbdt(ts, margs.params()).tree;
        os << (vols ? "K,sigma_bdt,sigma_zbdt" : "K,price_bdt,price_zbdt") << '\n';
        for (double k : ks)
            os << fmt(k) << ',' << fmt(value_at(bdt, k)) << ',' << fmt(value_at(zbdt_tree, k))
               << '\n';
    } else {
        zbdt::RateTree tree = margs.tree();
        os << (vols ? "K,sigma_pct" : "K,price") << '\n';
        for (double k : ks) os << fmt(k) << ',' << fmt(value_at(tree, k)) << '\n';
    }
    write_text(out, os.str());
    return 0;
}

void append_table_report(std::ostream& os, const zbdt::ReferenceTable& table,
                         const std::vector<zbdt::NodeDeviation>& devs) {
    os << zbdt::format_deviation_report(table, devs) << '\n';
}

int cmd_reproduce(const std::string& which, const std::string& out) {
    std::ostringstream os;
    for (const zbdt::ReferenceCase* c : zbdt::all_cases()) {
        if (which != "all" && which != c->name) continue;
        int horizon = c->curve.horizon();
        zbdt::Calibrated bdt = zbdt::calibrate_bdt(c->curve);
        zbdt::Calibrated zb = zbdt::calibrate_zbdt(c->curve, c->zbdt_params);
        os << "case " << c->name << "\n\n";
        append_table_report(os, c->bdt_rates_pct,
                            zbdt::rate_deviations(bdt.tree, c->bdt_rates_pct));
        append_table_report(
            os, c->bdt_bond_prices,
            zbdt::bond_deviations(zbdt::zc_bond_lattice(bdt.tree, horizon, c->curve.face_value),
                                  c->bdt_bond_prices));
        append_table_report(os, c->zbdt_rates_pct,
                            zbdt::rate_deviations(zb.tree, c->zbdt_rates_pct));
        append_table_report(
            os, c->zbdt_bond_prices,
            zbdt::bond_deviations(zbdt::zc_bond_lattice(zb.tree, horizon, c->curve.face_value),
                                  c->zbdt_bond_prices));
        for (const auto& [label, tree] : {std::pair<const char*, const zbdt::RateTree&>{
                                              "bdt", bdt.tree},
                                          {"zbdt", zb.tree}}) {
            double worst = 0.0;
            for (int m = 1; m <= horizon; ++m)
                worst = std::max(worst,
                                 std::abs(zbdt::zc_bond_price(tree, m, c->curve.face_value) -
                                          zbdt::market_zc_price(c->curve, m)));
            os << label << " repricing: max abs residual " << fmt(worst) << " over maturities 1.."
               << horizon << "\n";
        }
        os << '\n';
    }
    if (os.str().empty())
        throw std::invalid_argument("unknown case '" + which + "', expected example, real-case or all");
    write_text(out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"term-structure lattice engine: BDT and ZBDT calibration and option pricing"};
    app.require_subcommand(1);

    ModelArgs cal_m, price_m, sweep_m, iv_m;
    SpecArgs price_s, sweep_s, iv_s;
    std::string cal_out = "-", price_out = "-", sweep_out = "-", iv_out = "-", repro_out = "-";
    int cal_bond_maturity = 0;
    bool price_lattice = false;
    double sweep_kmin = 0, sweep_kmax = 0, sweep_kstep = 1, iv_kmin = 0, iv_kmax = 0, iv_kstep = 1;
    bool sweep_compare = false, iv_compare = false;
    std::string repro_case = "all";

    CLI::App* cal = app.add_subcommand("calibrate", "fit a rate tree to a term-structure CSV");
    cal_m.attach(cal, false);
    cal->add_option("--bond-maturity", cal_bond_maturity,
                    "also write the zc-bond lattice of this maturity");
    cal->add_option("--out", cal_out, "output directory, or - for stdout")->capture_default_str();

    CLI::App* pr = app.add_subcommand("price", "price one option on a zc-bond");
    price_m.attach(pr, true);
    price_s.attach(pr, true);
    pr->add_flag("--lattice", price_lattice, "include the per-layer value lattices");
    pr->add_option("--out", price_out, "output file, or - for stdout")->capture_default_str();

    CLI::App* sw = app.add_subcommand("sweep", "price a strike grid, CSV output");
    sweep_m.attach(sw, true);
    sweep_s.attach(sw, false);
    sw->add_option("--k-min", sweep_kmin, "lowest strike")->required();
    sw->add_option("--k-max", sweep_kmax, "highest strike")->required();
    sw->add_option("--k-step", sweep_kstep, "strike increment")->capture_default_str();
    sw->add_flag("--compare", sweep_compare, "run both models, one column each");
    sw->add_option("--out", sweep_out, "output file, or - for stdout")->capture_default_str();

    CLI::App* iv = app.add_subcommand("implied-vol", "Black-implied vols over a strike grid, CSV");
    iv_m.attach(iv, true);
    iv_s.attach(iv, false);
    iv->add_option("--k-min", iv_kmin, "lowest strike")->required();
    iv->add_option("--k-max", iv_kmax, "highest strike")->required();
    iv->add_option("--k-step", iv_kstep, "strike increment")->capture_default_str();
    iv->add_flag("--compare", iv_compare, "run both models, one column each");
    iv->add_option("--out", iv_out, "output file, or - for stdout")->capture_default_str();

    CLI::App* rep = app.add_subcommand(
        "reproduce", "calibrate the bundled scenarios and report deviations from their reference tables");
    rep->add_option("--case", repro_case, "example, real-case or all")->capture_default_str();
    rep->add_option("--out", repro_out, "output file, or - for stdout")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (cal->parsed()) return cmd_calibrate(cal_m, cal_bond_maturity, cal_out);
        if (pr->parsed()) return cmd_price(price_m, price_s, price_lattice, price_out);
        if (sw->parsed())
            return cmd_sweep(sweep_m, sweep_s, sweep_kmin, sweep_kmax, sweep_kstep, sweep_compare,
                             false, sweep_out);
        if (iv->parsed())
            return cmd_sweep(iv_m, iv_s, iv_kmin, iv_kmax, iv_kstep, iv_compare, true, iv_out);
        if (rep->parsed()) return cmd_reproduce(repro_case, repro_out);
    } catch (const zbdt::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 4;
    } catch (const zbdt::CalibrationError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
