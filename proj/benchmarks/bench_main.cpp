// Calibration and pricing benchmarks over the bundled 10-year scenario.

#include <benchmark/benchmark.h>

#include "zbdt/calibration.hpp"
#include "zbdt/implied_vol.hpp"
#include "zbdt/market_data.hpp"
#include "zbdt/oracle.hpp"
#include "zbdt/pricer.hpp"
#include "zbdt/reference_data.hpp"

namespace {

using namespace zbdt;

const RateTree& example_tree(Model model) {
    static const RateTree bdt = calibrate_bdt(example_case().curve).tree;
    static const RateTree zb =
        calibrate_zbdt(example_case().curve, example_case().zbdt_params).tree;
    return model == Model::bdt ? bdt : zb;
}

OptionSpec put_spec(Style style, Family family) {
    OptionSpec s;
    s.style = style;
    s.kind = Kind::put;
    s.family = family;
    s.strike = 85.0;
    s.expiry = 5;
    s.bond_maturity = 10;
    if (uses_up_barrier(family)) s.barrier_hi = 90.0;
    if (uses_down_barrier(family)) s.barrier_lo = 70.0;
    return s;
}

void BM_CalibrateBdt(benchmark::State& state) {
    const TermStructure& ts = example_case().curve;
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_bdt(ts).tree.rate(9, 10));
}
BENCHMARK(BM_CalibrateBdt);

void BM_CalibrateZbdt(benchmark::State& state) {
    const TermStructure& ts = example_case().curve;
    const ZbdtParams& params = example_case().zbdt_params;
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_zbdt(ts, params).tree.rate(9, 10));
}
BENCHMARK(BM_CalibrateZbdt);

void BM_PriceEuropeanVanilla(benchmark::State& state) {
    const RateTree& tree = example_tree(Model::zbdt);
    OptionSpec s = put_spec(Style::european, Family::vanilla);
    for (auto _ : state) benchmark::DoNotOptimize(price(tree, s).value);
}
BENCHMARK(BM_PriceEuropeanVanilla);

void BM_PriceAmericanDoubleOut(benchmark::State& state) {
    const RateTree& tree = example_tree(Model::zbdt);
    OptionSpec s = put_spec(Style::american, Family::double_out);
    for (auto _ : state) benchmark::DoNotOptimize(price(tree, s).value);
}
BENCHMARK(BM_PriceAmericanDoubleOut);

void BM_OracleAmericanDoubleOut(benchmark::State& state) {
    const RateTree& tree = example_tree(Model::zbdt);
    OptionSpec s = put_spec(Style::american, Family::double_out);
    for (auto _ : state) benchmark::DoNotOptimize(oracle_price(tree, s));
}
BENCHMARK(BM_OracleAmericanDoubleOut);

void BM_ImpliedVol(benchmark::State& state) {
    BlackInputs in;
    in.underlying_bond = market_zc_price(example_case().curve, 10);
    in.expiry_bond = market_zc_price(example_case().curve, 5);
    in.strike = 82.0;
    in.time_to_expiry = 5.0;
    in.sigma = 0.35;
    double target = black_call(in);
    for (auto _ : state) benchmark::DoNotOptimize(implied_vol(target, in));
}
BENCHMARK(BM_ImpliedVol);

}  // namespace

BENCHMARK_MAIN();
