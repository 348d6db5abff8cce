#include "zbdt/reference_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace zbdt {

namespace {

// rows[i] lists the regular states of column i bottom-up (state 1 first);
// zirp[k] is the state-0 value at time zirp_start + k.
ReferenceTable make_table(std::string label, std::vector<std::vector<double>> rows,
                          std::vector<double> zirp = {}, int zirp_start = 1) {
    ReferenceTable t;
    t.label = std::move(label);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        const int zirp_index = i - zirp_start;
        if (zirp_index >= 0 && zirp_index < static_cast<int>(zirp.size()))
            t.nodes.push_back({i, 0, zirp[static_cast<size_t>(zirp_index)]});
        const auto& row = rows[static_cast<size_t>(i)];
        if (static_cast<int>(row.size()) != i + 1)
            throw std::logic_error("reference table '" + t.label + "': column " +
                                   std::to_string(i) + " must have " + std::to_string(i + 1) +
                                   " regular entries");
        for (int j = 1; j <= i + 1; ++j) t.nodes.push_back({i, j, row[static_cast<size_t>(j - 1)]});
    }
    return t;
}

TermStructure make_curve(std::vector<double> yields_pct, std::vector<double> vols_pct) {
    TermStructure ts;
    for (double y : yields_pct) ts.yields.push_back(y / 100.0);
    for (double v : vols_pct) ts.vols.push_back(v / 100.0);
    ts.face_value = 100.0;
    validate(ts);
    return ts;
}

std::vector<double> face_row(int n) { return std::vector<double>(static_cast<size_t>(n), 100.0); }

ReferenceCase build_example_case() {
    ReferenceCase c;
    c.name = "example";
    c.curve = make_curve({2.60, 2.50, 2.47, 2.48, 2.49, 2.53, 2.61, 2.74, 2.92, 3.17},
                         {40.0, 34.0, 29.5, 28.9, 27.2, 26.0, 25.1, 24.2, 23.2, 23.1});
    c.zbdt_params = ZbdtParams{0.02, 0.01, 0.0025};
    c.barrier_hi = 90.0;
    c.barrier_lo = 70.0;
    c.option_expiry = 5;

    c.bdt_rates_pct = make_table(
        "example/bdt/rates_pct",
        {
            {2.60},
            {1.62, 3.19},
            {1.41, 2.28, 3.71},
            {0.94, 1.68, 3.00, 5.34},
            {0.94, 1.48, 2.32, 3.64, 5.72},
            {0.82, 1.28, 1.98, 3.08, 4.79, 7.44},
            {0.74, 1.15, 1.78, 2.76, 4.28, 6.64, 10.30},
            {0.75, 1.14, 1.74, 2.65, 4.03, 6.13, 9.34, 14.22},
            {0.82, 1.22, 1.80, 2.67, 3.95, 5.85, 8.66, 12.83, 19.00},
            {0.52, 0.84, 1.36, 2.22, 3.61, 5.88, 9.56, 15.56, 25.32, 41.20},
        });

    c.bdt_bond_prices = make_table(
        "example/bdt/bond_prices",
        {
            {73.19},
            {79.93, 70.26},
            {84.91, 77.54, 67.46},
            {88.91, 83.30, 75.33, 64.59},
            {91.81, 87.68, 81.72, 73.46, 62.62},
            {94.18, 91.18, 86.77, 80.46, 71.80, 60.60},
            {96.00, 93.90, 90.78, 86.20, 79.68, 70.80, 59.43},
            {97.39, 96.02, 93.94, 90.85, 86.32, 79.87, 71.12, 59.97},
            {98.52, 97.72, 96.50, 94.65, 91.85, 87.73, 81.82, 73.71, 63.28},
            {99.49, 99.17, 98.65, 97.83, 96.51, 94.45, 91.27, 86.54, 79.80, 70.82},
            face_row(11),
        });

    c.zbdt_rates_pct = make_table(
        "example/zbdt/rates_pct",
        {
            {2.60},
            {1.32, 3.60},
            {1.06, 2.08, 4.77},
            {0.57, 1.29, 3.10, 7.47},
            {0.51, 1.00, 2.08, 4.32, 8.94},
            {0.40, 0.77, 1.55, 3.13, 6.29, 12.65},
            {0.33, 0.64, 1.26, 2.47, 4.84, 9.51, 18.66},
            {0.35, 0.64, 1.18, 2.20, 4.09, 7.61, 14.15, 26.30},
            {0.45, 0.74, 1.27, 2.20, 3.79, 6.55, 11.32, 19.56, 33.79},
            {0.26, 0.48, 0.90, 1.70, 3.21, 6.06, 11.44, 21.60, 40.79, 77.00},
        },
        std::vector<double>(9, 0.25), 1);

    c.zbdt_bond_prices = make_table(
        "example/zbdt/bond_prices",
        {
            {73.19},
            {81.82, 67.45},
            {87.58, 77.60, 62.16},
            {91.77, 84.86, 73.57, 56.68},
            {94.48, 89.86, 82.06, 69.64, 52.19},
            {96.40, 93.37, 88.14, 79.39, 65.91, 47.80},
            {97.69, 95.78, 92.41, 86.61, 77.13, 62.97, 44.73},
            {98.56, 97.42, 95.37, 91.78, 85.72, 76.01, 61.91, 44.24},
            {99.20, 98.59, 97.48, 95.51, 92.10, 86.35, 77.24, 64.10, 47.66},
            {99.75, 99.53, 99.11, 98.33, 96.89, 94.29, 89.73, 82.24, 71.03, 56.50},
            face_row(11),
        },
        {97.53, 97.87, 98.18, 98.47, 98.74, 99.00, 99.25, 99.50, 99.75, 100.0}, 1);

    return c;
}

ReferenceCase build_real_case() {
    ReferenceCase c;
    c.name = "real-case";
    c.curve = make_curve({1.49, 1.42, 1.40, 1.41, 1.42}, {25.5, 39.8, 41.7, 41.6, 42.2});
    c.zbdt_params = ZbdtParams{0.1, 0.01, 0.0025};
    c.barrier_hi = 98.5;
    c.barrier_lo = 93.0;
    c.option_expiry = 4;

    c.bdt_rates_pct = make_table(
        "real-case/bdt/rates_pct",
        {
            {1.49},
            {0.84, 1.86},
            {0.48, 1.14, 2.73},
            {0.32, 0.75, 1.72, 3.96},
            {0.17, 0.42, 1.03, 2.49, 6.05},
        });

    c.bdt_bond_prices = make_table(
        "real-case/bdt/bond_prices",
        {
            {93.19},
            {96.68, 92.49},
            {98.50, 96.62, 91.94},
            {99.38, 98.55, 96.62, 92.28},
            {99.83, 99.58, 98.99, 97.57, 94.29},
            face_row(6),
        });

    c.zbdt_rates_pct = make_table(
        "real-case/zbdt/rates_pct",
        {
            {1.49},
            {0.93, 2.03},
            {0.66, 1.19, 3.08},
            {0.64, 0.91, 1.93, 4.07},
            {0.30, 0.61, 1.29, 2.73, 5.77},
        },
        std::vector<double>(4, 0.25), 1);

    c.zbdt_bond_prices = make_table(
        "real-case/zbdt/bond_prices",
        {
            {93.19},
            {96.35, 91.84},
            {98.00, 96.03, 91.37},
            {98.93, 98.17, 96.18, 92.19},
            {99.70, 99.40, 98.73, 97.35, 94.54},
            face_row(6),
        },
        {98.99, 99.25, 99.50, 99.75, 100.0}, 1);

    return c;
}

}  // namespace

const ReferenceCase& example_case() {
    static const ReferenceCase c = build_example_case();
    return c;
}

const ReferenceCase& real_case() {
    static const ReferenceCase c = build_real_case();
    return c;
}

std::vector<const ReferenceCase*> all_cases() { return {&example_case(), &real_case()}; }

std::vector<NodeDeviation> rate_deviations(const RateTree& tree, const ReferenceTable& table) {
    std::vector<NodeDeviation> out;
    out.reserve(table.nodes.size());
    for (const ReferenceNode& n : table.nodes) {
        NodeDeviation d;
        d.time = n.time;
        d.state = n.state;
        d.model_value = tree.rate(n.time, n.state) * 100.0;
        d.reference_value = n.value;
        d.deviation = d.model_value - d.reference_value;
        out.push_back(d);
    }
    return out;
}

std::vector<NodeDeviation> bond_deviations(const ValueLattice& bonds, const ReferenceTable& table) {
    std::vector<NodeDeviation> out;
    out.reserve(table.nodes.size());
    for (const ReferenceNode& n : table.nodes) {
        NodeDeviation d;
        d.time = n.time;
        d.state = n.state;
        d.model_value = bonds.at(n.time, n.state);
        d.reference_value = n.value;
        d.deviation = d.model_value - d.reference_value;
        out.push_back(d);
    }
    return out;
}

double max_abs_deviation(const std::vector<NodeDeviation>& devs) {
    double m = 0.0;
    for (const NodeDeviation& d : devs) m = std::max(m, std::abs(d.deviation));
    return m;
}

std::string format_deviation_report(const ReferenceTable& table,
                                    const std::vector<NodeDeviation>& devs) {
    std::ostringstream os;
    os << "# " << table.label << "\n";
    os << "time,state,model,reference,deviation\n";
    char buf[128];
    for (const NodeDeviation& d : devs) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%+.6f\n", d.time, d.state, d.model_value,
                      d.reference_value, d.deviation);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "# max |deviation| = %.6f\n", max_abs_deviation(devs));
    os << buf;
    return os.str();
}

}  // namespace zbdt
