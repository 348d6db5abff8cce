#include "zbdt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace zbdt {

namespace {

constexpr int kMaxExpiry = 6;

// Bond values computed by direct recursion on the transitions, memoized per
// node; deliberately not the bond_pricing module.
class BondValues {
public:
    BondValues(const RateTree& tree, int maturity, double face)
        : tree_(&tree), maturity_(maturity), face_(face) {
        cache_.resize(static_cast<size_t>(maturity) + 1);
        for (int i = 0; i <= maturity; ++i)
            cache_[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 2,
                                                  std::numeric_limits<double>::quiet_NaN());
    }

    double at(int time, int state) {
        if (time == maturity_) return face_;
        double& slot = cache_[static_cast<size_t>(time)][static_cast<size_t>(state)];
        if (!std::isnan(slot)) return slot;
        double expected = 0.0;
        for (const Transition& tr : tree_->children({time, state}))
            expected += tr.prob * at(tr.to.time, tr.to.state);
        slot = expected / (1.0 + tree_->rate(time, state));
        return slot;
    }

private:
    const RateTree* tree_;
    int maturity_;
    double face_;
    std::vector<std::vector<double>> cache_;
};

BarrierStatus status_from_extrema(const OptionSpec& spec, double run_max, double run_min) {
    BarrierStatus st;
    if (uses_up_barrier(spec.family)) st.hit_up = run_max > *spec.barrier_hi;
    if (uses_down_barrier(spec.family)) st.hit_down = run_min < *spec.barrier_lo;
    return st;
}

struct Walker {
    const RateTree* tree;
    const OptionSpec* spec;
    BondValues* bond;

    double european(int time, int state, double prob, double discount, double run_max,
                    double run_min) {
        const double z = bond->at(time, state);
        run_max = std::max(run_max, z);
        run_min = std::min(run_min, z);
        if (time == spec->expiry) {
            const BarrierStatus st = status_from_extrema(*spec, run_max, run_min);
            return prob * discount * barrier_payoff(*spec, z, st);
        }
        const double next_discount = discount / (1.0 + tree->rate(time, state));
        double sum = 0.0;
        for (const Transition& tr : tree->children({time, state}))
            sum += european(tr.to.time, tr.to.state, prob * tr.prob, next_discount, run_max,
                            run_min);
        return sum;
    }

    double american(int time, int state, double run_max, double run_min) {
        const double z = bond->at(time, state);
        run_max = std::max(run_max, z);
        run_min = std::min(run_min, z);
        const BarrierStatus st = status_from_extrema(*spec, run_max, run_min);
        const double exercise = barrier_payoff(*spec, z, st);
        if (time == spec->expiry) return exercise;
        double expected = 0.0;
        for (const Transition& tr : tree->children({time, state}))
            expected += tr.prob * american(tr.to.time, tr.to.state, run_max, run_min);
        return std::max(exercise, expected / (1.0 + tree->rate(time, state)));
    }
};

}  // namespace

double oracle_price(const RateTree& tree, const OptionSpec& spec, double face) {
    validate(spec);
    if (spec.bond_maturity > tree.horizon())
        throw SpecError("oracle: bond maturity exceeds the tree horizon");
    if (spec.expiry > kMaxExpiry)
        throw std::invalid_argument("oracle: path enumeration is limited to expiry <= " +
                                    std::to_string(kMaxExpiry));
    if (!(face > 0.0)) throw std::invalid_argument("oracle: face value must be positive");

    BondValues bond(tree, spec.bond_maturity, face);
    Walker w{&tree, &spec, &bond};
    const double lowest = -std::numeric_limits<double>::infinity();
    const double highest = std::numeric_limits<double>::infinity();
    if (spec.style == Style::european) return w.european(0, 1, 1.0, 1.0, lowest, highest);
    return w.american(0, 1, lowest, highest);
}

namespace {

double probability_mass(const RateTree& tree, NodeId n, int steps_left) {
    if (steps_left == 0) return 1.0;
    double sum = 0.0;
    for (const Transition& tr : tree.children(n))
        sum += tr.prob * probability_mass(tree, tr.to, steps_left - 1);
    return sum;
}

}  // namespace

double oracle_total_probability(const RateTree& tree, int steps) {
    if (steps < 0 || steps > tree.horizon())
        throw std::out_of_range("oracle: steps outside 0..horizon");
    if (steps > kMaxExpiry + 1)
        throw std::invalid_argument("oracle: path enumeration is limited to " +
                                    std::to_string(kMaxExpiry + 1) + " steps");
    return probability_mass(tree, {0, 1}, steps);
}

}  // namespace zbdt
