#include "zbdt/pricer.hpp"

#include <json.hpp>

#include "zbdt/bond_pricing.hpp"

namespace zbdt {

namespace {

int layer_count(const OptionSpec& s) {
    const int barriers =
        (uses_up_barrier(s.family) ? 1 : 0) + (uses_down_barrier(s.family) ? 1 : 0);
    return 1 << barriers;
}

int layer_of(const OptionSpec& s, BarrierStatus st) {
    int idx = 0;
    int bit = 0;
    if (uses_up_barrier(s.family)) {
        if (st.hit_up) idx |= 1 << bit;
        ++bit;
    }
    if (uses_down_barrier(s.family) && st.hit_down) idx |= 1 << bit;
    return idx;
}

BarrierStatus layer_status_of(const OptionSpec& s, int layer) {
    BarrierStatus st;
    int bit = 0;
    if (uses_up_barrier(s.family)) {
        st.hit_up = ((layer >> bit) & 1) != 0;
        ++bit;
    }
    if (uses_down_barrier(s.family)) st.hit_down = ((layer >> bit) & 1) != 0;
    return st;
}

void check_against_tree(const OptionSpec& spec, const RateTree& tree) {
    validate(spec);
    if (spec.bond_maturity > tree.horizon())
        throw SpecError("bond maturity " + std::to_string(spec.bond_maturity) +
                        " exceeds the tree horizon " + std::to_string(tree.horizon()));
}

PriceResult price_layered(const RateTree& tree, const OptionSpec& spec, double face,
                          bool american) {
    const int expiry = spec.expiry;
    const ValueLattice bond = zc_bond_lattice(tree, spec.bond_maturity, face);
    const int n_layers = layer_count(spec);

    PriceResult res;
    for (int s = 0; s < n_layers; ++s) {
        res.layer_status.push_back(layer_status_of(spec, s));
        res.layers.emplace_back(tree, expiry, 0.0);
        if (american) res.exercised.emplace_back(tree, expiry, 0.0);
    }

    for (const NodeId n : tree.states(expiry))
        for (int s = 0; s < n_layers; ++s)
            res.layers[static_cast<size_t>(s)].at(n) =
                barrier_payoff(spec, bond.at(n), res.layer_status[static_cast<size_t>(s)]);

    for (int i = expiry - 1; i >= 0; --i) {
        for (const NodeId n : tree.states(i)) {
            const double disc = 1.0 + tree.rate(n);
            for (int s = 0; s < n_layers; ++s) {
                double expected = 0.0;
                for (const Transition& tr : tree.children(n)) {
                    const BarrierStatus child_status =
                        update_status(res.layer_status[static_cast<size_t>(s)], spec, bond.at(tr.to));
                    expected +=
                        tr.prob * res.layers[static_cast<size_t>(layer_of(spec, child_status))].at(tr.to);
                }
                double v = expected / disc;
                if (american) {
                    const double exercise =
                        barrier_payoff(spec, bond.at(n), res.layer_status[static_cast<size_t>(s)]);
                    if (exercise > v) {
                        v = exercise;
                        res.exercised[static_cast<size_t>(s)].at(n) = 1.0;
                    }
                }
                res.layers[static_cast<size_t>(s)].at(n) = v;
            }
        }
    }

    const BarrierStatus root_status = update_status(BarrierStatus{}, spec, bond.at(0, 1));
    res.root_layer = layer_of(spec, root_status);
    res.value = res.layers[static_cast<size_t>(res.root_layer)].at(0, 1);
    return res;
}

}  // namespace

PriceResult price_european(const RateTree& tree, const OptionSpec& spec, double face) {
    check_against_tree(spec, tree);
    if (spec.style != Style::european) throw SpecError("price_european requires a European spec");

    if (spec.family == Family::double_in) {
        // Table-identity pricing: conditional on any status, in = vanilla - out.
        OptionSpec vanilla_spec = spec;
        vanilla_spec.family = Family::vanilla;
        OptionSpec out_spec = spec;
        out_spec.family = Family::double_out;

        const PriceResult vanilla = price_layered(tree, vanilla_spec, face, false);
        PriceResult res = price_layered(tree, out_spec, face, false);
        res.layer_status = {};
        for (size_t s = 0; s < res.layers.size(); ++s) {
            res.layer_status.push_back(layer_status_of(spec, static_cast<int>(s)));
            ValueLattice& layer = res.layers[s];
            for (int i = 0; i <= layer.last_time(); ++i)
                for (int j = layer.min_state(i); j <= layer.max_state(i); ++j)
                    layer.at(i, j) = vanilla.layers[0].at(i, j) - layer.at(i, j);
        }
        res.value = res.layers[static_cast<size_t>(res.root_layer)].at(0, 1);
        return res;
    }
    return price_layered(tree, spec, face, false);
}

PriceResult price_american(const RateTree& tree, const OptionSpec& spec, double face) {
    check_against_tree(spec, tree);
    if (spec.style != Style::american) throw SpecError("price_american requires an American spec");
    return price_layered(tree, spec, face, true);
}

PriceResult price(const RateTree& tree, const OptionSpec& spec, double face) {
    return spec.style == Style::european ? price_european(tree, spec, face)
                                         : price_american(tree, spec, face);
}

std::string to_json(const PriceResult& result, const OptionSpec& spec) {
    nlohmann::json j;
    j["spec"] = {{"style", to_string(spec.style)},
                 {"kind", to_string(spec.kind)},
                 {"family", to_string(spec.family)},
                 {"strike", spec.strike},
                 {"expiry", spec.expiry},
                 {"bond_maturity", spec.bond_maturity}};
    if (spec.barrier_hi) j["spec"]["barrier_hi"] = *spec.barrier_hi;
    if (spec.barrier_lo) j["spec"]["barrier_lo"] = *spec.barrier_lo;
    j["value"] = result.value;
    j["root_layer"] = result.root_layer;
    j["layers"] = nlohmann::json::array();
    for (size_t s = 0; s < result.layers.size(); ++s) {
        nlohmann::json layer;
        layer["hit_up"] = result.layer_status[s].hit_up;
        layer["hit_down"] = result.layer_status[s].hit_down;
        layer["nodes"] = nlohmann::json::array();
        const ValueLattice& v = result.layers[s];
        for (int i = 0; i <= v.last_time(); ++i)
            for (int jst = v.min_state(i); jst <= v.max_state(i); ++jst)
                layer["nodes"].push_back(
                    {{"time", i}, {"state", jst}, {"value", v.at(i, jst)}});
        if (!result.exercised.empty()) {
            layer["exercised"] = nlohmann::json::array();
            const ValueLattice& ex = result.exercised[s];
            for (int i = 0; i <= ex.last_time(); ++i)
                for (int jst = ex.min_state(i); jst <= ex.max_state(i); ++jst)
                    if (ex.at(i, jst) == 1.0)
                        layer["exercised"].push_back({{"time", i}, {"state", jst}});
        }
        j["layers"].push_back(std::move(layer));
    }
    return j.dump(2);
}

}  // namespace zbdt
