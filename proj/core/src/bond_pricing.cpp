#include "zbdt/bond_pricing.hpp"

#include <cmath>
#include <stdexcept>

namespace zbdt {

ValueLattice zc_bond_lattice(const RateTree& tree, int maturity, double face) {
    if (maturity < 1 || maturity > tree.horizon())
        throw std::out_of_range("bond maturity outside 1..horizon");
    if (!(face > 0.0)) throw std::invalid_argument("bond face value must be positive");

    ValueLattice bond(tree, maturity, 0.0);
    for (const NodeId n : tree.states(maturity)) bond.at(n) = face;
    for (int i = maturity - 1; i >= 0; --i) {
        for (const NodeId n : tree.states(i)) {
            double expected = 0.0;
            for (const Transition& tr : tree.children(n)) expected += tr.prob * bond.at(tr.to);
            bond.at(n) = expected / (1.0 + tree.rate(n));
        }
    }
    return bond;
}

double zc_bond_price(const RateTree& tree, int maturity, double face) {
    return zc_bond_lattice(tree, maturity, face).at(0, 1);
}

double annual_yield(double value, double face, int periods) {
    if (!(value > 0.0)) throw std::invalid_argument("annual_yield: value must be positive");
    if (periods < 1) throw std::invalid_argument("annual_yield: periods must be >= 1");
    return std::pow(face / value, 1.0 / periods) - 1.0;
}

}  // namespace zbdt
