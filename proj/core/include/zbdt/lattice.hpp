#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zbdt {

enum class Model { bdt, zbdt };

const char* to_string(Model m);
Model model_from_string(const std::string& s);

// Node address. time is the column index i >= 0. Regular states are
// 1..time+1, counted bottom-up. State 0 is the ZIRP row, which exists only
// on ZBDT trees for time >= 1.
struct NodeId {
    int time = 0;
    int state = 1;

    friend bool operator==(NodeId a, NodeId b) { return a.time == b.time && a.state == b.state; }
    friend bool operator!=(NodeId a, NodeId b) { return !(a == b); }
};

// ZBDT branching parameters. From a bottom node (i,1) the process enters the
// ZIRP row with probability p and moves to each regular successor with
// probability p_hat() = (1-p)/2. A ZIRP node stays put with probability 1-q
// and exits to the bottom regular state with probability q. x0 is the ZIRP
// rate as a decimal.
struct ZbdtParams {
    double p = 0.0;
    double q = 0.0;
    double x0 = 0.0;

    double p_hat() const { return (1.0 - p) / 2.0; }
};

struct Transition {
    NodeId to;
    double prob = 0.0;
};

// Short-rate lattice over annual periods. Columns 0..horizon-1 carry rates;
// column `horizon` exists only as a set of terminal positions. Rates are
// decimals. Regular rows of a column satisfy the lognormal column form
// r_{i,j} = r_{i,1} * exp(2*sigma_i*(j-1)); the ZIRP row is pinned at x0.
class RateTree {
public:
    RateTree(Model model, int horizon, ZbdtParams params = {});

    Model model() const { return model_; }
    int horizon() const { return horizon_; }
    const ZbdtParams& params() const { return params_; }

    bool has_zirp_row(int time) const { return model_ == Model::zbdt && time >= 1; }
    int min_state(int time) const;
    int max_state(int time) const;

    // All states of a column, ZIRP row first, then bottom-up. Valid for
    // time in 0..horizon (the terminal column included).
    std::vector<NodeId> states(int time) const;

    double rate(NodeId n) const;
    double rate(int time, int state) const;

    // Regular states only; the ZIRP row is fixed at construction.
    void set_rate(NodeId n, double r);

    // Installs r_{i,j} = base * exp(2*log_spacing*(j-1)) for j = 1..time+1.
    void set_column(int time, double base, double log_spacing);

    // Successors with one-step probabilities. Probabilities of the returned
    // list sum to exactly 1.0 when accumulated left to right; for that the
    // ZIRP entry branch of a bottom node is listed last. Valid for
    // time in 0..horizon-1.
    std::vector<Transition> children(NodeId n) const;

private:
    void check_column(int time, int last) const;

    Model model_;
    int horizon_;
    ZbdtParams params_;
    std::vector<std::vector<double>> rates_;  // [time][state], state 0 slot NaN when absent
};

// Arrow-Debreu prices over the tree, seeded with value 1 at one node and
// pushed forward one column at a time. at(j) is the price at the current
// column of a claim paying 1 in state j; unreachable states hold 0.
class StatePrices {
public:
    StatePrices(const RateTree& tree, NodeId seed);

    int column() const { return column_; }
    double at(int state) const;

    // Pushes the prices from `column` to `column+1` using the rates of the
    // current column. Requires column < tree.horizon().
    void advance();

    // Sum of at(j) over the column, = price at the seed of a sure unit
    // payment at the current column.
    double total() const;

private:
    const RateTree* tree_;
    int column_;
    std::vector<double> pi_;  // indexed by state
};

// Scalar field over the node layout of a tree, columns 0..last_time.
// Backs bond and option lattices.
class ValueLattice {
public:
    ValueLattice(const RateTree& tree, int last_time, double fill = 0.0);

    int last_time() const { return last_time_; }
    int min_state(int time) const;
    int max_state(int time) const { return time + 1; }

    double at(int time, int state) const;
    double& at(int time, int state);
    double at(NodeId n) const { return at(n.time, n.state); }
    double& at(NodeId n) { return at(n.time, n.state); }

private:
    void check(int time, int state) const;

    Model model_;
    int last_time_;
    std::vector<std::vector<double>> values_;
};

// Machine round-trip format: key,value metadata lines followed by one
// time,state,rate_pct row per node. Rates cross the file boundary in
// percent at full precision.
void serialize_rate_tree(std::ostream& out, const RateTree& tree);
std::string serialize_rate_tree(const RateTree& tree);
RateTree parse_rate_tree(std::istream& in);
RateTree parse_rate_tree(const std::string& text);

}  // namespace zbdt
