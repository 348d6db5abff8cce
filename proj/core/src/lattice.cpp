#include "zbdt/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace zbdt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void tree_parse_fail(int line_no, const std::string& what) {
    throw std::invalid_argument("rate tree file, line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

const char* to_string(Model m) { return m == Model::bdt ? "bdt" : "zbdt"; }

Model model_from_string(const std::string& s) {
    if (s == "bdt") return Model::bdt;
    if (s == "zbdt") return Model::zbdt;
    throw std::invalid_argument("unknown model '" + s + "', expected 'bdt' or 'zbdt'");
}

RateTree::RateTree(Model model, int horizon, ZbdtParams params)
    : model_(model), horizon_(horizon), params_(params) {
    if (horizon < 1) throw std::invalid_argument("rate tree horizon must be >= 1");
    if (model == Model::zbdt) {
        if (!(params.p >= 0.0 && params.p <= 1.0))
            throw std::invalid_argument("zbdt parameter p must lie in [0, 1]");
        if (!(params.q >= 0.0 && params.q <= 1.0))
            throw std::invalid_argument("zbdt parameter q must lie in [0, 1]");
        if (!(params.x0 > -1.0) || !std::isfinite(params.x0))
            throw std::invalid_argument("zbdt parameter x0 must be a finite rate > -1");
    } else {
        params_ = ZbdtParams{};
    }
    rates_.resize(static_cast<size_t>(horizon));
    for (int i = 0; i < horizon; ++i) {
        rates_[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 2, kNaN);
        if (has_zirp_row(i)) rates_[static_cast<size_t>(i)][0] = params_.x0;
    }
}

int RateTree::min_state(int time) const { return has_zirp_row(time) ? 0 : 1; }

int RateTree::max_state(int time) const { return time + 1; }

void RateTree::check_column(int time, int last) const {
    if (time < 0 || time > last)
        throw std::out_of_range("tree column " + std::to_string(time) + " outside 0.." +
                                std::to_string(last));
}

std::vector<NodeId> RateTree::states(int time) const {
    check_column(time, horizon_);
    std::vector<NodeId> out;
    out.reserve(static_cast<size_t>(max_state(time) - min_state(time)) + 1);
    for (int j = min_state(time); j <= max_state(time); ++j) out.push_back({time, j});
    return out;
}

double RateTree::rate(int time, int state) const {
    check_column(time, horizon_ - 1);
    if (state < min_state(time) || state > max_state(time))
        throw std::out_of_range("tree state " + std::to_string(state) + " invalid at time " +
                                std::to_string(time));
    return rates_[static_cast<size_t>(time)][static_cast<size_t>(state)];
}

double RateTree::rate(NodeId n) const { return rate(n.time, n.state); }

void RateTree::set_rate(NodeId n, double r) {
    check_column(n.time, horizon_ - 1);
    if (n.state < 1 || n.state > max_state(n.time))
        throw std::out_of_range("set_rate: state " + std::to_string(n.state) +
                                " is not a regular state at time " + std::to_string(n.time));
    if (!(r > -1.0) || !std::isfinite(r))
        throw std::invalid_argument("set_rate: rate must be a finite value > -1");
    rates_[static_cast<size_t>(n.time)][static_cast<size_t>(n.state)] = r;
}

void RateTree::set_column(int time, double base, double log_spacing) {
    check_column(time, horizon_ - 1);
    for (int j = 1; j <= max_state(time); ++j)
        set_rate({time, j}, base * std::exp(2.0 * log_spacing * (j - 1)));
}

std::vector<Transition> RateTree::children(NodeId n) const {
    check_column(n.time, horizon_ - 1);
    if (n.state < min_state(n.time) || n.state > max_state(n.time))
        throw std::out_of_range("children: state " + std::to_string(n.state) +
                                " invalid at time " + std::to_string(n.time));
    const int t = n.time + 1;
    if (model_ == Model::bdt) return {{{t, n.state}, 0.5}, {{t, n.state + 1}, 0.5}};

    if (n.state == 0) return {{{t, 0}, 1.0 - params_.q}, {{t, 1}, params_.q}};
    if (n.state == 1) {
        // ZIRP branch last: p_hat + p_hat == fl(1-p), and fl(1-p) + p
        // rounds to exactly 1, so the probabilities accumulate to 1.0.
        const double ph = params_.p_hat();
        return {{{t, 1}, ph}, {{t, 2}, ph}, {{t, 0}, params_.p}};
    }
    return {{{t, n.state}, 0.5}, {{t, n.state + 1}, 0.5}};
}

StatePrices::StatePrices(const RateTree& tree, NodeId seed) : tree_(&tree), column_(seed.time) {
    if (seed.time < 0 || seed.time > tree.horizon())
        throw std::out_of_range("state price seed column out of range");
    if (seed.state < tree.min_state(seed.time) || seed.state > tree.max_state(seed.time))
        throw std::out_of_range("state price seed state out of range");
    pi_.assign(static_cast<size_t>(seed.time) + 2, 0.0);
    pi_[static_cast<size_t>(seed.state)] = 1.0;
}

double StatePrices::at(int state) const {
    if (state < 0 || state > column_ + 1)
        throw std::out_of_range("state price state " + std::to_string(state) +
                                " invalid at column " + std::to_string(column_));
    return pi_[static_cast<size_t>(state)];
}

void StatePrices::advance() {
    if (column_ >= tree_->horizon())
        throw std::out_of_range("cannot advance state prices past the tree horizon");
    std::vector<double> next(static_cast<size_t>(column_) + 3, 0.0);
    for (const NodeId n : tree_->states(column_)) {
        const double pi = pi_[static_cast<size_t>(n.state)];
        if (pi == 0.0) continue;
        const double disc = pi / (1.0 + tree_->rate(n));
        for (const Transition& tr : tree_->children(n))
            next[static_cast<size_t>(tr.to.state)] += disc * tr.prob;
    }
    pi_ = std::move(next);
    ++column_;
}

double StatePrices::total() const {
    double s = 0.0;
    for (double v : pi_) s += v;
    return s;
}

ValueLattice::ValueLattice(const RateTree& tree, int last_time, double fill)
    : model_(tree.model()), last_time_(last_time) {
    if (last_time < 0 || last_time > tree.horizon())
        throw std::out_of_range("value lattice last_time outside 0..horizon");
    values_.resize(static_cast<size_t>(last_time) + 1);
    for (int i = 0; i <= last_time; ++i) {
        values_[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 2, kNaN);
        for (int j = min_state(i); j <= max_state(i); ++j)
            values_[static_cast<size_t>(i)][static_cast<size_t>(j)] = fill;
    }
}

int ValueLattice::min_state(int time) const {
    return (model_ == Model::zbdt && time >= 1) ? 0 : 1;
}

void ValueLattice::check(int time, int state) const {
    if (time < 0 || time > last_time_)
        throw std::out_of_range("value lattice column " + std::to_string(time) + " out of range");
    if (state < min_state(time) || state > max_state(time))
        throw std::out_of_range("value lattice state " + std::to_string(state) +
                                " invalid at time " + std::to_string(time));
}

double ValueLattice::at(int time, int state) const {
    check(time, state);
    return values_[static_cast<size_t>(time)][static_cast<size_t>(state)];
}

double& ValueLattice::at(int time, int state) {
    check(time, state);
    return values_[static_cast<size_t>(time)][static_cast<size_t>(state)];
}

void serialize_rate_tree(std::ostream& out, const RateTree& tree) {
    out << "# rate tree\n";
    out << "model," << to_string(tree.model()) << '\n';
    out << "horizon," << tree.horizon() << '\n';
    if (tree.model() == Model::zbdt) {
        out << "p," << format_full(tree.params().p) << '\n';
        out << "q," << format_full(tree.params().q) << '\n';
        out << "x0_pct," << format_full(tree.params().x0 * 100.0) << '\n';
    }
    out << "time,state,rate_pct\n";
    for (int i = 0; i < tree.horizon(); ++i)
        for (const NodeId n : tree.states(i))
            out << n.time << ',' << n.state << ',' << format_full(tree.rate(n) * 100.0) << '\n';
}

std::string serialize_rate_tree(const RateTree& tree) {
    std::ostringstream out;
    serialize_rate_tree(out, tree);
    return out.str();
}

namespace {

struct TreeFileRow {
    int line_no = 0;
    std::vector<std::string> fields;
};

std::vector<TreeFileRow> read_csv_rows(std::istream& in) {
    std::vector<TreeFileRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
            line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = line;
        const auto a = t.find_first_not_of(" \t");
        t = (a == std::string::npos) ? std::string{} : t.substr(a);
        if (t.empty() || t[0] == '#') continue;
        TreeFileRow row;
        row.line_no = line_no;
        std::stringstream ss(t);
        std::string field;
        while (std::getline(ss, field, ',')) {
            const auto b = field.find_first_not_of(" \t");
            const auto e = field.find_last_not_of(" \t");
            row.fields.push_back(b == std::string::npos ? std::string{}
                                                        : field.substr(b, e - b + 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double to_double(const std::string& s, int line_no) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        tree_parse_fail(line_no, "not a number: '" + s + "'");
    }
    if (pos != s.size()) tree_parse_fail(line_no, "trailing characters in '" + s + "'");
    return v;
}

int to_int(const std::string& s, int line_no) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        tree_parse_fail(line_no, "not an integer: '" + s + "'");
    }
    if (pos != s.size()) tree_parse_fail(line_no, "trailing characters in '" + s + "'");
    return static_cast<int>(v);
}

}  // namespace

RateTree parse_rate_tree(std::istream& in) {
    const std::vector<TreeFileRow> rows = read_csv_rows(in);
    size_t k = 0;

    std::map<std::string, std::pair<std::string, int>> meta;
    for (; k < rows.size(); ++k) {
        const TreeFileRow& row = rows[k];
        if (row.fields.size() == 3 && row.fields[0] == "time") break;
        if (row.fields.size() != 2) tree_parse_fail(row.line_no, "expected 'key,value'");
        if (!meta.emplace(row.fields[0], std::make_pair(row.fields[1], row.line_no)).second)
            tree_parse_fail(row.line_no, "duplicate key '" + row.fields[0] + "'");
    }
    if (k == rows.size()) throw std::invalid_argument("rate tree file: missing 'time,state,rate_pct' header");
    const TreeFileRow& header = rows[k];
    if (header.fields != std::vector<std::string>{"time", "state", "rate_pct"})
        tree_parse_fail(header.line_no, "expected header 'time,state,rate_pct'");
    ++k;

    auto take = [&meta](const std::string& key) {
        auto it = meta.find(key);
        if (it == meta.end())
            throw std::invalid_argument("rate tree file: missing key '" + key + "'");
        auto v = it->second;
        meta.erase(it);
        return v;
    };

    const auto model_kv = take("model");
    const Model model = model_from_string(model_kv.first);
    const auto horizon_kv = take("horizon");
    const int horizon = to_int(horizon_kv.first, horizon_kv.second);

    ZbdtParams params;
    if (model == Model::zbdt) {
        const auto p_kv = take("p");
        const auto q_kv = take("q");
        const auto x0_kv = take("x0_pct");
        params.p = to_double(p_kv.first, p_kv.second);
        params.q = to_double(q_kv.first, q_kv.second);
        params.x0 = to_double(x0_kv.first, x0_kv.second) / 100.0;
    }
    if (!meta.empty())
        throw std::invalid_argument("rate tree file: unexpected key '" + meta.begin()->first + "'");

    RateTree tree(model, horizon, params);

    std::vector<std::vector<int>> seen(static_cast<size_t>(horizon));
    for (int i = 0; i < horizon; ++i)
        seen[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 2, 0);

    for (; k < rows.size(); ++k) {
        const TreeFileRow& row = rows[k];
        if (row.fields.size() != 3) tree_parse_fail(row.line_no, "expected 'time,state,rate_pct'");
        const int time = to_int(row.fields[0], row.line_no);
        const int state = to_int(row.fields[1], row.line_no);
        const double rate = to_double(row.fields[2], row.line_no) / 100.0;
        if (time < 0 || time >= horizon) tree_parse_fail(row.line_no, "time out of range");
        if (state < tree.min_state(time) || state > tree.max_state(time))
            tree_parse_fail(row.line_no, "state out of range");
        if (seen[static_cast<size_t>(time)][static_cast<size_t>(state)]++)
            tree_parse_fail(row.line_no, "duplicate node");
        if (state == 0) {
            if (rate != tree.params().x0)
                tree_parse_fail(row.line_no, "ZIRP row rate differs from x0");
        } else {
            tree.set_rate({time, state}, rate);
        }
    }

    for (int i = 0; i < horizon; ++i)
        for (const NodeId n : tree.states(i))
            if (!seen[static_cast<size_t>(i)][static_cast<size_t>(n.state)])
                throw std::invalid_argument("rate tree file: missing node at time " +
                                            std::to_string(i) + ", state " + std::to_string(n.state));
    return tree;
}

RateTree parse_rate_tree(const std::string& text) {
    std::istringstream in(text);
    return parse_rate_tree(in);
}

}  // namespace zbdt
