#include <doctest.h>

#include "zbdt/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <sstream>

using namespace zbdt;

TEST_SUITE_BEGIN("lattice");

namespace {

RateTree flat_bdt(int horizon, double r) {
    RateTree tree(Model::bdt, horizon);
    for (int t = 0; t < horizon; ++t) tree.set_column(t, r, 0.0);
    return tree;
}

RateTree small_zbdt(ZbdtParams params) {
    RateTree tree(Model::zbdt, 3, params);
    tree.set_column(0, 0.026, 0.0);
    tree.set_column(1, 0.016, 0.34);
    tree.set_column(2, 0.014, 0.25);
    return tree;
}

}  // namespace

TEST_CASE("model names round-trip") {
    CHECK(model_from_string("bdt") == Model::bdt);
    CHECK(model_from_string("zbdt") == Model::zbdt);
    CHECK(model_from_string(to_string(Model::zbdt)) == Model::zbdt);
    CHECK_THROWS_AS(model_from_string("hull-white"), std::invalid_argument);
}

TEST_CASE("constructor validates its arguments") {
    CHECK_THROWS_AS(RateTree(Model::bdt, 0), std::invalid_argument);
    CHECK_THROWS_AS(RateTree(Model::zbdt, 2, ZbdtParams{-0.1, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(RateTree(Model::zbdt, 2, ZbdtParams{0.0, 1.5, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(RateTree(Model::zbdt, 2, ZbdtParams{0.0, 0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("state layout: regular rows everywhere, ZIRP row only on zbdt past time 0") {
    RateTree bdt = flat_bdt(3, 0.02);
    CHECK(bdt.min_state(0) == 1);
    CHECK(bdt.min_state(2) == 1);
    CHECK(bdt.max_state(2) == 3);
    CHECK_FALSE(bdt.has_zirp_row(2));

    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    CHECK(zb.min_state(0) == 1);
    CHECK(zb.min_state(1) == 0);
    CHECK(zb.has_zirp_row(1));
    CHECK_FALSE(zb.has_zirp_row(0));

    // terminal column addressable for positions
    auto terminal = zb.states(3);
    REQUIRE(terminal.size() == 5);  // ZIRP + 4 regular
    CHECK(terminal.front().state == 0);
    CHECK(terminal.back().state == 4);

    CHECK_THROWS_AS(bdt.rate(3, 1), std::out_of_range);   // no rates at the horizon
    CHECK_THROWS_AS(bdt.rate(1, 0), std::out_of_range);   // no ZIRP row on bdt
    CHECK_THROWS_AS(bdt.rate(1, 3), std::out_of_range);
    CHECK_THROWS_AS(bdt.states(4), std::out_of_range);
}

TEST_CASE("set_column installs the lognormal column form") {
    RateTree tree = flat_bdt(4, 0.02);
    double base = 0.015, sigma = 0.21;
    tree.set_column(3, base, sigma);
    for (int j = 1; j <= 4; ++j)
        CHECK(tree.rate(3, j) == doctest::Approx(base * std::exp(2.0 * sigma * (j - 1))).epsilon(1e-15));
    // adjacent-state ratio is constant
    double k = std::exp(2.0 * sigma);
    for (int j = 1; j < 4; ++j)
        CHECK(tree.rate(3, j + 1) / tree.rate(3, j) == doctest::Approx(k).epsilon(1e-14));
}

TEST_CASE("ZIRP rate is pinned and not settable") {
    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    CHECK(zb.rate(1, 0) == 0.0025);
    CHECK(zb.rate(2, 0) == 0.0025);
    CHECK_THROWS_AS(zb.set_rate({1, 0}, 0.01), std::out_of_range);
    CHECK_THROWS_AS(zb.set_rate({1, 1}, -2.0), std::invalid_argument);
}

TEST_CASE("bdt children: two equal half branches") {
    RateTree tree = flat_bdt(3, 0.02);
    auto ch = tree.children({1, 2});
    REQUIRE(ch.size() == 2);
    CHECK(ch[0].to == NodeId{2, 2});
    CHECK(ch[1].to == NodeId{2, 3});
    CHECK(ch[0].prob == 0.5);
    CHECK(ch[1].prob == 0.5);
    CHECK_THROWS_AS(tree.children({3, 1}), std::out_of_range);  // terminal column
}

TEST_CASE("zbdt children: bottom node branches into the ZIRP row last") {
    for (double p : {0.0, 0.02, 0.1}) {
        ZbdtParams params{p, 0.01, 0.0025};
        RateTree zb = small_zbdt(params);

        auto bottom = zb.children({1, 1});
        REQUIRE(bottom.size() == 3);
        CHECK(bottom[0].to == NodeId{2, 1});
        CHECK(bottom[1].to == NodeId{2, 2});
        CHECK(bottom[2].to == NodeId{2, 0});
        CHECK(bottom[0].prob == params.p_hat());
        CHECK(bottom[1].prob == params.p_hat());
        CHECK(bottom[2].prob == p);

        // left-to-right accumulation is exactly 1
        double sum = 0.0;
        for (const Transition& tr : bottom) sum += tr.prob;
        CHECK(sum == 1.0);

        auto zirp = zb.children({1, 0});
        REQUIRE(zirp.size() == 2);
        CHECK(zirp[0].to == NodeId{2, 0});
        CHECK(zirp[1].to == NodeId{2, 1});
        CHECK(zirp[0].prob + zirp[1].prob == 1.0);

        // non-bottom regular nodes branch as in bdt
        auto up = zb.children({1, 2});
        REQUIRE(up.size() == 2);
        CHECK(up[0].prob == 0.5);
        CHECK(up[1].prob == 0.5);
    }
    // the root is the bottom node of its column, so it branches 3-way
    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    auto root = zb.children({0, 1});
    REQUIRE(root.size() == 3);
    CHECK(root[2].to == NodeId{1, 0});
}

TEST_CASE("state prices advance by discounted half masses") {
    RateTree tree = flat_bdt(3, 0.02);
    StatePrices pi(tree, {0, 1});
    CHECK(pi.column() == 0);
    CHECK(pi.at(1) == 1.0);
    pi.advance();
    double d = 1.0 / 1.02;
    CHECK(pi.at(1) == doctest::Approx(0.5 * d).epsilon(1e-15));
    CHECK(pi.at(2) == doctest::Approx(0.5 * d).epsilon(1e-15));
    CHECK(pi.total() == doctest::Approx(d).epsilon(1e-15));
    pi.advance();
    CHECK(pi.at(1) == doctest::Approx(0.25 * d * d).epsilon(1e-15));
    CHECK(pi.at(2) == doctest::Approx(0.5 * d * d).epsilon(1e-15));
    CHECK(pi.at(3) == doctest::Approx(0.25 * d * d).epsilon(1e-15));
    CHECK(pi.total() == doctest::Approx(d * d).epsilon(1e-15));
    pi.advance();
    CHECK_THROWS_AS(pi.advance(), std::out_of_range);  // past the horizon
}

TEST_CASE("state prices respect zbdt transitions") {
    ZbdtParams params{0.1, 0.01, 0.0025};
    RateTree zb = small_zbdt(params);
    StatePrices pi(zb, {0, 1});
    pi.advance();
    double d = 1.0 / 1.026;
    CHECK(pi.at(0) == doctest::Approx(0.1 * d).epsilon(1e-15));
    CHECK(pi.at(1) == doctest::Approx(0.45 * d).epsilon(1e-15));
    CHECK(pi.at(2) == doctest::Approx(0.45 * d).epsilon(1e-15));
    pi.advance();
    // ZIRP mass: stay from (1,0) plus entry from (1,1)
    double expect0 = 0.1 * d * 0.99 / 1.0025 + 0.45 * d * 0.1 / (1.0 + zb.rate(1, 1));
    CHECK(pi.at(0) == doctest::Approx(expect0).epsilon(1e-14));
}

TEST_CASE("value lattice bounds and fill") {
    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    ValueLattice v(zb, 3, 7.0);
    CHECK(v.last_time() == 3);
    CHECK(v.min_state(0) == 1);
    CHECK(v.min_state(2) == 0);
    CHECK(v.at(2, 0) == 7.0);
    v.at(2, 0) = 9.0;
    CHECK(v.at(NodeId{2, 0}) == 9.0);
    CHECK_THROWS_AS(v.at(4, 1), std::out_of_range);
    CHECK_THROWS_AS(v.at(0, 0), std::out_of_range);

    RateTree bdt = flat_bdt(2, 0.02);
    ValueLattice vb(bdt, 1);
    CHECK(vb.min_state(1) == 1);
    CHECK_THROWS_AS(vb.at(1, 0), std::out_of_range);
    CHECK_THROWS_AS(ValueLattice(bdt, 5), std::out_of_range);
}

TEST_CASE("rate tree serialization round-trips to a fixed point") {
    // Tree files hold percent, so one parse(serialize(x)) pass rounds through
    // x*100/100; the serialized text itself must then be a fixed point.
    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    RateTree back = parse_rate_tree(serialize_rate_tree(zb));
    CHECK(back.model() == Model::zbdt);
    CHECK(back.horizon() == 3);
    CHECK(back.params().p == 0.02);
    CHECK(back.params().q == 0.01);
    CHECK(back.params().x0 == 0.0025);
    for (int t = 0; t < 3; ++t)
        for (NodeId n : zb.states(t))
            CHECK(back.rate(n) == doctest::Approx(zb.rate(n)).epsilon(1e-14));
    std::string text = serialize_rate_tree(back);
    CHECK(serialize_rate_tree(parse_rate_tree(text)) == text);

    RateTree bdt = flat_bdt(2, 0.0149);
    RateTree back2 = parse_rate_tree(serialize_rate_tree(bdt));
    CHECK(back2.model() == Model::bdt);
    CHECK(back2.rate(1, 2) == doctest::Approx(bdt.rate(1, 2)).epsilon(1e-14));
}

TEST_CASE("rate tree parser rejects malformed files") {
    RateTree zb = small_zbdt({0.02, 0.01, 0.0025});
    std::string good = serialize_rate_tree(zb);

    CHECK_THROWS_AS(parse_rate_tree(std::string("")), std::invalid_argument);
    CHECK_THROWS_AS(parse_rate_tree(std::string("model,mystery\nhorizon,1\n")),
                    std::invalid_argument);
    // duplicate metadata key
    CHECK_THROWS_AS(parse_rate_tree(std::string("model,bdt\nmodel,bdt\nhorizon,1\n")),
                    std::invalid_argument);
    // a missing row leaves the tree incomplete
    std::string truncated = good.substr(0, good.rfind("2,"));
    CHECK_THROWS_AS(parse_rate_tree(truncated), std::invalid_argument);
    // ZIRP rows must repeat x0 exactly
    std::string tampered = good;
    size_t pos = tampered.find("1,0,");
    REQUIRE(pos != std::string::npos);
    size_t eol = tampered.find('\n', pos);
    tampered.replace(pos, eol - pos, "1,0,0.33");
    CHECK_THROWS_AS(parse_rate_tree(tampered), std::invalid_argument);
}

TEST_SUITE_END();
