#include <doctest.h>

#include "counterexamples.hpp"
#include "oracles.hpp"

using namespace fibertool;
using support::error_of;

namespace {
constexpr std::size_t kCap = 10'000'000;
}

TEST_CASE("lattice-basis counterexample for n = 5") {
    Thm41Certificate c = build_thm41(5, 5, kCap);
    CHECK(c.verified());
    CHECK(c.w == Vec{0, 1, 2, 3, 4});
    CHECK(c.u == Vec{0, 1, 2, 3, 4, 0, 0, 0, 0, 0});
    CHECK(c.v == Vec{0, 0, 0, 0, 0, 0, 1, 2, 3, 4});
    CHECK(c.z1 == Vec{4, 3, 2, 1, 0, -4, -3, -2, -1, 0});
    CHECK(c.z2 == Vec{-3, -2, -1, 0, 1, 3, 2, 1, 0, -1});
    CHECK(c.step_minima == std::vector<Int>{-4, -4, -3, -3});
    CHECK(c.det_u * c.det_u == 1);
    CHECK(c.minimal_q == 3);
    REQUIRE(c.disconnected.size() == 3);
    for (const auto& r : c.disconnected) CHECK_FALSE(r.reached);
    CHECK(c.lambda.margins(c.u) == c.lambda.margins(c.v));
}

TEST_CASE("lattice-basis counterexample for n = 4..6") {
    for (Int n = 4; n <= 6; ++n) {
        Thm41Certificate c = build_thm41(n, n, kCap);
        CHECK(c.verified());
        CHECK(c.au_is_hnf);
        CHECK(c.hnf_matches);
        CHECK(c.kernel_matches);
        CHECK(c.spans_kernel);
        CHECK(c.minimal_q == n - 2);
        for (Int m : c.step_minima) CHECK(m <= -(n - 2));
    }
    CHECK(error_of([] { build_thm41(3, 3, kCap); }) == ErrorCode::invalid_argument);
}

TEST_CASE("staircase and anti-staircase sets partition the cells") {
    StaircaseSpec s{3, 3, {1, 2, 3}, StairAxis::j};
    auto st = staircase_set(s), anti = anti_staircase_set(s);
    CHECK(st.size() == 9);
    CHECK(anti.size() == 18);
    std::vector<std::size_t> all(st);
    all.insert(all.end(), anti.begin(), anti.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < 27; ++i) CHECK(all[i] == i);
    // cell (i, j, k) has index ((i-1) J + (j-1)) 3 + (k-1); tau(2) = 2 puts (1,2,2) in the staircase
    CHECK(std::binary_search(st.begin(), st.end(), std::size_t{4}));
    CHECK(render_layers(st, 3, 3) == "k=1\n#..\n#..\n#..\nk=2\n.#.\n.#.\n.#.\nk=3\n..#\n..#\n..#\n");

    StaircaseSpec by_i{3, 3, {3, 1, 2}, StairAxis::i};
    auto si = staircase_set(by_i);
    CHECK(si.size() == 9);
    CHECK(si.front() == 2);

    CHECK(error_of([] { StaircaseSpec{3, 3, {1, 1, 2}, StairAxis::j}.validate(); }) == ErrorCode::invalid_argument);
    CHECK(error_of([] { StaircaseSpec{3, 3, {1, 2}, StairAxis::j}.validate(); }) == ErrorCode::invalid_argument);
    CHECK(error_of([] { StaircaseSpec{3, 3, {1, 2, 4}, StairAxis::j}.validate(); }) == ErrorCode::invalid_argument);
}

TEST_CASE("anti-staircase witness for the 3x3 case") {
    for (Int q = 1; q <= 3; ++q) {
        AntiStaircaseCertificate c = anti_staircase_witness({3, 3, {1, 2, 3}, StairAxis::j}, q, kCap);
        CHECK(c.verified());
        CHECK(c.witness_in_kernel);
        CHECK(c.nonnegative);
        CHECK(c.margins_equal);
        CHECK(c.m_zero_off_s);
        CHECK_FALSE(c.bfs.reached);
        CHECK(norm1(c.witness) == 12);
        CHECK_FALSE(c.printed_witness_in_kernel);
    }
}

TEST_CASE("anti-staircase witnesses with a non-injective tau") {
    for (auto tau : {std::vector<Int>{1, 2, 3, 3, 2, 1}, std::vector<Int>{1, 1, 2, 3, 3, 3}}) {
        AntiStaircaseCertificate c = anti_staircase_witness({4, 6, tau, StairAxis::j}, 1, kCap);
        CHECK(c.verified());
        CHECK(c.bfs.visited > 1);
        CHECK_FALSE(c.bfs.reached);
    }
}

TEST_CASE("theta gadget points") {
    for (auto theta : {Vec{0}, Vec{1}, Vec{1, 0, 1}, Vec{1, 1}}) {
        ThetaGadget g = theta_gadget(theta);
        CHECK(g.verified());
        CHECK(g.points.size() == 4);
        CHECK(g.missing.empty());
        CHECK(g.extra.empty());
    }
    ThetaGadget two = theta_gadget({2});
    CHECK_FALSE(two.verified());
    CHECK(two.patterns_hold);
    CHECK(two.points == std::vector<Vec>{{3, 5, 0}, {2, 3, 1}, {1, 1, 2}});
    CHECK(two.missing == std::vector<Vec>{{0, -1, 3}});
    CHECK(error_of([] { theta_gadget({-1}); }) == ErrorCode::invalid_argument);
}
