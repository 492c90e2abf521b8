#include <doctest.h>

#include "bases.hpp"
#include "fibers.hpp"
#include "oracles.hpp"

using namespace fibertool;
using support::error_of;

namespace {

constexpr std::size_t kCap = 10'000'000;

const Vec sparse{1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1};

}  // namespace

TEST_CASE("two-way fiber counts") {
    CHECK(count_two_way_fiber({20, 22, 33, 21}, {4, 13, 43, 36}) == 90208550);
    CHECK(count_two_way_fiber({20, 6, 42, 42}, {12, 43, 12, 43}) == 185227230);
    CHECK(count_two_way_fiber({2, 2, 2, 2}, {2, 2, 2, 2}) == 282);
    CHECK(count_two_way_fiber({1, 1}, {1, 1}) == 2);
    CHECK(count_two_way_fiber({3}, {1, 2}) == 1);
    CHECK(error_of([] { count_two_way_fiber({1, 1}, {1, 2}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("two-way counts match brute force and enumeration") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        const Int r = 2 + t % 3, c = 2 + (t / 3) % 3;
        DesignMatrix a = independence_matrix({r, c});
        Vec u = oracle::random_table(rng, static_cast<std::size_t>(r * c), 3 + t % 6);
        Vec m = a.margins(u);
        Vec rows(m.begin(), m.begin() + r), cols(m.begin() + r, m.end());
        const std::size_t brute = oracle::two_way_count(rows, cols);
        CHECK(count_two_way_fiber(rows, cols) == brute);
        CHECK(enumerate_fiber(FiberSpec::of(a, u), RelaxationSpec::none(), kCap).size() == brute);
    }
}

TEST_CASE("sparse 4x4 table has 282 tables in its fiber") {
    auto fiber = enumerate_fiber(FiberSpec::of(independence_matrix({4, 4}), sparse), RelaxationSpec::none(), kCap);
    CHECK(fiber.size() == 282);
    std::set<Vec> distinct(fiber.begin(), fiber.end());
    CHECK(distinct.size() == 282);
}

TEST_CASE("enumeration matches a box oracle on relaxed fibers") {
    DesignMatrix a = no_three_way_matrix(2, 2, 2);
    Vec u{1, 0, 0, 1, 0, 1, 1, 0};
    FiberSpec spec = FiberSpec::of(a, u);
    for (Int q = 0; q <= 2; ++q) {
        for (auto relax : {RelaxationSpec::everywhere(q), RelaxationSpec::on(q, {0, 3, 5})}) {
            auto got = enumerate_fiber(spec, relax, kCap);
            Vec lower = relax.lower_bounds(8);
            auto want = oracle::box_points(a.entries(), spec.margins, lower, Vec(8, 2 + q));
            CHECK(std::set<Vec>(got.begin(), got.end()) == std::set<Vec>(want.begin(), want.end()));
            for (const auto& x : got) CHECK(in_relaxed_fiber(x, spec, relax));
        }
    }
}

TEST_CASE("membership") {
    DesignMatrix a = independence_matrix({2, 2});
    FiberSpec spec = FiberSpec::of(a, Vec{1, 1, 1, 1});
    CHECK(in_fiber(Vec{2, 0, 0, 2}, spec));
    CHECK_FALSE(in_fiber(Vec{2, 0, 0, 1}, spec));
    CHECK_FALSE(in_fiber(Vec{3, -1, -1, 3}, spec));
    CHECK(in_relaxed_fiber(Vec{3, -1, -1, 3}, spec, RelaxationSpec::everywhere(1)));
    CHECK(in_relaxed_fiber(Vec{3, -1, -1, 3}, spec, RelaxationSpec::on(1, {1, 2})));
    CHECK_FALSE(in_relaxed_fiber(Vec{3, -1, -1, 3}, spec, RelaxationSpec::on(1, {1})));
    CHECK(RelaxationSpec::on(2, {1}).lower_bounds(3) == Vec{0, -2, 0});
}

TEST_CASE("unbounded systems and caps are reported") {
    FiberSpec free{std::make_shared<DesignMatrix>(Matrix(1, 2, {1, -1})), Vec{0}};
    CHECK(error_of([&] { relaxed_bounds(free, RelaxationSpec::none()); }) == ErrorCode::invalid_argument);
    FiberSpec big = FiberSpec::of(independence_matrix({4, 4}), sparse);
    CHECK(error_of([&] { enumerate_fiber(big, RelaxationSpec::none(), 100); }) == ErrorCode::cap_exceeded);
}

TEST_CASE("swap moves connect every 3x3 fiber") {
    DesignMatrix a = independence_matrix({3, 3});
    MoveSet swaps = independence_swap_basis(3, 3);
    std::mt19937_64 rng(29);
    for (int t = 0; t < 15; ++t) {
        Vec u = oracle::random_table(rng, 9, 2 + t % 5);
        ConnectivityReport r = connectivity(FiberSpec::of(a, u), swaps, RelaxationSpec::none(), kCap);
        CHECK(r.connected());
        CHECK(r.points.size() == enumerate_fiber(FiberSpec::of(a, u), RelaxationSpec::none(), kCap).size());
        CHECK(r.witness_pairs.empty());
    }
}

TEST_CASE("the anchored lattice basis of the 4x4 model connects the sparse fiber") {
    DesignMatrix a = independence_matrix({4, 4});
    MoveSet l = lattice_basis(a);
    FiberSpec spec = FiberSpec::of(a, sparse);
    ConnectivityReport plain = connectivity(spec, l, RelaxationSpec::none(), kCap);
    CHECK(plain.points.size() == 282);
    CHECK(plain.connected());
    CHECK(connectivity(spec, graver_basis(a, 4), RelaxationSpec::none(), kCap).connected());
}

TEST_CASE("a lattice basis can strand every point of a fiber") {
    // every move of the anchored basis touches cell (1,1), row 1 or column 1; here those are forced to zero
    DesignMatrix a = independence_matrix({3, 3});
    MoveSet l = lattice_basis(a);
    Vec u{0, 0, 0, 0, 1, 0, 0, 0, 1};
    FiberSpec spec = FiberSpec::of(a, u);
    ConnectivityReport plain = connectivity(spec, l, RelaxationSpec::none(), kCap);
    CHECK(plain.points.size() == 2);
    CHECK(plain.component_count() == 2);
    CHECK(plain.witness_pairs.size() == 1);
    CHECK(connectivity(spec, l, RelaxationSpec::everywhere(1), kCap).connected());
    CHECK(connectivity(spec, independence_swap_basis(3, 3), RelaxationSpec::none(), kCap).connected());
}

TEST_CASE("lattice basis of A_3 needs relaxation depth 3") {
    DesignMatrix lambda = lawrence_lifting(a_family_matrix(5));
    MoveSet l = lattice_basis(a_family_matrix(5));
    std::vector<Vec> lifted;
    for (const auto& z : l.moves()) {
        Vec x = z;
        for (Int v : z) x.push_back(-v);
        lifted.push_back(x);
    }
    MoveSet moves(MoveRole::lattice, lifted, std::make_shared<DesignMatrix>(lambda));
    Vec u{0, 1, 2, 3, 4, 0, 0, 0, 0, 0}, v{0, 0, 0, 0, 0, 0, 1, 2, 3, 4};
    FiberSpec spec = FiberSpec::of(lambda, u);
    CHECK(in_fiber(v, spec));
    for (Int q = 0; q <= 2; ++q) CHECK_FALSE(reach(spec, moves, RelaxationSpec::everywhere(q), u, v, kCap).reached);
    ReachResult r = reach(spec, moves, RelaxationSpec::everywhere(3), u, v, kCap);
    CHECK(r.reached);
    CHECK(minimal_relaxation(spec, moves, u, v, 5, kCap) == 3);
    CHECK_FALSE(minimal_relaxation(spec, moves, u, v, 2, kCap).has_value());
}

TEST_CASE("reach agrees with connectivity components") {
    DesignMatrix a = independence_matrix({3, 3});
    MoveSet l = lattice_basis(a);
    Vec u{1, 0, 1, 0, 2, 0, 1, 0, 0};
    FiberSpec spec = FiberSpec::of(a, u);
    ConnectivityReport r = connectivity(spec, l, RelaxationSpec::none(), kCap);
    std::vector<std::size_t> comp(r.points.size());
    for (std::size_t c = 0; c < r.components.size(); ++c)
        for (std::size_t i : r.components[c]) comp[i] = c;
    for (std::size_t i = 0; i < r.points.size(); ++i)
        CHECK(reach(spec, l, RelaxationSpec::none(), r.points[0], r.points[i], kCap).reached == (comp[i] == comp[0]));
}

TEST_CASE("q-bounded Graver subsets connect q-bounded fibers") {
    DesignMatrix a = no_three_way_matrix(2, 2, 3);
    MoveSet g = graver_basis(a, 6);
    REQUIRE(g.complete());
    std::mt19937_64 rng(31);
    std::vector<Vec> margins;
    for (int t = 0; t < 20; ++t) margins.push_back(a.margins(oracle::random_table(rng, 12, 2 + t % 4)));
    CHECK(is_q_bounded_markov(a, margins, g, 1, kCap));
    CHECK(is_q_bounded_markov(a, margins, g, 2, kCap));
}

TEST_CASE("connectivity in an explicit box") {
    DesignMatrix a = independence_matrix({2, 2});
    FiberSpec spec = FiberSpec::of(a, Vec{1, 1, 1, 1});
    CellBounds box{Vec(4, 0), Vec(4, 1)};
    ConnectivityReport r = connectivity_in_box(spec, independence_swap_basis(2, 2), box, kCap);
    CHECK(r.points.size() == 1);
    ConnectivityReport wide = connectivity_in_box(spec, independence_swap_basis(2, 2), {Vec(4, 0), Vec(4, 2)}, kCap);
    CHECK(wide.points.size() == 3);
    CHECK(wide.connected());
}
