#include <doctest.h>

#include "bases.hpp"
#include "oracles.hpp"

using namespace fibertool;
using support::error_of;

namespace {

Matrix a1() { return Matrix(1, 3, {1, -2, 1}); }

BigInt abs_det(const Matrix& m) {
    BigInt d = determinant(m);
    return d < 0 ? BigInt(-d) : d;
}

}  // namespace

TEST_CASE("column HNF of (1 -2 1)") {
    HnfResult r = hnf_column_style(a1());
    CHECK(r.rank == 1);
    CHECK(r.h == Matrix(1, 3, {1, 0, 0}));
    CHECK(a1() * r.u == r.h);
    CHECK(abs_det(r.u) == 1);
    CHECK(r.u.column(1) == Vec{2, 1, 0});
    CHECK(r.u.column(2) == Vec{-1, 0, 1});
}

TEST_CASE("column HNF of the identity and of A_{n-2}") {
    HnfResult id = hnf_column_style(Matrix::identity(3));
    CHECK(id.h == Matrix::identity(3));
    CHECK(id.u == Matrix::identity(3));

    for (Int n = 4; n <= 9; ++n) {
        Matrix a = a_family_matrix(n).entries();
        HnfResult r = hnf_column_style(a);
        Matrix expect(static_cast<std::size_t>(n - 2), static_cast<std::size_t>(n));
        for (Int i = 0; i < n - 2; ++i) expect(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1;
        CHECK(r.h == expect);
        CHECK(a * r.u == r.h);
        CHECK(abs_det(r.u) == 1);
    }
}

TEST_CASE("HNF invariants on random matrices") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int t = 0; t < 40; ++t) {
        const std::size_t m = 1 + static_cast<std::size_t>(t % 3), n = 3 + static_cast<std::size_t>(t % 4);
        Matrix a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(rng);
        HnfResult r = hnf_column_style(a);
        CHECK(a * r.u == r.h);
        CHECK(abs_det(r.u) == 1);
        CHECK(r.rank == rank(a));
        for (std::size_t j = r.rank; j < n; ++j) CHECK(is_zero(r.h.column(j)));
    }
}

TEST_CASE("lattice basis of A_{n-2} is the pair from the unimodular transform") {
    MoveSet l = lattice_basis(a_family_matrix(5));
    REQUIRE(l.size() == 2);
    CHECK(l.moves()[0] == Vec{4, 3, 2, 1, 0});
    CHECK(l.moves()[1] == Vec{-3, -2, -1, 0, 1});
    for (Int n = 4; n <= 10; ++n) {
        MoveSet b = lattice_basis(a_family_matrix(n));
        Vec z1, z2;
        for (Int i = 0; i < n; ++i) {
            z1.push_back(std::max<Int>(n - 1 - i, 0));
            z2.push_back(i - (n - 2));
        }
        z1[static_cast<std::size_t>(n - 1)] = 0;
        z2[static_cast<std::size_t>(n - 2)] = 0;
        z2[static_cast<std::size_t>(n - 1)] = 1;
        CHECK(b.moves() == std::vector<Vec>{z1, z2});
    }
}

TEST_CASE("lattice bases: trivial kernel, rank-1 kernel, spans") {
    CHECK(lattice_basis(DesignMatrix(Matrix::identity(3))).empty());

    DesignMatrix i22 = independence_matrix({2, 2});
    MoveSet b = lattice_basis(i22);
    REQUIRE(b.size() == 1);
    CHECK(oracle::canonical(b.moves()[0]) == Vec{1, -1, -1, 1});
    CHECK(spans_integer_kernel(b, i22));

    MoveSet doubled(MoveRole::imported, {Vec{2, -2, -2, 2}});
    CHECK_FALSE(spans_integer_kernel(doubled, i22));

    CHECK(spans_integer_kernel(basic_moves(3, 3, 3), no_three_way_matrix(3, 3, 3)));
    CHECK(spans_integer_kernel(independence_swap_basis(4, 4), independence_matrix({4, 4})));
    for (auto m : {independence_matrix({3, 4}), no_three_way_matrix(2, 3, 3), a_family_matrix(7)}) {
        MoveSet l = lattice_basis(m);
        CHECK(spans_integer_kernel(l, m));
        CHECK(l.size() == m.cols() - rank(m.entries()));
    }
}

TEST_CASE("move sets keep one representative per sign pair") {
    MoveSet s(MoveRole::imported, {Vec{1, -1}, Vec{-1, 1}, Vec{0, 0}, Vec{2, -2}});
    CHECK(s.size() == 2);
    CHECK(s.moves()[0] == Vec{1, -1});
    CHECK(s.contains(Vec{-1, 1}));
    CHECK(sign_canonical(Vec{0, -2, 1}) == Vec{0, 2, -1});
    auto a = std::make_shared<DesignMatrix>(independence_matrix({2, 2}));
    CHECK(error_of([&] { MoveSet(MoveRole::imported, {Vec{1, 0, 0, 0}}, a); }) == ErrorCode::invalid_argument);
}

TEST_CASE("Graver basis of the 2x3 independence model") {
    MoveSet g = graver_basis(independence_matrix({2, 3}), 10);
    CHECK(g.complete());
    CHECK(g.size() == 3);
    CHECK(oracle::as_set(g.moves()) == oracle::graver(independence_matrix({2, 3}).entries(), 2));
}

TEST_CASE("Graver bases agree with brute force") {
    std::vector<Matrix> cases = {a1(),
                                 a_family_matrix(4).entries(),
                                 independence_matrix({2, 2}).entries(),
                                 Matrix(1, 4, {1, 1, 1, 1}),
                                 Matrix(1, 3, {1, 2, 3}),
                                 Matrix(2, 4, {1, 1, 1, 1, 0, 1, 2, 3}),
                                 lawrence_lifting(DesignMatrix(a1())).entries()};
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> entry(-2, 2);
    for (int t = 0; t < 8; ++t) {
        Matrix a(1, 4);
        for (std::size_t j = 0; j < 4; ++j) a(0, j) = entry(rng);
        cases.push_back(a);
    }
    for (const auto& a : cases) {
        MoveSet g = graver_basis(DesignMatrix(a), 6);
        if (!g.complete()) continue;
        Int cap = 0;
        for (const auto& m : g.moves()) cap = std::max(cap, norm_inf(m));
        INFO("matrix cols ", a.cols());
        CHECK(oracle::as_set(g.moves()) == oracle::graver(a, std::max<Int>(cap, 1) + 1));
    }
}

TEST_CASE("Graver output is sorted by 1-norm and truncation is flagged") {
    MoveSet g = graver_basis(DesignMatrix(Matrix(1, 3, {1, 2, 3})), 10);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(norm1(g.moves()[i - 1]) <= norm1(g.moves()[i]));
    MoveSet t = graver_basis(DesignMatrix(Matrix(1, 3, {1, 2, 5})), 2);
    CHECK_FALSE(t.complete());
    for (const auto& m : t.moves()) CHECK(norm_inf(m) <= 2);
    CHECK(error_of([] { graver_basis(DesignMatrix(a1()), 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("circuits lie in the Graver basis and have minimal support") {
    for (auto a : {independence_matrix({2, 3}), independence_matrix({3, 3}), DesignMatrix(Matrix(1, 3, {1, 2, 3}))}) {
        MoveSet g = graver_basis(a, 8);
        MoveSet c = circuits(a, 8);
        CHECK(!c.empty());
        for (const auto& m : c.moves()) {
            CHECK(g.contains(m));
            for (const auto& other : g.moves()) {
                bool inside = true, strict = false;
                for (std::size_t i = 0; i < m.size(); ++i) {
                    if (other[i] != 0 && m[i] == 0) inside = false;
                    if (other[i] == 0 && m[i] != 0) strict = true;
                }
                CHECK_FALSE((inside && strict));
            }
        }
    }
    CHECK(circuits(independence_matrix({2, 3}), 8).size() == 3);
    CHECK(circuits(DesignMatrix(Matrix(1, 3, {1, 2, 3})), 8).size() == 3);
}

TEST_CASE("bounded Graver subsets") {
    MoveSet g = graver_basis(DesignMatrix(Matrix(1, 3, {1, 2, 3})), 10);
    for (Int q = 1; q <= 3; ++q) {
        MoveSet b = bounded_graver_subset(g, q);
        std::size_t expect = 0;
        for (const auto& m : g.moves()) expect += norm_inf(m) <= q ? 1 : 0;
        CHECK(b.size() == expect);
        for (const auto& m : b.moves()) CHECK(norm_inf(m) <= q);
    }
    CHECK(error_of([] { bounded_graver_subset(basic_moves(2, 2, 2), 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("basic moves and swaps") {
    MoveSet b = basic_moves(3, 3, 3);
    CHECK(b.size() == 27);
    DesignMatrix a = no_three_way_matrix(3, 3, 3);
    for (const auto& m : b.moves()) {
        CHECK(a.in_kernel(m));
        CHECK(norm1(m) == 8);
    }
    CHECK(basic_moves(2, 3, 4).size() == 1 * 3 * 6);
    Table t = basic_move(2, 2, 2, 1, 2, 1, 2, 1, 2);
    CHECK(t.cells() == Vec{1, -1, -1, 1, -1, 1, 1, -1});

    CHECK(independence_swap_basis(4, 4).size() == 36);
    CHECK(independence_swap_basis(2, 3).size() == 3);

    Table e = embedded_two_way_move(3, 3, 1, 2, 2, 1, 3);
    CHECK(norm1(e.cells()) == 4);
    CHECK(e.at({{1, 2, 1}}) == 1);
    CHECK(e.at({{2, 2, 3}}) == 1);
    CHECK(e.at({{1, 2, 3}}) == -1);
    CHECK(e.at({{2, 2, 1}}) == -1);
}

TEST_CASE("Graver basis of the 3x3x3 no-three-way model has 795 elements") {
    MoveSet g = graver_basis(no_three_way_matrix(3, 3, 3), 3);
    CHECK(g.complete());
    CHECK(g.size() == 795);
    CHECK(spans_integer_kernel(g, no_three_way_matrix(3, 3, 3)));
}
