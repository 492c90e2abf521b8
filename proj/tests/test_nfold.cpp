#include <doctest.h>

#include "nfold.hpp"
#include "oracles.hpp"

using namespace fibertool;
using support::error_of;

namespace {

Matrix indep23() { return independence_matrix({2, 3}).entries(); }

std::size_t max_type(const MoveSet& g, std::size_t s) {
    std::size_t t = 0;
    for (const auto& x : g.moves()) t = std::max(t, vector_type(x, s));
    return t;
}

}  // namespace

TEST_CASE("n-fold matrix layout") {
    Matrix a(1, 2, {1, 1}), b(1, 2, {1, 0});
    DesignMatrix m = build_nfold({a, b, 3});
    CHECK(m.entries() == Matrix(4, 6, {1, 1, 0, 0, 0, 0,  //
                                       0, 0, 1, 1, 0, 0,  //
                                       0, 0, 0, 0, 1, 1,  //
                                       1, 0, 1, 0, 1, 0}));
    CHECK(m.row_labels() == std::vector<std::string>{"A1.1", "A2.1", "A3.1", "B.1"});
    CHECK(build_nfold({a, Matrix(0, 2), 2}).rows() == 2);
    CHECK(error_of([&] { build_nfold({a, Matrix(1, 3), 2}); }) == ErrorCode::invalid_argument);
    CHECK(error_of([&] { build_nfold({a, b, 0}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("vector type counts nonzero blocks") {
    CHECK(vector_type(Vec{1, -1, 0, 0, 0, 2}, 2) == 2);
    CHECK(vector_type(Vec{0, 0, 0, 0}, 2) == 0);
    CHECK(error_of([] { vector_type(Vec{1, 2, 3}, 2); }) == ErrorCode::invalid_argument);
}

TEST_CASE("Graver complexity of the 2x3 independence model over the identity") {
    GraverComplexity c = graver_complexity(indep23(), Matrix::identity(6), 10);
    CHECK(c.g == 3);
    CHECK_FALSE(c.lower_bound);
    MoveSet base = graver_basis(build_nfold({indep23(), Matrix::identity(6), 3}), 10);
    CHECK(base.complete());
    CHECK(base.size() == 15);
}

TEST_CASE("Graver complexity equals the largest type seen in direct computations") {
    struct Case {
        Matrix a, b;
    };
    std::vector<Case> cases = {{Matrix(2, 4, {1, 1, 0, 0, 0, 0, 1, 1}), Matrix::identity(4)},
                               {Matrix(1, 2, {1, 1}), Matrix(1, 2, {1, 0})},
                               {Matrix(1, 3, {1, 1, 1}), Matrix(1, 3, {1, 2, 0})},
                               {indep23(), Matrix::identity(6)}};
    for (const auto& c : cases) {
        GraverComplexity gc = graver_complexity(c.a, c.b, 20);
        std::size_t seen = 0;
        for (Int n = 1; n <= gc.g + 1; ++n)
            seen = std::max(seen, max_type(graver_basis(build_nfold({c.a, c.b, n}), 20), c.a.cols()));
        CHECK(static_cast<Int>(seen) == gc.g);
    }
}

TEST_CASE("Graver complexity without linking rows is 1") {
    CHECK(graver_complexity(indep23(), Matrix(0, 6), 10).g == 1);
    CHECK(graver_complexity(indep23(), Matrix(1, 6, {1, 1, 1, 1, 1, 1}), 10).g == 1);
    CHECK(max_type(graver_basis(build_nfold({indep23(), Matrix(0, 6), 3}), 10), 6) == 1);
    CHECK(graver_complexity(Matrix::identity(2), Matrix(1, 2, {1, 1}), 10).g == 0);
}

TEST_CASE("closed-form complexity bound") {
    CHECK(graver_complexity_upper_bound(Matrix(1, 2, {1, 1}), Matrix(1, 2, {1, 0})) == 27);
    CHECK(graver_complexity_upper_bound(Matrix(1, 2, {2, 1}), Matrix(0, 2)) == 5);
    BigInt big = graver_complexity_upper_bound(indep23(), Matrix::identity(6));
    CHECK(big == boost::multiprecision::pow(BigInt(3), (1u << 11) - 1));
    CHECK(big > BigInt(graver_complexity(indep23(), Matrix::identity(6), 10).g));
}

TEST_CASE("lifted Graver basis equals the direct one for n = 4") {
    NFoldSpec spec{indep23(), Matrix::identity(6), 4};
    NFoldGraver lifted = nfold_graver(spec, 10);
    CHECK(lifted.complexity.g == 3);
    CHECK(lifted.base_size == 15);
    CHECK(lifted.bound == 60);
    CHECK(lifted.moves.complete());
    MoveSet direct = graver_basis(build_nfold(spec), 10);
    CHECK(direct.size() == 42);
    CHECK(oracle::as_set(lifted.moves.moves()) == oracle::as_set(direct.moves()));
    CHECK(lifted.moves.size() <= lifted.bound);
}

TEST_CASE("lifting for a second pair of blocks") {
    Matrix a(1, 3, {1, 1, 1}), b(1, 3, {1, 2, 0});
    for (Int n = 4; n <= 5; ++n) {
        NFoldGraver lifted = nfold_graver({a, b, n}, 20);
        MoveSet direct = graver_basis(build_nfold({a, b, n}), 20);
        CHECK(oracle::as_set(lifted.moves.moves()) == oracle::as_set(direct.moves()));
        CHECK(BigInt(direct.size()) <= lifted.bound);
    }
}

TEST_CASE("small n falls back to the direct basis") {
    NFoldGraver r = nfold_graver({indep23(), Matrix::identity(6), 2}, 10);
    MoveSet direct = graver_basis(build_nfold({indep23(), Matrix::identity(6), 2}), 10);
    CHECK(r.base_size == direct.size());
    CHECK(r.bound == direct.size());
}

TEST_CASE("size bound for the four-vertex hierarchical model") {
    auto complex = SimplicialComplex::parse("123,124,34", 4);
    HierarchicalBound hb = hierarchical_graver_size_bound(complex, Dims({2, 2, 2, 3}), {0, 1}, 10);
    CHECK(hb.complexity.g == 3);
    CHECK(hb.base_size == 15);
    CHECK(hb.bound == 15 * 4);
    MoveSet direct = graver_basis(hierarchical_design_matrix(complex, Dims({2, 2, 2, 3})), 10);
    CHECK(direct.complete());
    CHECK(BigInt(direct.size()) <= hb.bound);

    HierarchicalBound big = hierarchical_graver_size_bound(complex, Dims({3, 3, 2, 3}), {0, 1}, 10);
    CHECK(big.bound == 15 * 84);
}
