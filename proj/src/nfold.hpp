#pragma once

#include "bases.hpp"
#include "common.hpp"
#include "models.hpp"

#include <vector>

namespace fibertool {

struct NFoldSpec {
    Matrix a;  // p x s
    Matrix b;  // p' x s, possibly with no rows
    Int n = 1;
};

/// Block-diagonal copies of A over one row of n copies of B: (np + p') x (sn).
DesignMatrix build_nfold(const NFoldSpec& spec);

/// Number of blocks x^(j) that are nonzero when x is split into pieces of length s.
std::size_t vector_type(std::span<const Int> x, std::size_t s);

struct GraverComplexity {
    Int g = 0;
    /// Set when a Graver computation hit its cap; g is then only a lower bound.
    bool lower_bound = false;
};

/// Largest 1-norm over the Graver basis of the matrix with columns B g, g in Gr(A).
GraverComplexity graver_complexity(const Matrix& a, const Matrix& b, Int norm_cap);

/// (2 max(|A|_inf, |B|_inf) + 1)^(2^(p+p') - 1).
BigInt graver_complexity_upper_bound(const Matrix& a, const Matrix& b);

struct NFoldGraver {
    MoveSet moves;
    GraverComplexity complexity;
    std::size_t base_size = 0;  // |Gr([A,B]^(g))|, or |Gr([A,B]^(n))| when n <= g
    BigInt bound = 0;           // base_size * C(n, g), or base_size when n <= g
};

/// Graver basis of [A,B]^(n), lifted from [A,B]^(g) by placing the nonzero
/// blocks of each element on every increasing choice of block positions.
NFoldGraver nfold_graver(const NFoldSpec& spec, Int norm_cap);

struct HierarchicalBound {
    NFoldDecomposition decomposition;
    GraverComplexity complexity;
    std::size_t base_size = 0;
    BigInt bound = 0;
};

/// Size bound |Gr([A,B]^(g))| * C(n, g) for A_Delta with the blocks cut along V.
HierarchicalBound hierarchical_graver_size_bound(const SimplicialComplex& complex, const Dims& dims,
                                                 const std::vector<std::size_t>& v, Int norm_cap);

}  // namespace fibertool
