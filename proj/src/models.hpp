#pragma once

#include "common.hpp"
#include "tables.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fibertool {

/// Maximal faces of a simplicial complex on the vertices {0, ..., ground_size-1}.
/// Faces are stored 0-based and sorted; text forms use 1-based vertex labels.
class SimplicialComplex {
public:
    SimplicialComplex(std::size_t ground_size, std::vector<std::vector<std::size_t>> faces);

    /// Parses "12,23,13" (1-based digits) or a JSON list such as [[1,2],[2,3]].
    static SimplicialComplex parse(const std::string& text, std::size_t ground_size);

    std::size_t ground_size() const noexcept { return ground_size_; }
    const std::vector<std::vector<std::size_t>>& faces() const noexcept { return faces_; }
    std::string to_string() const;

private:
    std::size_t ground_size_;
    std::vector<std::vector<std::size_t>> faces_;
};

class DesignMatrix {
public:
    DesignMatrix() = default;
    DesignMatrix(Matrix entries, std::vector<std::string> row_labels = {});

    const Matrix& entries() const noexcept { return entries_; }
    std::size_t rows() const noexcept { return entries_.rows(); }
    std::size_t cols() const noexcept { return entries_.cols(); }
    const std::vector<std::string>& row_labels() const noexcept { return labels_; }

    /// Sufficient statistic t(u) = A u.
    Vec margins(std::span<const Int> u) const { return entries_.apply(u); }
    bool in_kernel(std::span<const Int> x) const { return is_zero(entries_.apply(x)); }

private:
    Matrix entries_;
    std::vector<std::string> labels_;
};

/// Design matrix of the hierarchical model with the given faces. Rows: faces in
/// order, marginal cells of each face in row-major order.
DesignMatrix hierarchical_design_matrix(const SimplicialComplex& complex, const Dims& dims);

/// Same construction without validation; faces may be empty and `levels` may be
/// empty (one cell). Used for links and deletions of complexes.
DesignMatrix marginal_design(const std::vector<std::vector<std::size_t>>& faces, const std::vector<Int>& levels);

DesignMatrix independence_matrix(const std::vector<Int>& levels);
DesignMatrix no_three_way_matrix(Int I, Int J, Int K);

/// [[A, 0], [I_n, I_n]]; column i is paired with column n+i.
DesignMatrix lawrence_lifting(const DesignMatrix& a);

/// The (n-2) x n banded matrix with rows (.., 1, -2, 1, ..).
DesignMatrix a_family_matrix(Int n);

struct NFoldDecomposition {
    DesignMatrix a_block;
    DesignMatrix b_block;
    Int n = 0;
    /// row_order[i] / col_order[j]: row / column of A_Delta placed at position i / j.
    std::vector<std::size_t> row_order;
    std::vector<std::size_t> col_order;
};

/// Reorders A_Delta into [A, B]^(n) with n = prod_{l in V} d_l. `v` holds 0-based vertices.
NFoldDecomposition nfold_block_decomposition(const SimplicialComplex& complex, const Dims& dims,
                                             const std::vector<std::size_t>& v);

/// A model resolved from the command-line mini-language or its JSON form.
struct Model {
    std::string kind;  // independence | no3way | complex | afamily | lawrence-afamily | matrix
    DesignMatrix matrix;
    std::optional<SimplicialComplex> complex;
    std::optional<Dims> dims;
};

/// "independence 4 4", "no3way 3 3 3", "complex 12,23 dims 2 2 2", "afamily 5",
/// "lawrence-afamily 5", or a JSON object {"complex": [[1,2],[2,3]], "dims": [2,2,2]}.
Model parse_model(const std::string& spec);

}  // namespace fibertool
