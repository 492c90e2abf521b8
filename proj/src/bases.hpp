#pragma once

#include "common.hpp"
#include "models.hpp"
#include "tables.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fibertool {

enum class MoveRole { lattice, graver, markov, basic, circuits, imported };

std::string to_string(MoveRole role);
MoveRole parse_role(const std::string& s);

/// Whether a completion ran to the end or stopped at its norm cap.
enum class Completeness { complete, truncated };

/// Finite set of moves, one representative per sign orbit (the first one seen).
/// Samplers draw from the symmetric closure.
class MoveSet {
public:
    MoveSet() = default;
    /// Drops zeros and sign-orbit duplicates, and (when `model` is
    /// given) checks every move against it.
    MoveSet(MoveRole role, std::vector<Vec> moves, std::shared_ptr<const DesignMatrix> model = nullptr,
            Completeness completeness = Completeness::complete);

    MoveRole role() const noexcept { return role_; }
    const std::vector<Vec>& moves() const noexcept { return moves_; }
    std::size_t size() const noexcept { return moves_.size(); }
    bool empty() const noexcept { return moves_.empty(); }
    /// Length of each move (0 for an empty set with no model).
    std::size_t dimension() const noexcept { return dim_; }
    const std::shared_ptr<const DesignMatrix>& model() const noexcept { return model_; }
    Completeness completeness() const noexcept { return completeness_; }
    bool complete() const noexcept { return completeness_ == Completeness::complete; }

    bool contains(std::span<const Int> move) const;

private:
    MoveRole role_ = MoveRole::imported;
    std::vector<Vec> moves_;
    std::size_t dim_ = 0;
    std::shared_ptr<const DesignMatrix> model_;
    Completeness completeness_ = Completeness::complete;
};

/// Returns v or -v, whichever has a positive first nonzero entry.
Vec sign_canonical(std::span<const Int> v);

struct HnfResult {
    Matrix h;
    Matrix u;
    std::size_t rank = 0;
};

/// Column-style Hermite normal form A U = H. Pivots are positive; entries left
/// of a pivot in its row lie in [0, pivot); the trailing n - rank columns of H
/// are zero and the matching columns of U span the integer kernel.
HnfResult hnf_column_style(const Matrix& a);

/// Trailing kernel columns of the HNF transform, normalized so that, read from
/// the last coordinate upward, they are in reduced echelon form.
MoveSet lattice_basis(const DesignMatrix& a);

/// True iff the moves lie in ker A and generate all of ker_Z A.
bool spans_integer_kernel(const MoveSet& moves, const DesignMatrix& a);

/// Pottier completion started from a lattice basis. Elements whose normal form
/// exceeds the infinity-norm cap are discarded and the result marked truncated.
MoveSet graver_basis(const DesignMatrix& a, Int norm_cap);

MoveSet bounded_graver_subset(const MoveSet& graver, Int q);

/// Support-minimal elements of the Graver basis computed with the same cap.
MoveSet circuits(const DesignMatrix& a, Int norm_cap);

/// Degree-4 moves b(i1,i2; j1,j2; k1,k2) of the no-three-way model.
MoveSet basic_moves(Int I, Int J, Int K);

/// All 2x2 swaps of the d1 x d2 independence model.
MoveSet independence_swap_basis(Int d1, Int d2);

/// I x J x 3 table with +1 at (i1,j,k1), (i2,j,k2) and -1 at (i1,j,k2), (i2,j,k1).
/// Indices are 1-based.
Table embedded_two_way_move(Int I, Int J, Int i1, Int i2, Int j, Int k1, Int k2);

/// Basic move b(i1,i2; j1,j2; k1,k2) on an I x J x K table, 1-based.
Table basic_move(Int I, Int J, Int K, Int i1, Int i2, Int j1, Int j2, Int k1, Int k2);

}  // namespace fibertool
