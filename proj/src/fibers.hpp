#pragma once

#include "bases.hpp"
#include "common.hpp"
#include "models.hpp"
#include "tables.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace fibertool {

struct VecHash {
    std::size_t operator()(const Vec& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

/// {x : A x = b} together with the model.
struct FiberSpec {
    std::shared_ptr<const DesignMatrix> model;
    Vec margins;

    static FiberSpec of(const DesignMatrix& a, std::span<const Int> u) {
        return FiberSpec{std::make_shared<DesignMatrix>(a), a.margins(u)};
    }
    std::size_t cells() const { return model->cols(); }
};

/// Cells in S may drop to -q; all others stay nonnegative. An empty optional S
/// means every cell.
struct RelaxationSpec {
    Int q = 0;
    std::optional<std::vector<std::size_t>> cells;

    static RelaxationSpec none() { return {}; }
    static RelaxationSpec everywhere(Int q) { return {q, std::nullopt}; }
    static RelaxationSpec on(Int q, std::vector<std::size_t> s) { return {q, std::move(s)}; }

    /// Per-cell lower bounds -q * 1_S.
    Vec lower_bounds(std::size_t cells) const;
};

struct CellBounds {
    Vec lower;
    Vec upper;
};

bool in_fiber(std::span<const Int> u, const FiberSpec& spec);
bool in_relaxed_fiber(std::span<const Int> u, const FiberSpec& spec, const RelaxationSpec& relax);

/// Finite upper bounds for every cell of the relaxed fiber, read off rows of A
/// with nonnegative entries. Throws when some cell is not covered by such a row.
CellBounds relaxed_bounds(const FiberSpec& spec, const RelaxationSpec& relax);

/// Visits every integer point of {A x = b, lower <= x <= upper}: cells in
/// flattening order, values descending. Throws cap_exceeded past `cap` points.
void enumerate_points(const FiberSpec& spec, const CellBounds& bounds, std::size_t cap,
                      const std::function<void(const Vec&)>& visit);

std::vector<Vec> enumerate_fiber(const FiberSpec& spec, const RelaxationSpec& relax, std::size_t cap);

/// Number of nonnegative integer matrices with the given row and column sums.
BigInt count_two_way_fiber(const Vec& row_sums, const Vec& col_sums);

struct ConnectivityReport {
    std::vector<Vec> points;                          // nonnegative points of the fiber
    std::vector<std::vector<std::size_t>> components; // partition of `points` (indices)
    std::size_t relaxed_points = 0;                   // vertices of the graph
    std::vector<std::pair<std::size_t, std::size_t>> witness_pairs;

    std::size_t component_count() const { return components.size(); }
    bool connected() const { return components.size() <= 1; }
};

/// Graph on the relaxed fiber with edges x -> x +- m; reports how the
/// nonnegative points split into components.
ConnectivityReport connectivity(const FiberSpec& spec, const MoveSet& moves, const RelaxationSpec& relax,
                                std::size_t cap);

/// Same graph restricted to an explicit box of cell bounds.
ConnectivityReport connectivity_in_box(const FiberSpec& spec, const MoveSet& moves, const CellBounds& bounds,
                                       std::size_t cap);

/// Every fiber F^q(b) in the family is connected by the moves of G with entries bounded by q.
bool is_q_bounded_markov(const DesignMatrix& a, const std::vector<Vec>& margin_family, const MoveSet& graver, Int q,
                         std::size_t cap);

/// Breadth-first search from `from` inside the relaxed fiber. Returns the
/// number of states visited and whether `to` was reached.
struct ReachResult {
    bool reached = false;
    std::size_t visited = 0;
};
ReachResult reach(const FiberSpec& spec, const MoveSet& moves, const RelaxationSpec& relax, const Vec& from,
                  const Vec& to, std::size_t cap);

/// Smallest q <= q_max with u and v connected in F_{-q}(b), if any.
std::optional<Int> minimal_relaxation(const FiberSpec& spec, const MoveSet& moves, const Vec& u, const Vec& v,
                                      Int q_max, std::size_t cap);

}  // namespace fibertool
