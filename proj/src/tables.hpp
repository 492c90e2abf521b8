#pragma once

#include "common.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fibertool {

/// Levels (d_1, ..., d_k) of a k-way table.
class Dims {
public:
    Dims() = default;
    explicit Dims(std::vector<Int> levels);

    std::size_t arity() const noexcept { return levels_.size(); }
    Int level(std::size_t l) const { return levels_.at(l); }
    const std::vector<Int>& levels() const noexcept { return levels_; }
    /// Number of cells D = d_1 * ... * d_k.
    std::size_t cells() const noexcept { return cells_; }

    bool operator==(const Dims&) const = default;

private:
    std::vector<Int> levels_;
    std::size_t cells_ = 1;
};

/// 1-based coordinates (i_1, ..., i_k).
struct MultiIndex {
    std::vector<Int> coords;
    bool operator==(const MultiIndex&) const = default;
    auto operator<=>(const MultiIndex&) const = default;
};

// Row-major flattening: the last coordinate varies fastest.
std::size_t flat_index(const Dims& dims, const MultiIndex& idx);
MultiIndex multi_index(const Dims& dims, std::size_t flat);

/// Calls f(MultiIndex) for every cell in flattening order.
template <class F>
void for_each_index(const Dims& dims, F&& f) {
    MultiIndex idx{std::vector<Int>(dims.arity(), 1)};
    for (std::size_t n = 0; n < dims.cells(); ++n) {
        f(static_cast<const MultiIndex&>(idx));
        for (std::size_t l = dims.arity(); l-- > 0;) {
            if (++idx.coords[l] <= dims.level(l)) break;
            idx.coords[l] = 1;
        }
    }
}

class Table {
public:
    Table() = default;
    Table(Dims dims, Vec cells);
    static Table zeros(Dims dims) { return Table(dims, Vec(dims.cells(), 0)); }

    const Dims& dims() const noexcept { return dims_; }
    const Vec& cells() const noexcept { return cells_; }
    std::span<const Int> span() const noexcept { return cells_; }

    Int at(const MultiIndex& idx) const { return cells_[flat_index(dims_, idx)]; }
    bool nonnegative() const;
    Int total() const;

    bool operator==(const Table&) const = default;

private:
    Dims dims_;
    Vec cells_;
};

/// Flattens a nested JSON array (k levels deep) into a table.
Table flatten(const nlohmann::json& array);
nlohmann::json unflatten(const Table& t);

/// True iff the parts sum to x with no sign cancellation in any cell.
bool conformal_decomposition_check(std::span<const Int> x, const std::vector<Vec>& parts);

/// The conformal order: |x_i| <= |y_i| and x_i * y_i >= 0 for every i.
bool sign_order_leq(std::span<const Int> x, std::span<const Int> y);

/// Marginal of `t` over the coordinates in `face` (0-based positions), row-major in the face.
Vec marginal(const Table& t, const std::vector<std::size_t>& face);

// Text formats. CSV: one line per combination of the leading coordinates, last
// coordinate along the line. Vector: header "k d_1 ... d_k", then the D cells.
void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is, const Dims* expected = nullptr);
void write_vector(std::ostream& os, const Table& t);
Table read_vector(std::istream& is);
/// Dispatches on content: commas mean CSV, otherwise the dims-header vector form.
Table read_table(std::istream& is, const Dims* expected = nullptr);

}  // namespace fibertool
