#include "fibers.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace fibertool {

Vec RelaxationSpec::lower_bounds(std::size_t n) const {
    require(q >= 0, "relaxation depth q must be nonnegative");
    Vec lower(n, 0);
    if (!cells) {
        std::fill(lower.begin(), lower.end(), -q);
    } else {
        for (std::size_t c : *cells) {
            require(c < n, "relaxation cell out of range");
            lower[c] = -q;
        }
    }
    return lower;
}

bool in_fiber(std::span<const Int> u, const FiberSpec& spec) {
    return in_relaxed_fiber(u, spec, RelaxationSpec::none());
}

bool in_relaxed_fiber(std::span<const Int> u, const FiberSpec& spec, const RelaxationSpec& relax) {
    require(u.size() == spec.cells(), "table size does not match the model");
    Vec lower = relax.lower_bounds(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < lower[i]) return false;
    return spec.model->margins(u) == spec.margins;
}

CellBounds relaxed_bounds(const FiberSpec& spec, const RelaxationSpec& relax) {
    const Matrix& a = spec.model->entries();
    require(spec.margins.size() == a.rows(), "margin vector length does not match the model");
    const std::size_t n = a.cols();
    CellBounds b{relax.lower_bounds(n), Vec(n, std::numeric_limits<Int>::max())};
    std::vector<bool> covered(n, false);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        if (std::any_of(row.begin(), row.end(), [](Int x) { return x < 0; })) continue;
        // a_c x_c <= b_r - sum_{c' != c} a_c' lower_c'
        Int slack = spec.margins[r];
        for (std::size_t c = 0; c < n; ++c) slack = checked_add(slack, -checked_mul(row[c], b.lower[c]));
        for (std::size_t c = 0; c < n; ++c) {
            if (row[c] == 0) continue;
            Int room = checked_add(slack, checked_mul(row[c], b.lower[c]));
            Int ub = room >= 0 ? room / row[c] : -((-room + row[c] - 1) / row[c]);
            b.upper[c] = std::min(b.upper[c], ub);
            covered[c] = true;
        }
    }
    for (std::size_t c = 0; c < n; ++c)
        if (!covered[c])
            fail(ErrorCode::invalid_argument,
                 "fiber is unbounded: cell " + std::to_string(c + 1) + " is not covered by a nonnegative row");
    return b;
}

namespace {

Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

class Enumerator {
public:
    Enumerator(const FiberSpec& spec, const CellBounds& bounds, std::size_t cap,
               const std::function<void(const Vec&)>& visit)
        : a_(spec.model->entries()), lo_(bounds.lower), hi_(bounds.upper), cap_(cap), visit_(visit) {
        const std::size_t n = a_.cols(), m = a_.rows();
        require(spec.margins.size() == m, "margin vector length does not match the model");
        require(lo_.size() == n && hi_.size() == n, "cell bounds have the wrong length");
        col_entries_.resize(n);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (a_(r, c) != 0) col_entries_[c].push_back({r, a_(r, c)});
        residual_ = spec.margins;
        min_rest_.assign(m, 0);
        max_rest_.assign(m, 0);
        for (std::size_t c = 0; c < n; ++c)
            for (auto [r, coef] : col_entries_[c]) {
                auto [mn, mx] = contribution(c, coef);
                min_rest_[r] = checked_add(min_rest_[r], mn);
                max_rest_[r] = checked_add(max_rest_[r], mx);
            }
        x_.assign(n, 0);
    }

    void run() {
        for (std::size_t r = 0; r < a_.rows(); ++r)
            if (residual_[r] < min_rest_[r] || residual_[r] > max_rest_[r]) return;
        for (std::size_t c = 0; c < a_.cols(); ++c)
            if (lo_[c] > hi_[c]) return;
        descend(0);
    }

private:
    std::pair<Int, Int> contribution(std::size_t c, Int coef) const {
        Int p = checked_mul(coef, lo_[c]), q = checked_mul(coef, hi_[c]);
        return {std::min(p, q), std::max(p, q)};
    }

    void descend(std::size_t c) {
        if (c == a_.cols()) {
            if (++count_ > cap_) fail(ErrorCode::cap_exceeded, "fiber has more than " + std::to_string(cap_) + " points");
            visit_(x_);
            return;
        }
        Int lo = lo_[c], hi = hi_[c];
        for (auto [r, coef] : col_entries_[c]) {
            auto [mn, mx] = contribution(c, coef);
            Int rest_min = min_rest_[r] - mn, rest_max = max_rest_[r] - mx;
            // coef * x in [residual - rest_max, residual - rest_min]
            Int low = residual_[r] - rest_max, high = residual_[r] - rest_min;
            if (coef > 0) {
                lo = std::max(lo, ceil_div(low, coef));
                hi = std::min(hi, floor_div(high, coef));
            } else {
                lo = std::max(lo, ceil_div(high, coef));
                hi = std::min(hi, floor_div(low, coef));
            }
            if (lo > hi) return;
        }
        for (auto [r, coef] : col_entries_[c]) {
            auto [mn, mx] = contribution(c, coef);
            min_rest_[r] -= mn;
            max_rest_[r] -= mx;
        }
        for (Int v = hi; v >= lo; --v) {
            x_[c] = v;
            for (auto [r, coef] : col_entries_[c]) residual_[r] -= coef * v;
            descend(c + 1);
            for (auto [r, coef] : col_entries_[c]) residual_[r] += coef * v;
        }
        x_[c] = 0;
        for (auto [r, coef] : col_entries_[c]) {
            auto [mn, mx] = contribution(c, coef);
            min_rest_[r] += mn;
            max_rest_[r] += mx;
        }
    }

    const Matrix& a_;
    const Vec& lo_;
    const Vec& hi_;
    std::size_t cap_;
    const std::function<void(const Vec&)>& visit_;
    std::vector<std::vector<std::pair<std::size_t, Int>>> col_entries_;
    Vec residual_, min_rest_, max_rest_, x_;
    std::size_t count_ = 0;
};

}  // namespace

void enumerate_points(const FiberSpec& spec, const CellBounds& bounds, std::size_t cap,
                      const std::function<void(const Vec&)>& visit) {
    Enumerator(spec, bounds, cap, visit).run();
}

std::vector<Vec> enumerate_fiber(const FiberSpec& spec, const RelaxationSpec& relax, std::size_t cap) {
    std::vector<Vec> out;
    enumerate_points(spec, relaxed_bounds(spec, relax), cap, [&](const Vec& x) { out.push_back(x); });
    return out;
}

namespace {

// Number of x with 0 <= x_i <= bound_i and sum x = total.
BigInt bounded_compositions(const Vec& bound, Int total) {
    std::vector<BigInt> ways(static_cast<std::size_t>(total) + 1, 0);
    ways[0] = 1;
    for (Int b : bound) {
        std::vector<BigInt> next(ways.size(), 0);
        // sliding-window sum over the last b+1 entries
        BigInt window = 0;
        for (std::size_t t = 0; t < ways.size(); ++t) {
            window += ways[t];
            if (static_cast<Int>(t) - b - 1 >= 0) window -= ways[t - static_cast<std::size_t>(b) - 1];
            next[t] = window;
        }
        ways = std::move(next);
    }
    return ways[static_cast<std::size_t>(total)];
}

void for_each_composition(const Vec& bound, Int total, Vec& x, std::size_t i, const std::function<void(const Vec&)>& f) {
    if (i + 1 == bound.size()) {
        if (total <= bound[i]) {
            x[i] = total;
            f(x);
        }
        return;
    }
    Int rest_cap = 0;
    for (std::size_t j = i + 1; j < bound.size(); ++j) rest_cap += bound[j];
    for (Int v = std::max<Int>(0, total - rest_cap); v <= std::min(bound[i], total); ++v) {
        x[i] = v;
        for_each_composition(bound, total - v, x, i + 1, f);
    }
}

}  // namespace

BigInt count_two_way_fiber(const Vec& row_sums, const Vec& col_sums) {
    require(!row_sums.empty() && !col_sums.empty(), "two-way fiber needs rows and columns");
    for (Int v : row_sums) require(v >= 0, "row sums must be nonnegative");
    for (Int v : col_sums) require(v >= 0, "column sums must be nonnegative");
    Int rt = std::accumulate(row_sums.begin(), row_sums.end(), Int{0});
    Int ct = std::accumulate(col_sums.begin(), col_sums.end(), Int{0});
    require(rt == ct, "row and column totals differ");

    Vec cols = col_sums;
    std::sort(cols.begin(), cols.end());
    if (cols.size() == 1) return 1;

    std::map<Vec, BigInt> states{{row_sums, 1}};
    for (std::size_t j = 0; j + 2 < cols.size(); ++j) {
        std::map<Vec, BigInt> next;
        for (const auto& [res, ways] : states) {
            Vec x(res.size());
            for_each_composition(res, cols[j], x, 0, [&](const Vec& take) {
                Vec r = res;
                for (std::size_t i = 0; i < r.size(); ++i) r[i] -= take[i];
                next[r] += ways;
            });
        }
        states = std::move(next);
    }
    // The last two columns: choose the second-to-last, the last one is forced.
    BigInt total = 0;
    for (const auto& [res, ways] : states) total += ways * bounded_compositions(res, cols[cols.size() - 2]);
    return total;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<Vec> symmetric_moves(const MoveSet& moves) {
    std::vector<Vec> out;
    for (const auto& m : moves.moves()) {
        out.push_back(m);
        out.push_back(negated(m));
    }
    return out;
}

}  // namespace

ConnectivityReport connectivity_in_box(const FiberSpec& spec, const MoveSet& moves, const CellBounds& bounds,
                                       std::size_t cap) {
    require(moves.empty() || moves.dimension() == spec.cells(), "move length does not match the model");
    std::vector<Vec> nodes;
    enumerate_points(spec, bounds, cap, [&](const Vec& x) { nodes.push_back(x); });
    std::unordered_map<Vec, std::size_t, VecHash> index;
    index.reserve(nodes.size() * 2);
    for (std::size_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    UnionFind uf(nodes.size());
    Vec y;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (const auto& m : moves.moves()) {
            y = nodes[i];
            for (std::size_t c = 0; c < y.size(); ++c) y[c] += m[c];
            if (auto it = index.find(y); it != index.end()) uf.unite(i, it->second);
        }

    ConnectivityReport rep;
    rep.relaxed_points = nodes.size();
    std::map<std::size_t, std::size_t> comp_of_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::any_of(nodes[i].begin(), nodes[i].end(), [](Int x) { return x < 0; })) continue;
        std::size_t root = uf.find(i);
        auto [it, fresh] = comp_of_root.emplace(root, rep.components.size());
        if (fresh) rep.components.emplace_back();
        rep.components[it->second].push_back(rep.points.size());
        rep.points.push_back(nodes[i]);
    }
    for (std::size_t c = 1; c < rep.components.size(); ++c)
        rep.witness_pairs.emplace_back(rep.components[0].front(), rep.components[c].front());
    return rep;
}

ConnectivityReport connectivity(const FiberSpec& spec, const MoveSet& moves, const RelaxationSpec& relax,
                                std::size_t cap) {
    return connectivity_in_box(spec, moves, relaxed_bounds(spec, relax), cap);
}

bool is_q_bounded_markov(const DesignMatrix& a, const std::vector<Vec>& margin_family, const MoveSet& graver, Int q,
                         std::size_t cap) {
    MoveSet bounded = bounded_graver_subset(graver, q);
    auto model = std::make_shared<DesignMatrix>(a);
    for (const auto& b : margin_family) {
        FiberSpec spec{model, b};
        CellBounds box = relaxed_bounds(spec, RelaxationSpec::none());
        for (auto& u : box.upper) u = std::min(u, q);
        if (!connectivity_in_box(spec, bounded, box, cap).connected()) return false;
    }
    return true;
}

ReachResult reach(const FiberSpec& spec, const MoveSet& moves, const RelaxationSpec& relax, const Vec& from,
                  const Vec& to, std::size_t cap) {
    require(in_relaxed_fiber(from, spec, relax) && in_relaxed_fiber(to, spec, relax),
            "both endpoints must lie in the relaxed fiber");
    const Vec lower = relax.lower_bounds(spec.cells());
    const auto sym = symmetric_moves(moves);
    std::unordered_map<Vec, bool, VecHash> seen;
    std::deque<Vec> queue{from};
    seen.emplace(from, true);
    ReachResult res;
    while (!queue.empty()) {
        Vec x = std::move(queue.front());
        queue.pop_front();
        ++res.visited;
        if (x == to) {
            res.reached = true;
            return res;
        }
        for (const auto& m : sym) {
            Vec y = x;
            bool ok = true;
            for (std::size_t c = 0; c < y.size() && ok; ++c) {
                y[c] += m[c];
                ok = y[c] >= lower[c];
            }
            if (!ok || seen.count(y)) continue;
            if (seen.size() >= cap) fail(ErrorCode::cap_exceeded, "search visited more than " + std::to_string(cap) + " tables");
            seen.emplace(y, true);
            queue.push_back(std::move(y));
        }
    }
    return res;
}

std::optional<Int> minimal_relaxation(const FiberSpec& spec, const MoveSet& moves, const Vec& u, const Vec& v,
                                      Int q_max, std::size_t cap) {
    for (Int q = 0; q <= q_max; ++q)
        if (reach(spec, moves, RelaxationSpec::everywhere(q), u, v, cap).reached) return q;
    return std::nullopt;
}

}  // namespace fibertool
