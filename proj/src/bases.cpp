#include "bases.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace fibertool {

std::string to_string(MoveRole role) {
    switch (role) {
        case MoveRole::lattice: return "lattice";
        case MoveRole::graver: return "graver";
        case MoveRole::markov: return "markov";
        case MoveRole::basic: return "basic";
        case MoveRole::circuits: return "circuits";
        case MoveRole::imported: return "imported";
    }
    return "imported";
}

MoveRole parse_role(const std::string& s) {
    for (MoveRole r : {MoveRole::lattice, MoveRole::graver, MoveRole::markov, MoveRole::basic, MoveRole::circuits,
                       MoveRole::imported})
        if (to_string(r) == s) return r;
    fail(ErrorCode::parse, "unknown move set role '" + s + "'");
}

Vec sign_canonical(std::span<const Int> v) {
    for (Int x : v) {
        if (x > 0) return Vec(v.begin(), v.end());
        if (x < 0) return negated(v);
    }
    return Vec(v.begin(), v.end());
}

MoveSet::MoveSet(MoveRole role, std::vector<Vec> moves, std::shared_ptr<const DesignMatrix> model,
                 Completeness completeness)
    : role_(role), model_(std::move(model)), completeness_(completeness) {
    dim_ = model_ ? model_->cols() : (moves.empty() ? 0 : moves.front().size());
    std::set<Vec> seen;
    for (auto& m : moves) {
        require(m.size() == dim_, "all moves must have the same length");
        if (is_zero(m)) continue;
        if (model_ && !model_->in_kernel(m)) fail(ErrorCode::invalid_argument, "move is not in the kernel of the model");
        if (seen.insert(sign_canonical(m)).second) moves_.push_back(std::move(m));
    }
}

bool MoveSet::contains(std::span<const Int> move) const {
    Vec c = sign_canonical(move);
    return std::any_of(moves_.begin(), moves_.end(), [&](const Vec& m) { return sign_canonical(m) == c; });
}

namespace {

using BigCol = std::vector<BigInt>;

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// x*a + y*b = g >= 0
void ext_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& x, BigInt& y) {
    BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    g = old_r;
    x = old_s;
    y = old_t;
}

// Column echelon form over the rows listed in `order`; every column carries all
// of its entries along. Returns the number of pivots; pivot columns come first.
std::size_t column_echelon(std::vector<BigCol>& cols, const std::vector<std::size_t>& order) {
    const std::size_t ncols = cols.size();
    std::size_t c = 0;
    for (std::size_t row : order) {
        if (c == ncols) break;
        for (std::size_t j = c + 1; j < ncols; ++j) {
            if (cols[j][row] == 0) continue;
            if (cols[c][row] == 0) {
                std::swap(cols[c], cols[j]);
                continue;
            }
            BigInt a = cols[c][row], b = cols[j][row], g, x, y;
            ext_gcd(a, b, g, x, y);
            BigInt ag = a / g, bg = b / g;
            BigCol& cc = cols[c];
            BigCol& cj = cols[j];
            for (std::size_t r = 0; r < cc.size(); ++r) {
                BigInt vc = cc[r], vj = cj[r];
                cc[r] = x * vc + y * vj;
                cj[r] = -bg * vc + ag * vj;
            }
        }
        if (cols[c][row] == 0) continue;
        if (cols[c][row] < 0)
            for (auto& e : cols[c]) e = -e;
        const BigInt p = cols[c][row];
        for (std::size_t j = 0; j < c; ++j) {
            BigInt q = floor_div(cols[j][row], p);
            if (q == 0) continue;
            for (std::size_t r = 0; r < cols[j].size(); ++r) cols[j][r] -= q * cols[c][r];
        }
        ++c;
    }
    return c;
}

std::vector<std::size_t> iota(std::size_t n, bool reversed = false) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = reversed ? n - 1 - i : i;
    return v;
}

// Normalizes kernel columns bottom-up (see lattice_basis).
void normalize_kernel(std::vector<BigCol>& kernel, std::size_t n) {
    if (kernel.empty()) return;
    column_echelon(kernel, iota(n, true));
    std::reverse(kernel.begin(), kernel.end());
}

}  // namespace

HnfResult hnf_column_style(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<BigCol> cols(n, BigCol(m + n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < m; ++r) cols[j][r] = a(r, j);
        cols[j][m + j] = 1;
    }
    const std::size_t rk = column_echelon(cols, iota(m));

    std::vector<BigCol> kernel;
    for (std::size_t j = rk; j < n; ++j) kernel.emplace_back(cols[j].begin() + static_cast<std::ptrdiff_t>(m), cols[j].end());
    normalize_kernel(kernel, n);

    HnfResult out{Matrix(m, n), Matrix(n, n), rk};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < m; ++r) out.h(r, j) = to_int(cols[j][r]);
        for (std::size_t r = 0; r < n; ++r)
            out.u(r, j) = to_int(j < rk ? cols[j][m + r] : kernel[j - rk][r]);
    }
    return out;
}

MoveSet lattice_basis(const DesignMatrix& a) {
    HnfResult hnf = hnf_column_style(a.entries());
    std::vector<Vec> moves;
    for (std::size_t j = hnf.rank; j < a.cols(); ++j) moves.push_back(hnf.u.column(j));
    return MoveSet(MoveRole::lattice, std::move(moves), std::make_shared<DesignMatrix>(a));
}

bool spans_integer_kernel(const MoveSet& moves, const DesignMatrix& a) {
    const std::size_t n = a.cols();
    for (const auto& m : moves.moves()) {
        require(m.size() == n, "move length does not match the model");
        if (!a.in_kernel(m)) return false;
    }
    auto canonical = [n](const std::vector<Vec>& gens) {
        std::vector<BigCol> cols;
        for (const auto& g : gens) {
            BigCol c(n);
            for (std::size_t i = 0; i < n; ++i) c[i] = g[i];
            cols.push_back(std::move(c));
        }
        std::size_t rk = column_echelon(cols, iota(n));
        cols.resize(rk);
        return cols;
    };
    HnfResult hnf = hnf_column_style(a.entries());
    std::vector<Vec> kernel;
    for (std::size_t j = hnf.rank; j < n; ++j) kernel.push_back(hnf.u.column(j));
    return canonical(moves.moves()) == canonical(kernel);
}

namespace {

bool has_cancellation(const Vec& f, const Vec& g) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if ((f[i] > 0 && g[i] < 0) || (f[i] < 0 && g[i] > 0)) return true;
    return false;
}

// Subtracts elements of `basis` that lie below s in the conformal order until none does.
void reduce(Vec& s, const std::vector<Vec>& basis) {
    bool changed = true;
    while (changed && !is_zero(s)) {
        changed = false;
        for (const auto& g : basis) {
            if (sign_order_leq(g, s)) {
                for (std::size_t i = 0; i < s.size(); ++i) s[i] -= g[i];
                changed = true;
                if (is_zero(s)) return;
            }
        }
    }
}

std::vector<Vec> minimal_elements(const std::vector<Vec>& set) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        bool minimal = true;
        for (std::size_t j = 0; j < set.size() && minimal; ++j)
            if (i != j && set[j] != set[i] && sign_order_leq(set[j], set[i])) minimal = false;
        if (minimal) out.push_back(set[i]);
    }
    return out;
}

}  // namespace

MoveSet graver_basis(const DesignMatrix& a, Int norm_cap) {
    require(norm_cap >= 1, "norm cap must be at least 1");
    auto model = std::make_shared<DesignMatrix>(a);
    HnfResult hnf = hnf_column_style(a.entries());
    bool truncated = false;

    std::vector<Vec> basis;
    for (std::size_t j = hnf.rank; j < a.cols(); ++j) {
        Vec z = hnf.u.column(j);
        basis.push_back(z);
        basis.push_back(negated(z));
    }
    std::deque<Vec> pending;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            if (has_cancellation(basis[i], basis[j])) {
                Vec s = basis[i];
                for (std::size_t t = 0; t < s.size(); ++t) s[t] = checked_add(s[t], basis[j][t]);
                pending.push_back(std::move(s));
            }
    while (!pending.empty()) {
        Vec s = std::move(pending.front());
        pending.pop_front();
        reduce(s, basis);
        if (is_zero(s)) continue;
        if (norm_inf(s) > norm_cap) {
            truncated = true;
            continue;
        }
        for (const auto& g : basis)
            if (has_cancellation(s, g)) {
                Vec t = s;
                for (std::size_t i = 0; i < t.size(); ++i) t[i] = checked_add(t[i], g[i]);
                pending.push_back(std::move(t));
            }
        basis.push_back(std::move(s));
    }
    std::vector<Vec> result;
    for (const auto& g : minimal_elements(basis)) {
        if (norm_inf(g) > norm_cap) {
            truncated = true;
            continue;
        }
        result.push_back(sign_canonical(g));
    }
    std::sort(result.begin(), result.end(), [](const Vec& x, const Vec& y) {
        Int nx = norm1(x), ny = norm1(y);
        return nx != ny ? nx < ny : x > y;
    });
    return MoveSet(MoveRole::graver, std::move(result), model,
                   truncated ? Completeness::truncated : Completeness::complete);
}

MoveSet bounded_graver_subset(const MoveSet& graver, Int q) {
    require(graver.role() == MoveRole::graver, "bounded subset expects a Graver move set");
    require(q >= 0, "q must be nonnegative");
    std::vector<Vec> kept;
    for (const auto& m : graver.moves())
        if (norm_inf(m) <= q) kept.push_back(m);
    return MoveSet(MoveRole::graver, std::move(kept), graver.model(), graver.completeness());
}

MoveSet circuits(const DesignMatrix& a, Int norm_cap) {
    MoveSet gr = graver_basis(a, norm_cap);
    auto support_subset = [](const Vec& y, const Vec& x) {
        bool strict = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (y[i] != 0 && x[i] == 0) return false;
            if (y[i] == 0 && x[i] != 0) strict = true;
        }
        return strict;
    };
    std::vector<Vec> out;
    for (const auto& x : gr.moves()) {
        bool minimal = std::none_of(gr.moves().begin(), gr.moves().end(),
                                    [&](const Vec& y) { return support_subset(y, x); });
        if (minimal) out.push_back(x);
    }
    return MoveSet(MoveRole::circuits, std::move(out), gr.model(), gr.completeness());
}

Table basic_move(Int I, Int J, Int K, Int i1, Int i2, Int j1, Int j2, Int k1, Int k2) {
    require(i1 != i2 && j1 != j2 && k1 != k2, "basic move needs distinct index pairs");
    Dims dims({I, J, K});
    Vec cells(dims.cells(), 0);
    auto put = [&](Int i, Int j, Int k, Int v) { cells[flat_index(dims, MultiIndex{{i, j, k}})] += v; };
    put(i1, j1, k1, 1);
    put(i1, j2, k2, 1);
    put(i2, j1, k2, 1);
    put(i2, j2, k1, 1);
    put(i2, j2, k2, -1);
    put(i2, j1, k1, -1);
    put(i1, j2, k1, -1);
    put(i1, j1, k2, -1);
    return Table(dims, std::move(cells));
}

MoveSet basic_moves(Int I, Int J, Int K) {
    require(I >= 2 && J >= 2 && K >= 2, "basic moves need I, J, K >= 2");
    std::vector<Vec> moves;
    for (Int i1 = 1; i1 <= I; ++i1)
        for (Int i2 = i1 + 1; i2 <= I; ++i2)
            for (Int j1 = 1; j1 <= J; ++j1)
                for (Int j2 = j1 + 1; j2 <= J; ++j2)
                    for (Int k1 = 1; k1 <= K; ++k1)
                        for (Int k2 = k1 + 1; k2 <= K; ++k2)
                            moves.push_back(basic_move(I, J, K, i1, i2, j1, j2, k1, k2).cells());
    return MoveSet(MoveRole::basic, std::move(moves), std::make_shared<DesignMatrix>(no_three_way_matrix(I, J, K)));
}

MoveSet independence_swap_basis(Int d1, Int d2) {
    require(d1 >= 2 && d2 >= 2, "swap moves need d1, d2 >= 2");
    Dims dims({d1, d2});
    std::vector<Vec> moves;
    for (Int i1 = 1; i1 <= d1; ++i1)
        for (Int i2 = i1 + 1; i2 <= d1; ++i2)
            for (Int j1 = 1; j1 <= d2; ++j1)
                for (Int j2 = j1 + 1; j2 <= d2; ++j2) {
                    Vec m(dims.cells(), 0);
                    m[flat_index(dims, {{i1, j1}})] = 1;
                    m[flat_index(dims, {{i2, j2}})] = 1;
                    m[flat_index(dims, {{i1, j2}})] = -1;
                    m[flat_index(dims, {{i2, j1}})] = -1;
                    moves.push_back(std::move(m));
                }
    return MoveSet(MoveRole::markov, std::move(moves), std::make_shared<DesignMatrix>(independence_matrix({d1, d2})));
}

Table embedded_two_way_move(Int I, Int J, Int i1, Int i2, Int j, Int k1, Int k2) {
    require(i1 != i2 && k1 != k2, "embedded move needs i1 != i2 and k1 != k2");
    Dims dims({I, J, 3});
    Vec cells(dims.cells(), 0);
    cells[flat_index(dims, {{i1, j, k1}})] += 1;
    cells[flat_index(dims, {{i2, j, k2}})] += 1;
    cells[flat_index(dims, {{i1, j, k2}})] -= 1;
    cells[flat_index(dims, {{i2, j, k1}})] -= 1;
    return Table(dims, std::move(cells));
}

}  // namespace fibertool
