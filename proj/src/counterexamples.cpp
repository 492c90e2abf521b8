#include "counterexamples.hpp"

#include <algorithm>
#include <set>

namespace fibertool {

namespace {

Vec add(const Vec& x, const Vec& y, Int sign = 1) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + sign * y[i];
    return out;
}

Int min_entry(const Vec& x) { return x.empty() ? 0 : *std::min_element(x.begin(), x.end()); }

}  // namespace

bool Thm41Certificate::verified() const {
    if (!(au_is_hnf && (det_u == 1 || det_u == -1) && hnf_matches && kernel_matches && margins_equal && spans_kernel &&
          steps_violate))
        return false;
    for (const auto& r : disconnected)
        if (r.reached) return false;
    return minimal_q.has_value();
}

Thm41Certificate build_thm41(Int n, Int q_max, std::size_t cap) {
    require(n >= 4, "n must be at least 4");
    Thm41Certificate c;
    c.n = n;
    c.a = a_family_matrix(n);
    c.lambda = lawrence_lifting(c.a);
    const std::size_t un = static_cast<std::size_t>(n);

    Matrix u(un, un);
    for (std::size_t j = 0; j + 1 < un; ++j)
        for (std::size_t i = 0; i <= j; ++i) u(i, j) = static_cast<Int>(j - i + 1);
    for (std::size_t i = 0; i + 1 < un; ++i) u(i, un - 1) = -static_cast<Int>(un - 2 - i);
    u(un - 1, un - 1) = 1;
    c.u_transform = u;
    c.h = c.a.entries() * u;

    Matrix target(un - 2, un);
    for (std::size_t i = 0; i + 2 < un; ++i) target(i, i) = 1;
    c.au_is_hnf = c.h == target;
    c.det_u = determinant(u);
    c.hnf_matches = hnf_column_style(c.a.entries()).h == target;

    const Vec l1 = u.column(un - 2), l2 = u.column(un - 1);
    MoveSet computed = lattice_basis(c.a);
    c.kernel_matches = computed.size() == 2 && computed.moves()[0] == l1 && computed.moves()[1] == l2;

    auto stack = [](const Vec& top, const Vec& bottom) {
        Vec out = top;
        out.insert(out.end(), bottom.begin(), bottom.end());
        return out;
    };
    c.z1 = stack(l1, negated(l1));
    c.z2 = stack(l2, negated(l2));
    for (Int i = 0; i < n; ++i) c.w.push_back(i);
    const Vec zeros(un, 0);
    c.u = stack(c.w, zeros);
    c.v = stack(zeros, c.w);
    c.margins_equal = c.lambda.margins(c.u) == c.lambda.margins(c.v);

    auto model = std::make_shared<DesignMatrix>(c.lambda);
    MoveSet moves(MoveRole::lattice, {c.z1, c.z2}, model);
    c.spans_kernel = spans_integer_kernel(moves, c.lambda);

    c.steps_violate = true;
    for (const Vec& m : {c.z1, negated(c.z1), c.z2, negated(c.z2)}) {
        Int lo = min_entry(add(c.u, m));
        c.step_minima.push_back(lo);
        if (lo > -(n - 2)) c.steps_violate = false;
    }

    FiberSpec spec{model, c.lambda.margins(c.u)};
    for (Int q = 0; q <= n - 3; ++q) {
        ReachResult r = reach(spec, moves, RelaxationSpec::everywhere(q), c.u, c.v, cap);
        c.disconnected.push_back({q, r.reached, r.visited});
    }
    c.minimal_q = minimal_relaxation(spec, moves, c.u, c.v, q_max, cap);
    return c;
}

void StaircaseSpec::validate() const {
    require(I >= 3 && J >= 3, "I and J must be at least 3");
    const Int len = axis == StairAxis::j ? J : I;
    require(static_cast<Int>(tau.size()) == len, "tau must have one value per " + std::string(axis == StairAxis::j ? "j" : "i"));
    std::set<Int> image;
    for (Int t : tau) {
        require(t >= 1 && t <= 3, "tau values must lie in {1,2,3}");
        image.insert(t);
    }
    require(image.size() == 3, "tau must be surjective onto {1,2,3}");
}

namespace {

std::size_t cell(Int J, Int i, Int j, Int k) {
    return static_cast<std::size_t>(((i - 1) * J + (j - 1)) * 3 + (k - 1));
}

}  // namespace

std::vector<std::size_t> staircase_set(const StaircaseSpec& spec) {
    spec.validate();
    std::vector<std::size_t> out;
    for (Int i = 1; i <= spec.I; ++i)
        for (Int j = 1; j <= spec.J; ++j) {
            Int k = spec.axis == StairAxis::j ? spec.tau[static_cast<std::size_t>(j - 1)] : spec.tau[static_cast<std::size_t>(i - 1)];
            out.push_back(cell(spec.J, i, j, k));
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> anti_staircase_set(const StaircaseSpec& spec) {
    std::vector<std::size_t> stair = staircase_set(spec), out;
    const std::size_t total = static_cast<std::size_t>(spec.I * spec.J * 3);
    std::size_t p = 0;
    for (std::size_t c = 0; c < total; ++c) {
        if (p < stair.size() && stair[p] == c) {
            ++p;
            continue;
        }
        out.push_back(c);
    }
    return out;
}

std::string render_layers(const std::vector<std::size_t>& cells, Int I, Int J) {
    std::set<std::size_t> in(cells.begin(), cells.end());
    std::string out;
    for (Int k = 1; k <= 3; ++k) {
        out += "k=" + std::to_string(k) + "\n";
        for (Int i = 1; i <= I; ++i) {
            for (Int j = 1; j <= J; ++j) out += in.count(cell(J, i, j, k)) ? '#' : '.';
            out += '\n';
        }
    }
    return out;
}

bool AntiStaircaseCertificate::verified() const {
    return witness_in_kernel && nonnegative && margins_equal && m_zero_off_s && slice_margins_differ && !bfs.reached;
}

AntiStaircaseCertificate anti_staircase_witness(const StaircaseSpec& spec, Int q, std::size_t cap) {
    spec.validate();
    require(q >= 0, "q must be nonnegative");
    AntiStaircaseCertificate c;
    c.spec = spec;
    c.q = q;

    // Work with tau on the j axis; for the i axis swap the roles of i and j.
    const bool swap = spec.axis == StairAxis::i;
    const Int I = swap ? spec.J : spec.I, J = swap ? spec.I : spec.J;
    std::vector<Int> slice(4, 0);
    for (Int t = 1; t <= 3; ++t)
        for (Int j = 1; j <= J && !slice[static_cast<std::size_t>(t)]; ++j)
            if (spec.tau[static_cast<std::size_t>(j - 1)] == t) slice[static_cast<std::size_t>(t)] = j;

    auto two_way = [&](Int j, Int k1, Int k2) { return embedded_two_way_move(I, J, 1, 2, j, k1, k2).cells(); };
    Vec cyclic = add(add(two_way(slice[1], 2, 3), two_way(slice[2], 3, 1)), two_way(slice[3], 1, 2));
    Vec printed = add(add(two_way(slice[1], 1, 2), two_way(slice[2], 2, 3)), two_way(slice[3], 1, 3));

    // Back to the caller's (i, j, k) layout.
    auto relayout = [&](const Vec& x) {
        if (!swap) return x;
        Vec out(x.size());
        for (Int i = 1; i <= I; ++i)
            for (Int j = 1; j <= J; ++j)
                for (Int k = 1; k <= 3; ++k) out[cell(spec.J, j, i, k)] = x[cell(J, i, j, k)];
        return out;
    };
    c.witness = relayout(cyclic);
    c.printed_witness = relayout(printed);
    c.s = anti_staircase_set(spec);
    std::vector<bool> in_s(c.witness.size(), false);
    for (std::size_t x : c.s) in_s[x] = true;

    DesignMatrix a = no_three_way_matrix(spec.I, spec.J, 3);
    c.witness_in_kernel = a.in_kernel(c.witness);
    c.printed_witness_in_kernel = a.in_kernel(c.printed_witness);

    auto base_for = [&](const Vec& move) {
        Vec m(move.size(), 0);
        for (std::size_t x = 0; x < move.size(); ++x)
            if (move[x] < 0 && in_s[x]) m[x] = -move[x];
        return m;
    };
    c.m = base_for(c.witness);
    c.m_prime = add(c.m, c.witness);
    Vec printed_m = base_for(c.printed_witness);
    Vec printed_sum = add(printed_m, c.printed_witness);
    c.printed_witness_fits = min_entry(printed_sum) >= 0;

    c.nonnegative = min_entry(c.m) >= 0 && min_entry(c.m_prime) >= 0;
    c.margins_equal = a.margins(c.m) == a.margins(c.m_prime);
    c.m_zero_off_s = true;
    for (std::size_t x = 0; x < c.m.size(); ++x)
        if (!in_s[x] && c.m[x] != 0) c.m_zero_off_s = false;

    // ik-margins restricted to S_1 = cells of S whose slice has tau = 1.
    auto slice_ik = [&](const Vec& t) {
        Vec out(static_cast<std::size_t>(spec.I * 3), 0);
        for (Int i = 1; i <= spec.I; ++i)
            for (Int j = 1; j <= spec.J; ++j)
                for (Int k = 1; k <= 3; ++k) {
                    Int level = swap ? spec.tau[static_cast<std::size_t>(i - 1)] : spec.tau[static_cast<std::size_t>(j - 1)];
                    std::size_t x = cell(spec.J, i, j, k);
                    if (level == 1 && in_s[x]) out[static_cast<std::size_t>((i - 1) * 3 + (k - 1))] += t[x];
                }
        return out;
    };
    c.slice_margins_differ = slice_ik(c.m) != slice_ik(c.m_prime);

    auto model = std::make_shared<DesignMatrix>(a);
    MoveSet basic = basic_moves(spec.I, spec.J, 3);
    FiberSpec fiber{model, a.margins(c.m)};
    ReachResult r = reach(fiber, basic, RelaxationSpec::on(q, c.s), c.m, c.m_prime, cap);
    c.bfs = {q, r.reached, r.visited};
    return c;
}

ThetaGadget theta_gadget(const Vec& theta) {
    ThetaGadget g;
    g.theta = theta;
    for (Int t : theta) require(t >= 0, "theta entries must be nonnegative");
    const std::size_t eta = theta.size();
    const std::size_t dim = eta + 2;

    // Points x = y + 1 with y >= -1: x_0 + x_{eta+1} = 3 and theta_j x_0 - x_j = theta_j - 1.
    Matrix eq(eta + 1, dim);
    Vec rhs(eta + 1);
    eq(0, 0) = 1;
    eq(0, eta + 1) = 1;
    rhs[0] = 3;
    for (std::size_t j = 1; j <= eta; ++j) {
        eq(j, 0) = theta[j - 1];
        eq(j, j) = -1;
        rhs[j] = theta[j - 1] - 1;
    }
    FiberSpec spec{std::make_shared<DesignMatrix>(eq), rhs};
    CellBounds box{Vec(dim, 0), Vec(dim, 3)};
    for (std::size_t j = 1; j <= eta; ++j) box.upper[j] = 3 * theta[j - 1] + 1;
    enumerate_points(spec, box, 1000, [&](const Vec& x) { g.points.push_back(x); });

    auto point = [&](Int y0, Int scale, Int last) {
        Vec p{y0 + 1};
        for (Int t : theta) p.push_back(scale * t + 1);
        p.push_back(last + 1);
        return p;
    };
    g.expected = {point(0, 0, 1), point(1, 1, 0), point(2, 2, -1), point(-1, -1, 2)};

    std::set<Vec> found(g.points.begin(), g.points.end()), want(g.expected.begin(), g.expected.end());
    for (const auto& p : g.expected)
        if (!found.count(p)) g.missing.push_back(p);
    for (const auto& p : g.points)
        if (!want.count(p)) g.extra.push_back(p);
    g.matches = g.missing.empty() && g.extra.empty() && g.points.size() == 4;

    auto middle = [&](const Vec& x) { return Vec(x.begin() + 1, x.begin() + 1 + static_cast<std::ptrdiff_t>(eta)); };
    Vec doubled = theta;
    for (Int& t : doubled) t *= 2;
    const Vec &y1 = g.expected[0], &y2 = g.expected[1], &z1 = g.expected[2], &z2 = g.expected[3];
    g.patterns_hold = middle(add(y2, y1, -1)) == theta && middle(add(z1, y2, -1)) == theta &&
                      middle(add(y1, z2, -1)) == theta && middle(add(z1, y1, -1)) == doubled;
    return g;
}

}  // namespace fibertool
