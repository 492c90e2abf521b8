#pragma once

#include "bases.hpp"
#include "fibers.hpp"
#include "models.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fibertool {

struct ReachCheck {
    Int q = 0;
    bool reached = false;
    std::size_t visited = 0;
};

struct Thm41Certificate {
    Int n = 0;
    DesignMatrix a;       // A_{n-2}
    DesignMatrix lambda;  // Lawrence lifting of A_{n-2}
    Matrix u_transform;   // the explicit unimodular U
    Matrix h;             // A U
    Vec w, u, v, z1, z2;

    bool au_is_hnf = false;          // A U = (I | 0 | 0)
    BigInt det_u = 0;
    bool hnf_matches = false;        // computed column HNF equals (I | 0 | 0)
    bool kernel_matches = false;     // computed lattice basis equals the last two columns of U
    bool margins_equal = false;
    bool spans_kernel = false;
    std::vector<Int> step_minima;    // smallest entry of u + m for m in (z1, -z1, z2, -z2)
    bool steps_violate = false;      // each of them is <= -(n-2)
    std::vector<ReachCheck> disconnected;  // q = 0..n-3
    std::optional<Int> minimal_q;

    bool verified() const;
};

/// Builds and checks the lattice-basis counterexample for A_{n-2}. BFS runs
/// for q <= n-3 and minimal_relaxation searches up to q_max.
Thm41Certificate build_thm41(Int n, Int q_max, std::size_t cap);

enum class StairAxis { j, i };

struct StaircaseSpec {
    Int I = 3;
    Int J = 3;
    std::vector<Int> tau;  // values in {1,2,3}, indexed by j (axis j) or i (axis i)
    StairAxis axis = StairAxis::j;

    void validate() const;
};

/// 0-based flat indices of I x J x 3 cells, sorted.
std::vector<std::size_t> staircase_set(const StaircaseSpec& spec);
std::vector<std::size_t> anti_staircase_set(const StaircaseSpec& spec);

/// One text block per k-layer: '#' for a cell in the set, '.' otherwise.
std::string render_layers(const std::vector<std::size_t>& cells, Int I, Int J);

struct AntiStaircaseCertificate {
    StaircaseSpec spec;
    Int q = 0;
    std::vector<std::size_t> s;  // the anti-staircase set
    Vec witness;                 // cyclic degree-6 move
    Vec printed_witness;         // the pairing {1,2},{2,3},{1,3}
    Vec m, m_prime;

    bool witness_in_kernel = false;
    bool printed_witness_in_kernel = false;
    bool printed_witness_fits = false;  // m + printed witness stays >= 0 off S for the same kind of m
    bool nonnegative = false;
    bool margins_equal = false;
    bool m_zero_off_s = false;
    bool slice_margins_differ = false;
    ReachCheck bfs;

    bool verified() const;
};

AntiStaircaseCertificate anti_staircase_witness(const StaircaseSpec& spec, Int q, std::size_t cap);

struct ThetaGadget {
    Vec theta;
    std::vector<Vec> points;    // integer points of the shifted polytope, enumerated
    std::vector<Vec> expected;  // y1, y2, z1, z2 from the closed forms
    std::vector<Vec> missing;   // expected but not found
    std::vector<Vec> extra;     // found but not expected
    bool matches = false;
    bool patterns_hold = false;  // y2-y1, z1-y2, y1-z2 restrict to theta; z1-y1 to 2 theta

    bool verified() const { return matches && patterns_hold; }
};

ThetaGadget theta_gadget(const Vec& theta);

}  // namespace fibertool
