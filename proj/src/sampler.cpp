#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fibertool {

std::string to_string(Target t) { return t == Target::uniform ? "uniform" : "hypergeometric"; }

Target parse_target(const std::string& s) {
    if (s == "uniform") return Target::uniform;
    if (s == "hypergeometric") return Target::hypergeometric;
    fail(ErrorCode::parse, "unknown target '" + s + "'");
}

std::string to_string(Statistic s) { return s == Statistic::pearson ? "pearson" : "g2"; }

Statistic parse_statistic(const std::string& s) {
    if (s == "pearson" || s == "x2") return Statistic::pearson;
    if (s == "g2" || s == "lr") return Statistic::likelihood_ratio;
    fail(ErrorCode::parse, "unknown statistic '" + s + "'");
}

std::string to_string(StepOutcome o) {
    switch (o) {
        case StepOutcome::accepted: return "accepted";
        case StepOutcome::rejected_out_of_relaxed: return "rejected_out_of_relaxed";
        case StepOutcome::rejected_metropolis: return "rejected_metropolis";
        case StepOutcome::in_relaxed_excursion: return "in_relaxed_excursion";
    }
    return "?";
}

void ChainConfig::validate() const {
    require(length > 0, "chain length must be positive");
    require(thinning > 0, "thinning must be positive");
    require(effective_burn_in() < length, "burn-in must be shorter than the chain");
    require(relax.q >= 0, "relaxation depth q must be nonnegative");
}

std::uint64_t Rng::below(std::uint64_t n) {
    require(n > 0, "empty range");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % n;
}

double hypergeometric_log_weight(std::span<const Int> u) {
    double s = 0;
    for (Int x : u) {
        require(x >= 0, "hypergeometric weight needs a nonnegative table");
        s -= std::lgamma(static_cast<double>(x) + 1.0);
    }
    return s;
}

void run_chain_visit(const Vec& start, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                     const std::function<void(std::size_t, const Vec&, StepOutcome)>& visit) {
    config.validate();
    require(in_fiber(start, spec), "start table is not in the fiber");
    require(!moves.empty(), "move set is empty");
    require(moves.dimension() == spec.cells(), "move length does not match the model");
    for (const auto& m : moves.moves()) require(spec.model->in_kernel(m), "move is not in the kernel of the model");

    const Vec lower = config.relax.lower_bounds(spec.cells());
    const std::size_t proposals = 2 * moves.size();
    Rng rng(config.seed);
    Vec u = start, v = start, w(start.size());
    double log_pi_u = config.target == Target::hypergeometric ? hypergeometric_log_weight(u) : 0.0;

    for (std::size_t n = 0; n < config.length; ++n) {
        std::uint64_t pick = rng.below(proposals);
        const Vec& m = moves.moves()[pick / 2];
        const bool negate = pick % 2 == 1;
        bool relaxed = true, plain = true;
        for (std::size_t c = 0; c < w.size(); ++c) {
            w[c] = negate ? v[c] - m[c] : v[c] + m[c];
            if (w[c] < lower[c]) relaxed = false;
            if (w[c] < 0) plain = false;
        }
        StepOutcome outcome = StepOutcome::in_relaxed_excursion;
        double log_pi_w = 0;
        if (!relaxed) {
            outcome = StepOutcome::rejected_out_of_relaxed;
        } else if (plain) {
            if (config.target == Target::hypergeometric) log_pi_w = hypergeometric_log_weight(w);
            const double ratio = log_pi_w - log_pi_u;
            outcome = (ratio >= 0 || rng.unit() < std::exp(ratio)) ? StepOutcome::accepted : StepOutcome::rejected_metropolis;
        }
        visit(n, u, outcome);
        switch (outcome) {
            case StepOutcome::accepted:
                u = w;
                v = w;
                log_pi_u = log_pi_w;
                break;
            case StepOutcome::rejected_metropolis:
                if (config.reset_on_reject) v = u;
                break;
            case StepOutcome::in_relaxed_excursion:
                v = w;
                break;
            case StepOutcome::rejected_out_of_relaxed:
                break;
        }
    }
}

ChainOutput run_chain(const Vec& start, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                      const std::function<double(const Vec&)>& statistic) {
    ChainOutput out;
    out.samples.reserve(config.length);
    out.trace.reserve(config.length);
    run_chain_visit(start, moves, config, spec, [&](std::size_t, const Vec& u, StepOutcome o) {
        out.samples.push_back(u);
        out.trace.push_back(o);
        if (statistic) out.statistic_trace.push_back(statistic(u));
    });
    return out;
}

std::vector<double> fitted_values(const DesignMatrix& a, std::span<const Int> u) {
    const Matrix& e = a.entries();
    require(u.size() == e.cols(), "table size does not match the model");
    for (Int x : e.data()) require(x == 0 || x == 1, "fitted values need a 0/1 design matrix");
    const Vec b = a.margins(u);
    std::vector<double> fit(u.size(), 1.0);
    for (std::size_t c = 0; c < u.size(); ++c) {
        bool covered = false;
        for (std::size_t r = 0; r < e.rows() && !covered; ++r) covered = e(r, c) != 0;
        if (!covered) fit[c] = static_cast<double>(u[c]);
    }
    for (int iter = 0; iter < 10000; ++iter) {
        double worst = 0;
        for (std::size_t r = 0; r < e.rows(); ++r) {
            double cur = 0;
            for (std::size_t c = 0; c < u.size(); ++c)
                if (e(r, c)) cur += fit[c];
            const double target = static_cast<double>(b[r]);
            worst = std::max(worst, std::abs(cur - target));
            if (cur > 0) {
                const double f = target / cur;
                for (std::size_t c = 0; c < u.size(); ++c)
                    if (e(r, c)) fit[c] *= f;
            }
        }
        if (worst < 1e-10) break;
    }
    return fit;
}

double pearson_statistic(std::span<const Int> u, const std::vector<double>& fitted) {
    require(u.size() == fitted.size(), "fitted values have the wrong length");
    double s = 0;
    for (std::size_t c = 0; c < u.size(); ++c) {
        const double d = static_cast<double>(u[c]) - fitted[c];
        if (fitted[c] <= 1e-12) {
            if (u[c] != 0) fail(ErrorCode::invalid_argument, "zero expected count with a positive observation");
            continue;
        }
        s += d * d / fitted[c];
    }
    return s;
}

double likelihood_ratio_statistic(std::span<const Int> u, const std::vector<double>& fitted) {
    require(u.size() == fitted.size(), "fitted values have the wrong length");
    double s = 0;
    for (std::size_t c = 0; c < u.size(); ++c) {
        if (u[c] == 0) continue;
        if (fitted[c] <= 1e-12) fail(ErrorCode::invalid_argument, "zero expected count with a positive observation");
        s += static_cast<double>(u[c]) * std::log(static_cast<double>(u[c]) / fitted[c]);
    }
    return 2 * s;
}

double chi_square_statistic(std::span<const Int> u, const FiberSpec& spec) {
    return pearson_statistic(u, fitted_values(*spec.model, u));
}

BatchMeans batch_means(const std::vector<double>& x, std::size_t batches) {
    BatchMeans out;
    if (x.empty()) return out;
    batches = std::max<std::size_t>(1, std::min(batches, x.size()));
    const std::size_t size = x.size() / batches;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b) {
        double s = 0;
        for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += x[i];
        means.push_back(s / static_cast<double>(size));
    }
    double total = 0;
    for (double v : x) total += v;
    out.mean = total / static_cast<double>(x.size());
    out.batches = batches;
    if (batches > 1) {
        double mb = 0;
        for (double m : means) mb += m;
        mb /= static_cast<double>(batches);
        double var = 0;
        for (double m : means) var += (m - mb) * (m - mb);
        var /= static_cast<double>(batches - 1);
        out.se = std::sqrt(var / static_cast<double>(batches));
    }
    return out;
}

PValue exact_p_value(const Vec& observed, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                     Statistic statistic, std::vector<StepOutcome>* trace) {
    const std::vector<double> fit = fitted_values(*spec.model, observed);
    auto stat = [&](std::span<const Int> u) {
        return statistic == Statistic::pearson ? pearson_statistic(u, fit) : likelihood_ratio_statistic(u, fit);
    };
    PValue out;
    out.observed = stat(observed);
    const double threshold = out.observed - 1e-9 * std::max(1.0, std::abs(out.observed));
    const std::size_t burn = config.effective_burn_in();
    std::vector<double> hits;
    std::size_t accepted = 0;
    run_chain_visit(observed, moves, config, spec, [&](std::size_t n, const Vec& u, StepOutcome o) {
        if (o == StepOutcome::accepted) ++accepted;
        if (trace) trace->push_back(o);
        if (n < burn || (n - burn) % config.thinning != 0) return;
        hits.push_back(stat(u) >= threshold ? 1.0 : 0.0);
    });
    BatchMeans bm = batch_means(hits);
    out.p = bm.mean;
    out.se = bm.se;
    out.samples = hits.size();
    out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(config.length);
    return out;
}

AcceptanceReport acceptance_report(const std::vector<StepOutcome>& trace, std::size_t window) {
    require(window > 0, "window must be positive");
    AcceptanceReport rep;
    auto add = [](AcceptanceWindow& w, StepOutcome o) {
        ++w.steps;
        switch (o) {
            case StepOutcome::accepted: ++w.accepted; break;
            case StepOutcome::rejected_out_of_relaxed: ++w.rejected_out_of_relaxed; break;
            case StepOutcome::rejected_metropolis: ++w.rejected_metropolis; break;
            case StepOutcome::in_relaxed_excursion: ++w.excursions; break;
        }
    };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i % window == 0) rep.windows.push_back(AcceptanceWindow{i});
        add(rep.windows.back(), trace[i]);
        add(rep.total, trace[i]);
    }
    return rep;
}

void write_acceptance_csv(std::ostream& os, const AcceptanceReport& report, std::size_t run, bool header) {
    if (header) os << "run,window_start,steps,accepted,rejected_out_of_relaxed,rejected_metropolis,excursions,rate\n";
    for (const auto& w : report.windows)
        os << run << ',' << w.start << ',' << w.steps << ',' << w.accepted << ',' << w.rejected_out_of_relaxed << ','
           << w.rejected_metropolis << ',' << w.excursions << ',' << w.rate() << '\n';
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
    require(!x.empty() && !y.empty(), "both samples must be nonempty");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    const double ne = std::sqrt(n1 * n2 / (n1 + n2));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double p = 0;
    if (lambda < 1e-3) {
        p = 1;
    } else {
        for (int k = 1; k <= 100; ++k) {
            double term = 2 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
            p += term;
            if (std::abs(term) < 1e-12) break;
        }
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace fibertool
