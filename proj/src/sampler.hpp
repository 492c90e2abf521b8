#pragma once

#include "bases.hpp"
#include "fibers.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fibertool {

enum class Target { uniform, hypergeometric };
enum class Statistic { pearson, likelihood_ratio };

std::string to_string(Target t);
Target parse_target(const std::string& s);
std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& s);

struct ChainConfig {
    std::size_t length = 10000;
    std::optional<std::size_t> burn_in;  // default: length / 10
    std::size_t thinning = 1;
    std::uint64_t seed = 1;
    RelaxationSpec relax;
    Target target = Target::hypergeometric;
    /// After a Metropolis rejection, move the auxiliary table back to the current state.
    bool reset_on_reject = false;

    std::size_t effective_burn_in() const { return burn_in.value_or(length / 10); }
    void validate() const;
};

enum class StepOutcome : std::uint8_t { accepted, rejected_out_of_relaxed, rejected_metropolis, in_relaxed_excursion };

std::string to_string(StepOutcome o);

struct ChainOutput {
    std::vector<Vec> samples;          // u_1, ..., u_N
    std::vector<StepOutcome> trace;    // outcome of step n, which produced u_{n+1}
    std::vector<double> statistic_trace;
};

/// Portable draws on top of mt19937_64; the mapping to integers and reals is fixed here
/// rather than left to the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform on {0, ..., n-1}, by rejection.
    std::uint64_t below(std::uint64_t n);
    /// Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// log(1 / prod_c u_c!).
double hypergeometric_log_weight(std::span<const Int> u);

/// Runs the relaxed Metropolis-Hastings walk and calls `visit(n, u_n, outcome_n)` for n = 0..N-1. The
/// table passed is u_n; the outcome is that of the step leaving it.
void run_chain_visit(const Vec& start, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                     const std::function<void(std::size_t, const Vec&, StepOutcome)>& visit);

ChainOutput run_chain(const Vec& start, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                      const std::function<double(const Vec&)>& statistic = {});

/// Maximum likelihood fitted values for the model, by iterative proportional
/// fitting over the rows of a 0/1 design matrix. Closed form for two-way independence.
std::vector<double> fitted_values(const DesignMatrix& a, std::span<const Int> u);

double pearson_statistic(std::span<const Int> u, const std::vector<double>& fitted);
double likelihood_ratio_statistic(std::span<const Int> u, const std::vector<double>& fitted);
double chi_square_statistic(std::span<const Int> u, const FiberSpec& spec);

struct BatchMeans {
    double mean = 0;
    double se = 0;
    std::size_t batches = 0;
};
BatchMeans batch_means(const std::vector<double>& x, std::size_t batches = 20);

struct PValue {
    double p = 0;
    double se = 0;
    double observed = 0;
    std::size_t samples = 0;
    double acceptance_rate = 0;
};

/// `trace`, when given, receives the outcome of every step.
PValue exact_p_value(const Vec& observed, const MoveSet& moves, const ChainConfig& config, const FiberSpec& spec,
                     Statistic statistic = Statistic::pearson, std::vector<StepOutcome>* trace = nullptr);

struct AcceptanceWindow {
    std::size_t start = 0;
    std::size_t steps = 0;
    std::size_t accepted = 0;
    std::size_t rejected_out_of_relaxed = 0;
    std::size_t rejected_metropolis = 0;
    std::size_t excursions = 0;
    double rate() const { return steps ? static_cast<double>(accepted) / static_cast<double>(steps) : 0.0; }
};

struct AcceptanceReport {
    std::vector<AcceptanceWindow> windows;
    AcceptanceWindow total;
};

AcceptanceReport acceptance_report(const std::vector<StepOutcome>& trace, std::size_t window = 1000);
void write_acceptance_csv(std::ostream& os, const AcceptanceReport& report, std::size_t run = 0, bool header = true);

struct KsResult {
    double statistic = 0;
    double p_value = 1;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

}  // namespace fibertool
