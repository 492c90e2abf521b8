#include "fibertool/fibertool.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <boost/crc.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

struct Failure {
    ft_status status;
    std::string message;
};

int exit_code(ft_status s) {
    switch (s) {
        case FT_OK: return 0;
        case FT_ERR_VERIFICATION: return 2;
        case FT_ERR_CAP_EXCEEDED: return 3;
        default: return 1;
    }
}

void check(ft_status s, const std::string& context) {
    if (s != FT_OK) throw Failure{s, context + ": " + ft_last_error()};
}

struct CString {
    char* p = nullptr;
    ~CString() { ft_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

using ModelPtr = std::unique_ptr<ft_model, decltype(&ft_model_free)>;
using TablePtr = std::unique_ptr<ft_table, decltype(&ft_table_free)>;
using MovesPtr = std::unique_ptr<ft_moveset, decltype(&ft_moveset_free)>;

struct Manifest {
    json inputs = json::array();
    json extra = json::object();

    void input(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return;
        std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        boost::crc_32_type crc;
        crc.process_bytes(data.data(), data.size());
        std::ostringstream hex;
        hex << std::hex << crc.checksum();
        inputs.push_back({{"path", path}, {"bytes", data.size()}, {"crc32", hex.str()}});
    }
};

Manifest manifest;

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{FT_ERR_IO, "cannot write '" + path + "'"};
    out << text;
}

std::size_t cap_from_env() {
    const char* v = std::getenv("FIBERTOOL_CAP");
    if (!v || !*v) return 10000000;
    char* end = nullptr;
    unsigned long long n = std::strtoull(v, &end, 10);
    if (*end != '\0' || n == 0) throw Failure{FT_ERR_USAGE, std::string("FIBERTOOL_CAP must be a positive integer, got '") + v + "'"};
    return static_cast<std::size_t>(n);
}

ModelPtr load_model(const std::string& spec, const std::string& matrix_path) {
    ft_model* m = nullptr;
    if (!matrix_path.empty()) {
        manifest.input(matrix_path);
        check(ft_model_read_matrix(matrix_path.c_str(), &m), "matrix");
    } else if (!spec.empty()) {
        check(ft_model_parse(spec.c_str(), &m), "model");
    } else {
        throw Failure{FT_ERR_USAGE, "either --model or --matrix is required"};
    }
    return ModelPtr(m, ft_model_free);
}

TablePtr load_table(const ft_model* model, const std::string& path) {
    manifest.input(path);
    ft_table* t = nullptr;
    check(ft_table_read(path.c_str(), model, &t), "table");
    return TablePtr(t, ft_table_free);
}

MovesPtr load_moves(const ft_model* model, const std::string& path, const std::string& kind, std::int64_t norm_cap) {
    ft_moveset* m = nullptr;
    if (!path.empty()) {
        manifest.input(path);
        check(ft_moveset_read(path.c_str(), model, &m), "moves");
    } else {
        check(ft_bases_compute(model, kind.c_str(), norm_cap, &m), "bases");
    }
    return MovesPtr(m, ft_moveset_free);
}

struct Relax {
    std::int64_t q = 0;
    std::string s_path;
    std::vector<std::size_t> cells;
    ft_relaxation value{};

    const ft_relaxation* resolve(const ft_model* model) {
        value.q = q;
        if (s_path.empty()) {
            value.all_cells = 1;
            return &value;
        }
        manifest.input(s_path);
        size_t* raw = nullptr;
        size_t n = 0;
        check(ft_cells_read(s_path.c_str(), model, &raw, &n), "cell set");
        cells.assign(raw, raw + n);
        ft_cells_free(raw);
        value.all_cells = 0;
        value.cells = cells.data();
        value.n_cells = cells.size();
        return &value;
    }
};

std::vector<std::int64_t> parse_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw Failure{FT_ERR_USAGE, "expected a comma-separated integer list, got '" + s + "'"};
        out.push_back(v);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov bases, fibers and relaxed samplers for contingency tables"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ft_version()));
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");

    std::string out_path;
    std::int64_t norm_cap = 12;

    // model
    auto* model_cmd = app.add_subcommand("model", "Write a design matrix in 4ti2 form");
    std::vector<std::string> model_words;
    std::string meta_path;
    model_cmd->add_option("spec", model_words, "e.g. independence 4 4 | no3way 2 2 2 | complex 12,23 dims 2 2 2")
        ->required();
    model_cmd->add_option("-o,--out", out_path, "Matrix file (default stdout)");
    model_cmd->add_option("--meta", meta_path, "JSON metadata file (default <out>.json when --out is given)");

    // bases
    auto* bases_cmd = app.add_subcommand("bases", "Compute a move set");
    std::string model_spec, matrix_path, kind = "graver", summary_path;
    bases_cmd->add_option("--model", model_spec, "Model specification");
    bases_cmd->add_option("--matrix", matrix_path, "4ti2 matrix file");
    bases_cmd->add_option("--kind", kind, "lattice | graver | markov | basic | circuits")
        ->check(CLI::IsMember({"lattice", "graver", "markov", "basic", "circuits"}));
    bases_cmd->add_option("--norm-cap", norm_cap, "Infinity-norm cap for completion");
    bases_cmd->add_option("-o,--out", out_path, "Move file (default stdout)");
    bases_cmd->add_option("--summary", summary_path, "JSON summary file");

    // nfold
    auto* nfold_cmd = app.add_subcommand("nfold", "n-fold Graver bases and complexity");
    std::string a_path, b_path, complex_faces;
    std::int64_t n_blocks = 1;
    bool complexity_only = false;
    std::vector<std::int64_t> dims;
    std::vector<std::size_t> v_set;
    nfold_cmd->add_option("--A", a_path, "A block (4ti2 matrix)");
    nfold_cmd->add_option("--B", b_path, "B block (4ti2 matrix)");
    nfold_cmd->add_option("--n", n_blocks, "Number of blocks");
    nfold_cmd->add_flag("--complexity-only", complexity_only, "Only compute g(A,B)");
    nfold_cmd->add_option("--complex", complex_faces, "Size bound for a hierarchical model: faces such as 123,124,34");
    nfold_cmd->add_option("--dims", dims, "Levels for --complex");
    nfold_cmd->add_option("--V", v_set, "1-based vertices of V for --complex");
    nfold_cmd->add_option("--norm-cap", norm_cap, "Infinity-norm cap for completion");
    nfold_cmd->add_option("-o,--out", out_path, "Move file for the lifted basis");

    // fiber
    auto* fiber_cmd = app.add_subcommand("fiber", "Count, enumerate or analyse a fiber");
    std::string table_path, moves_path, action, basis_kind = "graver";
    Relax relax;
    fiber_cmd->add_option("action", action, "count | enumerate | connectivity")
        ->required()
        ->check(CLI::IsMember({"count", "enumerate", "connectivity"}));
    fiber_cmd->add_option("--model", model_spec, "Model specification");
    fiber_cmd->add_option("--matrix", matrix_path, "4ti2 matrix file");
    fiber_cmd->add_option("--table", table_path, "Observed table")->required();
    fiber_cmd->add_option("--moves", moves_path, "Move file");
    fiber_cmd->add_option("--basis", basis_kind, "Basis to compute when --moves is absent");
    fiber_cmd->add_option("--q", relax.q, "Relaxation depth")->check(CLI::NonNegativeNumber);
    fiber_cmd->add_option("--S", relax.s_path, "File of relaxed cells (default: every cell)");
    fiber_cmd->add_option("--norm-cap", norm_cap, "Infinity-norm cap for completion");
    fiber_cmd->add_option("-o,--out", out_path, "JSON output");

    // test
    auto* test_cmd = app.add_subcommand("test", "Goodness-of-fit test by Markov chain");
    ft_chain_config cfg = ft_chain_config_default();
    std::string target = "hypergeometric", statistic = "pearson", trace_path;
    std::size_t burn_in = 0;
    bool reset_on_reject = false;
    test_cmd->add_option("--model", model_spec, "Model specification");
    test_cmd->add_option("--matrix", matrix_path, "4ti2 matrix file");
    test_cmd->add_option("--table", table_path, "Observed table")->required();
    test_cmd->add_option("--moves", moves_path, "Move file");
    test_cmd->add_option("--basis", basis_kind, "Basis to compute when --moves is absent");
    test_cmd->add_option("--q", relax.q, "Relaxation depth")->check(CLI::NonNegativeNumber);
    test_cmd->add_option("--S", relax.s_path, "File of relaxed cells (default: every cell)");
    test_cmd->add_option("--chain-length", cfg.length, "Steps per chain")->check(CLI::PositiveNumber);
    auto* burn_opt = test_cmd->add_option("--burn-in", burn_in, "Steps discarded (default 10%)");
    test_cmd->add_option("--thinning", cfg.thinning, "Keep every k-th state")->check(CLI::PositiveNumber);
    test_cmd->add_option("--runs", cfg.runs, "Independent chains, seeds seed..seed+runs-1")->check(CLI::PositiveNumber);
    test_cmd->add_option("--seed", cfg.seed, "Seed of the first chain");
    test_cmd->add_option("--target", target, "uniform | hypergeometric")
        ->check(CLI::IsMember({"uniform", "hypergeometric"}));
    test_cmd->add_option("--statistic", statistic, "pearson | g2")->check(CLI::IsMember({"pearson", "g2"}));
    test_cmd->add_option("--window", cfg.window, "Acceptance window length")->check(CLI::PositiveNumber);
    test_cmd->add_flag("--reset-on-reject", reset_on_reject, "Reset the auxiliary table after a Metropolis rejection");
    test_cmd->add_option("--trace-csv", trace_path, "Per-window acceptance CSV");
    test_cmd->add_option("--norm-cap", norm_cap, "Infinity-norm cap for completion");
    test_cmd->add_option("-o,--out", out_path, "JSON output");

    // counterexample
    auto* ce_cmd = app.add_subcommand("counterexample", "Certificates for the negative results");
    ce_cmd->require_subcommand(1);
    auto* thm41_cmd = ce_cmd->add_subcommand("thm41", "Lattice basis needing relaxation depth n-2");
    std::int64_t ce_n = 5, q_max = -1;
    thm41_cmd->add_option("--n", ce_n, "n >= 4")->required();
    thm41_cmd->add_option("--q-max", q_max, "Largest q tried (default n)");
    thm41_cmd->add_option("-o,--out", out_path, "JSON output");
    auto* anti_cmd = ce_cmd->add_subcommand("antistair", "Basic moves on an anti-staircase relaxation");
    std::int64_t ce_i = 3, ce_j = 3, ce_q = 1;
    std::string tau_text;
    bool tau_on_i = false;
    anti_cmd->add_option("--I", ce_i, "Levels of the first factor");
    anti_cmd->add_option("--J", ce_j, "Levels of the second factor");
    anti_cmd->add_option("--q", ce_q, "Relaxation depth")->check(CLI::NonNegativeNumber);
    anti_cmd->add_option("--tau", tau_text, "Comma-separated values in {1,2,3} (default 1,2,3,3,...)");
    anti_cmd->add_flag("--tau-on-i", tau_on_i, "tau is indexed by i instead of j");
    anti_cmd->add_option("-o,--out", out_path, "JSON output");
    auto* theta_cmd = ce_cmd->add_subcommand("theta", "Integer points of the theta gadget");
    std::string theta_text;
    theta_cmd->add_option("--vec", theta_text, "theta, comma-separated")->required();
    theta_cmd->add_option("-o,--out", out_path, "JSON output");

    // pipeline
    auto* pipe_cmd = app.add_subcommand("pipeline", "Model, bases and repeated tests, written as CSV");
    std::string bases_list = "markov,lattice", out_dir = "fibertool-out";
    bool dry_run = false;
    pipe_cmd->add_option("--model", model_spec, "Model specification");
    pipe_cmd->add_option("--matrix", matrix_path, "4ti2 matrix file");
    pipe_cmd->add_option("--table", table_path, "Observed table")->required();
    pipe_cmd->add_option("--bases", bases_list, "Comma-separated basis kinds");
    pipe_cmd->add_option("--runs", cfg.runs, "Chains per basis")->check(CLI::PositiveNumber);
    pipe_cmd->add_option("--chain-length", cfg.length, "Steps per chain")->check(CLI::PositiveNumber);
    pipe_cmd->add_option("--seed", cfg.seed, "Seed of the first chain");
    pipe_cmd->add_option("--target", target, "uniform | hypergeometric")
        ->check(CLI::IsMember({"uniform", "hypergeometric"}));
    pipe_cmd->add_option("--window", cfg.window, "Acceptance window length")->check(CLI::PositiveNumber);
    pipe_cmd->add_option("--norm-cap", norm_cap, "Infinity-norm cap for completion");
    pipe_cmd->add_option("--out-dir", out_dir, "Directory for CSV and JSON outputs");
    pipe_cmd->add_flag("--dry-run", dry_run, "Print the plan and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = 0;
    std::string error;
    try {
        const std::size_t cap = cap_from_env();
        manifest.extra["cap"] = cap;
        cfg.target = target == "uniform" ? FT_TARGET_UNIFORM : FT_TARGET_HYPERGEOMETRIC;
        cfg.statistic = statistic == "g2" ? FT_STAT_G2 : FT_STAT_PEARSON;
        cfg.reset_on_reject = reset_on_reject ? 1 : 0;
        if (burn_opt->count()) {
            cfg.burn_in = burn_in;
            cfg.has_burn_in = 1;
        }

        if (*model_cmd) {
            ModelPtr m = load_model(join(model_words), "");
            CString text, meta;
            check(ft_model_matrix_text(m.get(), &text.p), "model");
            check(ft_model_describe_json(m.get(), &meta.p), "model");
            emit(text.str(), out_path);
            if (meta_path.empty() && !out_path.empty() && out_path != "-") meta_path = out_path + ".json";
            if (!meta_path.empty()) emit(meta.str(), meta_path);
        } else if (*bases_cmd) {
            ModelPtr m = load_model(model_spec, matrix_path);
            MovesPtr moves = load_moves(m.get(), "", kind, norm_cap);
            CString text, summary;
            check(ft_moveset_text(moves.get(), &text.p), "bases");
            check(ft_moveset_summary_json(moves.get(), &summary.p), "bases");
            emit(text.str(), out_path);
            if (!summary_path.empty()) emit(summary.str(), summary_path);
            if (!ft_moveset_complete(moves.get()))
                std::cerr << "warning: completion stopped at norm cap " << norm_cap << "; the move set is truncated\n";
        } else if (*nfold_cmd) {
            CString result, moves;
            if (!complex_faces.empty()) {
                if (dims.empty() || v_set.empty()) throw Failure{FT_ERR_USAGE, "--complex needs --dims and --V"};
                check(ft_nfold_hierarchical_bound(complex_faces.c_str(), dims.data(), dims.size(), v_set.data(),
                                                  v_set.size(), norm_cap, &result.p),
                      "nfold");
            } else {
                if (a_path.empty() || b_path.empty()) throw Failure{FT_ERR_USAGE, "nfold needs --A and --B (or --complex)"};
                ModelPtr a = load_model("", a_path), b = load_model("", b_path);
                check(ft_nfold(a.get(), b.get(), n_blocks, complexity_only ? 1 : 0, norm_cap, &result.p,
                               out_path.empty() ? nullptr : &moves.p),
                      "nfold");
                if (!out_path.empty()) emit(moves.str(), out_path);
            }
            std::cout << result.str() << '\n';
        } else if (*fiber_cmd) {
            ModelPtr m = load_model(model_spec, matrix_path);
            TablePtr t = load_table(m.get(), table_path);
            const ft_relaxation* r = relax.resolve(m.get());
            CString result;
            if (action == "count") {
                check(ft_fiber_count(m.get(), t.get(), r, cap, &result.p), "fiber count");
            } else if (action == "enumerate") {
                check(ft_fiber_enumerate(m.get(), t.get(), r, cap, &result.p), "fiber enumerate");
            } else {
                MovesPtr moves = load_moves(m.get(), moves_path, basis_kind, norm_cap);
                check(ft_fiber_connectivity(m.get(), t.get(), moves.get(), r, cap, &result.p), "connectivity");
            }
            emit(result.str(), out_path);
        } else if (*test_cmd) {
            manifest.extra["seed"] = cfg.seed;
            ModelPtr m = load_model(model_spec, matrix_path);
            TablePtr t = load_table(m.get(), table_path);
            MovesPtr moves = load_moves(m.get(), moves_path, basis_kind, norm_cap);
            const ft_relaxation* r = relax.q > 0 || !relax.s_path.empty() ? relax.resolve(m.get()) : nullptr;
            CString result, csv;
            check(ft_test_run(m.get(), t.get(), moves.get(), r, &cfg, &result.p, trace_path.empty() ? nullptr : &csv.p),
                  "test");
            emit(result.str(), out_path);
            if (!trace_path.empty()) emit(csv.str(), trace_path);
        } else if (*ce_cmd) {
            CString result;
            ft_status s = FT_OK;
            if (*thm41_cmd) {
                s = ft_counterexample_thm41(ce_n, q_max < 0 ? ce_n : q_max, cap, &result.p);
            } else if (*anti_cmd) {
                std::vector<std::int64_t> tau = parse_list(tau_text);
                if (tau.empty()) {
                    const std::int64_t len = tau_on_i ? ce_i : ce_j;
                    for (std::int64_t x = 1; x <= len; ++x) tau.push_back(std::min<std::int64_t>(x, 3));
                }
                s = ft_counterexample_antistair(ce_i, ce_j, tau.data(), tau.size(), tau_on_i ? 1 : 0, ce_q, cap, &result.p);
            } else {
                std::vector<std::int64_t> theta = parse_list(theta_text);
                s = ft_counterexample_theta(theta.data(), theta.size(), &result.p);
            }
            if (result.p) emit(result.str(), out_path);
            check(s, "counterexample");
        } else if (*pipe_cmd) {
            manifest.extra["seed"] = cfg.seed;
            std::vector<std::string> kinds;
            {
                std::stringstream ss(bases_list);
                std::string k;
                while (std::getline(ss, k, ','))
                    if (!k.empty()) kinds.push_back(k);
            }
            if (kinds.empty()) throw Failure{FT_ERR_USAGE, "--bases is empty"};
            json plan{{"model", matrix_path.empty() ? model_spec : matrix_path},
                      {"table", table_path},
                      {"bases", kinds},
                      {"runs", cfg.runs},
                      {"chain_length", cfg.length},
                      {"seed", cfg.seed},
                      {"target", target},
                      {"out_dir", out_dir}};
            json steps = json::array();
            for (const auto& k : kinds)
                steps.push_back({{"basis", k},
                                 {"acceptance_csv", out_dir + "/acceptance_" + k + ".csv"},
                                 {"pvalues_csv", out_dir + "/pvalues_" + k + ".csv"}});
            plan["steps"] = steps;
            plan["summary"] = out_dir + "/summary.json";
            if (dry_run) {
                std::cout << plan.dump(2) << '\n';
            } else {
                ModelPtr m = load_model(model_spec, matrix_path);
                TablePtr t = load_table(m.get(), table_path);
                std::filesystem::create_directories(out_dir);
                json summary{{"plan", plan}, {"bases", json::object()}};
                std::vector<std::vector<double>> pvals;
                for (const auto& k : kinds) {
                    MovesPtr moves = load_moves(m.get(), "", k, norm_cap);
                    CString result, csv;
                    check(ft_test_run(m.get(), t.get(), moves.get(), nullptr, &cfg, &result.p, &csv.p), "pipeline " + k);
                    json r = json::parse(result.str());
                    emit(csv.str(), out_dir + "/acceptance_" + k + ".csv");
                    std::ostringstream pv;
                    pv << "run,seed,p_value,se,acceptance_rate\n";
                    for (std::size_t i = 0; i < r["runs"].size(); ++i) {
                        const auto& one = r["runs"][i];
                        pv << i << ',' << one["seed"].get<std::uint64_t>() << ',' << one["p_value"].get<double>() << ','
                           << one["se"].get<double>() << ',' << one["acceptance_rate"].get<double>() << '\n';
                    }
                    emit(pv.str(), out_dir + "/pvalues_" + k + ".csv");
                    pvals.push_back(r["p_values"].get<std::vector<double>>());
                    summary["bases"][k] = {{"moves", ft_moveset_size(moves.get())},
                                           {"mean_p_value", r["p_value"]},
                                           {"runs_without_acceptance", r["runs_without_acceptance"]}};
                }
                if (pvals.size() >= 2) {
                    double d = 0, p = 1;
                    check(ft_ks_two_sample(pvals[0].data(), pvals[0].size(), pvals[1].data(), pvals[1].size(), &d, &p),
                          "ks");
                    summary["ks"] = {{"bases", {kinds[0], kinds[1]}}, {"statistic", d}, {"p_value", p}};
                }
                emit(summary.dump(2), out_dir + "/summary.json");
                std::cout << summary.dump(2) << '\n';
            }
        }
    } catch (const Failure& f) {
        error = f.message;
        code = exit_code(f.status);
    } catch (const std::exception& e) {
        error = e.what();
        code = 1;
    }
    if (!error.empty()) std::cerr << "fibertool: " << error << '\n';

    json m{{"command_line", std::vector<std::string>(argv, argv + argc)},
           {"version", ft_version()},
           {"inputs", manifest.inputs},
           {"wall_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count()},
           {"exit_code", code}};
    m.update(manifest.extra);
    if (manifest_path.empty())
        std::cerr << "manifest " << m.dump() << '\n';
    else
        emit(m.dump(2), manifest_path);
    return code;
}
