#include "fibertool/fibertool.h"

#include "io.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace fibertool;
using nlohmann::json;

struct ft_model {
    Model model;
    std::shared_ptr<const DesignMatrix> matrix;
};

struct ft_table {
    Vec cells;
};

struct ft_moveset {
    MoveSet moves;
};

namespace {

thread_local std::string last_error;

ft_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return FT_ERR_INVALID;
        case ErrorCode::parse: return FT_ERR_PARSE;
        case ErrorCode::io: return FT_ERR_IO;
        case ErrorCode::cap_exceeded: return FT_ERR_CAP_EXCEEDED;
        case ErrorCode::verification: return FT_ERR_VERIFICATION;
        case ErrorCode::overflow: return FT_ERR_OVERFLOW;
    }
    return FT_ERR_INTERNAL;
}

template <class F>
ft_status guarded(F&& f) {
    last_error.clear();
    try {
        return f();
    } catch (const Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return FT_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return FT_ERR_INTERNAL;
    }
}

ft_status usage(const std::string& what) {
    last_error = what;
    return FT_ERR_USAGE;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ft_model* wrap(Model m) {
    auto* out = new ft_model{std::move(m), nullptr};
    out->matrix = std::make_shared<DesignMatrix>(out->model.matrix);
    return out;
}

RelaxationSpec relaxation_of(const ft_relaxation* r, std::size_t cells) {
    if (!r) return RelaxationSpec::none();
    require(r->q >= 0, "q must be nonnegative");
    if (r->all_cells) return RelaxationSpec::everywhere(r->q);
    std::vector<std::size_t> s(r->cells, r->cells + r->n_cells);
    for (std::size_t c : s) require(c < cells, "relaxation cell out of range");
    return RelaxationSpec::on(r->q, std::move(s));
}

FiberSpec fiber_of(const ft_model* model, const ft_table* table) {
    require(table->cells.size() == model->matrix->cols(), "table size does not match the model");
    return FiberSpec{model->matrix, model->matrix->margins(table->cells)};
}

bool two_way(const Model& m) { return m.kind == "independence" && m.dims && m.dims->arity() == 2; }

nlohmann::json relax_json(const RelaxationSpec& r) {
    json j{{"q", r.q}};
    j["S"] = r.cells ? json(r.cells->size()) : json("all");
    return j;
}

}  // namespace

extern "C" {

const char* ft_last_error(void) { return last_error.c_str(); }

const char* ft_version(void) { return "1.0.0"; }

const char* ft_status_name(ft_status status) {
    switch (status) {
        case FT_OK: return "ok";
        case FT_ERR_USAGE: return "usage";
        case FT_ERR_VERIFICATION: return "verification";
        case FT_ERR_CAP_EXCEEDED: return "cap_exceeded";
        case FT_ERR_INVALID: return "invalid_argument";
        case FT_ERR_PARSE: return "parse";
        case FT_ERR_IO: return "io";
        case FT_ERR_OVERFLOW: return "overflow";
        case FT_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void ft_string_free(char* s) { std::free(s); }

ft_status ft_model_parse(const char* spec, ft_model** out) {
    if (!spec || !out) return usage("ft_model_parse: null argument");
    return guarded([&] {
        *out = wrap(parse_model(spec));
        return FT_OK;
    });
}

ft_status ft_model_from_matrix(size_t rows, size_t cols, const int64_t* entries, ft_model** out) {
    if (!out || (rows * cols != 0 && !entries)) return usage("ft_model_from_matrix: null argument");
    return guarded([&] {
        Matrix m(rows, cols, rows * cols != 0 ? std::vector<Int>(entries, entries + rows * cols) : std::vector<Int>{});
        *out = wrap(Model{"matrix", DesignMatrix(std::move(m)), std::nullopt, std::nullopt});
        return FT_OK;
    });
}

ft_status ft_model_read_matrix(const char* path, ft_model** out) {
    if (!path || !out) return usage("ft_model_read_matrix: null argument");
    return guarded([&] {
        std::istringstream in(read_file(path));
        *out = wrap(Model{"matrix", DesignMatrix(read_matrix(in)), std::nullopt, std::nullopt});
        return FT_OK;
    });
}

void ft_model_free(ft_model* model) { delete model; }

size_t ft_model_rows(const ft_model* model) { return model ? model->matrix->rows() : 0; }
size_t ft_model_cols(const ft_model* model) { return model ? model->matrix->cols() : 0; }

int64_t ft_model_entry(const ft_model* model, size_t row, size_t col) {
    if (!model || row >= model->matrix->rows() || col >= model->matrix->cols()) return 0;
    return model->matrix->entries()(row, col);
}

ft_status ft_model_matrix_text(const ft_model* model, char** out) {
    if (!model || !out) return usage("ft_model_matrix_text: null argument");
    return guarded([&] {
        std::ostringstream os;
        write_matrix(os, model->matrix->entries());
        *out = dup_string(os.str());
        return FT_OK;
    });
}

ft_status ft_model_describe_json(const ft_model* model, char** out) {
    if (!model || !out) return usage("ft_model_describe_json: null argument");
    return guarded([&] {
        *out = dup_string(to_json(model->model).dump(2));
        return FT_OK;
    });
}

ft_status ft_table_read(const char* path, const ft_model* model, ft_table** out) {
    if (!path || !model || !out) return usage("ft_table_read: null argument");
    return guarded([&] {
        std::istringstream in(read_file(path));
        const Dims* dims = model->model.dims ? &*model->model.dims : nullptr;
        Table t = read_table(in, dims);
        require(t.cells().size() == model->matrix->cols(),
                "table has " + std::to_string(t.cells().size()) + " cells, the model expects " +
                    std::to_string(model->matrix->cols()));
        *out = new ft_table{t.cells()};
        return FT_OK;
    });
}

ft_status ft_table_from_cells(const ft_model* model, size_t n, const int64_t* cells, ft_table** out) {
    if (!out || (n && !cells)) return usage("ft_table_from_cells: null argument");
    return guarded([&] {
        if (model) require(n == model->matrix->cols(), "table size does not match the model");
        *out = new ft_table{Vec(cells, cells + n)};
        return FT_OK;
    });
}

void ft_table_free(ft_table* table) { delete table; }
size_t ft_table_size(const ft_table* table) { return table ? table->cells.size() : 0; }
const int64_t* ft_table_cells(const ft_table* table) { return table ? table->cells.data() : nullptr; }

ft_status ft_bases_compute(const ft_model* model, const char* kind, int64_t norm_cap, ft_moveset** out) {
    if (!model || !kind || !out) return usage("ft_bases_compute: null argument");
    return guarded([&] {
        const std::string k = kind;
        const Model& m = model->model;
        MoveSet result;
        if (k == "lattice") {
            result = lattice_basis(*model->matrix);
        } else if (k == "graver") {
            result = graver_basis(*model->matrix, norm_cap);
        } else if (k == "circuits") {
            result = circuits(*model->matrix, norm_cap);
        } else if (k == "basic") {
            require(m.kind == "no3way", "basic moves need a no3way model");
            const auto& lv = m.dims->levels();
            result = basic_moves(lv[0], lv[1], lv[2]);
        } else if (k == "markov") {
            if (two_way(m)) {
                const auto& lv = m.dims->levels();
                result = independence_swap_basis(lv[0], lv[1]);
            } else {
                MoveSet g = graver_basis(*model->matrix, norm_cap);
                result = MoveSet(MoveRole::markov, g.moves(), model->matrix, g.completeness());
            }
        } else {
            return usage("unknown basis kind '" + k + "' (lattice, graver, markov, basic, circuits)");
        }
        *out = new ft_moveset{std::move(result)};
        return FT_OK;
    });
}

ft_status ft_moveset_read(const char* path, const ft_model* model, ft_moveset** out) {
    if (!path || !out) return usage("ft_moveset_read: null argument");
    return guarded([&] {
        std::istringstream in(read_file(path));
        *out = new ft_moveset{read_moves(in, model ? model->matrix : nullptr)};
        return FT_OK;
    });
}

void ft_moveset_free(ft_moveset* moves) { delete moves; }
size_t ft_moveset_size(const ft_moveset* moves) { return moves ? moves->moves.size() : 0; }
int ft_moveset_complete(const ft_moveset* moves) { return moves && moves->moves.complete() ? 1 : 0; }

ft_status ft_moveset_text(const ft_moveset* moves, char** out) {
    if (!moves || !out) return usage("ft_moveset_text: null argument");
    return guarded([&] {
        std::ostringstream os;
        write_moves(os, moves->moves);
        *out = dup_string(os.str());
        return FT_OK;
    });
}

ft_status ft_moveset_summary_json(const ft_moveset* moves, char** out) {
    if (!moves || !out) return usage("ft_moveset_summary_json: null argument");
    return guarded([&] {
        *out = dup_string(to_json(moves->moves, moves->moves.model().get()).dump(2));
        return FT_OK;
    });
}

ft_status ft_cells_read(const char* path, const ft_model* model, size_t** cells, size_t* count) {
    if (!path || !model || !cells || !count) return usage("ft_cells_read: null argument");
    if (!model->model.dims) return usage("a cell set needs a model with table dimensions");
    return guarded([&] {
        std::istringstream in(read_file(path));
        auto s = read_cell_set(in, *model->model.dims);
        *cells = static_cast<size_t*>(std::malloc(std::max<std::size_t>(1, s.size()) * sizeof(size_t)));
        if (!*cells) throw std::bad_alloc();
        std::copy(s.begin(), s.end(), *cells);
        *count = s.size();
        return FT_OK;
    });
}

void ft_cells_free(size_t* cells) { std::free(cells); }

ft_status ft_fiber_count(const ft_model* model, const ft_table* table, const ft_relaxation* relax, size_t cap,
                         char** out_json) {
    if (!model || !table || !out_json) return usage("ft_fiber_count: null argument");
    return guarded([&] {
        FiberSpec spec = fiber_of(model, table);
        RelaxationSpec r = relaxation_of(relax, spec.cells());
        json j{{"relaxation", relax_json(r)}};
        if (two_way(model->model) && r.q == 0) {
            const auto& lv = model->model.dims->levels();
            Vec rows(spec.margins.begin(), spec.margins.begin() + lv[0]);
            Vec cols(spec.margins.begin() + lv[0], spec.margins.end());
            j["count"] = to_decimal(count_two_way_fiber(rows, cols));
            j["method"] = "two-way dynamic program";
        } else {
            std::size_t n = 0;
            enumerate_points(spec, relaxed_bounds(spec, r), cap, [&](const Vec&) { ++n; });
            j["count"] = std::to_string(n);
            j["method"] = "enumeration";
        }
        *out_json = dup_string(j.dump(2));
        return FT_OK;
    });
}

ft_status ft_fiber_enumerate(const ft_model* model, const ft_table* table, const ft_relaxation* relax, size_t cap,
                             char** out_json) {
    if (!model || !table || !out_json) return usage("ft_fiber_enumerate: null argument");
    return guarded([&] {
        FiberSpec spec = fiber_of(model, table);
        RelaxationSpec r = relaxation_of(relax, spec.cells());
        auto pts = enumerate_fiber(spec, r, cap);
        json j{{"relaxation", relax_json(r)}, {"count", pts.size()}, {"points", pts}};
        *out_json = dup_string(j.dump());
        return FT_OK;
    });
}

ft_status ft_fiber_connectivity(const ft_model* model, const ft_table* table, const ft_moveset* moves,
                                const ft_relaxation* relax, size_t cap, char** out_json) {
    if (!model || !table || !moves || !out_json) return usage("ft_fiber_connectivity: null argument");
    return guarded([&] {
        FiberSpec spec = fiber_of(model, table);
        RelaxationSpec r = relaxation_of(relax, spec.cells());
        for (const auto& m : moves->moves.moves()) require(spec.model->in_kernel(m), "move is not in the kernel of the model");
        json j = to_json(connectivity(spec, moves->moves, r, cap));
        j["relaxation"] = relax_json(r);
        j["moves"] = moves->moves.size();
        *out_json = dup_string(j.dump(2));
        return FT_OK;
    });
}

ft_chain_config ft_chain_config_default(void) {
    ft_chain_config c{};
    c.length = 10000;
    c.burn_in = 0;
    c.has_burn_in = 0;
    c.thinning = 1;
    c.seed = 1;
    c.runs = 1;
    c.window = 1000;
    c.target = FT_TARGET_HYPERGEOMETRIC;
    c.statistic = FT_STAT_PEARSON;
    c.reset_on_reject = 0;
    return c;
}

ft_status ft_test_run(const ft_model* model, const ft_table* table, const ft_moveset* moves,
                      const ft_relaxation* relax, const ft_chain_config* config, char** out_json, char** out_csv) {
    if (!model || !table || !moves || !config || !out_json) return usage("ft_test_run: null argument");
    if (config->runs == 0) return usage("runs must be positive");
    return guarded([&] {
        FiberSpec spec = fiber_of(model, table);
        ChainConfig cc;
        cc.length = config->length;
        if (config->has_burn_in) cc.burn_in = config->burn_in;
        cc.thinning = config->thinning;
        cc.relax = relaxation_of(relax, spec.cells());
        cc.target = config->target == FT_TARGET_UNIFORM ? Target::uniform : Target::hypergeometric;
        cc.reset_on_reject = config->reset_on_reject != 0;
        const Statistic stat = config->statistic == FT_STAT_G2 ? Statistic::likelihood_ratio : Statistic::pearson;

        json runs = json::array();
        std::ostringstream csv;
        std::vector<double> ps;
        std::size_t stuck = 0;
        for (std::size_t r = 0; r < config->runs; ++r) {
            cc.seed = config->seed + r;
            std::vector<StepOutcome> trace;
            PValue p = exact_p_value(table->cells, moves->moves, cc, spec, stat, &trace);
            AcceptanceReport rep = acceptance_report(trace, std::max<std::size_t>(1, config->window));
            if (rep.total.accepted == 0) ++stuck;
            json one = to_json(p);
            one["seed"] = cc.seed;
            one["acceptance"] = to_json(rep);
            runs.push_back(one);
            ps.push_back(p.p);
            write_acceptance_csv(csv, rep, r, r == 0);
        }
        BatchMeans across = batch_means(ps, ps.size());
        json j;
        j["p_value"] = across.mean;
        j["se"] = config->runs == 1 ? runs[0]["se"] : json(across.se);
        j["p_values"] = ps;
        j["runs_without_acceptance"] = stuck;
        j["statistic"] = to_string(stat);
        j["target"] = to_string(cc.target);
        j["chain_length"] = cc.length;
        j["burn_in"] = cc.effective_burn_in();
        j["relaxation"] = relax_json(cc.relax);
        j["runs"] = runs;
        *out_json = dup_string(j.dump(2));
        if (out_csv) *out_csv = dup_string(csv.str());
        return FT_OK;
    });
}

ft_status ft_ks_two_sample(const double* x, size_t nx, const double* y, size_t ny, double* statistic,
                           double* p_value) {
    if (!x || !y || !statistic || !p_value) return usage("ft_ks_two_sample: null argument");
    return guarded([&] {
        KsResult r = ks_two_sample(std::vector<double>(x, x + nx), std::vector<double>(y, y + ny));
        *statistic = r.statistic;
        *p_value = r.p_value;
        return FT_OK;
    });
}

ft_status ft_nfold(const ft_model* a, const ft_model* b, int64_t n, int complexity_only, int64_t norm_cap,
                   char** out_json, char** out_moves) {
    if (!a || !b || !out_json) return usage("ft_nfold: null argument");
    return guarded([&] {
        const Matrix& am = a->matrix->entries();
        const Matrix& bm = b->matrix->entries();
        json j;
        j["n"] = n;
        if (am.rows() + bm.rows() <= 24) j["complexity_upper_bound"] = to_decimal(graver_complexity_upper_bound(am, bm));
        if (complexity_only) {
            GraverComplexity g = graver_complexity(am, bm, norm_cap);
            j["g"] = g.g;
            j["g_is_lower_bound"] = g.lower_bound;
        } else {
            NFoldGraver r = nfold_graver({am, bm, n}, norm_cap);
            j["g"] = r.complexity.g;
            j["g_is_lower_bound"] = r.complexity.lower_bound;
            j["size"] = r.moves.size();
            j["base_size"] = r.base_size;
            j["bound"] = to_decimal(r.bound);
            j["complete"] = r.moves.complete();
            if (out_moves) {
                std::ostringstream os;
                write_moves(os, r.moves);
                *out_moves = dup_string(os.str());
            }
        }
        *out_json = dup_string(j.dump(2));
        return FT_OK;
    });
}

ft_status ft_nfold_hierarchical_bound(const char* complex_faces, const int64_t* dims, size_t k, const size_t* v,
                                      size_t nv, int64_t norm_cap, char** out_json) {
    if (!complex_faces || !dims || !v || !out_json) return usage("ft_nfold_hierarchical_bound: null argument");
    return guarded([&] {
        Dims d(std::vector<Int>(dims, dims + k));
        SimplicialComplex c = SimplicialComplex::parse(complex_faces, k);
        std::vector<std::size_t> vv;
        for (std::size_t i = 0; i < nv; ++i) {
            require(v[i] >= 1 && v[i] <= k, "V vertices are 1-based and must lie in the ground set");
            vv.push_back(v[i] - 1);
        }
        HierarchicalBound h = hierarchical_graver_size_bound(c, d, vv, norm_cap);
        json j{{"n", h.decomposition.n},
               {"g", h.complexity.g},
               {"g_is_lower_bound", h.complexity.lower_bound},
               {"base_size", h.base_size},
               {"bound", to_decimal(h.bound)},
               {"A", to_json(h.decomposition.a_block.entries())},
               {"B", to_json(h.decomposition.b_block.entries())}};
        *out_json = dup_string(j.dump(2));
        return FT_OK;
    });
}

ft_status ft_counterexample_thm41(int64_t n, int64_t q_max, size_t cap, char** out_json) {
    if (!out_json) return usage("ft_counterexample_thm41: null argument");
    return guarded([&] {
        Thm41Certificate c = build_thm41(n, q_max, cap);
        *out_json = dup_string(to_json(c).dump(2));
        if (!c.verified()) {
            last_error = "certificate check failed";
            return FT_ERR_VERIFICATION;
        }
        return FT_OK;
    });
}

ft_status ft_counterexample_antistair(int64_t i_levels, int64_t j_levels, const int64_t* tau, size_t n_tau,
                                      int tau_on_i, int64_t q, size_t cap, char** out_json) {
    if (!out_json || (n_tau && !tau)) return usage("ft_counterexample_antistair: null argument");
    return guarded([&] {
        StaircaseSpec s{i_levels, j_levels, std::vector<Int>(tau, tau + n_tau), tau_on_i ? StairAxis::i : StairAxis::j};
        AntiStaircaseCertificate c = anti_staircase_witness(s, q, cap);
        json j = to_json(c);
        j["S_layers"] = render_layers(c.s, i_levels, j_levels);
        *out_json = dup_string(j.dump(2));
        if (!c.verified()) {
            last_error = "certificate check failed";
            return FT_ERR_VERIFICATION;
        }
        return FT_OK;
    });
}

ft_status ft_counterexample_theta(const int64_t* theta, size_t eta, char** out_json) {
    if (!out_json || (eta && !theta)) return usage("ft_counterexample_theta: null argument");
    return guarded([&] {
        ThetaGadget g = theta_gadget(Vec(theta, theta + eta));
        *out_json = dup_string(to_json(g).dump(2));
        if (!g.verified()) {
            last_error = "integer points differ from the closed forms";
            return FT_ERR_VERIFICATION;
        }
        return FT_OK;
    });
}

}  // extern "C"
