#include <doctest.h>

#include "fibertool/fibertool.h"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("fibertool_capi_" + name);
    std::ofstream(p) << text;
    return p.string();
}

json take(char* s) {
    json j = json::parse(s);
    ft_string_free(s);
    return j;
}

}  // namespace

TEST_CASE("models through the C interface") {
    ft_model* m = nullptr;
    REQUIRE(ft_model_parse("independence 2 3", &m) == FT_OK);
    CHECK(ft_model_rows(m) == 5);
    CHECK(ft_model_cols(m) == 6);
    CHECK(ft_model_entry(m, 2, 0) == 1);
    CHECK(ft_model_entry(m, 3, 0) == 0);
    char* text = nullptr;
    REQUIRE(ft_model_matrix_text(m, &text) == FT_OK);
    CHECK(std::string(text).rfind("5 6\n", 0) == 0);
    ft_string_free(text);
    char* meta = nullptr;
    REQUIRE(ft_model_describe_json(m, &meta) == FT_OK);
    CHECK(take(meta)["kind"] == "independence");
    ft_model_free(m);

    ft_model* bad = nullptr;
    CHECK(ft_model_parse("independance 2 2", &bad) == FT_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::string(ft_last_error()).find("unknown model kind") != std::string::npos);
    CHECK(ft_model_parse(nullptr, &bad) == FT_ERR_USAGE);
    CHECK(ft_model_read_matrix("/nonexistent/m.mat", &bad) == FT_ERR_IO);
    CHECK(std::string(ft_status_name(FT_ERR_CAP_EXCEEDED)).size() > 0);

    const int64_t entries[] = {1, -2, 1};
    ft_model* raw = nullptr;
    REQUIRE(ft_model_from_matrix(1, 3, entries, &raw) == FT_OK);
    ft_moveset* l = nullptr;
    REQUIRE(ft_bases_compute(raw, "lattice", 10, &l) == FT_OK);
    CHECK(ft_moveset_size(l) == 2);
    char* moves = nullptr;
    REQUIRE(ft_moveset_text(l, &moves) == FT_OK);
    CHECK(std::string(moves) == "2 3\n2 1 0\n-1 0 1\n");
    ft_string_free(moves);
    ft_moveset_free(l);
    ft_model_free(raw);
}

TEST_CASE("fiber counting and connectivity through the C interface") {
    ft_model* m = nullptr;
    REQUIRE(ft_model_parse("independence 4 4", &m) == FT_OK);
    ft_table* t = nullptr;
    REQUIRE(ft_table_read(temp_file("sparse.csv", "1,0,0,1\n1,1,0,0\n0,1,1,0\n0,0,1,1\n").c_str(), m, &t) == FT_OK);
    CHECK(ft_table_size(t) == 16);
    CHECK(ft_table_cells(t)[3] == 1);

    char* out = nullptr;
    REQUIRE(ft_fiber_count(m, t, nullptr, 1000000, &out) == FT_OK);
    CHECK(take(out)["count"] == "282");
    REQUIRE(ft_fiber_enumerate(m, t, nullptr, 1000000, &out) == FT_OK);
    CHECK(take(out)["points"].size() == 282);
    CHECK(ft_fiber_enumerate(m, t, nullptr, 10, &out) == FT_ERR_CAP_EXCEEDED);

    ft_moveset* mk = nullptr;
    REQUIRE(ft_bases_compute(m, "markov", 4, &mk) == FT_OK);
    CHECK(ft_moveset_size(mk) == 36);
    REQUIRE(ft_fiber_connectivity(m, t, mk, nullptr, 1000000, &out) == FT_OK);
    json c = take(out);
    CHECK(c["connected"] == true);
    CHECK(c["fiber_points"] == 282);

    ft_relaxation r{1, 1, nullptr, 0};
    ft_moveset* lat = nullptr;
    REQUIRE(ft_bases_compute(m, "lattice", 4, &lat) == FT_OK);
    REQUIRE(ft_fiber_connectivity(m, t, lat, &r, 10000000, &out) == FT_OK);
    CHECK(take(out)["connected"] == true);

    ft_moveset* bad = nullptr;
    CHECK(ft_bases_compute(m, "basic", 4, &bad) == FT_ERR_INVALID);
    CHECK(ft_bases_compute(m, "nonsense", 4, &bad) == FT_ERR_USAGE);

    ft_moveset_free(lat);
    ft_moveset_free(mk);
    ft_table_free(t);
    ft_model_free(m);
}

TEST_CASE("chains through the C interface are seeded") {
    ft_model* m = nullptr;
    REQUIRE(ft_model_parse("independence 3 3", &m) == FT_OK);
    const int64_t cells[] = {5, 1, 2, 2, 6, 1, 1, 2, 7};
    ft_table* t = nullptr;
    REQUIRE(ft_table_from_cells(m, 9, cells, &t) == FT_OK);
    ft_moveset* mk = nullptr;
    REQUIRE(ft_bases_compute(m, "markov", 4, &mk) == FT_OK);
    ft_chain_config cfg = ft_chain_config_default();
    CHECK(cfg.length == 10000);
    cfg.length = 5000;
    cfg.runs = 3;
    cfg.seed = 11;
    char *j1 = nullptr, *j2 = nullptr, *csv = nullptr;
    REQUIRE(ft_test_run(m, t, mk, nullptr, &cfg, &j1, &csv) == FT_OK);
    REQUIRE(ft_test_run(m, t, mk, nullptr, &cfg, &j2, nullptr) == FT_OK);
    CHECK(std::string(j1) == std::string(j2));
    json r = take(j1);
    ft_string_free(j2);
    CHECK(r["p_values"].size() == 3);
    CHECK(r["burn_in"] == 500);
    CHECK(std::string(csv).rfind("run,window_start", 0) == 0);
    ft_string_free(csv);

    cfg.burn_in = 5000;
    cfg.has_burn_in = 1;
    CHECK(ft_test_run(m, t, mk, nullptr, &cfg, &j1, nullptr) == FT_ERR_INVALID);

    double d = 0, p = 0;
    const double x[] = {0, 1, 2}, y[] = {0, 1, 2};
    REQUIRE(ft_ks_two_sample(x, 3, y, 3, &d, &p) == FT_OK);
    CHECK(d == 0.0);
    CHECK(p == 1.0);

    ft_moveset_free(mk);
    ft_table_free(t);
    ft_model_free(m);
}

TEST_CASE("n-fold and certificates through the C interface") {
    ft_model *a = nullptr, *b = nullptr;
    REQUIRE(ft_model_parse("independence 2 3", &a) == FT_OK);
    std::vector<int64_t> id(36, 0);
    for (int i = 0; i < 6; ++i) id[static_cast<std::size_t>(i * 7)] = 1;
    REQUIRE(ft_model_from_matrix(6, 6, id.data(), &b) == FT_OK);
    char *out = nullptr, *moves = nullptr;
    REQUIRE(ft_nfold(a, b, 4, 0, 10, &out, &moves) == FT_OK);
    json j = take(out);
    CHECK(j["g"] == 3);
    CHECK(j["size"] == 42);
    CHECK(j["base_size"] == 15);
    CHECK(j["bound"] == "60");
    CHECK(std::string(moves).rfind("42 24\n", 0) == 0);
    ft_string_free(moves);

    const int64_t dims[] = {2, 2, 2, 3};
    const size_t v[] = {1, 2};
    REQUIRE(ft_nfold_hierarchical_bound("123,124,34", dims, 4, v, 2, 10, &out) == FT_OK);
    CHECK(take(out)["bound"] == "60");

    REQUIRE(ft_counterexample_thm41(5, 5, 1000000, &out) == FT_OK);
    CHECK(take(out)["minimal_q"] == 3);
    const int64_t tau[] = {1, 2, 3};
    REQUIRE(ft_counterexample_antistair(3, 3, tau, 3, 0, 1, 1000000, &out) == FT_OK);
    CHECK(take(out)["verified"] == true);
    const int64_t theta_ok[] = {1, 0, 1}, theta_bad[] = {2};
    REQUIRE(ft_counterexample_theta(theta_ok, 3, &out) == FT_OK);
    CHECK(take(out)["points"].size() == 4);
    REQUIRE(ft_counterexample_theta(theta_bad, 1, &out) == FT_ERR_VERIFICATION);
    CHECK(take(out)["verified"] == false);

    ft_model_free(a);
    ft_model_free(b);
}
