#include <doctest.h>

#include "io.hpp"
#include "oracles.hpp"

#include <sstream>

using namespace fibertool;
using support::error_of;

TEST_CASE("4ti2 matrix files round trip") {
    Matrix m = independence_matrix({2, 3}).entries();
    std::stringstream ss;
    write_matrix(ss, m);
    CHECK(ss.str().rfind("5 6\n1 1 1 0 0 0\n", 0) == 0);
    CHECK(read_matrix(ss) == m);

    std::istringstream empty("0 4\n");
    CHECK(read_matrix(empty).cols() == 4);
    std::istringstream short_m("2 2\n1 2 3\n");
    CHECK(error_of([&] { read_matrix(short_m); }) == ErrorCode::parse);
    std::istringstream extra("1 2\n1 2 3\n");
    CHECK(error_of([&] { read_matrix(extra); }) == ErrorCode::parse);
    std::istringstream header("x y\n");
    CHECK(error_of([&] { read_matrix(header); }) == ErrorCode::parse);
}

TEST_CASE("move files round trip and are checked against the model") {
    auto a = std::make_shared<DesignMatrix>(independence_matrix({3, 3}));
    MoveSet swaps = independence_swap_basis(3, 3);
    std::stringstream ss;
    write_moves(ss, swaps);
    MoveSet back = read_moves(ss, a, MoveRole::markov);
    CHECK(back.moves() == swaps.moves());
    CHECK(back.role() == MoveRole::markov);

    std::istringstream wrong_len("1 4\n1 -1 -1 1\n");
    CHECK(error_of([&] { read_moves(wrong_len, a); }) == ErrorCode::invalid_argument);
    std::istringstream not_kernel("1 9\n1 0 0 0 0 0 0 0 0\n");
    CHECK(error_of([&] { read_moves(not_kernel, a); }) == ErrorCode::invalid_argument);
}

TEST_CASE("cell sets") {
    Dims d({3, 3, 3});
    std::istringstream in("# S\n1 1 1\n1,2,3  # trailing\n\n3 3 3\n1 1 1\n");
    CHECK(read_cell_set(in, d) == std::vector<std::size_t>{0, 5, 26});
    std::istringstream bad("1 1\n");
    CHECK(error_of([&] { read_cell_set(bad, d); }) == ErrorCode::parse);
    std::istringstream range("4 1 1\n");
    CHECK(error_of([&] { read_cell_set(range, d); }) == ErrorCode::invalid_argument);
    std::istringstream junk("1 a 1\n");
    CHECK(error_of([&] { read_cell_set(junk, d); }) == ErrorCode::parse);
}

TEST_CASE("json summaries") {
    Model m = parse_model("complex 12,23 dims 2 2 2");
    auto j = to_json(m);
    CHECK(j["rows"] == 8);
    CHECK(j["faces"] == nlohmann::json::parse("[[1,2],[2,3]]"));
    CHECK(j["rank"] == 6);

    DesignMatrix a = independence_matrix({2, 3});
    auto g = to_json(graver_basis(a, 5), &a);
    CHECK(g["size"] == 3);
    CHECK(g["role"] == "graver");
    CHECK(g["spans_integer_kernel"] == true);
    CHECK(g["max_norm1"] == 4);

    auto c = to_json(build_thm41(4, 4, 100000));
    CHECK(c["verified"] == true);
    CHECK(c["checks"]["det_U"] == "1");
    CHECK(c["minimal_q"] == 2);
    CHECK(to_decimal(BigInt(1) << 70) == "1180591620717411303424");
}

TEST_CASE("files") {
    CHECK(error_of([] { read_file("/nonexistent/x"); }) == ErrorCode::io);
    CHECK(error_of([] { write_file("/nonexistent/x", "1"); }) == ErrorCode::io);
}
