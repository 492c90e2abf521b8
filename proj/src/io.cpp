#include "io.hpp"

#include <fstream>
#include <sstream>

namespace fibertool {

using nlohmann::json;

void write_matrix(std::ostream& os, const Matrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
        os << '\n';
    }
}

Matrix read_matrix(std::istream& is) {
    long long rows = -1, cols = -1;
    if (!(is >> rows >> cols) || rows < 0 || cols < 0) fail(ErrorCode::parse, "matrix file: expected a 'rows cols' header");
    std::vector<Int> data;
    data.reserve(static_cast<std::size_t>(rows * cols));
    for (long long i = 0; i < rows * cols; ++i) {
        Int x;
        if (!(is >> x))
            fail(ErrorCode::parse, "matrix file: expected " + std::to_string(rows * cols) + " entries, found " +
                                       std::to_string(i));
        data.push_back(x);
    }
    std::string extra;
    if (is >> extra) fail(ErrorCode::parse, "matrix file: trailing data '" + extra + "'");
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

void write_moves(std::ostream& os, const MoveSet& moves) {
    os << moves.size() << ' ' << moves.dimension() << '\n';
    for (const auto& m : moves.moves()) {
        for (std::size_t c = 0; c < m.size(); ++c) os << (c ? " " : "") << m[c];
        os << '\n';
    }
}

MoveSet read_moves(std::istream& is, std::shared_ptr<const DesignMatrix> model, MoveRole role) {
    Matrix m = read_matrix(is);
    if (model) require(m.rows() == 0 || m.cols() == model->cols(), "move file: moves have the wrong length for the model");
    std::vector<Vec> moves;
    for (std::size_t r = 0; r < m.rows(); ++r) moves.emplace_back(m.row(r).begin(), m.row(r).end());
    return MoveSet(role, std::move(moves), std::move(model));
}

std::vector<std::size_t> read_cell_set(std::istream& is, const Dims& dims) {
    std::vector<std::size_t> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        MultiIndex idx;
        Int x;
        while (ls >> x) idx.coords.push_back(x);
        if (!ls.eof()) fail(ErrorCode::parse, "cell set line " + std::to_string(lineno) + ": not an integer");
        if (idx.coords.empty()) continue;
        if (idx.coords.size() != dims.arity())
            fail(ErrorCode::parse, "cell set line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(dims.arity()) + " coordinates");
        out.push_back(flat_index(dims, idx));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
    out << text;
    if (!out) fail(ErrorCode::io, "write to '" + path + "' failed");
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(Vec(m.row(r).begin(), m.row(r).end()));
    return rows;
}

json to_json(const Model& model) {
    json j;
    j["kind"] = model.kind;
    j["rows"] = model.matrix.rows();
    j["cols"] = model.matrix.cols();
    j["rank"] = rank(model.matrix.entries());
    if (model.complex) {
        json faces = json::array();
        for (const auto& f : model.complex->faces()) {
            std::vector<std::size_t> one;
            for (std::size_t x : f) one.push_back(x + 1);
            faces.push_back(one);
        }
        j["faces"] = faces;
    }
    if (model.dims) j["dims"] = model.dims->levels();
    j["row_labels"] = model.matrix.row_labels();
    return j;
}

json to_json(const MoveSet& moves, const DesignMatrix* model) {
    json j;
    j["role"] = to_string(moves.role());
    j["size"] = moves.size();
    j["dimension"] = moves.dimension();
    j["complete"] = moves.complete();
    Int max1 = 0, maxinf = 0;
    for (const auto& m : moves.moves()) {
        max1 = std::max(max1, norm1(m));
        maxinf = std::max(maxinf, norm_inf(m));
    }
    j["max_norm1"] = max1;
    j["max_norm_inf"] = maxinf;
    if (model) j["spans_integer_kernel"] = spans_integer_kernel(moves, *model);
    return j;
}

json to_json(const ConnectivityReport& report, bool include_points) {
    json j;
    j["component_count"] = report.component_count();
    j["connected"] = report.connected();
    j["fiber_points"] = report.points.size();
    j["relaxed_points"] = report.relaxed_points;
    j["component_sizes"] = json::array();
    for (const auto& c : report.components) j["component_sizes"].push_back(c.size());
    j["witness_pairs"] = json::array();
    for (const auto& [a, b] : report.witness_pairs)
        j["witness_pairs"].push_back({{"u", report.points[a]}, {"v", report.points[b]}});
    if (include_points) {
        j["points"] = report.points;
        j["components"] = report.components;
    }
    return j;
}

json to_json(const PValue& p) {
    return {{"p_value", p.p},
            {"se", p.se},
            {"observed_statistic", p.observed},
            {"samples", p.samples},
            {"acceptance_rate", p.acceptance_rate}};
}

json to_json(const AcceptanceReport& report) {
    json w = json::array();
    for (const auto& x : report.windows) w.push_back(x.rate());
    return {{"steps", report.total.steps},
            {"accepted", report.total.accepted},
            {"rejected_out_of_relaxed", report.total.rejected_out_of_relaxed},
            {"rejected_metropolis", report.total.rejected_metropolis},
            {"excursions", report.total.excursions},
            {"rate", report.total.rate()},
            {"window_rates", w}};
}

namespace {

json reach_json(const ReachCheck& r) { return {{"q", r.q}, {"reached", r.reached}, {"visited", r.visited}}; }

}  // namespace

json to_json(const Thm41Certificate& c) {
    json j;
    j["n"] = c.n;
    j["verified"] = c.verified();
    j["A"] = to_json(c.a.entries());
    j["U"] = to_json(c.u_transform);
    j["AU"] = to_json(c.h);
    j["checks"] = {{"AU_equals_I_0_0", c.au_is_hnf},
                   {"det_U", to_decimal(c.det_u)},
                   {"computed_hnf_matches", c.hnf_matches},
                   {"computed_lattice_basis_matches", c.kernel_matches},
                   {"margins_equal", c.margins_equal},
                   {"spans_integer_kernel", c.spans_kernel},
                   {"single_steps_below_bound", c.steps_violate}};
    j["step_minima"] = c.step_minima;
    j["bound"] = -(c.n - 2);
    j["z1"] = c.z1;
    j["z2"] = c.z2;
    j["u"] = c.u;
    j["v"] = c.v;
    j["disconnected"] = json::array();
    for (const auto& r : c.disconnected) j["disconnected"].push_back(reach_json(r));
    j["minimal_q"] = c.minimal_q ? json(*c.minimal_q) : json(nullptr);
    return j;
}

json to_json(const AntiStaircaseCertificate& c) {
    json j;
    j["I"] = c.spec.I;
    j["J"] = c.spec.J;
    j["tau"] = c.spec.tau;
    j["axis"] = c.spec.axis == StairAxis::j ? "j" : "i";
    j["q"] = c.q;
    j["verified"] = c.verified();
    j["S_size"] = c.s.size();
    j["witness"] = c.witness;
    j["m"] = c.m;
    j["m_prime"] = c.m_prime;
    j["checks"] = {{"witness_in_kernel", c.witness_in_kernel},
                   {"nonnegative", c.nonnegative},
                   {"margins_equal", c.margins_equal},
                   {"m_zero_off_S", c.m_zero_off_s},
                   {"slice_ik_margins_differ", c.slice_margins_differ},
                   {"bfs", reach_json(c.bfs)}};
    j["printed_witness"] = {{"move", c.printed_witness},
                            {"in_kernel", c.printed_witness_in_kernel},
                            {"nonnegative_with_m_zero_off_S", c.printed_witness_fits}};
    return j;
}

json to_json(const ThetaGadget& g) {
    return {{"theta", g.theta},     {"verified", g.verified()}, {"points", g.points},
            {"expected", g.expected}, {"missing", g.missing},   {"extra", g.extra},
            {"matches", g.matches}, {"patterns_hold", g.patterns_hold}};
}

}  // namespace fibertool
