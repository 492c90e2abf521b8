#include "models.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace fibertool {

SimplicialComplex::SimplicialComplex(std::size_t ground_size, std::vector<std::vector<std::size_t>> faces)
    : ground_size_(ground_size), faces_(std::move(faces)) {
    require(!faces_.empty(), "a simplicial complex needs at least one face");
    for (auto& f : faces_) {
        require(!f.empty(), "faces must be nonempty");
        std::sort(f.begin(), f.end());
        require(std::adjacent_find(f.begin(), f.end()) == f.end(), "a face lists a vertex twice");
        for (std::size_t v : f) require(v < ground_size_, "face vertex out of range");
    }
    for (std::size_t a = 0; a < faces_.size(); ++a)
        for (std::size_t b = 0; b < faces_.size(); ++b)
            if (a != b && std::includes(faces_[b].begin(), faces_[b].end(), faces_[a].begin(), faces_[a].end()))
                fail(ErrorCode::invalid_argument, "faces must be maximal: face " + std::to_string(a + 1) +
                                                      " is contained in face " + std::to_string(b + 1));
}

SimplicialComplex SimplicialComplex::parse(const std::string& text, std::size_t ground_size) {
    std::vector<std::vector<std::size_t>> faces;
    auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, std::string("complex: ") + e.what());
        }
        if (!j.is_array()) fail(ErrorCode::parse, "complex: expected a JSON list of faces");
        for (const auto& face : j) {
            if (!face.is_array()) fail(ErrorCode::parse, "complex: every face must be a list");
            std::vector<std::size_t> f;
            for (const auto& v : face) {
                if (!v.is_number_integer() || v.get<Int>() < 1)
                    fail(ErrorCode::parse, "complex: vertices are positive integers");
                f.push_back(v.get<std::size_t>() - 1);
            }
            faces.push_back(std::move(f));
        }
    } else {
        std::vector<std::size_t> cur;
        for (std::size_t pos = 0; pos <= text.size(); ++pos) {
            char c = pos < text.size() ? text[pos] : ',';
            if (c == ',') {
                if (cur.empty()) fail(ErrorCode::parse, "complex: empty face at position " + std::to_string(pos));
                faces.push_back(std::move(cur));
                cur.clear();
            } else if (c >= '1' && c <= '9') {
                cur.push_back(static_cast<std::size_t>(c - '1'));
            } else {
                fail(ErrorCode::parse, std::string("complex: unexpected character '") + c + "' at position " +
                                           std::to_string(pos));
            }
        }
    }
    return SimplicialComplex(ground_size, std::move(faces));
}

std::string SimplicialComplex::to_string() const {
    std::string out;
    bool digits = ground_size_ <= 9;
    if (!digits) out += "[";
    for (std::size_t s = 0; s < faces_.size(); ++s) {
        if (s) out += ",";
        if (!digits) out += "[";
        for (std::size_t i = 0; i < faces_[s].size(); ++i) {
            if (!digits && i) out += ",";
            out += std::to_string(faces_[s][i] + 1);
        }
        if (!digits) out += "]";
    }
    if (!digits) out += "]";
    return out;
}

DesignMatrix::DesignMatrix(Matrix entries, std::vector<std::string> row_labels)
    : entries_(std::move(entries)), labels_(std::move(row_labels)) {
    require(labels_.empty() || labels_.size() == entries_.rows(), "one row label per row");
}

DesignMatrix marginal_design(const std::vector<std::vector<std::size_t>>& faces, const std::vector<Int>& levels) {
    std::size_t cols = 1;
    for (Int d : levels) cols *= static_cast<std::size_t>(d);
    std::vector<std::size_t> offsets;
    std::size_t rows = 0;
    for (const auto& f : faces) {
        offsets.push_back(rows);
        std::size_t ds = 1;
        for (std::size_t v : f) ds *= static_cast<std::size_t>(levels.at(v));
        rows += ds;
    }
    Matrix m(rows, cols);
    std::vector<std::string> labels(rows);
    std::vector<Int> idx(levels.size(), 0);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t s = 0; s < faces.size(); ++s) {
            std::size_t pos = 0;
            for (std::size_t v : faces[s]) pos = pos * static_cast<std::size_t>(levels[v]) + static_cast<std::size_t>(idx[v]);
            m(offsets[s] + pos, c) = 1;
            std::string& lab = labels[offsets[s] + pos];
            if (lab.empty()) {
                lab = "F" + std::to_string(s + 1) + "(";
                for (std::size_t i = 0; i < faces[s].size(); ++i)
                    lab += (i ? "," : "") + std::to_string(idx[faces[s][i]] + 1);
                lab += ")";
            }
        }
        for (std::size_t l = levels.size(); l-- > 0;) {
            if (++idx[l] < levels[l]) break;
            idx[l] = 0;
        }
    }
    return DesignMatrix(std::move(m), std::move(labels));
}

DesignMatrix hierarchical_design_matrix(const SimplicialComplex& complex, const Dims& dims) {
    require(complex.ground_size() == dims.arity(), "complex ground set size must equal the table arity");
    return marginal_design(complex.faces(), dims.levels());
}

DesignMatrix independence_matrix(const std::vector<Int>& levels) {
    std::vector<std::vector<std::size_t>> faces;
    for (std::size_t l = 0; l < levels.size(); ++l) faces.push_back({l});
    return hierarchical_design_matrix(SimplicialComplex(levels.size(), faces), Dims(levels));
}

DesignMatrix no_three_way_matrix(Int I, Int J, Int K) {
    require(I >= 2 && J >= 2 && K >= 2, "no-three-way model needs every level count >= 2");
    return hierarchical_design_matrix(SimplicialComplex(3, {{0, 1}, {1, 2}, {0, 2}}), Dims({I, J, K}));
}

DesignMatrix lawrence_lifting(const DesignMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Matrix out(m + n, 2 * n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) out(r, c) = a.entries()(r, c);
    for (std::size_t i = 0; i < n; ++i) {
        out(m + i, i) = 1;
        out(m + i, n + i) = 1;
    }
    return DesignMatrix(std::move(out));
}

DesignMatrix a_family_matrix(Int n) {
    require(n >= 3, "the banded family needs n >= 3");
    auto rows = static_cast<std::size_t>(n - 2);
    Matrix m(rows, static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < rows; ++i) {
        m(i, i) = 1;
        m(i, i + 1) = -2;
        m(i, i + 2) = 1;
    }
    return DesignMatrix(std::move(m));
}

NFoldDecomposition nfold_block_decomposition(const SimplicialComplex& complex, const Dims& dims,
                                             const std::vector<std::size_t>& v_in) {
    require(complex.ground_size() == dims.arity(), "complex ground set size must equal the table arity");
    std::vector<std::size_t> v = v_in;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    require(!v.empty(), "V must be nonempty");
    for (std::size_t x : v) require(x < dims.arity(), "V vertex out of range");

    const std::size_t k = dims.arity();
    std::vector<bool> in_v(k, false);
    for (std::size_t x : v) in_v[x] = true;
    std::vector<std::size_t> rest, rest_pos(k, 0);
    for (std::size_t l = 0; l < k; ++l)
        if (!in_v[l]) {
            rest_pos[l] = rest.size();
            rest.push_back(l);
        }

    std::vector<std::vector<std::size_t>> link, deletion;
    std::vector<std::size_t> link_ids, deletion_ids;
    for (std::size_t s = 0; s < complex.faces().size(); ++s) {
        const auto& f = complex.faces()[s];
        std::size_t hits = 0;
        for (std::size_t x : f) hits += in_v[x] ? 1 : 0;
        if (hits == v.size()) {
            std::vector<std::size_t> g;
            for (std::size_t x : f)
                if (!in_v[x]) g.push_back(rest_pos[x]);
            link.push_back(std::move(g));
            link_ids.push_back(s);
        } else if (hits == 0) {
            std::vector<std::size_t> g;
            for (std::size_t x : f) g.push_back(rest_pos[x]);
            deletion.push_back(std::move(g));
            deletion_ids.push_back(s);
        } else {
            fail(ErrorCode::invalid_argument,
                 "V must be contained in or disjoint from every face; face " + std::to_string(s + 1) + " splits it");
        }
    }

    std::vector<Int> delta;
    for (std::size_t l : rest) delta.push_back(dims.level(l));
    NFoldDecomposition out;
    out.a_block = marginal_design(link, delta);
    out.b_block = marginal_design(deletion, delta);
    out.n = 1;
    for (std::size_t x : v) out.n *= dims.level(x);

    // Row offsets of each face inside A_Delta.
    std::vector<std::size_t> offsets;
    std::size_t total_rows = 0;
    for (const auto& f : complex.faces()) {
        offsets.push_back(total_rows);
        std::size_t ds = 1;
        for (std::size_t x : f) ds *= static_cast<std::size_t>(dims.level(x));
        total_rows += ds;
    }

    auto face_row = [&](std::size_t s, const std::vector<Int>& full) {
        std::size_t pos = 0;
        for (std::size_t x : complex.faces()[s])
            pos = pos * static_cast<std::size_t>(dims.level(x)) + static_cast<std::size_t>(full[x]);
        return offsets[s] + pos;
    };

    // Odometer over the coordinates listed in `which`, writing into `full`.
    auto odometer = [&](const std::vector<std::size_t>& which, std::vector<Int>& full) {
        for (std::size_t i = which.size(); i-- > 0;) {
            std::size_t l = which[i];
            if (++full[l] < dims.level(l)) return true;
            full[l] = 0;
        }
        return false;
    };

    std::vector<Int> full(k, 0);
    auto flat_of = [&](const std::vector<Int>& f) {
        std::size_t pos = 0;
        for (std::size_t l = 0; l < k; ++l) pos = pos * static_cast<std::size_t>(dims.level(l)) + static_cast<std::size_t>(f[l]);
        return pos;
    };

    do {
        std::vector<Int> inner = full;
        for (std::size_t l : rest) inner[l] = 0;
        do {
            out.col_order.push_back(flat_of(inner));
        } while (odometer(rest, inner));
        for (std::size_t s : link_ids) {
            std::vector<std::size_t> free;
            for (std::size_t x : complex.faces()[s])
                if (!in_v[x]) free.push_back(x);
            std::vector<Int> cell = full;
            for (std::size_t x : free) cell[x] = 0;
            do {
                out.row_order.push_back(face_row(s, cell));
            } while (odometer(free, cell));
        }
    } while (odometer(v, full));

    for (std::size_t s : deletion_ids) {
        std::size_t ds = 1;
        for (std::size_t x : complex.faces()[s]) ds *= static_cast<std::size_t>(dims.level(x));
        for (std::size_t r = 0; r < ds; ++r) out.row_order.push_back(offsets[s] + r);
    }
    return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

Int parse_level(const std::vector<std::string>& toks, std::size_t i) {
    if (i >= toks.size()) fail(ErrorCode::parse, "model: missing integer at token " + std::to_string(i + 1));
    try {
        std::size_t used = 0;
        Int v = std::stoll(toks[i], &used);
        if (used != toks[i].size()) throw std::invalid_argument(toks[i]);
        return v;
    } catch (const std::exception&) {
        fail(ErrorCode::parse, "model: expected an integer at token " + std::to_string(i + 1) + ", got '" + toks[i] + "'");
    }
}

Model hierarchical_model(const std::string& faces_text, std::vector<Int> levels) {
    Dims dims(std::move(levels));
    SimplicialComplex cx = SimplicialComplex::parse(faces_text, dims.arity());
    return Model{"complex", hierarchical_design_matrix(cx, dims), cx, dims};
}

}  // namespace

Model parse_model(const std::string& spec) {
    auto first = spec.find_first_not_of(" \t\n");
    if (first != std::string::npos && spec[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorCode::parse, std::string("model JSON: ") + e.what());
        }
        if (!j.contains("complex") || !j.contains("dims"))
            fail(ErrorCode::parse, "model JSON needs \"complex\" and \"dims\"");
        return hierarchical_model(j["complex"].dump(), j["dims"].get<std::vector<Int>>());
    }
    auto toks = tokenize(spec);
    if (toks.empty()) fail(ErrorCode::parse, "model: empty specification");
    const std::string& kind = toks[0];
    if (kind == "independence") {
        std::vector<Int> levels;
        for (std::size_t i = 1; i < toks.size(); ++i) levels.push_back(parse_level(toks, i));
        if (levels.size() < 2) fail(ErrorCode::parse, "model: independence needs at least two level counts");
        Dims dims(levels);
        std::vector<std::vector<std::size_t>> faces;
        for (std::size_t l = 0; l < levels.size(); ++l) faces.push_back({l});
        SimplicialComplex cx(levels.size(), faces);
        return Model{"independence", hierarchical_design_matrix(cx, dims), cx, dims};
    }
    if (kind == "no3way") {
        if (toks.size() != 4) fail(ErrorCode::parse, "model: no3way takes exactly three level counts");
        Int I = parse_level(toks, 1), J = parse_level(toks, 2), K = parse_level(toks, 3);
        SimplicialComplex cx(3, {{0, 1}, {1, 2}, {0, 2}});
        return Model{"no3way", no_three_way_matrix(I, J, K), cx, Dims({I, J, K})};
    }
    if (kind == "complex") {
        if (toks.size() < 4 || toks[2] != "dims")
            fail(ErrorCode::parse, "model: expected 'complex <faces> dims d_1 ... d_k'");
        std::vector<Int> levels;
        for (std::size_t i = 3; i < toks.size(); ++i) levels.push_back(parse_level(toks, i));
        return hierarchical_model(toks[1], levels);
    }
    if (kind == "afamily" || kind == "lawrence-afamily") {
        if (toks.size() != 2) fail(ErrorCode::parse, "model: " + kind + " takes one integer n");
        DesignMatrix a = a_family_matrix(parse_level(toks, 1));
        if (kind == "afamily") return Model{kind, a, std::nullopt, std::nullopt};
        return Model{kind, lawrence_lifting(a), std::nullopt, std::nullopt};
    }
    fail(ErrorCode::parse, "model: unknown model kind '" + kind + "' at token 1");
}

}  // namespace fibertool
