#include "tables.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fibertool {

Dims::Dims(std::vector<Int> levels) : levels_(std::move(levels)) {
    require(!levels_.empty(), "a table needs at least one dimension");
    std::size_t total = 1;
    for (Int d : levels_) {
        require(d >= 1, "every level count must be positive");
        if (__builtin_mul_overflow(total, static_cast<std::size_t>(d), &total))
            fail(ErrorCode::overflow, "cell count overflows");
    }
    cells_ = total;
}

std::size_t flat_index(const Dims& dims, const MultiIndex& idx) {
    require(idx.coords.size() == dims.arity(), "multi-index has the wrong arity");
    std::size_t flat = 0;
    for (std::size_t l = 0; l < dims.arity(); ++l) {
        Int i = idx.coords[l];
        require(i >= 1 && i <= dims.level(l), "multi-index coordinate out of range");
        flat = flat * static_cast<std::size_t>(dims.level(l)) + static_cast<std::size_t>(i - 1);
    }
    return flat;
}

MultiIndex multi_index(const Dims& dims, std::size_t flat) {
    require(flat < dims.cells(), "flat index out of range");
    MultiIndex idx{std::vector<Int>(dims.arity())};
    for (std::size_t l = dims.arity(); l-- > 0;) {
        auto d = static_cast<std::size_t>(dims.level(l));
        idx.coords[l] = static_cast<Int>(flat % d) + 1;
        flat /= d;
    }
    return idx;
}

Table::Table(Dims dims, Vec cells) : dims_(std::move(dims)), cells_(std::move(cells)) {
    require(cells_.size() == dims_.cells(), "cell count does not match the dimensions");
}

bool Table::nonnegative() const {
    for (Int v : cells_)
        if (v < 0) return false;
    return true;
}

Int Table::total() const {
    Int s = 0;
    for (Int v : cells_) s = checked_add(s, v);
    return s;
}

namespace {

void collect_shape(const nlohmann::json& node, std::vector<Int>& shape) {
    if (!node.is_array()) return;
    require(!node.empty(), "empty array level");
    shape.push_back(static_cast<Int>(node.size()));
    collect_shape(node.front(), shape);
}

void collect_cells(const nlohmann::json& node, const std::vector<Int>& shape, std::size_t depth, Vec& out) {
    if (depth == shape.size()) {
        require(node.is_number_integer(), "table cells must be integers");
        out.push_back(node.get<Int>());
        return;
    }
    require(node.is_array() && static_cast<Int>(node.size()) == shape[depth], "ragged array: shape mismatch");
    for (const auto& child : node) collect_cells(child, shape, depth + 1, out);
}

nlohmann::json nest(const Table& t, std::size_t depth, std::size_t& pos) {
    nlohmann::json arr = nlohmann::json::array();
    for (Int i = 0; i < t.dims().level(depth); ++i) {
        if (depth + 1 == t.dims().arity())
            arr.push_back(t.cells()[pos++]);
        else
            arr.push_back(nest(t, depth + 1, pos));
    }
    return arr;
}

}  // namespace

Table flatten(const nlohmann::json& array) {
    std::vector<Int> shape;
    collect_shape(array, shape);
    require(!shape.empty(), "expected a nested array");
    Vec cells;
    collect_cells(array, shape, 0, cells);
    return Table(Dims(shape), std::move(cells));
}

nlohmann::json unflatten(const Table& t) {
    std::size_t pos = 0;
    return nest(t, 0, pos);
}

bool conformal_decomposition_check(std::span<const Int> x, const std::vector<Vec>& parts) {
    Vec sum(x.size(), 0);
    for (const Vec& p : parts) {
        require(p.size() == x.size(), "parts must have the same length as the move");
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (p[i] == 0) continue;
            if (x[i] == 0 || (p[i] > 0) != (x[i] > 0)) return false;
            sum[i] = checked_add(sum[i], p[i]);
        }
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        if (sum[i] != x[i]) return false;
    return true;
}

bool sign_order_leq(std::span<const Int> x, std::span<const Int> y) {
    require(x.size() == y.size(), "sign order compares vectors of equal length");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        if (x[i] > 0 ? (y[i] < x[i]) : (y[i] > x[i])) return false;
    }
    return true;
}

Vec marginal(const Table& t, const std::vector<std::size_t>& face) {
    std::vector<Int> sub;
    for (std::size_t f : face) sub.push_back(t.dims().level(f));
    std::size_t size = 1;
    for (Int d : sub) size *= static_cast<std::size_t>(d);
    Vec out(size, 0);
    std::size_t n = 0;
    for_each_index(t.dims(), [&](const MultiIndex& idx) {
        std::size_t pos = 0;
        for (std::size_t j = 0; j < face.size(); ++j)
            pos = pos * static_cast<std::size_t>(sub[j]) + static_cast<std::size_t>(idx.coords[face[j]] - 1);
        out[pos] = checked_add(out[pos], t.cells()[n++]);
    });
    return out;
}

void write_csv(std::ostream& os, const Table& t) {
    auto width = static_cast<std::size_t>(t.dims().level(t.dims().arity() - 1));
    for (std::size_t i = 0; i < t.cells().size(); ++i) {
        os << t.cells()[i];
        os << ((i + 1) % width == 0 ? '\n' : ',');
    }
}

Table read_csv(std::istream& is, const Dims* expected) {
    std::vector<Vec> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        Vec row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stoll(field, &used));
                if (field.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": bad integer '" + field + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": row length differs from the first row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::parse, "empty CSV table");
    Vec cells;
    for (auto& r : rows) cells.insert(cells.end(), r.begin(), r.end());
    if (expected != nullptr) {
        if (static_cast<Int>(rows.front().size()) != expected->level(expected->arity() - 1) ||
            cells.size() != expected->cells())
            fail(ErrorCode::parse, "CSV shape does not match the model dimensions");
        return Table(*expected, std::move(cells));
    }
    return Table(Dims({static_cast<Int>(rows.size()), static_cast<Int>(rows.front().size())}), std::move(cells));
}

void write_vector(std::ostream& os, const Table& t) {
    os << t.dims().arity();
    for (Int d : t.dims().levels()) os << ' ' << d;
    os << '\n';
    for (std::size_t i = 0; i < t.cells().size(); ++i) os << (i ? " " : "") << t.cells()[i];
    os << '\n';
}

Table read_vector(std::istream& is) {
    std::size_t k = 0;
    if (!(is >> k) || k == 0) fail(ErrorCode::parse, "vector table: missing dims header");
    std::vector<Int> levels(k);
    for (auto& d : levels)
        if (!(is >> d)) fail(ErrorCode::parse, "vector table: truncated dims header");
    Dims dims(levels);
    Vec cells(dims.cells());
    for (auto& c : cells)
        if (!(is >> c)) fail(ErrorCode::parse, "vector table: fewer cells than the dims announce");
    Int extra;
    if (is >> extra) fail(ErrorCode::parse, "vector table: trailing values after the last cell");
    return Table(std::move(dims), std::move(cells));
}

Table read_table(std::istream& is, const Dims* expected) {
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::istringstream ss(text);
    if (text.find(',') != std::string::npos) return read_csv(ss, expected);
    Table t = read_vector(ss);
    if (expected != nullptr && !(t.dims() == *expected))
        fail(ErrorCode::parse, "table dimensions do not match the model");
    return t;
}

}  // namespace fibertool
