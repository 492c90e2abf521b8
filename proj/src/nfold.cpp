#include "nfold.hpp"

#include <algorithm>
#include <set>

namespace fibertool {

DesignMatrix build_nfold(const NFoldSpec& spec) {
    const Matrix& a = spec.a;
    const Matrix& b = spec.b;
    require(spec.n >= 1, "n must be positive");
    require(b.rows() == 0 || a.cols() == b.cols(), "A and B must have the same number of columns");
    const std::size_t s = a.cols(), p = a.rows(), pb = b.rows();
    const std::size_t n = static_cast<std::size_t>(spec.n);
    Matrix out(n * p + pb, n * s);
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < s; ++c) out(j * p + r, j * s + c) = a(r, c);
            labels.push_back("A" + std::to_string(j + 1) + "." + std::to_string(r + 1));
        }
    for (std::size_t r = 0; r < pb; ++r) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < s; ++c) out(n * p + r, j * s + c) = b(r, c);
        labels.push_back("B." + std::to_string(r + 1));
    }
    return DesignMatrix(std::move(out), std::move(labels));
}

std::size_t vector_type(std::span<const Int> x, std::size_t s) {
    require(s > 0 && x.size() % s == 0, "vector length is not a multiple of the block size");
    std::size_t t = 0;
    for (std::size_t j = 0; j < x.size(); j += s)
        if (!is_zero(x.subspan(j, s))) ++t;
    return t;
}

GraverComplexity graver_complexity(const Matrix& a, const Matrix& b, Int norm_cap) {
    require(b.rows() == 0 || a.cols() == b.cols(), "A and B must have the same number of columns");
    MoveSet ga = graver_basis(DesignMatrix(a), norm_cap);
    GraverComplexity out;
    out.lower_bound = !ga.complete();
    if (ga.empty()) return out;

    Matrix bg(b.rows(), ga.size());
    bool linked = false;
    for (std::size_t j = 0; j < ga.size(); ++j) {
        Vec col = b.rows() ? b.apply(ga.moves()[j]) : Vec{};
        for (std::size_t r = 0; r < b.rows(); ++r) bg(r, j) = col[r];
        linked = linked || !is_zero(col);
    }
    // Gr(A) lists one element per sign pair; the pair (g, -g) in two blocks has type 2 whenever B g != 0.
    out.g = linked ? 2 : 1;
    MoveSet gc = graver_basis(DesignMatrix(bg), norm_cap);
    out.lower_bound = out.lower_bound || !gc.complete();
    for (const auto& x : gc.moves()) out.g = std::max(out.g, norm1(x));
    return out;
}

BigInt graver_complexity_upper_bound(const Matrix& a, const Matrix& b) {
    const std::size_t rows = a.rows() + b.rows();
    require(rows <= 24, "closed-form bound is too large to evaluate for more than 24 rows");
    BigInt base = 2 * std::max(a.max_abs(), b.max_abs()) + 1;
    unsigned exponent = (1u << rows) - 1;
    return boost::multiprecision::pow(base, exponent);
}

namespace {

void for_each_subset(std::size_t n, std::size_t t, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> pick(t);
    for (std::size_t i = 0; i < t; ++i) pick[i] = i;
    while (true) {
        f(pick);
        std::size_t i = t;
        while (i > 0 && pick[i - 1] == n - t + i - 1) --i;
        if (i == 0) return;
        ++pick[i - 1];
        for (std::size_t j = i; j < t; ++j) pick[j] = pick[j - 1] + 1;
    }
}

}  // namespace

NFoldGraver nfold_graver(const NFoldSpec& spec, Int norm_cap) {
    NFoldGraver out;
    out.complexity = graver_complexity(spec.a, spec.b, norm_cap);
    const Int g = std::max<Int>(out.complexity.g, 1);
    const std::size_t s = spec.a.cols();
    auto model = std::make_shared<DesignMatrix>(build_nfold(spec));

    if (spec.n <= g) {
        MoveSet direct = graver_basis(*model, norm_cap);
        out.base_size = direct.size();
        out.bound = direct.size();
        out.moves = std::move(direct);
        return out;
    }

    MoveSet base = graver_basis(build_nfold({spec.a, spec.b, g}), norm_cap);
    out.base_size = base.size();
    out.bound = BigInt(base.size()) * binomial(spec.n, g);

    std::set<std::vector<Vec>> patterns;
    for (const auto& x : base.moves()) {
        std::vector<Vec> blocks;
        for (std::size_t j = 0; j < x.size(); j += s) {
            Vec piece(x.begin() + static_cast<std::ptrdiff_t>(j), x.begin() + static_cast<std::ptrdiff_t>(j + s));
            if (!is_zero(piece)) blocks.push_back(std::move(piece));
        }
        patterns.insert(std::move(blocks));
    }
    std::vector<Vec> lifted;
    const std::size_t n = static_cast<std::size_t>(spec.n);
    for (const auto& blocks : patterns)
        for_each_subset(n, blocks.size(), [&](const std::vector<std::size_t>& pos) {
            Vec x(n * s, 0);
            for (std::size_t i = 0; i < pos.size(); ++i)
                std::copy(blocks[i].begin(), blocks[i].end(), x.begin() + static_cast<std::ptrdiff_t>(pos[i] * s));
            lifted.push_back(sign_canonical(x));
        });
    std::sort(lifted.begin(), lifted.end(), [](const Vec& x, const Vec& y) {
        Int nx = norm1(x), ny = norm1(y);
        return nx != ny ? nx < ny : x > y;
    });
    Completeness c = (base.complete() && !out.complexity.lower_bound) ? Completeness::complete : Completeness::truncated;
    out.moves = MoveSet(MoveRole::graver, std::move(lifted), model, c);
    return out;
}

HierarchicalBound hierarchical_graver_size_bound(const SimplicialComplex& complex, const Dims& dims,
                                                 const std::vector<std::size_t>& v, Int norm_cap) {
    HierarchicalBound out{nfold_block_decomposition(complex, dims, v), {}, 0, 0};
    const auto& d = out.decomposition;
    out.complexity = graver_complexity(d.a_block.entries(), d.b_block.entries(), norm_cap);
    const Int g = std::max<Int>(out.complexity.g, 1);
    const Int used = std::min(g, d.n);
    MoveSet base = graver_basis(build_nfold({d.a_block.entries(), d.b_block.entries(), used}), norm_cap);
    out.base_size = base.size();
    out.bound = d.n <= g ? BigInt(base.size()) : BigInt(base.size()) * binomial(d.n, g);
    if (!base.complete()) out.complexity.lower_bound = true;
    return out;
}

}  // namespace fibertool
