#include "common.hpp"

#include <utility>

namespace fibertool {

namespace {

std::vector<std::vector<BigInt>> to_big(const Matrix& a) {
    std::vector<std::vector<BigInt>> m(a.rows(), std::vector<BigInt>(a.cols()));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c);
    return m;
}

}  // namespace

std::size_t rank(const Matrix& a) {
    auto m = to_big(a);
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t rk = 0;
    BigInt prev = 1;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t piv = rk;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rk]);
        for (std::size_t r = rk + 1; r < rows; ++r) {
            for (std::size_t j = c + 1; j < cols; ++j)
                m[r][j] = (m[rk][c] * m[r][j] - m[r][c] * m[rk][j]) / prev;
            m[r][c] = 0;
        }
        prev = m[rk][c];
        ++rk;
    }
    return rk;
}

BigInt determinant(const Matrix& a) {
    require(a.rows() == a.cols(), "determinant needs a square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    auto m = to_big(a);
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

BigInt binomial(Int n, Int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (Int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace fibertool
