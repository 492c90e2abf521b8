#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibertool {

using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Vec = std::vector<Int>;

enum class ErrorCode {
    invalid_argument,
    parse,
    io,
    cap_exceeded,
    verification,
    overflow,
};

// Single exception type for the core; the C layer maps `code` onto status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorCode::invalid_argument, what);
}

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::overflow, "integer overflow in addition");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::overflow, "integer overflow in multiplication");
    return r;
}

inline Int to_int(const BigInt& v) {
    if (v > std::numeric_limits<Int>::max() || v < std::numeric_limits<Int>::min())
        fail(ErrorCode::overflow, "value does not fit in 64 bits");
    return static_cast<Int>(v);
}

/// Dense row-major integer matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Int> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        require(data_.size() == rows_ * cols_, "matrix data size does not match its shape");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Int operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Int> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Int> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    Vec column(std::size_t c) const {
        Vec out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    const std::vector<Int>& data() const noexcept { return data_; }

    Vec apply(std::span<const Int> x) const {
        require(x.size() == cols_, "vector length does not match matrix column count");
        Vec out(rows_, 0);
        for (std::size_t r = 0; r < rows_; ++r) {
            Int acc = 0;
            for (std::size_t c = 0; c < cols_; ++c)
                if (Int a = (*this)(r, c); a != 0 && x[c] != 0) acc = checked_add(acc, checked_mul(a, x[c]));
            out[r] = acc;
        }
        return out;
    }

    Matrix operator*(const Matrix& o) const {
        require(cols_ == o.rows_, "matrix product shape mismatch");
        Matrix out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                Int a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out(i, j) = checked_add(out(i, j), checked_mul(a, o(k, j)));
            }
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    /// Largest absolute entry (0 for an empty matrix).
    Int max_abs() const {
        Int m = 0;
        for (Int v : data_) m = std::max(m, v < 0 ? -v : v);
        return m;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

inline bool is_zero(std::span<const Int> v) {
    for (Int x : v)
        if (x != 0) return false;
    return true;
}

inline Int norm1(std::span<const Int> v) {
    Int s = 0;
    for (Int x : v) s = checked_add(s, x < 0 ? -x : x);
    return s;
}

inline Int norm_inf(std::span<const Int> v) {
    Int s = 0;
    for (Int x : v) s = std::max(s, x < 0 ? -x : x);
    return s;
}

inline Vec negated(std::span<const Int> v) {
    Vec out(v.begin(), v.end());
    for (Int& x : out) x = -x;
    return out;
}

/// Rank over the rationals, by fraction-free elimination.
std::size_t rank(const Matrix& a);

/// Determinant of a square matrix (Bareiss).
BigInt determinant(const Matrix& a);

BigInt binomial(Int n, Int k);

}  // namespace fibertool
