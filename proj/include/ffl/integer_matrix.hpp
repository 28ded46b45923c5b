#pragma once

#include <algorithm>
#include <concepts>
#include <limits>
#include <tuple>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ffl/errors.hpp"

namespace ffl {

namespace detail {

template <std::signed_integral T> T checked_add(T a, T b) {
    T r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in matrix arithmetic");
    }
    return r;
}

template <std::signed_integral T> T checked_mul(T a, T b) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in matrix arithmetic");
    }
    return r;
}

// a - q*b
template <std::signed_integral T> T checked_axpy(T a, T q, T b) {
    return checked_add(a, checked_mul(static_cast<T>(-q), b));
}

// floor division for b > 0
template <std::signed_integral T> T floor_div(T a, T b) {
    T q = a / b;
    if ((a % b != 0) && (a < 0)) {
        --q;
    }
    return q;
}

// g = s*a + t*b with g >= 0
template <std::signed_integral T> std::tuple<T, T, T> ext_gcd(T a, T b) {
    T r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        T q = r0 / r1;
        T tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 < 0) {
        return {-r0, -s0, -t0};
    }
    return {r0, s0, t0};
}

} // namespace detail

/// Dense row-major integer matrix.
template <std::signed_integral T = std::int64_t> class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{0}) {}

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
        Matrix m(0, cols);
        for (const auto& r : rows) {
            m.append_row(r);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    T operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    void append_row(std::span<const T> r) {
        if (r.size() != cols_) {
            throw DomainError("row length " + std::to_string(r.size()) + " != " + std::to_string(cols_));
        }
        data_.insert(data_.end(), r.begin(), r.end());
        ++rows_;
    }
    void append_row(const std::vector<T>& r) { append_row(std::span<const T>(r)); }

    std::vector<std::vector<T>> to_rows() const {
        std::vector<std::vector<T>> out;
        for (std::size_t i = 0; i < rows_; ++i) {
            auto r = row(i);
            out.emplace_back(r.begin(), r.end());
        }
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Row-style Hermite normal form maintained under row insertion: positive
/// pivots, strictly increasing pivot columns, entries above each pivot reduced
/// into [0, pivot).
template <std::signed_integral T = std::int64_t> class HermiteBasis {
  public:
    explicit HermiteBasis(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<std::vector<T>>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivot_; }

    /// Adds v to the generating set. Returns true if the span grew.
    bool insert(std::span<const T> v_in) {
        check_len(v_in.size());
        std::vector<T> v(v_in.begin(), v_in.end());
        bool changed = false;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (v[c] == 0) {
                if (r < rows_.size() && pivot_[r] == c) {
                    ++r;
                }
                continue;
            }
            if (r < rows_.size() && pivot_[r] == c) {
                std::vector<T>& h = rows_[r];
                T a = h[c];
                T b = v[c];
                if (b % a == 0) {
                    T q = b / a;
                    for (std::size_t k = c; k < cols_; ++k) {
                        v[k] = detail::checked_axpy(v[k], q, h[k]);
                    }
                } else {
                    auto [g, s, t] = detail::ext_gcd(a, b);
                    T ag = a / g;
                    T bg = b / g;
                    for (std::size_t k = c; k < cols_; ++k) {
                        T hk = h[k];
                        T vk = v[k];
                        h[k] = detail::checked_add(detail::checked_mul(s, hk), detail::checked_mul(t, vk));
                        v[k] = detail::checked_add(detail::checked_mul(ag, vk), detail::checked_mul(static_cast<T>(-bg), hk));
                    }
                    changed = true;
                }
                ++r;
                continue;
            }
            // new pivot in column c
            if (v[c] < 0) {
                for (auto& x : v) {
                    x = -x;
                }
            }
            rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(r), std::move(v));
            pivot_.insert(pivot_.begin() + static_cast<std::ptrdiff_t>(r), c);
            changed = true;
            break;
        }
        if (changed) {
            reduce();
        }
        return changed;
    }
    bool insert(const std::vector<T>& v) { return insert(std::span<const T>(v)); }

    /// Coefficients x with x * rows() = v, if v lies in the integer row span.
    std::optional<std::vector<T>> solve(std::span<const T> v_in) const {
        check_len(v_in.size());
        std::vector<T> v(v_in.begin(), v_in.end());
        std::vector<T> x(rows_.size(), T{0});
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::size_t c = pivot_[r];
            // columns before the pivot must already be cleared
            for (std::size_t k = (r == 0 ? 0 : pivot_[r - 1] + 1); k < c; ++k) {
                if (v[k] != 0) {
                    return std::nullopt;
                }
            }
            const std::vector<T>& h = rows_[r];
            if (v[c] % h[c] != 0) {
                return std::nullopt;
            }
            T q = v[c] / h[c];
            x[r] = q;
            if (q != 0) {
                for (std::size_t k = c; k < cols_; ++k) {
                    v[k] = detail::checked_axpy(v[k], q, h[k]);
                }
            }
        }
        for (T e : v) {
            if (e != 0) {
                return std::nullopt;
            }
        }
        return x;
    }
    std::optional<std::vector<T>> solve(const std::vector<T>& v) const { return solve(std::span<const T>(v)); }

    bool contains(std::span<const T> v) const { return solve(v).has_value(); }
    bool contains(const std::vector<T>& v) const { return contains(std::span<const T>(v)); }

    Matrix<T> matrix() const { return Matrix<T>::from_rows(rows_, cols_); }

  private:
    void check_len(std::size_t len) const {
        if (len != cols_) {
            throw DomainError("vector length " + std::to_string(len) + " != " + std::to_string(cols_));
        }
    }

    void reduce() {
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            const std::size_t c = pivot_[j];
            const std::vector<T>& h = rows_[j];
            for (std::size_t i = 0; i < j; ++i) {
                std::vector<T>& g = rows_[i];
                T q = detail::floor_div(g[c], h[c]);
                if (q != 0) {
                    for (std::size_t k = c; k < cols_; ++k) {
                        g[k] = detail::checked_axpy(g[k], q, h[k]);
                    }
                }
            }
        }
    }

    std::size_t cols_;
    std::vector<std::vector<T>> rows_;
    std::vector<std::size_t> pivot_;
};

/// Hermite normal form of the row span of m; zero rows dropped.
template <std::signed_integral T> Matrix<T> hnf(const Matrix<T>& m) {
    HermiteBasis<T> h(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        h.insert(m.row(i));
    }
    return h.matrix();
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
template <std::signed_integral T> T bareiss_determinant(const Matrix<T>& m) {
    if (m.rows() != m.cols()) {
        throw DomainError("determinant of a non-square matrix");
    }
    const std::size_t n = m.rows();
    if (n == 0) {
        return T{1};
    }
    std::vector<__int128> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = m(i, j);
        }
    }
    auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
    int sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (at(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && at(s, k) == 0) {
                ++s;
            }
            if (s == n) {
                return T{0};
            }
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(at(k, j), at(s, j));
            }
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 num;
                __int128 lhs, rhs;
                if (__builtin_mul_overflow(at(i, j), at(k, k), &lhs) ||
                    __builtin_mul_overflow(at(i, k), at(k, j), &rhs) ||
                    __builtin_sub_overflow(lhs, rhs, &num)) {
                    throw std::overflow_error("overflow in Bareiss elimination");
                }
                at(i, j) = num / prev;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    __int128 det = at(n - 1, n - 1) * sign;
    if (det > static_cast<__int128>(std::numeric_limits<T>::max()) ||
        det < static_cast<__int128>(std::numeric_limits<T>::min())) {
        throw std::overflow_error("determinant does not fit the result type");
    }
    return static_cast<T>(det);
}

/// Rank over Q by fraction-free elimination.
template <std::signed_integral T> std::size_t rational_rank(const Matrix<T>& m) {
    std::vector<std::vector<__int128>> a;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        a.emplace_back(r.begin(), r.end());
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == a.size()) {
            continue;
        }
        std::swap(a[rank], a[piv]);
        for (std::size_t i = rank + 1; i < a.size(); ++i) {
            if (a[i][c] == 0) {
                continue;
            }
            __int128 f = a[i][c];
            __int128 g = a[rank][c];
            // keep entries small by dividing out the row gcd afterwards
            __int128 row_gcd = 0;
            for (std::size_t k = c; k < m.cols(); ++k) {
                a[i][k] = a[i][k] * g - a[rank][k] * f;
                __int128 v = a[i][k] < 0 ? -a[i][k] : a[i][k];
                while (v != 0) {
                    __int128 t = row_gcd % v;
                    row_gcd = v;
                    v = t;
                }
            }
            if (row_gcd > 1) {
                for (std::size_t k = c; k < m.cols(); ++k) {
                    a[i][k] /= row_gcd;
                }
            }
        }
        ++rank;
    }
    return rank;
}

} // namespace ffl
