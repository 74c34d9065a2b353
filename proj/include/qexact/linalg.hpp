#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qexact/errors.hpp"
#include "qexact/rational.hpp"

namespace qexact {

template <class R>
using Matrix = std::vector<std::vector<R>>;

template <class R>
Matrix<R> identity_matrix(std::size_t n) {
    Matrix<R> m(n, std::vector<R>(n, R(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = R(1);
    return m;
}

template <class R>
Matrix<R> matmul(const Matrix<R>& a, const Matrix<R>& b) {
    const std::size_t rows = a.size(), inner = b.size(), cols = b.empty() ? 0 : b[0].size();
    Matrix<R> c(rows, std::vector<R>(cols, R(0)));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
        }
    return c;
}

template <class R>
std::vector<R> row_times_matrix(const std::vector<R>& x, const Matrix<R>& m) {
    std::vector<R> out(m.empty() ? 0 : m[0].size(), R(0));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = out[j] + x[i] * m[i][j];
    return out;
}

template <class R>
Matrix<R> kronecker(const Matrix<R>& a, const Matrix<R>& b) {
    const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
    Matrix<R> out(ar * br, std::vector<R>(ac * bc, R(0)));
    for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t j = 0; j < ac; ++j)
            for (std::size_t k = 0; k < br; ++k)
                for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
    return out;
}

// Solves M y = rhs by fraction-free (Bareiss) elimination; R must support exact division.
template <class R>
std::vector<R> bareiss_solve(const Matrix<R>& m, const std::vector<R>& rhs) {
    const std::size_t n = m.size();
    Matrix<R> a(n, std::vector<R>(n + 1, R(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw ShapeMismatch("matrix is not square");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n] = rhs[i];
    }
    R previous(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && is_zero(a[pivot][k])) ++pivot;
        if (pivot == n) throw SingularSystem("no pivot in column " + std::to_string(k));
        std::swap(a[k], a[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j)
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / previous;
            a[i][k] = R(0);
        }
        previous = a[k][k];
    }
    std::vector<R> y(n, R(0));
    for (std::size_t i = n; i-- > 0;) {
        R acc = a[i][n];
        for (std::size_t j = i + 1; j < n; ++j) acc = acc - a[i][j] * y[j];
        y[i] = acc / a[i][i];
    }
    return y;
}

// Solves the row system x M = rhs.
template <class R>
std::vector<R> bareiss_solve_left(const Matrix<R>& m, const std::vector<R>& rhs) {
    const std::size_t n = m.size();
    Matrix<R> t(n, std::vector<R>(n, R(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i][j] = m[j][i];
    return bareiss_solve(t, rhs);
}

}  // namespace qexact
