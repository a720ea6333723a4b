#include "hmmsprt/linalg.hpp"

#include <cassert>

#include "hmmsprt/errors.hpp"

namespace hmmsprt {

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b) {
    assert(a.cols == b.rows);
    RatMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                const Rational& bkj = b.at(k, j);
                if (bkj != 0) out.at(i, j) += aik * bkj;
            }
        }
    return out;
}

RatVector vec_mat(const RatVector& v, const RatMatrix& m) {
    assert(v.size() == m.rows);
    RatVector out(m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols; ++j) {
            const Rational& e = m.at(i, j);
            if (e != 0) out[j] += v[i] * e;
        }
    }
    return out;
}

RatVector mat_vec(const RatMatrix& m, const RatVector& v) {
    assert(v.size() == m.cols);
    RatVector out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            const Rational& e = m.at(i, j);
            if (e != 0 && v[j] != 0) out[i] += e * v[j];
        }
    return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
    assert(a.size() == b.size());
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

Rational l1_norm(const RatVector& v) {
    Rational s;
    for (const auto& x : v) s += x >= 0 ? x : Rational(-x);
    return s;
}

RatMatrix solve_linear_multi(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows != a.cols) throw Singular("matrix is not square");
    if (a.rows != b.rows) throw Singular("dimension mismatch in solve");
    std::size_t n = a.rows;
    std::size_t m = b.cols;
    RatMatrix aug(n, n + m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < m; ++j) aug.at(i, n + j) = b.at(i, j);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && aug.at(pivot, col) == 0) ++pivot;
        if (pivot == n) throw Singular("matrix is singular");
        if (pivot != col)
            for (std::size_t j = col; j < n + m; ++j)
                std::swap(aug.at(pivot, j), aug.at(col, j));
        Rational inv = 1 / aug.at(col, col);
        for (std::size_t j = col; j < n + m; ++j) aug.at(col, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || aug.at(i, col) == 0) continue;
            Rational f = aug.at(i, col);
            for (std::size_t j = col; j < n + m; ++j)
                aug.at(i, j) -= f * aug.at(col, j);
        }
    }
    RatMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) x.at(i, j) = aug.at(i, n + j);
    return x;
}

RatVector solve_linear(const RatMatrix& a, const RatVector& b) {
    RatMatrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs.at(i, 0) = b[i];
    RatMatrix x = solve_linear_multi(a, rhs);
    RatVector out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = x.at(i, 0);
    return out;
}

bool EchelonBasis::insert(RatVector v) {
    assert(v.size() == dim_);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rational& c = v[pivots_[k]];
        if (c != 0) {
            Rational f = c;  // rows are pivot-normalized to 1
            for (std::size_t j = 0; j < dim_; ++j)
                if (rows_[k][j] != 0) v[j] -= f * rows_[k][j];
        }
    }
    std::size_t p = 0;
    while (p < dim_ && v[p] == 0) ++p;
    if (p == dim_) return false;
    Rational inv = 1 / v[p];
    for (std::size_t j = 0; j < dim_; ++j) v[j] *= inv;
    // back-reduce existing rows so the basis stays fully reduced
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rational& c = rows_[k][p];
        if (c != 0) {
            Rational f = c;
            for (std::size_t j = 0; j < dim_; ++j)
                if (v[j] != 0) rows_[k][j] -= f * v[j];
        }
    }
    // keep rows sorted by pivot position for a canonical presentation
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
}

bool EchelonBasis::contains(RatVector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rational& c = v[pivots_[k]];
        if (c != 0) {
            Rational f = c;
            for (std::size_t j = 0; j < dim_; ++j)
                if (rows_[k][j] != 0) v[j] -= f * rows_[k][j];
        }
    }
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace hmmsprt
