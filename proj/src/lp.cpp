#include "hmmsprt/lp.hpp"

#include <cassert>

namespace hmmsprt {

bool lp_feasible(const RatMatrix& a, const RatVector& b) {
    std::size_t m = a.rows;
    std::size_t n = a.cols;
    assert(b.size() == m);

    // Tableau over original + artificial variables; rhs kept nonnegative.
    std::size_t total = n + m;
    RatMatrix t(m, total + 1);
    for (std::size_t i = 0; i < m; ++i) {
        int sign = b[i] >= 0 ? 1 : -1;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * a.at(i, j);
        t.at(i, n + i) = 1;
        t.at(i, total) = sign * b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // Phase-1 objective: minimize the sum of artificials. Reduced costs
    // start as column sums over the constraint rows.
    RatVector red(total + 1);
    for (std::size_t j = 0; j <= total; ++j) {
        Rational s;
        for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
        red[j] = s;
    }
    for (std::size_t i = 0; i < m; ++i) red[n + i] -= 1;  // cost of artificials

    while (true) {
        // Bland: smallest improving column.
        std::size_t enter = total;
        for (std::size_t j = 0; j < total; ++j)
            if (red[j] > 0) {
                enter = j;
                break;
            }
        if (enter == total) break;

        // Ratio test, ties broken by smallest basis variable.
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (t.at(i, enter) <= 0) continue;
            Rational ratio = t.at(i, total) / t.at(i, enter);
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == m) break;  // unbounded in phase 1 cannot happen; be safe

        Rational piv = t.at(leave, enter);
        for (std::size_t j = 0; j <= total; ++j) t.at(leave, j) /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave || t.at(i, enter) == 0) continue;
            Rational f = t.at(i, enter);
            for (std::size_t j = 0; j <= total; ++j)
                t.at(i, j) -= f * t.at(leave, j);
        }
        if (red[enter] != 0) {
            Rational f = red[enter];
            for (std::size_t j = 0; j <= total; ++j) red[j] -= f * t.at(leave, j);
        }
        basis[leave] = enter;
    }

    // Feasible iff all artificials were driven to zero value.
    Rational objective;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n) objective += t.at(i, total);
    return objective == 0;
}

}  // namespace hmmsprt
