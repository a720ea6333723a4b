#pragma once

#include <cstddef>
#include <vector>

#include "hmmsprt/rational.hpp"

namespace hmmsprt {

using RatVector = std::vector<Rational>;

struct RatMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> data;

    RatMatrix() = default;
    RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Rational& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static RatMatrix identity(std::size_t n);
    bool operator==(const RatMatrix& other) const = default;
};

RatMatrix mat_mul(const RatMatrix& a, const RatMatrix& b);
RatVector vec_mat(const RatVector& v, const RatMatrix& m);
RatVector mat_vec(const RatMatrix& m, const RatVector& v);
Rational dot(const RatVector& a, const RatVector& b);
Rational l1_norm(const RatVector& v);  // entries assumed >= 0 where used

// Exact solve of A x = b; throws Singular when A is not invertible.
RatVector solve_linear(const RatMatrix& a, const RatVector& b);

// Same elimination, many right-hand sides (columns of B).
RatMatrix solve_linear_multi(const RatMatrix& a, const RatMatrix& b);

// Reduced-echelon basis maintained incrementally; rows are the basis
// vectors in canonical form, so equal spans compare equal.
class EchelonBasis {
  public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    // Reduces v against the basis; inserts the residue if nonzero.
    // Returns true when the vector enlarged the span.
    bool insert(RatVector v);
    bool contains(RatVector v) const;
    // Coordinates of v in terms of the basis rows; empty optional when
    // v is outside the span.
    std::size_t size() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<RatVector>& rows() const { return rows_; }

  private:
    std::size_t dim_;
    std::vector<RatVector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace hmmsprt
