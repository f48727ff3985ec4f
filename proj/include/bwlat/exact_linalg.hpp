#pragma once

// Exact integer linear algebra on row bases: Hermite normal form, fraction-free
// determinants, lattice membership/equality, indices, scaled duals and
// integral LLL reduction.

#include <iosfwd>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "bwlat/integer.hpp"

namespace bwlat {

class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficientError : public LinalgError {
public:
    RankDeficientError(Index rank, Index cols);
    Index rank() const { return rank_; }

private:
    Index rank_;
};

class DimensionError : public LinalgError {
public:
    using LinalgError::LinalgError;
};

/// Raised when a basis row of the inner lattice is not in the outer lattice.
class ContainmentError : public LinalgError {
public:
    ContainmentError(Index row, IntVector witness);
    Index row() const { return row_; }
    const IntVector& witness() const { return witness_; }

private:
    Index row_;
    IntVector witness_;
};

/// Raised by dual_scaled when 2^e times the dual basis is not integral.
class ScalingError : public LinalgError {
public:
    ScalingError(Index row, Index col, long valuation);
    Index row() const { return row_; }
    Index col() const { return col_; }
    /// 2-adic valuation of the offending rational entry (negative).
    long valuation() const { return valuation_; }

private:
    Index row_, col_;
    long valuation_;
};

/// Gram matrix B·Bᵀ divided by 2^scale, stored with the division applied.
struct GramMatrix {
    IntMatrix entries;
    int scale = 0;
};

/// Full-rank lattice in dimension 2^m with an integer row basis.
///
/// The true Gram matrix is B·Bᵀ / 2^gram_scale. The Hermite normal form is
/// computed on first use and shared between copies.
class IntegerLattice {
public:
    explicit IntegerLattice(IntMatrix basis, int gram_scale = 0);

    static IntegerLattice standard(int m);

    int m() const { return m_; }
    Index dim() const { return basis_.cols(); }
    const IntMatrix& basis() const { return basis_; }
    int gram_scale() const { return gram_scale_; }

    GramMatrix gram() const;
    const IntMatrix& hermite_form() const;

    /// The lattice factor·L (same gram scale).
    IntegerLattice scaled(const Integer& factor) const;

private:
    struct HnfCache;

    IntMatrix basis_;
    int gram_scale_ = 0;
    int m_ = 0;
    std::shared_ptr<HnfCache> hnf_;
};

/// Fraction-free (Bareiss) determinant of a square matrix.
template <typename Derived>
typename Derived::Scalar det_bareiss(const Eigen::MatrixBase<Derived>& input) {
    using Scalar = typename Derived::Scalar;
    eigen_assert(input.rows() == input.cols());
    const Index n = input.rows();
    if (n == 0) return Scalar(1);

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = input;
    Scalar previous(1);
    bool negate = false;
    for (Index k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            Index swap_row = k + 1;
            while (swap_row < n && a(swap_row, k) == 0) ++swap_row;
            if (swap_row == n) return Scalar(0);
            a.row(k).swap(a.row(swap_row));
            negate = !negate;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j) {
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / previous;
            }
        }
        previous = a(k, k);
    }
    return negate ? Scalar(-a(n - 1, n - 1)) : a(n - 1, n - 1);
}

Integer det_exact(const IntMatrix& m);

/// Row-style Hermite normal form of a matrix with full column rank.
///
/// The result is square and upper triangular with positive pivots, entries
/// above each pivot reduced into [0, pivot). Its row span over the integers
/// equals that of the input.
IntMatrix hnf(const IntMatrix& m);

/// Rank over the rationals.
Index rank_exact(const IntMatrix& m);

bool contains(const IntegerLattice& lattice, const IntVector& v);

bool lattice_equal(const IntegerLattice& a, const IntegerLattice& b);

/// [outer : inner]; throws ContainmentError if inner is not a sublattice.
Integer sublattice_index(const IntegerLattice& outer, const IntegerLattice& inner);

/// The lattice 2^e·L^#, where L^# is the dual with respect to the true Gram.
IntegerLattice dual_scaled(const IntegerLattice& lattice, int e);

/// Integral LLL reduction; delta must lie in (1/4, 1].
IntMatrix lll_reduce_basis(IntMatrix basis, const Rational& delta = Rational(3, 4));
IntegerLattice lll_reduce(const IntegerLattice& lattice, const Rational& delta = Rational(3, 4));

/// Basis file: "m N s" then N rows of N decimal integers.
void write_basis(std::ostream& out, const IntegerLattice& lattice);
IntegerLattice read_basis(std::istream& in);

}  // namespace bwlat
