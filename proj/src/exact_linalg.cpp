#include "bwlat/exact_linalg.hpp"

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace bwlat {

namespace {

struct ExtendedGcd {
    Integer gcd, u, v;  // u·a + v·b = gcd >= 0
};

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
    ExtendedGcd r;
    mpz_gcdext(r.gcd.backend().data(), r.u.backend().data(), r.v.backend().data(),
               a.backend().data(), b.backend().data());
    return r;
}

// Least nonnegative residue.
Integer mod_nonneg(const Integer& x, const Integer& modulus) {
    Integer r = x % modulus;
    if (r < 0) r += modulus;
    return r;
}

void reduce_row_mod(IntMatrix& w, Index row, Index from_col, const Integer& modulus) {
    for (Index j = from_col; j < w.cols(); ++j) w(row, j) = mod_nonneg(w(row, j), modulus);
}

// Fraction-free row echelon form. Returns the original indices of the pivot
// rows, one per pivot column found, in column order.
std::vector<Index> echelon_pivot_rows(const IntMatrix& m) {
    IntMatrix a = m;
    std::vector<Index> origin(static_cast<std::size_t>(a.rows()));
    std::iota(origin.begin(), origin.end(), Index{0});
    std::vector<Index> pivots;
    Integer previous = 1;
    Index row = 0;
    for (Index col = 0; col < a.cols() && row < a.rows(); ++col) {
        Index p = row;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != row) {
            a.row(p).swap(a.row(row));
            std::swap(origin[static_cast<std::size_t>(p)], origin[static_cast<std::size_t>(row)]);
        }
        for (Index i = row + 1; i < a.rows(); ++i) {
            for (Index j = col + 1; j < a.cols(); ++j) {
                a(i, j) = (a(i, j) * a(row, col) - a(i, col) * a(row, j)) / previous;
            }
            a(i, col) = 0;
        }
        previous = a(row, col);
        pivots.push_back(origin[static_cast<std::size_t>(row)]);
        ++row;
    }
    return pivots;
}

void require_same_dim(const IntegerLattice& a, const IntegerLattice& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("lattice dimensions differ: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
}

}  // namespace

RankDeficientError::RankDeficientError(Index rank, Index cols)
    : LinalgError("rank-deficient matrix: rank " + std::to_string(rank) + " < " +
                  std::to_string(cols) + " columns"),
      rank_(rank) {}

ContainmentError::ContainmentError(Index row, IntVector witness)
    : LinalgError("basis row " + std::to_string(row) + " is not contained in the outer lattice"),
      row_(row),
      witness_(std::move(witness)) {}

ScalingError::ScalingError(Index row, Index col, long valuation)
    : LinalgError("scaled dual entry (" + std::to_string(row) + "," + std::to_string(col) +
                  ") is not integral: 2-adic valuation " + std::to_string(valuation)),
      row_(row),
      col_(col),
      valuation_(valuation) {}

struct IntegerLattice::HnfCache {
    std::once_flag once;
    IntMatrix form;
};

IntegerLattice::IntegerLattice(IntMatrix basis, int gram_scale)
    : basis_(std::move(basis)), gram_scale_(gram_scale), hnf_(std::make_shared<HnfCache>()) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0) {
        throw DimensionError("lattice basis must be square and nonempty");
    }
    auto log = exact_log2(Integer(basis_.cols()));
    if (!log) throw DimensionError("lattice dimension must be a power of two");
    m_ = static_cast<int>(*log);
    if (gram_scale_ < 0) throw LinalgError("gram scale must be nonnegative");
    if (det_bareiss(basis_) == 0) throw RankDeficientError(rank_exact(basis_), basis_.cols());
    if (gram_scale_ > 0) {
        const Integer unit = pow2(static_cast<unsigned>(gram_scale_));
        IntMatrix g = basis_ * basis_.transpose();
        for (Index i = 0; i < g.rows(); ++i) {
            for (Index j = 0; j < g.cols(); ++j) {
                if (g(i, j) % unit != 0) {
                    throw LinalgError("Gram entry not divisible by 2^" + std::to_string(gram_scale_));
                }
            }
        }
    }
}

IntegerLattice IntegerLattice::standard(int m) {
    const Index n = Index{1} << m;
    return IntegerLattice(IntMatrix::Identity(n, n));
}

GramMatrix IntegerLattice::gram() const {
    GramMatrix g{basis_ * basis_.transpose(), gram_scale_};
    if (gram_scale_ > 0) {
        const Integer unit = pow2(static_cast<unsigned>(gram_scale_));
        for (auto& x : g.entries.reshaped()) x /= unit;
    }
    return g;
}

const IntMatrix& IntegerLattice::hermite_form() const {
    std::call_once(hnf_->once, [this] { hnf_->form = hnf(basis_); });
    return hnf_->form;
}

IntegerLattice IntegerLattice::scaled(const Integer& factor) const {
    IntMatrix b = basis_;
    for (auto& x : b.reshaped()) x *= factor;
    return IntegerLattice(std::move(b), gram_scale_);
}

Integer det_exact(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
    return det_bareiss(m);
}

Index rank_exact(const IntMatrix& m) {
    return static_cast<Index>(echelon_pivot_rows(m).size());
}

IntMatrix hnf(const IntMatrix& m) {
    const Index n = m.cols();
    const std::vector<Index> pivot_rows = echelon_pivot_rows(m);
    if (static_cast<Index>(pivot_rows.size()) < n) {
        throw RankDeficientError(static_cast<Index>(pivot_rows.size()), n);
    }

    // Any nonzero maximal minor is a multiple of the lattice determinant, so
    // modulus·Z^n lies inside the lattice and all arithmetic may be reduced.
    IntMatrix square(n, n);
    for (Index i = 0; i < n; ++i) square.row(i) = m.row(pivot_rows[static_cast<std::size_t>(i)]);
    Integer modulus = abs(det_bareiss(square));

    IntMatrix w = m;
    for (Index r = 0; r < w.rows(); ++r) reduce_row_mod(w, r, 0, modulus);

    IntMatrix h = IntMatrix::Zero(n, n);
    Index live_rows = w.rows();
    for (Index i = 0; i < n; ++i) {
        // Row 0 of the live block collects the gcd of column i.
        for (Index k = 1; k < live_rows; ++k) {
            if (w(k, i) == 0) continue;
            const Integer a = w(0, i);
            const Integer b = w(k, i);
            const ExtendedGcd e = extended_gcd(a, b);
            const Integer a_over = a / e.gcd;
            const Integer b_over = b / e.gcd;
            for (Index j = i; j < n; ++j) {
                const Integer top = w(0, j);
                const Integer bottom = w(k, j);
                w(0, j) = mod_nonneg(e.u * top + e.v * bottom, modulus);
                w(k, j) = mod_nonneg(a_over * bottom - b_over * top, modulus);
            }
        }
        const ExtendedGcd e = extended_gcd(w(0, i), modulus);
        for (Index j = i + 1; j < n; ++j) h(i, j) = mod_nonneg(e.u * w(0, j), modulus);
        h(i, i) = e.gcd;
        modulus /= e.gcd;

        // Drop the consumed row; the remaining rows are zero in column i. At
        // least n - i - 1 rows stay live since the input has full column rank.
        w.row(0).swap(w.row(live_rows - 1));
        --live_rows;
        for (Index k = 0; k < live_rows; ++k) reduce_row_mod(w, k, i + 1, modulus);
    }

    for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < i; ++k) {
            const Integer q = floor_div(h(k, i), h(i, i));
            if (q != 0) h.row(k) -= q * h.row(i);
        }
    }
    return h;
}

bool contains(const IntegerLattice& lattice, const IntVector& v) {
    if (v.size() != lattice.dim()) {
        throw DimensionError("vector length " + std::to_string(v.size()) +
                             " does not match lattice dimension " + std::to_string(lattice.dim()));
    }
    const IntMatrix& h = lattice.hermite_form();
    IntVector rest = v;
    for (Index i = 0; i < h.rows(); ++i) {
        if (rest(i) == 0) continue;
        if (rest(i) % h(i, i) != 0) return false;
        const Integer q = rest(i) / h(i, i);
        rest -= q * h.row(i);
    }
    return true;
}

bool lattice_equal(const IntegerLattice& a, const IntegerLattice& b) {
    require_same_dim(a, b);
    return a.hermite_form() == b.hermite_form();
}

Integer sublattice_index(const IntegerLattice& outer, const IntegerLattice& inner) {
    require_same_dim(outer, inner);
    for (Index r = 0; r < inner.basis().rows(); ++r) {
        if (!contains(outer, inner.basis().row(r))) throw ContainmentError(r, inner.basis().row(r));
    }
    const IntMatrix& ho = outer.hermite_form();
    const IntMatrix& hi = inner.hermite_form();
    Integer det_outer = 1, det_inner = 1;
    for (Index i = 0; i < ho.rows(); ++i) {
        det_outer *= ho(i, i);
        det_inner *= hi(i, i);
    }
    return det_inner / det_outer;
}

IntegerLattice dual_scaled(const IntegerLattice& lattice, int e) {
    const IntMatrix& h = lattice.hermite_form();
    const Index n = h.rows();
    Integer det = 1;
    for (Index i = 0; i < n; ++i) det *= h(i, i);

    // adj = det·H^{-1}, upper triangular, by back substitution.
    IntMatrix adj = IntMatrix::Zero(n, n);
    for (Index i = n - 1; i >= 0; --i) {
        for (Index j = i; j < n; ++j) {
            Integer acc = (i == j) ? det : Integer(0);
            for (Index k = i + 1; k <= j; ++k) acc -= h(i, k) * adj(k, j);
            adj(i, j) = acc / h(i, i);
        }
    }

    // Dual with respect to B·Bᵀ/2^s is 2^s times the standard dual.
    const int shift = e + lattice.gram_scale();
    Integer numerator_scale = 1, denominator = det;
    if (shift >= 0) {
        numerator_scale = pow2(static_cast<unsigned>(shift));
    } else {
        denominator *= pow2(static_cast<unsigned>(-shift));
    }

    IntMatrix dual(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            const Integer num = adj(c, r) * numerator_scale;
            if (num % denominator != 0) {
                const long valuation = static_cast<long>(*two_adic_valuation(num)) -
                                       static_cast<long>(*two_adic_valuation(denominator));
                throw ScalingError(r, c, valuation);
            }
            dual(r, c) = num / denominator;
        }
    }
    return IntegerLattice(std::move(dual), lattice.gram_scale());
}

IntMatrix lll_reduce_basis(IntMatrix basis, const Rational& delta) {
    if (delta <= Rational(1, 4) || delta >= 1) {
        throw std::invalid_argument("LLL delta must lie in (1/4, 1)");
    }
    const Integer p = numerator(delta);
    const Integer q = denominator(delta);
    const Index n = basis.rows();
    if (n == 0) return basis;

    // Integral LLL with 1-based d and lambda: d[i] is the Gram determinant of
    // the first i rows, lambda(k, j) = d[j+1]·mu(k, j) in 0-based row indices.
    std::vector<Integer> d(static_cast<std::size_t>(n + 1));
    IntMatrix lambda = IntMatrix::Zero(n, n);
    d[0] = 1;
    auto dot = [&](Index a, Index b) { return basis.row(a).dot(basis.row(b)); };
    auto D = [&](Index i) -> Integer& { return d[static_cast<std::size_t>(i)]; };

    auto reduce = [&](Index k, Index l) {
        if (2 * abs(lambda(k, l)) <= D(l + 1)) return;
        const Integer r = round_div(lambda(k, l), D(l + 1));
        basis.row(k) -= r * basis.row(l);
        lambda(k, l) -= r * D(l + 1);
        for (Index i = 0; i < l; ++i) lambda(k, i) -= r * lambda(l, i);
    };

    Index k = 1;
    Index kmax = 0;
    D(1) = dot(0, 0);
    if (D(1) == 0) throw RankDeficientError(0, n);
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            for (Index j = 0; j <= k; ++j) {
                Integer u = dot(k, j);
                for (Index i = 0; i < j; ++i) u = (D(i + 1) * u - lambda(k, i) * lambda(j, i)) / D(i);
                if (j < k) {
                    lambda(k, j) = u;
                } else {
                    D(k + 1) = u;
                    if (u == 0) throw RankDeficientError(k, n);
                }
            }
        }
        reduce(k, k - 1);
        const Integer lam = lambda(k, k - 1);
        if (q * D(k + 1) * D(k - 1) < p * D(k) * D(k) - q * lam * lam) {
            basis.row(k).swap(basis.row(k - 1));
            for (Index j = 0; j + 1 < k; ++j) std::swap(lambda(k, j), lambda(k - 1, j));
            const Integer b = (D(k - 1) * D(k + 1) + lam * lam) / D(k);
            for (Index i = k + 1; i <= kmax; ++i) {
                const Integer t = lambda(i, k);
                lambda(i, k) = (D(k + 1) * lambda(i, k - 1) - lam * t) / D(k);
                lambda(i, k - 1) = (b * t + lam * lambda(i, k)) / D(k + 1);
            }
            D(k) = b;
            if (k > 1) --k;
        } else {
            for (Index l = k - 2; l >= 0; --l) reduce(k, l);
            ++k;
        }
    }
    return basis;
}

IntegerLattice lll_reduce(const IntegerLattice& lattice, const Rational& delta) {
    return IntegerLattice(lll_reduce_basis(lattice.basis(), delta), lattice.gram_scale());
}

void write_basis(std::ostream& out, const IntegerLattice& lattice) {
    const IntMatrix& b = lattice.basis();
    out << lattice.m() << ' ' << lattice.dim() << ' ' << lattice.gram_scale() << '\n';
    for (Index i = 0; i < b.rows(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (j > 0) out << ' ';
            out << b(i, j);
        }
        out << '\n';
    }
}

IntegerLattice read_basis(std::istream& in) {
    long m = 0, n = 0, s = 0;
    if (!(in >> m >> n >> s)) throw LinalgError("basis file: malformed header");
    if (m < 0 || m > 30 || n != (1L << m)) {
        throw LinalgError("basis file: header dimension " + std::to_string(n) +
                          " is not 2^" + std::to_string(m));
    }
    IntMatrix b(n, n);
    std::string token;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (!(in >> token)) throw LinalgError("basis file: truncated matrix");
            try {
                b(i, j) = Integer(token);
            } catch (const std::exception&) {
                throw LinalgError("basis file: bad integer '" + token + "'");
            }
        }
    }
    if (in >> token) throw LinalgError("basis file: trailing data");
    return IntegerLattice(std::move(b), static_cast<int>(s));
}

}  // namespace bwlat
