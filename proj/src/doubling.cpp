#include "bwlat/doubling.hpp"

#include "bwlat/construct.hpp"

namespace bwlat {

IntVector embed(Half which, const IntVector& x, int m) {
    const Index n = Index{1} << m;
    if (x.size() != n) {
        throw DimensionError("embed: vector length " + std::to_string(x.size()) + " is not 2^" + std::to_string(m));
    }
    IntVector out = IntVector::Zero(2 * n);
    out.segment(which == Half::Iota ? 0 : n, n) = x;
    return out;
}

IntegerLattice subdirect_product(const IntegerLattice& lm, const IntegerLattice& dm) {
    if (lm.dim() != dm.dim()) throw DimensionError("subdirect_product: dimensions differ");
    const Index n = lm.dim();
    IntMatrix basis = IntMatrix::Zero(2 * n, 2 * n);
    basis.topLeftCorner(n, n) = lm.basis();
    basis.topRightCorner(n, n) = lm.basis();
    basis.bottomLeftCorner(n, n) = dm.basis();
    return IntegerLattice(std::move(basis));
}

DoublingParts decompose(const IntVector& x) {
    if (x.size() % 2 != 0) throw DimensionError("decompose: odd length");
    const Index n = x.size() / 2;
    DoublingParts parts;
    parts.ell = x.tail(n);
    parts.d = x.head(n) - parts.ell;
    return parts;
}

CheckItem verify_doubling(int m) {
    Stopwatch clock;
    CheckItem item;
    item.check = "doubling";
    item.parameters = {{"m", m}};

    const IntegerLattice lm = named_lattice(NamedProfileKind::LambdaBW, m);
    const IntegerLattice dm = named_lattice(NamedProfileKind::DeltaBW, m);
    const IntegerLattice next = named_lattice(NamedProfileKind::LambdaBW, m + 1);
    const IntegerLattice product = subdirect_product(lm, dm);

    // Mutual containment of basis rows, then the canonical forms.
    Index missing_forward = -1, missing_backward = -1;
    for (Index r = 0; r < product.basis().rows() && missing_forward < 0; ++r) {
        if (!contains(next, product.basis().row(r))) missing_forward = r;
    }
    for (Index r = 0; r < next.basis().rows() && missing_backward < 0; ++r) {
        if (!contains(product, next.basis().row(r))) missing_backward = r;
    }
    const bool equal = lattice_equal(product, next);

    const IntegerLattice gamma = IntegerLattice::standard(m);
    const IntegerLattice gamma_next = IntegerLattice::standard(m + 1);
    const unsigned log_delta = *exact_log2(sublattice_index(gamma, dm));
    const unsigned log_lambda = *exact_log2(sublattice_index(gamma, lm));
    const unsigned log_product = *exact_log2(sublattice_index(gamma_next, product));
    // (m+1)·2^{m-2} and (m-1)·2^{m-2}, compared after multiplying by 4.
    const bool bookkeeping = 4 * static_cast<long>(log_delta) == (m + 1) * (1L << m) &&
                             4 * static_cast<long>(log_lambda) == (m - 1) * (1L << m) &&
                             static_cast<long>(log_product) == static_cast<long>(log_delta + log_lambda) &&
                             2 * static_cast<long>(log_product) == m * (1L << m);

    item.details = {{"product_in_next", missing_forward < 0},
                    {"next_in_product", missing_backward < 0},
                    {"hnf_equal", equal},
                    {"log2_index_gamma_delta", log_delta},
                    {"log2_index_gamma_lambda", log_lambda},
                    {"log2_index_product", log_product},
                    {"expected_log2_index", (m * (1L << m)) / 2}};
    item.status = (equal && missing_forward < 0 && missing_backward < 0 && bookkeeping) ? CheckStatus::Pass
                                                                                         : CheckStatus::Fail;
    if (!item.passed()) {
        if (missing_forward >= 0) {
            item.witness = {{"product_row_not_in_next", missing_forward}};
        } else if (missing_backward >= 0) {
            item.witness = {{"next_row_not_in_product", missing_backward}};
        } else {
            item.witness = {{"index_bookkeeping", {log_delta, log_lambda, log_product}}};
        }
    }
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

}  // namespace bwlat
