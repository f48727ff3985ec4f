#pragma once

// Doubling construction: Λ_{m+1} = {ι(ℓ) + ι(d) + τ(ℓ) : ℓ ∈ Λ_m, d ∈ Δ_m}.
//
// ι places a vector of length 2^m in the low half of the coordinates (bit m
// clear), τ in the high half (bit m set).

#include "bwlat/exact_linalg.hpp"
#include "bwlat/report.hpp"

namespace bwlat {

enum class Half { Iota, Tau };

/// Copies x (length 2^m) into the chosen half of a zero vector of length 2^{m+1}.
IntVector embed(Half which, const IntVector& x, int m);

/// Rows (ι+τ)(b) for b in the basis of lm, then ι(b) for b in the basis of dm.
IntegerLattice subdirect_product(const IntegerLattice& lm, const IntegerLattice& dm);

struct DoublingParts {
    IntVector ell;  // high half
    IntVector d;    // low half minus high half
};

/// Splits x = ι(ℓ) + ι(d) + τ(ℓ); the split is unique.
DoublingParts decompose(const IntVector& x);

/// Checks subdirect_product(Λ_m, Δ_m) == Λ_{m+1}, both inclusions and the
/// index bookkeeping log2[Γ_{m+1} : Λ_{m+1}] = m·2^{m-1}.
CheckItem verify_doubling(int m);

}  // namespace bwlat
