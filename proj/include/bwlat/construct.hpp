#pragma once

// Barnes–Wall family construction: exponent profiles, characteristic vectors
// of affine subspaces of F_2^m, the coordinate-subspace basis, the full affine
// generator set and the closed-form invariants of the family.
//
// Coordinates are indexed by v in {0, ..., 2^m - 1}; bit i-1 of v is the
// coefficient of the i-th basis vector of F_2^m.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bwlat/exact_linalg.hpp"

namespace bwlat {

/// Exponent vector (l_0, ..., l_m): l_0 = 0 and each step is +0 or +1.
struct LambdaProfile {
    std::vector<int> lambdas;

    int m() const { return static_cast<int>(lambdas.size()) - 1; }
    int operator[](int r) const { return lambdas[static_cast<std::size_t>(r)]; }
    bool operator==(const LambdaProfile&) const = default;

    std::string str() const;
};

struct ProfileViolation {
    int index;
    std::string message;
};

/// Empty when the profile is valid.
std::vector<ProfileViolation> validate_profile(const LambdaProfile& profile);

class ProfileError : public std::invalid_argument {
public:
    explicit ProfileError(std::vector<ProfileViolation> violations);
    explicit ProfileError(const std::string& message);
    const std::vector<ProfileViolation>& violations() const { return violations_; }

private:
    std::vector<ProfileViolation> violations_;
};

enum class NamedProfileKind { LambdaBW, DeltaBW };

/// floor(r/2) for LambdaBW, floor((r+1)/2) for DeltaBW.
LambdaProfile named_profile(NamedProfileKind kind, int m);

/// Parses "0,0,1,1", "lambda:4" or "delta:4".
LambdaProfile parse_profile_spec(std::string_view spec);

/// Span of the basis vectors {v_i : i in I}, I given as a bit mask.
struct CoordinateSubspace {
    int m = 0;
    std::uint32_t index_mask = 0;

    int dimension() const;
};

/// shift + span(basis) in F_2^m; vectors are bit masks.
struct AffineSubspace {
    std::vector<std::uint32_t> basis;
    std::uint32_t shift = 0;

    static AffineSubspace from(const CoordinateSubspace& u);
};

class SubspaceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 0/1 vector of length 2^m with ones at the points of u.
IntVector characteristic_vector(const AffineSubspace& u, int m);

/// Rows 2^{l_{m-|I|}}·x_I, one per I ⊆ {1..m}, ordered by |I| then
/// lexicographically by the sorted index tuple.
IntegerLattice build_lambda(const LambdaProfile& profile);

/// Ordering of the subsets used by build_lambda.
std::vector<CoordinateSubspace> coordinate_subspaces(int m);

class SizeGuardError : public std::length_error {
public:
    SizeGuardError(std::uint64_t count, std::uint64_t limit);
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t count_;
};

inline constexpr std::uint64_t kDefaultGeneratorLimit = 200'000;

/// Number of affine subspaces of F_2^m of every dimension.
std::uint64_t affine_subspace_count(int m);

/// 2^{l_{m-r}}·x_U for every affine subspace U of dimension r, 0 <= r <= m.
std::vector<IntVector> generators_full(const LambdaProfile& profile,
                                       std::uint64_t max_generators = kDefaultGeneratorLimit);

/// Lattice spanned by an arbitrary generator list (via HNF).
IntegerLattice lattice_from_generators(const std::vector<IntVector>& generators);

/// l'_r = l_m - l_{m-r}.
LambdaProfile profile_dual(const LambdaProfile& profile);

/// 2d with d = sum_r l_r·C(m, r): the Gram determinant is 2^{2d}.
int predicted_det_exponent(const LambdaProfile& profile);

/// min_r (m - r + 2·l_r): the minimum norm is 2 to this power.
int predicted_min_exponent(const LambdaProfile& profile);

IntegerLattice named_lattice(NamedProfileKind kind, int m);

/// Gram of the named lattice for LambdaBW divided by 2^s, s = floor((m-1)/2).
GramMatrix rescaled_gram(int m);

/// s_1 = 4, s_m = (2^m + 2)·s_{m-1}.
Integer kissing_predicted(int m);

/// All valid profiles of length m+1 with l_m <= max_top.
std::vector<LambdaProfile> profile_family(int m, int max_top);

}  // namespace bwlat
