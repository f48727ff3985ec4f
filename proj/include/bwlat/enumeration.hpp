#pragma once

// Exact short-vector and shifted-coset enumeration.
//
// The search runs Fincke–Pohst style over an LLL-reduced basis. Gram–Schmidt
// data is computed in exact rationals and then rounded to double for
// pruning; the pruning radius carries a small slack so that no lattice point
// inside the bound can be cut, and every leaf is re-checked with exact integer
// arithmetic before it is counted. Vector x and -x are counted separately.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "bwlat/exact_linalg.hpp"
#include "bwlat/report.hpp"

namespace bwlat {

inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000'000;

struct EnumOptions {
    std::uint64_t node_budget = kDefaultNodeBudget;
    /// Worker count; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t nodes, std::uint64_t budget);
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t budget() const { return budget_; }

private:
    std::uint64_t nodes_, budget_;
};

using NormCounts = std::map<std::int64_t, std::uint64_t>;

/// Counts of nonzero lattice vectors by norm, up to `bound`.
struct ThetaSlice {
    std::int64_t bound = 0;
    NormCounts counts;
    std::vector<SmallVector> vectors;  // filled only when collecting
    std::uint64_t nodes = 0;

    std::uint64_t count(std::int64_t norm) const;
    std::optional<std::int64_t> minimum() const;
};

/// Counts over the shifted set t + L, up to `bound` (norm 0 included).
struct CosetSlice {
    SmallVector representative;
    std::int64_t bound = 0;
    NormCounts counts;
    std::vector<SmallVector> vectors;
    std::uint64_t nodes = 0;

    std::uint64_t count(std::int64_t norm) const;
};

/// Sign representatives of a set of pairwise orthogonal equal-norm vectors.
struct Frame {
    std::vector<SmallVector> vectors;
};

/// Raised when the minimal vectors of a coset do not form a frame.
class FrameError : public std::runtime_error {
public:
    FrameError(const std::string& what, SmallVector ell, std::vector<SmallVector> found);
    const SmallVector& ell() const { return ell_; }
    const std::vector<SmallVector>& found() const { return found_; }

private:
    SmallVector ell_;
    std::vector<SmallVector> found_;
};

/// Reusable enumeration context for one lattice: reduced basis plus exact
/// Gram–Schmidt data. Immutable after construction and safe to share.
class Enumerator {
public:
    explicit Enumerator(const IntegerLattice& lattice, EnumOptions options = {});
    ~Enumerator();
    Enumerator(Enumerator&&) noexcept;
    Enumerator& operator=(Enumerator&&) noexcept;

    const IntegerLattice& lattice() const;
    /// LLL-reduced basis used for the search.
    const IntMatrix& reduced_basis() const;
    const EnumOptions& options() const;

    ThetaSlice short_vectors(std::int64_t bound, bool collect) const;

    /// Vectors with norm strictly above `keep_above` are collected.
    ThetaSlice short_vectors_above(std::int64_t bound, std::int64_t keep_above) const;

    CosetSlice coset(const IntVector& t, std::int64_t bound, bool collect) const;

    struct Impl;  // opaque

private:
    std::unique_ptr<Impl> impl_;
};

ThetaSlice short_vectors(const IntegerLattice& lattice, std::int64_t bound, bool collect,
                         const EnumOptions& options = {});

/// Exact minimum norm.
std::int64_t lattice_min(const IntegerLattice& lattice, const EnumOptions& options = {});

struct GapResult {
    bool pass = true;
    std::optional<SmallVector> counterexample;
    ThetaSlice slice;  // counts up to upper - 1
};

/// Passes iff no lattice vector has lower < (x,x) < upper.
GapResult gap_check(const IntegerLattice& lattice, std::int64_t lower, std::int64_t upper,
                    const EnumOptions& options = {});

CosetSlice coset_short_vectors(const IntegerLattice& lattice, const IntVector& t, std::int64_t bound,
                               bool collect = false, const EnumOptions& options = {});

/// Minimal vectors of Λ_m (both signs) in enumeration order.
std::vector<SmallVector> minimal_vectors_lambda(int m, const EnumOptions& options = {});

/// Every minimal ℓ of Λ_m: ℓ + Δ_m has no norm strictly between 2^{m-1} and 2^m.
CheckItem verify_coset_lemma(int m, const EnumOptions& options = {});

/// Sign representatives of the minimal vectors in ℓ + Δ_m; throws FrameError
/// unless there are exactly 2^{m+1} of them, pairwise orthogonal up to sign.
Frame extract_frame(int m, const IntVector& ell, const EnumOptions& options = {});

/// extract_frame for every minimal vector of Λ_m.
CheckItem verify_frames(int m, const EnumOptions& options = {});

struct OddSupport {
    unsigned j = 0;             // 2-adic valuation of the coordinate gcd
    std::uint64_t support = 0;  // odd coordinates of d / 2^j
    bool vacuous = false;       // m - 2j < 0
    bool holds = true;
};

/// |{v : (d/2^j)_v odd}| >= 2^{m-2j}, vacuous when m - 2j < 0. d must be nonzero.
OddSupport odd_support(int m, const IntVector& d);

CheckItem verify_odd_support(int m, std::uint64_t samples, std::uint64_t seed);

/// N_Δ(2k) = N_Λ(k) for 2k <= bound, and Δ_m has no odd norms up to bound.
CheckItem verify_theta_similarity(int m, std::int64_t bound, const EnumOptions& options = {});

/// Kissing number of Λ_m by enumeration against the closed recursion.
CheckItem verify_kissing(int m, const EnumOptions& options = {});

nlohmann::ordered_json counts_to_json(const NormCounts& counts);
NormCounts counts_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const ThetaSlice& slice);
nlohmann::ordered_json to_json(const CosetSlice& slice);
ThetaSlice theta_slice_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json vector_to_json(const SmallVector& v);
nlohmann::ordered_json vector_to_json(const IntVector& v);

}  // namespace bwlat
