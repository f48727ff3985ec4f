#include "bwlat/construct.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <sstream>

namespace bwlat {

namespace {

void require_valid(const LambdaProfile& profile) {
    auto violations = validate_profile(profile);
    if (!violations.empty()) throw ProfileError(std::move(violations));
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// Number of r-dimensional subspaces of F_2^m.
std::uint64_t gaussian_binomial2(int m, int r) {
    if (r < 0 || r > m) return 0;
    std::uint64_t num = 1, den = 1;
    for (int i = 0; i < r; ++i) {
        num *= (std::uint64_t{1} << (m - i)) - 1;
        den *= (std::uint64_t{1} << (i + 1)) - 1;
    }
    return num / den;
}

bool independent_gf2(std::vector<std::uint32_t> vectors) {
    // Gaussian elimination on leading bits.
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i] == 0) return false;
        const std::uint32_t lead = std::bit_floor(vectors[i]);
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            if (vectors[j] & lead) vectors[j] ^= vectors[i];
        }
    }
    return true;
}

// Calls visit(basis) for every subspace of F_2^m of dimension r, each given by
// its reduced echelon basis: vector i has leading bit pivots[i], zero at the
// other pivots and free bits at non-pivot positions below its lead.
template <typename Visit>
void for_each_subspace(int m, int r, Visit&& visit) {
    std::vector<int> pivots(static_cast<std::size_t>(r));
    std::vector<std::uint32_t> basis(static_cast<std::size_t>(r));

    auto fill = [&](auto&& self, int i) -> void {
        if (i == r) {
            visit(basis);
            return;
        }
        std::uint32_t pivot_mask = 0;
        for (int p : pivots) pivot_mask |= std::uint32_t{1} << p;
        const int lead = pivots[static_cast<std::size_t>(i)];
        std::vector<int> free_bits;
        for (int b = 0; b < lead; ++b) {
            if (!(pivot_mask & (std::uint32_t{1} << b))) free_bits.push_back(b);
        }
        const std::uint32_t combos = std::uint32_t{1} << free_bits.size();
        for (std::uint32_t c = 0; c < combos; ++c) {
            std::uint32_t v = std::uint32_t{1} << lead;
            for (std::size_t f = 0; f < free_bits.size(); ++f) {
                if (c & (std::uint32_t{1} << f)) v |= std::uint32_t{1} << free_bits[f];
            }
            basis[static_cast<std::size_t>(i)] = v;
            self(self, i + 1);
        }
    };

    // Pivot sets in increasing order.
    auto choose = [&](auto&& self, int i, int start) -> void {
        if (i == r) {
            fill(fill, 0);
            return;
        }
        for (int p = start; p < m; ++p) {
            pivots[static_cast<std::size_t>(i)] = p;
            self(self, i + 1, p + 1);
        }
    };
    choose(choose, 0, 0);
}

}  // namespace

std::string LambdaProfile::str() const {
    std::string out;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (i > 0) out += ',';
        out += std::to_string(lambdas[i]);
    }
    return out;
}

std::vector<ProfileViolation> validate_profile(const LambdaProfile& profile) {
    std::vector<ProfileViolation> out;
    if (profile.lambdas.size() < 2) {
        out.push_back({0, "profile needs at least two entries (m >= 1)"});
        return out;
    }
    if (profile[0] != 0) out.push_back({0, "lambda_0 must be 0, got " + std::to_string(profile[0])});
    for (int r = 1; r <= profile.m(); ++r) {
        const int step = profile[r] - profile[r - 1];
        if (step != 0 && step != 1) {
            out.push_back({r, "step lambda_" + std::to_string(r) + " - lambda_" + std::to_string(r - 1) +
                                  " = " + std::to_string(step) + " is not 0 or 1"});
        }
    }
    for (int r = 0; r <= profile.m(); ++r) {
        if (profile[r] < 0) out.push_back({r, "lambda_" + std::to_string(r) + " is negative"});
    }
    return out;
}

namespace {
std::string join_violations(const std::vector<ProfileViolation>& v) {
    std::string out = "invalid profile:";
    for (const auto& x : v) out += " [r=" + std::to_string(x.index) + "] " + x.message + ";";
    return out;
}
}  // namespace

ProfileError::ProfileError(std::vector<ProfileViolation> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

ProfileError::ProfileError(const std::string& message) : std::invalid_argument(message) {}

LambdaProfile named_profile(NamedProfileKind kind, int m) {
    if (m < 1) throw ProfileError("named lattices need m >= 1");
    LambdaProfile p;
    for (int r = 0; r <= m; ++r) p.lambdas.push_back(kind == NamedProfileKind::LambdaBW ? r / 2 : (r + 1) / 2);
    return p;
}

LambdaProfile parse_profile_spec(std::string_view spec) {
    auto parse_int = [&](std::string_view token) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
            throw ProfileError("bad integer '" + std::string(token) + "' in profile spec");
        }
        return value;
    };

    if (auto colon = spec.find(':'); colon != std::string_view::npos) {
        const std::string_view name = spec.substr(0, colon);
        const int m = parse_int(spec.substr(colon + 1));
        if (m < 1 || m > 10) throw ProfileError("named lattice m out of range: " + std::to_string(m));
        if (name == "lambda") return named_profile(NamedProfileKind::LambdaBW, m);
        if (name == "delta") return named_profile(NamedProfileKind::DeltaBW, m);
        throw ProfileError("unknown named profile '" + std::string(name) + "'");
    }

    LambdaProfile p;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        p.lambdas.push_back(parse_int(spec.substr(start, end - start)));
        start = end + 1;
    }
    require_valid(p);
    return p;
}

int CoordinateSubspace::dimension() const { return std::popcount(index_mask); }

AffineSubspace AffineSubspace::from(const CoordinateSubspace& u) {
    AffineSubspace a;
    for (int i = 0; i < u.m; ++i) {
        if (u.index_mask & (std::uint32_t{1} << i)) a.basis.push_back(std::uint32_t{1} << i);
    }
    return a;
}

IntVector characteristic_vector(const AffineSubspace& u, int m) {
    if (m < 0 || m > 24) throw SubspaceError("ambient dimension out of range");
    const std::uint32_t limit = std::uint32_t{1} << m;
    if (u.shift >= limit) throw SubspaceError("shift lies outside F_2^m");
    for (auto b : u.basis) {
        if (b >= limit) throw SubspaceError("basis vector lies outside F_2^m");
    }
    if (!independent_gf2(u.basis)) throw SubspaceError("spanning vectors are linearly dependent");

    IntVector x = IntVector::Zero(static_cast<Index>(limit));
    const std::uint32_t points = std::uint32_t{1} << u.basis.size();
    for (std::uint32_t c = 0; c < points; ++c) {
        std::uint32_t v = u.shift;
        for (std::size_t i = 0; i < u.basis.size(); ++i) {
            if (c & (std::uint32_t{1} << i)) v ^= u.basis[i];
        }
        x(static_cast<Index>(v)) = 1;
    }
    return x;
}

std::vector<CoordinateSubspace> coordinate_subspaces(int m) {
    std::vector<CoordinateSubspace> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) out.push_back({m, mask});
    // Comparing reversed bit patterns orders equal-size subsets lexicographically
    // by their sorted index tuples.
    std::stable_sort(out.begin(), out.end(), [m](const CoordinateSubspace& a, const CoordinateSubspace& b) {
        if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
        for (int i = 0; i < m; ++i) {
            const bool in_a = a.index_mask & (std::uint32_t{1} << i);
            const bool in_b = b.index_mask & (std::uint32_t{1} << i);
            if (in_a != in_b) return in_a;
        }
        return false;
    });
    return out;
}

IntegerLattice build_lambda(const LambdaProfile& profile) {
    require_valid(profile);
    const int m = profile.m();
    const Index n = Index{1} << m;
    IntMatrix basis(n, n);
    Index row = 0;
    for (const auto& u : coordinate_subspaces(m)) {
        const Integer coefficient = pow2(static_cast<unsigned>(profile[m - u.dimension()]));
        basis.row(row++) = coefficient * characteristic_vector(AffineSubspace::from(u), m);
    }
    return IntegerLattice(std::move(basis));
}

SizeGuardError::SizeGuardError(std::uint64_t count, std::uint64_t limit)
    : std::length_error("affine generator set has " + std::to_string(count) + " members, above the limit " +
                        std::to_string(limit)),
      count_(count) {}

std::uint64_t affine_subspace_count(int m) {
    std::uint64_t total = 0;
    for (int r = 0; r <= m; ++r) total += gaussian_binomial2(m, r) << (m - r);
    return total;
}

std::vector<IntVector> generators_full(const LambdaProfile& profile, std::uint64_t max_generators) {
    require_valid(profile);
    const int m = profile.m();
    if (m > 20) throw SizeGuardError(~std::uint64_t{0}, max_generators);
    const std::uint64_t count = affine_subspace_count(m);
    if (count > max_generators) throw SizeGuardError(count, max_generators);

    std::vector<IntVector> out;
    out.reserve(count);
    for (int r = 0; r <= m; ++r) {
        const Integer coefficient = pow2(static_cast<unsigned>(profile[m - r]));
        for_each_subspace(m, r, [&](const std::vector<std::uint32_t>& basis) {
            std::uint32_t pivot_mask = 0;
            for (auto b : basis) pivot_mask |= std::bit_floor(b);
            // Coset representatives: shifts vanishing on the pivot bits.
            for (std::uint32_t shift = 0; shift < (std::uint32_t{1} << m); ++shift) {
                if (shift & pivot_mask) continue;
                out.push_back(coefficient * characteristic_vector({basis, shift}, m));
            }
        });
    }
    return out;
}

IntegerLattice lattice_from_generators(const std::vector<IntVector>& generators) {
    if (generators.empty()) throw DimensionError("empty generator list");
    IntMatrix g(static_cast<Index>(generators.size()), generators.front().size());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i].size() != g.cols()) throw DimensionError("generators of unequal length");
        g.row(static_cast<Index>(i)) = generators[i];
    }
    return IntegerLattice(hnf(g));
}

LambdaProfile profile_dual(const LambdaProfile& profile) {
    require_valid(profile);
    const int m = profile.m();
    LambdaProfile dual;
    for (int r = 0; r <= m; ++r) dual.lambdas.push_back(profile[m] - profile[m - r]);
    return dual;
}

int predicted_det_exponent(const LambdaProfile& profile) {
    require_valid(profile);
    const int m = profile.m();
    std::uint64_t d = 0;
    for (int r = 0; r <= m; ++r) d += static_cast<std::uint64_t>(profile[r]) * binomial(m, r);
    return static_cast<int>(2 * d);
}

int predicted_min_exponent(const LambdaProfile& profile) {
    require_valid(profile);
    const int m = profile.m();
    int alpha = m;
    for (int r = 0; r <= m; ++r) alpha = std::min(alpha, m - r + 2 * profile[r]);
    return alpha;
}

IntegerLattice named_lattice(NamedProfileKind kind, int m) { return build_lambda(named_profile(kind, m)); }

GramMatrix rescaled_gram(int m) {
    if (m < 2) throw ProfileError("rescaled Gram needs m >= 2");
    const int scale = (m - 1) / 2;
    const IntegerLattice lattice = named_lattice(NamedProfileKind::LambdaBW, m);
    const IntMatrix& b = lattice.basis();
    GramMatrix g{b * b.transpose(), scale};
    const Integer unit = pow2(static_cast<unsigned>(scale));
    for (auto& x : g.entries.reshaped()) {
        if (x % unit != 0) throw std::logic_error("rescaled Gram entry is not integral");
        x /= unit;
    }
    return g;
}

Integer kissing_predicted(int m) {
    if (m < 1) throw std::invalid_argument("kissing number needs m >= 1");
    Integer s = 4;
    for (int k = 2; k <= m; ++k) s *= pow2(static_cast<unsigned>(k)) + 2;
    return s;
}

std::vector<LambdaProfile> profile_family(int m, int max_top) {
    std::vector<LambdaProfile> out;
    for (std::uint32_t steps = 0; steps < (std::uint32_t{1} << m); ++steps) {
        if (std::popcount(steps) > max_top) continue;
        LambdaProfile p{{0}};
        for (int r = 1; r <= m; ++r) p.lambdas.push_back(p.lambdas.back() + ((steps >> (r - 1)) & 1 ? 1 : 0));
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(),
              [](const LambdaProfile& a, const LambdaProfile& b) { return a.lambdas < b.lambdas; });
    return out;
}

}  // namespace bwlat
