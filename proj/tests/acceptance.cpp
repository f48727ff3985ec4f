// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N] [--heavy] [--threads K]
//
// Exit status is 0 iff every selected criterion passes.

#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "bwlat/construct.hpp"
#include "bwlat/doubling.hpp"
#include "bwlat/enumeration.hpp"
#include "oracle.hpp"

using namespace bwlat;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& note) {
        if (!ok) pass = false;
        notes.push_back((ok ? "ok: " : "FAILED: ") + note);
    }
};

struct Settings {
    bool heavy = false;
    EnumOptions enumeration;
};

template <typename... Parts>
std::string cat(const Parts&... parts) {
    std::ostringstream s;
    (s << ... << parts);
    return s.str();
}

Integer two_to(long e) { return pow2(static_cast<unsigned>(e)); }

std::uint64_t choose(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

long det_exponent(const LambdaProfile& p) {
    long d = 0;
    for (int r = 0; r <= p.m(); ++r) d += p[r] * static_cast<long>(choose(p.m(), r));
    return 2 * d;
}

int min_exponent(const LambdaProfile& p) {
    int a = 1 << 30;
    for (int r = 0; r <= p.m(); ++r) a = std::min(a, p.m() - r + 2 * p[r]);
    return a;
}

IntegerLattice lam(int m) { return named_lattice(NamedProfileKind::LambdaBW, m); }
IntegerLattice del(int m) { return named_lattice(NamedProfileKind::DeltaBW, m); }

std::vector<LambdaProfile> small_family() {
    std::vector<LambdaProfile> out;
    for (int m = 1; m <= 4; ++m) {
        for (auto& p : profile_family(m, 2)) out.push_back(p);
    }
    return out;
}

void time_limit(Outcome& o, const Stopwatch& clock, double seconds) {
    const double elapsed = clock.elapsed_ms() / 1000;
    o.require(elapsed < seconds, cat("runtime ", elapsed, " s < ", seconds, " s"));
}

Outcome determinant_formula(const Settings&) {
    Stopwatch clock;
    Outcome o;
    std::vector<LambdaProfile> profiles = small_family();
    for (int m = 1; m <= 6; ++m) {
        profiles.push_back(named_profile(NamedProfileKind::LambdaBW, m));
        profiles.push_back(named_profile(NamedProfileKind::DeltaBW, m));
    }
    std::size_t bad = 0;
    for (const auto& p : profiles) {
        const Integer det = det_exact(build_lambda(p).gram().entries);
        if (det != two_to(det_exponent(p))) {
            ++bad;
            o.require(false, cat(p.str(), ": det ", dyadic_factorization(det), ", expected 2^", det_exponent(p)));
        }
    }
    o.require(bad == 0, cat(profiles.size(), " profiles, exact Gram determinant = 2^{2d}"));
    time_limit(o, clock, 30);
    return o;
}

Outcome minimum_formula(const Settings& s) {
    Stopwatch clock;
    Outcome o;
    std::size_t n = 0;
    for (const auto& p : small_family()) {
        const std::int64_t min = lattice_min(build_lambda(p), s.enumeration);
        ++n;
        if (min != (std::int64_t{1} << min_exponent(p))) {
            o.require(false, cat(p.str(), ": min ", min, ", expected 2^", min_exponent(p)));
        }
    }
    o.require(o.pass, cat(n, " profiles, enumerated minimum = 2^alpha"));
    time_limit(o, clock, 60);
    return o;
}

Outcome duality(const Settings&) {
    Stopwatch clock;
    Outcome o;
    std::size_t n = 0;
    for (const auto& p : small_family()) {
        ++n;
        if (!lattice_equal(build_lambda(profile_dual(p)), dual_scaled(build_lambda(p), p[p.m()]))) {
            o.require(false, cat(p.str(), ": dual mismatch"));
        }
    }
    o.require(o.pass, cat(n, " profiles, Lambda(lambda') = 2^{lambda_m} Lambda(lambda)^#"));
    time_limit(o, clock, 60);
    return o;
}

Outcome named_invariants(const Settings& s) {
    Outcome o;
    for (int m = 2; m <= 6; ++m) {
        const Integer index = sublattice_index(IntegerLattice::standard(m), lam(m));
        const long expected = static_cast<long>(m - 1) << (m - 2);
        o.require(index == two_to(expected), cat("m=", m, ": [Gamma:Lambda] = 2^", expected));
    }
    for (int m = 2; m <= 6; ++m) {
        const IntegerLattice l = lam(m), d = del(m);
        Integer upper, lower;
        try {
            upper = sublattice_index(l, d);
            lower = sublattice_index(d, l.scaled(2));
        } catch (const ContainmentError& e) {
            o.require(false, cat("m=", m, ": chain inclusion fails at row ", e.row()));
            continue;
        }
        o.require(true, cat("m=", m, ": Lambda > Delta > 2 Lambda"));
        const Integer stated = two_to(m - 1);
        o.require(upper == stated && lower == stated,
                  cat("m=", m, ": indices [Lambda:Delta] = ", dyadic_factorization(upper), ", [Delta:2Lambda] = ",
                      dyadic_factorization(lower), "; stated 2^", m - 1));
    }
    const int top = s.heavy ? 5 : 4;
    for (int m = 2; m <= top; ++m) {
        const std::int64_t lm = lattice_min(lam(m), s.enumeration);
        const std::int64_t dm = lattice_min(del(m), s.enumeration);
        o.require(lm == (std::int64_t{1} << (m - 1)) && dm == (std::int64_t{1} << m),
                  cat("m=", m, ": min(Lambda) = ", lm, ", min(Delta) = ", dm));
    }
    if (!s.heavy) o.notes.push_back("m=5 minima need --heavy");
    return o;
}

Outcome doubling(const Settings&) {
    Stopwatch clock;
    Outcome o;
    for (int m = 1; m <= 5; ++m) {
        const CheckItem item = verify_doubling(m);
        o.require(item.passed(), cat("m=", m, ": subdirect product = Lambda_", m + 1, " (dimension ", 2 << m, ")"));
    }
    time_limit(o, clock, 120);
    return o;
}

Outcome gap(const Settings& s) {
    Outcome o;
    const int top = s.heavy ? 6 : 5;
    for (int m = 2; m <= top; ++m) {
        const std::int64_t lower = std::int64_t{1} << (m - 1), upper = 3 * (std::int64_t{1} << (m - 2));
        const GapResult g = gap_check(lam(m), lower, upper, s.enumeration);
        o.require(g.pass, cat("m=", m, ": no norm strictly between ", lower, " and ", upper, " (", g.slice.nodes,
                              " nodes)"));
    }
    const std::uint64_t at12 = short_vectors(lam(4), 12, false, s.enumeration).count(12);
    o.require(at12 > 0, cat("Lambda_4 has ", at12, " vectors of norm 12"));
    if (!s.heavy) o.notes.push_back("m=6 needs --heavy");
    return o;
}

Outcome kissing(const Settings& s) {
    Outcome o;
    const std::uint64_t expected[] = {4, 24, 240, 4320, 146880};
    const int top = s.heavy ? 5 : 4;
    for (int m = 1; m <= top; ++m) {
        const std::int64_t min = std::int64_t{1} << (m - 1);
        const ThetaSlice slice = short_vectors(lam(m), min, false, s.enumeration);
        const bool only_min = slice.counts.size() == 1 && slice.counts.begin()->first == min;
        o.require(only_min && slice.count(min) == expected[m - 1],
                  cat("m=", m, ": ", slice.count(min), " minimal vectors, expected ", expected[m - 1]));
    }
    if (!s.heavy) o.notes.push_back("m=5 needs --heavy");
    return o;
}

Outcome coset_lemma(const Settings& s) {
    Outcome o;
    for (int m = 2; m <= 4; ++m) {
        Stopwatch clock;
        const CheckItem item = verify_coset_lemma(m, s.enumeration);
        o.require(item.passed(), cat("m=", m, ": ", item.details.at("minimal_vectors").get<std::uint64_t>(),
                                     " minimal vectors, cosets clear of (2^{m-1}, 2^m)"));
        if (m == 4) time_limit(o, clock, 600);
    }
    return o;
}

Outcome frames(const Settings& s) {
    Outcome o;
    for (int m = 2; m <= 4; ++m) {
        const CheckItem item = verify_frames(m, s.enumeration);
        o.require(item.passed(), cat("m=", m, ": ", item.details.at("frames_verified").get<std::uint64_t>(),
                                     " frames of ", 2 << m, " minimal coset vectors, orthogonal up to sign"));
    }
    return o;
}

Outcome theta_similarity(const Settings& s) {
    Outcome o;
    const int top = s.heavy ? 4 : 3;
    for (int m = 2; m <= top; ++m) {
        const std::int64_t bound = std::int64_t{2} << m;
        const ThetaSlice l = short_vectors(lam(m), bound / 2, false, s.enumeration);
        const ThetaSlice d = short_vectors(del(m), bound, false, s.enumeration);
        bool ok = true;
        for (std::int64_t n = 1; n <= bound; ++n) ok = ok && d.count(n) == (n % 2 == 0 ? l.count(n / 2) : 0);
        o.require(ok, cat("m=", m, ": N_Delta(2k) = N_Lambda(k) for 2k <= ", bound));
    }
    if (!s.heavy) o.notes.push_back("m=4 needs --heavy");
    return o;
}

Outcome modularity(const Settings&) {
    Outcome o;
    for (int m = 2; m <= 5; ++m) {
        const IntegerLattice l = lam(m);
        const IntMatrix& b = l.basis();
        const IntMatrix raw = b * b.transpose();
        const Integer unit = two_to((m - 1) / 2);
        bool integral = true, even = true;
        IntMatrix g(raw.rows(), raw.cols());
        for (Index i = 0; i < raw.rows(); ++i) {
            for (Index j = 0; j < raw.cols(); ++j) {
                integral = integral && raw(i, j) % unit == 0;
                g(i, j) = raw(i, j) / unit;
            }
            even = even && g(i, i) % 2 == 0;
        }
        const Integer det = det_exact(g);
        if (m % 2 == 1) {
            o.require(integral && even && det == 1,
                      cat("m=", m, ": scaled Gram integral=", integral, " even=", even, " det=", det.str()));
        } else {
            o.require(integral && det == two_to(1L << (m - 1)),
                      cat("m=", m, ": scaled Gram det ", dyadic_factorization(det), " = 2^{N/2}"));
        }
        o.require(g == rescaled_gram(m).entries, cat("m=", m, ": rescaled_gram agrees"));
    }
    return o;
}

Outcome oracle_equivalence(const Settings& s) {
    Outcome o;
    std::vector<IntegerLattice> lattices{IntegerLattice::standard(0)};
    for (int m = 1; m <= 2; ++m) {
        for (const auto& p : profile_family(m, m)) lattices.push_back(build_lambda(p));
    }
    lattices.emplace_back(del(2).basis(), 1);
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> entry(-3, 3);
    const Index dims[] = {1, 2, 4};
    int random = 0;
    while (random < 60) {
        const Index n = dims[random % 3];
        IntMatrix b(n, n);
        for (auto& x : b.reshaped()) x = entry(rng);
        if (det_exact(b) == 0 || oracle::box_volume(b, 0, 16) > 2e5) continue;
        lattices.emplace_back(b);
        ++random;
    }
    std::size_t compared = 0;
    for (const auto& l : lattices) {
        for (std::int64_t bound = 0; bound <= 16; ++bound) {
            ++compared;
            if (short_vectors(l, bound, false, s.enumeration).counts != oracle::box_counts(l.basis(), l.gram_scale(), bound)) {
                o.require(false, cat("mismatch at bound ", bound, " for basis with first row ", vector_to_json(IntVector(l.basis().row(0))).dump()));
            }
        }
    }
    o.require(o.pass, cat(lattices.size(), " lattices of dimension <= 4, ", compared, " slices"));
    return o;
}

struct Criterion {
    const char* title;
    std::function<Outcome(const Settings&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {"determinant formula", determinant_formula},
        {"minimum formula", minimum_formula},
        {"duality", duality},
        {"named-lattice invariants", named_invariants},
        {"doubling", doubling},
        {"second-minimum gap", gap},
        {"kissing recursion", kissing},
        {"coset lemma", coset_lemma},
        {"frame structure", frames},
        {"theta similarity", theta_similarity},
        {"modularity necessities", modularity},
        {"oracle equivalence", oracle_equivalence},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    Settings settings;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--heavy") == 0) {
            settings.heavy = true;
        } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            settings.enumeration.threads = static_cast<unsigned>(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N] [--heavy] [--threads K]\n";
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria().size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }

    bool all = true;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        const Criterion& c = criteria()[i];
        Stopwatch clock;
        Outcome o;
        try {
            o = c.run(settings);
        } catch (const std::exception& e) {
            o.require(false, cat("exception: ", e.what()));
        }
        all = all && o.pass;
        std::printf("criterion %2zu: %s  %s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", c.title,
                    clock.elapsed_ms() / 1000);
        for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
