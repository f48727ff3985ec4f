#include <random>

#include "bwlat/construct.hpp"
#include "bwlat/enumeration.hpp"

namespace bwlat {

namespace {

bool is_sign_representative(const SmallVector& v) {
    for (Index i = 0; i < v.size(); ++i) {
        if (v(i) != 0) return v(i) > 0;
    }
    return false;
}

std::int64_t dot(const SmallVector& a, const SmallVector& b) {
    __int128 acc = 0;
    for (Index i = 0; i < a.size(); ++i) acc += static_cast<__int128>(a(i)) * b(i);
    return static_cast<std::int64_t>(acc);
}

Frame frame_from(const Enumerator& delta, int m, const IntVector& ell) {
    const std::int64_t half = std::int64_t{1} << (m - 1);
    const SmallVector small_ell = to_small_vector(ell);
    if (dot(small_ell, small_ell) != half) {
        throw std::invalid_argument("extract_frame: ell must have norm 2^(m-1)");
    }
    CosetSlice slice = delta.coset(ell, half, true);
    const std::uint64_t expected = std::uint64_t{2} << m;
    if (slice.counts.size() != 1 || slice.count(half) != expected) {
        throw FrameError("coset has " + std::to_string(slice.count(half)) + " minimal vectors, expected " +
                             std::to_string(expected),
                         small_ell, slice.vectors);
    }
    Frame frame;
    for (const auto& v : slice.vectors) {
        if (is_sign_representative(v)) frame.vectors.push_back(v);
    }
    if (frame.vectors.size() != (std::size_t{1} << m)) {
        throw FrameError("coset minimal vectors are not closed under negation", small_ell, slice.vectors);
    }
    for (std::size_t i = 0; i < frame.vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < frame.vectors.size(); ++j) {
            if (dot(frame.vectors[i], frame.vectors[j]) != 0) {
                throw FrameError("coset minimal vectors " + std::to_string(i) + " and " + std::to_string(j) +
                                     " are not orthogonal",
                                 small_ell, {frame.vectors[i], frame.vectors[j]});
            }
        }
    }
    return frame;
}

}  // namespace

std::vector<SmallVector> minimal_vectors_lambda(int m, const EnumOptions& options) {
    const std::int64_t half = std::int64_t{1} << (m - 1);
    return Enumerator(named_lattice(NamedProfileKind::LambdaBW, m), options).short_vectors(half, true).vectors;
}

CheckItem verify_coset_lemma(int m, const EnumOptions& options) {
    Stopwatch clock;
    CheckItem item;
    item.check = "coset";
    item.parameters = {{"m", m}};
    const std::int64_t half = std::int64_t{1} << (m - 1);
    const std::int64_t full = std::int64_t{1} << m;

    const auto minimal = minimal_vectors_lambda(m, options);
    const Enumerator delta(named_lattice(NamedProfileKind::DeltaBW, m), options);

    // The coset of -ℓ is the negative of the coset of ℓ.
    NormCounts seen;
    std::uint64_t checked = 0;
    for (const auto& ell : minimal) {
        if (!is_sign_representative(ell)) continue;
        CosetSlice slice = delta.coset(to_int_vector(ell), full - 1, false);
        item.nodes += slice.nodes;
        ++checked;
        for (const auto& [norm, count] : slice.counts) seen[norm] += count;
        if (slice.counts.size() != 1 || slice.counts.begin()->first != half) {
            CosetSlice detail = delta.coset(to_int_vector(ell), full - 1, true);
            for (const auto& v : detail.vectors) {
                if (dot(v, v) != half) {
                    item.witness = {{"ell", vector_to_json(ell)}, {"x", vector_to_json(v)}, {"norm", dot(v, v)}};
                    break;
                }
            }
            item.status = CheckStatus::Fail;
            break;
        }
    }
    item.details = {{"minimal_vectors", minimal.size()}, {"cosets_checked", checked}, {"coset_counts", counts_to_json(seen)}};
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

Frame extract_frame(int m, const IntVector& ell, const EnumOptions& options) {
    const Enumerator delta(named_lattice(NamedProfileKind::DeltaBW, m), options);
    return frame_from(delta, m, ell);
}

CheckItem verify_frames(int m, const EnumOptions& options) {
    Stopwatch clock;
    CheckItem item;
    item.check = "frames";
    item.parameters = {{"m", m}};
    const auto minimal = minimal_vectors_lambda(m, options);
    const Enumerator delta(named_lattice(NamedProfileKind::DeltaBW, m), options);
    std::uint64_t frames = 0;
    for (const auto& ell : minimal) {
        try {
            const Frame f = frame_from(delta, m, to_int_vector(ell));
            (void)f;
            ++frames;
        } catch (const FrameError& e) {
            item.status = CheckStatus::Fail;
            item.reason = e.what();
            nlohmann::ordered_json found = nlohmann::ordered_json::array();
            for (const auto& v : e.found()) found.push_back(vector_to_json(v));
            item.witness = {{"ell", vector_to_json(ell)}, {"vectors", found}};
            break;
        }
    }
    item.details = {{"minimal_vectors", minimal.size()},
                    {"frames_verified", frames},
                    {"frame_size", std::uint64_t{1} << m}};
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

OddSupport odd_support(int m, const IntVector& d) {
    Integer g = 0;
    for (Index i = 0; i < d.size(); ++i) g = gcd(g, d(i));
    if (g == 0) throw std::invalid_argument("odd_support: d must be nonzero");
    OddSupport out;
    out.j = *two_adic_valuation(g);
    const Integer unit = pow2(out.j);
    for (Index i = 0; i < d.size(); ++i) {
        if ((d(i) / unit) % 2 != 0) ++out.support;
    }
    const int exponent = m - 2 * static_cast<int>(out.j);
    out.vacuous = exponent < 0;
    out.holds = out.vacuous || out.support >= (std::uint64_t{1} << exponent);
    return out;
}

CheckItem verify_odd_support(int m, std::uint64_t samples, std::uint64_t seed) {
    Stopwatch clock;
    CheckItem item;
    item.check = "odd-support";
    item.parameters = {{"m", m}, {"samples", samples}};
    item.seed = seed;

    const IntegerLattice delta = named_lattice(NamedProfileKind::DeltaBW, m);
    const IntMatrix& b = delta.basis();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coefficient(-2, 2);

    std::uint64_t vacuous = 0;
    nlohmann::ordered_json by_j = nlohmann::ordered_json::object();
    for (std::uint64_t s = 0; s < samples; ++s) {
        IntVector d;
        do {
            d = IntVector::Zero(b.cols());
            for (Index row = 0; row < b.rows(); ++row) {
                const int c = coefficient(rng);
                if (c != 0) d += c * b.row(row);
            }
        } while (d.isZero());
        const OddSupport o = odd_support(m, d);
        const std::string key = std::to_string(o.j);
        by_j[key] = by_j.value(key, 0) + 1;
        if (o.vacuous) ++vacuous;
        if (!o.holds) {
            item.status = CheckStatus::Fail;
            item.witness = {{"d", vector_to_json(d)}, {"j", o.j}, {"odd_support", o.support},
                            {"required", std::uint64_t{1} << (m - 2 * static_cast<int>(o.j))}};
            break;
        }
    }
    item.details = {{"samples_by_j", by_j}, {"vacuous", vacuous}};
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

CheckItem verify_theta_similarity(int m, std::int64_t bound, const EnumOptions& options) {
    Stopwatch clock;
    CheckItem item;
    item.check = "theta-similarity";
    item.parameters = {{"m", m}, {"bound", bound}};

    const ThetaSlice lambda = short_vectors(named_lattice(NamedProfileKind::LambdaBW, m), bound / 2, false, options);
    const ThetaSlice delta = short_vectors(named_lattice(NamedProfileKind::DeltaBW, m), bound, false, options);
    item.nodes = lambda.nodes + delta.nodes;

    for (std::int64_t norm = 1; norm <= bound; ++norm) {
        const std::uint64_t expected = norm % 2 == 0 ? lambda.count(norm / 2) : 0;
        if (delta.count(norm) != expected) {
            item.status = CheckStatus::Fail;
            item.witness = {{"delta_norm", norm}, {"delta_count", delta.count(norm)}, {"lambda_count", expected}};
            break;
        }
    }
    item.details = {{"lambda_counts", counts_to_json(lambda.counts)}, {"delta_counts", counts_to_json(delta.counts)}};
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

CheckItem verify_kissing(int m, const EnumOptions& options) {
    Stopwatch clock;
    CheckItem item;
    item.check = "kissing";
    item.parameters = {{"m", m}};
    const std::int64_t half = std::int64_t{1} << (m - 1);
    const ThetaSlice slice = short_vectors(named_lattice(NamedProfileKind::LambdaBW, m), half, false, options);
    item.nodes = slice.nodes;
    const Integer predicted = kissing_predicted(m);
    const bool only_minimum = slice.counts.size() == 1 && slice.counts.begin()->first == half;
    if (!only_minimum || Integer(slice.count(half)) != predicted) {
        item.status = CheckStatus::Fail;
        item.witness = {{"counts", counts_to_json(slice.counts)}, {"predicted", predicted.str()}};
    }
    item.details = {{"counts", counts_to_json(slice.counts)}, {"predicted", predicted.str()}};
    item.elapsed_ms = clock.elapsed_ms();
    return item;
}

nlohmann::ordered_json counts_to_json(const NormCounts& counts) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [norm, count] : counts) j[std::to_string(norm)] = count;
    return j;
}

NormCounts counts_from_json(const nlohmann::ordered_json& j) {
    NormCounts counts;
    for (const auto& [key, value] : j.items()) counts[std::stoll(key)] = value.get<std::uint64_t>();
    return counts;
}

nlohmann::ordered_json to_json(const ThetaSlice& slice) {
    return {{"bound", slice.bound}, {"counts", counts_to_json(slice.counts)}};
}

nlohmann::ordered_json to_json(const CosetSlice& slice) {
    return {{"bound", slice.bound},
            {"counts", counts_to_json(slice.counts)},
            {"representative", vector_to_json(slice.representative)}};
}

ThetaSlice theta_slice_from_json(const nlohmann::ordered_json& j) {
    ThetaSlice slice;
    slice.bound = j.at("bound").get<std::int64_t>();
    slice.counts = counts_from_json(j.at("counts"));
    return slice;
}

nlohmann::ordered_json vector_to_json(const SmallVector& v) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
    return j;
}

nlohmann::ordered_json vector_to_json(const IntVector& v) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (Index i = 0; i < v.size(); ++i) {
        if (v(i) >= std::numeric_limits<std::int64_t>::min() && v(i) <= std::numeric_limits<std::int64_t>::max()) {
            j.push_back(v(i).convert_to<std::int64_t>());
        } else {
            j.push_back(v(i).str());
        }
    }
    return j;
}

}  // namespace bwlat
