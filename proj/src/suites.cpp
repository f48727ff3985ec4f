#include "bwlat/suites.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <stdexcept>

#include "bwlat/construct.hpp"
#include "bwlat/doubling.hpp"

namespace bwlat {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxM = 7;
constexpr std::uint64_t kDefaultSamples = 1000;

int param_m(const Json& p) {
    const int m = p.at("m").get<int>();
    if (m < 1 || m > kMaxM) throw std::invalid_argument("m out of supported range 1.." + std::to_string(kMaxM));
    return m;
}

LambdaProfile param_profile(const Json& p) { return parse_profile_spec(p.at("profile").get<std::string>()); }

int heavy_from(const std::string& check) {
    static const std::map<std::string, int> thresholds = {
        {"det-formula", 7}, {"min-formula", 6}, {"basis-property", 6}, {"index", 7},
        {"chain", 7},       {"named-min", 5},   {"rescaled-gram", 7},  {"duality", 7},
        {"doubling", 7},    {"gap", 6},         {"coset", 5},          {"frames", 5},
        {"kissing", 5},     {"theta-similarity", 4}, {"odd-support", 8},
    };
    auto it = thresholds.find(check);
    if (it == thresholds.end()) throw std::invalid_argument("unknown check '" + check + "'");
    return it->second;
}

CheckItem make_item(const std::string& check, const Json& parameters) {
    CheckItem item;
    item.check = check;
    item.parameters = parameters;
    return item;
}

void set_result(CheckItem& item, bool ok, Json witness) {
    item.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    if (!ok) item.witness = std::move(witness);
}

CheckItem check_det_formula(const Json& p) {
    CheckItem item = make_item("det-formula", p);
    const LambdaProfile profile = param_profile(p);
    const IntegerLattice lattice = build_lambda(profile);
    const Integer det = det_exact(lattice.gram().entries);
    const int predicted = predicted_det_exponent(profile);
    item.details = {{"gram_det", dyadic_factorization(det)}, {"predicted_exponent", predicted}};
    set_result(item, det == pow2(static_cast<unsigned>(predicted)), {{"gram_det", det.str()}});
    return item;
}

CheckItem check_min_formula(const Json& p, const RunOptions& o) {
    CheckItem item = make_item("min-formula", p);
    const LambdaProfile profile = param_profile(p);
    const std::int64_t minimum = lattice_min(build_lambda(profile), o.enumeration);
    const int alpha = predicted_min_exponent(profile);
    item.details = {{"minimum", minimum}, {"predicted_exponent", alpha}};
    set_result(item, minimum == (std::int64_t{1} << alpha), {{"minimum", minimum}});
    return item;
}

CheckItem check_basis_property(const Json& p) {
    CheckItem item = make_item("basis-property", p);
    const LambdaProfile profile = param_profile(p);
    const auto generators = generators_full(profile);
    const bool equal = lattice_equal(lattice_from_generators(generators), build_lambda(profile));
    item.details = {{"generators", generators.size()}};
    set_result(item, equal, {{"hnf_equal", false}});
    return item;
}

CheckItem check_index(const Json& p) {
    CheckItem item = make_item("index", p);
    const int m = param_m(p);
    if (m < 2) throw std::invalid_argument("index check needs m >= 2");
    const Integer index = sublattice_index(IntegerLattice::standard(m),
                                           named_lattice(NamedProfileKind::LambdaBW, m));
    const long expected = static_cast<long>(m - 1) << (m - 2);
    item.details = {{"log2_index", exact_log2(index) ? static_cast<long>(*exact_log2(index)) : -1},
                    {"expected_log2_index", expected}};
    set_result(item, index == pow2(static_cast<unsigned>(expected)), {{"index", index.str()}});
    return item;
}

CheckItem check_chain(const Json& p) {
    CheckItem item = make_item("chain", p);
    const int m = param_m(p);
    const IntegerLattice lambda = named_lattice(NamedProfileKind::LambdaBW, m);
    const IntegerLattice delta = named_lattice(NamedProfileKind::DeltaBW, m);
    const IntegerLattice twice = lambda.scaled(2);
    // Both indices follow from the similarity Δ_m ≅ √2·Λ_m: each is 2^{N/2}.
    const Integer upper = sublattice_index(lambda, delta);
    const Integer lower = sublattice_index(delta, twice);
    const unsigned half_dim = 1u << (m - 1);
    const Integer expected = pow2(half_dim);
    item.details = {{"log2_index_lambda_delta", *exact_log2(upper)},
                    {"log2_index_delta_2lambda", *exact_log2(lower)},
                    {"expected_log2_index", half_dim},
                    {"index_equals_2^(m-1)", upper == pow2(static_cast<unsigned>(m - 1))}};
    set_result(item, upper == expected && lower == expected, {{"indices", {upper.str(), lower.str()}}});
    return item;
}

CheckItem check_named_min(const Json& p, const RunOptions& o) {
    CheckItem item = make_item("named-min", p);
    const int m = param_m(p);
    const std::int64_t lambda_min = lattice_min(named_lattice(NamedProfileKind::LambdaBW, m), o.enumeration);
    const std::int64_t delta_min = lattice_min(named_lattice(NamedProfileKind::DeltaBW, m), o.enumeration);
    item.details = {{"lambda_min", lambda_min}, {"delta_min", delta_min}};
    set_result(item, lambda_min == (std::int64_t{1} << (m - 1)) && delta_min == (std::int64_t{1} << m),
               {{"lambda_min", lambda_min}, {"delta_min", delta_min}});
    return item;
}

CheckItem check_rescaled_gram(const Json& p, const RunOptions& o) {
    CheckItem item = make_item("rescaled-gram", p);
    const int m = param_m(p);
    if (m < 2) throw std::invalid_argument("rescaled Gram needs m >= 2");
    const GramMatrix g = rescaled_gram(m);
    const Integer det = det_exact(g.entries);
    bool even = true;
    for (Index i = 0; i < g.entries.rows(); ++i) even = even && g.entries(i, i) % 2 == 0;
    const unsigned n = 1u << m;
    const Integer expected_det = (m % 2 == 1) ? Integer(1) : pow2(n / 2);
    item.details = {{"scale_exponent", g.scale}, {"det", dyadic_factorization(det)}, {"even", even}};
    if (m <= 4) {
        const std::int64_t minimum = lattice_min(named_lattice(NamedProfileKind::LambdaBW, m), o.enumeration);
        item.details["unscaled_min"] = minimum;
        item.details["scaled_min"] = minimum >> g.scale;
    }
    set_result(item, det == expected_det && even, {{"det", det.str()}, {"even", even}});
    return item;
}

CheckItem check_duality(const Json& p) {
    CheckItem item = make_item("duality", p);
    const LambdaProfile profile = param_profile(p);
    const int e = profile[profile.m()];
    const LambdaProfile dual = profile_dual(profile);
    const bool equal = lattice_equal(build_lambda(dual), dual_scaled(build_lambda(profile), e));
    item.details = {{"dual_profile", dual.str()}, {"scale_exponent", e}};
    set_result(item, equal, {{"dual_profile", dual.str()}});
    return item;
}

CheckItem check_gap(const Json& p, const RunOptions& o) {
    CheckItem item = make_item("gap", p);
    const int m = param_m(p);
    if (m < 2) throw std::invalid_argument("gap check needs m >= 2 (3·2^(m-2) must be an integer)");
    const std::int64_t lower = std::int64_t{1} << (m - 1);
    const std::int64_t upper = 3 * (std::int64_t{1} << (m - 2));
    const IntegerLattice lattice = named_lattice(NamedProfileKind::LambdaBW, m);
    const GapResult gap = gap_check(lattice, lower, upper, o.enumeration);
    item.nodes = gap.slice.nodes;
    item.details = {{"lower", lower}, {"upper", upper}, {"counts", counts_to_json(gap.slice.counts)}};
    if (m <= 4) {
        const ThetaSlice at_upper = short_vectors(lattice, upper, false, o.enumeration);
        item.details["count_at_upper"] = at_upper.count(upper);
    }
    set_result(item, gap.pass,
               gap.counterexample ? Json{{"x", vector_to_json(*gap.counterexample)}} : Json());
    return item;
}

CheckItem dispatch(const std::string& check, const Json& p, const RunOptions& o) {
    if (check == "det-formula") return check_det_formula(p);
    if (check == "min-formula") return check_min_formula(p, o);
    if (check == "basis-property") return check_basis_property(p);
    if (check == "index") return check_index(p);
    if (check == "chain") return check_chain(p);
    if (check == "named-min") return check_named_min(p, o);
    if (check == "rescaled-gram") return check_rescaled_gram(p, o);
    if (check == "duality") return check_duality(p);
    if (check == "doubling") return verify_doubling(param_m(p));
    if (check == "gap") return check_gap(p, o);
    if (check == "coset") return verify_coset_lemma(param_m(p), o.enumeration);
    if (check == "frames") return verify_frames(param_m(p), o.enumeration);
    if (check == "kissing") return verify_kissing(param_m(p), o.enumeration);
    if (check == "theta-similarity") {
        return verify_theta_similarity(param_m(p), p.at("bound").get<std::int64_t>(), o.enumeration);
    }
    if (check == "odd-support") {
        return verify_odd_support(param_m(p), p.value("samples", kDefaultSamples), o.seed);
    }
    throw std::invalid_argument("unknown check '" + check + "'");
}

int plan_m(const Json& p) {
    if (p.contains("m")) return p.at("m").get<int>();
    return parse_profile_spec(p.at("profile").get<std::string>()).m();
}

}  // namespace

MRange parse_m_range(const std::string& text) {
    auto parse = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
            throw std::invalid_argument("bad m range '" + text + "'");
        }
        return v;
    };
    MRange range;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        range.first = range.last = parse(text);
    } else {
        range.first = parse(std::string_view(text).substr(0, dots));
        range.last = parse(std::string_view(text).substr(dots + 2));
    }
    if (range.first < 1 || range.last > kMaxM || range.first > range.last) {
        throw std::invalid_argument("m range must satisfy 1 <= A <= B <= " + std::to_string(kMaxM));
    }
    return range;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"invariants", "duality", "doubling",         "gap",
                                                   "coset",      "frames",  "kissing",          "theta-similarity",
                                                   "odd-support", "all"};
    return names;
}

bool is_heavy(const std::string& check, const Json& parameters) {
    return plan_m(parameters) >= heavy_from(check);
}

CheckItem run_check(const std::string& check, const Json& parameters, const RunOptions& options) {
    if (!options.heavy && is_heavy(check, parameters)) {
        CheckItem item = make_item(check, parameters);
        item.status = CheckStatus::Skipped;
        item.reason = "requires --heavy";
        return item;
    }
    Stopwatch clock;
    try {
        CheckItem item = dispatch(check, parameters, options);
        if (check == "odd-support") item.seed = options.seed;
        if (item.elapsed_ms == 0.0) item.elapsed_ms = clock.elapsed_ms();
        return item;
    } catch (const BudgetExceeded& e) {
        if (options.strict) throw;
        CheckItem item = make_item(check, parameters);
        item.status = CheckStatus::Skipped;
        item.reason = std::string("budget exhausted: ") + e.what();
        item.nodes = e.nodes();
        item.elapsed_ms = clock.elapsed_ms();
        return item;
    }
}

std::vector<std::pair<std::string, Json>> suite_plan(const std::string& suite, MRange range,
                                                     const RunOptions& options) {
    std::vector<std::pair<std::string, Json>> plan;
    auto add = [&](const std::string& check, Json p) { plan.emplace_back(check, std::move(p)); };
    auto family = [&](int m) {
        std::vector<std::string> specs;
        for (const auto& p : profile_family(m, 2)) specs.push_back(p.str());
        for (auto kind : {NamedProfileKind::LambdaBW, NamedProfileKind::DeltaBW}) {
            const std::string s = named_profile(kind, m).str();
            if (std::find(specs.begin(), specs.end(), s) == specs.end()) specs.push_back(s);
        }
        return specs;
    };
    const bool all = suite == "all";
    if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }

    for (int m = range.first; m <= range.last; ++m) {
        if (all || suite == "invariants") {
            for (const auto& s : family(m)) add("det-formula", {{"profile", s}});
            for (const auto& p : profile_family(m, 2)) add("min-formula", {{"profile", p.str()}});
            for (const auto& p : profile_family(m, 2)) add("basis-property", {{"profile", p.str()}});
            if (m >= 2) add("index", {{"m", m}});
            add("chain", {{"m", m}});
            add("named-min", {{"m", m}});
            if (m >= 2) add("rescaled-gram", {{"m", m}});
        }
        if (all || suite == "duality") {
            for (const auto& p : profile_family(m, 2)) add("duality", {{"profile", p.str()}});
        }
        if ((all || suite == "doubling") && m < kMaxM) add("doubling", {{"m", m}});
        if ((all || suite == "gap") && m >= 2) add("gap", {{"m", m}});
        if (all || suite == "coset") add("coset", {{"m", m}});
        if (all || suite == "frames") add("frames", {{"m", m}});
        if (all || suite == "kissing") add("kissing", {{"m", m}});
        if (all || suite == "theta-similarity") add("theta-similarity", {{"m", m}, {"bound", std::int64_t{2} << m}});
        if (all || suite == "odd-support") add("odd-support", {{"m", m}, {"samples", options.samples}});
    }
    return plan;
}

VerificationReport run_suite(const std::string& suite, MRange range, const RunOptions& options) {
    VerificationReport report;
    for (const auto& [check, params] : suite_plan(suite, range, options)) report.add(run_check(check, params, options));
    return report;
}

VerificationReport rerun_report(const VerificationReport& saved, const RunOptions& options) {
    VerificationReport out;
    for (const auto& original : saved.items) {
        RunOptions o = options;
        if (original.seed) o.seed = *original.seed;
        const CheckItem again = run_check(original.check, original.parameters, o);
        CheckItem cmp = make_item("rerun:" + original.check, original.parameters);
        const bool same = again.status == original.status && again.details == original.details &&
                          again.witness == original.witness;
        cmp.status = same ? CheckStatus::Pass : CheckStatus::Fail;
        cmp.details = {{"saved_status", to_string(original.status)}, {"rerun_status", to_string(again.status)}};
        if (!same) cmp.witness = {{"saved", to_json(original)}, {"rerun", to_json(again)}};
        cmp.elapsed_ms = again.elapsed_ms;
        cmp.nodes = again.nodes;
        out.add(std::move(cmp));
    }
    return out;
}

}  // namespace bwlat
