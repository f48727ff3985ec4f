#include <doctest.h>

#include <functional>

#include "bwlat/construct.hpp"

using namespace bwlat;

namespace {

IntVector vec(std::initializer_list<long> values) {
    IntVector v(static_cast<Index>(values.size()));
    Index i = 0;
    for (long x : values) v(i++) = x;
    return v;
}

// d = sum_r l_r·C(m, r), computed with Pascal's triangle.
long det_exponent_by_hand(const LambdaProfile& p) {
    const int m = p.m();
    std::vector<long> row{1};
    for (int k = 1; k <= m; ++k) {
        std::vector<long> next(static_cast<std::size_t>(k + 1), 1);
        for (int j = 1; j < k; ++j) next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] + row[static_cast<std::size_t>(j)];
        row = next;
    }
    long d = 0;
    for (int r = 0; r <= m; ++r) d += p[r] * row[static_cast<std::size_t>(r)];
    return 2 * d;
}

// Every vector in {0,1,2}^{m+1} that satisfies the chain constraints.
std::vector<LambdaProfile> family_by_brute_force(int m) {
    std::vector<LambdaProfile> out;
    std::vector<int> v(static_cast<std::size_t>(m + 1), 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == m + 1) {
            LambdaProfile p{v};
            if (validate_profile(p).empty()) out.push_back(p);
            return;
        }
        for (int x = 0; x <= 2; ++x) {
            v[static_cast<std::size_t>(i)] = x;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

TEST_CASE("validate_profile examples") {
    CHECK(validate_profile(LambdaProfile{{0, 0, 1}}).empty());
    const auto step = validate_profile(LambdaProfile{{0, 2}});
    REQUIRE(step.size() == 1);
    CHECK(step[0].index == 1);
    const auto start = validate_profile(LambdaProfile{{1, 1}});
    REQUIRE_FALSE(start.empty());
    CHECK(start[0].index == 0);
    const auto several = validate_profile(LambdaProfile{{1, 0, 2}});
    CHECK(several.size() >= 3);
    CHECK_FALSE(validate_profile(LambdaProfile{{0, -1}}).empty());
}

TEST_CASE("profile specs") {
    CHECK(parse_profile_spec("0,0,1,1") == LambdaProfile{{0, 0, 1, 1}});
    CHECK(parse_profile_spec("lambda:4") == LambdaProfile{{0, 0, 1, 1, 2}});
    CHECK(parse_profile_spec("delta:3") == LambdaProfile{{0, 1, 1, 2}});
    CHECK_THROWS_AS(parse_profile_spec("0,2"), ProfileError);
    CHECK_THROWS_AS(parse_profile_spec("0,,1"), ProfileError);
    CHECK_THROWS_AS(parse_profile_spec("gamma:2"), ProfileError);
    CHECK_THROWS_AS(parse_profile_spec("lambda:0"), ProfileError);
    CHECK(LambdaProfile{{0, 1, 1}}.str() == "0,1,1");
}

TEST_CASE("named profiles") {
    CHECK(named_profile(NamedProfileKind::LambdaBW, 5) == LambdaProfile{{0, 0, 1, 1, 2, 2}});
    CHECK(named_profile(NamedProfileKind::DeltaBW, 5) == LambdaProfile{{0, 1, 1, 2, 2, 3}});
    for (int m = 1; m <= 7; ++m) {
        CHECK(validate_profile(named_profile(NamedProfileKind::LambdaBW, m)).empty());
        CHECK(validate_profile(named_profile(NamedProfileKind::DeltaBW, m)).empty());
    }
}

TEST_CASE("characteristic_vector examples") {
    CHECK(characteristic_vector(AffineSubspace{{}, 0}, 2) == vec({1, 0, 0, 0}));
    CHECK(characteristic_vector(AffineSubspace{{0b01}, 0}, 2) == vec({1, 1, 0, 0}));
    CHECK(characteristic_vector(AffineSubspace{{0b01}, 0b10}, 2) == vec({0, 0, 1, 1}));
    // 001 + span{011, 110} = {001, 010, 100, 111}
    CHECK(characteristic_vector(AffineSubspace{{0b011, 0b110}, 0b001}, 3) == vec({0, 1, 1, 0, 1, 0, 0, 1}));
    CHECK_THROWS_AS(characteristic_vector(AffineSubspace{{0b01, 0b01}, 0}, 2), SubspaceError);
    CHECK_THROWS_AS(characteristic_vector(AffineSubspace{{0b100}, 0}, 2), SubspaceError);
}

TEST_CASE("coordinate subspace order") {
    const auto subs = coordinate_subspaces(3);
    std::vector<std::uint32_t> masks;
    for (const auto& u : subs) masks.push_back(u.index_mask);
    // (), (1), (2), (3), (1,2), (1,3), (2,3), (1,2,3)
    CHECK(masks == std::vector<std::uint32_t>{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111});
    CHECK(subs[4].dimension() == 2);
}

TEST_CASE("build_lambda examples") {
    const IntegerLattice g1 = build_lambda(LambdaProfile{{0, 0}});
    CHECK(g1.basis().row(0) == vec({1, 0}));
    CHECK(g1.basis().row(1) == vec({1, 1}));
    CHECK(lattice_equal(g1, IntegerLattice::standard(1)));

    const IntegerLattice d1 = build_lambda(LambdaProfile{{0, 1}});
    CHECK(d1.basis().row(0) == vec({2, 0}));
    CHECK(d1.basis().row(1) == vec({1, 1}));
    CHECK(det_exact(d1.gram().entries) == 4);

    const IntegerLattice l2 = build_lambda(LambdaProfile{{0, 0, 1}});
    CHECK(l2.basis().row(0) == vec({2, 0, 0, 0}));
    CHECK(l2.basis().row(1) == vec({1, 1, 0, 0}));
    CHECK(l2.basis().row(2) == vec({1, 0, 1, 0}));
    CHECK(l2.basis().row(3) == vec({1, 1, 1, 1}));
    CHECK(det_exact(l2.gram().entries) == 4);
    CHECK(l2.gram_scale() == 0);
    CHECK_THROWS_AS(build_lambda(LambdaProfile{{0, 2}}), ProfileError);
}

TEST_CASE("generators_full examples") {
    auto as_set = [](std::vector<IntVector> g) {
        std::vector<std::vector<long>> out;
        for (const auto& v : g) {
            std::vector<long> row;
            for (Index i = 0; i < v.size(); ++i) row.push_back(v(i).convert_to<long>());
            out.push_back(row);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    using Rows = std::vector<std::vector<long>>;
    CHECK(as_set(generators_full(LambdaProfile{{0, 0}})) == Rows{{0, 1}, {1, 0}, {1, 1}});
    CHECK(as_set(generators_full(LambdaProfile{{0, 1}})) == Rows{{0, 2}, {1, 1}, {2, 0}});
    CHECK(lattice_equal(lattice_from_generators(generators_full(LambdaProfile{{0, 0, 1}})),
                        build_lambda(LambdaProfile{{0, 0, 1}})));
}

TEST_CASE("affine subspace counts and the size guard") {
    // sum_r 2^{m-r}·[m r]_2
    CHECK(affine_subspace_count(1) == 3);
    CHECK(affine_subspace_count(2) == 11);
    CHECK(affine_subspace_count(3) == 51);
    CHECK(affine_subspace_count(4) == 307);
    CHECK(affine_subspace_count(5) == 2451);
    CHECK(generators_full(named_profile(NamedProfileKind::LambdaBW, 4)).size() == 307);
    CHECK_THROWS_AS(generators_full(named_profile(NamedProfileKind::LambdaBW, 5), 1000), SizeGuardError);
}

TEST_CASE("profile family") {
    for (int m = 1; m <= 4; ++m) CHECK(profile_family(m, 2) == family_by_brute_force(m));
    CHECK(profile_family(4, 2).size() == 11);
}

TEST_CASE("basis property over the family") {
    for (int m = 1; m <= 4; ++m) {
        for (const auto& p : profile_family(m, 2)) {
            CAPTURE(p.str());
            CHECK(lattice_equal(lattice_from_generators(generators_full(p)), build_lambda(p)));
        }
    }
}

TEST_CASE("profile_dual") {
    CHECK(profile_dual(LambdaProfile{{0, 0, 1}}) == LambdaProfile{{0, 1, 1}});
    CHECK(profile_dual(LambdaProfile{{0, 0, 0, 0}}) == LambdaProfile{{0, 0, 0, 0}});
    CHECK(profile_dual(LambdaProfile{{0, 0, 1, 1}}) == LambdaProfile{{0, 0, 1, 1}});
    for (int m = 1; m <= 6; ++m) {
        for (const auto& p : profile_family(m, 3)) {
            CHECK(validate_profile(profile_dual(p)).empty());
            CHECK(profile_dual(profile_dual(p)) == p);
        }
    }
}

TEST_CASE("duality over the family") {
    for (int m = 1; m <= 4; ++m) {
        for (const auto& p : profile_family(m, 2)) {
            CAPTURE(p.str());
            CHECK(lattice_equal(build_lambda(profile_dual(p)), dual_scaled(build_lambda(p), p[m])));
        }
    }
}

TEST_CASE("predicted exponents") {
    CHECK(predicted_det_exponent(LambdaProfile{{0, 0, 1}}) == 2);
    CHECK(predicted_det_exponent(LambdaProfile{{0, 0, 1, 1}}) == 8);
    CHECK(predicted_det_exponent(LambdaProfile{{0, 0, 0, 0}}) == 0);
    CHECK(predicted_min_exponent(named_profile(NamedProfileKind::LambdaBW, 4)) == 3);
    CHECK(predicted_min_exponent(named_profile(NamedProfileKind::DeltaBW, 4)) == 4);
    CHECK(predicted_min_exponent(LambdaProfile{{0, 0, 0, 0}}) == 0);
    for (int m = 1; m <= 6; ++m) {
        for (const auto& p : profile_family(m, 3)) CHECK(predicted_det_exponent(p) == det_exponent_by_hand(p));
    }
}

TEST_CASE("determinant formula for every profile up to m = 5") {
    for (int m = 1; m <= 5; ++m) {
        for (const auto& p : profile_family(m, m)) {
            CAPTURE(p.str());
            CHECK(det_exact(build_lambda(p).gram().entries) == pow2(static_cast<unsigned>(det_exponent_by_hand(p))));
        }
    }
}

TEST_CASE("named lattices") {
    const IntegerLattice d1 = named_lattice(NamedProfileKind::DeltaBW, 1);
    for (long a = -3; a <= 3; ++a) {
        for (long b = -3; b <= 3; ++b) CHECK(contains(d1, vec({a, b})) == ((a + b) % 2 == 0));
    }
    CHECK(det_exact(named_lattice(NamedProfileKind::LambdaBW, 2).gram().entries) == 4);
    CHECK(det_exact(named_lattice(NamedProfileKind::LambdaBW, 3).gram().entries) == 256);
}

TEST_CASE("rescaled Gram matrices") {
    const GramMatrix g2 = rescaled_gram(2);
    CHECK(g2.scale == 0);
    CHECK(g2.entries == named_lattice(NamedProfileKind::LambdaBW, 2).gram().entries);
    for (int m = 2; m <= 6; ++m) {
        const GramMatrix g = rescaled_gram(m);
        CHECK(g.scale == (m - 1) / 2);
        CHECK(g.entries == g.entries.transpose());
        for (Index i = 0; i < g.entries.rows(); ++i) CHECK(g.entries(i, i) % 2 == 0);
        const Integer det = det_exact(g.entries);
        if (m % 2 == 1) {
            CHECK(det == 1);
        } else {
            CHECK(det == pow2(1u << (m - 1)));
        }
    }
    CHECK_THROWS(rescaled_gram(1));
}

TEST_CASE("kissing recursion") {
    CHECK(kissing_predicted(1) == 4);
    CHECK(kissing_predicted(2) == 24);
    CHECK(kissing_predicted(3) == 240);
    CHECK(kissing_predicted(4) == 4320);
    CHECK(kissing_predicted(5) == 146880);
}
