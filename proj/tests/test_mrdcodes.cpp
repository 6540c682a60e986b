#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace scatlin;

namespace {

std::optional<PsiParams> first_applicable(const FieldPtr& F, unsigned s, std::uint32_t skip = 0) {
    const auto sets = psets(*F, s);
    for (Elem m : F->subfield_elements(F->t()))
        for (std::uint32_t i = 1; i < F->order(); ++i) {
            const PsiParams P{F, s, m, Elem{i}};
            if (theorem_main_predicate(P, sets).applies && skip-- == 0)
                return P;
        }
    return std::nullopt;
}

LinPoly lp_poly(const FieldPtr& F, Elem delta) {
    std::vector<Elem> c(F->n());
    c[1] = F->one();
    c[F->n() - 1] = delta;
    return LinPoly(F, 1, c);
}

}  // namespace

TEST(MrdCodes, MatrixAlgebra) {
    const auto F = make_field(3, 1, 3);
    std::mt19937_64 rng(31);
    for (int k = 0; k < 100; ++k) {
        Mat2 a{oracle::random_elem(*F, rng), oracle::random_elem(*F, rng), oracle::random_elem(*F, rng),
               oracle::random_elem(*F, rng)};
        if (mat_det(*F, a).index == 0)
            continue;
        EXPECT_EQ(mat_mul(*F, a, mat_inv(*F, a)), mat_identity(*F));
    }
    EXPECT_THROW(mat_inv(*F, Mat2{}), Error);
}

TEST(MrdCodes, MinDistanceMatchesZeroCounting) {
    const auto F = make_field(3, 1, 3);
    std::mt19937_64 rng(32);
    for (int k = 0; k < 12; ++k) {
        const auto f = oracle::random_poly(F, 1, 2 + k % 3, rng);
        if (f.support().size() == 1 && f.support()[0] == 0)
            continue;
        const RankCode C(f);
        ASSERT_EQ(C.min_distance(), oracle::min_distance(f)) << f.to_string();
        ASSERT_EQ(C.is_mrd(), is_scattered_fiber(f)) << f.to_string();
    }
}

TEST(MrdCodes, WorkerCountDoesNotChangeResults) {
    const auto F = make_field(3, 1, 3);
    const auto P = *first_applicable(F, 1);
    const LinPoly f = build_psi(P);
    EXPECT_EQ(RankCode(f).min_distance(1), RankCode(f).min_distance(3));
    EXPECT_EQ(stabilizer(f, 1).elements, stabilizer(f, 3).elements);
}

TEST(MrdCodes, IdealizerSizes) {
    const auto F = make_field(3, 1, 3);
    const auto P = *first_applicable(F, 1);
    const RankCode C(build_psi(P));
    EXPECT_EQ(right_idealizer_pairs(C).size(), 9u);
    // C_f is an F_{q^n}-space, so every alpha X is a left multiplier.
    EXPECT_EQ(left_idealizer_pairs(C).size(), 729u);
    const RankCode G(LinPoly::monomial(F, 1, 1, F->one()));
    EXPECT_EQ(right_idealizer_pairs(G).size(), 729u);
    for (const auto& g : right_idealizer(C))
        ASSERT_TRUE(span_coords(C.f(), C.f().compose(g)).has_value());
    EXPECT_THROW(right_idealizer_pairs(C, 1000), Error);
}

TEST(MrdCodes, StabilizerMatchesNaiveEnumeration) {
    const auto F = make_field(3, 1, 3);
    std::vector<LinPoly> examples{LinPoly::monomial(F, 1, 1, F->one()), lp_poly(F, F->generator())};
    std::mt19937_64 rng(33);
    while (examples.size() < 3) {
        const auto f = oracle::random_poly(F, 1, 3, rng);
        if (f.coeff(0).index == 0 && is_scattered_fiber(f))
            examples.push_back(f);
    }
    for (const auto& f : examples) {
        const auto S = stabilizer(f);
        EXPECT_EQ(S.elements, oracle::stabilizer(f)) << f.to_string();
        EXPECT_TRUE(S.is_field()) << f.to_string();
        for (const auto& M : S.elements)
            ASSERT_TRUE(maps_subspace(f, f, M));
    }
}

TEST(MrdCodes, PsiStabilizerAtTOdd) {
    const auto F = make_field(3, 1, 3);
    const auto P = *first_applicable(F, 1);
    const LinPoly f = build_psi(P);
    const auto S = stabilizer(f);
    EXPECT_EQ(S.order_with_zero(), 9u);
    EXPECT_TRUE(S.is_field());
    const auto cf = closed_form_stabilizer_t_odd(P);
    EXPECT_EQ(cf.size(), 9u);
    for (const auto& M : cf)
        if (!(M == Mat2{})) {
            EXPECT_TRUE(maps_subspace(f, f, M));
        }
}

TEST(MrdCodes, StabilizerExponent) {
    const auto F = make_field(3, 1, 3);
    // -(q^{s(t+1)} - 1)/(q^{2s} - 1) = -(1 + q^2) at t = 3, s = 1.
    EXPECT_EQ(stabilizer_exponent_R(*F, 1), F->order() - 1 - 10);
    EXPECT_THROW(stabilizer_exponent_R(*make_field(3, 1, 4), 1), Error);
}

TEST(MrdCodes, StandardForm) {
    const auto F = make_field(3, 1, 4);
    std::vector<Elem> c(F->n());
    c[1] = F->one();
    c[5] = F->generator();
    const auto rep = standard_form(LinPoly(F, 1, c));
    EXPECT_EQ(rep.r, 4u);
    EXPECT_TRUE(rep.is_standard);
    EXPECT_TRUE(rep.shape_ok);
    const auto lp = standard_form(lp_poly(make_field(3, 1, 3), Elem{5}));
    EXPECT_EQ(lp.r, 2u);
    EXPECT_EQ(lp.residue, 1u);
    EXPECT_THROW(standard_form(LinPoly::zero(F, 1)), Error);
    EXPECT_THROW(RankCode(LinPoly::identity(F, 1)), Error);
}
