#include <gtest/gtest.h>

#include <algorithm>

#include "ffl/elliptic_curve.hpp"
#include "test_support.hpp"

namespace ffl {
namespace {

using test::make_curve;

TEST(CurveNew, Examples) {
    PrimeField F(5);
    EXPECT_NO_THROW(curve_new(F, 1, 0, 1, 1));
    EXPECT_NO_THROW(curve_new(F, 1, 0, -1, 0));
    EXPECT_THROW(curve_new(F, 1, 0, 0, 0), DomainError);
    EXPECT_THROW(curve_new(F, 0, 1, 0, 1), DomainError);
    EXPECT_THROW(curve_new(F, 5, 1, 0, 1), DomainError); // 5 = 0 mod 5
    EXPECT_EQ(Curve::genus(), 1);
}

// A cubic can only have a repeated root over the base field, so square-freeness
// is equivalent to f and f' having no common zero in F_p.
TEST(CurveNew, SquareFreeMatchesCommonRootSearch) {
    for (std::int64_t p : {3, 5, 7}) {
        PrimeField F(p);
        for (std::int64_t a3 = 1; a3 < p; ++a3) {
            for (std::int64_t a2 = 0; a2 < p; ++a2) {
                for (std::int64_t a1 = 0; a1 < p; ++a1) {
                    for (std::int64_t a0 = 0; a0 < p; ++a0) {
                        bool repeated = false;
                        for (std::int64_t x = 0; x < p; ++x) {
                            std::int64_t fx = (((a3 * x + a2) * x + a1) * x + a0) % p;
                            std::int64_t dfx = ((3 * a3 * x + 2 * a2) * x + a1) % p;
                            repeated = repeated || (fx == 0 && dfx == 0);
                        }
                        bool accepted = true;
                        try {
                            Curve(F, a3, a2, a1, a0);
                        } catch (const DomainError&) {
                            accepted = false;
                        }
                        EXPECT_EQ(accepted, !repeated) << p << ":" << a3 << "," << a2 << "," << a1 << "," << a0;
                    }
                }
            }
        }
    }
}

TEST(EnumeratePlaces, Examples) {
    auto a = enumerate_places(test::curve_5_a());
    EXPECT_EQ(a.size(), 9u);
    EXPECT_TRUE(a[0].is_infinity());

    auto b = enumerate_places(test::curve_5_b());
    EXPECT_EQ(b.size(), 8u);
    // x in {0, 1, 4} with y = 0, x in {2, 3} with two values of y
    std::vector<std::string> got;
    for (std::size_t i = 1; i < b.size(); ++i) {
        got.push_back(b[i].to_string());
    }
    EXPECT_EQ(got, (std::vector<std::string>{"(0,0)", "(1,0)", "(2,1)", "(2,4)", "(3,2)", "(3,3)", "(4,0)"}));
}

TEST(EnumeratePlaces, OrderedDistinctOnCurveAndWithinHasse) {
    for (const auto& spec : test::sample_curves()) {
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        ASSERT_TRUE(t[0].is_infinity());
        EXPECT_TRUE(std::is_sorted(t.places().begin() + 1, t.places().end()));
        EXPECT_EQ(std::adjacent_find(t.places().begin(), t.places().end()), t.places().end());
        std::size_t brute = 1;
        for (std::int64_t x = 0; x < spec.p; ++x) {
            for (std::int64_t y = 0; y < spec.p; ++y) {
                brute += c.contains(CurvePoint::affine(c.field().element(x), c.field().element(y)));
            }
        }
        EXPECT_EQ(t.size(), brute);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_TRUE(c.contains(t[i]));
            EXPECT_EQ(t.index_of(t[i]), i);
        }
        EXPECT_TRUE(hasse_bound_holds(static_cast<std::int64_t>(t.size()), spec.p)) << spec.to_string();
    }
}

TEST(PointAdd, MatchesCollinearityOracle) {
    for (const auto& spec : test::sample_curves()) {
        if (spec.p < 5) {
            continue;
        }
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        for (const auto& P : t.places()) {
            for (const auto& Q : t.places()) {
                ASSERT_EQ(point_add(c, P, Q), test::oracle_add(c, P, Q))
                    << spec.to_string() << " " << P.to_string() << " + " << Q.to_string();
            }
        }
    }
}

TEST(PointAdd, DoublingExample) {
    Curve c = test::curve_5_a();
    const PrimeField& F = c.field();
    auto P = CurvePoint::affine(F.element(0), F.element(1));
    auto D = point_add(c, P, P);
    EXPECT_TRUE(c.contains(D));
    EXPECT_EQ(D, test::oracle_add(c, P, P));
    EXPECT_EQ(point_add(c, D, CurvePoint::affine(F.element(0), F.element(4))), P);
}

TEST(PointAdd, IdentityInverseAndOffCurveInput) {
    Curve c = test::curve_5_a();
    auto t = enumerate_places(c);
    for (const auto& P : t.places()) {
        EXPECT_EQ(point_add(c, P, CurvePoint::infinity()), P);
        EXPECT_TRUE(point_add(c, P, point_negate(c, P)).is_infinity());
    }
    const PrimeField& F = c.field();
    auto off = CurvePoint::affine(F.element(0), F.element(0));
    EXPECT_THROW(point_add(c, off, t[1]), DomainError);
    EXPECT_THROW(point_negate(c, off), DomainError);
}

TEST(PointNegate, Examples) {
    Curve c = test::curve_5_a();
    const PrimeField& F = c.field();
    EXPECT_TRUE(point_negate(c, CurvePoint::infinity()).is_infinity());
    EXPECT_EQ(point_negate(c, CurvePoint::affine(F.element(0), F.element(1))),
              CurvePoint::affine(F.element(0), F.element(4)));
    Curve b = test::curve_5_b();
    auto two_torsion = CurvePoint::affine(b.field().element(1), b.field().zero());
    EXPECT_EQ(point_negate(b, two_torsion), two_torsion);
}

TEST(ScalarMul, Examples) {
    for (const auto& c : {test::curve_5_a(), test::curve_5_b()}) {
        auto t = enumerate_places(c);
        for (const auto& P : t.places()) {
            EXPECT_TRUE(scalar_mul(c, 0, P).is_infinity());
            EXPECT_EQ(scalar_mul(c, -1, P), point_negate(c, P));
            // order by repeated addition
            CurvePoint acc = P;
            std::int64_t order = 1;
            while (!acc.is_infinity()) {
                acc = point_add(c, acc, P);
                ++order;
            }
            EXPECT_TRUE(scalar_mul(c, order, P).is_infinity());
            CurvePoint rep = CurvePoint::infinity();
            for (std::int64_t k = 0; k < 2 * order + 3; ++k) {
                EXPECT_EQ(scalar_mul(c, k, P), rep);
                EXPECT_EQ(scalar_mul(c, -k, P), point_negate(c, rep));
                rep = point_add(c, rep, P);
            }
        }
    }
}

TEST(GroupStructure, Examples) {
    auto a = test::curve_5_a();
    auto ga = group_structure(a, enumerate_places(a));
    EXPECT_EQ(ga.epsilon, 1u);
    EXPECT_EQ(ga.doubling_image_size, 9u);
    EXPECT_EQ(ga.orders[0], 1u);

    auto b = test::curve_5_b();
    auto gb = group_structure(b, enumerate_places(b));
    EXPECT_EQ(gb.epsilon, 4u);
    EXPECT_EQ(gb.doubling_image_size, 2u);
}

TEST(GroupStructure, EpsilonAndOrdersAgreeWithExhaustiveSearch) {
    for (const auto& spec : test::sample_curves()) {
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        auto g = group_structure(c, t);
        std::size_t two_torsion = 0;
        for (const auto& P : t.places()) {
            two_torsion += point_add(c, P, P).is_infinity();
        }
        EXPECT_EQ(g.epsilon, two_torsion) << spec.to_string();
        EXPECT_TRUE(g.epsilon == 1 || g.epsilon == 2 || g.epsilon == 4);
        EXPECT_EQ(g.doubling_image_size * g.epsilon, g.n);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_EQ(g.orders[i], t.order(i));
            EXPECT_EQ(g.n % g.orders[i], 0u);
        }
    }
}

TEST(GroupLaw, ExhaustiveAxiomsOnSmallCurves) {
    for (const auto& spec : test::sample_curves()) {
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        if (t.size() > 12) {
            continue;
        }
        const auto& pts = t.places();
        for (const auto& P : pts) {
            for (const auto& Q : pts) {
                ASSERT_EQ(point_add(c, P, Q), point_add(c, Q, P));
                auto PQ = point_add(c, P, Q);
                for (const auto& R : pts) {
                    ASSERT_EQ(point_add(c, PQ, R), point_add(c, P, point_add(c, Q, R))) << spec.to_string();
                }
            }
        }
    }
}

TEST(PlaceTable, CachedTableMatchesCurveArithmetic) {
    for (const auto& spec : test::sample_curves()) {
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        for (std::size_t i = 0; i < t.size(); ++i) {
            EXPECT_EQ(t[t.negate(i)], point_negate(c, t[i]));
            for (std::int64_t k : {-40, -7, -1, 0, 1, 2, 5, 33, 100}) {
                EXPECT_EQ(t[t.multiple(k, i)], scalar_mul(c, k, t[i]));
            }
            for (std::size_t j = 0; j < t.size(); ++j) {
                ASSERT_EQ(t[t.add(i, j)], point_add(c, t[i], t[j]));
            }
        }
    }
}

TEST(LineM, Examples) {
    Curve c = test::curve_5_a();
    auto t = enumerate_places(c);
    for (const auto& P : t.places()) {
        EXPECT_EQ(line_m(c, P, CurvePoint::infinity()).kind, LineFunction::Kind::Constant1);
        EXPECT_EQ(line_m(c, CurvePoint::infinity(), P).kind, LineFunction::Kind::Constant1);
        if (!P.is_infinity()) {
            auto v = line_m(c, P, point_negate(c, P));
            EXPECT_EQ(v.kind, LineFunction::Kind::Vertical);
            EXPECT_TRUE(v.evaluate(P).is_zero());
            EXPECT_EQ(-v.c, P.x());
        }
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        for (std::size_t j = 1; j < t.size(); ++j) {
            if (t[i].x() != t[j].x()) {
                auto l = line_m(c, t[i], t[j]);
                EXPECT_EQ(l.kind, LineFunction::Kind::Chord);
                EXPECT_TRUE(l.evaluate(t[i]).is_zero());
                EXPECT_TRUE(l.evaluate(t[j]).is_zero());
            }
        }
    }
}

// (m(P,Q)) = P + Q + R' - 3 Q_inf: the affine zeros are P, Q, -(P+Q) with multiplicity.
TEST(LineM, ZerosAreTheThreeIntersectionPoints) {
    for (const auto& spec : test::sample_curves()) {
        Curve c = spec.curve();
        auto t = enumerate_places(c);
        for (std::size_t i = 1; i < t.size(); ++i) {
            for (std::size_t j = 1; j < t.size(); ++j) {
                auto R = point_add(c, t[i], t[j]);
                auto zeros = line_zeros(c, line_m(c, t[i], t[j]));
                std::vector<CurvePoint> expected{t[i], t[j]};
                if (!R.is_infinity()) {
                    expected.push_back(point_negate(c, R));
                }
                std::sort(zeros.begin(), zeros.end());
                std::sort(expected.begin(), expected.end());
                ASSERT_EQ(zeros, expected) << spec.to_string() << " " << t[i].to_string() << " " << t[j].to_string();
            }
        }
    }
}

TEST(Curve, CharacteristicThreeWorks) {
    Curve c = make_curve(3, 1, 2, 0, 1);
    auto t = enumerate_places(c);
    auto g = group_structure(c, t);
    EXPECT_EQ(g.n, t.size());
    for (const auto& P : t.places()) {
        EXPECT_TRUE(scalar_mul(c, static_cast<std::int64_t>(g.n), P).is_infinity());
    }
}

} // namespace
} // namespace ffl
