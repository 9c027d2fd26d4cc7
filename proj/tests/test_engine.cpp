#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "motpairs/engine.hpp"
#include "motpairs/oracles.hpp"

using namespace motpairs;

namespace {

ClassPoly jac(int g) { return cls_jacobian(g).cls; }
ClassPoly proj(int n) { return cls_projective(n).cls; }
ClassPoly sym_c(int k, int g) { return cls_sym_curve(k, g).cls; }
ClassPoly curve(int g) { return curve_class(g); }

bool palindromic_nonneg(const ClassPoly& c) {
    auto b = c.poincare();
    for (size_t i = 0; i < b.size(); ++i) {
        if (b[i] < 0) return false;
        if (b[i] != b[b.size() - 1 - i]) return false;
    }
    return true;
}

}  // namespace

TEST(Engine, WallFlipWorkedExample) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    ClassPoly want = jac(2) * jac(2) * sym_c(2, 2) * proj(1);
    EXPECT_EQ(eng.flip_locus(p, Rational(4), +1).cls, want);
    EXPECT_EQ(eng.flip_locus(p, Rational(4), -1).cls, want);
}

TEST(Engine, TopChamberOfRankTwo) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    ASSERT_EQ(chamber_count(p), 3);
    ClassPoly top = eng.nclass_chamber(p, 2).cls;
    EXPECT_EQ(top, jac(2) * jac(2) * proj(5));
    // Same value through a sigma inside the top chamber.
    EXPECT_EQ(eng.nclass(p, Rational(9)).cls, top);
}

TEST(Engine, ChamberDescent) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    ClassPoly j2 = jac(2) * jac(2);

    // Crossing sigma = 7 trades the incoming for the outgoing flip locus.
    ClassPoly hi7 = j2 * curve(2);            // M(1,4) x Jac x Sym^1, fiber P^0
    ClassPoly lo7 = j2 * curve(2) * proj(3);  // same base, fiber P^3
    EXPECT_EQ(eng.flip_locus(p, Rational(7), +1).cls, hi7);
    EXPECT_EQ(eng.flip_locus(p, Rational(7), -1).cls, lo7);

    ClassPoly ch1 = eng.nclass_chamber(p, 1).cls;
    EXPECT_EQ(ch1, eng.nclass_chamber(p, 2).cls - hi7 + lo7);

    // The wall at sigma = 4 has equal flip loci, so the bottom chamber
    // coincides with the middle one.
    EXPECT_EQ(eng.nclass_chamber(p, 0).cls, ch1);
    EXPECT_EQ(eng.nclass(p, Rational(3)).cls, ch1);

    // Outside the open range the moduli are empty.
    EXPECT_TRUE(eng.nclass(p, Rational(11)).cls.is_zero());
    EXPECT_TRUE(eng.nclass(p, Rational(1)).cls.is_zero());
    EXPECT_TRUE(eng.nclass(p, sigma_min(p)).cls.is_zero());
}

TEST(Engine, AscentMatchesDescent) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    ClassPoly bottom = eng.nclass_chamber(p, 0).cls;
    ClassPoly rebuilt = bottom;
    auto ws = walls(p);
    for (size_t i = 0; i < ws.size(); ++i) {
        rebuilt = rebuilt + eng.flip_locus(p, ws[i], +1).cls -
                  eng.flip_locus(p, ws[i], -1).cls;
        EXPECT_EQ(rebuilt, eng.nclass_chamber(p, static_cast<int>(i) + 1).cls);
    }
}

TEST(Engine, StableAtWall) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    ClassPoly nsw = eng.nclass_stable_at_wall(p, Rational(4)).cls;
    ClassPoly above = eng.nclass_chamber(p, 1).cls;
    ClassPoly below = eng.nclass_chamber(p, 0).cls;
    EXPECT_EQ(nsw, above - eng.flip_locus(p, Rational(4), +1).cls);
    EXPECT_EQ(nsw, below - eng.flip_locus(p, Rational(4), -1).cls);
    EXPECT_TRUE(eng.nclass_stable_at_wall(p, sigma_min(p)).cls.is_zero());
    EXPECT_TRUE(eng.nclass_stable_at_wall(p, sigma_max(p)).cls.is_zero());
    // Noncritical values fall back to the chamber class.
    EXPECT_EQ(eng.nclass_stable_at_wall(p, Rational(3)).cls, below);
}

TEST(Engine, UmIdentityCoprime) {
    // For coprime (2,5) the bottom chamber fibers over stable bundles with
    // projective fibers, so the direct product formula must reproduce the
    // wall-crossing descent, and the semistable boundary is empty.
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    EXPECT_TRUE(eng.dm_class(p).cls.is_zero());
    ClassPoly um = eng.um_class(p).cls;
    EXPECT_EQ(um, eng.nclass_chamber(p, 0).cls);
    EXPECT_EQ(um, eng.msbundle_class(2, 5).cls * jac(2) * proj(2));
}

TEST(Engine, MsbundleInvariants) {
    Engine eng(2);
    ClassPoly m25 = eng.msbundle_class(2, 5).cls;
    // Twisting by a degree-1 line bundle identifies the two moduli.
    EXPECT_EQ(m25, eng.msbundle_class(2, 7).cls);
    EXPECT_EQ(m25.total_degree(), 10);  // dim = n^2 (g-1) + 1 = 5
    EXPECT_TRUE(palindromic_nonneg(m25));
    EXPECT_EQ(eng.msbundle_class(1, 3).cls, jac(2));
}

TEST(Engine, MsbundleMatchesFiltrationOracle) {
    Engine eng(2);
    EXPECT_EQ(eng.msbundle_class(2, 5).cls,
              oracles::hn_coprime_bundle_class(2, 5, 2));
    // The closed form gives the fixed-determinant Betti numbers; the
    // determinant map contributes an extra (1 + t)^{2g} factor.
    auto betti = eng.msbundle_class(2, 5).cls.poincare();
    auto closed = oracles::rank2_poincare_closed_form(2);
    oracles::IntSeries alb{1, 4, 6, 4, 1};
    EXPECT_EQ(betti, oracles::useries_mul(closed, alb));
}

TEST(Engine, SemistableBoundaryAtEvenDegree) {
    Engine eng(2);
    PairProblem p{2, 2, 4, 0};
    ClassPoly dm = eng.dm_class(p).cls;
    ClassPoly j = jac(2);
    // Hand sum over the four bottom strata with nonempty residual moduli:
    // an unordered pair of lines, one line with a two-step section, and one
    // line hit by both filtration steps.
    ClassPoly want = (lambda_k(j, 2) - j) * j + j * j * (ClassPoly::one() + ClassPoly::lefschetz()) +
                     (j * j - j) * j * ClassPoly::lefschetz();
    EXPECT_EQ(dm, want);
    EXPECT_EQ(eng.um_class(p).cls, eng.nclass_chamber(p, 0).cls - dm);
}

TEST(Engine, RankOneClasses) {
    Engine eng(2);
    PairProblem p{2, 1, 3, 0};
    EXPECT_TRUE(eng.nclass(p, Rational(2)).cls.is_zero());  // sigma below d - d0
    EXPECT_EQ(eng.nclass(p, Rational(4)).cls, sym_c(3, 2) * jac(2));
    PairProblem small{2, 1, 2, 5};
    EXPECT_TRUE(eng.nclass(small, Rational(10)).cls.is_zero());
    EXPECT_EQ(eng.um_class(p).cls, eng.nclass_chamber(p, 0).cls);
}

TEST(Engine, PairsClassIsSymmetricPower) {
    Engine eng(2);
    for (int d = 0; d <= 5; ++d) {
        PairProblem p{2, 1, d, 0};
        EXPECT_EQ(eng.pairs_class(p, 0).cls, sym_c(d, 2)) << "d=" << d;
    }
}

TEST(Engine, ChamberClassesPalindromic) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    for (int ch = 0; ch < chamber_count(p); ++ch) {
        ClassPoly c = eng.nclass_chamber(p, ch).cls;
        EXPECT_TRUE(palindromic_nonneg(c)) << "chamber " << ch;
        EXPECT_EQ(c.total_degree(), 2 * moduli_dim(p)) << "chamber " << ch;
    }
}

TEST(Engine, CertificateSoundness) {
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    eng.nclass_chamber(p, 0);
    eng.um_class(p);
    eng.msbundle_class(2, 5);
    auto resolve = eng.resolver();
    auto snap = eng.snapshot();
    EXPECT_FALSE(snap.empty());
    for (const auto& [key, c] : snap) {
        ClassPoly again = evaluate(c.cert, 2, resolve);
        EXPECT_EQ(again, c.cls) << "certificate mismatch for " << key;
        // Round-trip through the textual form as well.
        EXPECT_EQ(evaluate(parse_expr(serialize(c.cert)), 2, resolve), c.cls);
    }
}

TEST(Engine, CacheRoundTrip) {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "motpairs_engine_cache_test.json";
    fs::remove(path);
    PairProblem p{2, 2, 5, 0};
    {
        Engine eng(2, {path.string(), {}});
        eng.nclass_chamber(p, 0);
        eng.save_cache();
    }
    ASSERT_TRUE(fs::exists(path));
    {
        Engine eng(2, {path.string(), {}});
        auto snap = eng.snapshot();
        EXPECT_FALSE(snap.empty());
        EXPECT_TRUE(snap.count(eng.key_chamber(p, 0)));
        Engine fresh(2);
        EXPECT_EQ(eng.nclass_chamber(p, 0).cls, fresh.nclass_chamber(p, 0).cls);
    }
    // Damaged or mismatched caches are ignored, not fatal.
    {
        std::ofstream out(path);
        out << "{ this is not json";
    }
    {
        Engine eng(2, {path.string(), {}});
        EXPECT_TRUE(eng.snapshot().empty());
    }
    {
        std::ofstream out(path);
        out << "{\"format\":\"motpairs-cache\",\"version\":999,\"entries\":{}}";
    }
    {
        Engine eng(2, {path.string(), {}});
        EXPECT_TRUE(eng.snapshot().empty());
    }
    fs::remove(path);
}

TEST(Engine, Errors) {
    EXPECT_THROW(Engine(1), EngineError);
    Engine eng(2);
    PairProblem p{2, 2, 5, 0};
    EXPECT_THROW(eng.nclass(p, Rational(4)), WallValue);  // on a wall
    EXPECT_THROW(eng.flip_locus(p, Rational(3), +1), WallValue);
    EXPECT_THROW(eng.msbundle_class(2, 4), NotCoprime);
    EXPECT_THROW(eng.nclass_chamber(p, 99), EngineError);
    PairProblem wrong_genus{3, 2, 5, 0};
    EXPECT_THROW(eng.nclass_chamber(wrong_genus, 0), EngineError);
    PairProblem big{2, 5, 7, 0};
    EXPECT_THROW(eng.nclass_chamber(big, 0), UnsupportedShape);
}
