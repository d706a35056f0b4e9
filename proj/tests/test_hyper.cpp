#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/hypergeometric_pFq.hpp>

#include "mvfrac/hyper.hpp"
#include "mvfrac/rng.hpp"
#include "mvfrac/verify.hpp"

using namespace mvfrac;

namespace {

const Truncation full{25, 0.0};

double log_det_complement(const std::vector<double>& eigs) {
    double acc = 0.0;
    for (double e : eigs) acc += std::log1p(-e);
    return acc;
}

}  // namespace

TEST(HyperPfq, ZeroArgumentIsOne) {
    const auto t = shared_zonal_table(25, 2);
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_EQ(hyper_pfq(HyperParams{{1.3, 0.4}, {2.2}}, zero, full, *t).value, 1.0);
}

TEST(HyperPfq, ScalarLogClosedForm) {
    const auto t = build_zonal_table(60, 1, 60);
    const std::vector<double> z{0.5};
    const SeriesResult s = hyper_pfq(HyperParams{{1.0, 1.0}, {2.0}}, z, Truncation{60, 0.0}, t);
    EXPECT_NEAR(s.value, 2.0 * std::numbers::ln2, 1e-10);
}

TEST(HyperPfq, ScalarMatchesBoost) {
    const auto t = build_zonal_table(60, 1, 60);
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = rng.uniform(-1.5, 2.0), b = rng.uniform(0.1, 2.0), c = rng.uniform(0.6, 3.0);
        const double z = rng.uniform(-0.5, 0.5);
        const std::vector<double> eigs{z};
        const double got = hyper_pfq(HyperParams{{a, b}, {c}}, eigs, Truncation{60, 0.0}, t).value;
        const double ref = boost::math::hypergeometric_pFq({a, b}, {c}, z);
        EXPECT_NEAR(got, ref, 1e-10 * std::max(1.0, std::abs(ref))) << a << " " << b << " " << c << " " << z;
    }
}

TEST(HyperPfq, BinomialDeterminant) {
    const auto t = shared_zonal_table(25, 2);
    const std::vector<double> eigs{0.2, 0.1};
    const SeriesResult s = hyper_pfq(HyperParams{{1.5}, {}}, eigs, full, *t);
    EXPECT_NEAR(s.value, std::exp(-1.5 * log_det_complement(eigs)), 1e-9);
}

TEST(HyperPfq, BinomialRandomMatrices) {
    Rng rng(21);
    for (int p : {2, 3}) {
        const auto t = shared_zonal_table(25, p);
        for (double b : {0.7, 1.5, 2.5}) {
            const SpdMatrix z = random_spd(rng, p, 0.0, 0.3);
            const double exact = std::exp(-b * log_det_complement(z.eigenvalue_list()));
            EXPECT_NEAR(hyper_pfq(HyperParams{{b}, {}}, z, full, *t).value, exact, 1e-8);
        }
    }
}

TEST(HyperPfq, ExponentialTrace) {
    Rng rng(4);
    const auto t = shared_zonal_table(25, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const SpdMatrix z = random_spd(rng, 3, 0.1, 1.0);
        EXPECT_NEAR(hyper_pfq(HyperParams{}, z, full, *t).value, std::exp(z.trace()), 1e-10 * std::exp(z.trace()));
    }
}

TEST(HyperPfq, OrderInvariantInNumerators) {
    const auto t = shared_zonal_table(25, 3);
    const std::vector<double> eigs{0.4, 0.25, 0.05};
    const double ab = hyper_pfq(HyperParams{{0.7, 1.9}, {2.6}}, eigs, full, *t).value;
    const double ba = hyper_pfq(HyperParams{{1.9, 0.7}, {2.6}}, eigs, full, *t).value;
    EXPECT_NEAR(ab, ba, 1e-13 * std::abs(ab));
}

TEST(HyperPfq, TailEstimateCoversRemainder) {
    const auto t = shared_zonal_table(25, 2);
    for (const std::vector<double>& eigs : {std::vector<double>{0.3, 0.1}, std::vector<double>{0.5, 0.45}}) {
        const double exact = std::exp(-2.5 * log_det_complement(eigs));
        for (int k : {6, 10, 14}) {
            const SeriesResult s = hyper_pfq(HyperParams{{2.5}, {}}, eigs, Truncation{k, 0.0}, *t);
            ASSERT_TRUE(s.converged);
            EXPECT_GE(s.tail_estimate, std::abs(exact - s.value)) << k;
            EXPECT_LT(s.tail_estimate, 20.0 * std::abs(exact - s.value)) << k;
        }
    }
}

TEST(HyperPfq, EarlyStopHonoursTolerance) {
    const auto t = shared_zonal_table(25, 2);
    const std::vector<double> eigs{0.2, 0.1};
    const SeriesResult s = hyper_pfq(HyperParams{{1.5}, {}}, eigs, Truncation{25, 1e-6}, *t);
    EXPECT_LT(s.k_used, 25);
    EXPECT_NEAR(s.value, std::exp(-1.5 * log_det_complement(eigs)), 1e-5);
}

TEST(HyperPfq, Errors) {
    const auto t = shared_zonal_table(25, 2);
    const std::vector<double> outside{1.0, 0.2};
    EXPECT_THROW(hyper_pfq(HyperParams{{1.0, 1.0}, {2.0}}, outside, full, *t), DomainError);
    const std::vector<double> inside{0.5, 0.4};
    EXPECT_THROW(hyper_pfq(HyperParams{{1.0, 1.0}, {0.5}}, inside, full, *t), DomainError);
    EXPECT_THROW(hyper_pfq(HyperParams{{1.0, 1.0}, {-2.0}}, inside, full, *t), DomainError);
    EXPECT_THROW(hyper_pfq(HyperParams{{1.0}, {}}, std::vector<double>{0.1, 0.1, 0.1}, full, *t), DimensionError);
    EXPECT_THROW(hyper_pfq(HyperParams{{1.0}, {}}, inside, Truncation{26, 0.0}, *t), DomainError);
}

TEST(HyperPfq, DivergentSeriesRaises) {
    const auto t = build_zonal_table(25, 1);
    // 3F1 has zero radius of convergence; the weight sums keep growing.
    const std::vector<double> z{0.5};
    EXPECT_THROW(hyper_pfq(HyperParams{{3.0, 3.0, 3.0}, {1.0}}, z, full, t), ConvergenceError);
}

TEST(HyperIdentity, ChuVandermonde) {
    const auto t = shared_zonal_table(25, 1);
    const int n = 6;
    const double b = 1.3, c = 4.1;
    const SeriesResult s = hyper_pfq_identity(HyperParams{{-double(n), b}, {c}}, 1, full, *t);
    EXPECT_NEAR(s.value, gen_pochhammer(c - b, Partition{n}) / gen_pochhammer(c, Partition{n}), 1e-13);
}

TEST(HyperIdentity, MatrixGaussSummation) {
    const int p = 2;
    const auto t = shared_zonal_table(25, p);
    const double a = 0.3, b = 0.2, c = 14.0;
    const SeriesResult s = hyper_pfq_identity(HyperParams{{a, b}, {c}}, p, full, *t);
    const double exact = std::exp(log_matrix_gamma(p, c) + log_matrix_gamma(p, c - a - b) -
                                  log_matrix_gamma(p, c - a) - log_matrix_gamma(p, c - b));
    EXPECT_NEAR(s.value, exact, 1e-10 * exact);
}

TEST(HyperIdentity, SlowSeriesRejected) {
    const auto t = shared_zonal_table(25, 1);
    EXPECT_THROW(hyper_pfq_identity(HyperParams{{1.0, 1.0}, {2.2}}, 1, full, *t), ConvergenceError);
}

TEST(Gauss2F1Rect, ZeroBIsOne) {
    const auto t = shared_zonal_table(25, 2);
    const SpdMatrix zy = SpdMatrix::diagonal({0.3, 0.1});
    EXPECT_EQ(gauss_2f1_rect(1.0, 0.0, 3.0, RectConfig::identity(2, 2), zy, full, *t).value, 1.0);
}

TEST(Gauss2F1Rect, ScalarReduction) {
    const auto t = build_zonal_table(60, 1, 60);
    const SpdMatrix zy = SpdMatrix::diagonal({0.35});
    const double a = 0.8, b = 1.1, c = 2.3;
    const double got = gauss_2f1_rect(a, b, c, RectConfig::identity(1, 1), zy, Truncation{60, 0.0}, t).value;
    EXPECT_NEAR(got, boost::math::hypergeometric_pFq({a + 0.5, b}, {c + 0.5}, 0.35), 1e-12);
}

TEST(Gauss2F1Rect, ConditionsReported) {
    const auto t = shared_zonal_table(25, 2);
    const RectConfig cfg = RectConfig::identity(2, 2);
    const SpdMatrix zy = SpdMatrix::diagonal({0.3, 0.1});
    EXPECT_THROW(gauss_2f1_rect(2.8, 0.5, 3.0, cfg, zy, full, *t), DomainError);
    EXPECT_THROW(gauss_2f1_rect(-0.6, 0.5, 3.0, cfg, zy, full, *t), DomainError);
    EXPECT_THROW(gauss_2f1_rect(1.0, 0.5, 3.0, cfg, SpdMatrix::diagonal({1.0, 0.1}), full, *t), DomainError);
}

TEST(PathwayDetLimit, Values) {
    EXPECT_NEAR(pathway_det_limit(1.01, SpdMatrix::identity(1)), std::pow(1.01, -100.0), 1e-13);
    EXPECT_EQ(pathway_det_limit(1.3, std::vector<double>{0.0, 0.0}), 1.0);
    const SpdMatrix z = SpdMatrix::diagonal({0.6, 0.3, 0.2});
    const double tr = z.trace();
    EXPECT_LT(std::abs(pathway_det_limit(1.0001, z) - std::exp(-tr)), 1e-3 * tr * tr);
    EXPECT_THROW(pathway_det_limit(1.0, z), DomainError);
}

TEST(PathwayDetLimit, TenfoldPerDecade) {
    const SpdMatrix z = SpdMatrix::diagonal({0.8, 0.4});
    const double target = std::exp(-z.trace());
    double prev = std::abs(pathway_det_limit(1.01, z) - target);
    for (double q : {1.001, 1.0001}) {
        const double err = std::abs(pathway_det_limit(q, z) - target);
        EXPECT_GT(prev / err, 5.0);
        EXPECT_LT(prev / err, 20.0);
        prev = err;
    }
}
