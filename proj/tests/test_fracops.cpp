#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mvfrac/fracops.hpp"
#include "mvfrac/verify.hpp"

using namespace mvfrac;

namespace {

// Left-sided scalar operator for p = 1 and A = B = 1 written as an integral
// over y in R^r with |y|^2 < z, in polar form with rho = sqrt(z) sin(theta)
// so the endpoint factor (z - rho^2)^{alpha-1} becomes smooth.
double scalar_operator_quadrature(double alpha, int r, double z, const std::function<double(double)>& f) {
    const double surface = 2.0 * std::pow(std::numbers::pi, 0.5 * r) / std::tgamma(0.5 * r);
    const double rz = std::sqrt(z);
    boost::math::quadrature::tanh_sinh<double> integrator;
    const double radial = integrator.integrate(
        [&](double t) {
            const double s = std::sin(t), c = std::cos(t);
            return std::pow(z, alpha - 1.0) * std::pow(c, 2.0 * alpha - 1.0) * f(z * s * s) *
                   std::pow(rz * s, r - 1) * rz;
        },
        0.0, 0.5 * std::numbers::pi, 1e-14);
    return surface * radial / std::tgamma(alpha);
}

double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST(PowerClosed, ScalarExamples) {
    const RectConfig cfg = RectConfig::identity(1, 1);
    for (double z : {0.3, 1.0, 2.5}) {
        const FracValue v = frac_integral_power_closed({1.0}, 0.0, SpdMatrix::diagonal({z}), cfg);
        EXPECT_NEAR(v.value(), 2.0 * std::sqrt(z), 1e-13);
        EXPECT_DOUBLE_EQ(v.det_exponent, 0.5);
    }
    EXPECT_NEAR(frac_integral_power_closed({2.0}, 0.0, SpdMatrix::identity(1), cfg).value(), 4.0 / 3, 1e-13);
    EXPECT_NEAR(frac_integral_power_closed({1.0}, 0.0, SpdMatrix::diagonal({0.7}), RectConfig::identity(1, 2)).value(),
                std::numbers::pi * 0.7, 1e-13);
}

TEST(PowerClosed, MatchesRiemannLiouvilleQuadrature) {
    const double z = 0.8;
    for (int r : {1, 2, 3}) {
        for (double alpha : {0.5, 1.0, 2.3}) {
            for (double eta : {0.0, 0.7, 1.5}) {
                const double closed =
                    frac_integral_power_closed({alpha}, eta, SpdMatrix::diagonal({z}), RectConfig::identity(1, r)).value();
                const double quad = scalar_operator_quadrature(alpha, r, z, [eta](double x) { return std::pow(x, eta); });
                EXPECT_LT(relative(closed, quad), 1e-8) << r << " " << alpha << " " << eta;
            }
        }
    }
}

TEST(Numeric, ScalarArbitraryFunction) {
    const double z = 0.9;
    auto f = [](double x) { return std::exp(-x) * std::cos(2.0 * x); };
    const MatrixFunction mf = [&](const Eigen::MatrixXd& m, double) { return f(m(0, 0)); };
    for (double alpha : {1.0, 1.7}) {
        for (int r : {1, 2}) {
            const double quad = scalar_operator_quadrature(alpha, r, z, f);
            const McEstimate est =
                frac_integral_numeric({alpha}, mf, SpdMatrix::diagonal({z}), RectConfig::identity(1, r), 200000, 3);
            EXPECT_LT(std::abs(est.z_score(quad)), 3.0) << alpha << " " << r;
        }
    }
}

TEST(Numeric, PowerFunctionMatrixCase) {
    const SpdMatrix zx = SpdMatrix::diagonal({0.5, 0.5});
    const RectConfig cfg = RectConfig::identity(2, 2);
    const double closed = frac_integral_power_closed({1.5}, 1.0, zx, cfg).value();
    const McEstimate reduced = frac_integral_numeric({1.5}, power_function(1.0), zx, cfg, 300000, 4);
    const McEstimate direct = frac_integral_direct({1.5}, power_function(1.0), zx, cfg, 300000, 5);
    EXPECT_LT(std::abs(reduced.z_score(closed)), 3.0);
    EXPECT_LT(std::abs(direct.z_score(closed)), 3.0);
}

TEST(Numeric, DirectDefinitionWithGeneralConfig) {
    const SpdMatrix zx = detail::grid_zx(2);
    const RectConfig cfg = detail::grid_config(2, 3);
    const double closed = frac_integral_power_closed({1.5}, 0.5, zx, cfg).value();
    const McEstimate direct = frac_integral_direct({1.5}, power_function(0.5), zx, cfg, 400000, 6);
    EXPECT_LT(std::abs(direct.z_score(closed)), 3.0);
}

TEST(Numeric, SingularKernelOrder) {
    // alpha < (p+1)/2 puts an integrable singularity on the boundary W -> I.
    const SpdMatrix zx = detail::grid_zx(2);
    const RectConfig cfg = RectConfig::identity(2, 2);
    const double closed = frac_integral_power_closed({1.0}, 0.0, zx, cfg).value();
    const McEstimate est = frac_integral_numeric({1.0}, power_function(0.0), zx, cfg, 300000, 7);
    EXPECT_LT(std::abs(est.z_score(closed)), 3.0);
}

TEST(Numeric, RepeatsForSeed) {
    const SpdMatrix zx = detail::grid_zx(2);
    const RectConfig cfg = RectConfig::identity(2, 3);
    const McEstimate a = frac_integral_numeric({1.2}, power_function(0.3), zx, cfg, 40000, 11);
    const McEstimate b = frac_integral_numeric({1.2}, power_function(0.3), zx, cfg, 40000, 11);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(ZonalClosed, EmptyPartitionIsPowerAtZero) {
    for (int p : {1, 2, 3}) {
        const auto t = shared_zonal_table(2, p);
        const SpdMatrix zx = detail::grid_zx(p);
        for (int r : {p, p + 2}) {
            const RectConfig cfg = detail::grid_config(p, r);
            const double zonal = frac_integral_zonal_closed({1.3}, Partition{}, zx, cfg, *t).value();
            const double power = frac_integral_power_closed({1.3}, 0.0, zx, cfg).value();
            EXPECT_LT(relative(zonal, power), 1e-12);
        }
    }
}

TEST(ZonalClosed, ScalarHandValue) {
    const auto t = shared_zonal_table(2, 1);
    const FracValue v =
        frac_integral_zonal_closed({1.0}, Partition{1}, SpdMatrix::identity(1), RectConfig::identity(1, 1), *t);
    EXPECT_NEAR(v.value(), 2.0 / 3, 1e-13);
}

TEST(ZonalClosed, ScalarMatchesQuadrature) {
    const auto t = shared_zonal_table(3, 1);
    const double z = 0.6;
    for (int k : {1, 2, 3}) {
        const double closed =
            frac_integral_zonal_closed({1.4}, Partition{k}, SpdMatrix::diagonal({z}), RectConfig::identity(1, 2), *t).value();
        const double quad = scalar_operator_quadrature(1.4, 2, z, [k](double x) { return std::pow(x, k); });
        EXPECT_LT(relative(closed, quad), 1e-8) << k;
    }
}

TEST(ZonalClosed, MonteCarloMatrixCase) {
    const auto t = shared_zonal_table(2, 2);
    const SpdMatrix zx = SpdMatrix::diagonal({0.4, 0.4});
    const RectConfig cfg = RectConfig::identity(2, 3);
    const double closed = frac_integral_zonal_closed({1.0}, Partition{1}, zx, cfg, *t).value();
    const McEstimate est = frac_integral_numeric({1.0}, zonal_function(Partition{1}, *t), zx, cfg, 300000, 8);
    EXPECT_LT(std::abs(est.z_score(closed)), 3.0);
    const SpdMatrix zg = detail::grid_zx(2);
    const RectConfig cg = detail::grid_config(2, 2);
    const double closed2 = frac_integral_zonal_closed({1.5}, Partition{1, 1}, zg, cg, *t).value();
    const McEstimate direct = frac_integral_direct({1.5}, zonal_function(Partition{1, 1}, *t), zg, cg, 300000, 9);
    EXPECT_LT(std::abs(direct.z_score(closed2)), 3.0);
}

TEST(OperatorAlgebra, IndexLawOnPowers) {
    for (int p : {1, 2, 3}) {
        const int r = p + 1;
        const RectConfig cfg = RectConfig::identity(p, r);
        const SpdMatrix id = SpdMatrix::identity(p);
        const double base = stiefel_constant(p, r);
        auto ratio = [&](double order, double eta) {
            return frac_integral_power_closed({order}, eta, id, cfg).log_value - base;
        };
        for (double alpha : {1.2, 2.0}) {
            for (double beta : {1.5, 2.7}) {
                for (double eta : {0.0, 0.8}) {
                    EXPECT_NEAR(ratio(alpha, eta) + ratio(beta, eta + alpha), ratio(alpha + beta, eta), 1e-12);
                }
            }
        }
    }
}

TEST(OperatorAlgebra, Homogeneity) {
    const int p = 2;
    const auto t = shared_zonal_table(25, p);
    const SpdMatrix zx = detail::grid_zx(p);
    const SpdMatrix scaled(3.0 * zx.matrix());
    const RectConfig cfg = detail::grid_config(p, 3);
    const FracValue a = frac_integral_power_closed({1.4}, 0.6, zx, cfg);
    const FracValue b = frac_integral_power_closed({1.4}, 0.6, scaled, cfg);
    EXPECT_NEAR(b.log_value - a.log_value, p * a.det_exponent * std::log(3.0), 1e-12);
    const FracValue za = frac_integral_zonal_closed({1.4}, Partition{2, 1}, zx, cfg, *t);
    const FracValue zb = frac_integral_zonal_closed({1.4}, Partition{2, 1}, scaled, cfg, *t);
    EXPECT_NEAR(zb.log_value - za.log_value, (p * za.det_exponent + 3) * std::log(3.0), 1e-12);
    const SaigoParams sp{0.3, 0.2, 2.0, 0.5};
    const Truncation fixed{25, 0.0};
    const FracValue sa = saigo_power_closed(sp, {1.4}, zx, cfg, fixed, *t).result;
    const FracValue sb = saigo_power_closed(sp, {1.4}, scaled, cfg, fixed, *t).result;
    EXPECT_NEAR(sb.log_value - sa.log_value, p * sa.det_exponent * std::log(3.0), 1e-12);
}

TEST(OperatorAlgebra, DomainErrors) {
    const RectConfig cfg = RectConfig::identity(2, 2);
    const SpdMatrix zx = SpdMatrix::identity(2);
    EXPECT_THROW(frac_integral_power_closed({0.5}, 0.0, zx, cfg), DomainError);
    EXPECT_THROW(frac_integral_power_closed({1.0}, -0.6, zx, cfg), DomainError);
    EXPECT_THROW(frac_integral_power_closed({1.0}, 0.0, SpdMatrix::identity(3), cfg), DimensionError);
    EXPECT_THROW(frac_integral_direct({1.2}, power_function(0.0), zx, cfg, 100, 1), DomainError);
    const auto t = shared_zonal_table(3, 2);
    EXPECT_EQ(frac_integral_zonal_closed({1.0}, Partition{1, 1, 1}, zx, cfg, *t).value(), 0.0);
}

TEST(Saigo, CollapsesWhenKernelIsTrivial) {
    const Truncation fixed{25, 0.0};
    for (int p : {1, 2, 3}) {
        const auto t = shared_zonal_table(25, p);
        const SpdMatrix zx = detail::grid_zx(p);
        const RectConfig cfg = detail::grid_config(p, p + 1);
        const double power = frac_integral_power_closed({1.2}, 0.4, zx, cfg).value();
        for (const SaigoParams& sp : {SaigoParams{0.0, 0.7, 2.5, 0.4}, SaigoParams{0.9, 0.0, 2.5, 0.4}}) {
            const double saigo = saigo_power_closed(sp, {1.2}, zx, cfg, fixed, *t).result.value();
            EXPECT_LT(relative(saigo, power), 1e-12) << p;
        }
    }
}

TEST(Saigo, TruncatedKernelMonteCarlo) {
    const Truncation fixed{25, 0.0};
    const auto t = shared_zonal_table(25, 1);
    const SaigoParams sp{0.3, 0.2, 2.0, 0.5};
    const SpdMatrix zx = SpdMatrix::diagonal({0.7});
    const RectConfig cfg = RectConfig::identity(1, 1);
    const double closed = saigo_power_closed(sp, {1.0}, zx, cfg, fixed, *t).result.value();
    const McEstimate est = saigo_numeric(sp, {1.0}, zx, cfg, fixed, *t, 200000, 12);
    EXPECT_LT(std::abs(est.z_score(closed)), 3.0);
}

TEST(Saigo, MatrixCaseMonteCarlo) {
    const Truncation fixed{25, 0.0};
    const auto t = shared_zonal_table(25, 2);
    const SaigoParams sp{0.4, 0.3, 2.5, 0.5};
    const SpdMatrix zx = detail::grid_zx(2);
    const RectConfig cfg = detail::grid_config(2, 2);
    const double closed = saigo_power_closed(sp, {1.5}, zx, cfg, fixed, *t).result.value();
    const McEstimate est = saigo_numeric(sp, {1.5}, zx, cfg, fixed, *t, 100000, 13);
    EXPECT_LT(std::abs(est.z_score(closed)), 3.0);
}

TEST(Saigo, NonConvergentSeriesIsAnError) {
    const auto t = shared_zonal_table(25, 1);
    const SaigoParams sp{2.0, 2.0, 0.6, 0.0};
    EXPECT_THROW(saigo_power_closed(sp, {1.0}, SpdMatrix::identity(1), RectConfig::identity(1, 1), Truncation{25, 0.0}, *t),
                 ConvergenceError);
    EXPECT_THROW(saigo_power_closed(SaigoParams{0.1, 0.1, 2.0, -1.2}, {1.0}, SpdMatrix::identity(2),
                                    RectConfig::identity(2, 2), Truncation{25, 0.0}, *shared_zonal_table(25, 2)),
                 DomainError);
}
