#ifndef MVFRAC_FRACOPS_HPP
#define MVFRAC_FRACOPS_HPP

// The left-sided fractional integral operator of matrix argument
//
//   (D^{-alpha} f)(X) = Gamma_p(alpha)^{-1} int_{Z_X > Z_Y > O} |Z_X - Z_Y|^{alpha-(p+1)/2} f(Z_Y) dY
//
// with Y ranging over p x r matrices, its closed forms on power functions and
// zonal polynomials, and the Saigo-type extension with a 2F1 kernel.
//
// After Y -> U = A^{1/2} Y B^{1/2} -> V = U U' -> W = Z_X^{-1/2} V Z_X^{-1/2}:
//
//   D^{-alpha} f = c(p, r, A, B) |Z_X|^{alpha + r/2 - (p+1)/2} / Gamma_p(alpha)
//                  * int_{O<W<I} |I-W|^{alpha-(p+1)/2} |W|^{r/2-(p+1)/2} f(Z_X^{1/2} W Z_X^{1/2}) dW,
//   c(p, r, A, B) = pi^{rp/2} / (|A|^{r/2} |B|^{p/2} Gamma_p(r/2)).

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvfrac/errors.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/hyper.hpp"
#include "mvfrac/sample.hpp"
#include "mvfrac/spd.hpp"
#include "mvfrac/zonal.hpp"

namespace mvfrac {

/// Order alpha of the operator; needs alpha > (p-1)/2.
struct FracOrder {
    double alpha = 1.0;

    void validate(int p) const {
        if (!(alpha > 0.5 * (p - 1))) {
            std::ostringstream os;
            os << "fractional order requires alpha > (p-1)/2, got alpha=" << alpha << " for p=" << p;
            throw DomainError(os.str());
        }
    }
};

struct SaigoParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double eta = 0.0;
};

/// sign * exp(log_value); det_exponent is the power of |Z_X| contained in it.
struct FracValue {
    double log_value = 0.0;
    int sign = 1;
    double det_exponent = 0.0;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_value); }
};

struct SaigoValue {
    FracValue result;
    SeriesResult series;
};

/// Test function of a symmetric matrix argument. The log-determinant is passed
/// alongside so near-singular arguments keep full relative accuracy.
using MatrixFunction = std::function<double(const Eigen::MatrixXd& arg, double log_det)>;

inline MatrixFunction power_function(double eta) {
    return [eta](const Eigen::MatrixXd&, double log_det) { return std::exp(eta * log_det); };
}

/// C_K as a MatrixFunction; `table` must outlive the returned object.
inline MatrixFunction zonal_function(Partition K, const ZonalTable& table) {
    return [K = std::move(K), &table](const Eigen::MatrixXd& arg, double) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(arg, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& e = es.eigenvalues();
        const std::vector<double> eigs(e.data(), e.data() + e.size());
        return zonal_eval(K, eigs, table);
    };
}

namespace detail {

inline void check_frac_inputs(const FracOrder& alpha, const SpdMatrix& z_x, const RectConfig& cfg) {
    if (z_x.dim() != cfg.p()) throw DimensionError("Z_X must be p x p for the given configuration");
    alpha.validate(cfg.p());
}

/// log c(p, r, A, B).
inline double log_rect_constant(const RectConfig& cfg) {
    return stiefel_constant(cfg.p(), cfg.r()) - cfg.log_jacobian();
}

/// Integral over O < W < I of a kernel with |W|^{w_shape-(p+1)/2} |I-W|^{c_shape-(p+1)/2}
/// factors. Kernels without boundary singularities use uniform rejection
/// sampling (p <= 3); otherwise a matrix-beta proposal with shapes strictly
/// between (p-1)/2 and the singular exponent keeps the weights bounded and the
/// variance finite.
inline McEstimate integrate_cone_kernel(const ConeIntegrand& g, int p, double w_shape,
                                        double c_shape, std::uint64_t n, std::uint64_t seed) {
    const double flat = 0.5 * (p + 1);
    if (w_shape >= flat && c_shape >= flat && p <= 3) return mc_integrate_unit_cone(g, p, n, seed);
    auto proposal = [&](double s) { return s >= flat ? flat : 0.5 * (0.5 * (p - 1) + s); };
    return mc_integrate_beta_cone(g, p, proposal(w_shape), proposal(c_shape), n, seed);
}

inline Eigen::MatrixXd congruence(const Eigen::MatrixXd& s, const Eigen::MatrixXd& w) {
    Eigen::MatrixXd out = s * w * s;
    return 0.5 * (out + out.transpose());
}

}  // namespace detail

/// D^{-alpha} |Z_X|^eta
///   = c(p,r,A,B) Gamma_p(r/2 + eta) / Gamma_p(alpha + r/2 + eta) |Z_X|^{alpha + r/2 + eta - (p+1)/2},
/// valid for r/2 + eta > (p-1)/2.
inline FracValue frac_integral_power_closed(const FracOrder& alpha, double eta, const SpdMatrix& z_x,
                                            const RectConfig& cfg) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p();
    const double half_r = 0.5 * cfg.r();
    if (!(half_r + eta > 0.5 * (p - 1))) {
        std::ostringstream os;
        os << "power input requires r/2 + eta > (p-1)/2, got r/2 + eta = " << half_r + eta;
        throw DomainError(os.str());
    }
    FracValue out;
    out.det_exponent = alpha.alpha + half_r + eta - 0.5 * (p + 1);
    out.log_value = detail::log_rect_constant(cfg) + log_matrix_gamma(p, half_r + eta) -
                    log_matrix_gamma(p, alpha.alpha + half_r + eta) + out.det_exponent * z_x.log_det();
    return out;
}

/// D^{-alpha} C_K(Z_X)
///   = pi^{rp/2} / (|A|^{r/2}|B|^{p/2} Gamma_p(alpha + r/2)) (r/2)_K / (alpha + r/2)_K
///     C_K(Z_X) |Z_X|^{alpha + r/2 - (p+1)/2}.
inline FracValue frac_integral_zonal_closed(const FracOrder& alpha, const Partition& K,
                                            const SpdMatrix& z_x, const RectConfig& cfg,
                                            const ZonalTable& table) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p();
    const double half_r = 0.5 * cfg.r();
    const double zon = zonal_eval(K, z_x, table);
    FracValue out;
    out.det_exponent = alpha.alpha + half_r - 0.5 * (p + 1);
    if (zon == 0.0) {
        out.sign = 0;
        out.log_value = 0.0;
        return out;
    }
    const SignedLog ratio = gen_pochhammer_log(half_r, K) / gen_pochhammer_log(alpha.alpha + half_r, K);
    const SignedLog total = ratio * SignedLog{std::log(std::abs(zon)), zon > 0 ? 1 : -1};
    out.sign = total.sign;
    out.log_value = 0.5 * cfg.r() * p * std::log(std::numbers::pi) - cfg.log_jacobian() -
                    log_matrix_gamma(p, alpha.alpha + half_r) + total.log_abs +
                    out.det_exponent * z_x.log_det();
    return out;
}

/// Monte Carlo evaluation of the reduced integral over O < W < I for an
/// arbitrary bounded test function f. Deterministic for a fixed seed.
inline McEstimate frac_integral_numeric(const FracOrder& alpha, const MatrixFunction& f,
                                        const SpdMatrix& z_x, const RectConfig& cfg,
                                        std::uint64_t samples, std::uint64_t seed) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p();
    const double half_r = 0.5 * cfg.r();
    const double flat = 0.5 * (p + 1);
    const double log_zx = z_x.log_det();
    const Eigen::MatrixXd zx_sqrt = z_x.sqrt_matrix();
    const double log_pref = detail::log_rect_constant(cfg) - log_matrix_gamma(p, alpha.alpha) +
                            (alpha.alpha + half_r - flat) * log_zx;
    const double pref = std::exp(log_pref);
    const ConeIntegrand g = [&](const ConePoint& pt) {
        const double kernel =
            std::exp((alpha.alpha - flat) * pt.log_det_complement + (half_r - flat) * pt.log_det);
        return pref * kernel * f(detail::congruence(zx_sqrt, pt.w), log_zx + pt.log_det);
    };
    return detail::integrate_cone_kernel(g, p, half_r, alpha.alpha, samples, seed);
}

/// Monte Carlo evaluation straight from the defining integral over p x r
/// matrices Y: Z_Y = A^{1/2} Y B Y' A^{1/2} is formed explicitly and the
/// kernel |Z_X - Z_Y|^{alpha-(p+1)/2} evaluated as written. Y is sampled as
/// A^{-1/2} Z_X^{1/2} U B^{-1/2} with U uniform on the ball U U' < I, so
/// dY = |Z_X|^{r/2} |A|^{-r/2} |B|^{-p/2} dU. Needs alpha >= (p+1)/2 for a
/// bounded kernel.
inline McEstimate frac_integral_direct(const FracOrder& alpha, const MatrixFunction& f,
                                       const SpdMatrix& z_x, const RectConfig& cfg,
                                       std::uint64_t samples, std::uint64_t seed) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p(), r = cfg.r();
    const double flat = 0.5 * (p + 1);
    if (alpha.alpha < flat)
        throw DomainError("frac_integral_direct: needs alpha >= (p+1)/2 for a bounded kernel");
    const Eigen::MatrixXd to_y = cfg.a().inv_sqrt_matrix() * z_x.sqrt_matrix();
    const Eigen::MatrixXd b_is = cfg.b().inv_sqrt_matrix();
    const double log_jac = 0.5 * r * z_x.log_det() - cfg.log_jacobian();
    const double scale = std::exp(log_jac - log_matrix_gamma(p, alpha.alpha));
    const auto h = [&](const Eigen::MatrixXd& u) {
        const Eigen::MatrixXd y = to_y * u * b_is;
        const Eigen::MatrixXd ay = cfg.a_sqrt() * y;
        Eigen::MatrixXd z_y = ay * cfg.b().matrix() * ay.transpose();
        z_y = 0.5 * (z_y + z_y.transpose());
        const double gap = (z_x.matrix() - z_y).determinant();
        const double det_y = z_y.determinant();
        if (!(gap > 0.0) || !(det_y > 0.0)) return 0.0;
        return scale * std::pow(gap, alpha.alpha - flat) * f(z_y, std::log(det_y));
    };
    return mc_integrate_rect_ball(h, p, r, samples, seed);
}

/// D^{-alpha}[2F1(a, b; c; I - Z_X^{-1/2} Z_Y Z_X^{-1/2}) |Z_Y|^eta]
///   = c(p,r,A,B) Gamma_p(eta + r/2) / Gamma_p(alpha + eta + r/2) |Z_X|^{alpha + eta + r/2 - (p+1)/2}
///     3F2(a, b, alpha; c, alpha + eta + r/2; I).
inline SaigoValue saigo_power_closed(const SaigoParams& sp, const FracOrder& alpha, const SpdMatrix& z_x,
                                     const RectConfig& cfg, const Truncation& trunc,
                                     const ZonalTable& table) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p();
    const double half_r = 0.5 * cfg.r();
    if (!(sp.eta + half_r > 0.5 * (p - 1))) {
        std::ostringstream os;
        os << "saigo: requires eta + r/2 > (p-1)/2, got " << sp.eta + half_r;
        throw DomainError(os.str());
    }
    detail::check_denominators(HyperParams{{}, {sp.c}}, p, trunc.k_max);
    const double top = alpha.alpha + sp.eta + half_r;
    SaigoValue out;
    out.series = hyper_pfq_identity(HyperParams{{sp.a, sp.b, alpha.alpha}, {sp.c, top}}, p, trunc, table);
    out.result.det_exponent = top - 0.5 * (p + 1);
    out.result.log_value = detail::log_rect_constant(cfg) + log_matrix_gamma(p, sp.eta + half_r) -
                           log_matrix_gamma(p, top) + out.result.det_exponent * z_x.log_det();
    if (out.series.value == 0.0) {
        out.result.sign = 0;
    } else {
        out.result.sign = out.series.value > 0 ? 1 : -1;
        out.result.log_value += std::log(std::abs(out.series.value));
    }
    return out;
}

/// Monte Carlo oracle for the Saigo operator on |Z_Y|^eta: the 2F1 kernel is
/// expanded in zonal polynomials and summed to exactly trunc.k_max (no early
/// stop), then integrated over O < W < I.
inline McEstimate saigo_numeric(const SaigoParams& sp, const FracOrder& alpha, const SpdMatrix& z_x,
                                const RectConfig& cfg, const Truncation& trunc, const ZonalTable& table,
                                std::uint64_t samples, std::uint64_t seed) {
    detail::check_frac_inputs(alpha, z_x, cfg);
    const int p = cfg.p();
    const double half_r = 0.5 * cfg.r();
    const double flat = 0.5 * (p + 1);
    const double log_zx = z_x.log_det();
    const double w_shape = sp.eta + half_r;
    const double log_pref = detail::log_rect_constant(cfg) - log_matrix_gamma(p, alpha.alpha) +
                            (alpha.alpha + w_shape - flat) * log_zx;
    const double pref = std::exp(log_pref);
    const HyperParams kernel_params{{sp.a, sp.b}, {sp.c}};
    const Truncation fixed{trunc.k_max, 0.0};
    const ConeIntegrand g = [&](const ConePoint& pt) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt.w, Eigen::EigenvaluesOnly);
        std::vector<double> eigs(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) eigs[static_cast<std::size_t>(i)] = 1.0 - es.eigenvalues()(i);
        const double kernel = detail::sum_series(kernel_params, eigs, fixed, table).value;
        const double weight =
            std::exp((alpha.alpha - flat) * pt.log_det_complement + (w_shape - flat) * pt.log_det);
        return pref * weight * kernel;
    };
    return detail::integrate_cone_kernel(g, p, w_shape, alpha.alpha, samples, seed);
}

}  // namespace mvfrac

#endif  // MVFRAC_FRACOPS_HPP
