#ifndef MVFRAC_SAMPLE_HPP
#define MVFRAC_SAMPLE_HPP

// Samplers over matrix cones and the Monte Carlo integration oracle.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "mvfrac/errors.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/rng.hpp"
#include "mvfrac/spd.hpp"

namespace mvfrac {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;

    /// Zero when the estimate is exact and matches to within 1e-12 relative.
    double z_score(double expected) const {
        const double diff = value - expected;
        if (std_error > 0.0) return diff / std_error;
        if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(expected))) return 0.0;
        return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
};

/// Shape of the matrix-variate gamma density |W|^{a-(p+1)/2} e^{-tr W} / Gamma_p(a).
struct MatrixGammaSpec {
    int p = 1;
    double shape = 1.0;

    void validate() const {
        if (p < 1) throw DimensionError("MatrixGammaSpec: p must be >= 1");
        if (!(shape > 0.5 * (p - 1))) {
            std::ostringstream os;
            os << "MatrixGammaSpec: requires shape > (p-1)/2, got " << shape << " for p=" << p;
            throw DomainError(os.str());
        }
    }
};

/// Welford accumulator; merge() is Chan's pairwise update.
struct RunningStats {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error_of_mean() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

inline constexpr std::uint64_t mc_batch_size = 1u << 14;

/// Runs `body(rng, count, stats)` over fixed-size batches with seeds derived
/// from (seed, batch index) and merges the batch statistics in index order,
/// so the result does not depend on the number of worker threads
/// (`workers` = 0 uses the hardware concurrency).
template <class Body>
RunningStats run_batches(std::uint64_t n, std::uint64_t seed, Body&& body, unsigned workers = 0) {
    const std::uint64_t batches = (n + mc_batch_size - 1) / mc_batch_size;
    std::vector<RunningStats> partial(batches);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < batches; b = next++) {
            const std::uint64_t count = std::min(mc_batch_size, n - b * mc_batch_size);
            Rng rng(derive_seed(seed, b));
            body(rng, count, partial[b]);
        }
    };
    const unsigned hw = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    const auto threads = static_cast<unsigned>(std::min<std::uint64_t>(hw, batches));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    RunningStats total;
    for (const auto& s : partial) total.merge(s);
    return total;
}

namespace detail {

/// Bartlett factor: lower triangular T with T_jj^2 ~ Gamma(a - (j-1)/2) and
/// N(0, 1/2) below the diagonal, so that T T' has the matrix-gamma density.
inline Eigen::MatrixXd bartlett_factor(Rng& rng, int p, double shape) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(p, p);
    const double sd = std::sqrt(0.5);
    for (int i = 0; i < p; ++i) {
        t(i, i) = std::sqrt(rng.gamma(shape - 0.5 * i));
        for (int j = 0; j < i; ++j) t(i, j) = sd * rng.normal();
    }
    return t;
}

inline double log_det_triangular_sq(const Eigen::MatrixXd& t) {
    return 2.0 * t.diagonal().array().abs().log().sum();
}

}  // namespace detail

inline std::vector<SpdMatrix> sample_matrix_gamma(const MatrixGammaSpec& spec, std::uint64_t n,
                                                  std::uint64_t seed) {
    spec.validate();
    Rng rng(seed);
    std::vector<SpdMatrix> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Eigen::MatrixXd t = detail::bartlett_factor(rng, spec.p, spec.shape);
        out.emplace_back(t * t.transpose());
    }
    return out;
}

/// X = A^{-1/2} G B^{-1/2} with G_ij ~ N(0, 1/2): the density of X is
/// |A|^{r/2}|B|^{p/2} pi^{-rp/2} exp(-tr(A^{1/2} X B X' A^{1/2})).
inline std::vector<RectMatrix> sample_rect_exponential(const RectConfig& cfg, std::uint64_t n,
                                                       std::uint64_t seed) {
    const int p = cfg.p(), r = cfg.r();
    const Eigen::MatrixXd a_is = cfg.a().inv_sqrt_matrix();
    const Eigen::MatrixXd b_is = cfg.b().inv_sqrt_matrix();
    const double sd = std::sqrt(0.5);
    Rng rng(seed);
    std::vector<RectMatrix> out;
    out.reserve(n);
    for (std::uint64_t s = 0; s < n; ++s) {
        Eigen::MatrixXd g(p, r);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < r; ++j) g(i, j) = sd * rng.normal();
        out.emplace_back(a_is * g * b_is);
    }
    return out;
}

/// A point of the unit cone O < W < I with accurately carried log|W| and log|I - W|.
struct ConePoint {
    Eigen::MatrixXd w;
    double log_det = 0.0;
    double log_det_complement = 0.0;
};

using ConeIntegrand = std::function<double(const ConePoint&)>;

namespace detail {

inline bool cone_point_from(const Eigen::MatrixXd& w, ConePoint& out) {
    const auto p = w.rows();
    Eigen::LLT<Eigen::MatrixXd> lw(w);
    if (lw.info() != Eigen::Success) return false;
    Eigen::LLT<Eigen::MatrixXd> lc(Eigen::MatrixXd::Identity(p, p) - w);
    if (lc.info() != Eigen::Success) return false;
    const Eigen::MatrixXd lw_l = lw.matrixL();
    const Eigen::MatrixXd lc_l = lc.matrixL();
    out.w = w;
    out.log_det = log_det_triangular_sq(lw_l);
    out.log_det_complement = log_det_triangular_sq(lc_l);
    return true;
}

/// Proposal from the box [0,1] (diagonal) x [-1,1] (off-diagonal).
inline Eigen::MatrixXd cone_box_draw(Rng& rng, int p) {
    Eigen::MatrixXd w(p, p);
    for (int i = 0; i < p; ++i) {
        w(i, i) = rng.uniform();
        for (int j = 0; j < i; ++j) w(i, j) = w(j, i) = rng.uniform(-1.0, 1.0);
    }
    return w;
}

inline double cone_box_volume(int p) { return std::ldexp(1.0, p * (p - 1) / 2); }

inline void check_cone_dim(int p) {
    if (p < 1 || p > 3)
        throw DomainError("unit-cone rejection sampling supports p in {1,2,3}, got p=" +
                          std::to_string(p));
}

}  // namespace detail

/// Whether O < W < I.
inline bool in_unit_cone(const SpdMatrix& w) {
    ConePoint tmp;
    return detail::cone_point_from(w.matrix(), tmp);
}

struct UniformConeSample {
    std::vector<SpdMatrix> samples;
    std::uint64_t proposals = 0;
    double acceptance_rate() const {
        return proposals ? static_cast<double>(samples.size()) / static_cast<double>(proposals) : 0.0;
    }
};

/// Uniform draws (Lebesgue measure on the p(p+1)/2 free entries) from O < W < I,
/// by rejection from the entrywise box.
inline UniformConeSample sample_uniform_spd_unit(int p, std::uint64_t n, std::uint64_t seed) {
    detail::check_cone_dim(p);
    Rng rng(seed);
    UniformConeSample out;
    out.samples.reserve(n);
    ConePoint pt;
    while (out.samples.size() < n) {
        const Eigen::MatrixXd w = detail::cone_box_draw(rng, p);
        ++out.proposals;
        if (detail::cone_point_from(w, pt)) out.samples.emplace_back(w);
        if (out.proposals >= 1000000 && out.acceptance_rate() < 1e-4)
            throw ResourceError("sample_uniform_spd_unit: acceptance rate below 1e-4");
    }
    return out;
}

/// Integral of g over O < W < I: plain Monte Carlo over the proposal box with
/// g extended by zero outside the cone.
inline McEstimate mc_integrate_unit_cone(const ConeIntegrand& g, int p, std::uint64_t n,
                                         std::uint64_t seed) {
    detail::check_cone_dim(p);
    if (n < 2) throw DomainError("mc_integrate_unit_cone: need at least 2 samples");
    const double vol = detail::cone_box_volume(p);
    const RunningStats st = run_batches(n, seed, [&](Rng& rng, std::uint64_t count, RunningStats& acc) {
        ConePoint pt;
        for (std::uint64_t i = 0; i < count; ++i) {
            const Eigen::MatrixXd w = detail::cone_box_draw(rng, p);
            acc.add(detail::cone_point_from(w, pt) ? vol * g(pt) : 0.0);
        }
    });
    return {st.mean, st.std_error_of_mean(), st.n, seed};
}

/// Integral of g over O < W < I by importance sampling from the type-1 matrix
/// beta(a, b) law, drawn as W = S^{-1/2} G1 S^{-1/2}, S = G1 + G2 with G1, G2
/// matrix-gamma of shapes a and b. Works for any p.
inline McEstimate mc_integrate_beta_cone(const ConeIntegrand& g, int p, double a, double b,
                                         std::uint64_t n, std::uint64_t seed) {
    MatrixGammaSpec{p, a}.validate();
    MatrixGammaSpec{p, b}.validate();
    if (n < 2) throw DomainError("mc_integrate_beta_cone: need at least 2 samples");
    const double log_norm = log_matrix_beta(p, a, b);
    const double ea = a - 0.5 * (p + 1), eb = b - 0.5 * (p + 1);
    const RunningStats st = run_batches(n, seed, [&](Rng& rng, std::uint64_t count, RunningStats& acc) {
        ConePoint pt;
        for (std::uint64_t i = 0; i < count; ++i) {
            const Eigen::MatrixXd t1 = detail::bartlett_factor(rng, p, a);
            const Eigen::MatrixXd t2 = detail::bartlett_factor(rng, p, b);
            const Eigen::MatrixXd g1 = t1 * t1.transpose();
            const Eigen::MatrixXd s = g1 + t2 * t2.transpose();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
            const Eigen::VectorXd lam = es.eigenvalues();
            const Eigen::MatrixXd s_is =
                es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
            const double log_s = lam.array().log().sum();
            Eigen::MatrixXd w = s_is * g1 * s_is;
            pt.w = 0.5 * (w + w.transpose());
            pt.log_det = detail::log_det_triangular_sq(t1) - log_s;
            pt.log_det_complement = detail::log_det_triangular_sq(t2) - log_s;
            const double log_density = ea * pt.log_det + eb * pt.log_det_complement - log_norm;
            acc.add(g(pt) * std::exp(-log_density));
        }
    });
    return {st.mean, st.std_error_of_mean(), st.n, seed};
}

/// Integral of h over the p x r ball {U : U U' < I}, by Monte Carlo over the
/// box [-1, 1]^{pr} (every row of such U has norm < 1).
inline McEstimate mc_integrate_rect_ball(const std::function<double(const Eigen::MatrixXd&)>& h,
                                         int p, int r, std::uint64_t n, std::uint64_t seed) {
    if (p < 1 || r < p) throw DimensionError("mc_integrate_rect_ball: requires r >= p >= 1");
    if (n < 2) throw DomainError("mc_integrate_rect_ball: need at least 2 samples");
    const double vol = std::ldexp(1.0, p * r);
    const RunningStats st = run_batches(n, seed, [&](Rng& rng, std::uint64_t count, RunningStats& acc) {
        Eigen::MatrixXd u(p, r);
        for (std::uint64_t s = 0; s < count; ++s) {
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < r; ++j) u(i, j) = rng.uniform(-1.0, 1.0);
            Eigen::LLT<Eigen::MatrixXd> llt(Eigen::MatrixXd::Identity(p, p) - u * u.transpose());
            acc.add(llt.info() == Eigen::Success ? vol * h(u) : 0.0);
        }
    });
    return {st.mean, st.std_error_of_mean(), st.n, seed};
}

/// Kolmogorov-Smirnov statistic of `xs` against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Asymptotic 1% critical value of the KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double expected = 0.0;
    double z_score = 0.0;
    bool pass = false;
};

struct SumDensityReport {
    int p = 0;
    double shape = 0.0;
    std::vector<CheckResult> checks;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
    }
};

/// Checks that U = Z_1 + Z_2, with Z_j the rectangular transforms of
/// independent rectangular-exponential draws, is matrix-gamma with shape
/// (r1 + r2)/2: trace and determinant moments (|z| < 4) and, for p = 1, a
/// KS test at the 1% level.
inline SumDensityReport verify_sum_density(const RectConfig& cfg1, const RectConfig& cfg2,
                                           std::uint64_t n, std::uint64_t seed) {
    if (cfg1.p() != cfg2.p()) throw DimensionError("verify_sum_density: configs differ in p");
    if (n < 2) throw DomainError("verify_sum_density: need at least 2 samples");
    const int p = cfg1.p();
    const double shape = 0.5 * (cfg1.r() + cfg2.r());
    const auto x1 = sample_rect_exponential(cfg1, n, derive_seed(seed, 0));
    const auto x2 = sample_rect_exponential(cfg2, n, derive_seed(seed, 1));

    RunningStats tr, det;
    std::vector<double> scalars;
    if (p == 1) scalars.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const Eigen::MatrixXd u = rect_transform(x1[i], cfg1).matrix() + rect_transform(x2[i], cfg2).matrix();
        tr.add(u.trace());
        det.add(u.determinant());
        if (p == 1) scalars.push_back(u(0, 0));
    }

    SumDensityReport rep;
    rep.p = p;
    rep.shape = shape;
    auto moment = [](std::string name, const RunningStats& s, double expected) {
        CheckResult c{std::move(name), s.mean, expected, 0.0, false};
        c.z_score = (s.mean - expected) / s.std_error_of_mean();
        c.pass = std::abs(c.z_score) < 4.0;
        return c;
    };
    rep.checks.push_back(moment("mean_trace", tr, p * shape));
    rep.checks.push_back(
        moment("mean_det", det, std::exp(log_matrix_gamma(p, shape + 1.0) - log_matrix_gamma(p, shape))));
    if (p == 1) {
        const double d = ks_statistic(std::move(scalars),
                                      [shape](double x) { return boost::math::gamma_p(shape, x); });
        const double crit = ks_critical_1pct(n);
        rep.checks.push_back({"ks_scalar_gamma", d, crit, d / crit, d < crit});
    }
    return rep;
}

}  // namespace mvfrac

#endif  // MVFRAC_SAMPLE_HPP
