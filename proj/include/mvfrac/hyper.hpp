#ifndef MVFRAC_HYPER_HPP
#define MVFRAC_HYPER_HPP

// Hypergeometric functions of matrix argument as truncated zonal series
//   pFq(a; b; Z) = sum_k sum_{K |- k} [prod (a_i)_K / prod (b_i)_K] C_K(Z) / k!

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mvfrac/errors.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/spd.hpp"
#include "mvfrac/zonal.hpp"

namespace mvfrac {

struct HyperParams {
    std::vector<double> numerator;
    std::vector<double> denominator;
};

struct Truncation {
    int k_max = 25;
    /// Stop early once the geometric tail estimate falls below
    /// tail_tol * max(1, |sum|). Zero disables early stopping.
    double tail_tol = 1e-10;
};

struct SeriesResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    int k_used = 0;
    /// |s_k| / |s_{k-1}| for the last two weight sums.
    double ratio = 0.0;
    bool converged = true;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

inline void check_denominators(const HyperParams& params, int p, int k_max) {
    for (double b : params.denominator) {
        for (int j = 0; j < p && j < k_max; ++j) {
            const int longest = k_max / (j + 1);
            for (int i = 0; i < longest; ++i) {
                if (b - 0.5 * j + i == 0.0) {
                    std::ostringstream os;
                    os << "denominator parameter " << b
                       << " makes (b)_K vanish for a partition of weight <= " << k_max;
                    throw DomainError(os.str());
                }
            }
        }
    }
}

/// [prod (a_i)_K / prod (b_i)_K] / k!, multiplied cell by cell to keep the
/// partial products in range.
inline double series_coefficient(const HyperParams& params, const Partition& K) {
    double acc = 1.0;
    int cell = 0;
    for (std::size_t j = 0; j < K.length(); ++j) {
        for (int i = 0; i < K[j]; ++i) {
            const double shift = i - 0.5 * static_cast<double>(j);
            double f = 1.0 / ++cell;
            for (double a : params.numerator) f *= a + shift;
            for (double b : params.denominator) f /= b + shift;
            acc *= f;
        }
    }
    return acc;
}

inline SeriesResult sum_series(const HyperParams& params, std::span<const double> eigs,
                               const Truncation& trunc, const ZonalTable& table) {
    if (trunc.k_max < 1) throw DomainError("Truncation: k_max must be >= 1");
    if (trunc.k_max > table.k_max())
        throw DomainError("Truncation: k_max=" + std::to_string(trunc.k_max) +
                          " exceeds zonal table k_max=" + std::to_string(table.k_max()));
    if (eigs.size() > static_cast<std::size_t>(table.p()))
        throw DimensionError("hypergeometric series: argument dimension exceeds zonal table p");
    check_denominators(params, static_cast<int>(eigs.size()), trunc.k_max);

    SeriesResult out;
    CompensatedSum total;
    total.add(1.0);
    double prev = 1.0;
    int growth = 0;
    for (int k = 1; k <= trunc.k_max; ++k) {
        const std::vector<double> zon = table.evaluate_weight(k, eigs);
        const auto& parts = table.partitions(k);
        CompensatedSum weight_sum;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].length() > eigs.size() || zon[i] == 0.0) continue;
            weight_sum.add(series_coefficient(params, parts[i]) * zon[i]);
        }
        const double s = weight_sum.value();
        total.add(s);
        out.k_used = k;

        growth = (prev != 0.0 && std::abs(s) > std::abs(prev)) ? growth + 1 : 0;
        if (growth >= 5) {
            std::ostringstream os;
            os << "hypergeometric series diverges: weight sums grew for 5 consecutive k (k=" << k
               << ", |s_k|=" << std::abs(s) << ")";
            throw ConvergenceError(os.str());
        }

        if (s == 0.0)
            out.ratio = 0.0;
        else if (prev == 0.0)
            out.ratio = std::numeric_limits<double>::infinity();
        else
            out.ratio = std::abs(s) / std::abs(prev);
        if (out.ratio < 1.0) {
            out.converged = true;
            out.tail_estimate = std::abs(s) * out.ratio / (1.0 - out.ratio);
        } else {
            out.converged = false;
            out.tail_estimate = std::numeric_limits<double>::infinity();
        }
        prev = s;

        if (k >= 2 && trunc.tail_tol > 0.0 && out.converged &&
            out.tail_estimate <= trunc.tail_tol * std::max(1.0, std::abs(total.value())))
            break;
    }
    out.value = total.value();
    return out;
}

}  // namespace detail

/// Truncated series at a symmetric argument given by its eigenvalues. When
/// the series is of 2F1 type or wider, the spectral radius must be < 1.
inline SeriesResult hyper_pfq(const HyperParams& params, std::span<const double> eigs,
                              const Truncation& trunc, const ZonalTable& table) {
    if (params.numerator.size() >= params.denominator.size() + 1) {
        double radius = 0.0;
        for (double e : eigs) radius = std::max(radius, std::abs(e));
        if (!(radius < 1.0)) {
            std::ostringstream os;
            os << "hyper_pfq: requires spectral radius < 1, got " << radius;
            throw DomainError(os.str());
        }
    }
    return detail::sum_series(params, eigs, trunc, table);
}

inline SeriesResult hyper_pfq(const HyperParams& params, const SpdMatrix& z, const Truncation& trunc,
                              const ZonalTable& table) {
    const std::vector<double> eigs = z.eigenvalue_list();
    return hyper_pfq(params, eigs, trunc, table);
}

/// Series at the identity argument, e.g. 3F2(a, b, alpha; c, d; I). No
/// convergence condition is known in closed form, so the final weight-sum
/// ratio must be < 0.95 or ConvergenceError is raised.
inline SeriesResult hyper_pfq_identity(const HyperParams& params, int p, const Truncation& trunc,
                                       const ZonalTable& table) {
    const std::vector<double> ones(static_cast<std::size_t>(p), 1.0);
    SeriesResult res = detail::sum_series(params, ones, trunc, table);
    if (!(res.ratio < 0.95)) {
        std::ostringstream os;
        os << "series at the identity did not converge: weight-sum ratio " << res.ratio
           << " at k=" << res.k_used << " (need < 0.95)";
        throw ConvergenceError(os.str());
    }
    return res;
}

/// 2F1(a + r/2, b; c + r/2; Z_Y), the rectangular-argument Gauss function.
inline SeriesResult gauss_2f1_rect(double a, double b, double c, const RectConfig& cfg,
                                   const SpdMatrix& z_y, const Truncation& trunc,
                                   const ZonalTable& table) {
    const int p = cfg.p();
    const double r = cfg.r();
    if (z_y.dim() != p) throw DimensionError("gauss_2f1_rect: Z_Y must be p x p");
    if (!(c - a > 0.5 * (p - 1))) {
        std::ostringstream os;
        os << "gauss_2f1_rect: requires c - a > (p-1)/2, got c - a = " << c - a;
        throw DomainError(os.str());
    }
    if (!(a > -0.5 * r + 0.5 * (p - 1))) {
        std::ostringstream os;
        os << "gauss_2f1_rect: requires a > -r/2 + (p-1)/2, got a = " << a;
        throw DomainError(os.str());
    }
    if (!(z_y.spectral_radius() < 1.0))
        throw DomainError("gauss_2f1_rect: requires O < Z_Y < I");
    return hyper_pfq(HyperParams{{a + 0.5 * r, b}, {c + 0.5 * r}}, z_y, trunc, table);
}

/// |I + (q-1) Z|^{-1/(q-1)} from the eigenvalues of Z (each >= 0).
inline double pathway_det_limit(double q, std::span<const double> eigs) {
    if (!(q > 1.0)) throw DomainError("pathway_det_limit: requires q > 1");
    const double eps = q - 1.0;
    double acc = 0.0;
    for (double lam : eigs) {
        if (lam < 0.0) throw DomainError("pathway_det_limit: Z must be positive semidefinite");
        acc += std::log1p(eps * lam);
    }
    return std::exp(-acc / eps);
}

inline double pathway_det_limit(double q, const SpdMatrix& z) {
    const std::vector<double> eigs = z.eigenvalue_list();
    return pathway_det_limit(q, eigs);
}

}  // namespace mvfrac

#endif  // MVFRAC_HYPER_HPP
