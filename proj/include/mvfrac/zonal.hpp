#ifndef MVFRAC_ZONAL_HPP
#define MVFRAC_ZONAL_HPP

// Zonal polynomials C_K in the monomial symmetric basis.
//
// C_K = sum_{M <= K} c_{K,M} m_M with the coefficients produced by the
// Laplace-Beltrami eigenfunction recurrence
//
//   c_{K,L} = sum_{(i<j, t)} (l_i - l_j + 2t) c_{K,M} / (rho_K - rho_L),
//   M = sort(l_1, .., l_i + t, .., l_j - t, ..),  rho_K = sum_i k_i (k_i - i),
//
// run top-down from c_{K,K} = 1, then rescaled so that sum_{K |- k} C_K = (tr Z)^k.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mvfrac/errors.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/spd.hpp"

namespace mvfrac {

inline constexpr int default_kmax_ceiling = 30;

/// Zonal table ceiling; MVFRAC_KMAX_CEILING overrides the default of 30.
inline int kmax_ceiling() {
    if (const char* env = std::getenv("MVFRAC_KMAX_CEILING")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return default_kmax_ceiling;
}

/// m_M(x) = sum over distinct permutations of the exponent vector.
inline double monomial_symmetric(const Partition& m, std::span<const double> x) {
    const std::size_t n = x.size();
    if (m.length() > n) return 0.0;
    std::vector<int> exps(n, 0);
    for (std::size_t i = 0; i < m.length(); ++i) exps[i] = m[i];
    std::sort(exps.begin(), exps.end());
    double total = 0.0;
    do {
        double term = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (exps[i] != 0) term *= std::pow(x[i], exps[i]);
        total += term;
    } while (std::next_permutation(exps.begin(), exps.end()));
    return total;
}

class ZonalTable {
public:
    /// Coefficients for one weight k: row = C_K, column = m_M, both indexed by
    /// `parts` (reverse-lexicographic, at most p parts).
    struct Weight {
        std::vector<Partition> parts;
        std::map<std::vector<int>, std::size_t> index;
        Eigen::MatrixXd coef;
    };

    ZonalTable(int k_max, int p, std::vector<Weight> weights)
        : k_max_(k_max), p_(p), weights_(std::move(weights)) {}

    int k_max() const noexcept { return k_max_; }
    int p() const noexcept { return p_; }

    const Weight& weight(int k) const {
        if (k < 0 || k > k_max_)
            throw DomainError("zonal table has no entries of weight " + std::to_string(k) +
                              " (k_max=" + std::to_string(k_max_) + ")");
        return weights_[static_cast<std::size_t>(k)];
    }

    const std::vector<Partition>& partitions(int k) const { return weight(k).parts; }

    /// Coefficient of m_M in C_K; zero when M is not dominated by K.
    double coefficient(const Partition& K, const Partition& M) const {
        if (K.weight() != M.weight()) return 0.0;
        const Weight& w = weight(K.weight());
        const auto ki = w.index.find(K.parts());
        const auto mi = w.index.find(M.parts());
        if (ki == w.index.end())
            throw DomainError("zonal table (p=" + std::to_string(p_) + ") has no entry for " +
                              K.to_string());
        if (mi == w.index.end()) return 0.0;
        return w.coef(static_cast<Eigen::Index>(ki->second), static_cast<Eigen::Index>(mi->second));
    }

    /// C_K(x) for every K |- k in `partitions(k)` order, x = eigenvalues.
    std::vector<double> evaluate_weight(int k, std::span<const double> x) const {
        const Weight& w = weight(k);
        if (x.size() > static_cast<std::size_t>(p_))
            throw DimensionError("zonal table built for p=" + std::to_string(p_) +
                                 ", argument has dimension " + std::to_string(x.size()));
        const auto n = static_cast<Eigen::Index>(w.parts.size());
        Eigen::VectorXd m(n);
        for (Eigen::Index j = 0; j < n; ++j)
            m(j) = monomial_symmetric(w.parts[static_cast<std::size_t>(j)], x);
        Eigen::VectorXd c = w.coef * m;
        return {c.data(), c.data() + n};
    }

private:
    int k_max_;
    int p_;
    std::vector<Weight> weights_;
};

namespace detail {

inline double rho(const Partition& K) {
    double acc = 0.0;
    for (std::size_t i = 0; i < K.length(); ++i)
        acc += static_cast<double>(K[i]) * (K[i] - static_cast<double>(i + 1));
    return acc;
}

// k! / prod l_i!, accumulated as a product of binomials
inline double multinomial(const Partition& L) {
    double v = 1.0;
    int seen = 0;
    for (int l : L.parts())
        for (int i = 1; i <= l; ++i) v = v * ++seen / i;
    return v;
}

inline ZonalTable::Weight build_weight(int k, int p) {
    ZonalTable::Weight w;
    w.parts = partitions_of(k, p);
    const std::size_t n = w.parts.size();
    for (std::size_t i = 0; i < n; ++i) w.index.emplace(w.parts[i].parts(), i);

    // unnormalized coefficients, leading coefficient 1
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t ki = 0; ki < n; ++ki) {
        const Partition& K = w.parts[ki];
        const double rho_k = rho(K);
        u(ki, ki) = 1.0;
        for (std::size_t li = ki + 1; li < n; ++li) {
            const Partition& L = w.parts[li];
            if (!L.dominated_by(K)) continue;
            const std::vector<int>& l = L.parts();
            double acc = 0.0;
            for (std::size_t j = 1; j < l.size(); ++j) {
                for (std::size_t i = 0; i < j; ++i) {
                    for (int t = 1; t <= l[j]; ++t) {
                        std::vector<int> mu = l;
                        mu[i] += t;
                        mu[j] -= t;
                        std::sort(mu.begin(), mu.end(), std::greater<>());
                        while (!mu.empty() && mu.back() == 0) mu.pop_back();
                        const auto it = w.index.find(mu);
                        if (it == w.index.end()) continue;
                        const double c_mu = u(ki, it->second);
                        if (c_mu != 0.0) acc += (l[i] - l[j] + 2.0 * t) * c_mu;
                    }
                }
            }
            u(ki, li) = acc / (rho_k - rho(L));
        }
    }

    // scale each row so that sum_K C_K = (x_1 + ... + x_p)^k; the system is
    // unit lower triangular in reverse-lex order
    std::vector<double> scale(n, 0.0);
    for (std::size_t li = 0; li < n; ++li) {
        double rhs = multinomial(w.parts[li]);
        for (std::size_t ki = 0; ki < li; ++ki) rhs -= scale[ki] * u(ki, li);
        scale[li] = rhs;
    }
    for (std::size_t ki = 0; ki < n; ++ki) u.row(ki) *= scale[ki];
    w.coef = std::move(u);
    return w;
}

}  // namespace detail

/// Zonal coefficients for all partitions of weight <= k_max with at most p parts.
inline ZonalTable build_zonal_table(int k_max, int p, int ceiling = kmax_ceiling()) {
    if (k_max < 0) throw DomainError("build_zonal_table: k_max must be >= 0");
    if (p < 1) throw DimensionError("build_zonal_table: p must be >= 1");
    if (k_max > ceiling)
        throw ResourceError("build_zonal_table: k_max=" + std::to_string(k_max) +
                            " exceeds the configured ceiling " + std::to_string(ceiling));
    std::vector<ZonalTable::Weight> weights;
    weights.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) weights.push_back(detail::build_weight(k, p));
    return ZonalTable(k_max, p, std::move(weights));
}

/// Process-wide cache keyed on (k_max, p); concurrent requests build once.
inline std::shared_ptr<const ZonalTable> shared_zonal_table(int k_max, int p,
                                                            int ceiling = kmax_ceiling()) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const ZonalTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{k_max, p}];
    if (!slot) slot = std::make_shared<const ZonalTable>(build_zonal_table(k_max, p, ceiling));
    return slot;
}

/// C_K at a point given by its eigenvalues. Zero when K has more parts than
/// there are eigenvalues.
inline double zonal_eval(const Partition& K, std::span<const double> eigs, const ZonalTable& table) {
    if (K.weight() > table.k_max())
        throw DomainError("zonal_eval: |K|=" + std::to_string(K.weight()) + " exceeds table k_max=" +
                          std::to_string(table.k_max()));
    if (K.length() > eigs.size()) return 0.0;
    const auto& w = table.weight(K.weight());
    const auto it = w.index.find(K.parts());
    if (it == w.index.end())
        throw DomainError("zonal_eval: table has no entry for " + K.to_string());
    const auto row = w.coef.row(static_cast<Eigen::Index>(it->second));
    double total = 0.0;
    for (std::size_t j = 0; j < w.parts.size(); ++j) {
        const double c = row(static_cast<Eigen::Index>(j));
        if (c != 0.0) total += c * monomial_symmetric(w.parts[j], eigs);
    }
    return total;
}

inline double zonal_eval(const Partition& K, const SpdMatrix& z, const ZonalTable& table) {
    if (z.dim() > table.p())
        throw DimensionError("zonal_eval: matrix dimension exceeds table p");
    const std::vector<double> eigs = z.eigenvalue_list();
    return zonal_eval(K, eigs, table);
}

inline double zonal_at_identity(const Partition& K, int p, const ZonalTable& table) {
    if (p > table.p()) throw DimensionError("zonal_at_identity: p exceeds table p");
    const std::vector<double> ones(static_cast<std::size_t>(p), 1.0);
    return zonal_eval(K, ones, table);
}

}  // namespace mvfrac

#endif  // MVFRAC_ZONAL_HPP
