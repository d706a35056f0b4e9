#ifndef MVFRAC_VERIFY_HPP
#define MVFRAC_VERIFY_HPP

// Oracle comparison suites. Each suite pits a closed form or series against an
// independent evaluation (Monte Carlo, determinant identity, scalar limit) and
// reports per-case statistics as JSON.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvfrac/fracops.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/hyper.hpp"
#include "mvfrac/json_io.hpp"
#include "mvfrac/rng.hpp"
#include "mvfrac/sample.hpp"
#include "mvfrac/spd.hpp"
#include "mvfrac/zonal.hpp"

namespace mvfrac {

struct VerifyOptions {
    std::uint64_t samples = 0;  // 0: suite default
    std::uint64_t seed = 42;
    int k_max = 25;
    int p = 0;  // 0: suite default
    int r1 = 0;
    int r2 = 0;
};

struct SuiteReport {
    std::string suite;
    json cases = json::array();
    bool pass = true;

    json to_json(const VerifyOptions& opts) const {
        return {{"schema", schema_tag}, {"suite", suite}, {"seed", opts.seed},
                {"cases", cases},       {"pass", pass}};
    }
};

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {"euler", "binomial", "fracpower", "fraczonal",
                                                   "saigo", "beta",     "sumdensity", "pathway"};
    return names;
}

/// Random SPD matrix Q diag(eigs) Q' with eigenvalues uniform on [lo, hi].
inline SpdMatrix random_spd(Rng& rng, int p, double lo, double hi) {
    Eigen::MatrixXd g(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd eigs(p);
    for (int i = 0; i < p; ++i) eigs(i) = rng.uniform(lo, hi);
    const Eigen::MatrixXd m = q * eigs.asDiagonal() * q.transpose();
    return SpdMatrix(0.5 * (m + m.transpose()));
}

namespace detail {

inline std::uint64_t samples_or(const VerifyOptions& o, std::uint64_t fallback) {
    return o.samples ? o.samples : fallback;
}

inline json mc_case(json c, const McEstimate& est, double expected, double z_limit, bool& ok) {
    const double z = est.z_score(expected);
    ok = std::abs(z) < z_limit;
    c["expected"] = expected;
    c["estimate"] = to_json(est);
    c["z_score"] = z;
    c["pass"] = ok;
    return c;
}

/// Fixed evaluation points and non-trivial A, B for the operator grids.
inline SpdMatrix grid_zx(int p) {
    if (p == 1) return SpdMatrix(Eigen::MatrixXd::Constant(1, 1, 0.7));
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(p, p) * 0.5;
    for (int i = 0; i < p; ++i) m(i, i) += 0.1 * (p - 2 * i) / p;
    for (int i = 0; i + 1 < p; ++i) m(i, i + 1) = m(i + 1, i) = 0.1;
    return SpdMatrix(m);
}

inline RectConfig grid_config(int p, int r) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p) * 1.2;
    for (int i = 0; i + 1 < p; ++i) a(i, i + 1) = a(i + 1, i) = 0.1;
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(r, r);
    for (int i = 0; i < r; ++i) b(i, i) = 0.8 + 0.15 * i;
    return RectConfig(SpdMatrix(a), SpdMatrix(b));
}

struct GridPoint {
    int p, r;
    double alpha, eta;
};

inline std::vector<GridPoint> operator_grid(int only_p) {
    std::vector<GridPoint> g;
    for (int p : {1, 2}) {
        if (only_p && p != only_p) continue;
        for (int r : {p, p + 1})
            for (double alpha : {1.0, 1.5})
                for (double eta : {0.0, 1.0}) g.push_back({p, r, alpha, eta});
    }
    return g;
}

inline json grid_json(const GridPoint& g) {
    return {{"p", g.p}, {"r", g.r}, {"alpha", g.alpha}, {"eta", g.eta}};
}

}  // namespace detail

/// Rectangular Gauss function against Monte Carlo of its Euler integral over
/// p x p matrices X (A = B = I), p = r.
inline SuiteReport verify_euler(const VerifyOptions& opts) {
    SuiteReport rep{"euler"};
    const int p = opts.p ? opts.p : 2;
    if (p > 3) throw DomainError("euler suite supports p <= 3");
    const int r = p;
    const double a = 1.0, b = 0.5, c = 3.0;
    const std::vector<double> diag_vals = {0.3, 0.1, 0.2};
    const SpdMatrix z_y = SpdMatrix::diagonal({diag_vals.begin(), diag_vals.begin() + p});
    const auto table = shared_zonal_table(opts.k_max, p);
    const RectConfig cfg = RectConfig::identity(p, r);
    const SeriesResult series = gauss_2f1_rect(a, b, c, cfg, z_y, Truncation{opts.k_max, 1e-12}, *table);

    const double flat = 0.5 * (p + 1);
    const double half_r = 0.5 * r;
    const Eigen::MatrixXd zy_sqrt = z_y.sqrt_matrix();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);
    const auto h = [&](const Eigen::MatrixXd& x) {
        const Eigen::MatrixXd zx = x * x.transpose();
        const double det_zx = zx.determinant();
        if (!(det_zx > 0.0)) return 0.0;
        const double det_c = (id - zx).determinant();
        const double det_k = (id - zy_sqrt * zx * zy_sqrt).determinant();
        return std::pow(det_zx, a) * std::pow(det_c, c - a - flat) * std::pow(det_k, -b);
    };
    const std::uint64_t n = detail::samples_or(opts, 1000000);
    const McEstimate raw = mc_integrate_rect_ball(h, p, r, n, opts.seed);
    const double scale = std::exp(log_matrix_gamma(p, c + half_r) + log_matrix_gamma(p, half_r) -
                                  log_matrix_gamma(p, a + half_r) - log_matrix_gamma(p, c - a) -
                                  0.5 * r * p * std::log(std::numbers::pi));
    const McEstimate est{raw.value * scale, raw.std_error * scale, raw.n, raw.seed};
    bool ok = false;
    json c0 = {{"p", p}, {"r", r}, {"a", a}, {"b", b}, {"c", c}, {"z_y", matrix_to_json(z_y.matrix())},
               {"series", to_json(series)}};
    rep.cases.push_back(detail::mc_case(c0, est, series.value, 3.0, ok));
    rep.pass = ok;
    return rep;
}

/// 1F0(b; Z) against |I - Z|^{-b}, spectral radius <= 0.3.
inline SuiteReport verify_binomial(const VerifyOptions& opts) {
    SuiteReport rep{"binomial"};
    Rng rng(opts.seed);
    std::vector<int> dims = opts.p ? std::vector<int>{opts.p} : std::vector<int>{2, 3};
    for (int p : dims) {
        const auto table = shared_zonal_table(opts.k_max, p);
        for (double b : {0.7, 1.5, 2.5}) {
            for (int trial = 0; trial < 5; ++trial) {
                const SpdMatrix z = random_spd(rng, p, 0.01, 0.3);
                const SeriesResult s = hyper_pfq(HyperParams{{b}, {}}, z, Truncation{opts.k_max, 0.0}, *table);
                double log_det_c = 0.0;
                for (double e : z.eigenvalue_list()) log_det_c += std::log1p(-e);
                const double exact = std::exp(-b * log_det_c);
                const double err = std::abs(s.value - exact);
                const bool ok = err < 1e-8;
                rep.pass = rep.pass && ok;
                rep.cases.push_back({{"p", p}, {"b", b}, {"eigenvalues", z.eigenvalue_list()},
                                     {"series", s.value}, {"exact", exact}, {"abs_error", err}, {"pass", ok}});
            }
        }
    }
    return rep;
}

/// Power-function closed form against the Monte Carlo operator over the grid
/// p in {1,2}, r in {p, p+1}, alpha in {1, 1.5}, eta in {0, 1}; passes when at
/// least 95% of grid points are within 3 standard errors.
inline SuiteReport verify_fracpower(const VerifyOptions& opts) {
    SuiteReport rep{"fracpower"};
    const std::uint64_t n = detail::samples_or(opts, 1000000);
    std::size_t passed = 0, idx = 0;
    const auto grid = detail::operator_grid(opts.p);
    for (const auto& g : grid) {
        const SpdMatrix zx = detail::grid_zx(g.p);
        const RectConfig cfg = detail::grid_config(g.p, g.r);
        const FracValue closed = frac_integral_power_closed({g.alpha}, g.eta, zx, cfg);
        const McEstimate est =
            frac_integral_numeric({g.alpha}, power_function(g.eta), zx, cfg, n, derive_seed(opts.seed, idx++));
        bool ok = false;
        json c = detail::grid_json(g);
        c["closed"] = to_json(closed);
        rep.cases.push_back(detail::mc_case(c, est, closed.value(), 3.0, ok));
        passed += ok;
    }
    const double rate = grid.empty() ? 0.0 : static_cast<double>(passed) / static_cast<double>(grid.size());
    rep.pass = rate >= 0.95;
    rep.cases.push_back({{"summary", "grid_pass_rate"}, {"rate", rate}, {"required", 0.95}, {"pass", rep.pass}});
    return rep;
}

/// Zonal closed form for K in {(1), (2)} against Monte Carlo on the same grid,
/// plus exact agreement of K = () with the power closed form at eta = 0.
inline SuiteReport verify_fraczonal(const VerifyOptions& opts) {
    SuiteReport rep{"fraczonal"};
    const std::uint64_t n = detail::samples_or(opts, 1000000);
    std::size_t passed = 0, total = 0, idx = 0;
    bool consistent = true;
    for (const auto& g : detail::operator_grid(opts.p)) {
        if (g.eta != 0.0) continue;
        const SpdMatrix zx = detail::grid_zx(g.p);
        const RectConfig cfg = detail::grid_config(g.p, g.r);
        const auto table = shared_zonal_table(2, g.p);
        const FracValue empty = frac_integral_zonal_closed({g.alpha}, Partition{}, zx, cfg, *table);
        const FracValue power = frac_integral_power_closed({g.alpha}, 0.0, zx, cfg);
        const double rel = std::abs(empty.value() - power.value()) / std::abs(power.value());
        const bool ok_c = rel < 1e-12;
        consistent = consistent && ok_c;
        json cc = detail::grid_json(g);
        cc["partition"] = json::array();
        cc["check"] = "empty_partition_matches_power";
        cc["relative_error"] = rel;
        cc["pass"] = ok_c;
        rep.cases.push_back(cc);
        for (const Partition& K : {Partition{1}, Partition{2}}) {
            const FracValue closed = frac_integral_zonal_closed({g.alpha}, K, zx, cfg, *table);
            const McEstimate est = frac_integral_numeric({g.alpha}, zonal_function(K, *table), zx, cfg, n,
                                                         derive_seed(opts.seed, idx++));
            bool ok = false;
            json c = detail::grid_json(g);
            c["partition"] = partition_to_json(K);
            c["closed"] = to_json(closed);
            rep.cases.push_back(detail::mc_case(c, est, closed.value(), 3.0, ok));
            passed += ok;
            ++total;
        }
    }
    const double rate = total ? static_cast<double>(passed) / static_cast<double>(total) : 0.0;
    rep.pass = consistent && rate >= 0.95;
    rep.cases.push_back({{"summary", "grid_pass_rate"}, {"rate", rate}, {"required", 0.95},
                         {"empty_partition_consistent", consistent}, {"pass", rep.pass}});
    return rep;
}

/// Saigo closed form: the a = 0 collapse onto the power closed form, and the
/// small-parameter case against the truncated-kernel Monte Carlo oracle.
inline SuiteReport verify_saigo(const VerifyOptions& opts) {
    SuiteReport rep{"saigo"};
    const Truncation fixed{opts.k_max, 0.0};
    for (int p : {1, 2}) {
        const int r = p;
        const SpdMatrix zx = detail::grid_zx(p);
        const RectConfig cfg = detail::grid_config(p, r);
        const auto table = shared_zonal_table(opts.k_max, p);
        const SaigoParams sp{0.0, 0.2, 2.0, 0.5};
        const FracOrder alpha{1.0};
        const SaigoValue s = saigo_power_closed(sp, alpha, zx, cfg, fixed, *table);
        const FracValue pw = frac_integral_power_closed(alpha, sp.eta, zx, cfg);
        const double rel = std::abs(s.result.value() - pw.value()) / std::abs(pw.value());
        const bool ok = rel < 1e-12;
        rep.pass = rep.pass && ok;
        rep.cases.push_back({{"check", "a_zero_collapse"}, {"p", p}, {"r", r}, {"saigo", to_json(s.result)},
                             {"power", to_json(pw)}, {"relative_error", rel}, {"pass", ok}});
    }
    {
        const int p = 1, r = 1;
        const SpdMatrix zx = detail::grid_zx(p);
        const RectConfig cfg = RectConfig::identity(p, r);
        const auto table = shared_zonal_table(opts.k_max, p);
        const SaigoParams sp{0.3, 0.2, 2.0, 0.5};
        const FracOrder alpha{1.0};
        const SaigoValue s = saigo_power_closed(sp, alpha, zx, cfg, fixed, *table);
        const McEstimate est =
            saigo_numeric(sp, alpha, zx, cfg, fixed, *table, detail::samples_or(opts, 1000000), opts.seed);
        bool ok = false;
        json c = {{"check", "truncated_kernel_mc"}, {"p", p}, {"r", r}, {"a", sp.a}, {"b", sp.b}, {"c", sp.c},
                  {"eta", sp.eta}, {"alpha", alpha.alpha}, {"closed", to_json(s.result)},
                  {"series", to_json(s.series)}};
        rep.cases.push_back(detail::mc_case(c, est, s.result.value(), 3.0, ok));
        rep.pass = rep.pass && ok;
    }
    return rep;
}

/// Type-1 and type-2 matrix beta integrals by Monte Carlo over the unit cone
/// (type-2 through S = (I-W)^{-1/2} W (I-W)^{-1/2}, dS = |I-W|^{-(p+1)} dW).
inline SuiteReport verify_beta(const VerifyOptions& opts) {
    SuiteReport rep{"beta"};
    const int p = opts.p ? opts.p : 2;
    const double flat = 0.5 * (p + 1);
    const std::uint64_t n = detail::samples_or(opts, 1000000);
    std::uint64_t idx = 0;
    const std::vector<std::pair<double, double>> params = {{2.0, 2.0}, {1.5, 2.5}};
    for (const auto& [al, be] : params) {
        const double exact = std::exp(log_matrix_beta(p, al, be));
        const ConeIntegrand type1 = [&, al = al, be = be](const ConePoint& pt) {
            return std::exp((al - flat) * pt.log_det + (be - flat) * pt.log_det_complement);
        };
        const ConeIntegrand type2 = [&, al = al, be = be](const ConePoint& pt) {
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p, p);
            const SpdMatrix comp(id - pt.w);
            const Eigen::MatrixXd ci = comp.inv_sqrt_matrix();
            const Eigen::MatrixXd s = ci * pt.w * ci;
            const double det_s = s.determinant();
            const double det_ips = (id + s).determinant();
            const double jac = std::exp(-(p + 1) * pt.log_det_complement);
            return std::pow(det_s, al - flat) * std::pow(det_ips, -(al + be)) * jac;
        };
        for (const auto& [kind, g] : {std::pair{"type1", type1}, std::pair{"type2", type2}}) {
            const McEstimate est = mc_integrate_unit_cone(g, p, n, derive_seed(opts.seed, idx++));
            bool ok = false;
            json c = {{"kind", kind}, {"p", p}, {"alpha", al}, {"beta", be}};
            rep.cases.push_back(detail::mc_case(c, est, exact, 3.0, ok));
            rep.pass = rep.pass && ok;
        }
    }
    return rep;
}

/// Sum of two rectangular-exponential quadratic forms against the
/// matrix-gamma law with shape (r1 + r2)/2.
inline SuiteReport verify_sumdensity(const VerifyOptions& opts) {
    SuiteReport rep{"sumdensity"};
    const int p = opts.p ? opts.p : 2;
    const int r1 = opts.r1 ? opts.r1 : (p == 1 ? 1 : p + 1);
    const int r2 = opts.r2 ? opts.r2 : (p == 1 ? 1 : p + 2);
    const std::uint64_t n = detail::samples_or(opts, 100000);
    const RectConfig cfg1 = detail::grid_config(p, r1);
    const RectConfig cfg2 = RectConfig::identity(p, r2);
    const SumDensityReport sd = verify_sum_density(cfg1, cfg2, n, opts.seed);
    json c = to_json(sd);
    c["r1"] = r1;
    c["r2"] = r2;
    c["samples"] = n;
    rep.cases.push_back(c);
    rep.pass = sd.pass();
    return rep;
}

/// Pathway limits as q -> 1+: errors must shrink about tenfold per decade of
/// q - 1 and end below 1e-3 relative; Z = 0 and K = () are exact.
inline SuiteReport verify_pathway(const VerifyOptions&) {
    SuiteReport rep{"pathway"};
    const std::vector<double> qs = {1.01, 1.001, 1.0001};
    auto judge = [&](json c, const std::vector<double>& errs) {
        bool ok = errs.back() < 1e-3;
        std::vector<double> ratios;
        for (std::size_t i = 1; i < errs.size(); ++i) {
            ratios.push_back(errs[i - 1] / errs[i]);
            ok = ok && ratios.back() > 5.0 && ratios.back() < 20.0;
        }
        c["q"] = qs;
        c["relative_errors"] = errs;
        c["error_ratios"] = ratios;
        c["pass"] = ok;
        rep.pass = rep.pass && ok;
        rep.cases.push_back(c);
    };
    for (const Partition& K : {Partition{2, 1}, Partition{3, 1, 1}, Partition{4}}) {
        std::vector<double> errs;
        for (double q : qs) errs.push_back(std::abs(pathway_factor(q, K) - 1.0));
        judge({{"check", "pathway_factor"}, {"partition", partition_to_json(K)}}, errs);
    }
    for (const std::vector<double>& eigs :
         {std::vector<double>{1.0}, std::vector<double>{0.5, 0.2}, std::vector<double>{1.2, 0.7, 0.3}}) {
        double tr = 0.0;
        for (double e : eigs) tr += e;
        const double target = std::exp(-tr);
        std::vector<double> errs;
        for (double q : qs) errs.push_back(std::abs(pathway_det_limit(q, eigs) - target) / target);
        judge({{"check", "pathway_det_limit"}, {"eigenvalues", eigs}}, errs);
    }
    for (double q : qs) {
        const bool ok = pathway_factor(q, Partition{}) == 1.0 &&
                        pathway_det_limit(q, std::vector<double>{0.0, 0.0}) == 1.0;
        rep.pass = rep.pass && ok;
        rep.cases.push_back({{"check", "exact_cases"}, {"q", q}, {"pass", ok}});
    }
    return rep;
}

inline SuiteReport run_verify_suite(const std::string& suite, const VerifyOptions& opts) {
    if (suite == "euler") return verify_euler(opts);
    if (suite == "binomial") return verify_binomial(opts);
    if (suite == "fracpower") return verify_fracpower(opts);
    if (suite == "fraczonal") return verify_fraczonal(opts);
    if (suite == "saigo") return verify_saigo(opts);
    if (suite == "beta") return verify_beta(opts);
    if (suite == "sumdensity") return verify_sumdensity(opts);
    if (suite == "pathway") return verify_pathway(opts);
    throw DomainError("unknown verify suite '" + suite + "'");
}

}  // namespace mvfrac

#endif  // MVFRAC_VERIFY_HPP
