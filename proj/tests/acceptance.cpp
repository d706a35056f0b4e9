// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/special_functions/hypergeometric_pFq.hpp>

#include "mvfrac/mvfrac.hpp"

using namespace mvfrac;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::map<std::string, std::string> first_dumps;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome run_suite(const std::string& name, const VerifyOptions& opts, double time_limit = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport rep = run_verify_suite(name, opts);
    const double secs = seconds_since(t0);
    first_dumps[name + "/" + std::to_string(opts.p)] = rep.to_json(opts).dump();
    double worst_z = 0.0;
    for (const auto& c : rep.cases)
        if (c.contains("z_score") && c["z_score"].is_number())
            worst_z = std::max(worst_z, std::abs(c["z_score"].get<double>()));
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu cases, max |z| %.2f, %.1f s", rep.cases.size(), worst_z, secs);
    return {rep.pass && (time_limit <= 0.0 || secs < time_limit), buf};
}

Outcome zonal_normalization() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    double worst = 0.0;
    for (int p = 1; p <= 4; ++p) {
        const ZonalTable table = build_zonal_table(8, p);
        for (int k = 0; k <= 8; ++k) {
            for (int trial = 0; trial < 50; ++trial) {
                const SpdMatrix z = random_spd(rng, p, 0.05, 2.0);
                const std::vector<double> eigs = z.eigenvalue_list();
                const std::vector<double> c = table.evaluate_weight(k, eigs);
                double sum = 0.0;
                for (double v : c) sum += v;
                const double target = std::pow(z.trace(), k);
                worst = std::max(worst, std::abs(sum - target) / target);
            }
        }
    }
    const double secs = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "max rel error %.3g, %.2f s", worst, secs);
    return {worst < 1e-10 && secs < 10.0, buf};
}

Outcome binomial_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyOptions opts;
    opts.k_max = 25;
    const SuiteReport rep = run_verify_suite("binomial", opts);
    first_dumps["binomial/0"] = rep.to_json(opts).dump();
    double worst = 0.0;
    for (const auto& c : rep.cases) worst = std::max(worst, c["abs_error"].get<double>());
    const double secs = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "max abs error %.3g, %.2f s", worst, secs);
    return {rep.pass && secs < 30.0, buf};
}

Outcome scalar_reduction() {
    const int k_max = 80;
    const ZonalTable table = build_zonal_table(k_max, 1, k_max);
    Rng rng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double a = rng.uniform(0.1, 2.0);
        const double b = rng.uniform(0.1, 2.0);
        const double c = rng.uniform(0.5, 3.0);
        const double z = rng.uniform(-0.5, 0.5);
        const std::vector<double> eigs{z};
        const double series = hyper_pfq(HyperParams{{a, b}, {c}}, eigs, Truncation{k_max, 0.0}, table).value;
        const double ref = boost::math::hypergeometric_pFq({a, b}, {c}, z);
        worst = std::max(worst, std::abs(series - ref) / std::abs(ref));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel error %.3g over 200 cases", worst);
    return {worst < 1e-10, buf};
}

Outcome sum_density() {
    VerifyOptions scalar;
    scalar.p = 1;
    scalar.r1 = 1;
    scalar.r2 = 1;
    VerifyOptions matrix;
    matrix.p = 2;
    matrix.r1 = 3;
    matrix.r2 = 4;
    const bool a = run_suite("sumdensity", scalar).pass;
    const bool b = run_suite("sumdensity", matrix).pass;
    return {a && b, std::string("p=1 KS ") + (a ? "ok" : "fail") + ", p=2 moments " + (b ? "ok" : "fail")};
}

Outcome determinism() {
    std::size_t mismatched = 0;
    for (const auto& [key, dump] : first_dumps) {
        const auto slash = key.find('/');
        VerifyOptions opts;
        opts.p = std::stoi(key.substr(slash + 1));
        if (key.rfind("sumdensity", 0) == 0) {
            opts.r1 = opts.p == 1 ? 1 : 3;
            opts.r2 = opts.p == 1 ? 1 : 4;
        }
        const SuiteReport again = run_verify_suite(key.substr(0, slash), opts);
        if (again.to_json(opts).dump() != dump) ++mismatched;
    }
    return {mismatched == 0,
            std::to_string(first_dumps.size()) + " suites rerun, " + std::to_string(mismatched) + " differ"};
}

}  // namespace

int main() {
    const VerifyOptions defaults;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"zonal normalization", zonal_normalization},
        {"binomial identity", binomial_identity},
        {"scalar reduction", scalar_reduction},
        {"euler integral", [&] { return run_suite("euler", defaults, 120.0); }},
        {"power closed form", [&] { return run_suite("fracpower", defaults); }},
        {"zonal closed form", [&] { return run_suite("fraczonal", defaults); }},
        {"saigo operator", [&] { return run_suite("saigo", defaults); }},
        {"pathway limits", [&] { return run_suite("pathway", defaults); }},
        {"sum density", sum_density},
        {"beta integrals", [&] { return run_suite("beta", defaults); }},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
