#ifndef MVFRAC_JSON_IO_HPP
#define MVFRAC_JSON_IO_HPP

// JSON encodings: matrices as arrays of rows, zonal tables as coefficient
// records, operator results as {value_log, sign, det_exponent, ...}.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "mvfrac/errors.hpp"
#include "mvfrac/fracops.hpp"
#include "mvfrac/gamma.hpp"
#include "mvfrac/hyper.hpp"
#include "mvfrac/sample.hpp"
#include "mvfrac/spd.hpp"
#include "mvfrac/zonal.hpp"

namespace mvfrac {

using json = nlohmann::json;

inline constexpr const char* schema_tag = "mvfrac/1";

inline json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw DimensionError("matrix JSON must be a non-empty array of rows");
    // a flat array of numbers is read as a 1 x n row
    if (j.front().is_number()) {
        Eigen::MatrixXd m(1, static_cast<Eigen::Index>(j.size()));
        for (std::size_t c = 0; c < j.size(); ++c) m(0, static_cast<Eigen::Index>(c)) = j[c].get<double>();
        return m;
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    if (cols == 0) throw DimensionError("matrix JSON rows must be non-empty");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw DimensionError("matrix JSON rows differ in length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw DimensionError("matrix JSON entries must be numbers");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

inline json partition_to_json(const Partition& K) { return json(K.parts()); }

inline Partition partition_from_json(const json& j) { return Partition(j.get<std::vector<int>>()); }

/// {"k_max", "p", "records": [{k, partition, monomial, coefficient}, ...]};
/// zero coefficients are omitted.
inline json zonal_table_to_json(const ZonalTable& t) {
    json records = json::array();
    for (int k = 0; k <= t.k_max(); ++k) {
        const auto& w = t.weight(k);
        for (std::size_t i = 0; i < w.parts.size(); ++i) {
            for (std::size_t j = 0; j < w.parts.size(); ++j) {
                const double c = w.coef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (c == 0.0) continue;
                records.push_back({{"k", k},
                                   {"partition", partition_to_json(w.parts[i])},
                                   {"monomial", partition_to_json(w.parts[j])},
                                   {"coefficient", c}});
            }
        }
    }
    return {{"schema", schema_tag}, {"k_max", t.k_max()}, {"p", t.p()}, {"records", records}};
}

inline ZonalTable zonal_table_from_json(const json& j) {
    const int k_max = j.at("k_max").get<int>();
    const int p = j.at("p").get<int>();
    if (k_max < 0 || p < 1) throw DomainError("zonal table JSON: invalid k_max or p");
    std::vector<ZonalTable::Weight> weights;
    for (int k = 0; k <= k_max; ++k) {
        ZonalTable::Weight w;
        w.parts = partitions_of(k, p);
        for (std::size_t i = 0; i < w.parts.size(); ++i) w.index.emplace(w.parts[i].parts(), i);
        const auto n = static_cast<Eigen::Index>(w.parts.size());
        w.coef = Eigen::MatrixXd::Zero(n, n);
        weights.push_back(std::move(w));
    }
    for (const auto& rec : j.at("records")) {
        const int k = rec.at("k").get<int>();
        if (k < 0 || k > k_max) throw DomainError("zonal table JSON: record weight out of range");
        auto& w = weights[static_cast<std::size_t>(k)];
        const auto ki = w.index.find(partition_from_json(rec.at("partition")).parts());
        const auto mi = w.index.find(partition_from_json(rec.at("monomial")).parts());
        if (ki == w.index.end() || mi == w.index.end())
            throw DomainError("zonal table JSON: record partition not admissible for this (k, p)");
        w.coef(static_cast<Eigen::Index>(ki->second), static_cast<Eigen::Index>(mi->second)) =
            rec.at("coefficient").get<double>();
    }
    return ZonalTable(k_max, p, std::move(weights));
}

inline json to_json(const FracValue& v) {
    return {{"value_log", v.log_value}, {"sign", v.sign}, {"det_exponent", v.det_exponent}, {"value", v.value()}};
}

inline json to_json(const McEstimate& e) {
    return {{"value", e.value}, {"stderr", e.std_error}, {"samples", e.n}, {"seed", e.seed}};
}

inline json to_json(const SeriesResult& s) {
    return {{"value", s.value},
            {"k_used", s.k_used},
            {"tail_estimate", s.converged ? json(s.tail_estimate) : json(nullptr)},
            {"ratio", std::isfinite(s.ratio) ? json(s.ratio) : json(nullptr)},
            {"converged", s.converged}};
}

inline json to_json(const CheckResult& c) {
    return {{"name", c.name}, {"statistic", c.statistic}, {"expected", c.expected}, {"z_score", c.z_score},
            {"pass", c.pass}};
}

inline json to_json(const SumDensityReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"p", r.p}, {"shape", r.shape}, {"checks", checks}, {"pass", r.pass()}};
}

}  // namespace mvfrac

#endif  // MVFRAC_JSON_IO_HPP
