#ifndef MVFRAC_GAMMA_HPP
#define MVFRAC_GAMMA_HPP

// Partitions, matrix-variate gamma/beta functions and generalized
// Pochhammer symbols.

#include <algorithm>
#include <cmath>
#include <compare>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mvfrac/errors.hpp"
#include "mvfrac/lanczos.hpp"

namespace mvfrac {

/// Integer partition K = (k1 >= k2 >= ... > 0). Trailing zeros are dropped,
/// so (2,1,0) and (2,1) compare equal.
class Partition {
public:
    Partition() = default;

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 0) throw DomainError("partition parts must be non-negative");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw DomainError("partition parts must be non-increasing");
        }
    }

    const std::vector<int>& parts() const noexcept { return parts_; }
    std::size_t length() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }

    int weight() const noexcept {
        int w = 0;
        for (int k : parts_) w += k;
        return w;
    }

    /// Part j (0-based); zero past the last nonzero part.
    int operator[](std::size_t j) const noexcept { return j < parts_.size() ? parts_[j] : 0; }

    /// Dominance order: this <= other iff every partial sum is <= (same weight).
    bool dominated_by(const Partition& other) const noexcept {
        if (weight() != other.weight()) return false;
        int a = 0, b = 0;
        const std::size_t n = std::max(length(), other.length());
        for (std::size_t i = 0; i < n; ++i) {
            a += (*this)[i];
            b += other[i];
            if (a > b) return false;
        }
        return true;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
        os << ')';
        return os.str();
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    // lexicographic on the parts; reverse of this is the enumeration order
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

private:
    std::vector<int> parts_;
};

namespace detail {
inline void partitions_rec(int remaining, int max_part, int slots, std::vector<int>& cur,
                           std::vector<Partition>& out) {
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (slots == 0) return;
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        cur.push_back(part);
        partitions_rec(remaining - part, part, slots - 1, cur, out);
        cur.pop_back();
    }
}
}  // namespace detail

/// All partitions of k with at most max_parts parts, reverse-lexicographic
/// ((3), (2,1), (1,1,1), ...).
inline std::vector<Partition> partitions_of(int k, int max_parts) {
    if (k < 0) throw DomainError("partitions_of: k must be >= 0");
    if (max_parts < 1) throw DomainError("partitions_of: max_parts must be >= 1");
    std::vector<Partition> out;
    std::vector<int> cur;
    detail::partitions_rec(k, k, max_parts, cur, out);
    return out;
}

/// log|x| with the sign of x carried separately. sign == 0 means x == 0.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

inline SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {0.0, 0};
    return {a.log_abs + b.log_abs, a.sign * b.sign};
}

inline SignedLog operator/(SignedLog a, SignedLog b) {
    if (b.sign == 0) throw DomainError("division by zero in signed-log arithmetic");
    if (a.sign == 0) return {0.0, 0};
    return {a.log_abs - b.log_abs, a.sign * b.sign};
}

/// log Gamma_p(alpha) = p(p-1)/4 log(pi) + sum_{j=1..p} log Gamma(alpha - (j-1)/2),
/// defined for alpha > (p-1)/2.
inline double log_matrix_gamma(int p, double alpha) {
    if (p < 1) throw DimensionError("log_matrix_gamma: p must be >= 1");
    if (!(alpha > 0.5 * (p - 1))) {
        std::ostringstream os;
        os << "log_matrix_gamma: requires alpha > (p-1)/2, got alpha=" << alpha << ", p=" << p;
        throw DomainError(os.str());
    }
    double acc = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
    for (int j = 1; j <= p; ++j) acc += log_gamma(alpha - 0.5 * (j - 1));
    return acc;
}

/// (a)_K = prod_j (a - (j-1)/2)_{k_j}. Zero factors give 0.
inline double gen_pochhammer(double a, const Partition& K) {
    double acc = 1.0;
    for (std::size_t j = 0; j < K.length(); ++j) {
        const double shift = a - 0.5 * static_cast<double>(j);
        for (int i = 0; i < K[j]; ++i) acc *= shift + i;
    }
    return acc;
}

/// Signed-log form of (a)_K, for arguments whose magnitude may overflow.
inline SignedLog gen_pochhammer_log(double a, const Partition& K) {
    SignedLog acc;
    for (std::size_t j = 0; j < K.length(); ++j) {
        const double shift = a - 0.5 * static_cast<double>(j);
        for (int i = 0; i < K[j]; ++i) {
            const double f = shift + i;
            if (f == 0.0) return {0.0, 0};
            acc.log_abs += std::log(std::abs(f));
            if (f < 0) acc.sign = -acc.sign;
        }
    }
    return acc;
}

/// log Gamma_p(b, K) = log Gamma_p(b) + log (b)_K; signed because (b)_K
/// may be negative.
inline SignedLog log_matrix_gamma_partition_signed(int p, double b, const Partition& K) {
    if (static_cast<int>(K.length()) > p)
        throw DimensionError("partition " + K.to_string() + " has more than p=" +
                             std::to_string(p) + " parts");
    const SignedLog poch = gen_pochhammer_log(b, K);
    return SignedLog{log_matrix_gamma(p, b), 1} * poch;
}

inline double log_matrix_gamma_partition(int p, double b, const Partition& K) {
    const SignedLog v = log_matrix_gamma_partition_signed(p, b, K);
    if (v.sign <= 0) {
        std::ostringstream os;
        os << "log_matrix_gamma_partition: (b)_K <= 0 for b=" << b << ", K=" << K.to_string()
           << "; use the signed variant";
        throw DomainError(os.str());
    }
    return v.log_abs;
}

/// log B_p(alpha, beta) = log Gamma_p(alpha) + log Gamma_p(beta) - log Gamma_p(alpha + beta).
inline double log_matrix_beta(int p, double alpha, double beta) {
    return log_matrix_gamma(p, alpha) + log_matrix_gamma(p, beta) -
           log_matrix_gamma(p, alpha + beta);
}

/// (q-1)^k (1/(q-1))_K, evaluated factor by factor as
/// prod_j prod_i [1 - (q-1)(j-1)/2 + (q-1)(i-1)] so that nothing cancels.
/// Tends to 1 as q -> 1+.
inline double pathway_factor(double q, const Partition& K) {
    if (!(q > 1.0)) throw DomainError("pathway_factor: requires q > 1");
    const double eps = q - 1.0;
    double acc = 1.0;
    for (std::size_t j = 0; j < K.length(); ++j)
        for (int i = 1; i <= K[j]; ++i)
            acc *= 1.0 - eps * 0.5 * static_cast<double>(j) + eps * (i - 1);
    return acc;
}

}  // namespace mvfrac

#endif  // MVFRAC_GAMMA_HPP
