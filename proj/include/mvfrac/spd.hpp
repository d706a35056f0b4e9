#ifndef MVFRAC_SPD_HPP
#define MVFRAC_SPD_HPP

// Symmetric positive definite matrices and the rectangular transform
// Z_X = A^{1/2} X B X' A^{1/2}.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "mvfrac/errors.hpp"
#include "mvfrac/gamma.hpp"

namespace mvfrac {

/// Relative tolerance under which an eigenvalue counts as non-positive.
inline constexpr double pd_rel_tol = 1e-12;

/// Immutable p x p symmetric positive definite matrix. The eigendecomposition
/// is computed once in the constructor; every derived quantity (square root,
/// determinant, ordering) goes through it.
class SpdMatrix {
public:
    explicit SpdMatrix(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw DimensionError("SpdMatrix: matrix must be square and non-empty");
        const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12 * scale) throw DegenerateInputError("SpdMatrix: matrix is not symmetric");
        entries_ = 0.5 * (m + m.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries_);
        if (es.info() != Eigen::Success)
            throw DegenerateInputError("SpdMatrix: eigendecomposition failed");
        // Eigen sorts ascending; keep descending order
        eigenvalues_ = es.eigenvalues().reverse();
        eigenvectors_ = es.eigenvectors().rowwise().reverse();
        const double largest = eigenvalues_(0);
        const double smallest = eigenvalues_(eigenvalues_.size() - 1);
        if (!(smallest > 0.0) || smallest <= pd_rel_tol * std::abs(largest)) {
            std::ostringstream os;
            os << "SpdMatrix: not positive definite (eigenvalues in [" << smallest << ", "
               << largest << "])";
            throw DegenerateInputError(os.str());
        }
    }

    static SpdMatrix identity(int p) { return SpdMatrix(Eigen::MatrixXd::Identity(p, p)); }

    static SpdMatrix diagonal(const std::vector<double>& d) {
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
        return SpdMatrix(Eigen::MatrixXd(v.asDiagonal()));
    }

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

    /// Eigenvalues in descending order.
    const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

    std::vector<double> eigenvalue_list() const {
        return {eigenvalues_.data(), eigenvalues_.data() + eigenvalues_.size()};
    }

    double log_det() const { return eigenvalues_.array().log().sum(); }
    double det() const { return std::exp(log_det()); }
    double trace() const { return eigenvalues_.sum(); }
    double spectral_radius() const { return eigenvalues_(0); }

    /// Q f(Lambda) Q' for a scalar map f on the spectrum.
    template <class F>
    Eigen::MatrixXd spectral_map(F&& f) const {
        Eigen::VectorXd mapped = eigenvalues_.unaryExpr(std::forward<F>(f));
        Eigen::MatrixXd out = eigenvectors_ * mapped.asDiagonal() * eigenvectors_.transpose();
        return 0.5 * (out + out.transpose());
    }

    Eigen::MatrixXd sqrt_matrix() const {
        return spectral_map([](double x) { return std::sqrt(x); });
    }
    Eigen::MatrixXd inv_sqrt_matrix() const {
        return spectral_map([](double x) { return 1.0 / std::sqrt(x); });
    }

private:
    Eigen::MatrixXd entries_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

/// p x r real matrix with r >= p and full row rank.
class RectMatrix {
public:
    explicit RectMatrix(Eigen::MatrixXd m) : entries_(std::move(m)) {
        if (entries_.rows() == 0 || entries_.cols() < entries_.rows())
            throw DimensionError("RectMatrix: need p x r with r >= p >= 1");
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(entries_);
        const auto& s = svd.singularValues();
        if (!(s(s.size() - 1) > 1e-10 * s(0)))
            throw DegenerateInputError("RectMatrix: matrix is not of full rank p");
    }

    int rows() const noexcept { return static_cast<int>(entries_.rows()); }
    int cols() const noexcept { return static_cast<int>(entries_.cols()); }
    const Eigen::MatrixXd& matrix() const noexcept { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

/// (p, r, A, B) for the rectangular transform. Caches A^{1/2} and the log
/// determinants used in every normalizing constant.
class RectConfig {
public:
    RectConfig(SpdMatrix a, SpdMatrix b)
        : a_(std::move(a)), b_(std::move(b)), a_sqrt_(a_.sqrt_matrix()) {
        if (b_.dim() < a_.dim()) throw DimensionError("RectConfig: requires r >= p");
    }

    /// A = I_p, B = I_r.
    static RectConfig identity(int p, int r) {
        if (p < 1 || r < p) throw DimensionError("RectConfig: requires r >= p >= 1");
        return RectConfig(SpdMatrix::identity(p), SpdMatrix::identity(r));
    }

    int p() const noexcept { return a_.dim(); }
    int r() const noexcept { return b_.dim(); }
    const SpdMatrix& a() const noexcept { return a_; }
    const SpdMatrix& b() const noexcept { return b_; }
    const Eigen::MatrixXd& a_sqrt() const noexcept { return a_sqrt_; }

    /// log(|A|^{r/2} |B|^{p/2}), the Jacobian of X -> A^{1/2} X B^{1/2}.
    double log_jacobian() const { return 0.5 * r() * a_.log_det() + 0.5 * p() * b_.log_det(); }

private:
    SpdMatrix a_;
    SpdMatrix b_;
    Eigen::MatrixXd a_sqrt_;
};

inline SpdMatrix rect_transform(const RectMatrix& x, const RectConfig& cfg) {
    if (x.rows() != cfg.p() || x.cols() != cfg.r()) {
        std::ostringstream os;
        os << "rect_transform: X is " << x.rows() << "x" << x.cols() << ", config expects "
           << cfg.p() << "x" << cfg.r();
        throw DimensionError(os.str());
    }
    const Eigen::MatrixXd ax = cfg.a_sqrt() * x.matrix();
    Eigen::MatrixXd z = ax * cfg.b().matrix() * ax.transpose();
    return SpdMatrix(0.5 * (z + z.transpose()));
}

inline SpdMatrix spd_sqrt(const SpdMatrix& s) { return SpdMatrix(s.sqrt_matrix()); }

/// log[ pi^{rp/2} / Gamma_p(r/2) ], the constant left after integrating a
/// p x r matrix over the Stiefel manifold (dU -> |V|^{r/2-(p+1)/2} dV).
inline double stiefel_constant(int p, int r) {
    if (p < 1 || r < p) throw DomainError("stiefel_constant: requires r >= p >= 1");
    return 0.5 * r * p * std::log(std::numbers::pi) - log_matrix_gamma(p, 0.5 * r);
}

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// S1 < S2 in the Loewner order: S2 - S1 positive definite.
inline bool ordering_lt(const SpdMatrix& s1, const SpdMatrix& s2) {
    if (s1.dim() != s2.dim()) throw DimensionError("ordering_lt: dimension mismatch");
    const double scale = std::max(s1.spectral_radius(), s2.spectral_radius());
    return min_eigenvalue(s2.matrix() - s1.matrix()) > pd_rel_tol * scale;
}

}  // namespace mvfrac

#endif  // MVFRAC_SPD_HPP
