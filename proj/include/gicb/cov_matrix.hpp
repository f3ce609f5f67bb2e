#pragma once

#include <Eigen/Dense>

namespace gicb {

/// Numeric tolerances shared by the covariance engine.
namespace tol {
inline constexpr double kSymmetryRel = 1e-12;   // relative symmetry tolerance
inline constexpr double kPsdEigen = -1e-10;     // smallest accepted eigenvalue
inline constexpr double kDetDegenerate = 1e-300; // determinant below this => degenerate
inline constexpr double kPinvCutoffRel = 1e-12; // pseudo-inverse singular value cutoff
inline constexpr double kMiBits = 1e-9;         // mutual-information zero test, in bits
} // namespace tol

/// Symmetric positive-semidefinite matrix. The universal currency of the
/// Gaussian engine: every entropy, conditional covariance and mutual
/// information is a function of one of these.
///
/// Construction validates symmetry (1e-12 relative) and PSD-ness
/// (eigenvalues >= -1e-10); eigenvalues in [-1e-10, 0) are clamped to 0,
/// since Schur complements accumulate rounding.
class CovMatrix {
public:
    CovMatrix() = default;

    /// Throws std::invalid_argument if m is not symmetric PSD within tolerance.
    explicit CovMatrix(Eigen::MatrixXd m);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Eigen::MatrixXd& matrix() const { return mat_; }
    double operator()(int r, int c) const { return mat_(r, c); }

    /// Determinant via eigenvalues (dimensions here are small).
    double determinant() const;

    /// Eigenvalues in ascending order.
    Eigen::VectorXd eigenvalues() const;

    double min_eigenvalue() const;

    /// Sub-covariance over the given index subset (indices into this matrix).
    CovMatrix submatrix(const std::vector<int>& idx) const;

    /// True if m is symmetric and PSD within the engine tolerances.
    static bool is_valid(const Eigen::MatrixXd& m);

private:
    Eigen::MatrixXd mat_;
};

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix. Eigenvalues below
/// kPinvCutoffRel times the largest are treated as zero.
Eigen::MatrixXd psd_pseudo_inverse(const Eigen::MatrixXd& m);

/// Schur complement a_tt - a_tg * pinv(a_gg) * a_gt, symmetrized.
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& a_tt,
                                 const Eigen::MatrixXd& a_tg,
                                 const Eigen::MatrixXd& a_gg);

} // namespace gicb
