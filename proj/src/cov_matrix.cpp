#include "gicb/cov_matrix.hpp"

#include <stdexcept>
#include <string>

namespace gicb {

namespace {

bool symmetric_within(const Eigen::MatrixXd& m, double rel) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel * scale;
}

} // namespace

CovMatrix::CovMatrix(Eigen::MatrixXd m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("CovMatrix: matrix must be square and nonempty");
    }
    if (!symmetric_within(m, tol::kSymmetryRel)) {
        throw std::invalid_argument("CovMatrix: matrix is not symmetric within tolerance");
    }
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd& ev = es.eigenvalues();
    if (ev.minCoeff() < tol::kPsdEigen) {
        throw std::invalid_argument("CovMatrix: matrix is not PSD (min eigenvalue " +
                                    std::to_string(ev.minCoeff()) + ")");
    }
    if (ev.minCoeff() < 0.0) {
        // Clamp the slightly-negative rounding residue back onto the PSD cone.
        Eigen::VectorXd clamped = ev.cwiseMax(0.0);
        sym = es.eigenvectors() * clamped.asDiagonal() * es.eigenvectors().transpose();
        sym = 0.5 * (sym + sym.transpose());
    }
    mat_ = std::move(sym);
}

double CovMatrix::determinant() const {
    return eigenvalues().prod();
}

Eigen::VectorXd CovMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double CovMatrix::min_eigenvalue() const {
    return eigenvalues().minCoeff();
}

CovMatrix CovMatrix::submatrix(const std::vector<int>& idx) const {
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                mat_(idx[r], idx[c]);
        }
    }
    return CovMatrix(std::move(sub));
}

bool CovMatrix::is_valid(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!symmetric_within(m, tol::kSymmetryRel)) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= tol::kPsdEigen;
}

Eigen::MatrixXd psd_pseudo_inverse(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cutoff = tol::kPinvCutoffRel * std::max(ev.cwiseAbs().maxCoeff(), 1e-30);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd& a_tt,
                                 const Eigen::MatrixXd& a_tg,
                                 const Eigen::MatrixXd& a_gg) {
    Eigen::MatrixXd s = a_tt - a_tg * psd_pseudo_inverse(a_gg) * a_tg.transpose();
    return 0.5 * (s + s.transpose());
}

} // namespace gicb
