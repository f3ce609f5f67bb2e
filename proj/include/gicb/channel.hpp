#pragma once

#include <optional>
#include <string>

#include "gicb/gaussian_system.hpp"

namespace gicb {

/// Gaussian interference network in standard form: M transmitter/receiver
/// pairs, unit direct gains, unit receiver noise, per-transmitter powers.
/// Negative cross gains are permitted; every bound formula uses |h| or h^2.
class InterferenceNetwork {
public:
    /// h must have unit diagonal, p must be positive. Throws
    /// InvalidChannelError otherwise.
    InterferenceNetwork(Eigen::MatrixXd h, Eigen::VectorXd p);

    int users() const { return static_cast<int>(p_.size()); }
    const Eigen::MatrixXd& gains() const { return h_; }
    const Eigen::VectorXd& powers() const { return p_; }
    double gain(int rx, int tx) const { return h_(rx, tx); }
    double power(int tx) const { return p_(tx); }

    /// SNR at receiver r (unit noise, unit direct gain): P_r.
    double snr(int rx) const { return p_(rx); }
    /// INR contribution of transmitter t at receiver r: h_rt^2 P_t.
    double inr(int rx, int tx) const { return h_(rx, tx) * h_(rx, tx) * p_(tx); }

    /// Two-user convenience constructor from {P1, P2, h12, h21}.
    static InterferenceNetwork two_user(double p1, double p2, double h12, double h21);

    /// Symmetric M-user channel: all powers P, all cross gains h.
    static InterferenceNetwork symmetric(int users, double p, double h);

    /// The same channel with the two user indices exchanged (two-user only).
    InterferenceNetwork swapped_users() const;

private:
    Eigen::MatrixXd h_;
    Eigen::VectorXd p_;
};

enum class ChannelClass {
    TwoUser,
    SymmetricTwoUser,
    ManyToOne,
    OneToMany,
    SymmetricMUser,
    General,
};

std::string to_string(ChannelClass c);

/// Converts a raw channel (arbitrary nonzero direct gains, arbitrary noise
/// variances) to the equivalent standard form, preserving every SNR and INR
/// exactly. Throws InvalidChannelError on a zero diagonal gain or a
/// nonpositive noise variance.
InterferenceNetwork standardize(const Eigen::MatrixXd& h_raw, const Eigen::VectorXd& p_raw,
                                const Eigen::VectorXd& noise_vars);

/// Most specific class tag for the zero pattern of the gain matrix.
ChannelClass classify(const InterferenceNetwork& net);

/// Two-user genie parameters: S1 = h21 (X1 + eta1 W1), S2 = h12 (X2 + eta2 W2),
/// with corr(Z1, W1) = rho1 and corr(Z2, W2) = rho2.
struct GenieSpec2 {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

/// Symmetric three-user genie: per receiver r the noise triple
/// [Z_r, W_r1, W_r2] has unit-diagonal covariance
///   [[1, rho1, rho2], [rho1, 1, rho12], [rho2, rho12, 1]],
/// independent across receivers; eta1 scales the first genie signal's noise
/// and eta2 the second's.
struct GenieSpec3Sym {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double rho12 = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;

    Eigen::Matrix3d sigma() const;
    bool sigma_is_psd() const;
};

/// Joint Gaussian system for the network: labels X1..XM, Z1..ZM, Y1..YM,
/// with inputs X_t ~ N(0, P_t) independent and unit-variance independent
/// noises. With a genie, adds W1, W2, S1, S2 per the two-user genie form;
/// |rho_i| > 1 throws InvalidGenieError.
GaussianSystem build_gaussian_system(const InterferenceNetwork& net,
                                     const std::optional<GenieSpec2>& genie = std::nullopt);

/// Two-user system carrying the side informations S1 = h21 X1 + Z2 and
/// S2 = h12 X2 + Z1, with the receiver noises shared between Y and S labels.
GaussianSystem build_etw_system(const InterferenceNetwork& net);

/// Symmetric three-user system with the two-signal genie
///   S_{r,1} = h X_r + h X_u + h eta1 W_r1   (u the remaining interferer)
///   S_{r,2} = h X_r + h eta2 W_r2
/// and noise correlations per GenieSpec3Sym. Labels: Xr, Zr, Wr1, Wr2, Yr,
/// Sr1, Sr2 for r = 1..3.
GaussianSystem build_three_user_genie_system(double p, double h, const GenieSpec3Sym& genie);

} // namespace gicb
