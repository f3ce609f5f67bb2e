#pragma once

#include <utility>
#include <vector>

#include "gicb/channel.hpp"

namespace gicb::network {

/// Single-cycle permutation on {0..M-1}: the orbit of 0 visits every user
/// and applying it M times is the identity. Used to order the nested
/// side-information signals of the vector genie.
struct OrderingFunction {
    std::vector<int> pi; // pi[r] = image of r, 0-based

    int users() const { return static_cast<int>(pi.size()); }
    int apply(int r, int times = 1) const;

    /// Throws InvalidGenieError naming the violated property.
    void validate() const;

    /// r -> r+1 (mod M).
    static OrderingFunction cyclic(int m);
};

/// One side-information signal: a linear form over the inputs plus one
/// receiver noise term (coefficient 1).
struct VectorGenieSignal {
    Eigen::VectorXd x_coeffs; // length M
    int noise_receiver = 0;   // index of the Z term carried by the signal
};

/// Per-receiver stack of M-1 genie signals, S[r][k] for k = 1..M-1 built by
/// removing the first k inputs along the ordering from the k-th receiver
/// down the chain.
struct VectorGenie {
    std::vector<std::vector<VectorGenieSignal>> signals; // [receiver][k]
};

/// Builds the vector genie for a valid ordering. The last signal of every
/// receiver is interference-free, and the stack equals the next receiver's
/// augmented output with that receiver's own input removed.
VectorGenie build_vector_genie(const InterferenceNetwork& net, const OrderingFunction& pi);

/// Joint system with labels X1..XM, Z1..ZM, Y1..YM and Sr_k; the genie
/// signals reuse the receiver noises (shared labels), matching the
/// construction exactly.
GaussianSystem build_vector_genie_system(const InterferenceNetwork& net,
                                         const OrderingFunction& pi);

/// Genie-aided sum-rate outer bound sum_i I(X_i; Y_i, S_i). For M = 2 this
/// is exactly the two-user genie sum-rate constraint.
double vector_genie_sum_bound(const InterferenceNetwork& net, const OrderingFunction& pi);

/// sum_r 1/2 log2(1 + P_r / (1 + sum_{t != r} h_rt^2 P_t)).
double m_user_tin_sum_rate(const InterferenceNetwork& net);

/// Throws InvalidChannelError if the zero pattern is not many-to-one
/// (only receiver 1 experiences interference).
bool many_to_one_test(const InterferenceNetwork& net);

/// Condition value sum_{i>=2} h_1i^2 for reports.
double many_to_one_condition(const InterferenceNetwork& net);

struct NetworkSumCapacity {
    bool established = false;
    double sum_bits = 0.0;  // exact value when established
    double inner_bits = 0.0;
    double outer_bits = 0.0;
};

/// Exact sum capacity of an in-regime many-to-one channel (equals TIN);
/// out of regime, TIN inner bound and the vector-genie outer bound.
NetworkSumCapacity many_to_one_sum_capacity(const InterferenceNetwork& net);

struct OneToManyResult {
    bool in_regime = false;
    double condition_value = 0.0;
    std::vector<double> lambda; // weights for users 2..M, sum = 1, present in regime
};

/// Regime test for the one-to-many channel, with the weight vector
/// lambda_i >= (h_i1^2 P_1 + h_i1^2)/(h_i1^2 P_1 + 1), sum lambda = 1
/// required by the argument. Throws InvalidChannelError on a wrong pattern.
OneToManyResult one_to_many_test(const InterferenceNetwork& net);

NetworkSumCapacity one_to_many_sum_capacity(const InterferenceNetwork& net);

/// Usefulness condition of the symmetric three-user genie:
/// Cov([Z1, h eta1 W11] | W12) - Cov([h eta1 W11, h eta2 W12]) PSD, built by
/// the Gaussian engine (eigenvalue tolerance -1e-10). Throws
/// InvalidGenieError when Sigma itself is not PSD.
bool three_user_useful_test(double h, const GenieSpec3Sym& genie);

/// Smartness targets (eta1 rho1, eta2 rho2) = (1 + 2h^2 P - hP, 1 + 2h^2 P).
std::pair<double, double> three_user_smart_conditions(double p, double h);

/// 3 * I(X1; Y1, S11, S12) for the symmetric three-user genie system.
double three_user_genie_sum_bound(double p, double h, const GenieSpec3Sym& genie);

struct ThreeUserSearchConfig {
    double rho_step = 0.01;
    double refine_step = 0.0005;
    double rho_limit = 0.999;
};

struct ThreeUserFeasibility {
    bool feasible = false;
    GenieSpec3Sym witness; // valid when feasible
};

/// Deterministic lexicographic scan of the correlation cube with the noise
/// scales pinned by the smartness identities; accepts the first point where
/// Sigma is PSD and the usefulness condition holds. When the coarse grid
/// finds nothing, one refinement pass runs around the least-violating
/// candidate. false means "not found at this resolution".
ThreeUserFeasibility three_user_feasible(double p, double h,
                                         const ThreeUserSearchConfig& cfg = {});

struct ThreeUserInrThreshold {
    double gain = 0.0;             // h*, feasibility edge
    double inr_total_linear = 0.0; // 2 h*^2 P
    double inr_total_db = 0.0;
};

/// Bisection on h over three_user_feasible (absolute tolerance h_tol).
ThreeUserInrThreshold three_user_inr_threshold(double snr,
                                               const ThreeUserSearchConfig& cfg = {},
                                               double h_tol = 1e-4);

} // namespace gicb::network
