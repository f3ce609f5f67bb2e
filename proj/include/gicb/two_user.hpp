#pragma once

#include "gicb/channel.hpp"
#include "gicb/rate_region.hpp"

namespace gicb::two_user {

/// Sum rate achieved by treating interference as noise with Gaussian
/// codebooks: 1/2 log2(1 + P1/(1 + h12^2 P2)) + 1/2 log2(1 + P2/(1 + h21^2 P1)).
double tin_sum_rate(const InterferenceNetwork& net);

/// Per-user TIN rates (R1, R2).
RatePoint tin_rate_pair(const InterferenceNetwork& net);

/// Genie-aided outer region with the seven linear constraints of the
/// side-information genie S1 = h21 X1 + Z2, S2 = h12 X2 + Z1. All right-hand
/// sides are evaluated by the Gaussian engine. Requires weak interference
/// (h12^2 <= 1 and h21^2 <= 1); throws RegimeError otherwise.
RateRegion etw_outer_region(const InterferenceNetwork& net, int samples = 512);

/// Broadcast-style bound R1 <= 1/2 log2((1+P1+h12^2 P2)/(1+h12^2(2^{2 R2}-1)))
/// for 0 <= R2 <= 1/2 log2(1+P2). Throws RegimeError outside that range or
/// under strong interference.
double broadcast_r1_bound(const InterferenceNetwork& net, double r2);

/// Index-swapped variant: largest R2 allowed at a given R1.
double broadcast_r2_bound(const InterferenceNetwork& net, double r1);

/// Boundary of the full broadcast-bound region at R1: both orientations
/// (one inverted analytically) intersected with the single-user cap.
double broadcast_region_r2(const InterferenceNetwork& net, double r1);

/// The five genie-system variances the EPI bounds are built from, computed
/// by the Gaussian engine from the joint covariance of the genie-aided
/// channel.
struct GenieCovariances {
    double var_s1 = 0.0;
    double var_y1_given_s1 = 0.0;
    double var_s1_given_x1 = 0.0;
    double var_s2 = 0.0;
    double var_y2_given_s2 = 0.0;
    double var_s2_given_x2 = 0.0;
};
GenieCovariances genie_covariances(const InterferenceNetwork& net, const GenieSpec2& genie);

/// EPI-tightened sum-rate constraint: largest R2 allowed at the given R1 by
/// the genie parameters. Requires slacks sigma1^2 = 1 - rho2^2 - (h21 eta1)^2
/// and sigma2^2 = 1 - rho1^2 - (h12 eta2)^2 of at least 1e-9 (strict in the
/// underlying statement); throws InfeasibleGenieError otherwise. Returns
/// -infinity when the log argument is nonpositive (R1 beyond the genie's
/// reach).
double epi_onebit_r2_bound(const InterferenceNetwork& net, const GenieSpec2& genie,
                           double r1);

/// EPI-tightened 2R1+R2-style constraint; only (eta2, rho2) enter. Slacks
/// sigma1^2 = 1 - (h12 eta2)^2 and sigma2^2 = 1 - rho2^2 - h21^2.
double epi_2r1r2_r2_bound(const InterferenceNetwork& net, const GenieSpec2& genie,
                          double r1);

/// Genie-parameter search configuration for the EPI outer region and the
/// genie-aided sum bound. Correlations on a uniform grid, noise scales on a
/// log grid plus the slack-boundary values, then a Nelder-Mead polish per
/// boundary sample.
struct GenieSearchConfig {
    double rho_step = 0.02;
    double rho_limit = 0.999;
    double eta_min = 1e-3;
    double eta_max = 1e3;
    int eta_points = 25;
    int samples = 512;
    bool refine = true;
    double slack_floor = 1e-9;
};

/// Intersection over the sampled feasible genies of both EPI constraint
/// families (both user orderings), the broadcast bounds and the single-user
/// caps. Contained in etw_outer_region up to the slack floor.
RateRegion epi_outer_region(const InterferenceNetwork& net,
                            const GenieSearchConfig& cfg = {});

/// Smallest genie-aided sum-rate bound I(X1;Y1,S1) + I(X2;Y2,S2) over the
/// usefulness region |h21 eta1| <= sqrt(1-rho2^2), |h12 eta2| <= sqrt(1-rho1^2).
double genie_sum_rate_bound(const InterferenceNetwork& net,
                            const GenieSearchConfig& cfg = {});

struct LowInterferenceResult {
    bool in_regime = false;
    double condition_value = 0.0; // |h12(1+h21^2 P1)| + |h21(1+h12^2 P2)|
    GenieSpec2 witness;           // useful + smart genie, valid when in_regime
};

/// Low-interference certificate: the condition value and, when it is <= 1,
/// the constructive genie witness rho1 = sin(phi), rho2 = cos(phi) with the
/// noise scales pinned by the smartness identities.
LowInterferenceResult low_interference_test(const InterferenceNetwork& net);

/// Symmetric-channel condition value |h + h^3 P|.
double symmetric_condition_value(double p, double h);

/// |h + h^3 P| <= 0.5.
bool symmetric_low_interference_test(double p, double h);

struct SumCapacityResult {
    bool established = false;
    double sum_bits = 0.0;   // exact sum capacity when established
    double inner_bits = 0.0; // TIN sum rate
    double outer_bits = 0.0; // smallest outer bound evaluated
    GenieSpec2 witness;      // valid when established
};

/// Exact sum capacity (TIN) with its genie witness in the low-interference
/// regime; otherwise the TIN inner bound and the smallest computed outer
/// bound with established = false.
SumCapacityResult sum_capacity(const InterferenceNetwork& net);

/// Smartness identity for the symmetric genie: |eta rho - (1 + h^2 P)| <= 1e-9.
bool smart_genie_check(double p, double h, double eta, double rho);

struct InrThreshold {
    double gain = 0.0;       // h*, root of |h + h^3 P| = 0.5
    double inr_linear = 0.0; // h*^2 P
    double inr_db = 0.0;
};

/// Largest symmetric interference level at which TIN is sum-capacity
/// optimal, by bisection on h (absolute tolerance 1e-9).
InrThreshold inr_threshold(double snr);

/// Existence search for a symmetric genie that is both useful and smart:
/// scans rho in (0, 1), eta pinned by the smartness identity. Agrees with
/// the closed-form test |h + h^3 P| <= 0.5 away from the boundary.
bool symmetric_genie_exists(double p, double h, double rho_step = 5e-4);

/// Achievable region of the Gaussian-input private/common superposition
/// scheme without time sharing: union over a split grid of the per-split
/// constraint polytopes (each mirroring the seven-constraint structure of
/// the genie outer bound), convexified by the upper concave envelope.
RateRegion hk_gaussian_inner_region(const InterferenceNetwork& net, int split_grid = 64,
                                    int samples = 512);

} // namespace gicb::two_user
