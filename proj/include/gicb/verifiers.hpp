#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gicb/gaussian_system.hpp"

namespace gicb {

/// Grid configuration for the extremal-inequality verifier. The coarse pass
/// covers t_i in [t_i* - half_width, t_i*] (the power-constrained box; the
/// per-symbol entropy of a power-P input cannot exceed the Gaussian value),
/// then one local refinement runs around the coarse maximizer. The objective
/// is concave, so one refinement suffices.
struct ExtremalGridConfig {
    double half_width = 3.0;   // bits
    double coarse_step = 0.05; // bits
    double refine_step = 0.001; // bits
};

/// Outcome of the numerical check of the weighted entropy inequality
/// sum_i lambda_i h(X_i) - h(sum_i X_i + Z), whose maximum over input
/// entropies is attained at the Gaussian point t_i* = 1/2 log2(2 pi e P_i).
struct ExtremalVerification {
    bool passed = false;
    bool maximizer_ok = false; // grid argmax within one refine step of t*
    bool gradient_ok = false;  // grad f(t*) matches lambda_i - P_i/(sum P + s2)
    std::vector<double> gaussian_point;  // t_i* in bits
    std::vector<double> grid_maximizer;  // refined argmax
    double maximizer_offset = 0.0;       // L-inf distance argmax vs t*
    double gradient_residual = 0.0;      // max_i |numeric - analytic|
    std::vector<double> gradient_at_gaussian; // numeric gradient at t*
    double value_at_gaussian = 0.0;      // f(t*), bits
};

/// Objective f(t) = sum lambda_i t_i - 1/2 log2(sum 2^{2 t_i} + 2 pi e s2),
/// entropies t in bits.
double extremal_objective(const std::vector<double>& t, const std::vector<double>& lambdas,
                          double sigma2);

/// Verifies that the Gaussian point maximizes the extremal objective over
/// the power-feasible grid and that the gradient there matches its closed
/// form. Requires lambda_i >= P_i / (sum P + sigma2); throws
/// PreconditionError otherwise (the inequality does not apply).
ExtremalVerification verify_extremal_inequality(const std::vector<double>& powers,
                                                double sigma2,
                                                const std::vector<double>& lambdas,
                                                const ExtremalGridConfig& grid = {});

/// EPI lower bound on h(X + Z) for Z ~ N(0, sigma2) independent of X:
/// 1/2 log2(2^{2 h_x} + 2 pi e sigma2), with h_x per symbol in bits.
/// Tight (equality) when X is Gaussian; sigma2 = 0 returns h_x unchanged.
EntropyValue epi_lower_bound(const EntropyValue& h_x, double sigma2);

/// One named property suite outcome, for the `verify` command and the
/// acceptance tests.
struct PropertyCheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 0x5eed2008u;
    double chain_rule_tol_bits = 1e-9;
    int random_system_count = 1000;
    std::string inject_fault; // test hook: name of a suite to deliberately break
};

/// Runs the numerical verification suites for the core Gaussian engine:
/// extremal-inequality grids, Markov MI/algebraic agreement, EPI equality
/// for Gaussian inputs, entropy chain rule, worst-case-noise equality, MI
/// nonnegativity and conditional-covariance PSD-ness.
std::vector<PropertyCheckResult> run_core_verification(const VerifyOptions& opts = {});

} // namespace gicb
