#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "gicb/cov_matrix.hpp"

namespace gicb {

/// Differential entropy in bits. `degenerate` is set when the underlying
/// covariance is singular (determinant <= 1e-300), in which case `value`
/// is -infinity. Genies with rho = +/-1 are legal corner points, so
/// degeneracy is flagged rather than thrown.
struct EntropyValue {
    double value = 0.0; // bits
    bool degenerate = false;
};

using LabelSet = std::vector<std::string>;

/// A finite set of named jointly Gaussian variables with an explicit joint
/// covariance. All entropy / mutual-information / conditioning queries are
/// answered from the joint covariance by index set; everything is exact
/// covariance algebra, there is no sampling anywhere.
///
/// All query methods are const and the type is immutable after
/// construction, so instances may be shared freely across threads.
class GaussianSystem {
public:
    GaussianSystem(std::vector<std::string> names, CovMatrix joint_cov);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const CovMatrix& joint_cov() const { return cov_; }

    bool has_label(const std::string& name) const;
    int index_of(const std::string& name) const; // throws LabelError

    double variance(const std::string& name) const;
    double covariance(const std::string& a, const std::string& b) const;

    /// Joint covariance restricted to the given labels, in the given order.
    Eigen::MatrixXd sub_cov(const LabelSet& labels) const;

    /// h(subset) = 1/2 log2((2 pi e)^k det(Sigma_subset)) in bits.
    EntropyValue differential_entropy(const LabelSet& subset) const;

    /// h(target | given) from the Schur-complement covariance, in bits.
    EntropyValue conditional_entropy(const LabelSet& target, const LabelSet& given) const;

    /// Cov(target | given) = Sigma_TT - Sigma_TG pinv(Sigma_GG) Sigma_GT.
    /// `given` may be empty (plain covariance); a singular Sigma_GG is
    /// handled by the pseudo-inverse.
    CovMatrix conditional_cov(const LabelSet& target, const LabelSet& given) const;

    /// I(a;b) in bits, computed from the canonical correlations of the two
    /// blocks. Rank-deficient marginals are whitened on their nonsingular
    /// subspace only, so corner-point genies (rho = +/-1, zero-power splits)
    /// are handled without special cases; an exact linear dependence across
    /// the blocks yields +infinity.
    double mutual_information(const LabelSet& a, const LabelSet& b) const;

    /// I(a;b | given), by conditioning the (a,b) joint covariance first.
    double conditional_mutual_information(const LabelSet& a, const LabelSet& b,
                                          const LabelSet& given) const;

    /// True iff I(x; s | y) <= 1e-9 bits, i.e. x - y - s form a Markov chain.
    bool markov_test(const LabelSet& x, const LabelSet& y, const LabelSet& s) const;

    /// markov_test of x - y - (s1,s2) for scalar labels.
    bool scalar_markov_pair_test(const std::string& x, const std::string& y,
                                 const std::string& s1, const std::string& s2) const;

private:
    std::vector<int> indices_of(const LabelSet& labels, const char* role) const;

    std::vector<std::string> names_;
    std::map<std::string, int> index_;
    CovMatrix cov_;
};

/// Assembles a GaussianSystem out of base variables (independent or in
/// explicitly-correlated blocks) plus derived variables that are linear
/// forms over the bases. The joint covariance is L * B * L^T, so it is PSD
/// by construction up to rounding.
class GaussianSystemBuilder {
public:
    /// Independent zero-mean base variable with the given variance.
    GaussianSystemBuilder& add_variable(const std::string& name, double variance);

    /// Block of base variables with an explicit joint covariance,
    /// independent of every other base.
    GaussianSystemBuilder& add_block(const std::vector<std::string>& names,
                                     const Eigen::MatrixXd& cov);

    /// Derived variable: sum of coeff * existing variable (base or derived).
    GaussianSystemBuilder& add_linear(
        const std::string& name,
        const std::vector<std::pair<std::string, double>>& terms);

    GaussianSystem build() const;

private:
    int base_dim() const { return static_cast<int>(base_names_.size()); }

    std::vector<std::string> base_names_;
    std::vector<Eigen::MatrixXd> base_blocks_;       // one per add_variable/add_block
    std::vector<std::vector<int>> block_indices_;    // base indices per block
    std::vector<std::string> all_names_;             // declaration order
    std::map<std::string, Eigen::VectorXd> rows_;    // coefficient row over bases
};

/// Gaussian entropy helper: 1/2 log2(2 pi e * variance) in bits.
double scalar_entropy_bits(double variance);

inline constexpr double kTwoPiE = 17.0794684453471341309271017390931489900697771715; // 2*pi*e

} // namespace gicb
