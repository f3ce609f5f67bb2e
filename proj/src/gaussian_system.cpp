#include "gicb/gaussian_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gicb/errors.hpp"

namespace gicb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Half-whitening of a PSD matrix: W such that W * m * W^T = I on the
// nonsingular subspace. Directions with eigenvalue below the relative
// cutoff are dropped (zero rows). The cutoff scale must come from the
// enclosing problem, not the block itself: a conditioned-out variable
// leaves a pure-roundoff block whose own largest eigenvalue is noise.
Eigen::MatrixXd psd_half_whitener(const Eigen::MatrixXd& m, double scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cutoff =
        tol::kPinvCutoffRel * std::max({ev.cwiseAbs().maxCoeff(), scale, 1e-30});
    Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cutoff) inv_sqrt(i) = 1.0 / std::sqrt(ev(i));
    }
    return inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

// I(A;B) in bits from the joint covariance of [A B]: -1/2 sum log2(1 - c_i^2)
// over canonical correlations c_i. Exactly h(A)+h(B)-h(A,B) on nonsingular
// systems, and well defined on the nonsingular subspaces otherwise.
double mi_from_joint(const Eigen::MatrixXd& joint, int dim_a) {
    const int dim_b = static_cast<int>(joint.rows()) - dim_a;
    const Eigen::MatrixXd saa = joint.topLeftCorner(dim_a, dim_a);
    const Eigen::MatrixXd sbb = joint.bottomRightCorner(dim_b, dim_b);
    const Eigen::MatrixXd sab = joint.topRightCorner(dim_a, dim_b);

    const double scale = joint.diagonal().maxCoeff();
    const Eigen::MatrixXd wa = psd_half_whitener(saa, scale);
    const Eigen::MatrixXd wb = psd_half_whitener(sbb, scale);
    const Eigen::MatrixXd cross = wa * sab * wb.transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
    const Eigen::VectorXd& sv = svd.singularValues();

    double mi = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double c = std::min(sv(i), 1.0);
        const double gap = 1.0 - c * c;
        if (gap <= 1e-14) return kInf; // linear dependence across the blocks
        mi += -0.5 * std::log2(gap);
    }
    return std::max(mi, 0.0);
}

} // namespace

double scalar_entropy_bits(double variance) {
    if (variance <= tol::kDetDegenerate) return -kInf;
    return 0.5 * std::log2(kTwoPiE * variance);
}

GaussianSystem::GaussianSystem(std::vector<std::string> names, CovMatrix joint_cov)
    : names_(std::move(names)), cov_(std::move(joint_cov)) {
    if (static_cast<int>(names_.size()) != cov_.dim()) {
        throw LabelError("GaussianSystem: name count does not match covariance dimension");
    }
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (!index_.emplace(names_[i], i).second) {
            throw LabelError("GaussianSystem: duplicate label '" + names_[i] + "'");
        }
    }
}

bool GaussianSystem::has_label(const std::string& name) const {
    return index_.count(name) > 0;
}

int GaussianSystem::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LabelError("unknown label '" + name + "'");
    return it->second;
}

double GaussianSystem::variance(const std::string& name) const {
    const int i = index_of(name);
    return cov_(i, i);
}

double GaussianSystem::covariance(const std::string& a, const std::string& b) const {
    return cov_(index_of(a), index_of(b));
}

std::vector<int> GaussianSystem::indices_of(const LabelSet& labels, const char* role) const {
    if (labels.empty()) return {};
    std::vector<int> idx;
    idx.reserve(labels.size());
    std::set<int> seen;
    for (const auto& l : labels) {
        const int i = index_of(l);
        if (!seen.insert(i).second) {
            throw LabelError(std::string(role) + ": repeated label '" + l + "'");
        }
        idx.push_back(i);
    }
    return idx;
}

Eigen::MatrixXd GaussianSystem::sub_cov(const LabelSet& labels) const {
    const auto idx = indices_of(labels, "sub_cov");
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                cov_.matrix()(idx[r], idx[c]);
        }
    }
    return sub;
}

EntropyValue GaussianSystem::differential_entropy(const LabelSet& subset) const {
    if (subset.empty()) throw LabelError("differential_entropy: empty label set");
    const Eigen::MatrixXd sigma = sub_cov(subset);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    double det = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) det *= std::max(ev(i), 0.0);
    if (det <= tol::kDetDegenerate) return {-kInf, true};
    const double k = static_cast<double>(subset.size());
    return {0.5 * (k * std::log2(kTwoPiE) + std::log2(det)), false};
}

EntropyValue GaussianSystem::conditional_entropy(const LabelSet& target,
                                                 const LabelSet& given) const {
    if (given.empty()) return differential_entropy(target);
    const CovMatrix cc = conditional_cov(target, given);
    const Eigen::VectorXd ev = cc.eigenvalues();
    double det = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) det *= std::max(ev(i), 0.0);
    if (det <= tol::kDetDegenerate) return {-kInf, true};
    const double k = static_cast<double>(target.size());
    return {0.5 * (k * std::log2(kTwoPiE) + std::log2(det)), false};
}

CovMatrix GaussianSystem::conditional_cov(const LabelSet& target,
                                          const LabelSet& given) const {
    const auto ti = indices_of(target, "conditional_cov target");
    const auto gi = indices_of(given, "conditional_cov given");
    for (int t : ti) {
        if (std::find(gi.begin(), gi.end(), t) != gi.end()) {
            throw LabelError("conditional_cov: target and given sets must be disjoint");
        }
    }
    if (target.empty()) throw LabelError("conditional_cov: empty target set");
    Eigen::MatrixXd tt(ti.size(), ti.size()), tg(ti.size(), gi.size()), gg(gi.size(), gi.size());
    for (std::size_t r = 0; r < ti.size(); ++r)
        for (std::size_t c = 0; c < ti.size(); ++c) tt(r, c) = cov_.matrix()(ti[r], ti[c]);
    for (std::size_t r = 0; r < ti.size(); ++r)
        for (std::size_t c = 0; c < gi.size(); ++c) tg(r, c) = cov_.matrix()(ti[r], gi[c]);
    for (std::size_t r = 0; r < gi.size(); ++r)
        for (std::size_t c = 0; c < gi.size(); ++c) gg(r, c) = cov_.matrix()(gi[r], gi[c]);
    if (gi.empty()) return CovMatrix(tt);
    return CovMatrix(schur_complement(tt, tg, gg));
}

double GaussianSystem::mutual_information(const LabelSet& a, const LabelSet& b) const {
    const auto ai = indices_of(a, "mutual_information a");
    const auto bi = indices_of(b, "mutual_information b");
    for (int i : ai) {
        if (std::find(bi.begin(), bi.end(), i) != bi.end()) {
            throw LabelError("mutual_information: label sets must be disjoint");
        }
    }
    if (a.empty() || b.empty()) return 0.0;
    LabelSet joint_labels = a;
    joint_labels.insert(joint_labels.end(), b.begin(), b.end());
    return mi_from_joint(sub_cov(joint_labels), static_cast<int>(a.size()));
}

double GaussianSystem::conditional_mutual_information(const LabelSet& a, const LabelSet& b,
                                                      const LabelSet& given) const {
    if (given.empty()) return mutual_information(a, b);
    const auto ai = indices_of(a, "conditional_mutual_information a");
    const auto bi = indices_of(b, "conditional_mutual_information b");
    for (int i : ai) {
        if (std::find(bi.begin(), bi.end(), i) != bi.end()) {
            throw LabelError("conditional_mutual_information: label sets must be disjoint");
        }
    }
    if (a.empty() || b.empty()) return 0.0;
    LabelSet joint_labels = a;
    joint_labels.insert(joint_labels.end(), b.begin(), b.end());
    const CovMatrix conditioned = conditional_cov(joint_labels, given);
    return mi_from_joint(conditioned.matrix(), static_cast<int>(a.size()));
}

bool GaussianSystem::markov_test(const LabelSet& x, const LabelSet& y,
                                 const LabelSet& s) const {
    return conditional_mutual_information(x, s, y) <= tol::kMiBits;
}

bool GaussianSystem::scalar_markov_pair_test(const std::string& x, const std::string& y,
                                             const std::string& s1,
                                             const std::string& s2) const {
    return markov_test({x}, {y}, {s1, s2});
}

GaussianSystemBuilder& GaussianSystemBuilder::add_variable(const std::string& name,
                                                           double variance) {
    if (variance < 0.0) throw std::invalid_argument("add_variable: negative variance");
    Eigen::MatrixXd block(1, 1);
    block(0, 0) = variance;
    return add_block({name}, block);
}

GaussianSystemBuilder& GaussianSystemBuilder::add_block(const std::vector<std::string>& names,
                                                        const Eigen::MatrixXd& cov) {
    if (static_cast<Eigen::Index>(names.size()) != cov.rows() || cov.rows() != cov.cols()) {
        throw std::invalid_argument("add_block: name/covariance dimension mismatch");
    }
    if (!CovMatrix::is_valid(cov)) {
        throw std::invalid_argument("add_block: block covariance is not PSD");
    }
    std::vector<int> idx;
    for (const auto& n : names) {
        if (rows_.count(n)) throw LabelError("builder: duplicate label '" + n + "'");
        idx.push_back(base_dim());
        base_names_.push_back(n);
        rows_[n] = Eigen::VectorXd(); // placeholder; resized in build()
        all_names_.push_back(n);
    }
    base_blocks_.push_back(cov);
    block_indices_.push_back(std::move(idx));
    return *this;
}

GaussianSystemBuilder& GaussianSystemBuilder::add_linear(
    const std::string& name, const std::vector<std::pair<std::string, double>>& terms) {
    if (rows_.count(name)) throw LabelError("builder: duplicate label '" + name + "'");
    Eigen::VectorXd row = Eigen::VectorXd::Zero(base_dim());
    for (const auto& [ref, coeff] : terms) {
        auto it = rows_.find(ref);
        if (it == rows_.end()) throw LabelError("builder: unknown label '" + ref + "'");
        if (it->second.size() == 0) {
            // reference to a base variable
            Eigen::VectorXd unit = Eigen::VectorXd::Zero(base_dim());
            unit(static_cast<Eigen::Index>(
                std::find(base_names_.begin(), base_names_.end(), ref) -
                base_names_.begin())) = 1.0;
            row += coeff * unit;
        } else {
            Eigen::VectorXd r = it->second;
            r.conservativeResize(base_dim());
            for (Eigen::Index i = it->second.size(); i < base_dim(); ++i) r(i) = 0.0;
            row += coeff * r;
        }
    }
    rows_[name] = std::move(row);
    all_names_.push_back(name);
    return *this;
}

GaussianSystem GaussianSystemBuilder::build() const {
    const int nb = base_dim();
    Eigen::MatrixXd base_cov = Eigen::MatrixXd::Zero(nb, nb);
    for (std::size_t b = 0; b < base_blocks_.size(); ++b) {
        const auto& idx = block_indices_[b];
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (std::size_t c = 0; c < idx.size(); ++c)
                base_cov(idx[r], idx[c]) = base_blocks_[b](r, c);
    }

    const int n = static_cast<int>(all_names_.size());
    Eigen::MatrixXd loading = Eigen::MatrixXd::Zero(n, nb);
    for (int i = 0; i < n; ++i) {
        const auto& name = all_names_[i];
        const Eigen::VectorXd& row = rows_.at(name);
        if (row.size() == 0) {
            const auto pos = std::find(base_names_.begin(), base_names_.end(), name) -
                             base_names_.begin();
            loading(i, static_cast<Eigen::Index>(pos)) = 1.0;
        } else {
            loading.row(i).head(row.size()) = row.transpose();
        }
    }

    Eigen::MatrixXd joint = loading * base_cov * loading.transpose();
    return GaussianSystem(all_names_, CovMatrix(0.5 * (joint + joint.transpose())));
}

} // namespace gicb
