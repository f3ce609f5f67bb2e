#include "gicb/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gicb/errors.hpp"

namespace gicb::network {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double half_log2(double x) { return x > 0.0 ? 0.5 * std::log2(x) : -kInf; }

bool matches_many_to_one(const InterferenceNetwork& net) {
    for (int r = 1; r < net.users(); ++r) {
        for (int t = 0; t < net.users(); ++t) {
            if (r != t && net.gain(r, t) != 0.0) return false;
        }
    }
    return true;
}

bool matches_one_to_many(const InterferenceNetwork& net) {
    for (int r = 0; r < net.users(); ++r) {
        for (int t = 1; t < net.users(); ++t) {
            if (r != t && net.gain(r, t) != 0.0) return false;
        }
    }
    return true;
}

// Fast closed forms for the three-user feasibility scan; the public
// engine-backed three_user_useful_test must agree with these (tested).
bool sigma_psd(double rho1, double rho2, double rho12) {
    // unit-diagonal 3x3: principal minors 1 - rho^2 > 0 on the search cube,
    // so PSD reduces to the determinant
    const double det = 1.0 + 2.0 * rho1 * rho2 * rho12 - rho1 * rho1 - rho2 * rho2 -
                       rho12 * rho12;
    return det >= -1e-12;
}

bool useful_closed_form(double h, double eta1, double eta2, double rho1, double rho2,
                        double rho12) {
    const double h2 = h * h;
    const double d11 = 1.0 - rho2 * rho2 - h2 * eta1 * eta1;
    const double d12 = h * eta1 * (rho1 - rho2 * rho12) - h2 * eta1 * eta2 * rho12;
    const double d22 = h2 * (eta1 * eta1 * (1.0 - rho12 * rho12) - eta2 * eta2);
    const double tr = d11 + d22;
    const double gap = std::sqrt((d11 - d22) * (d11 - d22) + 4.0 * d12 * d12);
    return 0.5 * (tr - gap) >= -1e-10;
}

// Violation score used to pick the refinement center when the coarse grid
// finds nothing: how far the worst eigenvalue constraints are from holding.
double violation_score(double h, double eta1, double eta2, double rho1, double rho2,
                       double rho12) {
    const double det = 1.0 + 2.0 * rho1 * rho2 * rho12 - rho1 * rho1 - rho2 * rho2 -
                       rho12 * rho12;
    const double h2 = h * h;
    const double d11 = 1.0 - rho2 * rho2 - h2 * eta1 * eta1;
    const double d12 = h * eta1 * (rho1 - rho2 * rho12) - h2 * eta1 * eta2 * rho12;
    const double d22 = h2 * (eta1 * eta1 * (1.0 - rho12 * rho12) - eta2 * eta2);
    const double tr = d11 + d22;
    const double gap = std::sqrt((d11 - d22) * (d11 - d22) + 4.0 * d12 * d12);
    return std::max(-det, -(0.5 * (tr - gap)));
}

} // namespace

int OrderingFunction::apply(int r, int times) const {
    int v = r;
    for (int i = 0; i < times; ++i) v = pi.at(v);
    return v;
}

void OrderingFunction::validate() const {
    const int m = users();
    if (m < 2) throw InvalidGenieError("ordering: need at least 2 users");
    std::vector<bool> image(m, false);
    for (int v : pi) {
        if (v < 0 || v >= m || image[v]) {
            throw InvalidGenieError("ordering: not a permutation of {1..M}");
        }
        image[v] = true;
    }
    std::set<int> orbit;
    int v = 0;
    for (int i = 0; i < m; ++i) {
        orbit.insert(v);
        v = pi[v];
    }
    if (static_cast<int>(orbit.size()) != m) {
        throw InvalidGenieError("ordering: orbit of user 1 does not cover all users");
    }
    for (int r = 0; r < m; ++r) {
        if (apply(r, m) != r) {
            throw InvalidGenieError("ordering: applying pi M times is not the identity");
        }
    }
}

OrderingFunction OrderingFunction::cyclic(int m) {
    OrderingFunction f;
    f.pi.resize(m);
    for (int r = 0; r < m; ++r) f.pi[r] = (r + 1) % m;
    return f;
}

VectorGenie build_vector_genie(const InterferenceNetwork& net, const OrderingFunction& pi) {
    const int m = net.users();
    if (pi.users() != m) throw InvalidGenieError("ordering size does not match network");
    pi.validate();

    VectorGenie genie;
    genie.signals.resize(m);
    for (int r = 0; r < m; ++r) {
        genie.signals[r].reserve(m - 1);
        for (int k = 1; k <= m - 1; ++k) {
            const int rx = pi.apply(r, k);
            VectorGenieSignal sig;
            sig.x_coeffs = net.gains().row(rx).transpose();
            for (int j = 1; j <= k; ++j) sig.x_coeffs(pi.apply(r, j)) = 0.0;
            sig.noise_receiver = rx;
            genie.signals[r].push_back(std::move(sig));
        }
    }
    return genie;
}

GaussianSystem build_vector_genie_system(const InterferenceNetwork& net,
                                         const OrderingFunction& pi) {
    const int m = net.users();
    const VectorGenie genie = build_vector_genie(net, pi);
    GaussianSystemBuilder b;
    for (int t = 0; t < m; ++t) b.add_variable("X" + std::to_string(t + 1), net.power(t));
    for (int r = 0; r < m; ++r) b.add_variable("Z" + std::to_string(r + 1), 1.0);
    for (int r = 0; r < m; ++r) {
        std::vector<std::pair<std::string, double>> terms;
        for (int t = 0; t < m; ++t) {
            terms.emplace_back("X" + std::to_string(t + 1), net.gain(r, t));
        }
        terms.emplace_back("Z" + std::to_string(r + 1), 1.0);
        b.add_linear("Y" + std::to_string(r + 1), terms);
    }
    for (int r = 0; r < m; ++r) {
        for (int k = 1; k <= m - 1; ++k) {
            const auto& sig = genie.signals[r][k - 1];
            std::vector<std::pair<std::string, double>> terms;
            for (int t = 0; t < m; ++t) {
                if (sig.x_coeffs(t) != 0.0) {
                    terms.emplace_back("X" + std::to_string(t + 1), sig.x_coeffs(t));
                }
            }
            terms.emplace_back("Z" + std::to_string(sig.noise_receiver + 1), 1.0);
            b.add_linear("S" + std::to_string(r + 1) + "_" + std::to_string(k), terms);
        }
    }
    return b.build();
}

double vector_genie_sum_bound(const InterferenceNetwork& net, const OrderingFunction& pi) {
    const GaussianSystem sys = build_vector_genie_system(net, pi);
    const int m = net.users();
    double sum = 0.0;
    for (int i = 1; i <= m; ++i) {
        LabelSet side{"Y" + std::to_string(i)};
        for (int k = 1; k <= m - 1; ++k) {
            side.push_back("S" + std::to_string(i) + "_" + std::to_string(k));
        }
        sum += sys.mutual_information({"X" + std::to_string(i)}, side);
    }
    return sum;
}

double m_user_tin_sum_rate(const InterferenceNetwork& net) {
    double sum = 0.0;
    for (int r = 0; r < net.users(); ++r) {
        double noise = 1.0;
        for (int t = 0; t < net.users(); ++t) {
            if (t != r) noise += net.inr(r, t);
        }
        sum += half_log2(1.0 + net.power(r) / noise);
    }
    return sum;
}

bool many_to_one_test(const InterferenceNetwork& net) {
    if (!matches_many_to_one(net)) {
        throw InvalidChannelError("many_to_one_test: channel is not many-to-one");
    }
    return many_to_one_condition(net) <= 1.0;
}

double many_to_one_condition(const InterferenceNetwork& net) {
    double s = 0.0;
    for (int t = 1; t < net.users(); ++t) s += net.gain(0, t) * net.gain(0, t);
    return s;
}

NetworkSumCapacity many_to_one_sum_capacity(const InterferenceNetwork& net) {
    const bool in_regime = many_to_one_test(net);
    NetworkSumCapacity out;
    out.inner_bits = m_user_tin_sum_rate(net);
    if (in_regime) {
        // receiver 1 treats the aggregate interference as noise (unit
        // receiver noise included), everyone else is interference-free
        double total_inr = 0.0;
        for (int t = 1; t < net.users(); ++t) total_inr += net.inr(0, t);
        double sum = half_log2(1.0 + net.power(0) / (1.0 + total_inr));
        for (int t = 1; t < net.users(); ++t) sum += half_log2(1.0 + net.power(t));
        out.established = true;
        out.sum_bits = sum;
        out.outer_bits = sum;
    } else {
        out.established = false;
        out.sum_bits = out.inner_bits;
        out.outer_bits =
            vector_genie_sum_bound(net, OrderingFunction::cyclic(net.users()));
    }
    return out;
}

OneToManyResult one_to_many_test(const InterferenceNetwork& net) {
    if (!matches_one_to_many(net)) {
        throw InvalidChannelError("one_to_many_test: channel is not one-to-many");
    }
    OneToManyResult res;
    const int m = net.users();
    const double p1 = net.power(0);
    std::vector<double> c(m, 0.0);
    for (int i = 1; i < m; ++i) {
        const double h2 = net.gain(i, 0) * net.gain(i, 0);
        c[i] = (h2 * p1 + h2) / (h2 * p1 + 1.0);
        res.condition_value += c[i];
    }
    res.in_regime = res.condition_value <= 1.0;
    if (res.in_regime) {
        const double spare = (1.0 - res.condition_value) / (m - 1);
        for (int i = 1; i < m; ++i) res.lambda.push_back(c[i] + spare);
    }
    return res;
}

NetworkSumCapacity one_to_many_sum_capacity(const InterferenceNetwork& net) {
    const OneToManyResult test = one_to_many_test(net);
    NetworkSumCapacity out;
    out.inner_bits = m_user_tin_sum_rate(net);
    if (test.in_regime) {
        double sum = half_log2(1.0 + net.power(0));
        for (int i = 1; i < net.users(); ++i) {
            const double h2 = net.gain(i, 0) * net.gain(i, 0);
            sum += half_log2(1.0 + net.power(i) / (h2 * net.power(0) + 1.0));
        }
        out.established = true;
        out.sum_bits = sum;
        out.outer_bits = sum;
    } else {
        out.established = false;
        out.sum_bits = out.inner_bits;
        out.outer_bits =
            vector_genie_sum_bound(net, OrderingFunction::cyclic(net.users()));
    }
    return out;
}

bool three_user_useful_test(double h, const GenieSpec3Sym& genie) {
    if (!genie.sigma_is_psd()) {
        throw InvalidGenieError("three_user_useful_test: Sigma is not PSD");
    }
    GaussianSystemBuilder b;
    b.add_block({"Z1", "W11", "W12"}, genie.sigma());
    b.add_linear("G1", {{"W11", h * genie.eta1}});
    b.add_linear("G2", {{"W12", h * genie.eta2}});
    const GaussianSystem sys = b.build();
    const Eigen::MatrixXd m1 = sys.conditional_cov({"Z1", "G1"}, {"W12"}).matrix();
    const Eigen::MatrixXd m2 = sys.sub_cov({"G1", "G2"});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m1 - m2, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -1e-10;
}

std::pair<double, double> three_user_smart_conditions(double p, double h) {
    const double base = 1.0 + 2.0 * h * h * p;
    return {base - h * p, base};
}

double three_user_genie_sum_bound(double p, double h, const GenieSpec3Sym& genie) {
    const GaussianSystem sys = build_three_user_genie_system(p, h, genie);
    return 3.0 * sys.mutual_information({"X1"}, {"Y1", "S11", "S12"});
}

ThreeUserFeasibility three_user_feasible(double p, double h,
                                         const ThreeUserSearchConfig& cfg) {
    ThreeUserFeasibility out;
    const auto [t1, t2] = three_user_smart_conditions(p, h);

    std::vector<double> grid;
    for (double r = -cfg.rho_limit; r <= cfg.rho_limit + 1e-12; r += cfg.rho_step) {
        grid.push_back(std::min(r, cfg.rho_limit));
    }
    if (grid.back() < cfg.rho_limit - 1e-12) grid.push_back(cfg.rho_limit);

    // eta_i = target_i / rho_i must be nonnegative, so rho_i carries the
    // sign of its target; rho near 0 is excluded (noise scale blows up).
    bool have_candidate = false;
    auto scan = [&](const std::vector<double>& g1, const std::vector<double>& g2,
                    const std::vector<double>& g12, GenieSpec3Sym* witness,
                    GenieSpec3Sym* best_candidate) {
        double best_score = kInf;
        for (double rho1 : g1) {
            if (std::abs(rho1) < 1e-9 || rho1 * t1 < 0.0) continue;
            const double eta1 = t1 / rho1;
            for (double rho2 : g2) {
                if (std::abs(rho2) < 1e-9 || rho2 * t2 < 0.0) continue;
                const double eta2 = t2 / rho2;
                for (double rho12 : g12) {
                    if (!sigma_psd(rho1, rho2, rho12)) continue;
                    if (useful_closed_form(h, eta1, eta2, rho1, rho2, rho12)) {
                        *witness = {rho1, rho2, rho12, eta1, eta2};
                        return true;
                    }
                    if (best_candidate) {
                        const double s = violation_score(h, eta1, eta2, rho1, rho2, rho12);
                        if (s < best_score) {
                            best_score = s;
                            *best_candidate = {rho1, rho2, rho12, eta1, eta2};
                            have_candidate = true;
                        }
                    }
                }
            }
        }
        return false;
    };

    GenieSpec3Sym candidate;
    if (scan(grid, grid, grid, &out.witness, &candidate)) {
        out.feasible = true;
        return out;
    }
    if (!have_candidate) return out;

    // refinement pass around the least-violating coarse point
    auto refined = [&](double center) {
        std::vector<double> g;
        for (double r = center - cfg.rho_step; r <= center + cfg.rho_step + 1e-12;
             r += cfg.refine_step) {
            if (std::abs(r) <= cfg.rho_limit) g.push_back(r);
        }
        return g;
    };
    out.feasible = scan(refined(candidate.rho1), refined(candidate.rho2),
                        refined(candidate.rho12), &out.witness, nullptr);
    return out;
}

ThreeUserInrThreshold three_user_inr_threshold(double snr, const ThreeUserSearchConfig& cfg,
                                               double h_tol) {
    if (!(snr > 0.0)) {
        throw InvalidChannelError("three_user_inr_threshold: SNR must be positive");
    }
    double lo = 0.0;   // h = 0 is trivially feasible
    double hi = 0.125; // grow until infeasible
    while (three_user_feasible(snr, hi, cfg).feasible && hi < 4.0) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > h_tol) {
        const double mid = 0.5 * (lo + hi);
        (three_user_feasible(snr, mid, cfg).feasible ? lo : hi) = mid;
    }
    ThreeUserInrThreshold t;
    t.gain = 0.5 * (lo + hi);
    t.inr_total_linear = 2.0 * t.gain * t.gain * snr;
    t.inr_total_db = 10.0 * std::log10(t.inr_total_linear);
    return t;
}

} // namespace gicb::network
