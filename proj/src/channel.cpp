#include "gicb/channel.hpp"

#include <cmath>

#include "gicb/errors.hpp"

namespace gicb {

namespace {

bool near(double a, double b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

InterferenceNetwork::InterferenceNetwork(Eigen::MatrixXd h, Eigen::VectorXd p)
    : h_(std::move(h)), p_(std::move(p)) {
    const int m = static_cast<int>(p_.size());
    if (m < 2 || h_.rows() != m || h_.cols() != m) {
        throw InvalidChannelError("network: need M >= 2 users and an MxM gain matrix");
    }
    for (int r = 0; r < m; ++r) {
        if (!near(h_(r, r), 1.0)) {
            throw InvalidChannelError("network: not in standard form (diagonal gain != 1); "
                                      "use standardize()");
        }
        h_(r, r) = 1.0;
        if (!(p_(r) > 0.0)) {
            throw InvalidChannelError("network: powers must be positive");
        }
    }
}

InterferenceNetwork InterferenceNetwork::two_user(double p1, double p2, double h12,
                                                  double h21) {
    Eigen::MatrixXd h(2, 2);
    h << 1.0, h12, h21, 1.0;
    Eigen::Vector2d p(p1, p2);
    return InterferenceNetwork(h, p);
}

InterferenceNetwork InterferenceNetwork::symmetric(int users, double p, double h) {
    Eigen::MatrixXd hm = Eigen::MatrixXd::Constant(users, users, h);
    hm.diagonal().setOnes();
    return InterferenceNetwork(hm, Eigen::VectorXd::Constant(users, p));
}

InterferenceNetwork InterferenceNetwork::swapped_users() const {
    if (users() != 2) throw InvalidChannelError("swapped_users: two-user channels only");
    return two_user(p_(1), p_(0), h_(1, 0), h_(0, 1));
}

std::string to_string(ChannelClass c) {
    switch (c) {
        case ChannelClass::TwoUser: return "two-user";
        case ChannelClass::SymmetricTwoUser: return "symmetric-two-user";
        case ChannelClass::ManyToOne: return "many-to-one";
        case ChannelClass::OneToMany: return "one-to-many";
        case ChannelClass::SymmetricMUser: return "symmetric-M-user";
        case ChannelClass::General: return "general";
    }
    return "general";
}

InterferenceNetwork standardize(const Eigen::MatrixXd& h_raw, const Eigen::VectorXd& p_raw,
                                const Eigen::VectorXd& noise_vars) {
    const int m = static_cast<int>(p_raw.size());
    if (h_raw.rows() != m || h_raw.cols() != m || noise_vars.size() != m) {
        throw InvalidChannelError("standardize: dimension mismatch");
    }
    for (int r = 0; r < m; ++r) {
        if (h_raw(r, r) == 0.0) {
            throw InvalidChannelError("standardize: zero diagonal gain for user " +
                                      std::to_string(r + 1));
        }
        if (!(noise_vars(r) > 0.0)) {
            throw InvalidChannelError("standardize: noise variances must be positive");
        }
        if (!(p_raw(r) > 0.0)) {
            throw InvalidChannelError("standardize: powers must be positive");
        }
    }

    // X'_t = (h_tt / sqrt(N_t)) X_t, Y'_r = Y_r / sqrt(N_r). Every SNR and
    // INR is preserved exactly: P'_t = h_tt^2 P_t / N_t and
    // h'_rt^2 P'_t = h_rt^2 P_t / N_r.
    Eigen::VectorXd p(m);
    Eigen::MatrixXd h(m, m);
    for (int t = 0; t < m; ++t) {
        p(t) = h_raw(t, t) * h_raw(t, t) * p_raw(t) / noise_vars(t);
    }
    for (int r = 0; r < m; ++r) {
        for (int t = 0; t < m; ++t) {
            h(r, t) = r == t ? 1.0
                             : h_raw(r, t) * std::sqrt(noise_vars(t)) /
                                   (h_raw(t, t) * std::sqrt(noise_vars(r)));
        }
    }
    return InterferenceNetwork(h, p);
}

ChannelClass classify(const InterferenceNetwork& net) {
    const int m = net.users();
    const auto& h = net.gains();
    const auto& p = net.powers();

    bool symmetric = true;
    const double h0 = h(0, 1);
    for (int r = 0; r < m && symmetric; ++r) {
        for (int t = 0; t < m; ++t) {
            if (r != t && !near(h(r, t), h0)) { symmetric = false; break; }
        }
    }
    for (int t = 1; t < m && symmetric; ++t) {
        if (!near(p(t), p(0))) symmetric = false;
    }

    if (m == 2) return symmetric ? ChannelClass::SymmetricTwoUser : ChannelClass::TwoUser;
    if (symmetric) return ChannelClass::SymmetricMUser;

    bool many_to_one = true; // only receiver 1 experiences interference
    for (int r = 1; r < m && many_to_one; ++r) {
        for (int t = 0; t < m; ++t) {
            if (r != t && h(r, t) != 0.0) { many_to_one = false; break; }
        }
    }
    if (many_to_one) return ChannelClass::ManyToOne;

    bool one_to_many = true; // only transmitter 1 causes interference
    for (int r = 0; r < m && one_to_many; ++r) {
        for (int t = 1; t < m; ++t) {
            if (r != t && h(r, t) != 0.0) { one_to_many = false; break; }
        }
    }
    if (one_to_many) return ChannelClass::OneToMany;

    return ChannelClass::General;
}

GaussianSystem build_gaussian_system(const InterferenceNetwork& net,
                                     const std::optional<GenieSpec2>& genie) {
    const int m = net.users();
    GaussianSystemBuilder b;
    for (int t = 0; t < m; ++t) {
        b.add_variable("X" + std::to_string(t + 1), net.power(t));
    }
    if (!genie) {
        for (int r = 0; r < m; ++r) b.add_variable("Z" + std::to_string(r + 1), 1.0);
    } else {
        if (m != 2) throw InvalidGenieError("GenieSpec2 requires a two-user network");
        if (std::abs(genie->rho1) > 1.0 || std::abs(genie->rho2) > 1.0) {
            throw InvalidGenieError("genie correlation magnitude exceeds 1");
        }
        if (genie->eta1 < 0.0 || genie->eta2 < 0.0) {
            throw InvalidGenieError("genie noise scales must be nonnegative");
        }
        Eigen::MatrixXd zw(2, 2);
        zw << 1.0, genie->rho1, genie->rho1, 1.0;
        b.add_block({"Z1", "W1"}, zw);
        zw(0, 1) = zw(1, 0) = genie->rho2;
        b.add_block({"Z2", "W2"}, zw);
    }
    for (int r = 0; r < m; ++r) {
        std::vector<std::pair<std::string, double>> terms;
        for (int t = 0; t < m; ++t) {
            terms.emplace_back("X" + std::to_string(t + 1), net.gain(r, t));
        }
        terms.emplace_back("Z" + std::to_string(r + 1), 1.0);
        b.add_linear("Y" + std::to_string(r + 1), terms);
    }
    if (genie) {
        const double h21 = net.gain(1, 0), h12 = net.gain(0, 1);
        b.add_linear("S1", {{"X1", h21}, {"W1", h21 * genie->eta1}});
        b.add_linear("S2", {{"X2", h12}, {"W2", h12 * genie->eta2}});
    }
    return b.build();
}

GaussianSystem build_etw_system(const InterferenceNetwork& net) {
    if (net.users() != 2) throw InvalidChannelError("build_etw_system: two-user channels only");
    const double h12 = net.gain(0, 1), h21 = net.gain(1, 0);
    GaussianSystemBuilder b;
    b.add_variable("X1", net.power(0));
    b.add_variable("X2", net.power(1));
    b.add_variable("Z1", 1.0);
    b.add_variable("Z2", 1.0);
    b.add_linear("Y1", {{"X1", 1.0}, {"X2", h12}, {"Z1", 1.0}});
    b.add_linear("Y2", {{"X1", h21}, {"X2", 1.0}, {"Z2", 1.0}});
    b.add_linear("S1", {{"X1", h21}, {"Z2", 1.0}});
    b.add_linear("S2", {{"X2", h12}, {"Z1", 1.0}});
    return b.build();
}

Eigen::Matrix3d GenieSpec3Sym::sigma() const {
    Eigen::Matrix3d s;
    s << 1.0, rho1, rho2, rho1, 1.0, rho12, rho2, rho12, 1.0;
    return s;
}

bool GenieSpec3Sym::sigma_is_psd() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sigma(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= tol::kPsdEigen;
}

GaussianSystem build_three_user_genie_system(double p, double h, const GenieSpec3Sym& genie) {
    if (!(p > 0.0)) throw InvalidChannelError("three-user system: power must be positive");
    if (!genie.sigma_is_psd()) {
        throw InvalidGenieError("three-user genie: Sigma is not PSD");
    }
    if (genie.eta1 < 0.0 || genie.eta2 < 0.0) {
        throw InvalidGenieError("three-user genie: noise scales must be nonnegative");
    }
    GaussianSystemBuilder b;
    for (int r = 1; r <= 3; ++r) b.add_variable("X" + std::to_string(r), p);
    for (int r = 1; r <= 3; ++r) {
        const std::string rs = std::to_string(r);
        b.add_block({"Z" + rs, "W" + rs + "1", "W" + rs + "2"}, genie.sigma());
    }
    for (int r = 1; r <= 3; ++r) {
        const std::string rs = std::to_string(r);
        std::vector<std::pair<std::string, double>> terms{{"X" + rs, 1.0}};
        for (int t = 1; t <= 3; ++t) {
            if (t != r) terms.emplace_back("X" + std::to_string(t), h);
        }
        terms.emplace_back("Z" + rs, 1.0);
        b.add_linear("Y" + rs, terms);
    }
    // pi = (1 -> 2 -> 3 -> 1): S_{r,1} drops X_{pi(r)} from Y_{pi(r)},
    // S_{r,2} keeps only the X_r term.
    const int pi[4] = {0, 2, 3, 1};
    for (int r = 1; r <= 3; ++r) {
        const std::string rs = std::to_string(r);
        const int other = 6 - r - pi[r]; // the interferer kept in S_{r,1}
        b.add_linear("S" + rs + "1", {{"X" + rs, h},
                                      {"X" + std::to_string(other), h},
                                      {"W" + rs + "1", h * genie.eta1}});
        b.add_linear("S" + rs + "2", {{"X" + rs, h}, {"W" + rs + "2", h * genie.eta2}});
    }
    return b.build();
}

} // namespace gicb
