#include "gicb/two_user.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gicb/errors.hpp"
#include "gicb/parallel.hpp"

namespace gicb::two_user {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_two_user(const InterferenceNetwork& net, const char* op) {
    if (net.users() != 2) {
        throw InvalidChannelError(std::string(op) + ": two-user channels only");
    }
}

void require_weak(const InterferenceNetwork& net, const char* op) {
    require_two_user(net, op);
    const double h12 = net.gain(0, 1), h21 = net.gain(1, 0);
    if (h12 * h12 > 1.0 || h21 * h21 > 1.0) {
        throw RegimeError(std::string(op) + ": requires weak interference "
                          "(h12^2 <= 1 and h21^2 <= 1)");
    }
}

double half_log2(double x) { return x > 0.0 ? 0.5 * std::log2(x) : -kInf; }

// Channel constants used throughout the genie formulas.
struct ChannelConsts {
    double p1, p2, h12, h21;
    double vy1, vy2; // receiver output variances with Gaussian inputs
};

ChannelConsts consts_of(const InterferenceNetwork& net) {
    ChannelConsts c{};
    c.p1 = net.power(0);
    c.p2 = net.power(1);
    c.h12 = net.gain(0, 1);
    c.h21 = net.gain(1, 0);
    c.vy1 = 1.0 + c.p1 + c.h12 * c.h12 * c.p2;
    c.vy2 = 1.0 + c.p2 + c.h21 * c.h21 * c.p1;
    return c;
}

// Closed-form genie variances for one side of the genie form
// S = h (X + eta W), corr(Z, W) = rho. Identical to what the Gaussian
// engine computes from the joint covariance (asserted in the tests); the
// parameter sweeps use this form, the public per-genie operations go
// through the engine.
struct SideVars {
    double vs;      // Cov(S)
    double vs_x;    // Cov(S | X)
    double vy_s;    // Cov(Y | S)
    double iga;     // I(X; Y, S), bits (+inf for a noiseless genie)
};

SideVars side_vars(double p_own, double h_cross /*gain of own X at other rx*/,
                   double vy_own, double interference_noise /*1 + h^2 P_other*/,
                   double eta, double rho) {
    SideVars s{};
    if (h_cross == 0.0) {
        // S vanishes; the genie carries nothing.
        s.vs = 0.0;
        s.vs_x = 0.0;
        s.vy_s = vy_own;
        s.iga = half_log2(vy_own / interference_noise);
        return s;
    }
    const double h2 = h_cross * h_cross;
    s.vs = h2 * (p_own + eta * eta);
    s.vs_x = h2 * eta * eta;
    const double cov_ys = h_cross * (p_own + eta * rho);
    s.vy_s = s.vs > 0.0 ? vy_own - cov_ys * cov_ys / s.vs : vy_own;
    const double det_joint = vy_own * s.vs - cov_ys * cov_ys;
    const double det_cond =
        interference_noise * s.vs_x - h2 * eta * eta * rho * rho;
    s.iga = det_cond > 0.0 ? half_log2(det_joint / det_cond) : kInf;
    return s;
}

SideVars side1(const ChannelConsts& c, double eta1, double rho1) {
    return side_vars(c.p1, c.h21, c.vy1, 1.0 + c.h12 * c.h12 * c.p2, eta1, rho1);
}

SideVars side2(const ChannelConsts& c, double eta2, double rho2) {
    return side_vars(c.p2, c.h12, c.vy2, 1.0 + c.h21 * c.h21 * c.p1, eta2, rho2);
}

// R2 bound of the EPI-tightened sum-rate constraint, closed form. Slack
// placement: sigma2^2 = 1 - rho1^2 - (h12 eta2)^2 belongs in the numerator
// (it is the residue of the EPI step relating h(S2) to h(Y1|S1,X1)) and
// sigma1^2 = 1 - rho2^2 - (h21 eta1)^2 in the denominator (relating
// h(Y2|S2,X2) to h(S1)). The opposite placement cuts through the
// treating-interference-as-noise rate point, which is achievable.
double onebit_bound(const SideVars& s1, const SideVars& s2,
                    double sigma1_sq, double sigma2_sq, double u /* = 2^{-2 R1} */) {
    if (s2.vs_x <= 0.0 || s1.vs_x <= 0.0) return kInf; // degenerate genie: vacuous
    const double t2 = half_log2(s2.vy_s / s2.vs_x);
    const double a1 = s1.vs * s1.vy_s / s1.vs_x;
    const double num = a1 * u - sigma2_sq;
    if (num <= 0.0) return -kInf;
    return t2 + half_log2(num / (s1.vs + sigma1_sq));
}

// R2 bound of the EPI-tightened 2R1+R2-style constraint, closed form.
double tworate_bound(const ChannelConsts& c, const SideVars& s2, double sigma1_sq,
                     double sigma2_sq, double u) {
    if (s2.vs_x <= 0.0) return kInf;
    const double t2 = half_log2(s2.vy_s / s2.vs_x);
    const double num = c.vy1 * u - sigma1_sq;
    if (num <= 0.0) return -kInf;
    return t2 + half_log2(num / (c.h21 * c.h21 / u + sigma2_sq));
}

// Deterministic Nelder-Mead; the objective returns +inf outside the
// feasible set.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int max_iter) {
    const std::size_t n = x0.size();
    std::vector<std::pair<double, std::vector<double>>> simplex;
    simplex.reserve(n + 1);
    simplex.emplace_back(f(x0), x0);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = x0;
        x[i] += step;
        simplex.emplace_back(f(x), x);
    }
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        if (std::isfinite(simplex.back().first) &&
            simplex.back().first - simplex.front().first < 1e-12) {
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].second[k];
        }
        for (auto& v : centroid) v /= static_cast<double>(n);

        auto at = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t k = 0; k < n; ++k) {
                x[k] = centroid[k] + t * (centroid[k] - simplex.back().second[k]);
            }
            return x;
        };
        const auto xr = at(1.0);
        const double fr = f(xr);
        if (fr < simplex.front().first) {
            const auto xe = at(2.0);
            const double fe = f(xe);
            simplex.back() = fe < fr ? std::make_pair(fe, xe) : std::make_pair(fr, xr);
        } else if (fr < simplex[n - 1].first) {
            simplex.back() = {fr, xr};
        } else {
            const auto xc = at(fr < simplex.back().first ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, simplex.back().first)) {
                simplex.back() = {fc, xc};
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) {
                        simplex[i].second[k] =
                            0.5 * (simplex[i].second[k] + simplex[0].second[k]);
                    }
                    simplex[i].first = f(simplex[i].second);
                }
            }
        }
        order();
    }
    return simplex.front().second;
}

std::vector<double> rho_grid(const GenieSearchConfig& cfg) {
    std::vector<double> g;
    for (double r = -cfg.rho_limit; r <= cfg.rho_limit + 1e-12; r += cfg.rho_step) {
        g.push_back(std::min(r, cfg.rho_limit));
    }
    g.push_back(0.0);
    g.push_back(cfg.rho_limit);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            g.end());
    return g;
}

std::vector<double> eta_grid(const GenieSearchConfig& cfg) {
    std::vector<double> g;
    const double l0 = std::log(cfg.eta_min), l1 = std::log(cfg.eta_max);
    for (int i = 0; i < cfg.eta_points; ++i) {
        g.push_back(std::exp(l0 + (l1 - l0) * i / (cfg.eta_points - 1)));
    }
    return g;
}

// Lower envelopes (over the genie family) of both EPI constraint families,
// on a fixed R1 sample grid, with the minimizing genie recorded per sample
// for the local polish.
struct SweepResult {
    std::vector<double> onebit;
    std::vector<double> tworate;
    std::vector<GenieSpec2> onebit_arg;
    std::vector<GenieSpec2> tworate_arg;
};

SweepResult sweep_epi_envelopes(const InterferenceNetwork& net, const GenieSearchConfig& cfg,
                                const std::vector<double>& r1_samples) {
    const ChannelConsts c = consts_of(net);
    const double floor = cfg.slack_floor;
    const int n = static_cast<int>(r1_samples.size());
    std::vector<double> u(n);
    for (int k = 0; k < n; ++k) u[k] = std::exp2(-2.0 * r1_samples[k]);

    SweepResult out;
    out.onebit.assign(n, kInf);
    out.tworate.assign(n, kInf);
    out.onebit_arg.assign(n, GenieSpec2{});
    out.tworate_arg.assign(n, GenieSpec2{});
    if (c.h12 == 0.0 || c.h21 == 0.0) return out; // genie carries nothing; caps and
                                                  // broadcast bound the region

    const auto rhos = rho_grid(cfg);
    const auto etas = eta_grid(cfg);
    const int nr = static_cast<int>(rhos.size());
    const int ne = static_cast<int>(etas.size());

    // --- the sum-rate family: min over (rho1, eta1, rho2, eta2) ---
    // Bound = T2(rho2,eta2) + 1/2 log2((A1(rho1,eta1) u - sigma2^2(rho1,eta2))
    //                                 / (vs1(eta1) + sigma1^2(rho2,eta1))).
    // Writing sigma2^2 = (1 - rho1^2) - q with q = (h12 eta2)^2, the inner
    // minimization over eta2 becomes min_j 2^{2 T2_j} (w + q_j) with
    // w = A1 u - (1 - rho1^2), a pure multiply-add scan; one log at the end.
    std::vector<double> q_eta2(ne);
    for (int j = 0; j < ne; ++j) q_eta2[j] = c.h12 * c.h12 * etas[j] * etas[j];

    // G[i2][j] = 2^{2 T2(rho2_i2, eta2_j)}
    std::vector<std::vector<double>> g_tab(nr, std::vector<double>(ne, kInf));
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < ne; ++j) {
            const SideVars s2 = side2(c, etas[j], rhos[i]);
            if (s2.vs_x > 0.0) g_tab[i][j] = s2.vy_s / s2.vs_x;
        }
    }

    std::vector<SweepResult> partial(std::max(thread_count(), 1));
    for (auto& p : partial) {
        p.onebit.assign(n, kInf);
        p.onebit_arg.assign(n, GenieSpec2{});
    }

    const int workers = static_cast<int>(partial.size());
    const int rows_per = (nr + workers - 1) / workers;
    parallel_chunks(workers, [&](int wb, int we) {
        for (int w = wb; w < we; ++w) {
            SweepResult& env = partial[w];
            std::vector<double> prod(n);
            std::vector<int> prod_arg(n, -1);
            for (int i1 = w * rows_per; i1 < std::min(nr, (w + 1) * rows_per); ++i1) {
                const double rho1 = rhos[i1];
                const double s_rho1 = 1.0 - rho1 * rho1;
                // feasible eta2 prefix: q <= s_rho1 - floor, plus the exact
                // slack-boundary value
                int jmax = 0;
                while (jmax < ne && q_eta2[jmax] <= s_rho1 - floor) ++jmax;
                const double q_bound = s_rho1 - floor;
                if (q_bound <= 0.0) continue;
                const double eta2_bound = std::sqrt(q_bound) / std::abs(c.h12);

                for (int i2 = 0; i2 < nr; ++i2) {
                    const double rho2 = rhos[i2];
                    const double eta1_cap_sq = (1.0 - rho2 * rho2 - floor) / (c.h21 * c.h21);
                    if (eta1_cap_sq <= 0.0) continue;
                    const double eta1_cap = std::sqrt(eta1_cap_sq);

                    double g_bound = kInf; // 2^{2 T2} at the boundary eta2
                    {
                        const SideVars s2b = side2(c, eta2_bound, rho2);
                        if (s2b.vs_x > 0.0) g_bound = s2b.vy_s / s2b.vs_x;
                    }
                    const double* grow = g_tab[i2].data();

                    std::vector<double> eta1s;
                    for (int j = 0; j < ne; ++j) {
                        if (etas[j] < eta1_cap) eta1s.push_back(etas[j]);
                    }
                    eta1s.push_back(eta1_cap);

                    for (double eta1 : eta1s) {
                        const SideVars s1 = side1(c, eta1, rho1);
                        if (s1.vs_x <= 0.0) continue;
                        const double sigma1_sq = 1.0 - rho2 * rho2 -
                                                 c.h21 * c.h21 * eta1 * eta1;
                        if (sigma1_sq < floor * (1.0 - 1e-9)) continue;
                        const double a1 = s1.vs * s1.vy_s / s1.vs_x;
                        const double denom = s1.vs + sigma1_sq;

                        for (int k = 0; k < n; ++k) {
                            const double wv = a1 * u[k] - s_rho1;
                            double best = kInf;
                            int barg = -1;
                            for (int j = 0; j < jmax; ++j) {
                                const double arg = wv + q_eta2[j];
                                if (arg <= 0.0) continue;
                                const double cand = grow[j] * arg;
                                if (cand < best) { best = cand; barg = j; }
                            }
                            if (wv + q_bound > 0.0) {
                                const double cand = g_bound * (wv + q_bound);
                                if (cand < best) { best = cand; barg = ne; }
                            }
                            if (barg < 0) continue;
                            prod[k] = best / denom;
                            prod_arg[k] = barg;
                        }
                        for (int k = 0; k < n; ++k) {
                            if (prod_arg[k] < 0) continue;
                            const double cand = half_log2(prod[k]);
                            if (cand < env.onebit[k]) {
                                env.onebit[k] = cand;
                                env.onebit_arg[k] = {
                                    eta1, prod_arg[k] == ne ? eta2_bound : etas[prod_arg[k]],
                                    rho1, rho2};
                            }
                            prod_arg[k] = -1;
                        }
                    }
                }
            }
        }
    });

    for (const auto& p : partial) {
        for (int k = 0; k < n; ++k) {
            if (p.onebit[k] < out.onebit[k]) {
                out.onebit[k] = p.onebit[k];
                out.onebit_arg[k] = p.onebit_arg[k];
            }
        }
    }

    // --- the 2R1+R2 family: only (rho2, eta2) enter ---
    {
        const double rho2_cap_sq = 1.0 - c.h21 * c.h21 - floor;
        const double eta2_cap = std::sqrt((1.0 - floor)) / std::abs(c.h12);
        std::vector<double> r2s = rhos;
        if (rho2_cap_sq > 0.0) {
            r2s.push_back(std::sqrt(rho2_cap_sq));
            r2s.push_back(-std::sqrt(rho2_cap_sq));
        }
        std::vector<double> e2s = etas;
        e2s.push_back(eta2_cap);
        for (double rho2 : r2s) {
            const double sigma2_sq = 1.0 - rho2 * rho2 - c.h21 * c.h21;
            if (sigma2_sq < floor * (1.0 - 1e-9)) continue;
            for (double eta2 : e2s) {
                const double sigma1_sq = 1.0 - c.h12 * c.h12 * eta2 * eta2;
                if (sigma1_sq < floor * (1.0 - 1e-9)) continue;
                const SideVars s2 = side2(c, eta2, rho2);
                if (s2.vs_x <= 0.0) continue;
                const double t2 = half_log2(s2.vy_s / s2.vs_x);
                for (int k = 0; k < n; ++k) {
                    const double num = c.vy1 * u[k] - sigma1_sq;
                    if (num <= 0.0) continue;
                    const double cand =
                        t2 + half_log2(num / (c.h21 * c.h21 / u[k] + sigma2_sq));
                    if (cand < out.tworate[k]) {
                        out.tworate[k] = cand;
                        out.tworate_arg[k] = {0.0, eta2, 0.0, rho2};
                    }
                }
            }
        }
    }

    if (!cfg.refine) return out;

    // --- local polish per boundary sample, warm-started from the previous
    // sample's winner (the envelope's minimizing genie moves smoothly) ---
    auto pack = [](const GenieSpec2& g) {
        return std::vector<double>{g.rho1, g.rho2, std::log(std::max(g.eta1, 1e-9)),
                                   std::log(std::max(g.eta2, 1e-9))};
    };
    std::vector<double> prev_onebit, prev_tworate;
    for (int k = 0; k < n; ++k) {
        const double uk = u[k];
        if (std::isfinite(out.onebit[k])) {
            auto f = [&](const std::vector<double>& x) {
                const double rho1 = x[0], rho2 = x[1];
                const double eta1 = std::exp(x[2]), eta2 = std::exp(x[3]);
                if (std::abs(rho1) > cfg.rho_limit || std::abs(rho2) > cfg.rho_limit)
                    return kInf;
                const double sig1 = 1.0 - rho2 * rho2 - c.h21 * c.h21 * eta1 * eta1;
                const double sig2 = 1.0 - rho1 * rho1 - c.h12 * c.h12 * eta2 * eta2;
                if (sig1 < floor || sig2 < floor) return kInf;
                const double v =
                    onebit_bound(side1(c, eta1, rho1), side2(c, eta2, rho2),
                                 sig1, sig2, uk);
                return std::isfinite(v) ? v : kInf;
            };
            auto best = nelder_mead(f, pack(out.onebit_arg[k]), 0.01, 200);
            if (!prev_onebit.empty()) {
                const auto warm = nelder_mead(f, prev_onebit, 0.005, 120);
                if (f(warm) < f(best)) best = warm;
            }
            if (f(best) < out.onebit[k]) out.onebit[k] = f(best);
            prev_onebit = best;
        }
        if (std::isfinite(out.tworate[k])) {
            const GenieSpec2 g0 = out.tworate_arg[k];
            auto f = [&](const std::vector<double>& x) {
                const double rho2 = x[0], eta2 = std::exp(x[1]);
                if (std::abs(rho2) > cfg.rho_limit) return kInf;
                const double sig1 = 1.0 - c.h12 * c.h12 * eta2 * eta2;
                const double sig2 = 1.0 - rho2 * rho2 - c.h21 * c.h21;
                if (sig1 < floor || sig2 < floor) return kInf;
                const double v = tworate_bound(c, side2(c, eta2, rho2), sig1, sig2, uk);
                return std::isfinite(v) ? v : kInf;
            };
            auto best = nelder_mead(f, {g0.rho2, std::log(std::max(g0.eta2, 1e-9))},
                                    0.01, 200);
            if (!prev_tworate.empty()) {
                const auto warm = nelder_mead(f, prev_tworate, 0.005, 120);
                if (f(warm) < f(best)) best = warm;
            }
            if (f(best) < out.tworate[k]) out.tworate[k] = f(best);
            prev_tworate = best;
        }
    }
    return out;
}

} // namespace

double tin_sum_rate(const InterferenceNetwork& net) {
    require_two_user(net, "tin_sum_rate");
    const auto [r1, r2] = tin_rate_pair(net);
    return r1 + r2;
}

RatePoint tin_rate_pair(const InterferenceNetwork& net) {
    require_two_user(net, "tin_rate_pair");
    const ChannelConsts c = consts_of(net);
    return {half_log2(1.0 + c.p1 / (1.0 + c.h12 * c.h12 * c.p2)),
            half_log2(1.0 + c.p2 / (1.0 + c.h21 * c.h21 * c.p1))};
}

RateRegion etw_outer_region(const InterferenceNetwork& net, int samples) {
    require_weak(net, "etw_outer_region");
    const GaussianSystem sys = build_etw_system(net);
    const double i1c = sys.conditional_mutual_information({"X1"}, {"Y1"}, {"X2"});
    const double i2c = sys.conditional_mutual_information({"X2"}, {"Y2"}, {"X1"});
    const double i1 = sys.mutual_information({"X1"}, {"Y1"});
    const double i2 = sys.mutual_information({"X2"}, {"Y2"});
    const double i1g = sys.mutual_information({"X1"}, {"Y1", "S1"});
    const double i2g = sys.mutual_information({"X2"}, {"Y2", "S2"});
    return RateRegion::from_halfplanes(
        {{1.0, 0.0, i1c, "R1"},
         {0.0, 1.0, i2c, "R2"},
         {1.0, 1.0, i1c + i2, "sum-zchannel-inv"},
         {1.0, 1.0, i1 + i2c, "sum-zchannel"},
         {1.0, 1.0, i1g + i2g, "sum-genie"},
         {2.0, 1.0, i1c + i1 + i2g, "2R1+R2"},
         {1.0, 2.0, i1g + i2c + i2, "R1+2R2"}},
        samples);
}

double broadcast_r1_bound(const InterferenceNetwork& net, double r2) {
    require_weak(net, "broadcast_r1_bound");
    const ChannelConsts c = consts_of(net);
    const double cap2 = half_log2(1.0 + c.p2);
    if (r2 < -1e-12 || r2 > cap2 + 1e-12) {
        throw RegimeError("broadcast_r1_bound: R2 outside [0, single-user capacity]");
    }
    return half_log2(c.vy1 / (1.0 + c.h12 * c.h12 * (std::exp2(2.0 * r2) - 1.0)));
}

double broadcast_r2_bound(const InterferenceNetwork& net, double r1) {
    return broadcast_r1_bound(net.swapped_users(), r1);
}

double broadcast_region_r2(const InterferenceNetwork& net, double r1) {
    require_weak(net, "broadcast_region_r2");
    const ChannelConsts c = consts_of(net);
    double r2 = half_log2(1.0 + c.p2);
    r2 = std::min(r2, broadcast_r2_bound(net, r1));
    if (c.h12 != 0.0) {
        // R1 <= f(R2) orientation, solved for R2
        const double arg = 1.0 + (c.vy1 * std::exp2(-2.0 * r1) - 1.0) / (c.h12 * c.h12);
        r2 = std::min(r2, half_log2(arg));
    }
    return std::max(0.0, r2);
}

GenieCovariances genie_covariances(const InterferenceNetwork& net, const GenieSpec2& genie) {
    require_two_user(net, "genie_covariances");
    const GaussianSystem sys = build_gaussian_system(net, genie);
    GenieCovariances g{};
    g.var_s1 = sys.variance("S1");
    g.var_s2 = sys.variance("S2");
    g.var_y1_given_s1 = sys.conditional_cov({"Y1"}, {"S1"})(0, 0);
    g.var_y2_given_s2 = sys.conditional_cov({"Y2"}, {"S2"})(0, 0);
    g.var_s1_given_x1 = sys.conditional_cov({"S1"}, {"X1"})(0, 0);
    g.var_s2_given_x2 = sys.conditional_cov({"S2"}, {"X2"})(0, 0);
    return g;
}

double epi_onebit_r2_bound(const InterferenceNetwork& net, const GenieSpec2& genie,
                           double r1) {
    require_weak(net, "epi_onebit_r2_bound");
    const ChannelConsts c = consts_of(net);
    const double sigma1_sq =
        1.0 - genie.rho2 * genie.rho2 - c.h21 * c.h21 * genie.eta1 * genie.eta1;
    const double sigma2_sq =
        1.0 - genie.rho1 * genie.rho1 - c.h12 * c.h12 * genie.eta2 * genie.eta2;
    if (sigma1_sq < 1e-9 || sigma2_sq < 1e-9) {
        throw InfeasibleGenieError("epi_onebit_r2_bound: slack condition violated");
    }
    const GenieCovariances v = genie_covariances(net, genie);
    if (v.var_s1_given_x1 <= 0.0 || v.var_s2_given_x2 <= 0.0) return kInf;
    const double t2 = half_log2(v.var_y2_given_s2 / v.var_s2_given_x2);
    const double a1 = v.var_s1 * v.var_y1_given_s1 / v.var_s1_given_x1;
    // sigma2 (the S2-side slack) tightens the numerator, sigma1 the
    // denominator; see onebit_bound for the pairing rationale.
    const double num = a1 * std::exp2(-2.0 * r1) - sigma2_sq;
    if (num <= 0.0) return -kInf;
    return t2 + half_log2(num / (v.var_s1 + sigma1_sq));
}

double epi_2r1r2_r2_bound(const InterferenceNetwork& net, const GenieSpec2& genie,
                          double r1) {
    require_weak(net, "epi_2r1r2_r2_bound");
    const ChannelConsts c = consts_of(net);
    const double sigma1_sq = 1.0 - c.h12 * c.h12 * genie.eta2 * genie.eta2;
    const double sigma2_sq = 1.0 - genie.rho2 * genie.rho2 - c.h21 * c.h21;
    if (sigma1_sq < 1e-9 || sigma2_sq < 1e-9) {
        throw InfeasibleGenieError("epi_2r1r2_r2_bound: slack condition violated");
    }
    const GenieCovariances v = genie_covariances(net, genie);
    if (v.var_s2_given_x2 <= 0.0) return kInf;
    const double t2 = half_log2(v.var_y2_given_s2 / v.var_s2_given_x2);
    const double num = c.vy1 * std::exp2(-2.0 * r1) - sigma1_sq;
    if (num <= 0.0) return -kInf;
    return t2 + half_log2(num / (c.h21 * c.h21 * std::exp2(2.0 * r1) + sigma2_sq));
}

RateRegion epi_outer_region(const InterferenceNetwork& net, const GenieSearchConfig& cfg) {
    require_weak(net, "epi_outer_region");
    const ChannelConsts c = consts_of(net);
    const double cap1 = half_log2(1.0 + c.p1);
    const double cap2 = half_log2(1.0 + c.p2);
    const auto r1s = linspace(0.0, cap1, cfg.samples);
    const auto r2s = linspace(0.0, cap2, cfg.samples);

    const SweepResult fwd = sweep_epi_envelopes(net, cfg, r1s);
    const SweepResult rev = sweep_epi_envelopes(net.swapped_users(), cfg, r2s);

    // reversed-direction envelopes as (R2, max R1) curves
    std::vector<RatePoint> rev_onebit, rev_tworate;
    for (int j = 0; j < cfg.samples; ++j) {
        if (std::isfinite(rev.onebit[j])) rev_onebit.emplace_back(r2s[j], rev.onebit[j]);
        if (std::isfinite(rev.tworate[j])) rev_tworate.emplace_back(r2s[j], rev.tworate[j]);
    }

    std::vector<RatePoint> boundary;
    boundary.reserve(cfg.samples);
    for (int k = 0; k < cfg.samples; ++k) {
        const double r1 = r1s[k];
        double r2 = broadcast_region_r2(net, r1);
        r2 = std::min(r2, fwd.onebit[k]);
        r2 = std::min(r2, fwd.tworate[k]);
        r2 = std::min(r2, invert_decreasing_bound(rev_onebit, r1));
        r2 = std::min(r2, invert_decreasing_bound(rev_tworate, r1));
        boundary.emplace_back(r1, std::max(0.0, r2));
    }
    return RateRegion::from_boundary(std::move(boundary),
                                     {{1.0, 0.0, cap1, "R1"}, {0.0, 1.0, cap2, "R2"}});
}

double genie_sum_rate_bound(const InterferenceNetwork& net, const GenieSearchConfig& cfg) {
    require_weak(net, "genie_sum_rate_bound");
    const ChannelConsts c = consts_of(net);
    if (c.h12 == 0.0 && c.h21 == 0.0) return tin_sum_rate(net);

    const auto rhos = rho_grid(cfg);
    const auto etas = eta_grid(cfg);
    const int nr = static_cast<int>(rhos.size());
    const int ne = static_cast<int>(etas.size());

    // IGA tables with running minima over the (ascending) eta prefix: the
    // usefulness cap |h eta| <= sqrt(1 - rho_other^2) admits exactly a prefix.
    std::vector<std::vector<double>> iga1(nr, std::vector<double>(ne));
    std::vector<std::vector<double>> iga2(nr, std::vector<double>(ne));
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < ne; ++j) {
            iga1[i][j] = side1(c, etas[j], rhos[i]).iga;
            iga2[i][j] = side2(c, etas[j], rhos[i]).iga;
            if (j > 0) {
                iga1[i][j] = std::min(iga1[i][j], iga1[i][j - 1]);
                iga2[i][j] = std::min(iga2[i][j], iga2[i][j - 1]);
            }
        }
    }
    auto prefix_count = [&](double eta_cap) {
        int cnt = 0;
        while (cnt < ne && etas[cnt] <= eta_cap) ++cnt;
        return cnt;
    };

    double best = kInf;
    GenieSpec2 best_arg{};
    for (int i1 = 0; i1 < nr; ++i1) {
        const double rho1 = rhos[i1];
        const double eta2_cap =
            c.h12 != 0.0 ? std::sqrt(1.0 - rho1 * rho1) / std::abs(c.h12) : kInf;
        for (int i2 = 0; i2 < nr; ++i2) {
            const double rho2 = rhos[i2];
            const double eta1_cap =
                c.h21 != 0.0 ? std::sqrt(1.0 - rho2 * rho2) / std::abs(c.h21) : kInf;

            double v1 = kInf;
            const int c1 = std::min(prefix_count(eta1_cap), ne);
            if (c1 > 0) v1 = iga1[i1][c1 - 1];
            if (std::isfinite(eta1_cap)) {
                v1 = std::min(v1, side1(c, eta1_cap, rho1).iga);
            }

            double v2 = kInf;
            const int c2 = std::min(prefix_count(eta2_cap), ne);
            if (c2 > 0) v2 = iga2[i2][c2 - 1];
            if (std::isfinite(eta2_cap)) {
                v2 = std::min(v2, side2(c, eta2_cap, rho2).iga);
            }

            if (v1 + v2 < best) {
                best = v1 + v2;
                best_arg = {std::min(eta1_cap, etas[std::max(c1 - 1, 0)]),
                            std::min(eta2_cap, etas[std::max(c2 - 1, 0)]), rho1, rho2};
            }
        }
    }

    if (cfg.refine && std::isfinite(best)) {
        auto f = [&](const std::vector<double>& x) {
            const double rho1 = x[0], rho2 = x[1];
            const double eta1 = std::exp(x[2]), eta2 = std::exp(x[3]);
            if (std::abs(rho1) > cfg.rho_limit || std::abs(rho2) > cfg.rho_limit)
                return kInf;
            if (c.h21 * c.h21 * eta1 * eta1 > 1.0 - rho2 * rho2 + 1e-15) return kInf;
            if (c.h12 * c.h12 * eta2 * eta2 > 1.0 - rho1 * rho1 + 1e-15) return kInf;
            return side1(c, eta1, rho1).iga + side2(c, eta2, rho2).iga;
        };
        const auto x = nelder_mead(f,
                                   {best_arg.rho1, best_arg.rho2,
                                    std::log(std::max(best_arg.eta1, 1e-9)),
                                    std::log(std::max(best_arg.eta2, 1e-9))},
                                   0.01, 300);
        best = std::min(best, f(x));
    }
    return best;
}

LowInterferenceResult low_interference_test(const InterferenceNetwork& net) {
    require_two_user(net, "low_interference_test");
    const ChannelConsts c = consts_of(net);
    const double a = std::abs(c.h12 * (1.0 + c.h21 * c.h21 * c.p1));
    const double b = std::abs(c.h21 * (1.0 + c.h12 * c.h12 * c.p2));
    LowInterferenceResult res;
    res.condition_value = a + b;
    res.in_regime = res.condition_value <= 1.0;
    if (res.in_regime) {
        // rho1 = sin(phi), rho2 = cos(phi) with a <= cos^2 phi <= 1 - b;
        // take the midpoint of the admissible band. The noise scales come
        // from the smartness identities eta_i rho_i = 1 + interference power.
        const double cos_sq = 0.5 * (a + (1.0 - b));
        const double rho2 = std::sqrt(cos_sq);
        const double rho1 = std::sqrt(std::max(0.0, 1.0 - cos_sq));
        res.witness.rho1 = rho1;
        res.witness.rho2 = rho2;
        res.witness.eta1 =
            rho1 > 1e-12 ? (1.0 + c.h12 * c.h12 * c.p2) / rho1 : 0.0;
        res.witness.eta2 =
            rho2 > 1e-12 ? (1.0 + c.h21 * c.h21 * c.p1) / rho2 : 0.0;
    }
    return res;
}

double symmetric_condition_value(double p, double h) {
    return std::abs(h + h * h * h * p);
}

bool symmetric_low_interference_test(double p, double h) {
    return symmetric_condition_value(p, h) <= 0.5;
}

SumCapacityResult sum_capacity(const InterferenceNetwork& net) {
    require_two_user(net, "sum_capacity");
    SumCapacityResult res;
    res.inner_bits = tin_sum_rate(net);
    const auto low = low_interference_test(net);
    if (low.in_regime) {
        res.established = true;
        res.sum_bits = res.inner_bits;
        res.outer_bits = res.inner_bits;
        res.witness = low.witness;
        return res;
    }
    res.established = false;
    res.sum_bits = res.inner_bits;
    res.outer_bits = std::min(etw_outer_region(net).max_sum(), genie_sum_rate_bound(net));
    return res;
}

bool smart_genie_check(double p, double h, double eta, double rho) {
    return std::abs(eta * rho - (1.0 + h * h * p)) <= 1e-9;
}

InrThreshold inr_threshold(double snr) {
    if (!(snr > 0.0)) throw InvalidChannelError("inr_threshold: SNR must be positive");
    // |h + h^3 P| is increasing in h >= 0 and reaches 0.5 by h = 0.5.
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (mid + mid * mid * mid * snr < 0.5 ? lo : hi) = mid;
    }
    InrThreshold t;
    t.gain = 0.5 * (lo + hi);
    t.inr_linear = t.gain * t.gain * snr;
    t.inr_db = 10.0 * std::log10(t.inr_linear);
    return t;
}

bool symmetric_genie_exists(double p, double h, double rho_step) {
    if (h == 0.0) return true;
    const double target = 1.0 + h * h * p; // eta * rho
    for (double rho = rho_step; rho < 1.0; rho += rho_step) {
        const double eta = target / rho;
        if (std::abs(h) * eta <= std::sqrt(1.0 - rho * rho)) return true;
    }
    return false;
}

RateRegion hk_gaussian_inner_region(const InterferenceNetwork& net, int split_grid,
                                    int samples) {
    require_weak(net, "hk_gaussian_inner_region");
    const ChannelConsts c = consts_of(net);
    const double cap1 = half_log2(1.0 + c.p1);
    const auto r1s = linspace(0.0, cap1, samples);
    std::vector<double> env(samples, -kInf);

    double exact_max_sum = -kInf;
    const auto lambdas = linspace(0.0, 1.0, split_grid);
    for (double l1 : lambdas) {
        for (double l2 : lambdas) {
            GaussianSystemBuilder b;
            b.add_variable("U1", l1 * c.p1);
            b.add_variable("V1", (1.0 - l1) * c.p1);
            b.add_variable("U2", l2 * c.p2);
            b.add_variable("V2", (1.0 - l2) * c.p2);
            b.add_variable("Z1", 1.0);
            b.add_variable("Z2", 1.0);
            b.add_linear("X1", {{"U1", 1.0}, {"V1", 1.0}});
            b.add_linear("X2", {{"U2", 1.0}, {"V2", 1.0}});
            b.add_linear("Y1", {{"X1", 1.0}, {"X2", c.h12}, {"Z1", 1.0}});
            b.add_linear("Y2", {{"X1", c.h21}, {"X2", 1.0}, {"Z2", 1.0}});
            const GaussianSystem sys = b.build();

            const double a = sys.conditional_mutual_information({"X1"}, {"Y1"}, {"U2"});
            const double bb = sys.conditional_mutual_information({"X2"}, {"Y2"}, {"U1"});
            const double i1_joint = sys.mutual_information({"X1", "U2"}, {"Y1"});
            const double i2_joint = sys.mutual_information({"X2", "U1"}, {"Y2"});
            const double i1_priv =
                sys.conditional_mutual_information({"X1"}, {"Y1"}, {"U1", "U2"});
            const double i2_priv =
                sys.conditional_mutual_information({"X2"}, {"Y2"}, {"U1", "U2"});
            const double i1_cond =
                sys.conditional_mutual_information({"X1", "U2"}, {"Y1"}, {"U1"});
            const double i2_cond =
                sys.conditional_mutual_information({"X2", "U1"}, {"Y2"}, {"U2"});

            const HalfPlane planes[] = {
                {1.0, 0.0, a}, {0.0, 1.0, bb},
                {1.0, 1.0, i1_joint + i2_priv},
                {1.0, 1.0, i2_joint + i1_priv},
                {1.0, 1.0, i1_cond + i2_cond},
                {2.0, 1.0, i1_joint + i1_priv + i2_cond},
                {1.0, 2.0, i2_joint + i2_priv + i1_cond},
            };
            exact_max_sum = std::max(
                exact_max_sum, polytope_max_sum({planes, planes + std::size(planes)}));
            for (int k = 0; k < samples; ++k) {
                const double r1 = r1s[k];
                if (r1 > a + 1e-12) break; // beyond this split's R1 reach
                double r2 = kInf;
                for (const auto& hp : planes) {
                    if (hp.a2 > 0.0) r2 = std::min(r2, (hp.c - hp.a1 * r1) / hp.a2);
                }
                if (r2 >= -1e-12 && r2 > env[k]) env[k] = r2;
            }
        }
    }

    std::vector<RatePoint> boundary;
    boundary.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        boundary.emplace_back(r1s[k], std::max(0.0, std::isfinite(env[k]) ? env[k] : 0.0));
    }
    RateRegion region = RateRegion::from_boundary(upper_concave_envelope(boundary));
    region.set_max_sum(exact_max_sum); // the union's corner can fall between samples
    return region;
}

} // namespace gicb::two_user
