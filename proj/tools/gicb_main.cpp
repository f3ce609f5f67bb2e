// gicb: inner/outer bounds on Gaussian interference network capacity,
// low-interference certificates, and figure-ready data emitters.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gicb/errors.hpp"
#include "gicb/network.hpp"
#include "gicb/report.hpp"
#include "gicb/two_user.hpp"
#include "gicb/verifiers.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDomainError = 3;

struct SweepRange {
    double start = 0.0, stop = 0.0, step = 1.0;
};

SweepRange parse_range(const std::string& spec) {
    SweepRange r;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &r.start, &r.stop, &r.step) != 3 ||
        r.step <= 0.0 || r.stop < r.start) {
        throw gicb::InvalidChannelError("bad sweep range '" + spec +
                                        "' (expected start:stop:step, step > 0)");
    }
    return r;
}

std::vector<double> range_values(const SweepRange& r) {
    std::vector<double> v;
    for (double x = r.start; x <= r.stop + 1e-9; x += r.step) v.push_back(x);
    return v;
}

struct ChannelArgs {
    std::string file;
    double p1 = 0.0, p2 = 0.0, h12 = 0.0, h21 = 0.0;
    bool inline_given = false;
};

gicb::InterferenceNetwork resolve_channel(const ChannelArgs& a) {
    if (!a.file.empty()) return gicb::report::load_channel_file(a.file);
    if (a.inline_given) return gicb::InterferenceNetwork::two_user(a.p1, a.p2, a.h12, a.h21);
    throw gicb::InvalidChannelError("no channel given: use --channel or --p1/--p2/--h12/--h21");
}

void add_channel_options(CLI::App* cmd, ChannelArgs& args) {
    cmd->add_option("--channel", args.file, "channel description JSON file");
    auto* p1 = cmd->add_option("--p1", args.p1, "power of user 1");
    cmd->add_option("--p2", args.p2, "power of user 2")->needs(p1);
    cmd->add_option("--h12", args.h12, "cross gain into receiver 1")->needs(p1);
    cmd->add_option("--h21", args.h21, "cross gain into receiver 2")->needs(p1);
    cmd->callback([&args, p1] { args.inline_given = p1->count() > 0; });
}

json genie_json(const gicb::GenieSpec2& g) {
    return {{"eta1", g.eta1}, {"eta2", g.eta2}, {"rho1", g.rho1}, {"rho2", g.rho2}};
}

int cmd_bounds(const ChannelArgs& ch, const std::string& out, int samples) {
    const auto net = resolve_channel(ch);
    if (net.users() != 2) {
        throw gicb::InvalidChannelError("bounds: two-user channels only "
                                        "(use network-bounds for M > 2)");
    }

    namespace tu = gicb::two_user;
    json j;
    j["tool_version"] = gicb::report::kToolVersion;
    j["tolerances"] = gicb::report::tolerances_json();
    j["channel"] = gicb::report::channel_json(net);

    const auto [tin1, tin2] = tu::tin_rate_pair(net);
    j["tin"] = {{"r1_bits", tin1}, {"r2_bits", tin2}, {"sum_bits", tin1 + tin2}};

    const auto low = tu::low_interference_test(net);
    j["low_interference"] = {{"in_regime", low.in_regime},
                             {"condition_value", low.condition_value}};
    if (low.in_regime) j["low_interference"]["witness"] = genie_json(low.witness);

    const auto cap = tu::sum_capacity(net);
    j["sum_capacity"] = {{"established", cap.established},
                         {"sum_bits", cap.sum_bits},
                         {"inner_bits", cap.inner_bits},
                         {"outer_bits", cap.outer_bits}};
    if (cap.established) j["sum_capacity"]["witness"] = genie_json(cap.witness);

    j["etw_region"] = gicb::report::region_json(tu::etw_outer_region(net, samples), samples);
    j["broadcast"] = {{"r1_max_at_r2_0", tu::broadcast_r1_bound(net, 0.0)},
                      {"r2_max_at_r1_0", tu::broadcast_r2_bound(net, 0.0)}};

    tu::GenieSearchConfig cfg;
    cfg.samples = samples;
    j["epi_region"] = gicb::report::region_json(tu::epi_outer_region(net, cfg));

    gicb::report::write_text(out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_region(const ChannelArgs& ch, const std::string& out, int samples,
               const std::string& format) {
    const auto net = resolve_channel(ch);
    namespace tu = gicb::two_user;

    const auto [tin1, tin2] = tu::tin_rate_pair(net);
    const auto etw = tu::etw_outer_region(net, samples);
    const auto hk = tu::hk_gaussian_inner_region(net, 64, samples);
    tu::GenieSearchConfig cfg;
    cfg.samples = samples;
    const auto epi = tu::epi_outer_region(net, cfg);

    const double cap1 = 0.5 * std::log2(1.0 + net.power(0));
    std::vector<std::vector<double>> rows;
    rows.reserve(samples);
    for (double r1 : gicb::linspace(0.0, cap1, samples)) {
        const double tin_corner = r1 <= tin1 + 1e-12 ? tin2 : 0.0;
        rows.push_back({r1, tin_corner, hk.r2_max_at(r1), etw.r2_max_at(r1),
                        tu::broadcast_region_r2(net, r1), epi.r2_max_at(r1)});
    }
    const std::vector<std::string> header = {"R1",     "R2_tin_corner", "R2_hk",
                                             "R2_etw", "R2_bc",         "R2_epi"};
    if (format == "json") {
        json j;
        j["tool_version"] = gicb::report::kToolVersion;
        j["tolerances"] = gicb::report::tolerances_json();
        j["channel"] = gicb::report::channel_json(net);
        j["columns"] = header;
        auto& data = j["rows"] = json::array();
        for (const auto& r : rows) data.push_back(r);
        gicb::report::write_text(out, j.dump(2) + "\n");
    } else {
        gicb::report::write_csv(out, header, rows);
    }
    return kExitOk;
}

int cmd_threshold_sweep(const std::string& range_spec, const std::string& mode,
                        const std::string& out, const std::string& format) {
    const auto snrs = range_values(parse_range(range_spec));
    namespace tu = gicb::two_user;
    namespace nw = gicb::network;

    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    if (mode == "two-user") {
        header = {"snr_db", "inr_db"};
        for (double snr_db : snrs) {
            const auto t = tu::inr_threshold(std::pow(10.0, snr_db / 10.0));
            rows.push_back({snr_db, t.inr_db});
        }
    } else if (mode == "three-user-sym") {
        header = {"snr_db", "inr_total_db_vector_genie", "inr_db_two_user"};
        for (double snr_db : snrs) {
            const double snr = std::pow(10.0, snr_db / 10.0);
            const auto t3 = nw::three_user_inr_threshold(snr);
            const auto t2 = tu::inr_threshold(snr);
            rows.push_back({snr_db, t3.inr_total_db, t2.inr_db});
        }
    } else {
        throw gicb::InvalidChannelError("unknown mode '" + mode +
                                        "' (expected two-user or three-user-sym)");
    }

    if (format == "json") {
        json j;
        j["tool_version"] = gicb::report::kToolVersion;
        j["mode"] = mode;
        j["columns"] = header;
        auto& data = j["rows"] = json::array();
        for (const auto& r : rows) data.push_back(r);
        gicb::report::write_text(out, j.dump(2) + "\n");
    } else {
        gicb::report::write_csv(out, header, rows);
    }
    return kExitOk;
}

int cmd_network_bounds(const ChannelArgs& ch, const std::string& out) {
    const auto net = resolve_channel(ch);
    namespace nw = gicb::network;

    json j;
    j["tool_version"] = gicb::report::kToolVersion;
    j["tolerances"] = gicb::report::tolerances_json();
    j["channel"] = gicb::report::channel_json(net);
    j["tin_sum_bits"] = nw::m_user_tin_sum_rate(net);
    j["vector_genie_sum_bound_bits"] =
        nw::vector_genie_sum_bound(net, nw::OrderingFunction::cyclic(net.users()));

    const auto cls = gicb::classify(net);
    if (cls == gicb::ChannelClass::ManyToOne) {
        const auto cap = nw::many_to_one_sum_capacity(net);
        j["many_to_one"] = {{"condition_value", nw::many_to_one_condition(net)},
                            {"in_regime", cap.established},
                            {"sum_bits", cap.sum_bits},
                            {"inner_bits", cap.inner_bits},
                            {"outer_bits", cap.outer_bits}};
    } else if (cls == gicb::ChannelClass::OneToMany) {
        const auto test = nw::one_to_many_test(net);
        const auto cap = nw::one_to_many_sum_capacity(net);
        j["one_to_many"] = {{"condition_value", test.condition_value},
                            {"in_regime", cap.established},
                            {"sum_bits", cap.sum_bits},
                            {"inner_bits", cap.inner_bits},
                            {"outer_bits", cap.outer_bits}};
        if (test.in_regime) j["one_to_many"]["lambda"] = test.lambda;
    } else if (cls == gicb::ChannelClass::SymmetricMUser && net.users() == 3) {
        const double p = net.power(0);
        const double h = net.gain(0, 1);
        const auto feas = nw::three_user_feasible(p, h);
        j["three_user_symmetric"] = {{"tin_optimal_certified", feas.feasible}};
        if (feas.feasible) {
            j["three_user_symmetric"]["witness"] = {{"rho1", feas.witness.rho1},
                                                    {"rho2", feas.witness.rho2},
                                                    {"rho12", feas.witness.rho12},
                                                    {"eta1", feas.witness.eta1},
                                                    {"eta2", feas.witness.eta2}};
            j["three_user_symmetric"]["genie_sum_bound_bits"] =
                nw::three_user_genie_sum_bound(p, h, feas.witness);
        }
    }

    gicb::report::write_text(out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, double tol, const std::string& inject,
               const std::string& out) {
    if (!(tol > 0.0)) {
        throw gicb::InvalidChannelError("tolerance must be positive");
    }
    gicb::VerifyOptions opts;
    opts.seed = seed;
    opts.chain_rule_tol_bits = tol;
    opts.inject_fault = inject;
    const auto results = gicb::run_core_verification(opts);

    json failures = json::array();
    json all = json::array();
    bool ok = true;
    for (const auto& r : results) {
        std::printf("[%s] %s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.empty() ? "" : ": ", r.detail.c_str());
        all.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        if (!r.passed) {
            ok = false;
            failures.push_back(r.name);
        }
    }
    if (!out.empty()) {
        json j;
        j["tool_version"] = gicb::report::kToolVersion;
        j["seed"] = seed;
        j["chain_rule_tol_bits"] = tol;
        j["failures"] = failures;
        j["results"] = all;
        gicb::report::write_text(out, j.dump(2) + "\n");
    }
    return ok ? kExitOk : kExitPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity bounds for Gaussian interference networks"};
    app.require_subcommand(1);

    ChannelArgs bounds_ch, region_ch, network_ch;
    std::string out_bounds = "bounds.json", out_region = "region.csv";
    std::string out_sweep = "thresholds.csv", out_network = "network.json", out_verify;
    std::string sweep_range, sweep_mode = "two-user";
    std::string format_region = "csv", format_sweep = "csv";
    std::string inject_fault;
    int samples = 512;
    std::uint64_t seed = 0x5eed2008u;
    double tol = 1e-9;

    auto* bounds = app.add_subcommand("bounds", "two-user bound report (JSON)");
    add_channel_options(bounds, bounds_ch);
    bounds->add_option("--out", out_bounds, "output path");
    bounds->add_option("--samples", samples, "boundary samples");

    auto* region = app.add_subcommand("region", "inner/outer region boundary table");
    add_channel_options(region, region_ch);
    region->add_option("--out", out_region, "output path");
    region->add_option("--samples", samples, "boundary samples");
    region->add_option("--format", format_region, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("threshold-sweep", "INR threshold vs SNR");
    sweep->add_option("--snr-db-range", sweep_range, "start:stop:step in dB")->required();
    sweep->add_option("--mode", sweep_mode, "two-user or three-user-sym")
        ->check(CLI::IsMember({"two-user", "three-user-sym"}));
    sweep->add_option("--out", out_sweep, "output path");
    sweep->add_option("--format", format_sweep, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* network = app.add_subcommand("network-bounds", "M-user bound report (JSON)");
    add_channel_options(network, network_ch);
    network->add_option("--out", out_network, "output path");

    auto* verify = app.add_subcommand("verify", "run the Gaussian-engine property suites");
    verify->add_option("--seed", seed, "RNG seed for the randomized suites");
    verify->add_option("--tol", tol, "chain-rule tolerance in bits");
    verify->add_option("--inject-fault", inject_fault,
                       "deliberately break the named suite (testing hook)");
    verify->add_option("--out", out_verify, "machine-readable results path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed()) return cmd_bounds(bounds_ch, out_bounds, samples);
        if (region->parsed())
            return cmd_region(region_ch, out_region, samples, format_region);
        if (sweep->parsed())
            return cmd_threshold_sweep(sweep_range, sweep_mode, out_sweep, format_sweep);
        if (network->parsed()) return cmd_network_bounds(network_ch, out_network);
        if (verify->parsed()) return cmd_verify(seed, tol, inject_fault, out_verify);
    } catch (const gicb::RegimeError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const gicb::InfeasibleGenieError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const gicb::PreconditionError& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
