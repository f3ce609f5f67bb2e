#include "gicb/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gicb/errors.hpp"

namespace gicb::report {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_number(values[i]);
    }
    return row;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::string body;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) body += ',';
        body += header[i];
    }
    body += '\n';
    for (const auto& r : rows) {
        body += csv_row(r);
        body += '\n';
    }
    write_text(path, body);
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
}

InterferenceNetwork load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidChannelError("cannot open channel file: " + path);
    nlohmann::json j;
    in >> j;

    const int m = j.at("M").get<int>();
    const auto h_rows = j.at("H").get<std::vector<std::vector<double>>>();
    const auto p_vec = j.at("P").get<std::vector<double>>();
    if (static_cast<int>(h_rows.size()) != m || static_cast<int>(p_vec.size()) != m) {
        throw InvalidChannelError("channel file: H/P dimensions do not match M");
    }
    Eigen::MatrixXd h(m, m);
    for (int r = 0; r < m; ++r) {
        if (static_cast<int>(h_rows[r].size()) != m) {
            throw InvalidChannelError("channel file: H is not MxM");
        }
        for (int c = 0; c < m; ++c) h(r, c) = h_rows[r][c];
    }
    Eigen::VectorXd p(m);
    for (int t = 0; t < m; ++t) p(t) = p_vec[t];

    Eigen::VectorXd noise = Eigen::VectorXd::Ones(m);
    bool need_standardize = j.contains("noise");
    if (need_standardize) {
        const auto noise_vec = j.at("noise").get<std::vector<double>>();
        if (static_cast<int>(noise_vec.size()) != m) {
            throw InvalidChannelError("channel file: noise vector length != M");
        }
        for (int r = 0; r < m; ++r) noise(r) = noise_vec[r];
    }
    for (int r = 0; r < m && !need_standardize; ++r) {
        if (h(r, r) != 1.0) need_standardize = true;
    }
    return need_standardize ? standardize(h, p, noise) : InterferenceNetwork(h, p);
}

nlohmann::json channel_json(const InterferenceNetwork& net) {
    nlohmann::json j;
    j["M"] = net.users();
    auto& h = j["H"] = nlohmann::json::array();
    for (int r = 0; r < net.users(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int t = 0; t < net.users(); ++t) row.push_back(net.gain(r, t));
        h.push_back(row);
    }
    auto& p = j["P"] = nlohmann::json::array();
    for (int t = 0; t < net.users(); ++t) p.push_back(net.power(t));
    j["class"] = to_string(classify(net));
    return j;
}

nlohmann::json region_json(const RateRegion& region, int boundary_stride) {
    nlohmann::json j;
    auto& hps = j["halfplanes"] = nlohmann::json::array();
    for (const auto& hp : region.halfplanes()) {
        hps.push_back({{"a1", hp.a1}, {"a2", hp.a2}, {"c", hp.c}, {"name", hp.name}});
    }
    auto& b = j["boundary"] = nlohmann::json::array();
    const auto& pts = region.boundary();
    for (std::size_t i = 0; i < pts.size(); i += boundary_stride) {
        b.push_back({pts[i].first, pts[i].second});
    }
    if (!pts.empty() && (pts.size() - 1) % boundary_stride != 0) {
        b.push_back({pts.back().first, pts.back().second});
    }
    return j;
}

nlohmann::json tolerances_json() {
    return {
        {"psd_eigenvalue", -1e-10},
        {"mi_zero_bits", 1e-9},
        {"chain_rule_bits", 1e-9},
        {"slack_floor", 1e-9},
        {"pinv_cutoff_rel", 1e-12},
        {"det_degenerate", 1e-300},
    };
}

} // namespace gicb::report
