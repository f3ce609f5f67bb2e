#include "gicb/rate_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gicb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool feasible(const std::vector<HalfPlane>& hps, double r1, double r2, double slack) {
    if (r1 < -slack || r2 < -slack) return false;
    for (const auto& hp : hps) {
        if (hp.a1 * r1 + hp.a2 * r2 > hp.c + slack) return false;
    }
    return true;
}
} // namespace

std::vector<double> linspace(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("linspace: need at least 2 samples");
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    v.back() = b;
    return v;
}

double interp_at(const std::vector<RatePoint>& curve, double x) {
    if (curve.empty()) return -kInf;
    if (x <= curve.front().first) return curve.front().second;
    if (x >= curve.back().first) return curve.back().second;
    auto it = std::lower_bound(curve.begin(), curve.end(), x,
                               [](const RatePoint& p, double v) { return p.first < v; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    if (x1 == x0) return std::min(y0, y1);
    const double t = (x - x0) / (x1 - x0);
    return y0 + t * (y1 - y0);
}

std::vector<RatePoint> upper_concave_envelope(const std::vector<RatePoint>& curve) {
    if (curve.size() < 3) return curve;
    // Monotone-chain upper hull over the sampled points.
    std::vector<RatePoint> hull;
    for (const auto& p : curve) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            const double cross = (b.first - a.first) * (p.second - a.second) -
                                 (b.second - a.second) * (p.first - a.first);
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }
    std::vector<RatePoint> out;
    out.reserve(curve.size());
    for (const auto& p : curve) out.emplace_back(p.first, interp_at(hull, p.first));
    return out;
}

double invert_decreasing_bound(const std::vector<RatePoint>& r2_to_r1max, double r1) {
    if (r2_to_r1max.empty()) return kInf;
    if (r2_to_r1max.front().second < r1) return -kInf; // excluded even at R2 = 0
    if (r2_to_r1max.back().second >= r1) return kInf;  // never binds on the sampled range
    for (std::size_t i = 1; i < r2_to_r1max.size(); ++i) {
        const auto& [x0, y0] = r2_to_r1max[i - 1];
        const auto& [x1, y1] = r2_to_r1max[i];
        if (y1 < r1) {
            if (y0 == y1) return x0;
            return x0 + (x1 - x0) * (y0 - r1) / (y0 - y1);
        }
    }
    return r2_to_r1max.back().first;
}

double polytope_max_sum(const std::vector<HalfPlane>& hps) {
    std::vector<HalfPlane> all = hps;
    all.push_back({-1.0, 0.0, 0.0, "r1>=0"});
    all.push_back({0.0, -1.0, 0.0, "r2>=0"});
    double best = -kInf;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const auto& u = all[i];
            const auto& v = all[j];
            const double det = u.a1 * v.a2 - u.a2 * v.a1;
            if (std::abs(det) < 1e-14) continue;
            const double r1 = (u.c * v.a2 - u.a2 * v.c) / det;
            const double r2 = (u.a1 * v.c - u.c * v.a1) / det;
            if (feasible(hps, r1, r2, 1e-9) && r1 >= -1e-9 && r2 >= -1e-9) {
                best = std::max(best, r1 + r2);
            }
        }
    }
    return best;
}

RateRegion RateRegion::from_halfplanes(std::vector<HalfPlane> hps, int samples) {
    RateRegion region;
    region.halfplanes_ = std::move(hps);
    region.polytope_ = true;

    double r1_cap = kInf;
    for (const auto& hp : region.halfplanes_) {
        if (hp.a1 > 0.0 && hp.a2 == 0.0) r1_cap = std::min(r1_cap, hp.c / hp.a1);
    }
    if (!std::isfinite(r1_cap)) {
        // fall back to the sum constraints' reach
        for (const auto& hp : region.halfplanes_) {
            if (hp.a1 > 0.0) r1_cap = std::min(r1_cap, hp.c / hp.a1);
        }
    }
    if (!std::isfinite(r1_cap)) throw std::invalid_argument("region: R1 is unbounded");

    region.boundary_.reserve(samples);
    for (double r1 : linspace(0.0, r1_cap, samples)) {
        double r2 = kInf;
        for (const auto& hp : region.halfplanes_) {
            if (hp.a2 > 0.0) r2 = std::min(r2, (hp.c - hp.a1 * r1) / hp.a2);
        }
        region.boundary_.emplace_back(r1, std::max(0.0, r2));
    }
    return region;
}

RateRegion RateRegion::from_boundary(std::vector<RatePoint> boundary,
                                     std::vector<HalfPlane> hps) {
    RateRegion region;
    region.boundary_ = std::move(boundary);
    region.halfplanes_ = std::move(hps);
    return region;
}

double RateRegion::r2_max_at(double r1) const {
    if (boundary_.empty()) return -kInf;
    if (r1 < -1e-12 || r1 > r1_max() + 1e-12) return -kInf;
    return interp_at(boundary_, r1);
}

double RateRegion::r1_max() const {
    return boundary_.empty() ? 0.0 : boundary_.back().first;
}

double RateRegion::max_sum() const {
    if (!std::isnan(max_sum_override_)) return max_sum_override_;
    if (polytope_) return polytope_max_sum(halfplanes_);
    double best = -kInf;
    for (const auto& [r1, r2] : boundary_) best = std::max(best, r1 + r2);
    return best;
}

bool RateRegion::contains(double r1, double r2, double slack) const {
    if (!feasible(halfplanes_, r1, r2, slack)) return false;
    if (!boundary_.empty()) {
        if (r1 > r1_max() + slack) return false;
        if (r2 > interp_at(boundary_, r1) + slack) return false;
    }
    return true;
}

} // namespace gicb
