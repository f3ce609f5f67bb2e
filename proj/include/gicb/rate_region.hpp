#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace gicb {

/// Linear rate constraint a1*R1 + a2*R2 <= c, rates in bits per channel use.
struct HalfPlane {
    double a1 = 0.0;
    double a2 = 0.0;
    double c = 0.0;
    const char* name = ""; // optional constraint tag for reports
};

using RatePoint = std::pair<double, double>; // (R1, R2)

/// Convex rate region in the nonnegative quadrant, held as a list of
/// half-planes plus a sampled boundary curve. Regions built from smooth
/// outer-bound curves carry only the boundary; polytopes carry both. All
/// constraints here are monotone curves in (R1, R2), so intersections are
/// pointwise minima of R2-bounds on a shared R1 grid.
class RateRegion {
public:
    RateRegion() = default;

    /// Polytope region; the boundary is sampled on `samples` R1 points.
    static RateRegion from_halfplanes(std::vector<HalfPlane> hps, int samples = 512);

    /// Region under a sampled concave boundary curve (R1 ascending).
    static RateRegion from_boundary(std::vector<RatePoint> boundary,
                                    std::vector<HalfPlane> hps = {});

    const std::vector<HalfPlane>& halfplanes() const { return halfplanes_; }
    const std::vector<RatePoint>& boundary() const { return boundary_; }

    /// Largest feasible R2 at the given R1 (interpolated), or -inf outside.
    double r2_max_at(double r1) const;

    /// Largest feasible R1 (the boundary's right end).
    double r1_max() const;

    /// max (R1 + R2) over the region. Exact vertex-enumeration LP for pure
    /// polytopes, boundary-sample maximum otherwise, unless a constructor
    /// provided the exact value (set_max_sum).
    double max_sum() const;

    /// Records an exactly-computed max sum (e.g. from per-piece LPs of a
    /// union region, whose corner may fall between boundary samples).
    void set_max_sum(double v) { max_sum_override_ = v; }

    bool contains(double r1, double r2, double slack = 1e-9) const;

private:
    std::vector<HalfPlane> halfplanes_;
    std::vector<RatePoint> boundary_;
    bool polytope_ = false; // boundary derived purely from the half-planes
    double max_sum_override_ = std::numeric_limits<double>::quiet_NaN();
};

/// n evenly spaced values from a to b inclusive (n >= 2).
std::vector<double> linspace(double a, double b, int n);

/// Piecewise-linear interpolation on a curve sampled at ascending x;
/// clamped to the end values outside the range.
double interp_at(const std::vector<RatePoint>& curve, double x);

/// Upper concave envelope of a sampled curve, re-sampled on the same grid.
std::vector<RatePoint> upper_concave_envelope(const std::vector<RatePoint>& curve);

/// For a constraint R1 <= f(R2) sampled as (R2, f(R2)) with f nonincreasing,
/// returns the largest R2 such that f(R2) >= r1 (linear interpolation);
/// +inf if the constraint never binds, -inf if even R2 = 0 is excluded.
double invert_decreasing_bound(const std::vector<RatePoint>& r2_to_r1max, double r1);

/// max (R1 + R2) over {A R <= c, R >= 0} by enumerating candidate vertices.
double polytope_max_sum(const std::vector<HalfPlane>& hps);

} // namespace gicb
