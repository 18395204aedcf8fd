#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "curvoronoi/geometry.hpp"
#include "curvoronoi/rng.hpp"

namespace curvo {

// Sampling window: a metric ball.  Analysis is restricted to
// B(center, radius - buffer); the buffer absorbs boundary effects.
struct Window {
    Point center;
    double radius = 0.0;
    double buffer = 0.0;

    void validate(const SpaceSpec& space) const;
};

// Poisson configuration with per-point uniform marks.  The white set at level
// p is {i : marks[i] <= p}, which is monotone in p by construction, so one
// configuration serves every p in a sweep.  Points are stored as columns.
struct ColoredConfig {
    SpaceSpec space;
    Window window;
    double intensity = 0.0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd points;  // ambient_dim x n
    Eigen::VectorXd marks;

    int size() const { return static_cast<int>(points.cols()); }
    Point point(int i) const { return points.col(i); }
};

// Expected-count guard: hyperbolic volumes blow up exponentially in the
// radius, so refuse quietly impossible requests instead of thrashing.
inline constexpr double kExpectedCountCap = 1e8;

ColoredConfig sample_config(const SpaceSpec& space, const Window& window, double lambda,
                            bool p_marks, std::uint64_t seed,
                            double expected_count_cap = kExpectedCountCap);

// Inverse radial CDF F(r) = V_c(r)/V_c(R) of the uniform distribution on a
// ball of radius R.
double radial_sample(const SpaceSpec& space, double R, double u);

std::vector<int> white_set(const ColoredConfig& config, double p);

// Euclidean-vs-manifold coupling through a normal chart at x0.  The shared
// component is a PPP with density lambda*min(f,1) in chart coordinates
// (f = chart_density); the two discrepancy layers have densities
// lambda*(f-1)^+ and lambda*(1-f)^+ and are sampled by thinning.  Matched
// points carry identical marks.
struct CoupledPair {
    ColoredConfig euclidean_config;  // on B_{R^d}(0, r)
    ColoredConfig manifold_config;   // on B_M(x0, r)
    Chart chart;
    double agreement_radius = 0.0;
    // (index in euclidean_config, index in manifold_config) of shared points
    std::vector<std::pair<int, int>> matched;
};

CoupledPair couple_local(const SpaceSpec& space, const Point& x0, double r, double lambda,
                         std::uint64_t seed);

// Versioned text format; coordinates at 17 significant digits round-trip
// bit-exactly.
void write_pointset(const std::string& path, const ColoredConfig& config);
ColoredConfig read_pointset(const std::string& path);

// Sample a uniform direction on S^(d-1).
Eigen::VectorXd sample_direction(Rng& rng, int d);

}  // namespace curvo
