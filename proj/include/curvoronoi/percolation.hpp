#pragma once

#include <map>
#include <string>

#include "curvoronoi/voronoi.hpp"

namespace curvo {

// Connected components of the white region at level p: white vertices share a
// label iff they are connected through white vertices in the Voronoi graph.
// Labels are deterministic (minimum vertex index of the cluster); black
// vertices carry label -1.
struct ClusterLabeling {
    const VoronoiGraph* graph = nullptr;
    double p = 0.0;
    std::vector<int> labels;
    std::map<int, int> sizes;
    // bounding radius: max distance from the labeled root's center
    std::map<int, double> radii;
};

ClusterLabeling clusters(const VoronoiGraph& graph, double p);

// Vertices whose cells meet the closed metric ball B(x, r): centers inside
// the ball, plus cells met by the boundary sphere (located by nearest-center
// walks from sampled sphere points).
std::vector<int> cells_meeting_ball(const VoronoiGraph& graph, const Point& x,
                                    double r, int sphere_samples = 1024);

// Nearest configuration point to q by greedy descent on the Voronoi graph.
int nearest_center(const VoronoiGraph& graph, const Point& q, int hint = 0);

// Annulus-crossing event at scale eps: a white cluster with one cell meeting
// B(x, eps) and another meeting the complement of B(x, 4 eps).  determined:
// every cell meeting B(x, 5 eps) is certified with diameter <= eps/5, so the
// verdict depends only on points within B(x, 10 eps).
struct CrossReport {
    bool crossed = false;
    bool determined = false;
};
CrossReport detect_cross(const VoronoiGraph& graph, const Point& x, double eps,
                         double p);

// Local uniqueness at scale eps: exactly one component of the white region
// restricted to B(x, 18 eps) crosses B(x, 9 eps) \ B(x, 6 eps), and that
// component crosses B(x, 16 eps) \ B(x, 2 eps).  determined: every cell
// meeting B(x, 20 eps) is certified with diameter <= eps/2.
struct UniquenessReport {
    bool holds = false;
    bool determined = false;
};
UniquenessReport detect_local_uniqueness(const VoronoiGraph& graph, const Point& x,
                                         double eps, double p);

// Minimal distance from x to the common face of the cells of x and y in the
// tessellation of V u {y}; +inf when the cells share no face.  Exact interval
// arithmetic in d=2, convex minimization over the exact face polygon in d=3.
double score(const SpaceSpec& space, const Point& x, const std::vector<Point>& V,
             const Point& y);

// One region added to the explored zone: points y outside the previous zone
// with score(x, first revealed_count revealed points, y) <= r; freeze steps
// record r = +inf with the convention "score finite".
struct ExploreRegion {
    int x_index = -1;          // index into revealed order
    int revealed_count = 0;    // snapshot size of the revealed set
    double r = 0.0;
};

struct ExplorationState {
    const ColoredConfig* config = nullptr;
    Point origin;
    double p = 0.0;
    double first_radius = 0.0;         // radius of the initial search ball
    std::vector<int> revealed;         // config indices in reveal order
    std::vector<int> white, black;     // revealed indices by color
    std::vector<int> frozen;           // frozen white indices
    std::vector<ExploreRegion> regions;
    int steps = 0;
    bool partial = false;

    // membership in the explored zone Z_n, by exact score predicates
    bool in_explored_zone(const Point& y) const;
};

// Quenched exploration of the white cluster of the cell containing x0,
// revealing one configuration point at a time; terminates when every
// revealed white cell is frozen.  partial is set when the cluster or its
// neighborhood reaches uncertified cells near the window boundary.
ExplorationState explore_cluster(const ColoredConfig& config, const Point& x0,
                                 double p);

struct TableRow {
    double p = 0.0;
    int n = 0;
    int successes = 0;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct Estimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> scales;
    std::vector<TableRow> table;
};

// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(int k, int n);

// Per-replica critical coloring levels (the smallest p at which the event
// holds on the replica's configuration; monotone coupling through shared
// marks makes this well defined).  Exposed so the harness can fan replicas
// out to workers and aggregate identically to the sequential estimators.
double critical_cross_mark(const SpaceSpec& space, double lambda, double eps_scale,
                           std::uint64_t replica_seed);
double critical_connection_mark(const SpaceSpec& space, double lambda, double N_scale,
                                double D_separation, std::uint64_t replica_seed);

// Deterministic aggregation of per-replica critical levels.
Estimate summarize_pc(std::vector<double> marks, const std::vector<double>& p_grid,
                      std::uint64_t seed, const std::map<std::string, double>& scales);
Estimate summarize_pu(std::vector<double> marks, const std::vector<double>& p_grid,
                      double alpha, std::uint64_t seed,
                      const std::map<std::string, double>& scales);

// Critical coloring level of the annulus-crossing event at the window
// center, per replica; the estimate is the level where the crossing
// probability passes 1/2 (the empirical median), with an order-statistic CI.
Estimate estimate_pc(const SpaceSpec& space, double lambda, double eps_scale,
                     const std::vector<double>& p_grid, int replicas,
                     std::uint64_t seed);

// Ball-to-ball connection: white connection between B(x, N) and B(y, N) with
// x the window center and y at distance D; the estimate is the smallest grid
// level whose connection probability reaches 1 - alpha.
Estimate estimate_pu(const SpaceSpec& space, double lambda, double N_scale,
                     double D_separation, double alpha,
                     const std::vector<double>& p_grid, int replicas,
                     std::uint64_t seed);

// Windowed surrogate of cluster refinement: every p'-cluster crossing the
// window (members in both half-windows) contains a p-white vertex of a
// p-cluster that also crosses.
struct RefinementReport {
    int crossing_clusters = 0;
    int refined_clusters = 0;
    bool holds = true;
};
RefinementReport monotone_cluster_refinement(const ColoredConfig& config, double p,
                                             double p_prime);

}  // namespace curvo
