#pragma once

#include <string>

#include "curvoronoi/graph.hpp"
#include "curvoronoi/sampling.hpp"

namespace curvo {

// Epsilon-net over a window: a maximal 2eps-separated vertex set (P1) whose
// 2eps-balls cover the shrunken window B(center, radius - 2eps) (P2), with
// edges between vertices at distance < 4eps (overlapping 2eps-balls).
struct NetGraph {
    SpaceSpec space;
    Window window;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd vertices;  // ambient_dim x n
    std::vector<std::pair<int, int>> edges;
    // CSR adjacency
    std::vector<int> adj_offset;
    std::vector<int> adj;

    int size() const { return static_cast<int>(vertices.cols()); }
    Point vertex(int i) const { return vertices.col(i); }
    int degree(int v) const { return adj_offset[v + 1] - adj_offset[v]; }
    SimpleGraph to_simple() const;
};

// Greedy maximal packing over a shuffled Poisson candidate stream at
// intensity 50/ball_volume(eps); P1 holds by construction, P2 is verified on
// 1e5 random probes, re-running with a 4x denser stream on failure (at most
// three times before a construction error).
NetGraph build_net(const SpaceSpec& space, const Window& window, double epsilon,
                   std::uint64_t seed);

// Observed max degree and the packing bound ceil(V_c(5 eps)/V_c(eps)).
struct DegreeReport {
    int observed = 0;
    int bound = 0;
};
DegreeReport max_degree(const NetGraph& net);
int degree_bound(const SpaceSpec& space, double epsilon);

// Sampled check of d_M(x,y)/(4 eps) <= d_G(x,y) <= (Delta(eps)/(2 eps)) d_M(x,y)
// over vertex pairs of the largest component, with BFS graph distances.
struct QuasiIsometryReport {
    int samples = 0;
    int violations = 0;
    double worst_lower_slack = std::numeric_limits<double>::infinity();
    double worst_upper_slack = std::numeric_limits<double>::infinity();
};
QuasiIsometryReport quasi_isometry_check(const NetGraph& net, int samples,
                                         std::uint64_t seed = 1);

// Discrete path whose 2eps-balls cover the polyline, each path vertex's
// 2eps-ball meeting the polyline; consecutive path vertices are adjacent.
std::vector<int> trace_path(const NetGraph& net, const std::vector<Point>& polyline);

struct Cutset {
    int source = -1;
    std::vector<int> target;
    std::vector<int> members;
    bool minimal = false;
    bool connected = false;
};

// Greedy minimal cutset separating x from the target set, starting from the
// complement of {x} and the target and removing vertices (ascending index by
// default) while separation persists.
Cutset extract_minimal_cutset(const SimpleGraph& graph, int x,
                              const std::vector<int>& target, bool descending = false);

// Net vertices within 4 eps of the window boundary sphere.
std::vector<int> boundary_target(const NetGraph& net);

// Exact count of connected n-vertex subsets containing x (lattice animals
// rooted at x), n <= 8.
long long enumerate_animals(const SimpleGraph& graph, int x, int n);

void write_net(const std::string& path, const NetGraph& net);

}  // namespace curvo
