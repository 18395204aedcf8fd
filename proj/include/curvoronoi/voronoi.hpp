#pragma once

#include <optional>
#include <string>

#include "curvoronoi/graph.hpp"
#include "curvoronoi/sampling.hpp"

namespace curvo {

// Voronoi adjacency graph of a configuration, with optional per-edge
// witnesses/margins and per-vertex cell certification.  A vertex is certified
// when its computed cell provably equals the infinite-process cell: the cell
// fits in B(x, rho) and B(x, 2 rho) lies inside the window, so no point
// outside the window can influence it.
struct VoronoiGraph {
    const ColoredConfig* config = nullptr;
    // undirected edges, i < j, lexicographically sorted
    std::vector<std::pair<int, int>> edge_list;
    // aligned with edge_list when built with margins; nullopt margin is the
    // "no third point" sentinel (infinite margin)
    std::vector<std::optional<double>> margins;
    std::vector<Point> witnesses;
    // CSR adjacency
    std::vector<int> adj_offset;
    std::vector<int> adj;
    // per-vertex cell data (when built with cells): max distance from the
    // center to its cell vertices, an upper bound on the cell diameter, and
    // the certification flag.  Unbounded/unknown cells carry +inf.
    std::vector<double> cell_rho;
    std::vector<double> diameter_bound;
    std::vector<std::uint8_t> certified;
    // farthest distance from the window center reached by the cell (exact for
    // bounded d=2 cells: the maximum over cell vertices); +inf when the cell
    // is unbounded or its vertices could not be computed
    std::vector<double> cell_reach;

    int size() const { return static_cast<int>(adj_offset.size()) - 1; }
    const int* neighbors_begin(int v) const { return adj.data() + adj_offset[v]; }
    const int* neighbors_end(int v) const { return adj.data() + adj_offset[v + 1]; }
    int degree(int v) const { return adj_offset[v + 1] - adj_offset[v]; }
};

struct BuildOptions {
    bool with_margins = false;  // witnesses and margins per edge (O(n) per edge)
    bool with_cells = true;     // cell vertices, diameters, certification
};

VoronoiGraph build_graph(const ColoredConfig& config, const BuildOptions& opts = {});

double cell_diameter_bound(const VoronoiGraph& graph, int vertex);

// Certified lower bound on the robustness parameter rho of the configuration
// restricted to B(window center, r): adjacency margins and non-adjacency
// separations, evaluated on a step-h grid with a Lipschitz-2 correction.
struct RobustnessReport {
    double r = 0.0;
    double rho = 0.0;
    double certification_step = 0.0;
};

RobustnessReport robustness(const ColoredConfig& config, double r, double h = -1.0);

struct AgreementReport {
    bool eql = false;
    bool rob = false;
    bool sma = false;
    bool sim = false;
    bool graphs_equal = false;
    bool inconclusive = false;
};

// Checks the four agreement conditions on a coupled pair built with radius
// 8r, and independently compares the pushed-forward manifold graph with the
// Euclidean graph on the inner ball B(0,r).
AgreementReport check_agreement(const CoupledPair& pair, double rho);

void write_graph(const std::string& path, const VoronoiGraph& graph);

// Poincare-disk coordinates of a hyperboloid point (unit model after
// rescaling by 1/R); used by the Delaunay reduction and by tests.
Eigen::Vector2d to_poincare(const SpaceSpec& space, const Point& x);
Point from_poincare(const SpaceSpec& space, const Eigen::Vector2d& u);

// Brute-force adjacency oracle via exact bisector clipping; independent of
// the Delaunay construction path.  Returns lexicographically sorted pairs.
std::vector<std::pair<int, int>> adjacency_oracle(const ColoredConfig& config);

}  // namespace curvo
