#pragma once

#include <map>
#include <vector>

#include "curvoronoi/error.hpp"

namespace curvo {

// Minimal abstract undirected graph used by the graph-Voronoi and cutset
// operations.
struct SimpleGraph {
    std::vector<std::vector<int>> nbr;

    int size() const { return static_cast<int>(nbr.size()); }
    void add_edge(int a, int b) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
};

// Graph Voronoi cells: C(x;X) = {y : d(y,x) <= d(y,X)} for each occupied x.
// Ties assign y to several cells, matching the set definition.
std::map<int, std::vector<int>> graph_voronoi(const SimpleGraph& g,
                                              const std::vector<int>& occupied);

}  // namespace curvo
