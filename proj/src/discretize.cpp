#include "curvoronoi/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "internal.hpp"

namespace curvo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kProbeCount = 100000;
constexpr double kCandidatesPerBall = 50.0;

struct BallSampler {
    const SpaceSpec* space;
    Point center;
    double radius;
    Chart chart;  // hyperbolic only

    BallSampler(const SpaceSpec& sp, const Point& c, double r)
        : space(&sp), center(c), radius(r) {
        if (!sp.is_euclidean()) chart = normal_chart(sp, c);
    }
    Point draw(Rng& rng) const {
        double r = radial_sample(*space, radius, rng.uniform());
        Eigen::VectorXd dir = sample_direction(rng, space->dimension);
        if (space->is_euclidean()) return center + r * dir;
        double R = space->model_radius();
        Point u = chart.frame * dir;
        return std::cosh(r / R) * center + std::sinh(r / R) * R * u;
    }
};

// Fast threshold comparisons against a column-stored point set, avoiding the
// per-call validation of distance().
struct SepCheck {
    bool euclid;
    double R2;      // model radius squared (hyperbolic)
    double thresh;  // squared distance (euclid) or -<x,y> threshold

    SepCheck(const SpaceSpec& sp, double dist) : euclid(sp.is_euclidean()) {
        if (euclid) {
            R2 = 0.0;
            thresh = dist * dist;
        } else {
            double R = sp.model_radius();
            R2 = R * R;
            thresh = R2 * std::cosh(dist / R);
        }
    }
    // true when d(p, col) <= dist
    bool within(const Eigen::MatrixXd& pts, int col, const Point& p) const {
        if (euclid) return (pts.col(col) - p).squaredNorm() <= thresh;
        double md = -pts(0, col) * p[0];
        for (int k = 1; k < p.size(); ++k) md += pts(k, col) * p[k];
        return -md <= thresh;
    }
};

}  // namespace

SimpleGraph NetGraph::to_simple() const {
    SimpleGraph g;
    g.nbr.resize(size());
    for (auto& e : edges) g.add_edge(e.first, e.second);
    return g;
}

NetGraph build_net(const SpaceSpec& space, const Window& window, double epsilon,
                   std::uint64_t seed) {
    space.validate();
    window.validate(space);
    if (!(epsilon > 0.0)) throw InputError("build_net: epsilon must be > 0");
    if (epsilon >= window.radius / 4.0)
        throw InputError("build_net: epsilon must be < window.radius / 4");

    double c = space.curvature;
    int d = space.dimension;
    double window_vol = ball_volume(c, d, window.radius);
    double eps_ball_vol = ball_volume(c, d, epsilon);
    BallSampler sampler(space, window.center, window.radius);
    BallSampler probe_sampler(space, window.center, window.radius - 2.0 * epsilon);
    SepCheck sep(space, 2.0 * epsilon);       // packing: reject when <= is near
    SepCheck cover(space, 2.0 * epsilon);     // covering: accept when <= 2 eps
    SepCheck edge_check(space, 4.0 * epsilon);

    for (int attempt = 0; attempt < 4; ++attempt) {
        double intensity = kCandidatesPerBall * std::pow(4.0, attempt) / eps_ball_vol;
        double mean = intensity * window_vol;
        if (mean > 5e7) {
            std::ostringstream os;
            os << "build_net: candidate stream of expected size " << mean
               << " exceeds the resource guard";
            throw ResourceError(os.str());
        }
        Rng rng(split_seed(seed, attempt));
        auto ncand = static_cast<long long>(rng.poisson(mean));

        Eigen::MatrixXd verts(space.ambient_dim(), 256);
        int nv = 0;
        // strictly farther than 2 eps from every accepted vertex; accepting a
        // point at distance exactly 2 eps keeps P1 (>= 2 eps)
        auto clear_of_all = [&](const Point& p) {
            for (int v = 0; v < nv; ++v) {
                if (space.is_euclidean()) {
                    if ((verts.col(v).head(d) - p).squaredNorm() <
                        4.0 * epsilon * epsilon)
                        return false;
                } else {
                    double md = -verts(0, v) * p[0];
                    for (int k = 1; k < p.size(); ++k) md += verts(k, v) * p[k];
                    if (-md < sep.thresh) return false;
                }
            }
            return true;
        };
        auto accept = [&](const Point& p) {
            if (nv == verts.cols()) verts.conservativeResize(Eigen::NoChange, 2 * nv);
            verts.col(nv++) = p;
        };
        for (long long i = 0; i < ncand; ++i) {
            Point p = sampler.draw(rng);
            if (clear_of_all(p)) accept(p);
        }
        // repair pass: a probe of the shrunken window left uncovered is itself
        // a legal vertex (being uncovered means > 2 eps from every vertex), so
        // adding it restores maximality where the candidate stream was thin
        Rng rrng(split_seed(seed, 200 + attempt));
        for (int i = 0; i < kProbeCount; ++i) {
            Point p = probe_sampler.draw(rrng);
            if (clear_of_all(p)) accept(p);
        }
        // P2: every probe of the shrunken window within 2 eps of a vertex.
        // An uncovered probe is itself a legal vertex (> 2 eps from all), so
        // adopt it and retry with a fresh stream until one passes clean
        bool covered = false;
        for (int round = 0; round < 16 && !covered; ++round) {
            Rng prng(split_seed(seed, 100 + 16 * attempt + round));
            covered = nv > 0;
            for (int i = 0; i < kProbeCount; ++i) {
                Point p = probe_sampler.draw(prng);
                bool hit = false;
                for (int v = 0; v < nv && !hit; ++v)
                    hit = cover.within(verts, v, p);
                if (!hit) {
                    accept(p);
                    covered = false;
                }
            }
        }
        if (!covered) continue;
        verts.conservativeResize(Eigen::NoChange, nv);

        NetGraph net;
        net.space = space;
        net.window = window;
        net.epsilon = epsilon;
        net.seed = seed;
        net.vertices = std::move(verts);
        for (int i = 0; i < nv; ++i) {
            Point pi = net.vertices.col(i);
            for (int j = i + 1; j < nv; ++j) {
                // edge iff open 2 eps balls intersect: distance < 4 eps
                bool adj;
                if (space.is_euclidean())
                    adj = (net.vertices.col(j) - pi).squaredNorm() <
                          16.0 * epsilon * epsilon;
                else {
                    double md = -net.vertices(0, j) * pi[0];
                    for (int k = 1; k < pi.size(); ++k) md += net.vertices(k, j) * pi[k];
                    adj = -md < edge_check.thresh;
                }
                if (adj) net.edges.emplace_back(i, j);
            }
        }
        detail::build_csr(nv, net.edges, net.adj_offset, net.adj);
        return net;
    }
    throw ConstructionError(
        "build_net: covering not verified after 3 candidate densifications");
}

int degree_bound(const SpaceSpec& space, double epsilon) {
    double c = space.curvature;
    int d = space.dimension;
    double ratio = ball_volume(c, d, 5.0 * epsilon) / ball_volume(c, d, epsilon);
    // the Euclidean ratio is exactly 5^d; guard the ceil against fp noise
    return static_cast<int>(std::ceil(ratio * (1.0 - 1e-12)));
}

DegreeReport max_degree(const NetGraph& net) {
    DegreeReport rep;
    rep.bound = degree_bound(net.space, net.epsilon);
    for (int v = 0; v < net.size(); ++v) rep.observed = std::max(rep.observed, net.degree(v));
    return rep;
}

namespace {

void bfs_dist(const NetGraph& net, int src, std::vector<int>& dist) {
    dist.assign(net.size(), -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int i = net.adj_offset[v]; i < net.adj_offset[v + 1]; ++i) {
            int w = net.adj[i];
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
}

}  // namespace

QuasiIsometryReport quasi_isometry_check(const NetGraph& net, int samples,
                                         std::uint64_t seed) {
    QuasiIsometryReport rep;
    int n = net.size();
    if (n < 2) throw InputError("quasi_isometry_check: need at least two vertices");
    // largest component
    std::vector<int> comp(n, -1), dist;
    int ncomp = 0;
    for (int v = 0; v < n; ++v) {
        if (comp[v] >= 0) continue;
        bfs_dist(net, v, dist);
        for (int w = 0; w < n; ++w)
            if (dist[w] >= 0) comp[w] = ncomp;
        ++ncomp;
    }
    std::vector<int> count(ncomp, 0);
    for (int v = 0; v < n; ++v) ++count[comp[v]];
    int big = static_cast<int>(std::max_element(count.begin(), count.end()) -
                               count.begin());
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (comp[v] == big) members.push_back(v);
    if (members.size() < 2)
        throw InputError("quasi_isometry_check: no component with two vertices");

    double eps = net.epsilon;
    double upper_c = degree_bound(net.space, eps) / (2.0 * eps);
    Rng rng(seed);
    int sources = std::min<int>(64, samples);
    int per_source = (samples + sources - 1) / sources;
    for (int s = 0; s < sources; ++s) {
        int src = members[static_cast<int>(rng.uniform() * members.size())];
        bfs_dist(net, src, dist);
        for (int k = 0; k < per_source && rep.samples < samples; ++k) {
            int dst = members[static_cast<int>(rng.uniform() * members.size())];
            if (dst == src) continue;
            ++rep.samples;
            double dm = distance(net.space, net.vertex(src), net.vertex(dst));
            double dg = dist[dst];
            double lower_slack = dg - dm / (4.0 * eps);
            double upper_slack = upper_c * dm - dg;
            rep.worst_lower_slack = std::min(rep.worst_lower_slack, lower_slack);
            rep.worst_upper_slack = std::min(rep.worst_upper_slack, upper_slack);
            if (lower_slack < 0.0 || upper_slack < 0.0) ++rep.violations;
        }
    }
    return rep;
}

std::vector<int> trace_path(const NetGraph& net, const std::vector<Point>& polyline) {
    if (polyline.empty()) throw InputError("trace_path: empty polyline");
    double eps = net.epsilon;
    SepCheck cover(net.space, 2.0 * eps);
    std::vector<std::uint8_t> in_set(net.size(), 0);

    auto absorb = [&](const Point& p, std::size_t segment) {
        bool hit = false;
        for (int v = 0; v < net.size(); ++v)
            if (cover.within(net.vertices, v, p)) {
                in_set[v] = 1;
                hit = true;
            }
        if (!hit) {
            std::ostringstream os;
            os << "trace_path: polyline segment " << segment
               << " leaves the 2*epsilon coverage of the net";
            throw InputError(os.str());
        }
    };

    absorb(polyline[0], 0);
    for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
        double len = distance(net.space, polyline[s], polyline[s + 1]);
        int steps = std::max(1, static_cast<int>(std::ceil(len / (eps / 4.0))));
        for (int k = 1; k <= steps; ++k) {
            Point p = geodesic_point(net.space, polyline[s], polyline[s + 1],
                                     static_cast<double>(k) / steps);
            absorb(p, s);
        }
    }

    std::vector<int> verts;
    for (int v = 0; v < net.size(); ++v)
        if (in_set[v]) verts.push_back(v);

    // BFS spanning tree of the induced subgraph, rooted at the vertex
    // nearest the start of the polyline
    int root = verts[0];
    double best = kInf;
    for (int v : verts) {
        double d = distance(net.space, net.vertex(v), polyline[0]);
        if (d < best) {
            best = d;
            root = v;
        }
    }
    std::vector<std::vector<int>> children(net.size());
    std::vector<int> parent(net.size(), -2);
    std::queue<int> q;
    parent[root] = -1;
    q.push(root);
    int reached = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++reached;
        for (int i = net.adj_offset[v]; i < net.adj_offset[v + 1]; ++i) {
            int w = net.adj[i];
            if (!in_set[w] || parent[w] != -2) continue;
            parent[w] = v;
            children[v].push_back(w);
            q.push(w);
        }
    }
    if (reached != static_cast<int>(verts.size()))
        throw ConstructionError(
            "trace_path: covering vertex set is not connected in the net graph");

    // Euler tour of the tree: a walk in G visiting every covering vertex
    std::vector<int> path;
    struct Frame {
        int v;
        std::size_t next;
    };
    std::vector<Frame> stack{{root, 0}};
    path.push_back(root);
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next < children[f.v].size()) {
            int w = children[f.v][f.next++];
            path.push_back(w);
            stack.push_back({w, 0});
        } else {
            stack.pop_back();
            if (!stack.empty()) path.push_back(stack.back().v);
        }
    }
    return path;
}

namespace {

bool separated(const SimpleGraph& g, int x, const std::vector<std::uint8_t>& is_target,
               const std::vector<std::uint8_t>& removed, std::vector<int>& scratch) {
    scratch.assign(g.size(), 0);
    std::queue<int> q;
    scratch[x] = 1;
    q.push(x);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (is_target[v]) return false;
        for (int w : g.nbr[v]) {
            if (scratch[w] || removed[w]) continue;
            scratch[w] = 1;
            q.push(w);
        }
    }
    return true;
}

}  // namespace

Cutset extract_minimal_cutset(const SimpleGraph& graph, int x,
                              const std::vector<int>& target, bool descending) {
    int n = graph.size();
    if (x < 0 || x >= n) throw InputError("extract_minimal_cutset: source out of range");
    if (target.empty()) throw InputError("extract_minimal_cutset: empty target");
    std::vector<std::uint8_t> is_target(n, 0);
    for (int t : target) {
        if (t < 0 || t >= n) throw InputError("extract_minimal_cutset: target out of range");
        if (t == x) throw InputError("extract_minimal_cutset: target contains the source");
        is_target[t] = 1;
    }

    std::vector<std::uint8_t> removed(n, 0);
    for (int v = 0; v < n; ++v)
        if (v != x && !is_target[v]) removed[v] = 1;
    std::vector<int> scratch;
    if (!separated(graph, x, is_target, removed, scratch))
        throw ConstructionError(
            "extract_minimal_cutset: source adjacent to target, no cutset exists");

    std::vector<int> order;
    for (int v = 0; v < n; ++v)
        if (removed[v]) order.push_back(v);
    if (descending) std::reverse(order.begin(), order.end());
    for (int w : order) {
        removed[w] = 0;
        if (!separated(graph, x, is_target, removed, scratch)) removed[w] = 1;
    }

    Cutset cut;
    cut.source = x;
    cut.target = target;
    for (int v = 0; v < n; ++v)
        if (removed[v]) cut.members.push_back(v);
    cut.minimal = true;

    // connectivity of the induced subgraph on the members
    if (cut.members.empty()) {
        cut.connected = true;
    } else {
        std::vector<std::uint8_t> in_cut(n, 0);
        for (int v : cut.members) in_cut[v] = 1;
        std::vector<std::uint8_t> seen(n, 0);
        std::queue<int> q;
        seen[cut.members[0]] = 1;
        q.push(cut.members[0]);
        int reached = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            ++reached;
            for (int w : graph.nbr[v])
                if (in_cut[w] && !seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
        cut.connected = reached == static_cast<int>(cut.members.size());
    }
    return cut;
}

std::vector<int> boundary_target(const NetGraph& net) {
    std::vector<int> out;
    for (int v = 0; v < net.size(); ++v)
        if (distance(net.space, net.vertex(v), net.window.center) >=
            net.window.radius - 4.0 * net.epsilon)
            out.push_back(v);
    return out;
}

namespace {

void animals_rec(const SimpleGraph& g, std::vector<std::uint8_t>& blocked, int depth,
                 int n, std::vector<int> ext, long long& count) {
    if (depth == n) {
        ++count;
        return;
    }
    while (!ext.empty()) {
        int v = ext.back();
        ext.pop_back();
        std::vector<int> ext2 = ext;
        std::vector<int> added;
        for (int w : g.nbr[v])
            if (!blocked[w]) {
                blocked[w] = 1;
                ext2.push_back(w);
                added.push_back(w);
            }
        animals_rec(g, blocked, depth + 1, n, std::move(ext2), count);
        for (int w : added) blocked[w] = 0;
        // v stays blocked: subsets using v were fully enumerated above
    }
}

}  // namespace

long long enumerate_animals(const SimpleGraph& graph, int x, int n) {
    if (x < 0 || x >= graph.size())
        throw InputError("enumerate_animals: vertex out of range");
    if (n < 1) throw InputError("enumerate_animals: n must be >= 1");
    if (n > 8) throw ResourceError("enumerate_animals: n > 8 is not supported");
    std::vector<std::uint8_t> blocked(graph.size(), 0);
    blocked[x] = 1;
    std::vector<int> ext;
    for (int w : graph.nbr[x])
        if (!blocked[w]) {
            blocked[w] = 1;
            ext.push_back(w);
        }
    long long count = 0;
    animals_rec(graph, blocked, 1, n, std::move(ext), count);
    return count;
}

void write_net(const std::string& path, const NetGraph& net) {
    std::ofstream out(path);
    if (!out) throw InputError("write_net: cannot open " + path);
    char buf[64];
    auto f17 = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "curvoronoi-net v1\n";
    out << "space " << (net.space.is_euclidean() ? "euclidean" : "hyperbolic") << "\n";
    out << "dimension " << net.space.dimension << "\n";
    out << "curvature " << f17(net.space.curvature) << "\n";
    out << "epsilon " << f17(net.epsilon) << "\n";
    out << "seed " << net.seed << "\n";
    out << "window_radius " << f17(net.window.radius) << "\n";
    out << "window_buffer " << f17(net.window.buffer) << "\n";
    out << "vertices " << net.size() << "\n";
    out << "edges " << net.edges.size() << "\n";
    for (int v = 0; v < net.size(); ++v) {
        out << "v " << v;
        for (int j = 0; j < net.vertices.rows(); ++j) out << ' ' << f17(net.vertices(j, v));
        out << "\n";
    }
    for (auto& e : net.edges) out << "e " << e.first << ' ' << e.second << "\n";
    if (!out) throw InputError("write_net: write failed on " + path);
}

}  // namespace curvo
