#include <cmath>
#include <filesystem>
#include <fstream>
#include <queue>
#include <set>

#include "curvoronoi/bisector.hpp"
#include "curvoronoi/delaunay.hpp"
#include "curvoronoi/voronoi.hpp"
#include "doctest.h"

using namespace curvo;

namespace {

Window centered_window(const SpaceSpec& s, double radius, double buffer) {
    Window w;
    w.center = Point::Zero(s.ambient_dim());
    if (!s.is_euclidean()) w.center[0] = s.model_radius();
    w.radius = radius;
    w.buffer = buffer;
    return w;
}

ColoredConfig manual_config(const SpaceSpec& s, const Window& w,
                            const std::vector<Point>& pts) {
    ColoredConfig cfg;
    cfg.space = s;
    cfg.window = w;
    cfg.intensity = 1.0;
    cfg.points.resize(s.ambient_dim(), static_cast<int>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) cfg.points.col(i) = pts[i];
    cfg.marks = Eigen::VectorXd::Zero(static_cast<int>(pts.size()));
    return cfg;
}

}  // namespace

TEST_CASE("euclidean bisector face interval") {
    Eigen::Vector2d x(0.0, 0.0), y(2.0, 0.0);
    BisectorR2 bi(x, y);
    CHECK(bi.min_dist_x() == doctest::Approx(1.0).epsilon(1e-14));
    // a third point above shrinks the face from one side only
    bi.clip(Eigen::Vector2d(1.0, 3.0));
    CHECK(!bi.empty());
    CHECK(bi.min_dist_x() == doctest::Approx(1.0).epsilon(1e-12));
    // a point on the segment between x and y screens the whole bisector
    bi.clip(Eigen::Vector2d(1.0, 0.0));
    CHECK(bi.empty());
    CHECK(std::isinf(bi.min_dist_x()));
}

TEST_CASE("hyperbolic bisector equidistance") {
    Eigen::Vector3d x(std::cosh(0.7), std::sinh(0.7), 0.0);
    Eigen::Vector3d y(std::cosh(0.9), 0.0, std::sinh(0.9));
    BisectorH2 bi(x, y);
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    for (double t : {-1.0, 0.0, 0.4, 2.0}) {
        Eigen::Vector3d z = bi.point_at(t);
        CHECK_NOTHROW(s.validate_point(z));
        double dx = distance(s, z, x);
        double dy = distance(s, z, y);
        CHECK(dx == doctest::Approx(dy).epsilon(1e-10));
        CHECK(bi.dist_x(t) == doctest::Approx(dx).epsilon(1e-10));
    }
}

TEST_CASE("delaunay triangulation satisfies the empty-circle property") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        Rng rng(seed);
        int n = 40;
        std::vector<double> xs(n), ys(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = rng.uniform(-5.0, 5.0);
            ys[i] = rng.uniform(-5.0, 5.0);
        }
        Delaunay2D dt;
        dt.build(xs, ys);
        int checked = 0;
        for (int t = 0; t < dt.num_triangles(); ++t) {
            if (dt.is_dead(t) || dt.is_ghost(t)) continue;
            int a = dt.vertex(t, 0), b = dt.vertex(t, 1), c = dt.vertex(t, 2);
            double cx, cy;
            dt.circumcenter(t, cx, cy);
            double r2 = (xs[a] - cx) * (xs[a] - cx) + (ys[a] - cy) * (ys[a] - cy);
            for (int v = 0; v < n; ++v) {
                if (v == a || v == b || v == c) continue;
                double d2 = (xs[v] - cx) * (xs[v] - cx) + (ys[v] - cy) * (ys[v] - cy);
                CHECK(d2 >= r2 * (1.0 - 1e-9));
            }
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("build_graph equals the exact bisector adjacency oracle") {
    for (int geom = 0; geom < 2; ++geom) {
        SpaceSpec s = geom ? SpaceSpec::hyperbolic(2, -1.0) : SpaceSpec::euclidean(2);
        int mismatches = 0;
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            Window w = centered_window(s, 4.0, 0.5);
            ColoredConfig cfg = sample_config(s, w, 1.0, true, seed);
            if (cfg.size() < 2) continue;
            VoronoiGraph g = build_graph(cfg);
            if (g.edge_list != adjacency_oracle(cfg)) ++mismatches;
        }
        CHECK(mismatches == 0);
    }
}

TEST_CASE("square lattice window has the expected local adjacency") {
    SpaceSpec s = SpaceSpec::euclidean(2);
    Window w = centered_window(s, 10.0, 1.0);
    std::vector<Point> pts;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            Point p(2);
            p << i, j;
            pts.push_back(p);
        }
    ColoredConfig cfg = manual_config(s, w, pts);
    VoronoiGraph g = build_graph(cfg);
    // the center point of an odd square grid: 4 side neighbors always, plus
    // corner contacts because equidistant cells meet at lattice corners
    int center = -1;
    for (int i = 0; i < cfg.size(); ++i)
        if (cfg.points(0, i) == 0.0 && cfg.points(1, i) == 0.0) center = i;
    REQUIRE(center >= 0);
    std::set<std::pair<double, double>> nb;
    for (const int* v = g.neighbors_begin(center); v != g.neighbors_end(center); ++v)
        nb.insert({cfg.points(0, *v), cfg.points(1, *v)});
    CHECK(nb.count({1.0, 0.0}) == 1);
    CHECK(nb.count({-1.0, 0.0}) == 1);
    CHECK(nb.count({0.0, 1.0}) == 1);
    CHECK(nb.count({0.0, -1.0}) == 1);
}

TEST_CASE("certified cells carry finite diameter bounds") {
    SpaceSpec s = SpaceSpec::euclidean(2);
    Window w = centered_window(s, 8.0, 1.0);
    ColoredConfig cfg = sample_config(s, w, 2.0, true, 17);
    VoronoiGraph g = build_graph(cfg);
    int certified = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (!g.certified[v]) continue;
        ++certified;
        double bound = cell_diameter_bound(g, v);
        CHECK(std::isfinite(bound));
        CHECK(bound >= 0.0);
        // the bound dominates distances between the cell's Delaunay witnesses
        CHECK(bound <= 2.0 * g.cell_rho[v] + 1e-12);
        // the cell contains its nucleus and sits inside B(nucleus, rho)
        double dc = distance(s, cfg.point(v), w.center);
        CHECK(g.cell_reach[v] >= dc - 1e-9);
        CHECK(g.cell_reach[v] <= dc + g.cell_rho[v] + 1e-9);
    }
    CHECK(certified > 0);
    // some boundary cell must be uncertified and raise on request
    bool raised = false;
    for (int v = 0; v < g.size() && !raised; ++v)
        if (!g.certified[v]) {
            CHECK_THROWS_AS(cell_diameter_bound(g, v), CertificationError);
            raised = true;
        }
    CHECK(raised);
}

TEST_CASE("voronoi cells are star convex around their center") {
    for (int geom = 0; geom < 2; ++geom) {
        SpaceSpec s = geom ? SpaceSpec::hyperbolic(2, -1.0) : SpaceSpec::euclidean(2);
        Window w = centered_window(s, 6.0, 0.5);
        ColoredConfig cfg = sample_config(s, w, 1.0, true, 23);
        REQUIRE(cfg.size() > 10);
        Rng rng(77);
        int tested = 0;
        for (int trial = 0; trial < 2000 && tested < 500; ++trial) {
            // sample a point of the window, find its cell, then walk the
            // geodesic towards the center and recheck membership
            int i = static_cast<int>(rng.uniform() * cfg.size());
            int j = static_cast<int>(rng.uniform() * cfg.size());
            if (i == j) continue;
            Point y = geodesic_point(s, cfg.point(i), cfg.point(j), rng.uniform());
            int owner = 0;
            double best = distance(s, y, cfg.point(0));
            for (int v = 1; v < cfg.size(); ++v) {
                double d = distance(s, y, cfg.point(v));
                if (d < best) {
                    best = d;
                    owner = v;
                }
            }
            for (double t : {0.25, 0.5, 0.75}) {
                Point z = geodesic_point(s, cfg.point(owner), y, t);
                double dz = distance(s, z, cfg.point(owner));
                for (int v = 0; v < cfg.size(); ++v)
                    CHECK(distance(s, z, cfg.point(v)) >= dz - 1e-9);
            }
            ++tested;
        }
        CHECK(tested == 500);
    }
}

TEST_CASE("robustness certification is stable under grid refinement") {
    SpaceSpec s = SpaceSpec::euclidean(2);
    Window w = centered_window(s, 16.0, 1.0);
    double r = 2.0;
    // the certified value can legitimately hit zero for unlucky samples; pick
    // a configuration where the coarse grid already certifies a positive gap
    RobustnessReport coarse, fine;
    bool found = false;
    for (std::uint64_t seed = 31; seed < 51 && !found; ++seed) {
        ColoredConfig cfg = sample_config(s, w, 1.0, true, seed);
        coarse = robustness(cfg, r, 0.02 * r);
        if (coarse.rho <= 0.0) continue;
        fine = robustness(cfg, r, 0.002 * r);
        found = true;
    }
    REQUIRE(found);
    CHECK(coarse.rho > 0.0);
    CHECK(fine.rho > 0.0);
    // both are certified lower bounds of the same quantity and the Lipschitz
    // correction bounds how far either can sit below it
    CHECK(std::fabs(fine.rho - coarse.rho) <=
          2.0 * (0.02 * r + 0.002 * r) / r + 1e-12);
}

TEST_CASE("graph_voronoi matches the all-pairs BFS oracle") {
    Rng rng(41);
    for (int inst = 0; inst < 120; ++inst) {
        int n = 3 + static_cast<int>(rng.uniform() * 20);
        SimpleGraph g;
        g.nbr.resize(n);
        std::set<std::pair<int, int>> used;
        int m = n + static_cast<int>(rng.uniform() * 2 * n);
        for (int e = 0; e < m; ++e) {
            int a = static_cast<int>(rng.uniform() * n);
            int b = static_cast<int>(rng.uniform() * n);
            if (a == b) continue;
            auto key = std::minmax(a, b);
            if (used.insert({key.first, key.second}).second) g.add_edge(a, b);
        }
        int k = 1 + static_cast<int>(rng.uniform() * std::min(4, n));
        std::vector<int> occ;
        for (int i = 0; i < k; ++i) occ.push_back(static_cast<int>(rng.uniform() * n));
        std::sort(occ.begin(), occ.end());
        occ.erase(std::unique(occ.begin(), occ.end()), occ.end());

        auto cells = graph_voronoi(g, occ);

        // oracle: BFS distances from every vertex
        const int kUnreached = 1 << 29;
        auto bfs = [&](int src) {
            std::vector<int> dist(n, kUnreached);
            std::queue<int> q;
            dist[src] = 0;
            q.push(src);
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int v : g.nbr[u])
                    if (dist[v] == kUnreached) {
                        dist[v] = dist[u] + 1;
                        q.push(v);
                    }
            }
            return dist;
        };
        std::vector<std::vector<int>> dist;
        for (int x : occ) dist.push_back(bfs(x));
        for (std::size_t xi = 0; xi < occ.size(); ++xi) {
            std::vector<int> want;
            for (int y = 0; y < n; ++y) {
                int dmin = kUnreached;
                for (auto& dv : dist) dmin = std::min(dmin, dv[y]);
                if (dmin < kUnreached && dist[xi][y] == dmin) want.push_back(y);
            }
            CHECK(cells.at(occ[xi]) == want);
        }
    }
}

TEST_CASE("graph output is deterministic") {
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    Window w = centered_window(s, 4.0, 0.5);
    ColoredConfig cfg = sample_config(s, w, 1.0, true, 8);
    BuildOptions opts;
    opts.with_margins = true;
    VoronoiGraph g = build_graph(cfg, opts);
    auto tmp = std::filesystem::temp_directory_path();
    std::string p1 = (tmp / "curvo_g1.txt").string();
    std::string p2 = (tmp / "curvo_g2.txt").string();
    write_graph(p1, g);
    write_graph(p2, build_graph(cfg, opts));
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("adjacency margins certify perturbation tolerance") {
    SpaceSpec s = SpaceSpec::euclidean(2);
    Window w = centered_window(s, 6.0, 0.5);
    ColoredConfig cfg = sample_config(s, w, 1.0, true, 19);
    BuildOptions opts;
    opts.with_margins = true;
    VoronoiGraph g = build_graph(cfg, opts);
    REQUIRE(g.margins.size() == g.edge_list.size());
    for (std::size_t e = 0; e < g.edge_list.size(); ++e) {
        if (!g.margins[e]) continue;  // two-point sentinel: unbounded face
        auto [i, j] = g.edge_list[e];
        const Point& wpt = g.witnesses[e];
        // the witness realizes the margin: closer to i and j than to others
        double di = distance(s, wpt, cfg.point(i));
        double dj = distance(s, wpt, cfg.point(j));
        CHECK(di == doctest::Approx(dj).epsilon(1e-7));
        double third = std::numeric_limits<double>::infinity();
        for (int v = 0; v < cfg.size(); ++v)
            if (v != i && v != j)
                third = std::min(third, distance(s, wpt, cfg.point(v)));
        CHECK(third >= di + *g.margins[e] - 1e-7);
    }
}
