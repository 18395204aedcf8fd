#include "curvoronoi/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "curvoronoi/bisector.hpp"
#include "internal.hpp"

namespace curvo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// critical level sentinel for "the event never holds on this replica"
constexpr double kNever = 2.0;

double mdotN(const Point& a, const Point& b) {
    double s = -a[0] * b[0];
    for (int i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// monotone distance key: smaller means closer to q
struct DistKey {
    bool euclid;
    const Eigen::MatrixXd* pts;
    Point q;
    double key(int v) const {
        if (euclid) return (pts->col(v) - q).squaredNorm();
        double md = -(*pts)(0, v) * q[0];
        for (int k = 1; k < q.size(); ++k) md += (*pts)(k, v) * q[k];
        return -md;
    }
    // key threshold equivalent to distance <= r
    static double threshold(const SpaceSpec& sp, double r) {
        if (sp.is_euclidean()) return r * r;
        double R = sp.model_radius();
        return R * R * std::cosh(r / R);
    }
};

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// point at distance r from x in tangent direction dir (chart-frame coords)
Point offset_point(const SpaceSpec& space, const Chart& chart, const Point& x, double r,
                   const Eigen::VectorXd& dir) {
    if (space.is_euclidean()) return x + r * dir;
    double R = space.model_radius();
    Point u = chart.frame * dir;
    return std::cosh(r / R) * x + std::sinh(r / R) * R * u;
}

std::vector<Eigen::VectorXd> sphere_directions(int d, int n) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(n);
    if (d == 2) {
        for (int k = 0; k < n; ++k) {
            double a = 2.0 * M_PI * k / n;
            Eigen::VectorXd v(2);
            v << std::cos(a), std::sin(a);
            out.push_back(v);
        }
    } else {
        const double ga = 2.399963229728653;
        for (int k = 0; k < n; ++k) {
            double z = 1.0 - 2.0 * (k + 0.5) / n;
            double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
            Eigen::VectorXd v(3);
            v << rr * std::cos(ga * k), rr * std::sin(ga * k), z;
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace

int nearest_center(const VoronoiGraph& graph, const Point& q, int hint) {
    int n = graph.size();
    if (n == 0) throw InputError("nearest_center: empty configuration");
    const ColoredConfig& cfg = *graph.config;
    DistKey dk{cfg.space.is_euclidean(), &cfg.points, q};
    int cur = (hint >= 0 && hint < n) ? hint : 0;
    double cur_key = dk.key(cur);
    for (int guard = 0; guard <= n; ++guard) {
        int best = cur;
        double best_key = cur_key;
        for (const int* w = graph.neighbors_begin(cur); w != graph.neighbors_end(cur);
             ++w) {
            double k = dk.key(*w);
            if (k < best_key) {
                best_key = k;
                best = *w;
            }
        }
        if (best == cur) return cur;
        cur = best;
        cur_key = best_key;
    }
    throw ConstructionError("nearest_center: walk did not converge");
}

namespace {

// vertices whose cells meet the sphere of radius r around x, via
// nearest-center walks from sampled sphere points
void cells_on_sphere(const VoronoiGraph& graph, const Point& x, double r, int samples,
                     std::vector<std::uint8_t>& flags) {
    const ColoredConfig& cfg = *graph.config;
    Chart chart;
    if (!cfg.space.is_euclidean()) chart = normal_chart(cfg.space, x);
    auto dirs = sphere_directions(cfg.space.dimension, samples);
    int hint = 0;
    for (auto& dir : dirs) {
        Point p = offset_point(cfg.space, chart, x, r, dir);
        hint = nearest_center(graph, p, hint);
        flags[hint] = 1;
    }
}

}  // namespace

std::vector<int> cells_meeting_ball(const VoronoiGraph& graph, const Point& x, double r,
                                    int sphere_samples) {
    const ColoredConfig& cfg = *graph.config;
    int n = graph.size();
    std::vector<std::uint8_t> flags(n, 0);
    DistKey dk{cfg.space.is_euclidean(), &cfg.points, x};
    double thr = DistKey::threshold(cfg.space, r);
    for (int v = 0; v < n; ++v)
        if (dk.key(v) <= thr) flags[v] = 1;
    if (n > 0) cells_on_sphere(graph, x, r, sphere_samples, flags);
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (flags[v]) out.push_back(v);
    return out;
}

ClusterLabeling clusters(const VoronoiGraph& graph, double p) {
    if (p < 0.0 || p > 1.0) throw InputError("clusters: p must be in [0,1]");
    const ColoredConfig& cfg = *graph.config;
    int n = graph.size();
    ClusterLabeling lab;
    lab.graph = &graph;
    lab.p = p;
    lab.labels.assign(n, -1);
    Dsu dsu(n);
    auto white = [&](int v) { return cfg.marks[v] <= p; };
    for (auto& e : graph.edge_list)
        if (white(e.first) && white(e.second)) dsu.unite(e.first, e.second);
    for (int v = 0; v < n; ++v)
        if (white(v)) lab.labels[v] = dsu.find(v);
    for (int v = 0; v < n; ++v) {
        int l = lab.labels[v];
        if (l < 0) continue;
        ++lab.sizes[l];
        double d = distance(cfg.space, cfg.point(l), cfg.point(v));
        auto it = lab.radii.find(l);
        if (it == lab.radii.end())
            lab.radii[l] = d;
        else
            it->second = std::max(it->second, d);
    }
    return lab;
}

namespace {

void check_event_window(const VoronoiGraph& graph, const Point& x, double reach,
                        const char* what) {
    const ColoredConfig& cfg = *graph.config;
    double d = distance(cfg.space, x, cfg.window.center);
    if (d + reach > cfg.window.radius - cfg.window.buffer) {
        std::ostringstream os;
        os << what << ": the determinacy ball of radius " << reach
           << " leaves the buffered window interior";
        throw InputError(os.str());
    }
}

}  // namespace

CrossReport detect_cross(const VoronoiGraph& graph, const Point& x, double eps,
                         double p) {
    if (eps <= 0.0) throw InputError("detect_cross: eps must be > 0");
    check_event_window(graph, x, 10.0 * eps, "detect_cross");
    const ColoredConfig& cfg = *graph.config;
    int n = graph.size();
    CrossReport rep;

    // determined: every cell meeting B(x, 5 eps) certified with small diameter
    rep.determined = true;
    for (int v : cells_meeting_ball(graph, x, 5.0 * eps)) {
        if (graph.certified.empty() || !graph.certified[v] ||
            graph.diameter_bound[v] > eps / 5.0) {
            rep.determined = false;
            break;
        }
    }

    if (n == 0) return rep;
    std::vector<std::uint8_t> inner(n, 0), outer(n, 0);
    for (int v : cells_meeting_ball(graph, x, eps)) inner[v] = 1;
    DistKey dk{cfg.space.is_euclidean(), &cfg.points, x};
    double thr4 = DistKey::threshold(cfg.space, 4.0 * eps);
    for (int v = 0; v < n; ++v)
        if (dk.key(v) >= thr4) outer[v] = 1;
    cells_on_sphere(graph, x, 4.0 * eps, 1024, outer);

    ClusterLabeling lab = clusters(graph, p);
    std::vector<std::uint8_t> label_in(n, 0);
    for (int v = 0; v < n; ++v)
        if (inner[v] && lab.labels[v] >= 0) label_in[lab.labels[v]] = 1;
    for (int v = 0; v < n; ++v)
        if (outer[v] && lab.labels[v] >= 0 && label_in[lab.labels[v]]) {
            rep.crossed = true;
            break;
        }
    return rep;
}

UniquenessReport detect_local_uniqueness(const VoronoiGraph& graph, const Point& x,
                                         double eps, double p) {
    if (eps <= 0.0) throw InputError("detect_local_uniqueness: eps must be > 0");
    check_event_window(graph, x, 40.0 * eps, "detect_local_uniqueness");
    const ColoredConfig& cfg = *graph.config;
    int n = graph.size();
    UniquenessReport rep;

    rep.determined = true;
    for (int v : cells_meeting_ball(graph, x, 20.0 * eps)) {
        if (graph.certified.empty() || !graph.certified[v] ||
            graph.diameter_bound[v] > eps / 2.0) {
            rep.determined = false;
            break;
        }
    }
    if (n == 0) return rep;

    auto meets_ball_flags = [&](double r) {
        std::vector<std::uint8_t> f(n, 0);
        for (int v : cells_meeting_ball(graph, x, r)) f[v] = 1;
        return f;
    };
    auto meets_outside_flags = [&](double r) {
        std::vector<std::uint8_t> f(n, 0);
        DistKey dk{cfg.space.is_euclidean(), &cfg.points, x};
        double thr = DistKey::threshold(cfg.space, r);
        for (int v = 0; v < n; ++v)
            if (dk.key(v) >= thr) f[v] = 1;
        cells_on_sphere(graph, x, r, 1024, f);
        return f;
    };

    auto in18 = meets_ball_flags(18.0 * eps);
    auto white = [&](int v) { return cfg.marks[v] <= p; };

    // components of the white region restricted to B(x, 18 eps)
    Dsu dsu(n);
    for (auto& e : graph.edge_list)
        if (in18[e.first] && in18[e.second] && white(e.first) && white(e.second))
            dsu.unite(e.first, e.second);

    auto b6 = meets_ball_flags(6.0 * eps);
    auto o9 = meets_outside_flags(9.0 * eps);
    auto b2 = meets_ball_flags(2.0 * eps);
    auto o16 = meets_outside_flags(16.0 * eps);

    std::vector<std::uint8_t> meets6(n, 0), meets9(n, 0), meets2(n, 0), meets16(n, 0);
    for (int v = 0; v < n; ++v) {
        if (!in18[v] || !white(v)) continue;
        int r = dsu.find(v);
        if (b6[v]) meets6[r] = 1;
        if (o9[v]) meets9[r] = 1;
        if (b2[v]) meets2[r] = 1;
        if (o16[v]) meets16[r] = 1;
    }
    int crossing = -1;
    int count = 0;
    for (int r = 0; r < n; ++r)
        if (meets6[r] && meets9[r]) {
            ++count;
            crossing = r;
        }
    rep.holds = count == 1 && meets2[crossing] && meets16[crossing];
    return rep;
}

// ---- score ----

namespace {

double score_impl(const SpaceSpec& space, const std::vector<Point>& V, int skip,
                  const Point& x, const Point& y) {
    int d = space.dimension;
    if (d == 2) {
        if (space.is_euclidean()) {
            BisectorR2 bi(x.head<2>(), y.head<2>());
            for (std::size_t i = 0; i < V.size(); ++i) {
                if (static_cast<int>(i) == skip) continue;
                bi.clip(V[i].head<2>());
                if (bi.empty()) return kInf;
            }
            return bi.min_dist_x();
        }
        double R = space.model_radius();
        BisectorH2 bi(x.head<3>() / R, y.head<3>() / R);
        for (std::size_t i = 0; i < V.size(); ++i) {
            if (static_cast<int>(i) == skip) continue;
            bi.clip(V[i].head<3>() / R);
            if (bi.empty()) return kInf;
        }
        double m = bi.min_dist_x();
        return std::isfinite(m) ? R * m : kInf;
    }

    if (space.is_euclidean()) {
        Eigen::Vector3d xx = x.head<3>(), yy = y.head<3>();
        Eigen::Vector3d nrm = yy - xx;
        double L = nrm.norm();
        if (L < 1e-14) throw InputError("score: coincident points");
        nrm /= L;
        Eigen::Vector3d e1 = nrm.unitOrthogonal();
        Eigen::Vector3d e2 = nrm.cross(e1);
        Eigen::Vector3d m = 0.5 * (xx + yy);
        double box = 1e5 * (1.0 + xx.norm() + yy.norm());
        detail::Poly poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
        for (std::size_t i = 0; i < V.size(); ++i) {
            if (static_cast<int>(i) == skip) continue;
            Eigen::Vector3d pz = V[i].head<3>();
            Eigen::Vector3d xz = xx - pz;
            Eigen::Vector2d a(-2.0 * e1.dot(xz), -2.0 * e2.dot(xz));
            double b = 2.0 * m.dot(xz) - (xx.squaredNorm() - pz.squaredNorm());
            detail::clip_halfplane(poly, a, b);
            if (poly.empty()) return kInf;
        }
        // distance from x to the face: x projects onto the bisector plane at
        // the midpoint, so minimize the in-plane distance to the origin of
        // the (e1, e2) frame over the polygon
        double h2 = 0.25 * L * L;
        bool inside = true;
        int mm = static_cast<int>(poly.size());
        double best2 = kInf;
        for (int i = 0; i < mm; ++i) {
            const Eigen::Vector2d& a = poly[i];
            const Eigen::Vector2d& b = poly[(i + 1) % mm];
            Eigen::Vector2d e = b - a;
            if (-a[0] * e[1] + a[1] * e[0] > 0.0) inside = false;
            double t = e.squaredNorm() > 0.0
                           ? std::clamp(-a.dot(e) / e.squaredNorm(), 0.0, 1.0)
                           : 0.0;
            best2 = std::min(best2, (a + t * e).squaredNorm());
        }
        if (mm == 1) best2 = poly[0].squaredNorm();
        double d2 = inside && mm >= 3 ? 0.0 : best2;
        return std::sqrt(h2 + d2);
    }

    // hyperbolic d=3: clip the Klein-disk coordinates of the bisector slice,
    // then minimize the (geodesically convex) distance to x over the polygon
    double R = space.model_radius();
    Eigen::Vector4d xx = x.head<4>() / R, yy = y.head<4>() / R;
    auto md4 = [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
        return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    Eigen::Vector4d nv = xx - yy;
    double nn = md4(nv, nv);
    if (nn < 1e-20) throw InputError("score: coincident points");
    Eigen::Vector4d u0 = (xx + yy) / std::sqrt(-md4(xx + yy, xx + yy));
    Eigen::Vector4d frame[2];
    int have = 0;
    for (int k = 0; k < 4 && have < 2; ++k) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e[k] = 1.0;
        Eigen::Vector4d v = e - (md4(e, nv) / nn) * nv + md4(e, u0) * u0;
        for (int q = 0; q < have; ++q) v -= md4(v, frame[q]) * frame[q];
        double qq = md4(v, v);
        if (qq > 1e-10) frame[have++] = v / std::sqrt(qq);
    }
    if (have < 2) throw ConstructionError("score: slice frame failed");
    detail::Poly poly;
    for (int k = 0; k < 128; ++k) {
        double a = 2.0 * M_PI * k / 128.0;
        double rr = 1.0 - 1e-9;
        poly.emplace_back(rr * std::cos(a), rr * std::sin(a));
    }
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (static_cast<int>(i) == skip) continue;
        Eigen::Vector4d wz = V[i].head<4>() / R - xx;
        double A = md4(u0, wz);
        Eigen::Vector2d a(md4(frame[0], wz), md4(frame[1], wz));
        detail::clip_halfplane(poly, a, -A);
        if (poly.empty()) return kInf;
    }
    double A0 = -md4(xx, u0);
    double A1 = md4(xx, frame[0]);
    double A2 = md4(xx, frame[1]);
    auto fdist = [&](const Eigen::Vector2d& k) {
        double num = A0 - k[0] * A1 - k[1] * A2;
        double den = std::sqrt(std::max(1e-300, 1.0 - k.squaredNorm()));
        return std::acosh(std::max(1.0, num / den));
    };
    // unconstrained minimizer: the foot of x on the slice, in Klein coords
    Eigen::Vector2d kstar(A1 / A0, A2 / A0);
    bool inside = kstar.squaredNorm() < 1.0;
    int mm = static_cast<int>(poly.size());
    if (inside && mm >= 3) {
        for (int i = 0; i < mm && inside; ++i) {
            const Eigen::Vector2d& a = poly[i];
            const Eigen::Vector2d& b = poly[(i + 1) % mm];
            Eigen::Vector2d e = b - a;
            if ((kstar - a)[0] * e[1] - (kstar - a)[1] * e[0] > 0.0) inside = false;
        }
        if (inside) return R * fdist(kstar);
    }
    double best = kInf;
    for (int i = 0; i < mm; ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % std::max(1, mm)];
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 100; ++it) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (fdist(a + m1 * (b - a)) <= fdist(a + m2 * (b - a)))
                hi = m2;
            else
                lo = m1;
        }
        best = std::min(best, fdist(a + 0.5 * (lo + hi) * (b - a)));
        best = std::min({best, fdist(a), fdist(b)});
    }
    return R * best;
}

}  // namespace

double score(const SpaceSpec& space, const Point& x, const std::vector<Point>& V,
             const Point& y) {
    space.validate();
    int skip = -1;
    for (std::size_t i = 0; i < V.size(); ++i) {
        if ((V[i] - x).norm() == 0.0) skip = static_cast<int>(i);
        if ((V[i] - y).norm() == 0.0)
            throw InputError("score: y must not belong to V");
    }
    if (skip < 0) throw InputError("score: x must belong to V");
    return score_impl(space, V, skip, x, y);
}

// ---- exploration ----

bool ExplorationState::in_explored_zone(const Point& y) const {
    const ColoredConfig& cfg = *config;
    if (distance(cfg.space, origin, y) <= first_radius) return true;
    std::vector<Point> V;
    V.reserve(revealed.size());
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const ExploreRegion& reg = regions[i];
        while (static_cast<int>(V.size()) < reg.revealed_count)
            V.push_back(cfg.point(revealed[V.size()]));
        double s = score_impl(cfg.space, V, reg.x_index, cfg.point(revealed[reg.x_index]),
                              y);
        if (std::isinf(reg.r) ? std::isfinite(s) : s <= reg.r) return true;
    }
    return false;
}

ExplorationState explore_cluster(const ColoredConfig& config, const Point& x0,
                                 double p) {
    config.space.validate();
    if (x0.size() != config.space.ambient_dim())
        throw InputError("explore_cluster: origin has wrong dimension");
    if (!config.space.is_euclidean()) config.space.validate_point(x0);
    if (distance(config.space, x0, config.window.center) > config.window.radius)
        throw InputError("explore_cluster: origin outside the window");
    if (config.size() == 0) throw InputError("explore_cluster: empty configuration");
    if (p < 0.0 || p > 1.0) throw InputError("explore_cluster: p must be in [0,1]");

    ExplorationState st;
    st.config = &config;
    st.origin = x0;
    st.p = p;

    int n = config.size();
    DistKey dk{config.space.is_euclidean(), &config.points, x0};
    std::vector<std::uint8_t> is_revealed(n, 0);

    // first reveal: the configuration point whose cell contains x0
    int w1 = 0;
    double best = dk.key(0);
    for (int v = 1; v < n; ++v) {
        double k = dk.key(v);
        if (k < best) {
            best = k;
            w1 = v;
        }
    }
    st.first_radius = distance(config.space, x0, config.point(w1));
    auto white = [&](int v) { return config.marks[v] <= p; };

    std::vector<Point> V;  // revealed points, reveal order
    std::vector<int> rev_index(n, -1);
    auto reveal = [&](int v) {
        rev_index[v] = static_cast<int>(st.revealed.size());
        st.revealed.push_back(v);
        V.push_back(config.point(v));
        is_revealed[v] = 1;
        (white(v) ? st.white : st.black).push_back(v);
    };
    reveal(w1);

    std::vector<std::uint8_t> is_frozen(n, 0);
    if (white(w1)) {
        // distance of every point to x0, for the closest-first pick rule
        std::vector<double> key_to_origin(n);
        for (int v = 0; v < n; ++v) key_to_origin[v] = dk.key(v);

        while (true) {
            int x = -1;
            double xk = kInf;
            for (int v : st.white)
                if (!is_frozen[v] && key_to_origin[v] < xk) {
                    xk = key_to_origin[v];
                    x = v;
                }
            if (x < 0) break;

            // candidates in ascending distance from x; the score of y is at
            // least d(x,y)/2, so the scan can stop early
            DistKey dx{config.space.is_euclidean(), &config.points, config.point(x)};
            std::vector<std::pair<double, int>> cand;
            for (int v = 0; v < n; ++v)
                if (!is_revealed[v]) cand.emplace_back(dx.key(v), v);
            std::sort(cand.begin(), cand.end());

            double best_score = kInf;
            int best_y = -1;
            for (auto& [k, y] : cand) {
                double dxy = distance(config.space, config.point(x), config.point(y));
                if (dxy / 2.0 >= best_score) break;
                double s = score_impl(config.space, V, rev_index[x], config.point(x),
                                      config.point(y));
                if (s < best_score) {
                    best_score = s;
                    best_y = y;
                }
            }

            ExploreRegion reg;
            reg.x_index = rev_index[x];
            reg.revealed_count = static_cast<int>(V.size());
            if (best_y < 0) {
                reg.r = kInf;
                is_frozen[x] = 1;
                st.frozen.push_back(x);
            } else {
                reg.r = best_score;
                reveal(best_y);
            }
            st.regions.push_back(reg);
            ++st.steps;
        }
    }

    // partial flag: the explored cluster or its neighborhood reaches cells
    // whose shape the window cannot certify
    VoronoiGraph g = build_graph(config);
    std::vector<std::uint8_t> check(n, 0);
    for (int v : st.white) {
        check[v] = 1;
        for (const int* w = g.neighbors_begin(v); w != g.neighbors_end(v); ++w)
            check[*w] = 1;
    }
    for (int v : st.black) check[v] = 1;
    for (int v = 0; v < n; ++v)
        if (check[v] && (g.certified.empty() || !g.certified[v])) {
            st.partial = true;
            break;
        }
    return st;
}

// ---- estimators ----

std::pair<double, double> wilson_interval(int k, int n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double phat = static_cast<double>(k) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    // the endpoints are exact at k = 0 and k = n; avoid fp residue there
    double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = k == n ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

namespace {

Point canonical_center(const SpaceSpec& space) {
    Point c(space.ambient_dim());
    c.setZero();
    if (!space.is_euclidean()) c[0] = space.model_radius();
    return c;
}

double critical_mark_activation(const VoronoiGraph& graph,
                                const std::vector<std::uint8_t>& source,
                                const std::vector<std::uint8_t>& target) {
    const ColoredConfig& cfg = *graph.config;
    int n = graph.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return cfg.marks[a] < cfg.marks[b]; });
    Dsu dsu(n + 2);
    int S = n, T = n + 1;
    std::vector<std::uint8_t> active(n, 0);
    for (int v : order) {
        active[v] = 1;
        for (const int* w = graph.neighbors_begin(v); w != graph.neighbors_end(v); ++w)
            if (active[*w]) dsu.unite(v, *w);
        if (source[v]) dsu.unite(v, S);
        if (target[v]) dsu.unite(v, T);
        if (dsu.find(S) == dsu.find(T)) return cfg.marks[v];
    }
    return kNever;
}

}  // namespace

double critical_cross_mark(const SpaceSpec& space, double lambda, double eps_scale,
                           std::uint64_t replica_seed) {
    space.validate();
    if (eps_scale <= 0.0) throw InputError("critical_cross_mark: eps_scale must be > 0");
    Point center = canonical_center(space);
    Window window{center, 12.0 * eps_scale, eps_scale};
    ColoredConfig cfg = sample_config(space, window, lambda, true, replica_seed);
    if (cfg.size() == 0) return kNever;
    BuildOptions opts;
    opts.with_cells = false;
    VoronoiGraph g = build_graph(cfg, opts);
    int n = g.size();
    std::vector<std::uint8_t> source(n, 0), target(n, 0);
    for (int v : cells_meeting_ball(g, center, eps_scale)) source[v] = 1;
    DistKey dk{space.is_euclidean(), &cfg.points, center};
    double thr = DistKey::threshold(space, 4.0 * eps_scale);
    for (int v = 0; v < n; ++v)
        if (dk.key(v) >= thr) target[v] = 1;
    cells_on_sphere(g, center, 4.0 * eps_scale, 1024, target);
    return critical_mark_activation(g, source, target);
}

double critical_connection_mark(const SpaceSpec& space, double lambda, double N_scale,
                                double D_separation, std::uint64_t replica_seed) {
    space.validate();
    if (N_scale <= 0.0) throw InputError("critical_connection_mark: N must be > 0");
    if (D_separation <= 2.0 * N_scale)
        throw InputError("critical_connection_mark: balls overlap (D <= 2N)");
    Point center = canonical_center(space);
    Window window{center, D_separation + N_scale + 1.0, 0.5};
    ColoredConfig cfg = sample_config(space, window, lambda, true, replica_seed);
    if (cfg.size() == 0) return kNever;
    Chart chart = normal_chart(space, center);
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(space.dimension);
    dir[0] = 1.0;
    Point y = offset_point(space, chart, center, D_separation, dir);
    BuildOptions opts;
    opts.with_cells = false;
    VoronoiGraph g = build_graph(cfg, opts);
    int n = g.size();
    std::vector<std::uint8_t> source(n, 0), target(n, 0);
    for (int v : cells_meeting_ball(g, center, N_scale)) source[v] = 1;
    for (int v : cells_meeting_ball(g, y, N_scale)) target[v] = 1;
    return critical_mark_activation(g, source, target);
}

Estimate summarize_pc(std::vector<double> marks, const std::vector<double>& p_grid,
                      std::uint64_t seed, const std::map<std::string, double>& scales) {
    if (marks.empty()) throw InputError("summarize_pc: no replicas");
    std::sort(marks.begin(), marks.end());
    int n = static_cast<int>(marks.size());
    Estimate est;
    est.seed = seed;
    est.n_samples = n;
    est.scales = scales;
    for (double p : p_grid) {
        int k = static_cast<int>(std::upper_bound(marks.begin(), marks.end(), p) -
                                 marks.begin());
        auto [lo, hi] = wilson_interval(k, n);
        est.table.push_back({p, n, k, static_cast<double>(k) / n, lo, hi});
    }
    auto at = [&](int k) { return marks[std::clamp(k, 0, n - 1)]; };
    est.value = at(n / 2);
    double half = 0.5 * 1.959963984540054 * std::sqrt(static_cast<double>(n));
    est.ci_low = at(static_cast<int>(std::floor(n / 2.0 - half)));
    est.ci_high = at(static_cast<int>(std::ceil(n / 2.0 + half)));
    return est;
}

Estimate summarize_pu(std::vector<double> marks, const std::vector<double>& p_grid,
                      double alpha, std::uint64_t seed,
                      const std::map<std::string, double>& scales) {
    if (marks.empty()) throw InputError("summarize_pu: no replicas");
    if (alpha <= 0.0 || alpha >= 1.0)
        throw InputError("summarize_pu: alpha must be in (0,1)");
    std::sort(marks.begin(), marks.end());
    int n = static_cast<int>(marks.size());
    Estimate est;
    est.seed = seed;
    est.n_samples = n;
    est.scales = scales;
    est.value = 1.0;
    bool found = false;
    for (double p : p_grid) {
        int k = static_cast<int>(std::upper_bound(marks.begin(), marks.end(), p) -
                                 marks.begin());
        auto [lo, hi] = wilson_interval(k, n);
        est.table.push_back({p, n, k, static_cast<double>(k) / n, lo, hi});
        if (!found && static_cast<double>(k) / n >= 1.0 - alpha) {
            est.value = p;
            found = true;
        }
    }
    // order-statistic interval around the (1 - alpha) quantile
    auto at = [&](int k) { return std::clamp(marks[std::clamp(k, 0, n - 1)], 0.0, 1.0); };
    double q = 1.0 - alpha;
    double half = 1.959963984540054 * std::sqrt(n * alpha * q);
    int kq = static_cast<int>(std::ceil(q * n)) - 1;
    est.ci_low = at(static_cast<int>(std::floor(kq - half)));
    est.ci_high = at(static_cast<int>(std::ceil(kq + half)));
    if (!found) est.ci_high = 1.0;
    return est;
}

Estimate estimate_pc(const SpaceSpec& space, double lambda, double eps_scale,
                     const std::vector<double>& p_grid, int replicas,
                     std::uint64_t seed) {
    if (replicas < 1) throw InputError("estimate_pc: need at least one replica");
    std::vector<double> marks(replicas);
    for (int i = 0; i < replicas; ++i)
        marks[i] = critical_cross_mark(space, lambda, eps_scale, split_seed(seed, i));
    return summarize_pc(std::move(marks), p_grid, seed,
                        {{"lambda", lambda}, {"eps_scale", eps_scale}});
}

Estimate estimate_pu(const SpaceSpec& space, double lambda, double N_scale,
                     double D_separation, double alpha,
                     const std::vector<double>& p_grid, int replicas,
                     std::uint64_t seed) {
    if (replicas < 1) throw InputError("estimate_pu: need at least one replica");
    std::vector<double> marks(replicas);
    for (int i = 0; i < replicas; ++i)
        marks[i] = critical_connection_mark(space, lambda, N_scale, D_separation,
                                            split_seed(seed, i));
    return summarize_pu(std::move(marks), p_grid, alpha, seed,
                        {{"lambda", lambda},
                         {"N_scale", N_scale},
                         {"D_separation", D_separation},
                         {"alpha", alpha}});
}

RefinementReport monotone_cluster_refinement(const ColoredConfig& config, double p,
                                             double p_prime) {
    if (p > p_prime)
        throw InputError("monotone_cluster_refinement: requires p <= p'");
    BuildOptions opts;
    opts.with_cells = false;
    VoronoiGraph g = build_graph(config, opts);
    int n = g.size();
    ClusterLabeling coarse = clusters(g, p_prime);
    ClusterLabeling fine = clusters(g, p);

    // half-window side of each vertex, by the first chart coordinate
    std::vector<int> side(n);
    Eigen::VectorXd e1;
    if (config.space.is_euclidean()) {
        for (int v = 0; v < n; ++v)
            side[v] = config.points(0, v) - config.window.center[0] >= 0.0 ? 1 : -1;
    } else {
        Chart chart = normal_chart(config.space, config.window.center);
        e1 = chart.frame.col(0);
        for (int v = 0; v < n; ++v)
            side[v] = mdotN(e1, config.point(v)) >= 0.0 ? 1 : -1;
    }

    auto crossing_labels = [&](const ClusterLabeling& lab) {
        std::map<int, std::pair<bool, bool>> sides;
        for (int v = 0; v < n; ++v) {
            int l = lab.labels[v];
            if (l < 0) continue;
            if (side[v] > 0)
                sides[l].first = true;
            else
                sides[l].second = true;
        }
        std::vector<std::uint8_t> out(n, 0);
        for (auto& [l, s] : sides)
            if (s.first && s.second) out[l] = 1;
        return out;
    };

    auto coarse_cross = crossing_labels(coarse);
    auto fine_cross = crossing_labels(fine);

    std::vector<std::uint8_t> refined(n, 0);
    for (int v = 0; v < n; ++v) {
        int lc = coarse.labels[v];
        int lf = fine.labels[v];
        if (lc >= 0 && coarse_cross[lc] && lf >= 0 && fine_cross[lf]) refined[lc] = 1;
    }
    RefinementReport rep;
    for (int l = 0; l < n; ++l) {
        if (!coarse_cross[l]) continue;
        ++rep.crossing_clusters;
        if (refined[l]) ++rep.refined_clusters;
    }
    rep.holds = rep.refined_clusters == rep.crossing_clusters;
    return rep;
}

}  // namespace curvo
