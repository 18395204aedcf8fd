#include "curvoronoi/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>

#include "curvoronoi/bisector.hpp"
#include "curvoronoi/delaunay.hpp"
#include "internal.hpp"

namespace curvo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mdot(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

using detail::build_csr;

// d=3 faces live on 2D slices; the polygon clipping helpers are shared
using detail::Poly;
using detail::clip_halfplane;
using detail::poly_centroid;

std::vector<Eigen::Vector3d> fibonacci_directions(int n) {
    std::vector<Eigen::Vector3d> out(n);
    const double ga = 2.399963229728653;  // golden angle
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        out[i] = Eigen::Vector3d(r * std::cos(ga * i), r * std::sin(ga * i), z);
    }
    return out;
}

struct EdgeAccum {
    std::vector<std::pair<int, int>> edges;
    void add(int i, int j) { edges.emplace_back(std::min(i, j), std::max(i, j)); }
    void finish() { std::sort(edges.begin(), edges.end()); }
};

// margin of a witness w for edge (i,j): min distance to the other points
// minus the distance to i; nullopt when there is no third point
std::optional<double> witness_margin(const ColoredConfig& cfg, int i, int j,
                                     const Point& w) {
    if (cfg.size() <= 2) return std::nullopt;
    double dw = distance(cfg.space, w, cfg.point(i));
    double best = kInf;
    for (int z = 0; z < cfg.size(); ++z) {
        if (z == i || z == j) continue;
        best = std::min(best, distance(cfg.space, w, cfg.point(z)));
    }
    return best - dw;
}

}  // namespace

Eigen::Vector2d to_poincare(const SpaceSpec& space, const Point& x) {
    double R = space.model_radius();
    return Eigen::Vector2d(x[1] / R, x[2] / R) / (1.0 + x[0] / R);
}

Point from_poincare(const SpaceSpec& space, const Eigen::Vector2d& u) {
    double R = space.model_radius();
    double q = u.squaredNorm();
    if (q >= 1.0) throw InputError("from_poincare: point outside the unit disk");
    Point x(3);
    x[0] = R * (1.0 + q) / (1.0 - q);
    x[1] = R * 2.0 * u[0] / (1.0 - q);
    x[2] = R * 2.0 * u[1] / (1.0 - q);
    return x;
}

namespace {

// ---- d=2 Euclidean ----

void build_euclid2(const ColoredConfig& cfg, const BuildOptions& opts, VoronoiGraph& g) {
    int n = cfg.size();
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = cfg.points(0, i);
        ys[i] = cfg.points(1, i);
    }
    Delaunay2D dt;
    dt.build(xs, ys);
    EdgeAccum acc;
    dt.for_each_edge([&](int a, int b) { acc.add(a, b); });
    acc.finish();
    g.edge_list = std::move(acc.edges);

    if (opts.with_cells) {
        g.cell_rho.assign(n, kInf);
        g.diameter_bound.assign(n, kInf);
        g.certified.assign(n, 0);
        g.cell_reach.assign(n, kInf);
        std::vector<int> tris;
        std::vector<Eigen::Vector2d> cc;
        Eigen::Vector2d ctr(cfg.window.center[0], cfg.window.center[1]);
        for (int v = 0; v < n; ++v) {
            if (!dt.cell_triangles(v, tris)) continue;
            cc.clear();
            double rho = 0.0, reach = 0.0;
            Eigen::Vector2d pv(xs[v], ys[v]);
            for (int t : tris) {
                double cx, cy;
                dt.circumcenter(t, cx, cy);
                cc.emplace_back(cx, cy);
                rho = std::max(rho, (cc.back() - pv).norm());
                // distance to the center is convex, so its maximum over the
                // (convex) cell is attained at a cell vertex
                reach = std::max(reach, (cc.back() - ctr).norm());
            }
            double diam = 0.0;
            for (std::size_t a = 0; a < cc.size(); ++a)
                for (std::size_t b = a + 1; b < cc.size(); ++b)
                    diam = std::max(diam, (cc[a] - cc[b]).norm());
            g.cell_rho[v] = rho;
            g.diameter_bound[v] = diam;
            g.cell_reach[v] = reach;
            if ((pv - ctr).norm() + 2.0 * rho <= cfg.window.radius) g.certified[v] = 1;
        }
    }

    if (opts.with_margins) {
        g.margins.resize(g.edge_list.size());
        g.witnesses.resize(g.edge_list.size());
        for (std::size_t e = 0; e < g.edge_list.size(); ++e) {
            auto [i, j] = g.edge_list[e];
            BisectorR2 bi(Eigen::Vector2d(xs[i], ys[i]), Eigen::Vector2d(xs[j], ys[j]));
            for (int z = 0; z < n; ++z)
                if (z != i && z != j) bi.clip(Eigen::Vector2d(xs[z], ys[z]));
            double lo = bi.lo(), hi = bi.hi();
            double t;
            if (std::isfinite(lo) && std::isfinite(hi))
                t = 0.5 * (lo + hi);
            else if (std::isfinite(lo))
                t = lo + 1.0;
            else if (std::isfinite(hi))
                t = hi - 1.0;
            else
                t = 0.0;
            Eigen::Vector2d w = bi.point_at(t);
            Point wp(2);
            wp << w[0], w[1];
            g.witnesses[e] = wp;
            g.margins[e] = witness_margin(cfg, i, j, wp);
        }
    }
}

// ---- d=2 hyperbolic via the Poincare-disk reduction ----

// smallest value of |c| + |c - p| along c(t) = c0 + t*dir, t in [0, tmax];
// this is the feasibility functional for an empty disk through p centered at
// c fitting inside the unit disk (value < 1)
double min_disk_functional(const Eigen::Vector2d& c0, const Eigen::Vector2d& dir,
                           double tmax, const Eigen::Vector2d& p) {
    auto f = [&](double t) {
        Eigen::Vector2d c = c0 + t * dir;
        return c.norm() + (c - p).norm();
    };
    double lo = 0.0, hi = tmax;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return f(0.5 * (lo + hi));
}

void build_hyper2(const ColoredConfig& cfg, const BuildOptions& opts, VoronoiGraph& g) {
    int n = cfg.size();
    double R = cfg.space.model_radius();
    std::vector<double> xs(n), ys(n);
    std::vector<Eigen::Vector3d> unit(n);
    for (int i = 0; i < n; ++i) {
        unit[i] = cfg.points.col(i).head<3>() / R;
        Eigen::Vector2d u = to_poincare(cfg.space, cfg.point(i));
        xs[i] = u[0];
        ys[i] = u[1];
    }
    Delaunay2D dt;
    dt.build(xs, ys);

    // keep a Euclidean Delaunay edge iff some empty disk through its
    // endpoints fits inside the unit disk (then it is a hyperbolic disk);
    // candidate centers form the Euclidean Voronoi face of the edge
    EdgeAccum acc;
    int nt = dt.num_triangles();
    for (int t = 0; t < nt; ++t) {
        if (dt.is_dead(t) || dt.is_ghost(t)) continue;
        for (int i = 0; i < 3; ++i) {
            int a = dt.vertex(t, (i + 1) % 3);
            int b = dt.vertex(t, (i + 2) % 3);
            int s = dt.neighbor(t, i);
            bool hull_edge = dt.is_ghost(s);
            if (!hull_edge && s < t) continue;  // visit each edge once
            Eigen::Vector2d pa(xs[a], ys[a]);
            double c1x, c1y;
            dt.circumcenter(t, c1x, c1y);
            Eigen::Vector2d c1(c1x, c1y);
            bool keep = c1.norm() + (c1 - pa).norm() < 1.0;
            if (!keep && !hull_edge) {
                double c2x, c2y;
                dt.circumcenter(s, c2x, c2y);
                Eigen::Vector2d c2(c2x, c2y);
                keep = c2.norm() + (c2 - pa).norm() < 1.0;
                if (!keep && (c2 - c1).norm() > 0.0) {
                    Eigen::Vector2d dir = c2 - c1;
                    double len = dir.norm();
                    keep = min_disk_functional(c1, dir / len, len, pa) < 1.0;
                }
            } else if (!keep && hull_edge) {
                // face is a ray from c1 pointing away from the third vertex
                Eigen::Vector2d pb(xs[b], ys[b]);
                int vop = dt.vertex(t, i);
                Eigen::Vector2d third(xs[vop], ys[vop]);
                Eigen::Vector2d e = pb - pa;
                Eigen::Vector2d perp(-e[1], e[0]);
                Eigen::Vector2d mid = 0.5 * (pa + pb);
                if (perp.dot(third - mid) > 0.0) perp = -perp;
                perp.normalize();
                keep = min_disk_functional(c1, perp, 4.0, pa) < 1.0;
            }
            if (keep) acc.add(a, b);
        }
    }
    acc.finish();
    g.edge_list = std::move(acc.edges);

    if (opts.with_cells) {
        g.cell_rho.assign(n, kInf);
        g.diameter_bound.assign(n, kInf);
        g.certified.assign(n, 0);
        g.cell_reach.assign(n, kInf);
        Eigen::Vector3d uctr = cfg.window.center.head<3>() / R;
        std::vector<int> tris;
        std::vector<Eigen::Vector3d> cc;
        for (int v = 0; v < n; ++v) {
            if (!dt.cell_triangles(v, tris)) continue;
            cc.clear();
            bool ok = true;
            for (int t : tris) {
                Eigen::Vector3d z;
                int a = dt.vertex(t, 0), b = dt.vertex(t, 1), c = dt.vertex(t, 2);
                if (!hyperbolic_circumcenter(unit[a], unit[b], unit[c], z)) {
                    ok = false;
                    break;
                }
                // hyperbolic circumcenter must witness an empty hyperbolic
                // disk: the Euclidean circumdisk must fit in the unit disk
                double ccx, ccy;
                dt.circumcenter(t, ccx, ccy);
                Eigen::Vector2d ce(ccx, ccy);
                if (ce.norm() + (ce - Eigen::Vector2d(xs[a], ys[a])).norm() >= 1.0) {
                    ok = false;
                    break;
                }
                cc.push_back(z);
            }
            if (!ok) continue;
            double rho = 0.0, diam = 0.0, reach = 0.0;
            for (std::size_t a = 0; a < cc.size(); ++a) {
                rho = std::max(rho,
                               std::acosh(std::max(1.0, -mdot(cc[a], unit[v]))));
                // distance to the center is convex on the geodesically convex
                // cell, so the cell-wide maximum sits at a cell vertex
                reach = std::max(reach,
                                 std::acosh(std::max(1.0, -mdot(cc[a], uctr))));
                for (std::size_t b = a + 1; b < cc.size(); ++b)
                    diam = std::max(
                        diam, std::acosh(std::max(1.0, -mdot(cc[a], cc[b]))));
            }
            rho *= R;
            diam *= R;
            g.cell_rho[v] = rho;
            g.diameter_bound[v] = diam;
            g.cell_reach[v] = reach * R;
            double dc = distance(cfg.space, cfg.window.center, cfg.point(v));
            if (dc + 2.0 * rho <= cfg.window.radius) g.certified[v] = 1;
        }
    }

    if (opts.with_margins) {
        g.margins.resize(g.edge_list.size());
        g.witnesses.resize(g.edge_list.size());
        for (std::size_t e = 0; e < g.edge_list.size(); ++e) {
            auto [i, j] = g.edge_list[e];
            BisectorH2 bi(unit[i], unit[j]);
            for (int z = 0; z < n; ++z)
                if (z != i && z != j) bi.clip(unit[z]);
            double lo = bi.lo(), hi = bi.hi();
            double t;
            if (std::isfinite(lo) && std::isfinite(hi))
                t = 0.5 * (lo + hi);
            else if (std::isfinite(lo))
                t = lo + 1.0;
            else if (std::isfinite(hi))
                t = hi - 1.0;
            else
                t = 0.0;
            Eigen::Vector3d w3 = bi.point_at(t);
            Point wp(3);
            wp << R * w3[0], R * w3[1], R * w3[2];
            g.witnesses[e] = wp;
            g.margins[e] = witness_margin(cfg, i, j, wp);
        }
    }
}

// ---- d=3: exact faces via halfplane clipping on the bisector slice ----

// Euclidean: the bisector of (i,j) is a plane; every nearest-point
// constraint is linear on it, so the face is a convex polygon.
bool face_d3_euclid(const ColoredConfig& cfg, int i, int j, Point* witness) {
    Eigen::Vector3d x = cfg.points.col(i).head<3>();
    Eigen::Vector3d y = cfg.points.col(j).head<3>();
    Eigen::Vector3d nrm = y - x;
    double L = nrm.norm();
    if (L < 1e-14) return false;
    nrm /= L;
    Eigen::Vector3d e1 = nrm.unitOrthogonal();
    Eigen::Vector3d e2 = nrm.cross(e1);
    Eigen::Vector3d m = 0.5 * (x + y);
    double box = 1e4 * (cfg.window.radius + 1.0);
    Poly poly = {{-box, -box}, {box, -box}, {box, box}, {-box, box}};
    for (int z = 0; z < cfg.size(); ++z) {
        if (z == i || z == j) continue;
        Eigen::Vector3d pz = cfg.points.col(z).head<3>();
        Eigen::Vector3d xz = x - pz;
        Eigen::Vector2d a(-2.0 * e1.dot(xz), -2.0 * e2.dot(xz));
        double b = 2.0 * m.dot(xz) - (x.squaredNorm() - pz.squaredNorm());
        clip_halfplane(poly, a, b);
        if (poly.empty()) return false;
    }
    if (witness) {
        Eigen::Vector2d c = poly_centroid(poly);
        Eigen::Vector3d w = m + c[0] * e1 + c[1] * e2;
        witness->resize(3);
        *witness << w[0], w[1], w[2];
    }
    return true;
}

// Hyperbolic d=3: the bisector is a totally geodesic H^2 slice; in Klein
// coordinates of that slice every constraint is again linear.
bool face_d3_hyper(const ColoredConfig& cfg, int i, int j, Point* witness) {
    double R = cfg.space.model_radius();
    Eigen::Vector4d x = cfg.points.col(i) / R;
    Eigen::Vector4d y = cfg.points.col(j) / R;
    auto mdot4 = [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
        return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    Eigen::Vector4d nv = x - y;
    double nn = mdot4(nv, nv);
    if (nn < 1e-20) return false;
    Eigen::Vector4d v0 = x + y;
    Eigen::Vector4d u0 = v0 / std::sqrt(-mdot4(v0, v0));
    Eigen::Vector4d u1, u2;
    int have = 0;
    Eigen::Vector4d frame[2];
    for (int k = 0; k < 4 && have < 2; ++k) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e[k] = 1.0;
        Eigen::Vector4d v = e - (mdot4(e, nv) / nn) * nv + mdot4(e, u0) * u0;
        for (int q = 0; q < have; ++q) v -= mdot4(v, frame[q]) * frame[q];
        double qq = mdot4(v, v);
        if (qq > 1e-10) frame[have++] = v / std::sqrt(qq);
    }
    if (have < 2) return false;
    u1 = frame[0];
    u2 = frame[1];
    Poly poly;
    for (int k = 0; k < 128; ++k) {
        double a = 2.0 * M_PI * k / 128.0;
        poly.emplace_back(std::cos(a), std::sin(a));
    }
    for (int z = 0; z < cfg.size(); ++z) {
        if (z == i || z == j) continue;
        Eigen::Vector4d wz = cfg.points.col(z) / R - x;
        double A = mdot4(u0, wz);
        Eigen::Vector2d a(mdot4(u1, wz), mdot4(u2, wz));
        clip_halfplane(poly, a, -A);
        if (poly.empty()) return false;
    }
    if (witness) {
        Eigen::Vector2d k = poly_centroid(poly);
        double q = k.squaredNorm();
        if (q >= 1.0) q = 1.0 - 1e-12;
        Eigen::Vector4d zz = (u0 + k[0] * u1 + k[1] * u2) / std::sqrt(1.0 - q);
        witness->resize(4);
        *witness = R * zz;
    }
    return true;
}

void build_d3(const ColoredConfig& cfg, const BuildOptions& opts, VoronoiGraph& g) {
    int n = cfg.size();
    bool eu = cfg.space.is_euclidean();
    EdgeAccum acc;
    std::vector<Point> wit;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Point w;
            bool adj = eu ? face_d3_euclid(cfg, i, j, opts.with_margins ? &w : nullptr)
                          : face_d3_hyper(cfg, i, j, opts.with_margins ? &w : nullptr);
            if (adj) {
                acc.add(i, j);
                if (opts.with_margins) wit.push_back(w);
            }
        }
    // pairs arrive already sorted lexicographically
    g.edge_list = std::move(acc.edges);
    if (opts.with_margins) {
        g.witnesses = std::move(wit);
        g.margins.resize(g.edge_list.size());
        for (std::size_t e = 0; e < g.edge_list.size(); ++e)
            g.margins[e] =
                witness_margin(cfg, g.edge_list[e].first, g.edge_list[e].second,
                               g.witnesses[e]);
    }

    if (opts.with_cells) {
        g.cell_rho.assign(n, kInf);
        g.diameter_bound.assign(n, kInf);
        g.certified.assign(n, 0);
        g.cell_reach.assign(n, kInf);
        auto dirs = fibonacci_directions(256);
        const double cos_res = std::cos(0.25);  // direction-resolution safety
        for (int v = 0; v < n; ++v) {
            double tmax = 0.0;
            bool bounded = true;
            if (eu) {
                Eigen::Vector3d x = cfg.points.col(v).head<3>();
                for (auto& u : dirs) {
                    double best = kInf;
                    for (int z = 0; z < n; ++z) {
                        if (z == v) continue;
                        Eigen::Vector3d dz = cfg.points.col(z).head<3>() - x;
                        double den = u.dot(dz);
                        if (den > 0.0) best = std::min(best, dz.squaredNorm() / (2.0 * den));
                    }
                    if (!std::isfinite(best)) {
                        bounded = false;
                        break;
                    }
                    tmax = std::max(tmax, best);
                }
            } else {
                double R = cfg.space.model_radius();
                Eigen::Vector4d x = cfg.points.col(v) / R;
                Chart ch = normal_chart(cfg.space, cfg.point(v));
                for (auto& u3 : dirs) {
                    Eigen::VectorXd dir(3);
                    dir << u3[0], u3[1], u3[2];
                    Eigen::Vector4d u = (ch.frame * dir);
                    double best = kInf;
                    for (int z = 0; z < n; ++z) {
                        if (z == v) continue;
                        Eigen::Vector4d pz = cfg.points.col(z) / R;
                        auto md = [](const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
                            return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
                        };
                        double num = -md(x, pz) - 1.0;
                        double den = md(u, pz);
                        if (den > num && num > 0.0)
                            best = std::min(best, R * std::atanh(num / den));
                    }
                    if (!std::isfinite(best)) {
                        bounded = false;
                        break;
                    }
                    tmax = std::max(tmax, best);
                }
            }
            if (!bounded) continue;
            double rho = tmax / cos_res;
            g.cell_rho[v] = rho;
            g.diameter_bound[v] = 2.0 * rho;
            double dc = distance(cfg.space, cfg.window.center, cfg.point(v));
            g.cell_reach[v] = dc + rho;  // triangle-inequality bound in d=3
            if (dc + 2.0 * rho <= cfg.window.radius) g.certified[v] = 1;
        }
    }
}

}  // namespace

VoronoiGraph build_graph(const ColoredConfig& config, const BuildOptions& opts) {
    config.space.validate();
    if (config.space.dimension > 3)
        throw InputError("build_graph: dimensions above 3 are unsupported");
    VoronoiGraph g;
    g.config = &config;
    int n = config.size();
    if (n == 0) {
        g.adj_offset.assign(1, 0);
        return g;
    }
    if (n <= 2 || (config.space.dimension == 2 && n < 3)) {
        if (n == 2) {
            g.edge_list = {{0, 1}};
            if (opts.with_margins) {
                g.witnesses = {geodesic_point(config.space, config.point(0),
                                              config.point(1), 0.5)};
                g.margins = {std::nullopt};
            }
        }
        if (opts.with_cells) {
            g.cell_rho.assign(n, kInf);
            g.diameter_bound.assign(n, kInf);
            g.certified.assign(n, 0);
        }
    } else if (config.space.dimension == 2) {
        if (config.space.is_euclidean())
            build_euclid2(config, opts, g);
        else
            build_hyper2(config, opts, g);
    } else {
        build_d3(config, opts, g);
    }
    build_csr(n, g.edge_list, g.adj_offset, g.adj);
    return g;
}

double cell_diameter_bound(const VoronoiGraph& graph, int vertex) {
    if (vertex < 0 || vertex >= graph.size())
        throw InputError("cell_diameter_bound: vertex out of range");
    if (graph.certified.empty() || !graph.certified[vertex])
        throw CertificationError("cell_diameter_bound: vertex is not certified");
    return graph.diameter_bound[vertex];
}

std::vector<std::pair<int, int>> adjacency_oracle(const ColoredConfig& config) {
    int n = config.size();
    std::vector<std::pair<int, int>> out;
    if (config.space.dimension != 2)
        throw InputError("adjacency_oracle: d=2 only");
    bool eu = config.space.is_euclidean();
    double R = eu ? 1.0 : config.space.model_radius();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool adj;
            if (eu) {
                BisectorR2 bi(config.points.col(i).head<2>(),
                              config.points.col(j).head<2>());
                for (int z = 0; z < n && !bi.empty(); ++z)
                    if (z != i && z != j) bi.clip(config.points.col(z).head<2>());
                adj = !bi.empty();
            } else {
                BisectorH2 bi(config.points.col(i).head<3>() / R,
                              config.points.col(j).head<3>() / R);
                for (int z = 0; z < n && !bi.empty(); ++z)
                    if (z != i && z != j) bi.clip(config.points.col(z).head<3>() / R);
                adj = !bi.empty();
            }
            if (adj) out.emplace_back(i, j);
        }
    return out;
}

RobustnessReport robustness(const ColoredConfig& config, double r, double h) {
    if (!config.space.is_euclidean() || config.space.dimension != 2)
        throw InputError("robustness: Euclidean d=2 only");
    if (r <= 0.0) throw InputError("robustness: r must be > 0");
    if (h <= 0.0) h = 0.01 * r;
    int n = config.size();
    Eigen::Vector2d ctr(config.window.center[0], config.window.center[1]);
    std::vector<int> inner;
    std::vector<Eigen::Vector2d> pts(n);
    for (int i = 0; i < n; ++i) {
        pts[i] = config.points.col(i).head<2>();
        if ((pts[i] - ctr).norm() <= r) inner.push_back(i);
    }
    if (inner.empty()) throw InputError("robustness: no points in B(0,r)");

    // nearest distance to the configuration minus {i,j}
    auto nearest_excl = [&](const Eigen::Vector2d& w, int i, int j) {
        double best = kInf;
        for (int z = 0; z < n; ++z) {
            if (z == i || z == j) continue;
            best = std::min(best, (w - pts[z]).norm());
        }
        return best;
    };

    double worst = kInf;
    for (std::size_t a = 0; a < inner.size(); ++a) {
        for (std::size_t b = a + 1; b < inner.size(); ++b) {
            int i = inner[a], j = inner[b];
            BisectorR2 bi(pts[i] - ctr, pts[j] - ctr);
            // work in window-centered coordinates
            for (int z = 0; z < n; ++z)
                if (z != i && z != j) bi.clip(pts[z] - ctr);
            if (!bi.empty()) {
                // adjacent: best witness margin over the face inside B(0,2r)
                double lo = std::max(bi.lo(), -4.0 * r);
                double hi = std::min(bi.hi(), 4.0 * r);
                double best = -kInf;
                bool any = false;
                int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / h)));
                for (int s = 0; s <= steps; ++s) {
                    double t = lo + (hi - lo) * s / steps;
                    Eigen::Vector2d w = bi.point_at(t);
                    if (w.norm() > 2.0 * r) continue;
                    any = true;
                    best = std::max(best,
                                    nearest_excl(w + ctr, i, j) - (w + ctr - pts[i]).norm());
                }
                if (any) worst = std::min(worst, best);
            } else {
                // non-adjacent: certified lower bound of
                // min_w max(d(w,x),d(w,y)) - d(w,xi) over B(0,2r) by
                // branch-and-bound with the 2-Lipschitz box bound
                auto gfun = [&](const Eigen::Vector2d& w) {
                    double m = std::max((w - (pts[i] - ctr)).norm(),
                                        (w - (pts[j] - ctr)).norm());
                    double dn = kInf;
                    for (int z = 0; z < n; ++z)
                        dn = std::min(dn, (w - (pts[z] - ctr)).norm());
                    return m - dn;
                };
                struct Box {
                    double cx, cy, half;
                };
                std::vector<Box> stack{{0.0, 0.0, 2.0 * r}};
                double lb_total = kInf;
                double ub = kInf;
                while (!stack.empty()) {
                    Box bx = stack.back();
                    stack.pop_back();
                    double hd = bx.half * std::sqrt(2.0);
                    Eigen::Vector2d c(bx.cx, bx.cy);
                    if (c.norm() - hd > 2.0 * r) continue;  // outside the disk
                    double val = gfun(c);
                    ub = std::min(ub, val);
                    double lb = val - 2.0 * hd;
                    if (bx.half <= h || lb >= ub) {
                        lb_total = std::min(lb_total, lb);
                        continue;
                    }
                    double q = bx.half / 2.0;
                    stack.push_back({bx.cx - q, bx.cy - q, q});
                    stack.push_back({bx.cx + q, bx.cy - q, q});
                    stack.push_back({bx.cx - q, bx.cy + q, q});
                    stack.push_back({bx.cx + q, bx.cy + q, q});
                }
                worst = std::min(worst, std::max(0.0, lb_total));
            }
        }
    }
    RobustnessReport rep;
    rep.r = r;
    rep.certification_step = h;
    rep.rho = worst == kInf ? 0.0 : std::max(0.0, worst / r);
    return rep;
}

AgreementReport check_agreement(const CoupledPair& pair, double rho) {
    AgreementReport rep;
    double r8 = pair.agreement_radius;
    double r = r8 / 8.0;
    const ColoredConfig& ec = pair.euclidean_config;
    const ColoredConfig& mc = pair.manifold_config;

    // EQL: the chart image of the manifold configuration equals the
    // Euclidean configuration (compare as sorted coordinate lists)
    std::vector<Eigen::Vector2d> a, b;
    for (int i = 0; i < ec.size(); ++i) a.push_back(ec.points.col(i).head<2>());
    for (int i = 0; i < mc.size(); ++i) {
        Eigen::VectorXd v = chart_inverse(pair.chart, mc.point(i));
        b.emplace_back(v[0], v[1]);
    }
    auto lex = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
        return p[0] != q[0] ? p[0] < q[0] : p[1] < q[1];
    };
    std::sort(a.begin(), a.end(), lex);
    std::sort(b.begin(), b.end(), lex);
    rep.eql = a.size() == b.size();
    if (rep.eql)
        for (std::size_t i = 0; i < a.size(); ++i)
            if ((a[i] - b[i]).norm() > 1e-9) {
                rep.eql = false;
                break;
            }

    // ROB: the Euclidean configuration is (r, 2 rho)-robust
    RobustnessReport rr = robustness(ec, r);
    rep.rob = rr.rho >= 2.0 * rho;

    BuildOptions opts;
    opts.with_cells = true;
    VoronoiGraph ge = build_graph(ec, opts);
    VoronoiGraph gm = build_graph(mc, opts);

    // SMA: cells of centers in the inner ball have diameter <= r on both
    // sides; uncertified cells there make the verdict inconclusive
    rep.sma = true;
    for (int i = 0; i < ec.size(); ++i) {
        if (ec.points.col(i).head<2>().norm() > r) continue;
        if (!ge.certified[i]) {
            rep.inconclusive = true;
            continue;
        }
        if (ge.diameter_bound[i] > r) rep.sma = false;
    }
    for (int i = 0; i < mc.size(); ++i) {
        if (distance(mc.space, mc.point(i), pair.chart.base) > r) continue;
        if (!gm.certified[i]) {
            rep.inconclusive = true;
            continue;
        }
        if (gm.diameter_bound[i] > r) rep.sma = false;
    }

    // SIM: |phi_* d_M - d| <= rho*r on B(0,8r); certified via the normal
    // coordinate sandwich when K*(8r)^2 * 16r <= rho*r, otherwise sampled
    double K = mc.space.curvature_bound_K;
    if (K * r8 * r8 * 2.0 * r8 <= rho * r) {
        rep.sim = true;
    } else {
        Rng rng(0x51eb851f);
        rep.sim = true;
        for (int s = 0; s < 2000 && rep.sim; ++s) {
            Eigen::VectorXd u(2), v(2);
            do {
                u << rng.uniform(-r8, r8), rng.uniform(-r8, r8);
            } while (u.norm() >= r8);
            do {
                v << rng.uniform(-r8, r8), rng.uniform(-r8, r8);
            } while (v.norm() >= r8 || (u - v).norm() < 1e-12);
            double dm = distance(mc.space, chart_forward(pair.chart, u),
                                 chart_forward(pair.chart, v));
            if (std::fabs(dm - (u - v).norm()) > rho * r) rep.sim = false;
        }
    }

    // graphs_equal: compare the pushed-forward manifold graph with the
    // Euclidean graph restricted to B(0,r)
    std::vector<int> m2e(mc.size(), -1);
    bool vertices_match = true;
    std::vector<Eigen::Vector2d> epts;
    for (int i = 0; i < ec.size(); ++i) epts.push_back(ec.points.col(i).head<2>());
    std::vector<Eigen::Vector2d> mpts;
    for (int i = 0; i < mc.size(); ++i) {
        Eigen::VectorXd v = chart_inverse(pair.chart, mc.point(i));
        mpts.emplace_back(v[0], v[1]);
    }
    std::vector<std::uint8_t> e_in(ec.size(), 0), m_in(mc.size(), 0);
    for (int i = 0; i < ec.size(); ++i) e_in[i] = epts[i].norm() <= r;
    for (int i = 0; i < mc.size(); ++i) m_in[i] = mpts[i].norm() <= r;
    for (int i = 0; i < mc.size(); ++i) {
        double best = kInf;
        int arg = -1;
        for (int j = 0; j < ec.size(); ++j) {
            double d = (mpts[i] - epts[j]).norm();
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (best <= 1e-9)
            m2e[i] = arg;
        else if (m_in[i])
            vertices_match = false;
    }
    std::vector<std::uint8_t> matched_e(ec.size(), 0);
    for (int i = 0; i < mc.size(); ++i)
        if (m2e[i] >= 0) matched_e[m2e[i]] = 1;
    for (int j = 0; j < ec.size(); ++j)
        if (e_in[j] && !matched_e[j]) vertices_match = false;

    bool edges_match = true;
    if (vertices_match) {
        std::vector<std::pair<int, int>> em, ee;
        for (auto& e : gm.edge_list) {
            if (!m_in[e.first] || !m_in[e.second]) continue;
            int u = m2e[e.first], v = m2e[e.second];
            em.emplace_back(std::min(u, v), std::max(u, v));
        }
        for (auto& e : ge.edge_list)
            if (e_in[e.first] && e_in[e.second]) ee.push_back(e);
        std::sort(em.begin(), em.end());
        std::sort(ee.begin(), ee.end());
        edges_match = em == ee;
    }
    rep.graphs_equal = vertices_match && edges_match;
    return rep;
}

std::map<int, std::vector<int>> graph_voronoi(const SimpleGraph& g,
                                              const std::vector<int>& occupied) {
    int n = g.size();
    if (occupied.empty()) throw InputError("graph_voronoi: occupied set is empty");
    for (int x : occupied)
        if (x < 0 || x >= n) throw InputError("graph_voronoi: occupied vertex out of range");
    const int unreach = std::numeric_limits<int>::max();
    std::vector<int> dist_all(n, unreach);
    std::queue<int> q;
    for (int x : occupied) {
        if (dist_all[x] == 0) continue;
        dist_all[x] = 0;
        q.push(x);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : g.nbr[v])
            if (dist_all[w] == unreach) {
                dist_all[w] = dist_all[v] + 1;
                q.push(w);
            }
    }
    std::map<int, std::vector<int>> cells;
    std::vector<int> dist(n);
    for (int x : occupied) {
        if (cells.count(x)) continue;
        std::fill(dist.begin(), dist.end(), unreach);
        dist[x] = 0;
        q.push(x);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : g.nbr[v])
                if (dist[w] == unreach) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
        std::vector<int> cell;
        for (int y = 0; y < n; ++y)
            if (dist[y] != unreach && dist[y] == dist_all[y]) cell.push_back(y);
        cells[x] = std::move(cell);
    }
    return cells;
}

void write_graph(const std::string& path, const VoronoiGraph& graph) {
    std::ofstream out(path);
    if (!out) throw InputError("write_graph: cannot open " + path);
    char buf[64];
    auto f17 = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const ColoredConfig& cfg = *graph.config;
    out << "curvoronoi-graph v1\n";
    out << "vertices " << graph.size() << "\n";
    out << "edges " << graph.edge_list.size() << "\n";
    for (int v = 0; v < graph.size(); ++v) {
        out << "v " << v;
        for (int j = 0; j < cfg.points.rows(); ++j) out << ' ' << f17(cfg.points(j, v));
        out << ' ' << f17(cfg.marks[v]);
        bool cert = !graph.certified.empty() && graph.certified[v];
        out << ' ' << (cert ? 1 : 0);
        double db = graph.diameter_bound.empty() ? kInf : graph.diameter_bound[v];
        out << ' ' << (std::isfinite(db) ? f17(db) : "inf") << "\n";
    }
    for (std::size_t e = 0; e < graph.edge_list.size(); ++e) {
        out << "e " << graph.edge_list[e].first << ' ' << graph.edge_list[e].second;
        if (e < graph.margins.size() && graph.margins[e])
            out << ' ' << f17(*graph.margins[e]);
        else
            out << " inf";
        out << "\n";
    }
    if (!out) throw InputError("write_graph: write failed on " + path);
}

}  // namespace curvo
