#include "curvoronoi/delaunay.hpp"

#include <algorithm>
#include <cmath>

namespace curvo {

namespace {

inline long double orient_ld(double ax, double ay, double bx, double by, double cx,
                             double cy) {
    long double abx = static_cast<long double>(bx) - ax;
    long double aby = static_cast<long double>(by) - ay;
    long double acx = static_cast<long double>(cx) - ax;
    long double acy = static_cast<long double>(cy) - ay;
    return abx * acy - aby * acx;
}

// > 0 when d is inside the circumcircle of CCW triangle abc
inline long double incircle_ld(double ax, double ay, double bx, double by, double cx,
                               double cy, double dx, double dy) {
    long double adx = static_cast<long double>(ax) - dx;
    long double ady = static_cast<long double>(ay) - dy;
    long double bdx = static_cast<long double>(bx) - dx;
    long double bdy = static_cast<long double>(by) - dy;
    long double cdx = static_cast<long double>(cx) - dx;
    long double cdy = static_cast<long double>(cy) - dy;
    long double ad = adx * adx + ady * ady;
    long double bd = bdx * bdx + bdy * bdy;
    long double cd = cdx * cdx + cdy * cdy;
    return ad * (bdx * cdy - bdy * cdx) + bd * (cdx * ady - cdy * adx) +
           cd * (adx * bdy - ady * bdx);
}

inline std::uint32_t hilbert_d2xy(std::uint32_t x, std::uint32_t y) {
    std::uint32_t rx, ry, d = 0;
    for (std::uint32_t s = 1u << 15; s > 0; s >>= 1) {
        rx = (x & s) ? 1 : 0;
        ry = (y & s) ? 1 : 0;
        d += s * s * ((3 * rx) ^ ry);
        if (ry == 0) {
            if (rx == 1) {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            std::swap(x, y);
        }
    }
    return d;
}

}  // namespace

std::vector<std::int32_t> hilbert_order(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    auto n = static_cast<std::int32_t>(xs.size());
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    if (n > 0) {
        xmin = xmax = xs[0];
        ymin = ymax = ys[0];
        for (std::int32_t i = 1; i < n; ++i) {
            xmin = std::min(xmin, xs[i]);
            xmax = std::max(xmax, xs[i]);
            ymin = std::min(ymin, ys[i]);
            ymax = std::max(ymax, ys[i]);
        }
    }
    double sx = xmax > xmin ? 65535.0 / (xmax - xmin) : 0.0;
    double sy = ymax > ymin ? 65535.0 / (ymax - ymin) : 0.0;
    std::vector<std::uint64_t> keys(n);
    for (std::int32_t i = 0; i < n; ++i) {
        auto hx = static_cast<std::uint32_t>((xs[i] - xmin) * sx);
        auto hy = static_cast<std::uint32_t>((ys[i] - ymin) * sy);
        keys[i] = (static_cast<std::uint64_t>(hilbert_d2xy(hx, hy)) << 27) | i;
    }
    std::sort(keys.begin(), keys.end());
    std::vector<std::int32_t> order(n);
    for (std::int32_t i = 0; i < n; ++i)
        order[i] = static_cast<std::int32_t>(keys[i] & 0x7ffffff);
    return order;
}

int Delaunay2D::new_triangle(std::int32_t a, std::int32_t b, std::int32_t c) {
    int t;
    if (!free_.empty()) {
        t = free_.back();
        free_.pop_back();
        dead_[t] = 0;
    } else {
        t = static_cast<int>(tri_.size() / 3);
        tri_.resize(tri_.size() + 3);
        adj_.resize(adj_.size() + 3, -1);
        dead_.push_back(0);
        stamp_.push_back(0);
    }
    tri_[3 * t] = a;
    tri_[3 * t + 1] = b;
    tri_[3 * t + 2] = c;
    adj_[3 * t] = adj_[3 * t + 1] = adj_[3 * t + 2] = -1;
    return t;
}

bool Delaunay2D::in_cavity(int t, double px, double py) const {
    const std::int32_t* v = &tri_[3 * t];
    int inf = -1;
    for (int i = 0; i < 3; ++i)
        if (v[i] == kInfinite) inf = i;
    if (inf >= 0) {
        std::int32_t a = v[(inf + 1) % 3];
        std::int32_t b = v[(inf + 2) % 3];
        // the ghost's circumdisk is the open halfplane beyond the hull edge,
        // plus the edge segment itself: a point collinear with the hull edge
        // but beyond its span must conflict with the ghost around the corner,
        // not with this one, or starring would emit a zero-area triangle
        long double o = orient_ld(xs_[a], ys_[a], xs_[b], ys_[b], px, py);
        if (o != 0.0L) return o > 0.0L;
        long double abx = xs_[b] - xs_[a], aby = ys_[b] - ys_[a];
        long double pa = (px - xs_[a]) * abx + (py - ys_[a]) * aby;
        long double pb = (px - xs_[b]) * abx + (py - ys_[b]) * aby;
        return pa >= 0.0L && pb <= 0.0L;
    }
    return incircle_ld(xs_[v[0]], ys_[v[0]], xs_[v[1]], ys_[v[1]], xs_[v[2]], ys_[v[2]],
                       px, py) > 0.0L;
}

int Delaunay2D::locate(double px, double py, int hint) const {
    int t = hint;
    int nt = num_triangles();
    if (t < 0 || t >= nt || dead_[t]) {
        t = -1;
        for (int i = 0; i < nt; ++i)
            if (!dead_[i] && !is_ghost(i)) {
                t = i;
                break;
            }
        if (t < 0) throw ConstructionError("locate: no live triangles");
    }
    // start from a real triangle; a ghost's only real neighbor is across
    // its hull edge
    if (is_ghost(t)) {
        for (int i = 0; i < 3; ++i) {
            int s = adj_[3 * t + i];
            if (s >= 0 && !is_ghost(s)) {
                t = s;
                break;
            }
        }
        if (is_ghost(t)) throw ConstructionError("locate: no real triangle reachable");
    }
    long long guard = 4LL * nt + 64;
    while (guard-- > 0) {
        if (is_ghost(t)) return t;
        const std::int32_t* v = &tri_[3 * t];
        bool moved = false;
        for (int i = 0; i < 3; ++i) {
            std::int32_t a = v[(i + 1) % 3];
            std::int32_t b = v[(i + 2) % 3];
            if (orient_ld(xs_[a], ys_[a], xs_[b], ys_[b], px, py) < 0.0L) {
                t = adj_[3 * t + i];
                moved = true;
                break;
            }
        }
        if (!moved) return t;
    }
    // pathological walk; fall back to an exhaustive scan
    for (int i = 0; i < nt; ++i)
        if (!dead_[i] && in_cavity(i, px, py)) return i;
    throw ConstructionError("locate: walk failed to terminate");
}

void Delaunay2D::insert_point(int p, int& hint) {
    double px = xs_[p], py = ys_[p];
    int t0 = locate(px, py, hint);
    auto has_duplicate = [&](int t) {
        for (int i = 0; i < 3; ++i) {
            std::int32_t v = tri_[3 * t + i];
            if (v != kInfinite && xs_[v] == px && ys_[v] == py) return true;
        }
        return false;
    };
    // The walk exits through the first hull edge it crosses, which need not
    // be an edge the point is beyond; scan the ghost ring for a true conflict.
    if (!in_cavity(t0, px, py)) {
        if (!is_ghost(t0)) {
            // a real triangle containing p in its closure but not in conflict
            // means p coincides with one of its vertices
            if (has_duplicate(t0)) return;
            throw ConstructionError("insert_point: located triangle not in conflict");
        }
        int prev = -1, g = t0;
        while (!in_cavity(g, px, py)) {
            int nxt = -1;
            for (int i = 0; i < 3; ++i) {
                int s = adj_[3 * g + i];
                if (is_ghost(s) && s != prev) {
                    nxt = s;
                    break;
                }
            }
            prev = g;
            g = nxt;
            if (g < 0 || g == t0)
                throw ConstructionError("insert_point: no conflicting hull edge");
        }
        t0 = g;
    }
    // drop exact duplicates (checked over the whole cavity below)
    ++cur_stamp_;
    cavity_.clear();
    stack_.clear();
    boundary_.clear();
    if (has_duplicate(t0)) return;
    stamp_[t0] = cur_stamp_;
    cavity_.push_back(t0);
    stack_.push_back(t0);
    while (!stack_.empty()) {
        int t = stack_.back();
        stack_.pop_back();
        for (int i = 0; i < 3; ++i) {
            int s = adj_[3 * t + i];
            if (stamp_[s] == cur_stamp_) continue;
            if (in_cavity(s, px, py)) {
                if (has_duplicate(s)) return;
                stamp_[s] = cur_stamp_;
                cavity_.push_back(s);
                stack_.push_back(s);
            } else {
                boundary_.push_back({tri_[3 * t + ((i + 1) % 3)],
                                     tri_[3 * t + ((i + 2) % 3)], s});
            }
        }
    }

    for (int t : cavity_) {
        dead_[t] = 1;
        free_.push_back(t);
    }

    // star the cavity boundary from p; triangle k is (u_k, v_k, p)
    auto nb = static_cast<int>(boundary_.size());
    scratch_tris_.clear();
    for (int k = 0; k < nb; ++k) {
        int nt = new_triangle(boundary_[k].u, boundary_[k].v, p);
        scratch_tris_.push_back(nt);
        int out = boundary_[k].outside;
        adj_[3 * nt + 2] = out;
        // the outside triangle sees the reversed edge (v,u)
        for (int j = 0; j < 3; ++j) {
            if (tri_[3 * out + ((j + 1) % 3)] == boundary_[k].v &&
                tri_[3 * out + ((j + 2) % 3)] == boundary_[k].u) {
                adj_[3 * out + j] = nt;
                break;
            }
        }
    }
    // internal links: across (v,p) sits the triangle whose edge starts at v;
    // across (p,u) the one whose edge ends at u
    for (int k = 0; k < nb; ++k) {
        int nt = scratch_tris_[k];
        for (int m = 0; m < nb; ++m) {
            if (boundary_[m].u == boundary_[k].v) adj_[3 * nt] = scratch_tris_[m];
            if (boundary_[m].v == boundary_[k].u) adj_[3 * nt + 1] = scratch_tris_[m];
        }
    }
    hint = scratch_tris_.empty() ? t0 : scratch_tris_[0];
}

void Delaunay2D::build(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw InputError("Delaunay2D: coordinate size mismatch");
    xs_ = xs;
    ys_ = ys;
    tri_.clear();
    adj_.clear();
    dead_.clear();
    stamp_.clear();
    free_.clear();
    cur_stamp_ = 0;
    auto n = static_cast<std::int32_t>(xs_.size());
    if (n < 3) throw InputError("Delaunay2D: need at least 3 points");
    tri_.reserve(6 * static_cast<std::size_t>(n) + 24);
    adj_.reserve(6 * static_cast<std::size_t>(n) + 24);
    dead_.reserve(2 * static_cast<std::size_t>(n) + 8);
    stamp_.reserve(2 * static_cast<std::size_t>(n) + 8);

    std::vector<std::int32_t> order = hilbert_order(xs_, ys_);

    // seed triangle: first point, the next distinct one, the next
    // non-collinear one
    std::int32_t i0 = order[0], i1 = -1, i2 = -1;
    std::size_t pos = 1;
    for (; pos < order.size(); ++pos) {
        std::int32_t v = order[pos];
        if (xs_[v] != xs_[i0] || ys_[v] != ys_[i0]) {
            i1 = v;
            ++pos;
            break;
        }
    }
    std::vector<std::uint8_t> used(n, 0);
    for (std::size_t q = pos; q < order.size(); ++q) {
        std::int32_t v = order[q];
        if (orient_ld(xs_[i0], ys_[i0], xs_[i1], ys_[i1], xs_[v], ys_[v]) != 0.0L) {
            i2 = v;
            used[v] = 1;
            break;
        }
    }
    if (i1 < 0 || i2 < 0)
        throw ConstructionError("Delaunay2D: degenerate input (collinear or coincident)");
    used[i0] = used[i1] = 1;
    if (orient_ld(xs_[i0], ys_[i0], xs_[i1], ys_[i1], xs_[i2], ys_[i2]) < 0.0L)
        std::swap(i1, i2);

    int t0 = new_triangle(i0, i1, i2);
    int ga = new_triangle(i1, i0, kInfinite);  // across (i0,i1)
    int gb = new_triangle(i2, i1, kInfinite);  // across (i1,i2)
    int gc = new_triangle(i0, i2, kInfinite);  // across (i2,i0)
    adj_[3 * t0 + 2] = ga;
    adj_[3 * t0 + 0] = gb;
    adj_[3 * t0 + 1] = gc;
    adj_[3 * ga + 2] = t0;
    adj_[3 * gb + 2] = t0;
    adj_[3 * gc + 2] = t0;
    adj_[3 * ga + 0] = gc;
    adj_[3 * ga + 1] = gb;
    adj_[3 * gb + 0] = ga;
    adj_[3 * gb + 1] = gc;
    adj_[3 * gc + 0] = gb;
    adj_[3 * gc + 1] = ga;

    int hint = t0;
    for (std::int32_t v : order) {
        if (used[v]) continue;
        insert_point(v, hint);
    }

    hull_.assign(n, 0);
    vert_tri_.assign(n, -1);
    for (int t = 0; t < num_triangles(); ++t) {
        if (dead_[t]) continue;
        bool ghost = is_ghost(t);
        for (int i = 0; i < 3; ++i) {
            std::int32_t v = tri_[3 * t + i];
            if (v == kInfinite) continue;
            if (ghost)
                hull_[v] = 1;
            else if (vert_tri_[v] < 0)
                vert_tri_[v] = t;
        }
    }
}

std::vector<std::pair<std::int32_t, std::int32_t>> Delaunay2D::edges() const {
    std::vector<std::pair<std::int32_t, std::int32_t>> out;
    for_each_edge([&](std::int32_t a, std::int32_t b) {
        out.emplace_back(std::min(a, b), std::max(a, b));
    });
    return out;
}

bool Delaunay2D::cell_triangles(int v, std::vector<int>& out) const {
    out.clear();
    if (hull_[v]) return false;
    int t0 = vert_tri_[v];
    if (t0 < 0) return false;
    int t = t0;
    do {
        out.push_back(t);
        int i = 0;
        while (tri_[3 * t + i] != v) ++i;
        // cross the edge (v, v_{i+1}), i.e. the edge opposite v_{i+2}
        t = adj_[3 * t + ((i + 2) % 3)];
        if (t < 0 || is_ghost(t)) return false;
        if (out.size() > 1024) throw ConstructionError("cell_triangles: walk did not close");
    } while (t != t0);
    return true;
}

void Delaunay2D::circumcenter(int t, double& cx, double& cy) const {
    const std::int32_t* v = &tri_[3 * t];
    if (v[0] == kInfinite || v[1] == kInfinite || v[2] == kInfinite)
        throw InputError("circumcenter: ghost triangle");
    long double ax = xs_[v[0]], ay = ys_[v[0]];
    long double bx = static_cast<long double>(xs_[v[1]]) - ax;
    long double by = static_cast<long double>(ys_[v[1]]) - ay;
    long double ex = static_cast<long double>(xs_[v[2]]) - ax;
    long double ey = static_cast<long double>(ys_[v[2]]) - ay;
    long double bl = bx * bx + by * by;
    long double el = ex * ex + ey * ey;
    long double d = 2.0L * (bx * ey - by * ex);
    if (d == 0.0L) throw ConstructionError("circumcenter: degenerate triangle");
    cx = static_cast<double>(ax + (ey * bl - by * el) / d);
    cy = static_cast<double>(ay + (bx * el - ex * bl) / d);
}

}  // namespace curvo
