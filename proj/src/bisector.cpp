#include "curvoronoi/bisector.hpp"

#include <cmath>

#include "curvoronoi/error.hpp"

namespace curvo {

namespace {

double mdot3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double clamp(double t, double lo, double hi) { return std::min(std::max(t, lo), hi); }

}  // namespace

BisectorR2::BisectorR2(const Eigen::Vector2d& x, const Eigen::Vector2d& y) : x_(x) {
    Eigen::Vector2d e = y - x;
    double L = e.norm();
    if (L < 1e-14) throw InputError("BisectorR2: coincident points");
    m_ = 0.5 * (x + y);
    dir_ = Eigen::Vector2d(-e[1], e[0]) / L;
    h_ = 0.5 * L;
}

void BisectorR2::clip(const Eigen::Vector2d& w) {
    // |z-x|^2 <= |z-w|^2  <=>  2 z.(w-x) <= |w|^2 - |x|^2, z = m + t dir
    Eigen::Vector2d wx = w - x_;
    double a = 2.0 * dir_.dot(wx);
    double b = w.squaredNorm() - x_.squaredNorm() - 2.0 * m_.dot(wx);
    if (a > 0.0)
        hi_ = std::min(hi_, b / a);
    else if (a < 0.0)
        lo_ = std::max(lo_, b / a);
    else if (b < 0.0)
        lo_ = 1.0, hi_ = 0.0;  // infeasible
}

double BisectorR2::min_dist_x() const {
    if (empty()) return std::numeric_limits<double>::infinity();
    return dist_x(clamp(0.0, lo_, hi_));
}

BisectorH2::BisectorH2(const Eigen::Vector3d& x, const Eigen::Vector3d& y) : x_(x) {
    Eigen::Vector3d n = x - y;
    double nn = mdot3(n, n);
    if (nn < 1e-20) throw InputError("BisectorH2: coincident points");
    // timelike axis of the bisector plane
    Eigen::Vector3d v1 = x + y;
    u0_ = v1 / std::sqrt(-mdot3(v1, v1));
    // complete with a spacelike direction orthogonal to n and u0
    Eigen::Vector3d best = Eigen::Vector3d::Zero();
    double best_q = -1.0;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e[k] = 1.0;
        Eigen::Vector3d v = e - (mdot3(e, n) / nn) * n + mdot3(e, u0_) * u0_;
        double q = mdot3(v, v);
        if (q > best_q) {
            best_q = q;
            best = v;
        }
    }
    if (best_q <= 1e-18) throw InputError("BisectorH2: degenerate frame");
    u1_ = best / std::sqrt(best_q);
    P_ = -mdot3(x_, u0_);
    Q_ = -mdot3(x_, u1_);
}

Eigen::Vector3d BisectorH2::point_at(double t) const {
    return std::cosh(t) * u0_ + std::sinh(t) * u1_;
}

double BisectorH2::dist_x(double t) const {
    double a = P_ * std::cosh(t) + Q_ * std::sinh(t);
    return std::acosh(std::max(a, 1.0));
}

void BisectorH2::clip(const Eigen::Vector3d& w) {
    // d(z,x) <= d(z,w)  <=>  <z, w-x> <= 0, with z = cosh(t) u0 + sinh(t) u1:
    // A cosh t + B sinh t <= 0
    Eigen::Vector3d wx = w - x_;
    double A = mdot3(u0_, wx);
    double B = mdot3(u1_, wx);
    if (std::fabs(B) > std::fabs(A)) {
        double tr = std::atanh(-A / B);
        if (B > 0.0)
            hi_ = std::min(hi_, tr);
        else
            lo_ = std::max(lo_, tr);
    } else if (A > 0.0) {
        lo_ = 1.0;
        hi_ = 0.0;  // infeasible: A cosh dominates with the wrong sign
    }
    // A <= 0 with |B| <= |A|: constraint holds everywhere
}

double BisectorH2::min_dist_x() const {
    if (empty()) return std::numeric_limits<double>::infinity();
    double tstar = std::atanh(clamp(-Q_ / P_, -1.0 + 1e-15, 1.0 - 1e-15));
    return dist_x(clamp(tstar, lo_, hi_));
}

bool hyperbolic_circumcenter(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                             const Eigen::Vector3d& w, Eigen::Vector3d& out) {
    // <z, x-y> = 0 and <z, x-w> = 0 are Euclidean orthogonality against
    // J(x-y), J(x-w) with J = diag(-1,1,1), so z is parallel to their cross
    // product.
    Eigen::Vector3d a = x - y, b = x - w;
    a[0] = -a[0];
    b[0] = -b[0];
    Eigen::Vector3d v = a.cross(b);
    double q = mdot3(v, v);
    if (q >= -1e-300) return false;  // ideal or ultra-ideal circle
    v /= std::sqrt(-q);
    if (v[0] < 0.0) v = -v;
    out = v;
    return true;
}

}  // namespace curvo
