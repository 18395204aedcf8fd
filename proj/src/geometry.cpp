#include "curvoronoi/geometry.hpp"

#include <cmath>
#include <sstream>

namespace curvo {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPointTol = 1e-9;

// arcosh with the clamping policy: arguments in [1 - 1e-7, 1) are rounded up
// to 1 (floating-point drift on near-coincident points), anything lower is a
// hard error.
double safe_arcosh(double a) {
    if (a < 1.0) {
        if (a < 1.0 - 1e-7) {
            std::ostringstream os;
            os << "arcosh argument " << a << " below 1 - 1e-7";
            throw InvalidPointError(os.str());
        }
        a = 1.0;
    }
    return std::acosh(a);
}

double adaptive_simpson(double (*f)(double, double, int), double c, int d, double a,
                        double b, double fa, double fm, double fb, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm, c, d);
    double frm = f(rm, c, d);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, c, d, a, m, fa, flm, fm, eps / 2.0, depth - 1) +
           adaptive_simpson(f, c, d, m, b, fm, frm, fb, eps / 2.0, depth - 1);
}

double sphere_area_integrand(double t, double c, int d) {
    return std::pow(s_c(c, t), d - 1);
}

// surface area of the unit sphere S^(d-1): 2 pi^(d/2) / Gamma(d/2)
double omega_d(int d) {
    return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

SpaceSpec SpaceSpec::euclidean(int d, double K) {
    SpaceSpec s;
    s.dimension = d;
    s.curvature = 0.0;
    s.curvature_bound_K = K;
    s.validate();
    return s;
}

SpaceSpec SpaceSpec::hyperbolic(int d, double c) {
    SpaceSpec s;
    s.dimension = d;
    s.curvature = c;
    s.curvature_bound_K = std::fabs(c);
    s.validate();
    return s;
}

double SpaceSpec::model_radius() const {
    return 1.0 / std::sqrt(-curvature);
}

double SpaceSpec::radius_limit() const {
    if (curvature_bound_K <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 * kPi / std::sqrt(curvature_bound_K);
}

void SpaceSpec::validate() const {
    if (dimension < 2) throw InputError("SpaceSpec: dimension must be >= 2");
    if (curvature > 0.0) throw InputError("SpaceSpec: curvature must be <= 0");
    if (curvature_bound_K < std::fabs(curvature))
        throw InputError("SpaceSpec: curvature_bound_K must be >= |curvature|");
}

void SpaceSpec::validate_point(const Point& x) const {
    if (x.size() != ambient_dim()) {
        std::ostringstream os;
        os << "point has " << x.size() << " coordinates, expected " << ambient_dim();
        throw InputError(os.str());
    }
    if (!x.allFinite()) throw InvalidPointError("point has non-finite coordinates");
    if (!is_euclidean()) {
        double q = minkowski_dot(x, x);
        double target = 1.0 / curvature;  // = -1/|c|
        // the residual of an eps-accurate hyperboloid point scales with
        // x0^2, so the tolerance must be relative to that
        double scale = std::max({1.0, std::fabs(target), x[0] * x[0]});
        if (std::fabs(q - target) > kPointTol * scale)
            throw InvalidPointError("point is off the hyperboloid sheet");
        if (x[0] <= 0.0) throw InvalidPointError("point on the wrong hyperboloid sheet");
    }
}

double minkowski_dot(const Point& x, const Point& y) {
    double s = -x[0] * y[0];
    for (int i = 1; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double distance(const SpaceSpec& space, const Point& x, const Point& y) {
    space.validate_point(x);
    space.validate_point(y);
    if (space.is_euclidean()) return (x - y).norm();
    double R = space.model_radius();
    // d = R arcosh(-<x,y>/R^2)
    return R * safe_arcosh(-minkowski_dot(x, y) / (R * R));
}

Point geodesic_point(const SpaceSpec& space, const Point& x, const Point& y, double t) {
    space.validate_point(x);
    space.validate_point(y);
    if (t < 0.0 || t > 1.0) throw InputError("geodesic_point: t must be in [0,1]");
    double L = distance(space, x, y);
    if (L <= kPointTol) throw InputError("geodesic_point: x and y coincide");
    if (space.is_euclidean()) return x + t * (y - x);
    double R = space.model_radius();
    double a = L / R;
    // y = cosh(a) x + sinh(a) R u with u the unit tangent at x toward y
    Point u = (y - std::cosh(a) * x) / (R * std::sinh(a));
    double s = t * a;
    return std::cosh(s) * x + std::sinh(s) * R * u;
}

double s_c(double curvature, double r) {
    if (r < 0.0) throw InputError("s_c: r must be >= 0");
    if (curvature == 0.0) return r;
    double R = 1.0 / std::sqrt(std::fabs(curvature));
    if (curvature < 0.0) return R * std::sinh(r / R);
    return R * std::sin(r / R);
}

double ball_volume(double curvature, int d, double r) {
    if (d < 2) throw InputError("ball_volume: d must be >= 2");
    if (r < 0.0) throw InputError("ball_volume: r must be >= 0");
    if (r == 0.0) return 0.0;
    if (curvature == 0.0) return omega_d(d) * std::pow(r, d) / d;
    double R = 1.0 / std::sqrt(std::fabs(curvature));
    if (d == 2) {
        if (curvature < 0.0) return 2.0 * kPi * R * R * (std::cosh(r / R) - 1.0);
        return 2.0 * kPi * R * R * (1.0 - std::cos(r / R));
    }
    double fa = sphere_area_integrand(0.0, curvature, d);
    double fm = sphere_area_integrand(0.5 * r, curvature, d);
    double fb = sphere_area_integrand(r, curvature, d);
    double rough = (fa + 4.0 * fm + fb) * r / 6.0;
    double eps = 1e-10 * std::max(rough, 1e-300);
    return omega_d(d) *
           adaptive_simpson(sphere_area_integrand, curvature, d, 0.0, r, fa, fm, fb, eps, 48);
}

Chart normal_chart(const SpaceSpec& space, const Point& base, double radius) {
    space.validate();
    space.validate_point(base);
    if (radius <= 0.0) throw InputError("normal_chart: radius must be > 0");
    if (radius > space.radius_limit())
        radius = space.radius_limit();
    Chart chart;
    chart.space = space;
    chart.base = base;
    chart.radius = radius;
    int d = space.dimension;
    if (space.is_euclidean()) {
        chart.frame = Eigen::MatrixXd::Identity(d, d);
        return chart;
    }
    // Minkowski Gram-Schmidt: d spacelike unit vectors orthogonal to the
    // (timelike) base direction.
    int ad = space.ambient_dim();
    double R = space.model_radius();
    Point u0 = base / R;  // <u0,u0> = -1
    chart.frame.resize(ad, d);
    int have = 0;
    for (int i = 0; i < ad && have < d; ++i) {
        Point v = Point::Zero(ad);
        v[i] = 1.0;
        v += minkowski_dot(v, u0) * u0;  // remove the timelike component
        for (int j = 0; j < have; ++j)
            v -= minkowski_dot(v, chart.frame.col(j)) * chart.frame.col(j);
        double q = minkowski_dot(v, v);
        if (q > 1e-12) chart.frame.col(have++) = v / std::sqrt(q);
    }
    if (have < d) throw ConstructionError("normal_chart: frame construction failed");
    return chart;
}

Point chart_forward(const Chart& chart, const Eigen::VectorXd& v) {
    if (v.size() != chart.space.dimension)
        throw InputError("chart_forward: wrong coordinate dimension");
    double s = v.norm();
    if (s >= chart.radius) throw ChartDomainError("chart_forward: |v| >= chart radius");
    if (chart.space.is_euclidean()) return chart.base + chart.frame * v;
    if (s == 0.0) return chart.base;
    double R = chart.space.model_radius();
    Point u = chart.frame * (v / s);  // unit tangent
    return std::cosh(s / R) * chart.base + std::sinh(s / R) * R * u;
}

Eigen::VectorXd chart_inverse(const Chart& chart, const Point& p) {
    chart.space.validate_point(p);
    double s = distance(chart.space, chart.base, p);
    if (s >= chart.radius) throw ChartDomainError("chart_inverse: point outside chart ball");
    int d = chart.space.dimension;
    if (chart.space.is_euclidean()) {
        Eigen::VectorXd v = chart.frame.transpose() * (p - chart.base);
        return v;
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    if (s <= 0.0) return v;
    double R = chart.space.model_radius();
    Point u = (p - std::cosh(s / R) * chart.base) / (R * std::sinh(s / R));
    for (int j = 0; j < d; ++j) v[j] = s * minkowski_dot(u, chart.frame.col(j));
    return v;
}

double chart_density(const Chart& chart, const Eigen::VectorXd& v) {
    if (v.size() != chart.space.dimension)
        throw InputError("chart_density: wrong coordinate dimension");
    double s = v.norm();
    if (s >= chart.radius) throw ChartDomainError("chart_density: |v| >= chart radius");
    if (chart.space.is_euclidean()) return 1.0;
    if (s < 1e-12) return 1.0;
    return std::pow(s_c(chart.space.curvature, s) / s, chart.space.dimension - 1);
}

}  // namespace curvo
