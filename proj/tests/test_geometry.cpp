#include <cmath>

#include "curvoronoi/geometry.hpp"
#include "curvoronoi/rng.hpp"
#include "doctest.h"

using namespace curvo;

namespace {

Point hyper_point(const SpaceSpec& s, double t1, double t2) {
    // exp of (t1, t2) at the apex, unit-curvature formula scaled by R
    double R = s.model_radius();
    double r = std::hypot(t1, t2);
    Point x(3);
    if (r == 0.0) {
        x << R, 0.0, 0.0;
        return x;
    }
    x << R * std::cosh(r / R), R * std::sinh(r / R) * t1 / r,
        R * std::sinh(r / R) * t2 / r;
    return x;
}

}  // namespace

TEST_CASE("euclidean distance and geodesics") {
    SpaceSpec s = SpaceSpec::euclidean(2);
    Point a(2), b(2);
    a << 1.0, 2.0;
    b << 4.0, 6.0;
    CHECK(distance(s, a, b) == doctest::Approx(5.0).epsilon(1e-14));
    Point m = geodesic_point(s, a, b, 0.25);
    CHECK(m[0] == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(m[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("hyperbolic distance matches right-triangle law of cosines") {
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    // legs of length 1 and 2 along orthogonal directions at the apex:
    // cosh c = cosh a cosh b
    Point a = hyper_point(s, 1.0, 0.0);
    Point b = hyper_point(s, 0.0, 2.0);
    CHECK(distance(s, a, b) == doctest::Approx(2.4444289498610536).epsilon(1e-12));
    // equal legs of length 1: acosh(cosh(1)^2)
    Point c = hyper_point(s, 0.0, 1.0);
    Point d = hyper_point(s, 1.0, 0.0);
    CHECK(distance(s, c, d) == doctest::Approx(1.513374006596504).epsilon(1e-12));
}

TEST_CASE("hyperbolic distance is scale covariant in the model radius") {
    // same chart coordinates, curvature -1/4 doubles the model radius; the
    // triangle shrinks relative to the curvature scale, distances approach
    // the Euclidean hypotenuse from above
    SpaceSpec s1 = SpaceSpec::hyperbolic(2, -1.0);
    SpaceSpec s4 = SpaceSpec::hyperbolic(2, -0.25);
    auto leg = [](const SpaceSpec& s, double t1, double t2) {
        double R = s.model_radius();
        double r = std::hypot(t1, t2);
        Point x(3);
        x << R * std::cosh(r / R), R * std::sinh(r / R) * t1 / r,
            R * std::sinh(r / R) * t2 / r;
        return x;
    };
    double d1 = distance(s1, leg(s1, 1.0, 0.0), leg(s1, 0.0, 1.0));
    double d4 = distance(s4, leg(s4, 1.0, 0.0), leg(s4, 0.0, 1.0));
    CHECK(d4 < d1);
    CHECK(d4 > std::sqrt(2.0));
}

TEST_CASE("validate_point accepts the sheet and rejects off-sheet points") {
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    Point x = hyper_point(s, 14.0, -3.0);  // large coordinates, x0^2 ~ 3e14
    CHECK_NOTHROW(s.validate_point(x));
    Point bad = x;
    bad[1] += 1e-3;
    CHECK_THROWS_AS(s.validate_point(bad), InvalidPointError);
    Point lower = x;
    lower[0] = -lower[0];
    CHECK_THROWS_AS(s.validate_point(lower), InvalidPointError);
}

TEST_CASE("ball volumes match closed forms and quadrature") {
    CHECK(ball_volume(0.0, 2, 1.3) == doctest::Approx(M_PI * 1.69).epsilon(1e-12));
    CHECK(ball_volume(0.0, 3, 2.0) ==
          doctest::Approx(4.0 / 3.0 * M_PI * 8.0).epsilon(1e-12));
    // H^2: 2 pi (cosh r - 1); H^3: pi (sinh 2r - 2r)
    CHECK(ball_volume(-1.0, 2, 1.3) ==
          doctest::Approx(6.1004340265198485).epsilon(1e-10));
    CHECK(ball_volume(-1.0, 3, 1.3) ==
          doctest::Approx(12.863980687138946).epsilon(1e-8));
    // independent Simpson quadrature of 2 pi s_c for curvature -0.5
    double c = -0.5, r = 2.1;
    int n = 4000;
    double acc = 0.0, h = r / n;
    for (int i = 0; i < n; ++i) {
        double a = i * h, m = a + h / 2, b = a + h;
        acc += h / 6.0 * (s_c(c, a) + 4.0 * s_c(c, m) + s_c(c, b));
    }
    CHECK(ball_volume(c, 2, r) == doctest::Approx(2.0 * M_PI * acc).epsilon(1e-9));
}

TEST_CASE("normal chart round trip, radial isometry, frame orthonormality") {
    SpaceSpec s = SpaceSpec::hyperbolic(3, -0.5);
    Point base = Point::Zero(4);
    base[0] = s.model_radius();
    Chart chart = normal_chart(s, base);
    // Minkowski-orthonormal frame orthogonal to the base
    for (int i = 0; i < 3; ++i) {
        CHECK(std::fabs(minkowski_dot(chart.frame.col(i), base)) < 1e-10);
        for (int j = 0; j < 3; ++j) {
            double want = i == j ? 1.0 : 0.0;
            CHECK(minkowski_dot(chart.frame.col(i), chart.frame.col(j)) ==
                  doctest::Approx(want).epsilon(1e-12));
        }
    }
    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        Eigen::VectorXd v(3);
        for (int i = 0; i < 3; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
        Point p = chart_forward(chart, v);
        CHECK_NOTHROW(s.validate_point(p));
        CHECK(distance(s, base, p) == doctest::Approx(v.norm()).epsilon(1e-10));
        Eigen::VectorXd w = chart_inverse(chart, p);
        CHECK((w - v).norm() < 1e-9);
    }
    CHECK_THROWS_AS(chart_forward(chart, Eigen::VectorXd::Constant(3, 100.0)),
                    ChartDomainError);
}

TEST_CASE("chart density equals the volume element ratio") {
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    Point base = Point::Zero(3);
    base[0] = 1.0;
    Chart chart = normal_chart(s, base);
    Eigen::VectorXd v(2);
    v << 0.3, 0.4;  // |v| = 0.5
    CHECK(chart_density(chart, v) ==
          doctest::Approx(std::sinh(0.5) / 0.5).epsilon(1e-12));
    CHECK(chart_density(chart, Eigen::VectorXd::Zero(2)) == doctest::Approx(1.0));
}

TEST_CASE("normal-coordinate distance sandwich (1 +- K r^2)") {
    SpaceSpec s = SpaceSpec::hyperbolic(2, -1.0);
    Point base = Point::Zero(3);
    base[0] = 1.0;
    Chart chart = normal_chart(s, base);
    Rng rng(5);
    for (double r : {0.05, 0.1, 0.25}) {
        for (int k = 0; k < 500; ++k) {
            Eigen::VectorXd u(2), v(2);
            for (int i = 0; i < 2; ++i) {
                u[i] = r * (2.0 * rng.uniform() - 1.0) / std::sqrt(2.0);
                v[i] = r * (2.0 * rng.uniform() - 1.0) / std::sqrt(2.0);
            }
            double de = (u - v).norm();
            double dm = distance(s, chart_forward(chart, u), chart_forward(chart, v));
            double K = s.curvature_bound_K;
            CHECK(dm >= (1.0 - K * r * r) * de - 1e-12);
            CHECK(dm <= (1.0 + K * r * r) * de + 1e-12);
        }
    }
}

TEST_CASE("space validation rejects bad parameters") {
    SpaceSpec s;
    s.dimension = 2;
    s.curvature = 0.5;  // positive curvature unsupported
    s.curvature_bound_K = 0.5;
    CHECK_THROWS_AS(s.validate(), InputError);
    SpaceSpec h = SpaceSpec::hyperbolic(2, -1.0);
    h.curvature_bound_K = 0.5;  // must dominate |curvature|
    CHECK_THROWS_AS(h.validate(), InputError);
}
