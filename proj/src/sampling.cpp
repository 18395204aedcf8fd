#include "curvoronoi/sampling.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace curvo {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void Window::validate(const SpaceSpec& space) const {
    space.validate_point(center);
    if (radius <= 0.0) throw InputError("Window: radius must be > 0");
    if (buffer < 0.0 || buffer >= radius) throw InputError("Window: need 0 <= buffer < radius");
}

Eigen::VectorXd sample_direction(Rng& rng, int d) {
    Eigen::VectorXd u(d);
    for (;;) {
        for (int i = 0; i < d; ++i) u[i] = rng.normal();
        double n = u.norm();
        if (n > 1e-12) return u / n;
    }
}

double radial_sample(const SpaceSpec& space, double R, double u) {
    if (u < 0.0 || u >= 1.0) throw InputError("radial_sample: u must be in [0,1)");
    if (u == 0.0) return 0.0;
    int d = space.dimension;
    double c = space.curvature;
    if (c == 0.0) return R * std::pow(u, 1.0 / d);
    if (d == 2) {
        double Rm = space.model_radius();
        return Rm * std::acosh(1.0 + u * (std::cosh(R / Rm) - 1.0));
    }
    double total = ball_volume(c, d, R);
    double lo = 0.0, hi = R;
    while (hi - lo > 1e-15 * R) {
        double mid = 0.5 * (lo + hi);
        double F = ball_volume(c, d, mid) / total;
        if (std::fabs(F - u) <= 1e-12) return mid;
        (F < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ColoredConfig sample_config(const SpaceSpec& space, const Window& window, double lambda,
                            bool p_marks, std::uint64_t seed, double expected_count_cap) {
    (void)p_marks;  // marks are always stored: one config serves every p
    space.validate();
    window.validate(space);
    if (lambda <= 0.0) throw InputError("sample_config: lambda must be > 0");
    double volume = ball_volume(space.curvature, space.dimension, window.radius);
    double mean = lambda * volume;
    if (mean > expected_count_cap) {
        std::ostringstream os;
        os << "sample_config: expected count lambda*V = " << mean << " exceeds cap "
           << expected_count_cap;
        throw ResourceError(os.str());
    }
    Rng rng(seed);
    auto n = static_cast<Eigen::Index>(rng.poisson(mean));
    ColoredConfig cfg;
    cfg.space = space;
    cfg.window = window;
    cfg.intensity = lambda;
    cfg.seed = seed;
    cfg.points.resize(space.ambient_dim(), n);
    cfg.marks.resize(n);
    int d = space.dimension;
    if (space.is_euclidean()) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = radial_sample(space, window.radius, rng.uniform());
            cfg.points.col(i) = window.center + r * sample_direction(rng, d);
            cfg.marks[i] = rng.uniform();
        }
    } else {
        Chart chart = normal_chart(space, window.center);
        double R = space.model_radius();
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = radial_sample(space, window.radius, rng.uniform());
            Eigen::VectorXd dir = sample_direction(rng, d);
            Point u = chart.frame * dir;
            cfg.points.col(i) =
                std::cosh(r / R) * window.center + std::sinh(r / R) * R * u;
            cfg.marks[i] = rng.uniform();
        }
    }
    return cfg;
}

std::vector<int> white_set(const ColoredConfig& config, double p) {
    if (p < 0.0 || p > 1.0) throw InputError("white_set: p must be in [0,1]");
    std::vector<int> out;
    for (int i = 0; i < config.size(); ++i)
        if (config.marks[i] <= p) out.push_back(i);
    return out;
}

CoupledPair couple_local(const SpaceSpec& space, const Point& x0, double r, double lambda,
                         std::uint64_t seed) {
    space.validate();
    space.validate_point(x0);
    if (r <= 0.0 || lambda <= 0.0) throw InputError("couple_local: need r > 0 and lambda > 0");
    if (r > space.radius_limit())
        throw InputError("couple_local: r exceeds the admissible chart radius");

    CoupledPair pair;
    // the chart itself extends slightly beyond the sampling ball so that
    // forward/inverse evaluations on boundary points stay in-domain
    pair.chart = normal_chart(space, x0, std::min(2.0 * r, space.radius_limit()));
    pair.agreement_radius = r;

    SpaceSpec eu = SpaceSpec::euclidean(space.dimension, space.curvature_bound_K);
    Window ewin;
    ewin.center = Point::Zero(space.dimension);
    ewin.radius = r;
    Window mwin;
    mwin.center = x0;
    mwin.radius = r;

    int d = space.dimension;
    Rng rng(split_seed(seed, 0));

    // shared layer tau0 ~ PPP(lambda * min(f,1) dx).  For our models f >= 1
    // (c < 0) or f = 1 (c = 0), so min(f,1) = 1.
    double evol = ball_volume(0.0, d, r);
    auto n0 = static_cast<int>(rng.poisson(lambda * evol));
    std::vector<Eigen::VectorXd> shared(n0);
    std::vector<double> shared_marks(n0);
    for (int i = 0; i < n0; ++i) {
        double rr = radial_sample(eu, r, rng.uniform());
        shared[i] = rr * sample_direction(rng, d);
        shared_marks[i] = rng.uniform();
    }

    // discrepancy layer tau1 ~ PPP(lambda (f-1)^+) by thinning a candidate
    // PPP at the sup density; tau2 ~ PPP(lambda (1-f)^+) is empty for c <= 0.
    std::vector<Eigen::VectorXd> extra;
    std::vector<double> extra_marks;
    if (!space.is_euclidean()) {
        Rng rng1(split_seed(seed, 1));
        double fmax = std::pow(s_c(space.curvature, r) / r, d - 1);
        double cap = fmax - 1.0;
        if (cap > 0.0) {
            auto nc = static_cast<int>(rng1.poisson(lambda * cap * evol));
            for (int i = 0; i < nc; ++i) {
                double rr = radial_sample(eu, r, rng1.uniform());
                Eigen::VectorXd v = rr * sample_direction(rng1, d);
                double accept = rng1.uniform();
                double f = rr < 1e-12 ? 1.0 : std::pow(s_c(space.curvature, rr) / rr, d - 1);
                double mark = rng1.uniform();
                if (accept * cap < f - 1.0) {
                    extra.push_back(v);
                    extra_marks.push_back(mark);
                }
            }
        }
    }

    auto& ec = pair.euclidean_config;
    ec.space = eu;
    ec.window = ewin;
    ec.intensity = lambda;
    ec.seed = seed;
    ec.points.resize(d, n0);
    ec.marks.resize(n0);
    for (int i = 0; i < n0; ++i) {
        ec.points.col(i) = shared[i];
        ec.marks[i] = shared_marks[i];
    }

    auto& mc = pair.manifold_config;
    mc.space = space;
    mc.window = mwin;
    mc.intensity = lambda;
    mc.seed = seed;
    auto nm = static_cast<Eigen::Index>(n0 + extra.size());
    mc.points.resize(space.ambient_dim(), nm);
    mc.marks.resize(nm);
    for (int i = 0; i < n0; ++i) {
        mc.points.col(i) = chart_forward(pair.chart, shared[i]);
        mc.marks[i] = shared_marks[i];
        pair.matched.emplace_back(i, i);
    }
    for (std::size_t i = 0; i < extra.size(); ++i) {
        mc.points.col(n0 + static_cast<Eigen::Index>(i)) = chart_forward(pair.chart, extra[i]);
        mc.marks[n0 + static_cast<Eigen::Index>(i)] = extra_marks[i];
    }
    return pair;
}

void write_pointset(const std::string& path, const ColoredConfig& config) {
    std::ofstream out(path);
    if (!out) throw InputError("write_pointset: cannot open " + path);
    out << "curvoronoi-pointset v1\n";
    out << "space " << (config.space.is_euclidean() ? "euclidean" : "hyperbolic") << "\n";
    out << "dimension " << config.space.dimension << "\n";
    out << "curvature " << fmt17(config.space.curvature) << "\n";
    out << "lambda " << fmt17(config.intensity) << "\n";
    out << "seed " << config.seed << "\n";
    out << "window_radius " << fmt17(config.window.radius) << "\n";
    out << "window_buffer " << fmt17(config.window.buffer) << "\n";
    for (int i = 0; i < config.size(); ++i) {
        for (int j = 0; j < config.points.rows(); ++j) {
            if (j) out << ' ';
            out << fmt17(config.points(j, i));
        }
        out << ' ' << fmt17(config.marks[i]) << "\n";
    }
    if (!out) throw InputError("write_pointset: write failed on " + path);
}

ColoredConfig read_pointset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("read_pointset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "curvoronoi-pointset v1")
        throw InputError("read_pointset: bad or missing format header in " + path);

    std::string space_kind;
    int dimension = 0;
    double curvature = 0.0, lambda = 0.0, radius = 0.0, buffer = 0.0;
    std::uint64_t seed = 0;
    for (int k = 0; k < 7; ++k) {
        if (!std::getline(in, line)) throw InputError("read_pointset: truncated header");
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "space") ls >> space_kind;
        else if (key == "dimension") ls >> dimension;
        else if (key == "curvature") ls >> curvature;
        else if (key == "lambda") ls >> lambda;
        else if (key == "seed") ls >> seed;
        else if (key == "window_radius") ls >> radius;
        else if (key == "window_buffer") ls >> buffer;
        else throw InputError("read_pointset: unknown header key '" + key + "'");
        if (!ls) throw InputError("read_pointset: malformed header line '" + line + "'");
    }

    ColoredConfig cfg;
    cfg.space = space_kind == "euclidean" ? SpaceSpec::euclidean(dimension)
                                          : SpaceSpec::hyperbolic(dimension, curvature);
    cfg.window.center = cfg.space.is_euclidean()
                            ? Point(Point::Zero(dimension))
                            : [&] {
                                  Point c = Point::Zero(dimension + 1);
                                  c[0] = cfg.space.model_radius();
                                  return c;
                              }();
    cfg.window.radius = radius;
    cfg.window.buffer = buffer;
    cfg.intensity = lambda;
    cfg.seed = seed;

    int ad = cfg.space.ambient_dim();
    std::vector<double> data;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        for (int j = 0; j <= ad; ++j) {
            double v;
            if (!(ls >> v)) throw InputError("read_pointset: malformed point row '" + line + "'");
            data.push_back(v);
        }
    }
    auto n = static_cast<Eigen::Index>(data.size() / (ad + 1));
    cfg.points.resize(ad, n);
    cfg.marks.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int j = 0; j < ad; ++j) cfg.points(j, i) = data[i * (ad + 1) + j];
        cfg.marks[i] = data[i * (ad + 1) + ad];
    }
    return cfg;
}

}  // namespace curvo
