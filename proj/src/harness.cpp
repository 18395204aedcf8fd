#include "curvoronoi/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "curvoronoi/discretize.hpp"
#include "curvoronoi/percolation.hpp"
#include "curvoronoi/voronoi.hpp"

namespace curvo {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& where, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError("config: " + where + ": not a number: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& where, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError("config: " + where + ": not an integer: '" + v + "'");
    }
}

// grid syntax: either "a,b,c" or "lo:hi:step"
std::vector<double> parse_grid(const std::string& where, const std::string& v) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::istringstream is(v);
        std::string lo, hi, step;
        if (!std::getline(is, lo, ':') || !std::getline(is, hi, ':') ||
            !std::getline(is, step))
            throw InputError("config: " + where + ": expected lo:hi:step");
        double a = parse_double(where, trim(lo));
        double b = parse_double(where, trim(hi));
        double h = parse_double(where, trim(step));
        if (h <= 0.0 || b < a)
            throw InputError("config: " + where + ": bad grid range");
        for (int i = 0; a + i * h <= b + 1e-12; ++i)
            out.push_back(std::min(a + i * h, b));
        return out;
    }
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(parse_double(where, trim(tok)));
    if (out.empty()) throw InputError("config: " + where + ": empty list");
    return out;
}

Point canonical_center(const SpaceSpec& space) {
    Point c = Point::Zero(space.ambient_dim());
    if (!space.is_euclidean()) c[0] = space.model_radius();
    return c;
}

Window config_window(const ExperimentConfig& c) {
    if (!c.has_window) throw InputError("config: window: section required for kind '" +
                                        c.kind + "'");
    Window w;
    w.center = canonical_center(c.space);
    w.radius = c.window_radius;
    w.buffer = c.window_buffer;
    w.validate(c.space);
    return w;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InputError(origin + ":" + std::to_string(lineno) +
                                 ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(origin + ":" + std::to_string(lineno) +
                             ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty() || key.empty())
            throw InputError(origin + ":" + std::to_string(lineno) +
                             ": key outside a section");
        std::string full = section + "." + key;
        if (kv.count(full))
            throw InputError("config: duplicate key " + full);
        kv[full] = val;
    }

    ExperimentConfig c;
    std::set<std::string> seen;
    auto take = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        seen.insert(key);
        return &it->second;
    };
    auto require = [&](const char* key) -> const std::string& {
        const std::string* v = take(key);
        if (!v) throw InputError(std::string("config: missing required key ") + key);
        return *v;
    };

    if (const std::string* v = take("experiment.schema")) {
        c.schema = static_cast<int>(parse_u64("experiment.schema", *v));
        if (c.schema != 1)
            throw InputError("config: experiment.schema: unsupported version " +
                             std::to_string(c.schema));
    }
    c.kind = require("experiment.kind");
    static const std::set<std::string> kinds = {"sample",      "graph",   "estimate-pc",
                                               "estimate-pu", "couple",  "cutsets",
                                               "explore",     "events"};
    if (!kinds.count(c.kind))
        throw InputError("config: experiment.kind: unknown kind '" + c.kind + "'");

    c.space.dimension = static_cast<int>(parse_u64("space.dimension",
                                                   require("space.dimension")));
    c.space.curvature = parse_double("space.curvature", require("space.curvature"));
    c.space.curvature_bound_K =
        c.space.curvature == 0.0 ? 1.0 : -c.space.curvature;
    if (const std::string* v = take("space.curvature_bound"))
        c.space.curvature_bound_K = parse_double("space.curvature_bound", *v);
    c.space.validate();

    if (const std::string* v = take("window.radius")) {
        c.window_radius = parse_double("window.radius", *v);
        c.window_buffer = parse_double("window.buffer", require("window.buffer"));
        c.has_window = true;
    }

    if (const std::string* v = take("run.lambda")) c.lambda = parse_double("run.lambda", *v);
    if (const std::string* v = take("run.seed")) c.seed = parse_u64("run.seed", *v);
    if (const std::string* v = take("run.replicas"))
        c.replicas = static_cast<int>(parse_u64("run.replicas", *v));
    if (const std::string* v = take("run.workers"))
        c.workers = static_cast<int>(parse_u64("run.workers", *v));
    if (const std::string* v = take("run.out")) c.out_dir = *v;
    if (c.replicas < 1) throw InputError("config: run.replicas: must be >= 1");
    if (c.workers < 1) throw InputError("config: run.workers: must be >= 1");
    if (c.lambda <= 0.0) throw InputError("config: run.lambda: must be > 0");

    // kind-specific parameters
    if (c.kind == "estimate-pc") {
        c.eps_scale = parse_double("params.eps_scale", require("params.eps_scale"));
        c.p_grid = parse_grid("params.p_grid", require("params.p_grid"));
    } else if (c.kind == "estimate-pu") {
        c.n_scale = parse_double("params.n_scale", require("params.n_scale"));
        c.d_separation =
            parse_double("params.d_separation", require("params.d_separation"));
        c.p_grid = parse_grid("params.p_grid", require("params.p_grid"));
        if (const std::string* v = take("params.alpha"))
            c.alpha = parse_double("params.alpha", *v);
    } else if (c.kind == "couple") {
        c.couple_r = parse_double("params.r", require("params.r"));
        c.rho = parse_double("params.rho", require("params.rho"));
    } else if (c.kind == "cutsets") {
        if (const std::string* v = take("params.graph")) c.graph_kind = *v;
        if (c.graph_kind != "voronoi" && c.graph_kind != "net")
            throw InputError("config: params.graph: must be voronoi or net");
        if (c.graph_kind == "net")
            c.epsilon = parse_double("params.epsilon", require("params.epsilon"));
    } else if (c.kind == "explore") {
        c.p = parse_double("params.p", require("params.p"));
    } else if (c.kind == "events") {
        c.epsilon = parse_double("params.epsilon", require("params.epsilon"));
        c.p = parse_double("params.p", require("params.p"));
    } else if (c.kind == "graph") {
        if (const std::string* v = take("params.margins"))
            c.with_margins = parse_u64("params.margins", *v) != 0;
        if (const std::string* v = take("params.cells"))
            c.with_cells = parse_u64("params.cells", *v) != 0;
    }

    for (auto& [key, val] : kv)
        if (!seen.count(key))
            throw InputError("config: unknown key " + key + " for kind '" + c.kind +
                             "'");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("digest: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    return h;
}

namespace {

// canonical serialization for the config hash: every result-affecting field
std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "schema=" << c.schema << "\nkind=" << c.kind
       << "\ndimension=" << c.space.dimension << "\ncurvature=" << fmt(c.space.curvature)
       << "\ncurvature_bound=" << fmt(c.space.curvature_bound_K);
    if (c.has_window)
        os << "\nwindow=" << fmt(c.window_radius) << "," << fmt(c.window_buffer);
    os << "\nlambda=" << fmt(c.lambda) << "\nseed=" << c.seed
       << "\nreplicas=" << c.replicas;
    os << "\np_grid=";
    for (double p : c.p_grid) os << fmt(p) << ",";
    os << "\neps_scale=" << fmt(c.eps_scale) << "\nn_scale=" << fmt(c.n_scale)
       << "\nd_separation=" << fmt(c.d_separation) << "\nalpha=" << fmt(c.alpha)
       << "\np=" << fmt(c.p) << "\nepsilon=" << fmt(c.epsilon)
       << "\nr=" << fmt(c.couple_r) << "\nrho=" << fmt(c.rho)
       << "\ngraph=" << c.graph_kind << "\nmargins=" << c.with_margins
       << "\ncells=" << c.with_cells << "\n";
    return os.str();
}

struct ReplicaOutcome {
    bool failed = false;
    std::string error;
    std::string rows;         // formatted CSV rows (may be empty)
    double mark = kNan;       // estimator replicas
};

// Fixed fan-out: outcome i depends only on (config, split_seed(seed, i)), so
// any worker count yields the same outcome vector.
std::vector<ReplicaOutcome> run_replicas(
    int n, int workers, const std::function<ReplicaOutcome(int)>& fn) {
    std::vector<ReplicaOutcome> out(n);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) {
            try {
                out[i] = fn(i);
            } catch (const std::exception& e) {
                out[i].failed = true;
                out[i].error = e.what();
            }
        }
        return out;
    }
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (const std::exception& e) {
                out[i].failed = true;
                out[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

void write_estimate_csv(std::ostream& os, const Estimate& est, double scale) {
    os << "schema,row,p,scale,n,successes,value,ci_low,ci_high\n";
    for (const TableRow& r : est.table)
        os << kCsvSchema << ",theta," << fmt(r.p) << "," << fmt(scale) << "," << r.n
           << "," << r.successes << "," << fmt(r.value) << "," << fmt(r.ci_low) << ","
           << fmt(r.ci_high) << "\n";
    os << kCsvSchema << ",estimate," << fmt(kNan) << "," << fmt(scale) << ","
       << est.n_samples << ",0," << fmt(est.value) << "," << fmt(est.ci_low) << ","
       << fmt(est.ci_high) << "\n";
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& m) {
    std::ofstream os(path);
    if (!os) throw InputError("manifest: cannot write " + path);
    os << "curvoronoi-manifest v1\n";
    os << "build " << m.build_id << "\n";
    os << "kind " << m.kind << "\n";
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(m.config_hash));
    os << "config_hash " << hex << "\n";
    os << "seed " << m.seed << "\n";
    os << "replicas " << m.replicas << "\n";
    os << "failed_replicas " << m.failed_replicas << "\n";
    os << "wall_seconds " << fmt(m.wall_seconds) << "\n";
    os << "outputs " << m.output_digests.size() << "\n";
    for (auto& [p, d] : m.output_digests) {
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(d));
        os << "  " << p << " " << hex << "\n";
    }
    os << "replica_seeds " << m.replica_seeds.size() << "\n";
    for (std::uint64_t s : m.replica_seeds) os << "  " << s << "\n";
}

RunManifest run(const ExperimentConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(config.out_dir);
    std::string csv_path = config.out_dir + "/results.csv";

    RunManifest manifest;
    manifest.build_id = kBuildId;
    manifest.kind = config.kind;
    manifest.seed = config.seed;
    std::string canon = serialize_config(config);
    manifest.config_hash = fnv1a(canon.data(), canon.size());

    std::ostringstream csv;
    std::vector<ReplicaOutcome> outcomes;
    const SpaceSpec& space = config.space;

    if (config.kind == "sample") {
        Window w = config_window(config);
        ColoredConfig cfg = sample_config(space, w, config.lambda, true, config.seed);
        std::string pts = config.out_dir + "/points.txt";
        write_pointset(pts, cfg);
        manifest.output_digests[pts] = digest_file(pts);
        csv << "schema,n_points,seed\n"
            << kCsvSchema << "," << cfg.size() << "," << config.seed << "\n";
        manifest.replicas = 1;
        manifest.replica_seeds.push_back(config.seed);
    } else if (config.kind == "graph") {
        Window w = config_window(config);
        ColoredConfig cfg = sample_config(space, w, config.lambda, true, config.seed);
        BuildOptions opts;
        opts.with_margins = config.with_margins;
        opts.with_cells = config.with_cells;
        VoronoiGraph g = build_graph(cfg, opts);
        std::string gp = config.out_dir + "/graph.txt";
        write_graph(gp, g);
        manifest.output_digests[gp] = digest_file(gp);
        int cert = 0;
        for (std::uint8_t c : g.certified) cert += c != 0;
        csv << "schema,n_vertices,n_edges,certified_fraction,seed\n"
            << kCsvSchema << "," << g.size() << "," << g.edge_list.size() << ","
            << fmt(g.size() ? static_cast<double>(cert) / g.size() : 0.0) << ","
            << config.seed << "\n";
        manifest.replicas = 1;
        manifest.replica_seeds.push_back(config.seed);
    } else if (config.kind == "estimate-pc" || config.kind == "estimate-pu") {
        bool pc = config.kind == "estimate-pc";
        outcomes = run_replicas(config.replicas, config.workers, [&](int i) {
            ReplicaOutcome r;
            std::uint64_t s = split_seed(config.seed, i);
            r.mark = pc ? critical_cross_mark(space, config.lambda, config.eps_scale, s)
                        : critical_connection_mark(space, config.lambda, config.n_scale,
                                                   config.d_separation, s);
            return r;
        });
        std::vector<double> marks;
        for (auto& o : outcomes)
            if (!o.failed) marks.push_back(o.mark);
        if (marks.empty()) throw ResourceError("run: every replica failed");
        Estimate est =
            pc ? summarize_pc(std::move(marks), config.p_grid, config.seed,
                              {{"lambda", config.lambda},
                               {"eps_scale", config.eps_scale}})
               : summarize_pu(std::move(marks), config.p_grid, config.alpha,
                              config.seed,
                              {{"lambda", config.lambda},
                               {"N_scale", config.n_scale},
                               {"D_separation", config.d_separation},
                               {"alpha", config.alpha}});
        write_estimate_csv(csv, est, pc ? config.eps_scale : config.n_scale);
    } else if (config.kind == "couple") {
        Point x0 = canonical_center(space);
        csv << "schema,replica,seed,eql,rob,sma,sim,graphs_equal,inconclusive\n";
        outcomes = run_replicas(config.replicas, config.workers, [&](int i) {
            ReplicaOutcome r;
            std::uint64_t s = split_seed(config.seed, i);
            // the agreement conditions compare the graphs on B(0, r) inside a
            // pair coupled out to radius 8r
            CoupledPair pair =
                couple_local(space, x0, 8.0 * config.couple_r, config.lambda, s);
            AgreementReport rep = check_agreement(pair, config.rho);
            std::ostringstream os;
            os << kCsvSchema << "," << i << "," << s << "," << rep.eql << ","
               << rep.rob << "," << rep.sma << "," << rep.sim << ","
               << rep.graphs_equal << "," << rep.inconclusive << "\n";
            r.rows = os.str();
            return r;
        });
    } else if (config.kind == "cutsets") {
        Window w = config_window(config);
        csv << "schema,replica,seed,order,size,minimal,connected\n";
        outcomes = run_replicas(config.replicas, config.workers, [&](int i) {
            ReplicaOutcome r;
            std::uint64_t s = split_seed(config.seed, i);
            SimpleGraph g;
            int x = -1;
            std::vector<int> target;
            if (config.graph_kind == "net") {
                NetGraph net = build_net(space, w, config.epsilon, s);
                g = net.to_simple();
                double best = std::numeric_limits<double>::infinity();
                for (int v = 0; v < net.size(); ++v) {
                    double d = distance(space, net.vertex(v), w.center);
                    if (d < best) {
                        best = d;
                        x = v;
                    }
                }
                target = boundary_target(net);
            } else {
                ColoredConfig cfg = sample_config(space, w, config.lambda, true, s);
                BuildOptions opts;
                opts.with_cells = false;
                VoronoiGraph vg = build_graph(cfg, opts);
                g.nbr.resize(vg.size());
                for (auto& e : vg.edge_list) g.add_edge(e.first, e.second);
                x = nearest_center(vg, w.center);
                for (int v = 0; v < vg.size(); ++v)
                    if (distance(space, cfg.point(v), w.center) >=
                        w.radius - w.buffer)
                        target.push_back(v);
            }
            std::ostringstream os;
            for (int desc = 0; desc < 2; ++desc) {
                Cutset cs = extract_minimal_cutset(g, x, target, desc != 0);
                os << kCsvSchema << "," << i << "," << s << ","
                   << (desc ? "desc" : "asc") << "," << cs.members.size() << ","
                   << cs.minimal << "," << cs.connected << "\n";
            }
            r.rows = os.str();
            return r;
        });
    } else if (config.kind == "explore") {
        Window w = config_window(config);
        csv << "schema,replica,seed,p,white_size,cluster_size,match,partial\n";
        outcomes = run_replicas(config.replicas, config.workers, [&](int i) {
            ReplicaOutcome r;
            std::uint64_t s = split_seed(config.seed, i);
            ColoredConfig cfg = sample_config(space, w, config.lambda, true, s);
            ExplorationState st = explore_cluster(cfg, w.center, config.p);
            // oracle comparison against the union-find labeling
            VoronoiGraph g = build_graph(cfg);
            ClusterLabeling lab = clusters(g, config.p);
            int w1 = nearest_center(g, w.center);
            std::set<int> want;
            if (cfg.marks[w1] <= config.p)
                for (int v = 0; v < g.size(); ++v)
                    if (lab.labels[v] == lab.labels[w1]) want.insert(v);
            std::set<int> got(st.white.begin(), st.white.end());
            std::ostringstream os;
            os << kCsvSchema << "," << i << "," << s << "," << fmt(config.p) << ","
               << got.size() << "," << want.size() << "," << (got == want) << ","
               << st.partial << "\n";
            r.rows = os.str();
            return r;
        });
    } else if (config.kind == "events") {
        Window w = config_window(config);
        csv << "schema,replica,seed,p,epsilon,crossed,cross_determined,uniq_holds,"
               "uniq_determined\n";
        outcomes = run_replicas(config.replicas, config.workers, [&](int i) {
            ReplicaOutcome r;
            std::uint64_t s = split_seed(config.seed, i);
            ColoredConfig cfg = sample_config(space, w, config.lambda, true, s);
            VoronoiGraph g = build_graph(cfg);
            CrossReport cr = detect_cross(g, w.center, config.epsilon, config.p);
            double uh = kNan, ud = kNan;
            try {
                UniquenessReport un =
                    detect_local_uniqueness(g, w.center, config.epsilon, config.p);
                uh = un.holds;
                ud = un.determined;
            } catch (const InputError&) {
                // window too small for the 40 eps determinacy ball
            }
            std::ostringstream os;
            os << kCsvSchema << "," << i << "," << s << "," << fmt(config.p) << ","
               << fmt(config.epsilon) << "," << cr.crossed << "," << cr.determined
               << "," << fmt(uh) << "," << fmt(ud) << "\n";
            r.rows = os.str();
            return r;
        });
    }

    if (!outcomes.empty()) {
        manifest.replicas = config.replicas;
        for (int i = 0; i < config.replicas; ++i)
            manifest.replica_seeds.push_back(split_seed(config.seed, i));
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i].failed) {
                ++manifest.failed_replicas;
                std::fprintf(stderr, "replica %zu failed: %s\n", i,
                             outcomes[i].error.c_str());
            } else {
                csv << outcomes[i].rows;
            }
        }
    }

    {
        std::ofstream os(csv_path, std::ios::binary);
        if (!os) throw InputError("run: cannot write " + csv_path);
        os << csv.str();
    }
    manifest.output_digests[csv_path] = digest_file(csv_path);
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(config.out_dir + "/manifest.txt", manifest);
    return manifest;
}

std::vector<RunManifest> sweep(const ExperimentConfig& config,
                               const std::string& parameter,
                               const std::vector<double>& values) {
    static const std::set<std::string> sweepable = {"lambda", "eps", "N", "p"};
    if (!sweepable.count(parameter))
        throw InputError("sweep: parameter '" + parameter +
                         "' is not sweepable (lambda, eps, N, p)");
    if (values.empty()) {
        std::fprintf(stderr, "sweep: empty value list, nothing to do\n");
        return {};
    }
    std::vector<double> vals;
    for (double v : values)
        if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);

    std::vector<RunManifest> out;
    for (double v : vals) {
        ExperimentConfig c = config;
        if (parameter == "lambda") c.lambda = v;
        if (parameter == "eps") c.eps_scale = c.epsilon = v;
        if (parameter == "N") c.n_scale = v;
        if (parameter == "p") c.p = v;
        std::ostringstream dir;
        dir << config.out_dir << "/" << parameter << "=" << v;
        c.out_dir = dir.str();
        out.push_back(run(c));
    }
    return out;
}

}  // namespace curvo
