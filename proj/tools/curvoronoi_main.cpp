#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvoronoi/error.hpp"
#include "curvoronoi/harness.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int workers = 0;
    bool has_seed = false, has_out = false, has_workers = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "experiment config file")->required();
    cmd->add_option("--seed", a.seed, "master seed override")
        ->each([&](const std::string&) { a.has_seed = true; });
    cmd->add_option("--out", a.out_dir, "output directory override")
        ->each([&](const std::string&) { a.has_out = true; });
    cmd->add_option("--workers", a.workers, "worker count override")
        ->each([&](const std::string&) { a.has_workers = true; });
}

curvo::ExperimentConfig resolve(const CommonArgs& a, const std::string& kind) {
    curvo::ExperimentConfig c = curvo::load_config(a.config_path);
    if (!kind.empty() && c.kind != kind)
        throw curvo::InputError("config kind '" + c.kind +
                                "' does not match subcommand '" + kind + "'");
    // precedence: config < CURVORONOI_WORKERS < --workers
    if (const char* env = std::getenv("CURVORONOI_WORKERS")) {
        int w = std::atoi(env);
        if (w < 1) throw curvo::InputError("CURVORONOI_WORKERS: must be >= 1");
        c.workers = w;
    }
    if (a.has_workers) {
        if (a.workers < 1) throw curvo::InputError("--workers: must be >= 1");
        c.workers = a.workers;
    }
    if (a.has_seed) c.seed = a.seed;
    if (a.has_out) c.out_dir = a.out_dir;
    return c;
}

int exit_code(const curvo::RunManifest& m) { return m.failed_replicas > 0 ? 4 : 0; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poisson-Voronoi percolation experiments on flat and hyperbolic space"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"sample",      "graph",   "estimate-pc",
                                           "estimate-pu", "couple",  "cutsets",
                                           "explore",     "events"};
    std::vector<CommonArgs> args(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(kinds[i], "run an experiment of kind '" + kinds[i] + "'");
        add_common(cmd, args[i]);
    }

    CommonArgs sweep_args;
    std::string sweep_param;
    std::vector<double> sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run once per parameter value");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--param", sweep_param, "parameter: lambda, eps, N or p")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "values to sweep")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            if (app.got_subcommand(kinds[i])) {
                curvo::ExperimentConfig c = resolve(args[i], kinds[i]);
                curvo::RunManifest m = curvo::run(c);
                std::printf("%s: %d replicas, %d failed, results in %s\n",
                            m.kind.c_str(), m.replicas, m.failed_replicas,
                            c.out_dir.c_str());
                return exit_code(m);
            }
        }
        if (app.got_subcommand("sweep")) {
            curvo::ExperimentConfig c = resolve(sweep_args, "");
            auto manifests = curvo::sweep(c, sweep_param, sweep_values);
            int rc = 0;
            for (const curvo::RunManifest& m : manifests) {
                std::printf("%s seed=%llu: %d replicas, %d failed\n", m.kind.c_str(),
                            static_cast<unsigned long long>(m.seed), m.replicas,
                            m.failed_replicas);
                if (m.failed_replicas > 0) rc = 4;
            }
            return rc;
        }
    } catch (const curvo::ResourceError& e) {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
