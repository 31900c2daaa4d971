// Command-line front end: certify a configuration, run the solver, or analyze
// a stored trace for Lojasiewicz rate behaviour.

#include <atomic>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "padmm/cli.hpp"

using namespace padmm;

static int run_configs(const std::vector<std::string>& paths, bool force,
                       const std::string& out_override, int jobs) {
    std::atomic<int> worst{0};
    std::mutex io_mutex;
    std::atomic<size_t> next{0};

    const auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= paths.size()) return;
            std::ostringstream out;
            int code;
            try {
                RunConfig cfg = parse_config_file(paths[i]);
                if (!out_override.empty()) cfg.trace_path = out_override;
                code = cmd_run(cfg, force, out);
            } catch (const ConfigError& e) {
                out << "error: " << e.what() << "\n";
                code = 2;
            } catch (const std::exception& e) {
                out << "error: " << e.what() << "\n";
                code = 3;
            }
            int cur = worst.load();
            while (cur < code && !worst.compare_exchange_weak(cur, code)) {
            }
            std::lock_guard<std::mutex> lock(io_mutex);
            std::cout << "== " << paths[i] << " ==\n" << out.str();
        }
    };

    if (jobs <= 1 || paths.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int k = std::min<int>(jobs, static_cast<int>(paths.size()));
        for (int i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return worst.load();
}

int main(int argc, char** argv) {
    CLI::App app{"proximal ADMM solver and convergence-analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> run_configs_paths;
    std::string trace_path, out_path, report_path;
    bool force = false;
    int jobs = 1;
    RatesOptions rates_opt;
    double f_star = 0.0;
    bool has_f_star = false;

    auto* check = app.add_subcommand("check", "certify the admissibility assumptions");
    check->add_option("--config", config_path, "run configuration file")->required();

    auto* runcmd = app.add_subcommand("run", "run the solver and write a trace");
    runcmd->add_option("--config", run_configs_paths, "run configuration file(s)")
        ->required();
    runcmd->add_flag("--force", force, "run even if the admissibility check fails");
    runcmd->add_option("--out", out_path, "override the trace output path");
    runcmd->add_option("--jobs", jobs, "run independent configs concurrently");

    auto* rates = app.add_subcommand("rates", "rate analysis of a tightened trace");
    rates->add_option("trace", trace_path, "trace file (JSON lines)")->required();
    rates->add_option("--l0", rates_opt.l0_lag, "recurrence lag (default 2)");
    auto* fstar_opt = rates->add_option("--fstar", f_star, "known merit limit F_*");
    rates->add_option("--out", report_path, "write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage and parse problems exit with 2; --help stays 0
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            return cmd_check(parse_config_file(config_path), std::cout);
        }
        if (runcmd->parsed()) {
            return run_configs(run_configs_paths, force, out_path, jobs);
        }
        has_f_star = fstar_opt->count() > 0;
        rates_opt.has_f_star = has_f_star;
        rates_opt.f_star = f_star;
        rates_opt.report_path = report_path;
        return cmd_rates(trace_path, rates_opt, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
