#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "padmm/cli.hpp"
#include "padmm/diagnostics.hpp"
#include "padmm/rates.hpp"
#include "padmm/trace_io.hpp"

using namespace padmm;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

const char* kScalarConfig =
    "# scalar quadratic instance\n"
    "[problem]\n"
    "generator = quadratic_quadratic\n"
    "n = 1\n"
    "m = 1\n"
    "seed = 42\n"
    "[solver]\n"
    "variant = padmm\n"
    "rho = 1.0\n"
    "r = 10.0\n"
    "schedule = zero\n"
    "max_iter = 300\n"
    "[output]\n";

}  // namespace

TEST_CASE("config parser basics and errors") {
    const RunConfig cfg = parse_config_text(kScalarConfig);
    CHECK(cfg.generator == "quadratic_quadratic");
    CHECK(cfg.n == 1);
    CHECK(cfg.r == 10.0);
    CHECK(cfg.variant == Variant::PADMM);
    CHECK(cfg.regime == MeritRegime::Standard);

    CHECK_THROWS_AS(parse_config_text("[problem]\ngenerator = bogus\n[solver]\nr=1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("[solver]\nrho = 2.5\nr = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[solver]\nr = \n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[weird]\nk = 1\n"), ConfigError);
    // neither r nor r_choice
    CHECK_THROWS_AS(parse_config_text("[solver]\nvariant = padmm\n"), ConfigError);
}

TEST_CASE("cmd_check passes the scalar example and fails r = 2") {
    {
        std::ostringstream out;
        const int code = cmd_check(parse_config_text(kScalarConfig), out);
        CHECK(code == 0);
        CHECK(out.str().find("result = pass") != std::string::npos);
        CHECK(out.str().find("check.metric_positivity.k0 = pass slack=") !=
              std::string::npos);
    }
    {
        std::string text = kScalarConfig;
        const size_t pos = text.find("r = 10.0");
        text.replace(pos, 8, "r = 2.0 ");
        std::ostringstream out;
        const int code = cmd_check(parse_config_text(text), out);
        CHECK(code == 1);
        CHECK(out.str().find("failed = r_lower_bound") != std::string::npos);
    }
}

TEST_CASE("cmd_run writes a trace and a clean summary") {
    RunConfig cfg = parse_config_text(kScalarConfig);
    cfg.trace_path = temp_path("run.jsonl");
    std::ostringstream out;
    const int code = cmd_run(cfg, false, out);
    CHECK(code == 0);
    CHECK(out.str().find("descent_violations = 0") != std::string::npos);
    CHECK(out.str().find("certified = true") != std::string::npos);

    const Trace t = read_trace_file(cfg.trace_path);
    CHECK(t.records.size() == 301);
    CHECK(t.certified);
    std::remove(cfg.trace_path.c_str());
}

TEST_CASE("cmd_run on an inadmissible config: exit 1, or runs with --force") {
    std::string text = kScalarConfig;
    const size_t pos = text.find("r = 10.0");
    text.replace(pos, 8, "r = 2.0 ");
    RunConfig cfg = parse_config_text(text);
    cfg.trace_path = temp_path("forced.jsonl");
    {
        std::ostringstream out;
        CHECK(cmd_run(cfg, false, out) == 1);
    }
    {
        std::ostringstream out;
        CHECK(cmd_run(cfg, true, out) == 0);
        CHECK(out.str().find("certified = uncertified") != std::string::npos);
        std::remove(cfg.trace_path.c_str());
    }
}

TEST_CASE("max_iter = 0 leaves a single-record trace") {
    std::string text = kScalarConfig;
    const size_t pos = text.find("max_iter = 300");
    text.replace(pos, 14, "max_iter = 0  ");
    RunConfig cfg = parse_config_text(text);
    cfg.trace_path = temp_path("empty.jsonl");
    std::ostringstream out;
    CHECK(cmd_run(cfg, false, out) == 0);
    const Trace t = read_trace_file(cfg.trace_path);
    CHECK(t.records.size() == 1);
    std::remove(cfg.trace_path.c_str());
}

TEST_CASE("trace round trip is bit-exact") {
    RunConfig cfg = parse_config_text(kScalarConfig);
    PreparedRun pr = prepare_run(cfg);
    pr.solver.stopping.max_iter = 40;
    const Trace t = run(pr.problem.spec, pr.solver);
    const std::string s1 = trace_to_string(t);
    std::istringstream in(s1);
    const Trace back = read_trace(in);
    const std::string s2 = trace_to_string(back);
    CHECK(s1 == s2);
    REQUIRE(back.records.size() == t.records.size());
    for (size_t j = 0; j < t.records.size(); ++j) {
        CHECK(back.records[j].fk == t.records[j].fk);  // exact doubles
        CHECK(back.records[j].d_norm == t.records[j].d_norm);
        CHECK(back.records[j].x == t.records[j].x);
    }
    CHECK(back.constants.C5 == t.constants.C5);
}

TEST_CASE("infinite merit values survive the trace round trip") {
    // indicator g with an infeasible z0 makes L_r(0) = +inf; the writer stores
    // it explicitly and the reader restores it
    ProblemSpec p;
    p.h = make_scaled_distance(1, 1.0, {0.0});
    p.g = make_box({0.0}, {1.0});
    p.A = LinearMap(Matrix::identity(1));
    SolverConfig c;
    c.variant = Variant::PADMM;
    c.r = 10.0;
    c.rho = 1.0;
    c.schedule = MetricSchedule::zero(1, 1);
    c.x_solver = XSolver::QuadraticClosedForm;
    c.stopping = {30, 0.0, 0.0};
    c.z0 = {5.0};  // outside the box
    const Trace t = run(p, c);
    CHECK(std::isinf(t.records[0].lr));
    CHECK_FALSE(std::isinf(t.records[1].lr));  // z-step restores feasibility
    const std::string s1 = trace_to_string(t);
    std::istringstream in(s1);
    const Trace back = read_trace(in);
    CHECK(std::isinf(back.records[0].lr));
    CHECK(trace_to_string(back) == s1);
    // descent checking skips the infinite head and stays clean afterwards
    CHECK(descent_check(t, c.schedule, t.constants, t.regime).empty());
}

TEST_CASE("determinism: identical config and seed give identical trace bytes") {
    const RunConfig cfg = parse_config_text(kScalarConfig);
    const PreparedRun p1 = prepare_run(cfg);
    const PreparedRun p2 = prepare_run(cfg);
    const std::string t1 = trace_to_string(run(p1.problem.spec, p1.solver));
    const std::string t2 = trace_to_string(run(p2.problem.spec, p2.solver));
    CHECK(t1 == t2);
}

TEST_CASE("cmd_rates: regime gate and report fields") {
    // Standard trace is rejected
    {
        RunConfig cfg = parse_config_text(kScalarConfig);
        cfg.trace_path = temp_path("s3.jsonl");
        std::ostringstream out;
        REQUIRE(cmd_run(cfg, false, out) == 0);
        std::ostringstream rout;
        CHECK(cmd_rates(cfg.trace_path, RatesOptions{}, rout) == 1);
        CHECK(rout.str().find("tightened") != std::string::npos);
        std::remove(cfg.trace_path.c_str());
    }
    // Tightened run on a mu1 > 0 constant schedule analyzes cleanly
    {
        const std::string text =
            "[problem]\n"
            "generator = quadratic_quadratic\n"
            "n = 2\nm = 2\nseed = 21\n"
            "[solver]\n"
            "variant = padmm\nrho = 1.0\nr_choice = i\nschedule = constant\n"
            "mu1 = 25\nregime = tightened\nmax_iter = 1200\n";
        RunConfig cfg = parse_config_text(text);
        cfg.trace_path = temp_path("s4.jsonl");
        std::ostringstream out;
        REQUIRE(cmd_run(cfg, false, out) == 0);
        std::ostringstream rout;
        const int code = cmd_rates(cfg.trace_path, RatesOptions{}, rout);
        CHECK(code == 0);
        CHECK(rout.str().find("theta_hat") != std::string::npos);
        CHECK(rout.str().find("regime = ") != std::string::npos);
        std::remove(cfg.trace_path.c_str());
    }
    // too-short trace
    {
        std::string text = kScalarConfig;
        size_t pos = text.find("max_iter = 300");
        text.replace(pos, 14, "max_iter = 4  ");
        pos = text.find("[solver]");
        text.insert(pos + 9, "regime = tightened\nmu1 = 25\nschedule = constant\n");
        pos = text.find("r = 10.0");
        text.replace(pos, 8, "r = 900 ");
        RunConfig cfg = parse_config_text(text);
        cfg.trace_path = temp_path("short.jsonl");
        std::ostringstream out;
        REQUIRE(cmd_run(cfg, false, out) == 0);
        std::ostringstream rout;
        CHECK(cmd_rates(cfg.trace_path, RatesOptions{}, rout) == 1);
        std::remove(cfg.trace_path.c_str());
    }
}

TEST_CASE("problem files: matrix-backed problem spec") {
    // write B, b, A in the matrix text format
    const std::string bpath = temp_path("B.txt");
    const std::string bvec = temp_path("b.txt");
    const std::string apath = temp_path("A.txt");
    {
        std::ofstream f(bpath);
        f << "2 2\n1 0\n0 2\n";
    }
    {
        std::ofstream f(bvec);
        f << "2 1\n1\n-1\n";
    }
    {
        std::ofstream f(apath);
        f << "2 2\n1 0\n0 1\n";
    }
    const std::string text = "[problem]\ngenerator = files\nA_file = " + apath +
                             "\nB_file = " + bpath + "\nb_file = " + bvec +
                             "\ng = l1\nlambda = 0.5\n"
                             "[solver]\nvariant = padmm\nrho = 1.0\nr = 30\n"
                             "schedule = zero\nmax_iter = 400\n";
    RunConfig cfg = parse_config_text(text);
    cfg.trace_path = temp_path("files.jsonl");
    std::ostringstream out;
    CHECK(cmd_run(cfg, false, out) == 0);
    const Trace t = read_trace_file(cfg.trace_path);
    const TraceRecord& last = t.records.back();
    // soft-threshold optimum of 1/2 (x1-1)^2 + 1/2 (2 x2 + 1)^2 ... sanity: KKT gaps small
    CHECK(last.feas <= 1e-6);
    std::remove(cfg.trace_path.c_str());
    std::remove(bpath.c_str());
    std::remove(bvec.c_str());
    std::remove(apath.c_str());
}
