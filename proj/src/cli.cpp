#include "padmm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "padmm/diagnostics.hpp"
#include "padmm/rates.hpp"
#include "padmm/trace_io.hpp"

namespace padmm {

static AdmissibilityReport certify(const PreparedRun& pr, MeritRegime regime) {
    const ProblemSpec& spec = pr.problem.spec;
    const SolverConfig& sc = pr.solver;
    return regime == MeritRegime::Standard
               ? check_assumption1(sc.schedule, spec.A, sc.r, sc.rho, spec.h.lipschitz,
                                   sc.gamma, {0}, sc.variant)
               : check_assumption2(sc.schedule, spec.A, sc.r, sc.rho, spec.h.lipschitz,
                                   sc.gamma, {0}, sc.variant);
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    const PreparedRun pr = prepare_run(cfg);
    const AdmissibilityReport rep = certify(pr, cfg.regime);
    out << "# admissibility check (" << to_string(cfg.regime) << ")\n";
    out << "problem = " << pr.problem.descriptor << "\n";
    out << "boundedness = " << to_string(boundedness_precheck(pr.problem.spec)) << "\n";
    out << rep.to_text();
    if (!cfg.report_path.empty()) {
        std::ofstream f(cfg.report_path);
        f << rep.to_text();
    }
    if (rep.pass()) {
        out << "result = pass\n";
        return 0;
    }
    for (const auto& c : rep.checks) {
        if (!c.pass) out << "failed = " << c.name << "\n";
    }
    out << "result = fail\n";
    return 1;
}

static void print_double(std::ostream& out, const char* key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << key << " = " << buf << "\n";
}

int cmd_run(const RunConfig& cfg, bool force, std::ostream& out) {
    PreparedRun pr = prepare_run(cfg);
    const AdmissibilityReport rep = certify(pr, cfg.regime);
    if (!rep.pass() && !force) {
        out << rep.to_text();
        out << "result = inadmissible (use --force to run anyway)\n";
        return 1;
    }
    pr.solver.force_uncertified = force;

    Trace trace = run(pr.problem.spec, pr.solver);
    trace.config_echo = cfg.raw_text.empty() ? trace.config_echo : cfg.raw_text;
    write_trace_file(cfg.trace_path, trace);

    const TraceRecord& last = trace.records.back();
    const KktResidual kkt = kkt_residual(last.x, last.z, last.y, pr.problem.spec, 1e-6);
    const std::vector<Violation> descent =
        trace.records.size() >= 3
            ? descent_check(trace, pr.solver.schedule, trace.constants, trace.regime)
            : std::vector<Violation>{};

    out << "# run summary\n";
    out << "problem = " << pr.problem.descriptor << "\n";
    out << "certified = " << (trace.certified ? "true" : "uncertified") << "\n";
    out << "iterations = " << trace.records.back().k << "\n";
    out << "stopping = " << trace.status << "\n";
    print_double(out, "final_Fk", last.fk);
    print_double(out, "final_feas", last.feas);
    print_double(out, "final_stationarity", kkt.stationarity);
    out << "final_membership = " << (kkt.membership ? "true" : "false") << "\n";
    out << "descent_violations = " << descent.size() << "\n";
    out << "trace = " << cfg.trace_path << "\n";
    if (!cfg.report_path.empty()) {
        std::ofstream f(cfg.report_path);
        f << "problem = " << pr.problem.descriptor << "\n";
        f << "iterations = " << trace.records.back().k << "\n";
        f << "stopping = " << trace.status << "\n";
        f << "descent_violations = " << descent.size() << "\n";
        f << violations_to_text(descent);
    }
    if (trace.status.rfind("error:", 0) == 0) {
        out << "result = solver failure (partial trace written)\n";
        return 3;
    }
    out << "result = ok\n";
    return 0;
}

int cmd_rates(const std::string& trace_path, const RatesOptions& opt, std::ostream& out) {
    const Trace trace = read_trace_file(trace_path);
    if (trace.regime != MeritRegime::Tightened) {
        out << "error: rates analysis requires a tightened-regime trace (this one is "
            << to_string(trace.regime) << ")\n";
        return 1;
    }
    ErrorSequence es = opt.has_f_star
                           ? error_sequence(trace, FStarMode::Known, opt.f_star)
                           : error_sequence(trace, FStarMode::LastValue);
    RateFit fit;
    try {
        fit = fit_loj_exponent(es.e, opt.l0_lag);
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << "\n";
        return 1;
    }
    // restrict all further analysis to the fitted clean window; past it the
    // error sequence sits at the rounding floor of F_k - F_*
    es.e.resize(std::min<size_t>(es.e.size(), fit.window_hi + 1));
    // snap near-linear fits to the exact exponent before synthesizing envelopes
    const double theta = std::fabs(fit.theta_hat - 0.5) < 0.05 ? 0.5 : fit.theta_hat;
    const RecurrenceResult rec = verify_recurrence(es.e, theta, opt.l0_lag, fit.window_lo);
    std::vector<Violation> env;
    if (!fit.finite_time && rec.ok) {
        env = rate_envelope_check(es.e, theta, rec.c_e_max, opt.l0_lag, rec.window_lo);
    }
    const IterateRateReport ite = iterate_rate_check(trace, es, theta, trace.constants);
    const std::string text = rate_report_text(fit, rec, env, ite, theta);
    out << text;
    if (!opt.report_path.empty()) {
        std::ofstream f(opt.report_path);
        f << text;
    }
    return 0;
}

}  // namespace padmm
