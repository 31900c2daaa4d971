#include "padmm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace padmm {

// ---------------------------------------------------------------------------
// INI parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_sections(const std::string& text) {
    SectionMap sections;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside a [section] or empty key");
        }
        sections[section][key] = value;
    }
    return sections;
}

struct SectionReader {
    const std::map<std::string, std::string>* kv;
    std::string section;

    bool has(const std::string& k) const { return kv && kv->count(k); }
    std::string str(const std::string& k, const std::string& dflt) const {
        return has(k) ? kv->at(k) : dflt;
    }
    double num(const std::string& k, double dflt) const {
        if (!has(k)) return dflt;
        try {
            size_t pos = 0;
            const double v = std::stod(kv->at(k), &pos);
            if (pos != kv->at(k).size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("config [" + section + "] " + k + ": not a number: '" +
                              kv->at(k) + "'");
        }
    }
    int integer(const std::string& k, int dflt) const {
        const double v = num(k, dflt);
        if (v != std::floor(v)) {
            throw ConfigError("config [" + section + "] " + k + ": not an integer");
        }
        return static_cast<int>(v);
    }
    bool flag(const std::string& k, bool dflt) const {
        if (!has(k)) return dflt;
        const std::string v = kv->at(k);
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        throw ConfigError("config [" + section + "] " + k + ": expected on/off");
    }
};

SectionReader reader(const SectionMap& m, const std::string& name) {
    auto it = m.find(name);
    return SectionReader{it == m.end() ? nullptr : &it->second, name};
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    const SectionMap sections = parse_sections(text);
    for (const auto& [name, _] : sections) {
        if (name != "problem" && name != "solver" && name != "analysis" && name != "output") {
            throw ConfigError("config: unknown section [" + name + "]");
        }
    }
    RunConfig cfg;
    cfg.raw_text = text;

    const SectionReader prob = reader(sections, "problem");
    cfg.generator = prob.str("generator", cfg.generator);
    cfg.n = prob.integer("n", cfg.n);
    cfg.m = prob.integer("m", cfg.m);
    cfg.seed = static_cast<std::uint64_t>(prob.num("seed", 0));
    cfg.lambda = prob.num("lambda", cfg.lambda);
    cfg.sparsity = prob.integer("sparsity", cfg.sparsity);
    cfg.a_file = prob.str("A_file", "");
    cfg.b_mat_file = prob.str("B_file", "");
    cfg.b_vec_file = prob.str("b_file", "");
    cfg.g_kind = prob.str("g", cfg.g_kind);
    if (cfg.generator != "quadratic_quadratic" && cfg.generator != "lasso" &&
        cfg.generator != "l0_least_squares" && cfg.generator != "files") {
        throw ConfigError("config: unknown generator '" + cfg.generator + "'");
    }

    const SectionReader sol = reader(sections, "solver");
    const std::string variant = sol.str("variant", "padmm");
    if (variant == "padmm") {
        cfg.variant = Variant::PADMM;
    } else if (variant == "pladmm") {
        cfg.variant = Variant::PLADMM;
    } else {
        throw ConfigError("config: variant must be padmm or pladmm");
    }
    cfg.rho = sol.num("rho", cfg.rho);
    if (!(cfg.rho > 0.0 && cfg.rho < 2.0)) throw ConfigError("config: rho must be in (0,2)");
    cfg.r = sol.num("r", 0.0);
    cfg.r_choice = sol.str("r_choice", "");
    if (cfg.r <= 0.0 && cfg.r_choice.empty()) {
        throw ConfigError("config: either r > 0 or r_choice = i|ii|iii required");
    }
    const std::string sched = sol.str("schedule", "zero");
    if (sched == "zero") {
        cfg.schedule = ScheduleKind::Zero;
    } else if (sched == "constant") {
        cfg.schedule = ScheduleKind::Constant;
    } else if (sched == "proxlinear") {
        cfg.schedule = ScheduleKind::ProxLinear;
    } else {
        throw ConfigError("config: schedule must be zero|constant|proxlinear");
    }
    cfg.mu1 = sol.num("mu1", 0.0);
    cfg.m2 = sol.num("m2", 0.0);
    cfg.t = sol.num("t", 0.0);
    cfg.gamma = sol.num("gamma", cfg.gamma);
    if (!(cfg.gamma > 1.0)) throw ConfigError("config: gamma must be > 1");
    cfg.max_iter = sol.integer("max_iter", cfg.max_iter);
    if (cfg.max_iter < 0) throw ConfigError("config: max_iter >= 0");
    cfg.diff_tol = sol.num("diff_tol", 0.0);
    cfg.kkt_tol = sol.num("kkt_tol", 0.0);
    const std::string regime = sol.str("regime", "standard");
    if (regime == "standard") {
        cfg.regime = MeritRegime::Standard;
    } else if (regime == "tightened") {
        cfg.regime = MeritRegime::Tightened;
    } else {
        throw ConfigError("config: regime must be standard or tightened");
    }
    cfg.x_solver = sol.str("x_solver", "auto");
    if (cfg.x_solver != "auto" && cfg.x_solver != "prox_form" &&
        cfg.x_solver != "closed_form" && cfg.x_solver != "cg") {
        throw ConfigError("config: x_solver must be auto|prox_form|closed_form|cg");
    }

    const SectionReader ana = reader(sections, "analysis");
    cfg.rates = ana.flag("rates", false);
    cfg.l0_lag = ana.integer("l0", 2);
    cfg.window_fraction = ana.num("window", 0.5);

    const SectionReader outp = reader(sections, "output");
    cfg.trace_path = outp.str("trace", cfg.trace_path);
    cfg.report_path = outp.str("report", "");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// materialization
// ---------------------------------------------------------------------------

static TestProblem problem_from_files(const RunConfig& cfg) {
    if (cfg.a_file.empty() || cfg.b_mat_file.empty() || cfg.b_vec_file.empty()) {
        throw ConfigError("config: generator=files needs A_file, B_file, b_file");
    }
    const Matrix a = read_matrix_file(cfg.a_file);
    const Matrix b_mat = read_matrix_file(cfg.b_mat_file);
    const Matrix b_col = read_matrix_file(cfg.b_vec_file);
    if (b_col.cols != 1) throw ConfigError("config: b_file must be a column (m 1) matrix");
    Vec b(b_col.rows);
    for (int i = 0; i < b_col.rows; ++i) b[i] = b_col(i, 0);

    TestProblem tp;
    tp.spec.h = make_least_squares(b_mat, b);
    tp.spec.A = LinearMap(a);
    const int m = a.rows;
    if (cfg.g_kind == "l1") {
        tp.spec.g = make_l1(m, cfg.lambda);
    } else if (cfg.g_kind == "l0") {
        tp.spec.g = make_l0(m, cfg.lambda);
    } else if (cfg.g_kind == "quadratic") {
        tp.spec.g = make_quadratic_penalty(m, cfg.lambda, zeros(m));
    } else if (cfg.g_kind == "zero") {
        tp.spec.g = make_zero_prox(m);
    } else {
        throw ConfigError("config: g must be l1|l0|quadratic|zero");
    }
    tp.descriptor = "files A=" + cfg.a_file + " g=" + cfg.g_kind;
    return tp;
}

PreparedRun prepare_run(const RunConfig& cfg) {
    PreparedRun pr;
    if (cfg.generator == "quadratic_quadratic") {
        pr.problem = quadratic_quadratic(cfg.n, cfg.m, cfg.seed);
    } else if (cfg.generator == "lasso") {
        pr.problem = lasso_problem(cfg.n, cfg.m, cfg.sparsity, cfg.lambda, cfg.seed);
    } else if (cfg.generator == "l0_least_squares") {
        pr.problem = l0_least_squares(cfg.n, cfg.m, cfg.lambda, cfg.seed);
    } else {
        pr.problem = problem_from_files(cfg);
    }
    const ProblemSpec& spec = pr.problem.spec;
    const double L = spec.h.lipschitz;

    SolverConfig& sc = pr.solver;
    sc.variant = cfg.variant;
    sc.rho = cfg.rho;
    sc.gamma = cfg.gamma;
    sc.regime = cfg.regime;
    sc.seed = cfg.seed;
    sc.stopping = {cfg.max_iter, cfg.diff_tol, cfg.kkt_tol};

    double r = cfg.r;
    if (r <= 0.0) {
        SuggestRInputs si;
        si.variant = cfg.variant;
        si.L = L;
        si.gamma = cfg.gamma;
        si.rho = cfg.rho;
        si.lambda_min_aat = spec.A.lambda_min_AAt();
        si.lambda_min_ata = spec.A.lambda_min_AtA();
        si.mu1 = cfg.mu1;
        si.t = cfg.t;
        si.strengthened = cfg.regime == MeritRegime::Tightened;
        RChoice choice;
        if (cfg.r_choice == "i") {
            choice = RChoice::I;
        } else if (cfg.r_choice == "ii") {
            choice = RChoice::II;
        } else if (cfg.r_choice == "iii") {
            choice = RChoice::III;
        } else {
            throw ConfigError("config: r_choice must be i, ii or iii");
        }
        r = suggest_r(choice, si);
    }
    sc.r = r;

    const int n = spec.n();
    const int m = spec.m();
    switch (cfg.schedule) {
        case ScheduleKind::Zero:
            sc.schedule = MetricSchedule::zero(n, m);
            break;
        case ScheduleKind::Constant:
            sc.schedule = MetricSchedule::constant(
                MetricMatrix::scaled_identity(n, cfg.mu1),
                MetricMatrix::scaled_identity(m, cfg.m2));
            break;
        case ScheduleKind::ProxLinear: {
            const double na = spec.A.op_norm();
            const double t = cfg.t > 0.0 ? cfg.t : 1.0 / (r * na * na);
            sc.schedule = MetricSchedule::prox_linear(spec.A, r, t);
            break;
        }
    }

    if (cfg.x_solver == "prox_form") {
        sc.x_solver = XSolver::ProxForm;
    } else if (cfg.x_solver == "closed_form") {
        sc.x_solver = XSolver::QuadraticClosedForm;
    } else if (cfg.x_solver == "cg") {
        sc.x_solver = XSolver::LinearSystemCG;
    } else {
        // auto: prox form on prox-linear schedules, otherwise a direct solve
        // for P-ADMM and CG for PL-ADMM
        if (cfg.schedule == ScheduleKind::ProxLinear) {
            sc.x_solver = XSolver::ProxForm;
        } else {
            sc.x_solver = cfg.variant == Variant::PADMM ? XSolver::QuadraticClosedForm
                                                        : XSolver::LinearSystemCG;
        }
    }
    return pr;
}

}  // namespace padmm
