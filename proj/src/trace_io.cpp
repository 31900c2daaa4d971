#include "padmm/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace padmm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// writer (hand-rolled for deterministic bytes and pinned number formatting)
// ---------------------------------------------------------------------------

static void emit_double(std::ostream& os, double v) {
    if (std::isinf(v)) {
        os << (v > 0 ? "\"inf\"" : "\"-inf\"");
        return;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

static void emit_vec(std::ostream& os, const Vec& v) {
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        emit_double(os, v[i]);
    }
    os << "]";
}

static void emit_string(std::ostream& os, const std::string& s) {
    os << "\"";
    for (char c : s) {
        switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\t': os << "\\t"; break;
            default: os << c;
        }
    }
    os << "\"";
}

static void emit_opt(std::ostream& os, const char* key, const std::optional<double>& v) {
    if (!v) return;
    os << ",\"" << key << "\":";
    emit_double(os, *v);
}

static void emit_constants(std::ostream& os, const ConstantsBundle& c) {
    os << "{\"variant\":\"" << to_string(c.variant) << "\"";
    const std::pair<const char*, double> fields[] = {
        {"rho", c.rho},       {"r", c.r},           {"gamma", c.gamma},
        {"L", c.L},           {"mu1", c.mu1},       {"mu2", c.mu2},
        {"lambda_min_aat", c.lambda_min_aat},       {"lambda_min_ata", c.lambda_min_ata},
        {"norm_A", c.norm_A}, {"T0", c.T0},         {"T1", c.T1},
        {"T2", c.T2},         {"C0", c.C0},         {"C1", c.C1},
        {"C2", c.C2},         {"CM", c.CM},         {"CM_prime", c.CM_prime},
        {"C3", c.C3},         {"C4", c.C4},         {"C5", c.C5},
        {"C6", c.C6},         {"C7", c.C7},         {"C8", c.C8},
        {"C9", c.C9},         {"C10", c.C10},       {"C11", c.C11},
        {"C12", c.C12},       {"C13", c.C13},       {"C14", c.C14},
        {"C15", c.C15},       {"C16", c.C16},       {"C17", c.C17},
    };
    for (const auto& [k, v] : fields) {
        os << ",\"" << k << "\":";
        emit_double(os, v);
    }
    emit_opt(os, "C_L", c.loja_constant);
    emit_opt(os, "C19", c.C19);
    emit_opt(os, "C20", c.C20);
    emit_opt(os, "C21", c.C21);
    emit_opt(os, "C22", c.C22);
    emit_opt(os, "C23", c.C23);
    os << "}";
}

void write_trace(std::ostream& out, const Trace& t) {
    out << "{\"regime\":\"" << to_string(t.regime) << "\",\"status\":";
    emit_string(out, t.status);
    out << ",\"certified\":" << (t.certified ? "true" : "false") << ",\"config\":";
    emit_string(out, t.config_echo);
    out << ",\"constants\":";
    emit_constants(out, t.constants);
    out << "}\n";
    for (const TraceRecord& r : t.records) {
        out << "{\"k\":" << r.k << ",\"x\":";
        emit_vec(out, r.x);
        out << ",\"z\":";
        emit_vec(out, r.z);
        out << ",\"y\":";
        emit_vec(out, r.y);
        out << ",\"dx\":";
        emit_double(out, r.dx);
        out << ",\"dz\":";
        emit_double(out, r.dz);
        out << ",\"dy\":";
        emit_double(out, r.dy);
        out << ",\"Lr\":";
        emit_double(out, r.lr);
        out << ",\"Fk\":";
        emit_double(out, r.fk);
        out << ",\"d_norm\":";
        emit_double(out, r.d_norm);
        out << ",\"D_norm\":";
        emit_double(out, r.D_norm);
        out << ",\"feas\":";
        emit_double(out, r.feas);
        out << "}\n";
    }
}

void write_trace_file(const std::string& path, const Trace& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open trace file for writing: " + path);
    write_trace(out, t);
}

std::string trace_to_string(const Trace& t) {
    std::ostringstream os;
    write_trace(os, t);
    return os.str();
}

// ---------------------------------------------------------------------------
// reader
// ---------------------------------------------------------------------------

static double parse_double(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw std::runtime_error("trace: bad numeric string '" + s + "'");
    }
    return j.get<double>();
}

static Vec parse_vec(const json& j) {
    Vec v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(parse_double(e));
    return v;
}

static ConstantsBundle parse_constants(const json& j) {
    ConstantsBundle c;
    c.variant = j.at("variant").get<std::string>() == "padmm" ? Variant::PADMM
                                                              : Variant::PLADMM;
    c.rho = parse_double(j.at("rho"));
    c.r = parse_double(j.at("r"));
    c.gamma = parse_double(j.at("gamma"));
    c.L = parse_double(j.at("L"));
    c.mu1 = parse_double(j.at("mu1"));
    c.mu2 = parse_double(j.at("mu2"));
    c.lambda_min_aat = parse_double(j.at("lambda_min_aat"));
    c.lambda_min_ata = parse_double(j.at("lambda_min_ata"));
    c.norm_A = parse_double(j.at("norm_A"));
    c.T0 = parse_double(j.at("T0"));
    c.T1 = parse_double(j.at("T1"));
    c.T2 = parse_double(j.at("T2"));
    c.C0 = parse_double(j.at("C0"));
    c.C1 = parse_double(j.at("C1"));
    c.C2 = parse_double(j.at("C2"));
    c.CM = parse_double(j.at("CM"));
    c.CM_prime = parse_double(j.at("CM_prime"));
    c.C3 = parse_double(j.at("C3"));
    c.C4 = parse_double(j.at("C4"));
    c.C5 = parse_double(j.at("C5"));
    c.C6 = parse_double(j.at("C6"));
    c.C7 = parse_double(j.at("C7"));
    c.C8 = parse_double(j.at("C8"));
    c.C9 = parse_double(j.at("C9"));
    c.C10 = parse_double(j.at("C10"));
    c.C11 = parse_double(j.at("C11"));
    c.C12 = parse_double(j.at("C12"));
    c.C13 = parse_double(j.at("C13"));
    c.C14 = parse_double(j.at("C14"));
    c.C15 = parse_double(j.at("C15"));
    c.C16 = parse_double(j.at("C16"));
    c.C17 = parse_double(j.at("C17"));
    if (j.contains("C_L")) c.loja_constant = parse_double(j.at("C_L"));
    if (j.contains("C19")) c.C19 = parse_double(j.at("C19"));
    if (j.contains("C20")) c.C20 = parse_double(j.at("C20"));
    if (j.contains("C21")) c.C21 = parse_double(j.at("C21"));
    if (j.contains("C22")) c.C22 = parse_double(j.at("C22"));
    if (j.contains("C23")) c.C23 = parse_double(j.at("C23"));
    return c;
}

Trace read_trace(std::istream& in) {
    Trace t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace: empty stream");
    {
        const json h = json::parse(line);
        t.regime = h.at("regime").get<std::string>() == "tightened" ? MeritRegime::Tightened
                                                                   : MeritRegime::Standard;
        t.status = h.at("status").get<std::string>();
        t.certified = h.at("certified").get<bool>();
        t.config_echo = h.at("config").get<std::string>();
        t.constants = parse_constants(h.at("constants"));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        TraceRecord r;
        r.k = j.at("k").get<int>();
        r.x = parse_vec(j.at("x"));
        r.z = parse_vec(j.at("z"));
        r.y = parse_vec(j.at("y"));
        r.dx = parse_double(j.at("dx"));
        r.dz = parse_double(j.at("dz"));
        r.dy = parse_double(j.at("dy"));
        r.lr = parse_double(j.at("Lr"));
        r.fk = parse_double(j.at("Fk"));
        r.d_norm = parse_double(j.at("d_norm"));
        r.D_norm = parse_double(j.at("D_norm"));
        r.feas = parse_double(j.at("feas"));
        t.records.push_back(std::move(r));
    }
    return t;
}

Trace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return read_trace(in);
}

}  // namespace padmm
