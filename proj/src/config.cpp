#include "suppflow/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace suppflow {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void missing(const std::string& key) {
    throw std::invalid_argument("config: missing required key '" + key + "'");
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" +
                                    v + "'");
    }
}

}  // namespace

bool KeyValues::has(const std::string& key) const {
    for (const auto& [k, v] : items)
        if (k == key) return true;
    return false;
}

const std::string& KeyValues::get(const std::string& key) const {
    for (const auto& [k, v] : items)
        if (k == key) return v;
    missing(key);
}

std::string KeyValues::get(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double KeyValues::get_double(const std::string& key) const {
    return to_double(key, get(key));
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (i != v) throw std::invalid_argument("config: key '" + key + "' must be integer");
    return i;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' must be true or false");
}

std::vector<double> KeyValues::get_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(to_double(key, tok));
    }
    return out;
}

void KeyValues::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : items)
        if (k == key) {
            v = value;
            return;
        }
    items.emplace_back(key, value);
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": empty key");
        kv.set(key, val);
    }
    return kv;
}

KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

std::string canonical_text(const KeyValues& kv) {
    std::vector<std::pair<std::string, std::string>> sorted = kv.items;
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& [k, v] : sorted) out += k + "=" + v + "\n";
    return out;
}

std::uint64_t config_hash(const KeyValues& kv) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_text(kv)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string artifact_header(const KeyValues& kv) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash(kv)));
    return std::string("# artifact ") + kArtifactVersion + "\n# config_hash " + buf + "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

SphericalFactor spherical_factor_from(const KeyValues& kv, const std::string& prefix) {
    SphericalFactor f;
    f.constant = kv.get_double(prefix + ".constant", 1.0);
    if (kv.has(prefix + ".mode_frequencies")) {
        auto fr = kv.get_list(prefix + ".mode_frequencies");
        auto am = kv.get_list(prefix + ".mode_amplitudes");
        auto ph = kv.has(prefix + ".mode_phases") ? kv.get_list(prefix + ".mode_phases")
                                                  : std::vector<double>(fr.size(), 0.0);
        if (am.size() != fr.size() || ph.size() != fr.size())
            throw std::invalid_argument("config: '" + prefix +
                                        "' mode lists have unequal lengths");
        for (size_t i = 0; i < fr.size(); ++i)
            f.modes.push_back({static_cast<int>(fr[i]), am[i], ph[i]});
    }
    return f;
}

}  // namespace

CurvatureSpec curvature_from(const KeyValues& kv) {
    int n = kv.get_int("grid.n", 1);
    std::string kind = kv.get("curvature.kind", "sigma_k_root");
    int k = kv.get_int("curvature.k", 1);
    if (kind == "sigma_k_root") return sigma_k_root(k, n);
    if (kind == "gauss") return gauss_curvature(n);
    if (kind == "sigma_quotient")
        return sigma_quotient(k, kv.get_int("curvature.l", 0), n);
    throw std::invalid_argument("config: unknown curvature.kind '" + kind + "'");
}

ForcingSpec forcing_from(const KeyValues& kv) {
    ForcingSpec s;
    std::string kind = kv.get("forcing.kind", "psi_u_rho");
    if (kind == "psi_u_rho")
        s.kind = ForcingKind::PsiURho;
    else if (kind == "nu_u")
        s.kind = ForcingKind::NuU;
    else if (kind == "composite")
        s.kind = ForcingKind::Composite;
    else
        throw std::invalid_argument("config: unknown forcing.kind '" + kind + "'");
    s.scale = kv.get_double("forcing.scale", 1.0);
    s.alpha = kv.get_double("forcing.alpha", 1.0);
    s.delta = kv.get_double("forcing.delta", 0.0);
    s.p = kv.get_double("forcing.p", 1.0);
    s.psi = spherical_factor_from(kv, "forcing.psi");
    if (s.kind == ForcingKind::Composite) s.dir = spherical_factor_from(kv, "forcing.dir");
    return s;
}

BodyRecipe body_recipe_from(const KeyValues& kv, const std::string& prefix) {
    BodyRecipe r;
    std::string kind = kv.get(prefix + ".kind", "ball");
    if (kind == "ball")
        r.kind = BodyKind::Ball;
    else if (kind == "offset_ball")
        r.kind = BodyKind::OffsetBall;
    else if (kind == "ellipse")
        r.kind = BodyKind::Ellipse;
    else if (kind == "perturbed_ball")
        r.kind = BodyKind::PerturbedBall;
    else
        throw std::invalid_argument("config: unknown " + prefix + ".kind '" + kind + "'");
    r.radius = kv.get_double(prefix + ".radius", 1.0);
    if (kv.has(prefix + ".center")) {
        auto c = kv.get_list(prefix + ".center");
        if (c.size() != 2)
            throw std::invalid_argument("config: '" + prefix + ".center' needs 2 entries");
        r.center = {c[0], c[1]};
    }
    r.semi_axis_a = kv.get_double(prefix + ".a", 2.0);
    r.semi_axis_b = kv.get_double(prefix + ".b", 1.0);
    if (kv.has(prefix + ".mode_frequencies")) {
        auto fr = kv.get_list(prefix + ".mode_frequencies");
        auto am = kv.get_list(prefix + ".mode_amplitudes");
        auto ph = kv.has(prefix + ".mode_phases") ? kv.get_list(prefix + ".mode_phases")
                                                  : std::vector<double>(fr.size(), 0.0);
        if (am.size() != fr.size() || ph.size() != fr.size())
            throw std::invalid_argument("config: '" + prefix +
                                        "' mode lists have unequal lengths");
        for (size_t i = 0; i < fr.size(); ++i)
            r.modes.push_back({static_cast<int>(fr[i]), am[i], ph[i]});
    }
    return r;
}

OrliczFunction orlicz_from(const KeyValues& kv, const std::string& prefix) {
    std::string kind = kv.get(prefix + ".kind", "linear");
    if (kind == "linear") return orlicz_linear();
    if (kind == "power") return orlicz_power(kv.get_double(prefix + ".p", 1.0));
    throw std::invalid_argument("config: unknown " + prefix + ".kind '" + kind + "'");
}

FlowConfig flow_config_from(const KeyValues& kv) {
    FlowConfig c;
    c.beta = kv.get_double("flow.beta", 0.5);
    c.curvature = curvature_from(kv);
    c.forcing = forcing_from(kv);
    c.initial = body_recipe_from(kv);
    c.grid_n = kv.get_int("grid.n", 1);
    c.grid_m = kv.get_int("grid.m", 128);
    std::string gk = kv.get("grid.kind", c.grid_n == 1 ? "circle" : "axisymmetric");
    if (gk == "circle")
        c.grid_kind = GridKind::Circle;
    else if (gk == "axisymmetric")
        c.grid_kind = GridKind::Axisymmetric;
    else
        throw std::invalid_argument("config: unknown grid.kind '" + gk + "'");
    c.dt_safety = kv.get_double("flow.dt_safety", c.dt_safety);
    c.dt_max = kv.get_double("flow.dt_max", c.dt_max);
    c.tol_res = kv.get_double("flow.tol_res", c.tol_res);
    c.t_max = kv.get_double("flow.t_max", c.t_max);
    std::string mode = kv.get("flow.mode", "normalized");
    if (mode == "normalized")
        c.mode = FlowMode::Normalized;
    else if (mode == "unnormalized")
        c.mode = FlowMode::Unnormalized;
    else
        throw std::invalid_argument("config: unknown flow.mode '" + mode + "'");
    c.c0 = kv.get_double("flow.c0", 0.0);
    c.checkpoint_every = kv.get_int("flow.checkpoint_every", c.checkpoint_every);
    c.eps_floor = kv.get_double("flow.eps_floor", 0.0);
    c.waive_checks = kv.get_bool("flow.waive_checks", false);
    c.validate();
    return c;
}

}  // namespace suppflow
