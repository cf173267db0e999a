#include "rotdev/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rotdev/errors.hpp"

namespace rotdev {

std::string to_string(CachePolicy p) {
    switch (p) {
    case CachePolicy::off: return "off";
    case CachePolicy::read: return "read";
    case CachePolicy::read_write: return "read_write";
    }
    return "off";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> reals(const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split(v, " \t,")) out.push_back(parse_real(tok));
    return out;
}

long parse_long(const std::string& tok) {
    long out = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ConfigError("expected an integer, got '" + tok + "'");
    return out;
}

Vec2 pair_of(const std::string& v) {
    const auto r = reals(v);
    if (r.size() != 2) throw ConfigError("expected two numbers, got '" + v + "'");
    return {r[0], r[1]};
}

std::vector<ScalarTerm> scalar_terms(const std::string& v) {
    std::vector<ScalarTerm> out;
    for (const auto& group : split(v, ";")) {
        const auto toks = split(group, " \t,");
        if (toks.empty()) continue;
        if (toks.size() != 3) throw ConfigError("scalar term needs 'k cos sin', got '" + trim(group) + "'");
        out.push_back({static_cast<int>(parse_long(toks[0])), parse_real(toks[1]), parse_real(toks[2])});
    }
    return out;
}

std::vector<TrigTerm> vector_terms(const std::string& v) {
    std::vector<TrigTerm> out;
    for (const auto& group : split(v, ";")) {
        const auto toks = split(group, " \t,");
        if (toks.empty()) continue;
        if (toks.size() != 6)
            throw ConfigError("periodic term needs 'kx ky cos_x cos_y sin_x sin_y', got '" + trim(group) + "'");
        out.push_back({static_cast<int>(parse_long(toks[0])), static_cast<int>(parse_long(toks[1])),
                       {parse_real(toks[2]), parse_real(toks[3])},
                       {parse_real(toks[4]), parse_real(toks[5])}});
    }
    return out;
}

Vec2 unit(Vec2 v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw ConfigError("direction must be nonzero");
    return v / n;
}

} // namespace

double parse_real(const std::string& token) {
    std::string t = trim(token);
    double sign = 1.0;
    if (t.size() > 1 && t[0] == '-' && std::isalpha(static_cast<unsigned char>(t[1]))) {
        sign = -1.0;
        t = t.substr(1);
    }
    if (t == "golden") return sign * golden_mean();
    if (t.rfind("liouville(", 0) == 0 && t.back() == ')') {
        const long n = parse_long(t.substr(10, t.size() - 11));
        if (n < 1 || n > 12) throw ConfigError("liouville(n) needs 1 <= n <= 12");
        return sign * liouville_number(static_cast<int>(n));
    }
    double out = 0.0;
    const char* b = t.data();
    if (!t.empty() && t[0] == '+') ++b;
    const auto res = std::from_chars(b, t.data() + t.size(), out);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("expected a number, got '" + token + "'");
    return sign * out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, std::map<std::string, Setter>> keys = {
        {"run",
         {{"name", [&](const std::string& v) { cfg.name = v; }},
          {"cache",
           [&](const std::string& v) {
               if (v == "off") cfg.cache = CachePolicy::off;
               else if (v == "read") cfg.cache = CachePolicy::read;
               else if (v == "read_write") cfg.cache = CachePolicy::read_write;
               else throw ConfigError("cache must be off, read or read_write");
           }}}},
        {"map",
         {{"family", [&](const std::string& v) { cfg.map.tag = parse_family_tag(v); }},
          {"alpha", [&](const std::string& v) { cfg.map.alpha = pair_of(v); }},
          {"base", [&](const std::string& v) { cfg.map.base = parse_real(v); }},
          {"forcing", [&](const std::string& v) { cfg.map.forcing = scalar_terms(v); }},
          {"transfer", [&](const std::string& v) { cfg.map.transfer = scalar_terms(v); }},
          {"periodic", [&](const std::string& v) { cfg.map.periodic = vector_terms(v); }},
          {"horizon_cap", [&](const std::string& v) { cfg.horizon_cap = parse_long(v); }}}},
        {"rotset",
         {{"grid_res", [&](const std::string& v) { cfg.rot_grid_res = static_cast<int>(parse_long(v)); }},
          {"horizons",
           [&](const std::string& v) {
               cfg.rot_horizons.clear();
               for (const auto& tok : split(v, " \t,")) cfg.rot_horizons.push_back(parse_long(tok));
           }},
          {"point_tol", [&](const std::string& v) { cfg.point_tol = parse_real(v); }},
          {"line_tol", [&](const std::string& v) { cfg.line_tol = parse_real(v); }},
          {"point_direction", [&](const std::string& v) { cfg.point_direction = unit(pair_of(v)); }}}},
        {"deviation",
         {{"grid_res", [&](const std::string& v) { cfg.dev_grid_res = static_cast<int>(parse_long(v)); }},
          {"horizon", [&](const std::string& v) { cfg.dev_horizon = parse_long(v); }},
          {"v", [&](const std::string& v) { cfg.v_override = unit(pair_of(v)); }},
          {"alpha", [&](const std::string& v) { cfg.alpha_override = parse_real(v); }},
          {"plateau", [&](const std::string& v) { cfg.thresholds.plateau = parse_real(v); }},
          {"slope", [&](const std::string& v) { cfg.thresholds.slope = parse_real(v); }},
          {"slack_factor", [&](const std::string& v) { cfg.slack_factor = parse_real(v); }}}},
        {"stableset",
         {{"horizon", [&](const std::string& v) { cfg.ss_horizon = parse_long(v); }},
          {"r", [&](const std::string& v) { cfg.r = parse_real(v); }},
          {"half_width", [&](const std::string& v) { cfg.half_width = parse_real(v); }},
          {"resolution", [&](const std::string& v) { cfg.resolution = static_cast<int>(parse_long(v)); }},
          {"center", [&](const std::string& v) { cfg.center = pair_of(v); }},
          {"t", [&](const std::string& v) { cfg.t = pair_of(v); }},
          {"sidedness",
           [&](const std::string& v) {
               if (v == "two_sided") cfg.sidedness = Sidedness::two_sided;
               else if (v == "forward") cfg.sidedness = Sidedness::forward;
               else throw ConfigError("sidedness must be two_sided or forward");
           }},
          {"t_samples", [&](const std::string& v) { cfg.t_samples = static_cast<int>(parse_long(v)); }},
          {"s_values", [&](const std::string& v) { cfg.s_values = reals(v); }},
          {"r_min", [&](const std::string& v) { cfg.r_min = parse_real(v); }},
          {"cap_fraction", [&](const std::string& v) { cfg.cap_fraction = parse_real(v); }}}},
        {"foliation",
         {{"eps_r", [&](const std::string& v) { cfg.eps_r = parse_real(v); }},
          {"levels", [&](const std::string& v) { cfg.levels = reals(v); }},
          {"level_count", [&](const std::string& v) { cfg.level_count = static_cast<int>(parse_long(v)); }},
          {"n_checks", [&](const std::string& v) { cfg.n_checks = parse_long(v); }}}},
        {"render",
         {{"artifacts", [&](const std::string& v) { cfg.render_artifacts = split(v, " \t,"); }}}},
    };

    std::istringstream in(text);
    std::string line;
    std::string section;
    std::set<std::string> seen;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
        };
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!keys.count(section)) fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        if (section.empty()) fail("key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& sec = keys.at(section);
        const auto it = sec.find(key);
        if (it == sec.end()) fail("unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert(section + "." + key).second) fail("duplicate key '" + key + "'");
        if (value.empty()) fail("empty value for '" + key + "'");
        try {
            it->second(value);
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }

    if (!seen.count("map.family")) throw ConfigError("[map] family is required");
    if (cfg.rot_grid_res < 1 || cfg.dev_grid_res < 1) throw ConfigError("grid_res must be positive");
    if (cfg.rot_horizons.empty()) throw ConfigError("rotset horizons must not be empty");
    if (cfg.alpha_override && !cfg.v_override) throw ConfigError("deviation alpha needs deviation v");
    if (cfg.t_samples < 1) throw ConfigError("t_samples must be positive");
    if (cfg.level_count < 1) throw ConfigError("level_count must be positive");
    if (!(cfg.cap_fraction > 0.0 && cfg.cap_fraction <= 1.0)) throw ConfigError("cap_fraction must lie in (0, 1]");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

Json vec(Vec2 v) { return Json::array({v.x, v.y}); }

} // namespace

Json RunConfig::to_json() const {
    Json j;
    j["name"] = name;
    Json m;
    m["family"] = to_string(map.tag);
    m["alpha"] = vec(map.alpha);
    m["base"] = map.base;
    auto scalars = [](const std::vector<ScalarTerm>& v) {
        Json a = Json::array();
        for (const auto& t : v) a.push_back(Json::array({t.k, t.cos_coef, t.sin_coef}));
        return a;
    };
    m["forcing"] = scalars(map.forcing);
    m["transfer"] = scalars(map.transfer);
    Json p = Json::array();
    for (const auto& t : map.periodic)
        p.push_back(Json::array({t.kx, t.ky, t.cos_coef.x, t.cos_coef.y, t.sin_coef.x, t.sin_coef.y}));
    m["periodic"] = p;
    m["horizon_cap"] = horizon_cap;
    j["map"] = m;

    Json rs;
    rs["grid_res"] = rot_grid_res;
    rs["horizons"] = rot_horizons;
    rs["point_tol"] = point_tol;
    rs["line_tol"] = line_tol;
    rs["point_direction"] = vec(point_direction);
    j["rotset"] = rs;

    Json dv;
    dv["grid_res"] = dev_grid_res;
    dv["horizon"] = dev_horizon;
    dv["v"] = v_override ? vec(*v_override) : Json(nullptr);
    dv["alpha"] = alpha_override ? Json(*alpha_override) : Json(nullptr);
    dv["plateau"] = thresholds.plateau;
    dv["slope"] = thresholds.slope;
    dv["slack_factor"] = slack_factor;
    j["deviation"] = dv;

    Json ss;
    ss["horizon"] = ss_horizon;
    ss["r"] = r;
    ss["half_width"] = half_width ? Json(*half_width) : Json(nullptr);
    ss["resolution"] = resolution;
    ss["center"] = vec(center);
    ss["t"] = vec(t);
    ss["sidedness"] = to_string(sidedness);
    ss["t_samples"] = t_samples;
    ss["s_values"] = s_values;
    ss["r_min"] = r_min;
    ss["cap_fraction"] = cap_fraction;
    j["stableset"] = ss;

    Json fo;
    fo["eps_r"] = eps_r;
    fo["levels"] = levels;
    fo["level_count"] = level_count;
    fo["n_checks"] = n_checks;
    j["foliation"] = fo;

    // The cache policy is left out: it must not change what a run reports.
    j["render"] = Json{{"artifacts", render_artifacts}};
    return j;
}

} // namespace rotdev
