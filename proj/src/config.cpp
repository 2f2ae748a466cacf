#include "blowlab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blowlab/errors.hpp"
#include "blowlab/io.hpp"

namespace blowlab {

namespace {

const std::vector<std::string> kKnownKeys = {
    "p", "mu", "K", "A", "gamma_epsilon",
    "dy", "dt_safety", "eps_grad", "bc", "domain_growth", "domain_pad",
    "out_cadence", "snapshot_cadence", "guard_v", "guard_u", "pin_modes",
    "enable_V", "enable_B", "enable_G", "enable_R",
    "s0", "window", "depth", "d0", "d1", "s_end", "x0", "K0", "alpha",
    "eps_list", "s_ladder_lo", "s_ladder_hi", "s_ladder_n", "b_factor", "threads"};

struct RawConfig {
    std::map<std::string, std::string> kv;
    std::map<std::string, int> line_of;
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value, got '" + line + "'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("unknown key '" + key + "'", lineno);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
        raw.kv[key] = value;
        raw.line_of[key] = lineno;
    }
    return raw;
}

double as_double(const RawConfig& raw, const std::string& key, double fallback) {
    auto it = raw.kv.find(key);
    if (it == raw.kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing garbage");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number for '" + key + "'", raw.line_of.at(key));
    }
}

int as_int(const RawConfig& raw, const std::string& key, int fallback) {
    const double v = as_double(raw, key, fallback);
    return static_cast<int>(v);
}

bool as_bool(const RawConfig& raw, const std::string& key, bool fallback) {
    auto it = raw.kv.find(key);
    if (it == raw.kv.end()) return fallback;
    if (it->second == "1" || it->second == "true") return true;
    if (it->second == "0" || it->second == "false") return false;
    throw ConfigError("expected 0/1 for '" + key + "'", raw.line_of.at(key));
}

std::vector<double> as_list(const RawConfig& raw, const std::string& key,
                            std::vector<double> fallback) {
    auto it = raw.kv.find(key);
    if (it == raw.kv.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse list entry '" + cell + "'", raw.line_of.at(key));
        }
    }
    if (out.empty()) throw ConfigError("empty list for '" + key + "'", raw.line_of.at(key));
    return out;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

FullConfig parse_config(const std::string& text) {
    const RawConfig raw = tokenize(text);
    FullConfig cfg;

    const double p = as_double(raw, "p", 5.0);
    const double mu = as_double(raw, "mu", 1.0);
    const double K = as_double(raw, "K", 6.0);
    cfg.params = ModelParams::derive(p, mu, K);

    RunConfig& rc = cfg.run;
    rc.dy = as_double(raw, "dy", rc.dy);
    rc.dt_safety = as_double(raw, "dt_safety", rc.dt_safety);
    rc.eps_grad = as_double(raw, "eps_grad", rc.eps_grad);
    if (auto it = raw.kv.find("bc"); it != raw.kv.end()) rc.bc = it->second;
    if (rc.bc != "dirichlet0" && rc.bc != "neumann")
        throw ConfigError("bc must be dirichlet0 or neumann", raw.line_of.count("bc") ? raw.line_of.at("bc") : 0);
    rc.domain_growth = as_double(raw, "domain_growth", rc.domain_growth);
    rc.domain_pad = as_double(raw, "domain_pad", rc.domain_pad);
    rc.out_cadence = as_double(raw, "out_cadence", rc.out_cadence);
    rc.snapshot_cadence = as_double(raw, "snapshot_cadence", rc.snapshot_cadence);
    rc.guard_v = as_double(raw, "guard_v", rc.guard_v);
    rc.guard_u = as_double(raw, "guard_u", rc.guard_u);
    rc.pin_modes = as_bool(raw, "pin_modes", rc.pin_modes);
    rc.enable_V = as_bool(raw, "enable_V", rc.enable_V);
    rc.enable_B = as_bool(raw, "enable_B", rc.enable_B);
    rc.enable_G = as_bool(raw, "enable_G", rc.enable_G);
    rc.enable_R = as_bool(raw, "enable_R", rc.enable_R);
    if (!(rc.dy > 0.0)) throw ConfigError("dy must be positive");
    if (!(rc.dt_safety > 0.0 && rc.dt_safety <= 0.5))
        throw ConfigError("dt_safety must lie in (0, 0.5]");
    if (rc.eps_grad < 0.0) throw ConfigError("eps_grad must be >= 0");

    CommandOptions& op = cfg.opts;
    op.s0 = as_double(raw, "s0", op.s0);
    op.window = as_double(raw, "window", op.window);
    op.depth = as_int(raw, "depth", op.depth);
    op.d0 = as_double(raw, "d0", op.d0);
    op.d1 = as_double(raw, "d1", op.d1);
    op.s_end = as_double(raw, "s_end", op.s_end);
    op.x0 = as_double(raw, "x0", op.x0);
    op.K0 = as_double(raw, "K0", op.K0);
    op.alpha = as_double(raw, "alpha", op.alpha);
    op.eps_list = as_list(raw, "eps_list", op.eps_list);
    op.s_ladder_lo = as_double(raw, "s_ladder_lo", op.s_ladder_lo);
    op.s_ladder_hi = as_double(raw, "s_ladder_hi", op.s_ladder_hi);
    op.s_ladder_n = as_int(raw, "s_ladder_n", op.s_ladder_n);
    op.b_factor = as_double(raw, "b_factor", op.b_factor);
    op.threads = as_int(raw, "threads", op.threads);

    const double A = as_double(raw, "A", 20.0);
    const double geps = as_double(raw, "gamma_epsilon", 0.05);
    cfg.shrink = ShrinkParams::make(cfg.params, A, geps);

    // canonical dump: every effective value, sorted keys
    std::map<std::string, std::string> eff;
    eff["p"] = fmt17(p);
    eff["mu"] = fmt17(mu);
    eff["K"] = fmt17(K);
    eff["A"] = fmt17(A);
    eff["gamma_epsilon"] = fmt17(geps);
    eff["dy"] = fmt17(rc.dy);
    eff["dt_safety"] = fmt17(rc.dt_safety);
    eff["eps_grad"] = fmt17(rc.eps_grad);
    eff["bc"] = rc.bc;
    eff["domain_growth"] = fmt17(rc.domain_growth);
    eff["domain_pad"] = fmt17(rc.domain_pad);
    eff["out_cadence"] = fmt17(rc.out_cadence);
    eff["snapshot_cadence"] = fmt17(rc.snapshot_cadence);
    eff["guard_v"] = fmt17(rc.guard_v);
    eff["guard_u"] = fmt17(rc.guard_u);
    eff["pin_modes"] = rc.pin_modes ? "1" : "0";
    eff["enable_V"] = rc.enable_V ? "1" : "0";
    eff["enable_B"] = rc.enable_B ? "1" : "0";
    eff["enable_G"] = rc.enable_G ? "1" : "0";
    eff["enable_R"] = rc.enable_R ? "1" : "0";
    eff["s0"] = fmt17(op.s0);
    eff["window"] = fmt17(op.window);
    eff["depth"] = std::to_string(op.depth);
    eff["d0"] = fmt17(op.d0);
    eff["d1"] = fmt17(op.d1);
    eff["s_end"] = fmt17(op.s_end);
    eff["x0"] = fmt17(op.x0);
    eff["K0"] = fmt17(op.K0);
    eff["alpha"] = fmt17(op.alpha);
    {
        std::string lst;
        for (std::size_t i = 0; i < op.eps_list.size(); ++i)
            lst += (i ? "," : "") + fmt17(op.eps_list[i]);
        eff["eps_list"] = lst;
    }
    eff["s_ladder_lo"] = fmt17(op.s_ladder_lo);
    eff["s_ladder_hi"] = fmt17(op.s_ladder_hi);
    eff["s_ladder_n"] = std::to_string(op.s_ladder_n);
    eff["b_factor"] = fmt17(op.b_factor);

    std::ostringstream canon;
    for (const auto& [k, v] : eff) canon << k << "=" << v << "\n";
    cfg.canonical = canon.str();
    cfg.hash = fnv1a(cfg.canonical);
    return cfg;
}

FullConfig load_config_file(const std::string& path, bool apply_env) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (apply_env) {
        for (const std::string& key : kKnownKeys) {
            const std::string var = "BLOWLAB_" + key;
            if (const char* v = std::getenv(var.c_str()))
                text += "\n" + key + "=" + std::string(v) + "\n";
        }
    }
    return parse_config(text);
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const FullConfig& cfg, const std::vector<std::string>& outputs,
                    double wall_seconds) {
    nlohmann::json j;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(cfg.hash));
    j["config_hash"] = hex;
    j["command"] = command;
    j["versions"] = {{"blowlab", "0.1.0"}};
    j["wall_clock_sec"] = wall_seconds;
    j["outputs"] = outputs;
    j["params"] = {{"p", cfg.params.p},     {"mu", cfg.params.mu},   {"dim", cfg.params.dim},
                   {"q", cfg.params.q},     {"beta", cfg.params.beta},
                   {"kappa", cfg.params.kappa}, {"b", cfg.params.b}, {"a", cfg.params.a},
                   {"K", cfg.params.K}};
    j["run"] = {{"dy", cfg.run.dy},
                {"dt_safety", cfg.run.dt_safety},
                {"eps_grad", cfg.run.eps_grad},
                {"bc", cfg.run.bc},
                {"domain_growth", cfg.run.domain_growth},
                {"domain_pad", cfg.run.domain_pad},
                {"out_cadence", cfg.run.out_cadence},
                {"snapshot_cadence", cfg.run.snapshot_cadence},
                {"guard_v", cfg.run.guard_v},
                {"guard_u", cfg.run.guard_u},
                {"pin_modes", cfg.run.pin_modes}};
    j["shrink"] = {{"A", cfg.shrink.A},
                   {"gamma", cfg.shrink.gamma},
                   {"epsilon_gamma", cfg.shrink.epsilon_gamma}};
    j["config"] = cfg.canonical;
    write_text_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace blowlab
