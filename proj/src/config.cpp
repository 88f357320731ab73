#include "covoter/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace covoter {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_assignment(const std::string& raw) {
    const std::size_t eq = raw.find('=');
    require_config(eq != std::string::npos, "expected key=value, got '" + raw + "'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    require_config(!key.empty(), "empty key in '" + raw + "'");
    return {key, value};
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': malformed number '" + text + "'");
    }
}

long long parse_int(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': malformed integer '" + text + "'");
    }
}

// keys the run/pde/graphon/experiment commands read; anything else that is
// not a model parameter is a typo worth rejecting loudly
const std::set<std::string>& general_keys() {
    static const std::set<std::string> keys = {
        "n",          "T",         "sample_dt", "opinion_init", "y_init",
        "bins",       "observable", "M",        "dt",           "store_every",
        "grid_k",     "restarts",  "min_px",    "density_init", "p_plus",
        "graphon_a",  "graphon_b", "eps",
    };
    return keys;
}

const std::set<std::string>& model_keys_union() {
    static const std::set<std::string> keys = {
        "gamma_pm", "gamma_mp", "beta",   "q_exp",  "q",      "pi_p",     "pi_m",
        "pi_p_g",   "pi_m_g",   "pi_p_r", "pi_m_r", "p0",     "weighting",
    };
    return keys;
}

std::set<std::string> keys_of_model(int model) {
    switch (model) {
        case 1: return {"gamma_pm", "gamma_mp", "pi_p", "pi_m", "p0"};
        case 2: return {"beta", "pi_p", "pi_m", "p0", "q_exp"};
        default: return {"beta", "q", "pi_p_g", "pi_m_g", "pi_p_r", "pi_m_r", "p0", "weighting"};
    }
}

}  // namespace

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto [key, value] = split_assignment(line);
        cfg[key] = value;
    }
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    require_config(in.good(), "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(Config& cfg, const std::string& key_value) {
    const auto [key, value] = split_assignment(key_value);
    cfg[key] = value;
}

std::string serialize_config(const Config& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

double get_double(const Config& cfg, const std::string& key, std::optional<double> fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) {
        require_config(fallback.has_value(), "missing required key '" + key + "'");
        return *fallback;
    }
    return parse_double(key, it->second);
}

long long get_int(const Config& cfg, const std::string& key, std::optional<long long> fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) {
        require_config(fallback.has_value(), "missing required key '" + key + "'");
        return *fallback;
    }
    return parse_int(key, it->second);
}

std::string get_string(const Config& cfg, const std::string& key,
                       std::optional<std::string> fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) {
        require_config(fallback.has_value(), "missing required key '" + key + "'");
        return *fallback;
    }
    return it->second;
}

ModelParams params_from_config(const Config& cfg) {
    const long long model = get_int(cfg, "model");
    require_config(model >= 1 && model <= 3, "key 'model' must be 1, 2 or 3");
    const std::set<std::string> own = keys_of_model(static_cast<int>(model));
    for (const auto& [key, value] : cfg) {
        if (key == "model" || own.count(key) || general_keys().count(key)) continue;
        if (model_keys_union().count(key))
            throw config_error("key '" + key + "' is not a model-" + std::to_string(model) +
                               " parameter");
        throw config_error("unknown key '" + key + "'");
    }

    ModelParams out;
    if (model == 1) {
        Model1Params p;
        p.gamma_pm = get_double(cfg, "gamma_pm", p.gamma_pm);
        p.gamma_mp = get_double(cfg, "gamma_mp", p.gamma_mp);
        p.pi_p = get_double(cfg, "pi_p", p.pi_p);
        p.pi_m = get_double(cfg, "pi_m", p.pi_m);
        p.p0 = get_double(cfg, "p0", p.p0);
        out = p;
    } else if (model == 2) {
        Model2Params p;
        p.beta = get_double(cfg, "beta", p.beta);
        p.pi_p = get_double(cfg, "pi_p", p.pi_p);
        p.pi_m = get_double(cfg, "pi_m", p.pi_m);
        p.p0 = get_double(cfg, "p0", p.p0);
        p.q_exp = get_double(cfg, "q_exp", p.q_exp);
        out = p;
    } else {
        Model3Params p;
        p.beta = get_double(cfg, "beta", p.beta);
        p.q = static_cast<int>(get_int(cfg, "q", p.q));
        p.pi_p_g = get_double(cfg, "pi_p_g", p.pi_p_g);
        p.pi_m_g = get_double(cfg, "pi_m_g", p.pi_m_g);
        p.pi_p_r = get_double(cfg, "pi_p_r", p.pi_p_r);
        p.pi_m_r = get_double(cfg, "pi_m_r", p.pi_m_r);
        p.p0 = get_double(cfg, "p0", p.p0);
        const std::string w = get_string(cfg, "weighting", "mean_gr");
        if (w == "mean_gr")
            p.weighting = LayerWeighting::mean_gr;
        else if (w == "green_only")
            p.weighting = LayerWeighting::green_only;
        else if (w == "red_only")
            p.weighting = LayerWeighting::red_only;
        else
            throw config_error("key 'weighting': unknown value '" + w + "'");
        out = p;
    }
    try {
        validate(out);
    } catch (const contract_error& e) {
        throw config_error(std::string("invalid model parameters: ") + e.what());
    }
    return out;
}

OpinionLaw opinion_law_from_config(const Config& cfg, int n) {
    const std::string s = get_string(cfg, "opinion_init", "bernoulli:0.5");
    if (s == "all_plus") return OpinionLaw::all_plus();
    if (s == "all_minus") return OpinionLaw::all_minus();
    if (s == "half") return OpinionLaw::first_k_plus(n / 2);
    const std::string prefix = "bernoulli:";
    if (s.rfind(prefix, 0) == 0) {
        const double p = parse_double("opinion_init", s.substr(prefix.size()));
        require_config(p >= 0.0 && p <= 1.0, "key 'opinion_init': probability must lie in [0,1]");
        return OpinionLaw::bernoulli(p);
    }
    throw config_error("key 'opinion_init': unknown value '" + s + "'");
}

YLaw y_law_from_config(const Config& cfg) {
    const std::string s = get_string(cfg, "y_init", "uniform");
    if (s == "zero") return YLaw::zero();
    if (s == "uniform") return YLaw::uniform();
    const std::string prefix = "const:";
    if (s.rfind(prefix, 0) == 0) {
        const double v = parse_double("y_init", s.substr(prefix.size()));
        require_config(v >= 0.0 && v <= 1.0, "key 'y_init': constant must lie in [0,1]");
        return YLaw::constant(v);
    }
    throw config_error("key 'y_init': unknown value '" + s + "'");
}

}  // namespace covoter
