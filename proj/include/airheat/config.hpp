#ifndef AIRHEAT_CONFIG_HPP
#define AIRHEAT_CONFIG_HPP

#include <fstream>
#include <map>
#include <string>

#include "airheat/analysis.hpp"
#include "airheat/thermo.hpp"

namespace airheat {

/// Shared run configuration for the CLI. Loaded from a flat key=value file
/// with `#` comments and dotted section prefixes (e.g. `rig.A = 1.81e-3`).
struct RunConfig {
    double gamma = 1.4;
    double c_v = 2.5;
    LeverRig rig;
    double ambient_pressure = kDefaultAmbientPressure;
    double smoothing_window_s = 1.0;
    HeaterPower heater;
    double heater_threshold_v = 2.0;
    std::size_t warmup_skip = 2;
    std::string output_dir = "./out";

    GasProperties gas() const { return GasProperties::make(c_v, gamma); }

    void validate() const {
        require_gas_consistency(gamma, c_v);
        rig.validate();
        if (!(ambient_pressure > 0.0))
            throw DomainError("config: ambient_pressure must be positive");
        if (!(smoothing_window_s > 0.0))
            throw DomainError("config: smoothing_window_s must be positive");
        if (!(heater.volts > 0.0) || !(heater.amps > 0.0))
            throw DomainError("config: heater volts and amps must be positive");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline std::map<std::string, std::string> parse_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw SchemaError("config: missing '=' at " + path + ":" +
                              std::to_string(lineno));
        std::string key = detail::trim(trimmed.substr(0, eq));
        std::string value = detail::trim(trimmed.substr(eq + 1));
        if (key.empty())
            throw SchemaError("config: empty key at " + path + ":" +
                              std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

inline RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    auto kv = parse_key_values(path);
    auto num = [&](const std::string& key, double& target) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        try {
            target = std::stod(it->second);
        } catch (const std::exception&) {
            throw SchemaError("config: bad numeric value for " + key);
        }
        kv.erase(it);
    };
    num("gas.gamma", cfg.gamma);
    num("gas.c_v", cfg.c_v);
    num("rig.A", cfg.rig.A);
    num("rig.r_a", cfg.rig.r_a);
    num("rig.r_mx1", cfg.rig.r_mx1);
    num("rig.r_my1", cfg.rig.r_my1);
    num("rig.r_mx2", cfg.rig.r_mx2);
    num("rig.g", cfg.rig.g);
    num("rig.wall_force", cfg.rig.wall_force);
    num("ambient_pressure", cfg.ambient_pressure);
    num("smoothing_window_s", cfg.smoothing_window_s);
    num("heater.volts", cfg.heater.volts);
    num("heater.amps", cfg.heater.amps);
    num("heater.threshold_v", cfg.heater_threshold_v);
    double warmup = static_cast<double>(cfg.warmup_skip);
    num("warmup_skip", warmup);
    cfg.warmup_skip = static_cast<std::size_t>(warmup);
    if (auto it = kv.find("output_dir"); it != kv.end()) {
        cfg.output_dir = it->second;
        kv.erase(it);
    }
    if (!kv.empty())
        throw SchemaError("config: unknown key '" + kv.begin()->first + "' in " + path);
    cfg.rig.P_atm = cfg.ambient_pressure;
    cfg.validate();
    return cfg;
}

} // namespace airheat

#endif
