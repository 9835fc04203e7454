#include "propagator/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace prop {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + section + "." + it.key() + "'");
}

double num(const json& obj, const std::string& section, const std::string& key, double dflt,
           bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("config: missing key '" + section + "." + key + "'");
        return dflt;
    }
    if (!obj[key].is_number()) throw ConfigError("config: '" + section + "." + key + "' must be a number");
    return obj[key].get<double>();
}

std::string str(const json& obj, const std::string& section, const std::string& key,
                const std::string& dflt, bool required = false) {
    if (!obj.contains(key)) {
        if (required) throw ConfigError("config: missing key '" + section + "." + key + "'");
        return dflt;
    }
    if (!obj[key].is_string()) throw ConfigError("config: '" + section + "." + key + "' must be a string");
    return obj[key].get<std::string>();
}

ScenarioKind parse_kind(const std::string& s) {
    if (s == "sanity") return ScenarioKind::Sanity;
    if (s == "no_buy") return ScenarioKind::NoBuy;
    if (s == "no_short") return ScenarioKind::NoShort;
    if (s == "stop_trading") return ScenarioKind::StopTrading;
    if (s == "battery") return ScenarioKind::Battery;
    if (s == "custom") return ScenarioKind::Custom;
    throw ConfigError("config: unknown scenario kind '" + s + "'");
}

std::string kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::Sanity: return "sanity";
        case ScenarioKind::NoBuy: return "no_buy";
        case ScenarioKind::NoShort: return "no_short";
        case ScenarioKind::StopTrading: return "stop_trading";
        case ScenarioKind::Battery: return "battery";
        case ScenarioKind::Custom: return "custom";
    }
    return "sanity";
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    reject_unknown(root, "", {"grid", "kernel", "signal", "scenario", "uzawa", "lsmc", "run"});

    ScenarioConfig cfg;

    const json grid = root.value("grid", json::object());
    reject_unknown(grid, "grid", {"T", "N"});
    cfg.T = num(grid, "grid", "T", 1.0);
    const double n_raw = num(grid, "grid", "N", 100.0);
    cfg.N = static_cast<int>(n_raw);
    if (cfg.N != n_raw || cfg.N < 2) throw ConfigError("config: grid.N must be an integer >= 2");
    if (!(cfg.T > 0.0)) throw ConfigError("config: grid.T must be positive");

    const json kernel = root.value("kernel", json::object());
    reject_unknown(kernel, "kernel", {"type", "c", "rho", "alpha", "c2", "rho2"});
    const std::string ktype = str(kernel, "kernel", "type", "zero");
    try {
        if (ktype == "zero") {
            cfg.kernel = KernelSpec::zero();
        } else if (ktype == "exponential") {
            cfg.kernel = KernelSpec::exponential(num(kernel, "kernel", "c", 0.0, true),
                                                 num(kernel, "kernel", "rho", 0.0, true));
        } else if (ktype == "power_law") {
            cfg.kernel = KernelSpec::power_law(num(kernel, "kernel", "c", 0.0, true),
                                               num(kernel, "kernel", "alpha", 0.0, true));
        } else if (ktype == "sum_exponential") {
            cfg.kernel = KernelSpec::sum_exponential(
                num(kernel, "kernel", "c", 0.0, true), num(kernel, "kernel", "rho", 0.0, true),
                num(kernel, "kernel", "c2", 0.0, true), num(kernel, "kernel", "rho2", 0.0, true));
        } else {
            throw ConfigError("config: unknown kernel type '" + ktype + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: kernel: ") + e.what());
    }

    const json signal = root.value("signal", json::object());
    reject_unknown(signal, "signal", {"theta", "w", "phi", "kappa", "xi", "I0", "S0", "sigma"});
    cfg.signal.theta = num(signal, "signal", "theta", 0.0);
    cfg.signal.w = num(signal, "signal", "w", 0.0);
    cfg.signal.phi = num(signal, "signal", "phi", 0.0);
    cfg.signal.kappa = num(signal, "signal", "kappa", 1.0);
    cfg.signal.xi = num(signal, "signal", "xi", 0.0);
    cfg.signal.I0 = num(signal, "signal", "I0", 0.0);
    cfg.signal.S0 = num(signal, "signal", "S0", 100.0);
    cfg.signal.sigma = num(signal, "signal", "sigma", 0.0);
    if (!(cfg.signal.kappa > 0.0)) throw ConfigError("config: signal.kappa must be positive");
    if (cfg.signal.xi < 0.0 || cfg.signal.sigma < 0.0)
        throw ConfigError("config: signal.xi and signal.sigma must be non-negative");

    const json scen = root.value("scenario", json::object());
    reject_unknown(scen, "scenario", {"kind", "X0", "big_M", "big_M_prime", "S_ref", "u_max", "X_max"});
    cfg.scenario.kind = parse_kind(str(scen, "scenario", "kind", "sanity"));
    cfg.scenario.X0 = num(scen, "scenario", "X0", 0.0);
    cfg.scenario.big_M = num(scen, "scenario", "big_M", 1e16);
    cfg.scenario.big_M_prime = num(scen, "scenario", "big_M_prime", 7.5e15);
    cfg.scenario.S_ref = num(scen, "scenario", "S_ref", 0.0);
    cfg.scenario.u_max = num(scen, "scenario", "u_max", 0.0);
    cfg.scenario.X_max = num(scen, "scenario", "X_max", 0.0);
    if (cfg.scenario.kind == ScenarioKind::StopTrading && !(cfg.scenario.S_ref < cfg.signal.S0))
        throw ConfigError("config: scenario.S_ref must be below signal.S0");
    if (cfg.scenario.kind == ScenarioKind::Battery &&
        !(cfg.scenario.u_max > 0.0 && cfg.scenario.X_max > 0.0))
        throw ConfigError("config: scenario.u_max and scenario.X_max must be positive");

    const json uz = root.value("uzawa", json::object());
    reject_unknown(uz, "uzawa", {"delta", "beta", "max_iters", "eps_bar", "slackness_mode",
                                 "feasibility_factor"});
    cfg.uzawa.delta = num(uz, "uzawa", "delta", 1.0);
    cfg.uzawa.beta = num(uz, "uzawa", "beta", 0.0);
    const double iters = num(uz, "uzawa", "max_iters", 100.0);
    cfg.uzawa.max_iters = static_cast<int>(iters);
    if (cfg.uzawa.max_iters != iters || cfg.uzawa.max_iters < 1)
        throw ConfigError("config: uzawa.max_iters must be a positive integer");
    cfg.uzawa.eps_bar = num(uz, "uzawa", "eps_bar", 1e-3);
    cfg.uzawa.feasibility_factor = num(uz, "uzawa", "feasibility_factor", 10.0);
    const std::string smode = str(uz, "uzawa", "slackness_mode", "sum");
    if (smode == "sum") cfg.uzawa.slackness_mode = SlacknessMode::Sum;
    else if (smode == "max") cfg.uzawa.slackness_mode = SlacknessMode::Max;
    else throw ConfigError("config: uzawa.slackness_mode must be 'sum' or 'max'");
    if (!(cfg.uzawa.delta > 0.0)) throw ConfigError("config: uzawa.delta must be positive");
    if (cfg.uzawa.beta < 0.0) throw ConfigError("config: uzawa.beta must be non-negative");
    if (!(cfg.uzawa.eps_bar > 0.0)) throw ConfigError("config: uzawa.eps_bar must be positive");

    const json ls = root.value("lsmc", json::object());
    reject_unknown(ls, "lsmc", {"degree", "ridge", "standardize"});
    const double deg = num(ls, "lsmc", "degree", 2.0);
    cfg.uzawa.lsmc.degree = static_cast<int>(deg);
    if (cfg.uzawa.lsmc.degree != deg || cfg.uzawa.lsmc.degree < 0 || cfg.uzawa.lsmc.degree > 15)
        throw ConfigError("config: lsmc.degree must be an integer in [0, 15]");
    cfg.uzawa.lsmc.ridge = num(ls, "lsmc", "ridge", 1e-8);
    if (cfg.uzawa.lsmc.ridge < 0.0) throw ConfigError("config: lsmc.ridge must be non-negative");
    if (ls.contains("standardize")) {
        if (!ls["standardize"].is_boolean())
            throw ConfigError("config: lsmc.standardize must be a boolean");
        cfg.uzawa.lsmc.standardize = ls["standardize"].get<bool>();
    }

    const json run = root.value("run", json::object());
    reject_unknown(run, "run", {"paths", "seed", "out_dir"});
    const double paths = num(run, "run", "paths", 1000.0);
    cfg.paths = static_cast<int>(paths);
    if (cfg.paths != paths || cfg.paths < 100)
        throw ConfigError("config: run.paths must be an integer >= 100 (LSMC needs a cross-path ensemble)");
    const double seed = num(run, "run", "seed", 1.0);
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.out_dir = str(run, "run", "out_dir", "out");

    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    json root;
    root["grid"] = {{"T", cfg.T}, {"N", cfg.N}};
    json kernel;
    switch (cfg.kernel.type) {
        case KernelType::Zero:
            kernel = {{"type", "zero"}};
            break;
        case KernelType::Exponential:
            kernel = {{"type", "exponential"}, {"c", cfg.kernel.c}, {"rho", cfg.kernel.rho}};
            break;
        case KernelType::PowerLaw:
            kernel = {{"type", "power_law"}, {"c", cfg.kernel.c}, {"alpha", cfg.kernel.alpha}};
            break;
        case KernelType::SumExponential:
            kernel = {{"type", "sum_exponential"}, {"c", cfg.kernel.c}, {"rho", cfg.kernel.rho},
                      {"c2", cfg.kernel.c2}, {"rho2", cfg.kernel.rho2}};
            break;
    }
    root["kernel"] = kernel;
    root["signal"] = {{"theta", cfg.signal.theta}, {"w", cfg.signal.w}, {"phi", cfg.signal.phi},
                      {"kappa", cfg.signal.kappa}, {"xi", cfg.signal.xi}, {"I0", cfg.signal.I0},
                      {"S0", cfg.signal.S0}, {"sigma", cfg.signal.sigma}};
    json scen = {{"kind", kind_name(cfg.scenario.kind)}, {"X0", cfg.scenario.X0},
                 {"big_M", cfg.scenario.big_M}, {"big_M_prime", cfg.scenario.big_M_prime}};
    if (cfg.scenario.kind == ScenarioKind::StopTrading) scen["S_ref"] = cfg.scenario.S_ref;
    if (cfg.scenario.kind == ScenarioKind::Battery) {
        scen["u_max"] = cfg.scenario.u_max;
        scen["X_max"] = cfg.scenario.X_max;
    }
    root["scenario"] = scen;
    root["uzawa"] = {{"delta", cfg.uzawa.delta}, {"beta", cfg.uzawa.beta},
                     {"max_iters", cfg.uzawa.max_iters}, {"eps_bar", cfg.uzawa.eps_bar},
                     {"feasibility_factor", cfg.uzawa.feasibility_factor},
                     {"slackness_mode",
                      cfg.uzawa.slackness_mode == SlacknessMode::Sum ? "sum" : "max"}};
    root["lsmc"] = {{"degree", cfg.uzawa.lsmc.degree}, {"ridge", cfg.uzawa.lsmc.ridge},
                    {"standardize", cfg.uzawa.lsmc.standardize}};
    root["run"] = {{"paths", cfg.paths}, {"seed", cfg.seed}, {"out_dir", cfg.out_dir}};
    return root.dump(2);
}

std::vector<std::string> bundled_scenario_names() {
    return {"sanity-exponential", "sanity-powerlaw", "no-buy", "no-short", "stop-trading",
            "battery"};
}

ScenarioConfig bundled_scenario(const std::string& name) {
    ScenarioConfig cfg;
    cfg.T = 1.0;
    cfg.N = 100;
    cfg.signal.S0 = 100.0;
    cfg.signal.sigma = 0.0;
    cfg.uzawa.eps_bar = 1e-3;
    cfg.out_dir = "out-" + name;

    const double pi = std::acos(-1.0);
    auto liquidation_signal = [&](double theta, double I0) {
        cfg.signal.theta = theta;
        cfg.signal.w = 0.0;
        cfg.signal.phi = pi / 2.0;
        cfg.signal.kappa = 1.0;
        cfg.signal.xi = 4.0;
        cfg.signal.I0 = I0;
    };

    if (name == "sanity-exponential" || name == "sanity-powerlaw") {
        liquidation_signal(-20.0, -2.0);
        cfg.kernel = name == "sanity-powerlaw" ? KernelSpec::power_law(2.0, 0.6)
                                               : KernelSpec::exponential(5.0, 1.0);
        cfg.scenario.kind = ScenarioKind::Sanity;
        cfg.scenario.X0 = 1.0;
        cfg.uzawa.delta = 3.0;
        cfg.uzawa.beta = 0.6;
        cfg.uzawa.max_iters = 300;
        cfg.paths = 10000;
    } else if (name == "no-buy") {
        liquidation_signal(-5.0, 17.0);
        cfg.kernel = KernelSpec::exponential(5.0, 1.0);
        cfg.scenario.kind = ScenarioKind::NoBuy;
        cfg.scenario.X0 = 1.0;
        cfg.uzawa.delta = 1.0;
        cfg.uzawa.beta = 1e-4;
        cfg.uzawa.max_iters = 50;
        cfg.paths = 10000;
    } else if (name == "no-short") {
        liquidation_signal(-20.0, -2.0);
        cfg.kernel = KernelSpec::exponential(5.0, 1.0);
        cfg.scenario.kind = ScenarioKind::NoShort;
        cfg.scenario.X0 = 1.0;
        cfg.uzawa.delta = 0.1;
        cfg.uzawa.beta = 5e-4;
        cfg.uzawa.max_iters = 10000;
        cfg.paths = 10000;
    } else if (name == "stop-trading") {
        liquidation_signal(-20.0, -2.0);
        cfg.signal.sigma = 2.0;
        cfg.kernel = KernelSpec::power_law(2.0, 0.6);
        cfg.scenario.kind = ScenarioKind::StopTrading;
        cfg.scenario.X0 = 1.0;
        cfg.scenario.S_ref = 80.0;
        cfg.uzawa.delta = 0.75;
        cfg.uzawa.beta = 0.7;
        cfg.uzawa.max_iters = 5000;
        cfg.paths = 10000;
    } else if (name == "battery") {
        cfg.signal.theta = 1e5;
        cfg.signal.w = 20.0;
        cfg.signal.phi = 0.0;
        cfg.signal.kappa = 5e1;
        cfg.signal.xi = 2e4;
        cfg.signal.I0 = 2e3;
        cfg.kernel = KernelSpec::exponential(5.0, 1.0);
        cfg.scenario.kind = ScenarioKind::Battery;
        cfg.scenario.X0 = 0.0;
        cfg.scenario.u_max = 120.0;
        cfg.scenario.X_max = 20.0;
        cfg.uzawa.delta = 0.2;
        cfg.uzawa.beta = 1e-3;
        cfg.uzawa.max_iters = 10000;
        cfg.paths = 1000;
    } else {
        throw ConfigError("unknown bundled scenario '" + name + "'");
    }
    return cfg;
}

}  // namespace prop
