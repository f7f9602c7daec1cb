#include "sepm/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sepm {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw UsageError("config key \"" + key + "\" must be a number");
    return j.get<double>();
}

}  // namespace

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (sweep.x_min > sweep.x_max) throw UsageError("sweep: x_min > x_max");
    if (sweep.step <= 0.0) throw UsageError("sweep: step must be > 0");
}

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config root must be a JSON object");

    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "gamma") cfg.params.gamma = require_number(value, key);
        else if (key == "eta_d") cfg.params.eta_d = require_number(value, key);
        else if (key == "p_dark") cfg.params.p_dark = require_number(value, key);
        else if (key == "e_d") cfg.params.e_d = require_number(value, key);
        else if (key == "f") cfg.params.f = require_number(value, key);
        else if (key == "beta_db_per_km") cfg.params.beta_l = require_number(value, key);
        else if (key == "dark_mode") {
            if (!value.is_string()) throw UsageError("config key \"dark_mode\" must be a string");
            try {
                cfg.params.dark_mode = dark_mode_from_string(value.get<std::string>());
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        } else if (key == "include_bs_attack") {
            if (!value.is_boolean())
                throw UsageError("config key \"include_bs_attack\" must be a boolean");
            cfg.params.include_bs_attack = value.get<bool>();
        } else if (key == "seed") {
            if (!value.is_number_unsigned())
                throw UsageError("config key \"seed\" must be a nonnegative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "sweep") {
            if (!value.is_object()) throw UsageError("config key \"sweep\" must be an object");
            for (const auto& [skey, sval] : value.items()) {
                if (skey == "x_min") cfg.sweep.x_min = require_number(sval, "sweep.x_min");
                else if (skey == "x_max") cfg.sweep.x_max = require_number(sval, "sweep.x_max");
                else if (skey == "step") cfg.sweep.step = require_number(sval, "sweep.step");
                else throw UsageError("unknown config key \"sweep." + skey + "\"");
            }
        } else {
            throw UsageError("unknown config key \"" + key + "\"");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

}  // namespace sepm
