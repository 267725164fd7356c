#include "fronttrack/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fronttrack/errors.hpp"
#include "fronttrack/flux_model.hpp"

namespace fronttrack {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw ParseError("trailing characters in number '" + s + "'", line);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("malformed number '" + s + "'", line);
    }
}

long parse_long(const std::string& s, int line) {
    double v = parse_double(s, line);
    if (v != std::floor(v))
        throw ParseError("expected an integer, got '" + s + "'", line);
    return static_cast<long>(v);
}

// numbers separated by commas and/or whitespace
std::vector<double> parse_numbers(const std::string& s, std::size_t want, int line) {
    std::vector<double> out;
    std::string token;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!token.empty()) {
                out.push_back(parse_double(token, line));
                token.clear();
            }
        } else {
            token += c;
        }
    }
    if (!token.empty()) out.push_back(parse_double(token, line));
    if (want != 0 && out.size() != want)
        throw ParseError("expected " + std::to_string(want) + " numbers, got " +
                             std::to_string(out.size()),
                         line);
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = trim(raw);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line);
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line);
        if (val.empty()) throw ParseError("empty value for '" + key + "'", line);
        if (!seen.insert(key).second)
            throw ParseError("duplicate key '" + key + "'", line);

        if (key == "model") {
            cfg.model_name = val;
        } else if (key == "K") {
            auto v = parse_numbers(val, 4, line);
            cfg.k = {v[0], v[1], v[2], v[3]};
            cfg.k_set = true;
        } else if (key == "L") {
            cfg.L = parse_double(val, line);
        } else if (key == "h") {
            cfg.h = parse_double(val, line);
        } else if (key == "t_final") {
            cfg.t_final = parse_double(val, line);
        } else if (key == "initial_data") {
            cfg.initial_data = val;
        } else if (key == "amplitude") {
            cfg.amplitude = parse_double(val, line);
        } else if (key == "cells") {
            cfg.cells = static_cast<int>(parse_long(val, line));
        } else if (key == "jump_x") {
            cfg.jump_x = parse_double(val, line);
        } else if (key == "jump_left") {
            auto v = parse_numbers(val, 2, line);
            cfg.jump_left = {v[0], v[1]};
        } else if (key == "jump_right") {
            auto v = parse_numbers(val, 2, line);
            cfg.jump_right = {v[0], v[1]};
        } else if (key == "breakpoints") {
            std::string item;
            std::istringstream items(val);
            while (std::getline(items, item, ';')) {
                item = trim(item);
                if (item.empty()) continue;
                auto v = parse_numbers(item, 3, line);
                cfg.breakpoints.emplace_back(v[0], Vec2{v[1], v[2]});
            }
            if (cfg.breakpoints.empty())
                throw ParseError("no breakpoints given", line);
        } else if (key == "initial_value") {
            auto v = parse_numbers(val, 2, line);
            cfg.initial_value = {v[0], v[1]};
        } else if (key == "snapshot_stride") {
            cfg.snapshot_stride = parse_double(val, line);
        } else if (key == "seed") {
            cfg.seed = static_cast<unsigned long>(parse_long(val, line));
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "front_cap") {
            cfg.front_cap = parse_long(val, line);
        } else if (key == "event_cap") {
            cfg.event_cap = parse_long(val, line);
        } else if (key == "sigma_drop") {
            cfg.sigma_drop = parse_double(val, line);
        } else if (key == "eps2") {
            cfg.eps2 = parse_double(val, line);
        } else if (key == "delta0") {
            cfg.delta0 = parse_double(val, line);
        } else if (key == "gamma") {
            cfg.gamma = parse_double(val, line);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_double(val, line);
        } else if (key == "c_star") {
            cfg.c_star = parse_double(val, line);
        } else if (key == "C_delta") {
            cfg.C_delta = parse_double(val, line);
        } else if (key == "c0") {
            cfg.c0 = parse_double(val, line);
        } else {
            throw ParseError("unknown key '" + key + "'", line);
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate(RunConfig& cfg) {
    make_model(cfg.model_name);  // throws ValidationError for unknown names
    if (!cfg.k_set) throw ValidationError("K", "required (four numbers)");
    if (!(cfg.L > 0.0)) throw ValidationError("L", "must be positive");
    if (!(cfg.h > 0.0)) throw ValidationError("h", "required and must be positive");
    if (!(cfg.t_final >= 0.0))
        throw ValidationError("t_final", "required and must be nonnegative");
    if (cfg.initial_data != "sine" && cfg.initial_data != "jump" &&
        cfg.initial_data != "bump" && cfg.initial_data != "breakpoints")
        throw ValidationError("initial_data",
                              "must be sine, jump, bump, or breakpoints");
    if (cfg.cells < 1) throw ValidationError("cells", "must be at least 1");
    if (!std::isfinite(cfg.amplitude))
        throw ValidationError("amplitude", "must be finite");
    if (cfg.jump_x < 0.0) cfg.jump_x = 0.5 * cfg.L;
    if (cfg.initial_data == "jump" && !(cfg.jump_x > 0.0 && cfg.jump_x < cfg.L))
        throw ValidationError("jump_x", "must lie strictly inside (0, L)");
    if (cfg.initial_data == "breakpoints") {
        double prev = 0.0;
        for (const auto& bp : cfg.breakpoints) {
            if (!(bp.first > prev))
                throw ValidationError("breakpoints",
                                      "positions must be strictly increasing");
            if (!(bp.first < cfg.L))
                throw ValidationError("breakpoints", "positions must lie in (0, L)");
            prev = bp.first;
        }
    }
    if (cfg.snapshot_stride < 0.0)
        throw ValidationError("snapshot_stride", "must be nonnegative");
    if (cfg.front_cap < 1) throw ValidationError("front_cap", "must be positive");
    if (cfg.event_cap < 1) throw ValidationError("event_cap", "must be positive");
    if (cfg.sigma_drop < 0.0)
        throw ValidationError("sigma_drop", "must be nonnegative");
    if (!(cfg.eps2 > 0.0)) throw ValidationError("eps2", "must be positive");
    auto check_override = [](const std::optional<double>& v, const char* name) {
        if (v && !(*v > 0.0)) throw ValidationError(name, "override must be positive");
    };
    check_override(cfg.delta0, "delta0");
    check_override(cfg.gamma, "gamma");
    check_override(cfg.epsilon, "epsilon");
    check_override(cfg.c_star, "c_star");
    check_override(cfg.C_delta, "C_delta");
    check_override(cfg.c0, "c0");
}

Piecewise build_initial_data(const RunConfig& cfg) {
    Piecewise pw;
    pw.length = cfg.L;
    if (cfg.initial_data == "jump") {
        pw.left = cfg.jump_left;
        pw.breaks.emplace_back(cfg.jump_x, cfg.jump_right);
        return pw;
    }
    if (cfg.initial_data == "breakpoints") {
        pw.left = cfg.initial_value;
        pw.breaks = cfg.breakpoints;
        return pw;
    }
    auto shape = [&](double x) -> Vec2 {
        double v;
        if (cfg.initial_data == "sine") {
            v = cfg.amplitude * std::sin(2.0 * M_PI * x / cfg.L);
        } else {  // bump, compactly supported on the middle 60% of the line
            double s = (x - 0.5 * cfg.L) / (0.3 * cfg.L);
            v = std::fabs(s) < 1.0
                    ? cfg.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s))
                    : 0.0;
        }
        return {v, v};
    };
    int n = cfg.cells;
    pw.left = shape((0.5) * cfg.L / n);
    for (int i = 1; i < n; ++i) {
        double edge = cfg.L * i / n;
        pw.breaks.emplace_back(edge, shape((i + 0.5) * cfg.L / n));
    }
    return pw;
}

}  // namespace fronttrack
