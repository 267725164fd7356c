#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fronttrack/linalg.hpp"
#include "fronttrack/piecewise.hpp"

namespace fronttrack {

// Parsed `key = value` run description. Parsing is purely textual; validate()
// checks ranges and cross-field consistency and fills derived defaults.
struct RunConfig {
    std::string model_name = "decoupled_burgers";
    Mat2 k{0.0, 0.0, 0.0, 0.0};
    bool k_set = false;
    double L = 1.0;
    double h = 0.0;          // required
    double t_final = -1.0;   // required
    std::string initial_data = "sine";
    double amplitude = 0.02;
    int cells = 100;
    double jump_x = -1.0;    // resolved to L/2 by validate()
    Vec2 jump_left{0.0, 0.0};
    Vec2 jump_right{0.0, 0.0};
    std::vector<std::pair<double, Vec2>> breakpoints;
    Vec2 initial_value{0.0, 0.0};
    double snapshot_stride = 0.0;
    unsigned long seed = 0;
    std::string output_dir = "out";
    long front_cap = 100000;
    long event_cap = 2000000;
    double sigma_drop = 1e-11;
    double eps2 = 0.3;
    // optional functional-parameter overrides
    std::optional<double> delta0, gamma, epsilon, c_star, C_delta, c0;
};

// Grammar: one `key = value` per line, `#` starts a comment, blank lines
// allowed. Unknown or duplicate keys and malformed numbers raise ParseError
// with the line number.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

// Range and consistency checks; throws ValidationError naming the field.
void validate(RunConfig& cfg);

// Piecewise-constant initial data for a validated config. sine and bump are
// sampled at the `cells` cell midpoints; jump and breakpoints are exact.
Piecewise build_initial_data(const RunConfig& cfg);

}  // namespace fronttrack
