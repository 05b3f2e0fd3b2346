/*
 Copyright 2026 The limbless Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/


#include "limbless/gaits.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "limbless/errors.hpp"

namespace limbless {

GaitKind gait_kind(const std::string& name) {
    if (name == "undulatory") return GaitKind::undulatory;
    if (name == "crawling") return GaitKind::crawling;
    if (name == "inching") return GaitKind::inching;
    throw ConfigError({"unknown gait '" + name + "'"});
}

std::string to_string(GaitKind kind) {
    switch (kind) {
        case GaitKind::undulatory: return "undulatory";
        case GaitKind::crawling: return "crawling";
        case GaitKind::inching: return "inching";
    }
    return "?";
}

Polarity gait_polarity(GaitKind kind) {
    return kind == GaitKind::crawling ? Polarity::synergistic : Polarity::antagonistic;
}

void validate(const GaitSpec& g) {
    std::vector<std::string> problems;
    if (!(std::abs(g.u_o) < 1.0)) problems.push_back("gait.u_o must satisfy |u_o| < 1");
    if (!(g.f > 0.0)) problems.push_back("gait.f must be positive");
    if (!(g.gamma > 0.0)) problems.push_back("gait.gamma must be positive");
    if (g.kind == GaitKind::inching && g.n_strokes < 1) problems.push_back("gait.n_strokes must be >= 1");
    if (!problems.empty()) throw ConfigError(problems);
}

std::pair<double, double> growth_at(const GaitSpec& g, double s, double t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    switch (g.kind) {
        case GaitKind::undulatory: {
            const double u = g.u_o * std::sin(two_pi * g.f * t + two_pi * g.gamma * s);
            return {u, -u};
        }
        case GaitKind::crawling: {
            const double u = g.u_o * std::sin(two_pi * g.f * t + two_pi * g.gamma * s + std::numbers::pi);
            return {u, u};
        }
        case GaitKind::inching: {
            const double u = g.u_o * std::abs(std::sin(g.n_strokes * std::numbers::pi * g.f * t)) *
                             std::sin(two_pi * g.gamma * s);
            return {-u, u};
        }
    }
    return {0.0, 0.0};
}

Matrix sample_to_channels(const GaitSpec& g, const ControlMap& map, const std::vector<double>& times) {
    validate(g);
    Matrix table(map.num_channels(), static_cast<Eigen::Index>(times.size()));
    for (int c = 0; c < map.num_channels(); ++c)
        for (size_t n = 0; n < times.size(); ++n)
            table(c, static_cast<Eigen::Index>(n)) = growth_at(g, map.channels[c].s, times[n]).first;
    return table;
}

}  // namespace limbless
