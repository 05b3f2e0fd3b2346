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


#pragma once

#include <string>
#include <utility>

#include "limbless/assembly.hpp"

namespace limbless {

enum class GaitKind { undulatory, crawling, inching };

struct GaitSpec {
    GaitKind kind = GaitKind::undulatory;
    double u_o = 0.3;
    double f = 1.0;
    double gamma = 1.0;
    int n_strokes = 4;   // inching only
};

GaitKind gait_kind(const std::string& name);
std::string to_string(GaitKind kind);
/// Antagonistic for undulatory and inching, synergistic for crawling.
Polarity gait_polarity(GaitKind kind);
/// Throws ConfigError listing every violated bound.
void validate(const GaitSpec& g);

/// Growth of the (ventral, dorsal) chambers at normalised arclength s and time t.
std::pair<double, double> growth_at(const GaitSpec& g, double s, double t);

/// Control table (channels x times.size()). Each channel gets the ventral
/// growth at its s; the map's polarity supplies the dorsal value.
Matrix sample_to_channels(const GaitSpec& g, const ControlMap& map, const std::vector<double>& times);

}  // namespace limbless
