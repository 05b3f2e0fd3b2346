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
#include <vector>

#include "limbless/scenario.hpp"

namespace limbless {

struct SweepRow {
    double ratio = 1.0;
    double gamma = 0.0;
    double f = 0.0;
    double dx = 0.0;          // net centroid displacement along X
    Vec3 centroid_end = Vec3::Zero();
    double W_end = 0.0;
};

/// Forward gait run of the scenario as given.
Trajectory run_gait(const Scenario& s);

/// Cartesian sweep over ratio x gamma x f (ratio slowest). Rows come back in
/// grid order whatever the thread count.
std::vector<SweepRow> run_sweep(const Scenario& s, int threads = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace limbless
