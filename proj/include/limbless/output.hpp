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

#include <json.hpp>

#include "limbless/errors.hpp"
#include "limbless/ocp.hpp"
#include "limbless/oracle.hpp"

namespace limbless {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest text with 17 significant digits ("%.17g").
std::string fmt(double v);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

/// t, x_cm, y_cm, z_cm, U, W
std::string trajectory_csv(const Trajectory& tr);
/// t, u_0 .. u_{m-1}
std::string controls_csv(const std::vector<double>& t, const Matrix& u);
/// k, J, r_norm, pg_norm, du_norm, theta, rejections
std::string convergence_csv(const std::vector<FbsmIteration>& history);
/// t, H; one row per step, at the step's end time.
std::string hamiltonian_csv(const std::vector<double>& t, const Vector& H);
/// step, t, node, x, y, z for every `stride`-th step.
std::string states_csv(const Trajectory& tr, int stride);
/// nx, nu, computed, analytic, rel_error, turning
std::string beam_csv(const std::vector<BeamResult>& rows);
/// check, max_rel_error
std::string audit_csv(const std::vector<AuditEntry>& rows);

/// {"error": {"kind", "message", ...}} with the fields of the concrete error.
nlohmann::json error_json(const std::exception& e);

}  // namespace limbless
