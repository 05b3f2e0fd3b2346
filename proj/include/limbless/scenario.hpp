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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "limbless/gaits.hpp"
#include "limbless/ocp.hpp"

namespace limbless {

enum class ConstraintKind {
    none,
    bottom,       // vertical DOFs of the whole bottom face
    ends,         // vertical DOFs of the bottom nodes in the end columns
    left_axial,   // axial DOFs of the X = 0 face
};

enum class ControlLayout { column, pair, element };

/// Everything needed to set up one run, as read from a JSON scenario file.
struct Scenario {
    std::string name = "custom";
    BoxMeshSpec mesh;
    PhysicalModel model;
    /// "all" or "ends": which bottom facets carry friction.
    std::string contact = "all";
    ConstraintKind constraint = ConstraintKind::bottom;
    int clamp_columns = 1;

    double T = 4.0;
    double dt = 0.05;
    std::string scheme = "symplectic-euler";
    NewtonConfig newton;   // tol is filled from 1e-8 mu B^2 unless given

    ControlLayout layout = ControlLayout::column;
    Polarity polarity = Polarity::antagonistic;

    std::optional<GaitSpec> gait;
    OcpConfig ocp;
    double u0 = 0.01;      // initial FBSM guess (constant)

    /// Sweep grid: anisotropy ratios, and optional gait wave numbers and
    /// frequencies (empty = keep the gait's value).
    std::vector<double> sweep_ratios{1.0, 2.0, 5.0, 10.0};
    std::vector<double> sweep_gamma;
    std::vector<double> sweep_f;
    /// Beam benchmark grid.
    std::vector<double> beam_nu{0.25, 0.5, 1.0};
    std::vector<int> beam_nx{5, 10, 20, 40};

    /// Write the full nodal state every k steps (0 = never).
    int state_stride = 0;

    int steps() const;
    std::vector<double> time_grid() const;
};

/// Built-in scenarios: undulatory-paper, crawling-paper, inching-paper (prescribed
/// gaits), undulatory-ocp-paper, crawling-ocp-paper, inching-ocp-paper,
/// scaled-paper (optimal control) and beam-paper. Throws ConfigError.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

/// Reads a scenario, starting from the preset named in "preset" (if any).
/// Unknown keys and out-of-range values are collected and reported together.
/// A top-level "meta" block (as written next to run outputs) is ignored.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);

/// Throws ConfigError listing every problem.
void validate(const Scenario& s);

/// Sets the substrate anisotropy for the scenario's gait: mu_l / mu_f with
/// mu_f = mu_b for undulation, mu_b / mu_f otherwise (mu_f and mu_l unchanged).
void apply_anisotropy(Scenario& s, double ratio);

/// Mesh, assembler and solver built from a scenario. Not copyable: the
/// assembler refers to the mesh owned here.
class Problem {
public:
    explicit Problem(Scenario scenario);
    Problem(const Problem&) = delete;
    Problem& operator=(const Problem&) = delete;

    const Scenario& scenario() const { return scenario_; }
    const Mesh& mesh() const { return mesh_; }
    const Assembler& assembler() const { return *assembler_; }
    const ForwardSolver& solver() const { return *solver_; }

    Vector initial_positions() const { return assembler_->reference_positions(); }
    /// Gait control table; throws ConfigError if the scenario has no gait.
    Matrix gait_controls() const;

private:
    Scenario scenario_;
    Mesh mesh_;
    std::unique_ptr<Assembler> assembler_;
    std::unique_ptr<ForwardSolver> solver_;
};

}  // namespace limbless
