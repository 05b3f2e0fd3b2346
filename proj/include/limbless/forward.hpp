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

#include "limbless/assembly.hpp"

namespace limbless {

/// Stage weights of the generalised-tau scheme, with the convention
/// y_{n-tau} = (1 - tau) y_{n-1} + tau y_n.
///
/// Each step solves g(x_{n-tau_x}, w_n, u_{n-tau_u}) = 0 for x_n, where the
/// stage velocity w_n = (x_n - x_{n-1}) / dt. With tau_v > 0 the nodal
/// velocity follows from w_n = v_{n-tau_v}; with tau_v = 0 the stage velocity
/// is taken as v_n.
struct TauScheme {
    std::string name = "symplectic-euler";
    double x = 1.0;
    double v = 1.0;
    double lambda = 0.0;
    double mu = 0.0;
    double u = 0.0;

    /// Position update explicit in x (tau_x = 0).
    bool staggered() const { return x == 0.0; }
};

/// Presets: "symplectic-euler" (1,1,0,0,0), "staggered-euler" (0,0,1,1,1),
/// "midpoint" (all 0.5), "implicit-euler" (all 1). Throws ConfigError.
TauScheme tau_scheme(const std::string& name);
void validate(const TauScheme& s);

struct NewtonConfig {
    double tol = 1e-6;  // absolute, on the max-norm of g
    int max_iter = 20;
    int max_halvings = 4;
};

/// Converged stage of one step. K, G and B are empty unless tangents were requested.
/// A step split into substeps keeps its last substep here and the others in `earlier`.
struct StageCache {
    SparseMatrix K;
    SparseMatrix G;
    Matrix B;
    Vector x;   // stage position (full)
    Vector v;   // stage velocity (full)
    Vector u;   // stage control
    double h = 0.0;       // substep length
    double w_prev = 0.0;  // d u / d u_{n-1}
    double w_next = 0.0;  // d u / d u_n
    int iterations = 0;
    int substeps = 1;
    double residual = 0.0;
    std::vector<StageCache> earlier;
};

struct Trajectory {
    TauScheme scheme;
    double dt = 0.0;
    std::vector<double> t;
    std::vector<Vector> x;   // nodal positions, full length, n = 0..N
    std::vector<Vector> v;
    Matrix u;                // channels x (N + 1)
    std::vector<StageCache> stages;  // stages[n - 1] belongs to step n
    std::vector<Vec3> centroid;
    std::vector<double> U;   // stored energy
    std::vector<double> W;   // stored energy plus dissipated work

    int steps() const { return static_cast<int>(x.size()) - 1; }
};

struct SimulateOptions {
    bool cache_tangents = true;
    bool energies = true;
};

class ForwardSolver {
public:
    ForwardSolver(const Assembler& assembler, TauScheme scheme, NewtonConfig newton, double dt);

    const Assembler& assembler() const { return *as_; }
    const TauScheme& scheme() const { return scheme_; }
    const NewtonConfig& newton() const { return newton_; }
    double dt() const { return dt_; }

    /// Velocity with g(x, v, u) = 0, by Newton on G.
    Vector consistent_velocity(const Vector& x, const Vector& u) const;

    struct StepResult {
        Vector x, v;
        StageCache stage;
    };
    /// One step from (x_prev, v_prev) with endpoint controls u_prev, u_next.
    /// `step` is only used in diagnostics.
    StepResult step(const Vector& x_prev, const Vector& v_prev, const Vector& u_prev, const Vector& u_next,
                    int step_index, bool want_tangents) const;

    /// Integrates from x0 with the control table (channels x (N + 1)).
    Trajectory simulate(const Vector& x0, const Matrix& u_table, const SimulateOptions& opt = {}) const;

private:
    StepResult substep(const Vector& x_prev, const Vector& v_prev, const Vector& u_prev, const Vector& u_next,
                       double h, int step_index, bool want_tangents) const;

    const Assembler* as_;
    TauScheme scheme_;
    NewtonConfig newton_;
    double dt_;
};

}  // namespace limbless
