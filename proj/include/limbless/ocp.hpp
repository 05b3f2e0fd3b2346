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

#include <functional>
#include <string>
#include <vector>

#include "limbless/forward.hpp"

namespace limbless {

enum class ThetaPolicy { barzilai_borwein, constant };

struct OcpConfig {
    Vec3 x_d = Vec3(1.0, 0.5, 0.5);
    double alpha = 1e-3;
    double u_min = -0.3;
    double u_max = 0.3;
    double tol = 1e-3;
    int max_sweeps = 100;
    double theta_max = 0.25;
    ThetaPolicy theta_policy = ThetaPolicy::barzilai_borwein;
    /// Consecutive rejected trial steps before the sweep gives up.
    int max_rejections = 12;
};

void validate(const OcpConfig& c);
ThetaPolicy theta_policy(const std::string& name);

/// Costates over the free DOFs. mu[n], n = 0..N; lambda[n] is the multiplier
/// of the step-n constraint (lambda[0] is zero and unused).
struct AdjointTrajectory {
    std::vector<Vector> mu;
    std::vector<Vector> lambda;
    std::vector<std::vector<Vector>> lambda_earlier;  // per step, matches StageCache::earlier
};

/// J = sum_n dt [r(x_stage) + q(u_stage)] + phi(x_N) with
/// r = 1/2 |Lambda x - x_d|^2, q = alpha/2 |u|^2, phi = r.
double objective(const Trajectory& tr, const Assembler& as, const OcpConfig& c);

/// Backward recursion of the discrete adjoint of the generalised-tau step:
///   (G_n + dt tau_x K_n)^T lambda_n = -[mu_n + dt tau_x grad r(x_stage)]
///   mu_{n-1} = mu_n + dt [grad r(x_stage) + K_n^T lambda_n],  mu_N = grad phi(x_N).
AdjointTrajectory adjoint_sweep(const Trajectory& tr, const Assembler& as, const OcpConfig& c);

/// Control residual (channels x (N + 1)); dt times column m is dJ/du_m.
Matrix control_residual(const Trajectory& tr, const AdjointTrajectory& adj, const OcpConfig& c);

/// H_n = r + q + lambda_n^T g + mu_n^T w_n at the stage of step n = 1..N,
/// w_n being the stage velocity. Entry n - 1 holds step n.
Vector hamiltonian(const Trajectory& tr, const AdjointTrajectory& adj, const Assembler& as, const OcpConfig& c);

/// sqrt(dt * sum of squares) over a control table.
double quadrature_norm(const Matrix& a, double dt);
Matrix clip(const Matrix& u, double lo, double hi);
/// u - clip(u - r): zero exactly at points satisfying the bound-constrained
/// first-order conditions.
Matrix projected_residual(const Matrix& u, const Matrix& r, double lo, double hi);

/// Stabilised Barzilai-Borwein step. Falls back to `fallback` when |dd| = 0.
double bb_step(const Matrix& du, const Matrix& dd, const Matrix& d, double theta_max, double fallback);

struct FbsmIteration {
    int k = 0;
    double J = 0.0;
    double r_norm = 0.0;          // quadrature norm of r
    double pg_norm = 0.0;         // quadrature norm of the projected residual
    double du_norm = 0.0;
    double theta = 0.0;
    int rejections = 0;
};

struct FbsmResult {
    Matrix u;
    Trajectory trajectory;
    AdjointTrajectory adjoint;
    Matrix r;
    std::vector<FbsmIteration> history;  // accepted iterates, k = 0 is the initial guess
    bool converged = false;
    std::string stop_reason;
};

using FbsmObserver = std::function<void(const FbsmIteration&)>;

FbsmResult fbsm(const ForwardSolver& solver, const Vector& x0, const Matrix& u0, const OcpConfig& c,
                const FbsmObserver& observer = {});

}  // namespace limbless
