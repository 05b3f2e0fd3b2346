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


#include "limbless/forward.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "limbless/errors.hpp"

namespace limbless {

namespace {

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

double max_abs(const Vector& g) { return g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0; }

Vector solve_or_throw(SparseLU& lu, const SparseMatrix& A, const Vector& b, const char* what, int step) {
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw SingularMatrixError(std::string(what) + ": factorisation failed", step);
    Vector x = lu.solve(b);
    if (!x.allFinite()) throw SingularMatrixError(std::string(what) + ": non-finite solution", step);
    return x;
}

}  // namespace

TauScheme tau_scheme(const std::string& name) {
    if (name == "symplectic-euler") return {name, 1.0, 1.0, 0.0, 0.0, 0.0};
    if (name == "staggered-euler") return {name, 0.0, 0.0, 1.0, 1.0, 1.0};
    if (name == "midpoint") return {name, 0.5, 0.5, 0.5, 0.5, 0.5};
    if (name == "implicit-euler") return {name, 1.0, 1.0, 1.0, 1.0, 1.0};
    throw ConfigError({"unknown time scheme '" + name + "'"});
}

void validate(const TauScheme& s) {
    std::vector<std::string> problems;
    for (double t : {s.x, s.v, s.lambda, s.mu, s.u})
        if (!(t >= 0.0 && t <= 1.0)) problems.push_back("tau weights must lie in [0, 1]");
    if (!problems.empty()) throw ConfigError({problems.front()});
}

ForwardSolver::ForwardSolver(const Assembler& assembler, TauScheme scheme, NewtonConfig newton, double dt)
    : as_(&assembler), scheme_(std::move(scheme)), newton_(newton), dt_(dt) {
    validate(scheme_);
    std::vector<std::string> problems;
    if (!(dt_ > 0.0)) problems.push_back("time step must be positive");
    if (!(newton_.tol > 0.0)) problems.push_back("Newton tolerance must be positive");
    if (newton_.max_iter < 1) problems.push_back("Newton max_iter must be >= 1");
    if (newton_.max_halvings < 0) problems.push_back("Newton max_halvings must be >= 0");
    if (!problems.empty()) throw ConfigError(problems);
}

Vector ForwardSolver::consistent_velocity(const Vector& x, const Vector& u) const {
    const DofMap& dofs = as_->dofs();
    Vector v = Vector::Zero(x.size());
    SparseLU lu;
    double res = 0.0;
    for (int it = 0; it < newton_.max_iter; ++it) {
        const AssembledSystem sys = as_->assemble(x, v, u, {true, false, true, false});
        res = max_abs(sys.g);
        if (res < newton_.tol) return v;
        dofs.add_free(v, solve_or_throw(lu, sys.G, -sys.g, "initial velocity", 0));
    }
    if (max_abs(as_->residual(x, v, u)) < newton_.tol) return v;
    throw ConvergenceError("initial velocity did not converge", 0, res);
}

ForwardSolver::StepResult ForwardSolver::substep(const Vector& x_prev, const Vector& v_prev, const Vector& u_prev,
                                                 const Vector& u_next, double h, int step_index,
                                                 bool want_tangents) const {
    const DofMap& dofs = as_->dofs();
    const double tx = scheme_.x;
    const Vector u_s = (1.0 - scheme_.u) * u_prev + scheme_.u * u_next;

    auto stage = [&](const Vector& xn, Vector& xs, Vector& ws) {
        xs = (1.0 - tx) * x_prev + tx * xn;
        ws = (xn - x_prev) / h;
    };

    Vector xn = x_prev;
    Vector xs, ws;
    SparseLU lu;
    double res = 0.0;
    int it = 0;
    bool converged = false;
    AssembledSystem sys;
    for (; it <= newton_.max_iter; ++it) {
        stage(xn, xs, ws);
        sys = as_->assemble(xs, ws, u_s, {true, true, true, false});
        res = max_abs(sys.g);
        if (res < newton_.tol) {
            converged = true;
            break;
        }
        if (it == newton_.max_iter) break;
        const SparseMatrix Jac = tx * sys.K + sys.G / h;
        const Vector dx = solve_or_throw(lu, Jac, -sys.g, "Newton step", step_index);
        // Backtrack on the residual norm; inverted trial states count as failures.
        double alpha = 1.0;
        Vector trial;
        for (int ls = 0; ls < 8; ++ls, alpha *= 0.5) {
            trial = xn;
            dofs.add_free(trial, alpha * dx);
            Vector ts, tw;
            stage(trial, ts, tw);
            try {
                if (max_abs(as_->residual(ts, tw, u_s)) < res) break;
            } catch (const ElementInversionError&) {
                continue;
            }
        }
        xn = trial;
    }
    if (!converged) {
        std::ostringstream os;
        os << "Newton did not converge at step " << step_index << " (|g| = " << res << ")";
        throw ConvergenceError(os.str(), step_index, res);
    }

    StepResult out;
    out.x = xn;
    out.v = scheme_.v > 0.0 ? Vector((ws - (1.0 - scheme_.v) * v_prev) / scheme_.v) : ws;
    out.stage.iterations = it;
    out.stage.residual = res;
    out.stage.x = xs;
    out.stage.v = ws;
    out.stage.u = u_s;
    out.stage.h = h;
    if (want_tangents) {
        const AssembledSystem full = as_->assemble(xs, ws, u_s, {false, true, true, true});
        out.stage.K = full.K;
        out.stage.G = full.G;
        out.stage.B = full.B;
    }
    return out;
}

ForwardSolver::StepResult ForwardSolver::step(const Vector& x_prev, const Vector& v_prev, const Vector& u_prev,
                                              const Vector& u_next, int step_index, bool want_tangents) const {
    for (int level = 0;; ++level) {
        const int parts = 1 << level;
        try {
            Vector x = x_prev, v = v_prev;
            StepResult r;
            std::vector<StageCache> earlier;
            for (int k = 0; k < parts; ++k) {
                const double a0 = static_cast<double>(k) / parts, a1 = static_cast<double>(k + 1) / parts;
                const Vector ua = (1.0 - a0) * u_prev + a0 * u_next;
                const Vector ub = (1.0 - a1) * u_prev + a1 * u_next;
                r = substep(x, v, ua, ub, dt_ / parts, step_index, want_tangents);
                r.stage.w_next = (1.0 - scheme_.u) * a0 + scheme_.u * a1;
                r.stage.w_prev = 1.0 - r.stage.w_next;
                x = r.x;
                v = r.v;
                if (want_tangents && k < parts - 1) earlier.push_back(std::move(r.stage));
            }
            r.stage.substeps = parts;
            r.stage.earlier = std::move(earlier);
            return r;
        } catch (const ConvergenceError&) {
            if (level >= newton_.max_halvings) throw;
        } catch (const ElementInversionError& e) {
            if (level >= newton_.max_halvings) {
                std::ostringstream os;
                os << "step " << step_index << ": " << e.what();
                throw ConvergenceError(os.str(), step_index, std::nan(""));
            }
        } catch (const SingularMatrixError&) {
            if (level >= newton_.max_halvings) throw;
        }
    }
}

Trajectory ForwardSolver::simulate(const Vector& x0, const Matrix& u_table, const SimulateOptions& opt) const {
    if (u_table.rows() != as_->num_channels()) throw ConfigError({"control table has the wrong number of channels"});
    if (u_table.cols() < 2) throw ConfigError({"control table needs at least two time nodes"});
    const int N = static_cast<int>(u_table.cols()) - 1;

    Trajectory tr;
    tr.scheme = scheme_;
    tr.dt = dt_;
    tr.u = u_table;
    tr.t.resize(N + 1);
    for (int n = 0; n <= N; ++n) tr.t[n] = n * dt_;
    tr.x.reserve(N + 1);
    tr.v.reserve(N + 1);
    tr.x.push_back(x0);
    tr.v.push_back(consistent_velocity(x0, u_table.col(0)));
    tr.centroid.push_back(as_->centroid(x0));
    if (opt.energies) {
        tr.U.push_back(as_->internal_energy(x0, u_table.col(0)));
        tr.W.push_back(tr.U.back());
    }
    double dissipated = 0.0;
    for (int n = 1; n <= N; ++n) {
        StepResult r = step(tr.x[n - 1], tr.v[n - 1], u_table.col(n - 1), u_table.col(n), n, opt.cache_tangents);
        if (opt.energies) {
            dissipated += dt_ * as_->dissipation_rate(r.stage.x, r.stage.v);
            tr.U.push_back(as_->internal_energy(r.x, u_table.col(n)));
            tr.W.push_back(tr.U.back() + dissipated);
        }
        tr.x.push_back(std::move(r.x));
        tr.v.push_back(std::move(r.v));
        tr.centroid.push_back(as_->centroid(tr.x.back()));
        tr.stages.push_back(std::move(r.stage));
    }
    return tr;
}

}  // namespace limbless
