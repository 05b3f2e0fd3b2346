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


#include "limbless/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "limbless/errors.hpp"

namespace limbless {

namespace {

using SparseLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

double running_cost(const Vec3& cm, const Vec3& x_d) { return 0.5 * (cm - x_d).squaredNorm(); }

/// grad_x of 1/2 |Lambda x - x_d|^2 restricted to the free DOFs.
Vector tracking_gradient(const Assembler& as, const Vector& x, const Vec3& x_d) {
    const Vec3 e = as.centroid(x) - x_d;
    const Vector full = as.centroid_operator().transpose() * e;
    return as.dofs().restrict_to_free(full);
}

}  // namespace

void validate(const OcpConfig& c) {
    std::vector<std::string> problems;
    if (!(c.alpha > 0.0)) problems.push_back("ocp.alpha must be positive");
    if (!(c.u_min < c.u_max)) problems.push_back("ocp.u_min must be below ocp.u_max");
    if (!(c.u_min > -1.0)) problems.push_back("ocp.u_min must exceed -1 (growth validity)");
    if (!(c.tol > 0.0)) problems.push_back("ocp.tol must be positive");
    if (c.max_sweeps < 0) problems.push_back("ocp.max_sweeps must be >= 0");
    if (!(c.theta_max > 0.0)) problems.push_back("ocp.theta_max must be positive");
    if (!problems.empty()) throw ConfigError(problems);
}

ThetaPolicy theta_policy(const std::string& name) {
    if (name == "bb" || name == "barzilai-borwein") return ThetaPolicy::barzilai_borwein;
    if (name == "constant") return ThetaPolicy::constant;
    throw ConfigError({"unknown step policy '" + name + "'"});
}

double objective(const Trajectory& tr, const Assembler& as, const OcpConfig& c) {
    const int N = tr.steps();
    double J = 0.0;
    for (int n = 1; n <= N; ++n) {
        const StageCache& st = tr.stages[n - 1];
        const double ts = tr.scheme.x, tu = tr.scheme.u;
        const Vector xs = st.x.size() ? st.x : Vector((1.0 - ts) * tr.x[n - 1] + ts * tr.x[n]);
        const Vector us = (1.0 - tu) * tr.u.col(n - 1) + tu * tr.u.col(n);
        J += tr.dt * (running_cost(as.centroid(xs), c.x_d) + 0.5 * c.alpha * us.squaredNorm());
    }
    return J + running_cost(tr.centroid.back(), c.x_d);
}

namespace {

// Backward step through one stage. c weights the running cost attached to it.
Vector stage_adjoint(const StageCache& st, const Vector& mu_next, const Vector& grad, double c, double tx,
                     SparseLU& lu, int n) {
    if (st.K.size() == 0) throw Error("adjoint_sweep: trajectory has no cached tangents");
    const SparseMatrix At = SparseMatrix(st.G + (st.h * tx) * st.K).transpose();
    lu.compute(At);
    if (lu.info() != Eigen::Success) throw SingularMatrixError("adjoint: singular stage matrix", n);
    Vector lambda = lu.solve(Vector(-(mu_next + (c * tx) * grad)));
    if (!lambda.allFinite()) throw SingularMatrixError("adjoint: non-finite costate", n);
    return lambda;
}

}  // namespace

AdjointTrajectory adjoint_sweep(const Trajectory& tr, const Assembler& as, const OcpConfig& c) {
    const int N = tr.steps();
    const double dt = tr.dt, tx = tr.scheme.x;
    AdjointTrajectory adj;
    adj.mu.assign(N + 1, Vector());
    adj.lambda.assign(N + 1, Vector::Zero(as.num_free()));
    adj.lambda_earlier.assign(N + 1, {});
    adj.mu[N] = tracking_gradient(as, tr.x[N], c.x_d);
    SparseLU lu;
    for (int n = N; n >= 1; --n) {
        const StageCache& st = tr.stages[n - 1];
        const Vector grad = tracking_gradient(as, st.x, c.x_d);
        adj.lambda[n] = stage_adjoint(st, adj.mu[n], grad, dt, tx, lu, n);
        Vector mu = adj.mu[n] + dt * grad + st.h * (st.K.transpose() * adj.lambda[n]);
        auto& sub = adj.lambda_earlier[n];
        sub.resize(st.earlier.size());
        for (size_t k = st.earlier.size(); k-- > 0;) {
            const StageCache& e = st.earlier[k];
            sub[k] = stage_adjoint(e, mu, grad, 0.0, tx, lu, n);
            mu += e.h * (e.K.transpose() * sub[k]);
        }
        adj.mu[n - 1] = std::move(mu);
    }
    return adj;
}

Matrix control_residual(const Trajectory& tr, const AdjointTrajectory& adj, const OcpConfig& c) {
    const int N = tr.steps();
    const double tu = tr.scheme.u, dt = tr.dt;
    Matrix r = Matrix::Zero(tr.u.rows(), N + 1);
    auto add = [&](int n, const StageCache& st, const Vector& lambda) {
        const Vector b = (st.h / dt) * (st.B.transpose() * lambda);
        r.col(n - 1) += st.w_prev * b;
        r.col(n) += st.w_next * b;
    };
    for (int n = 1; n <= N; ++n) {
        const StageCache& st = tr.stages[n - 1];
        const Vector us = (1.0 - tu) * tr.u.col(n - 1) + tu * tr.u.col(n);
        r.col(n - 1) += (1.0 - tu) * c.alpha * us;
        r.col(n) += tu * c.alpha * us;
        add(n, st, adj.lambda[n]);
        for (size_t k = 0; k < st.earlier.size(); ++k) add(n, st.earlier[k], adj.lambda_earlier[n][k]);
    }
    return r;
}

Vector hamiltonian(const Trajectory& tr, const AdjointTrajectory& adj, const Assembler& as, const OcpConfig& c) {
    const int N = tr.steps();
    const double tx = tr.scheme.x;
    Vector H(N);
    for (int n = 1; n <= N; ++n) {
        const StageCache& st = tr.stages[n - 1];
        const Vector g = as.residual(st.x, st.v, st.u);
        const Vector before = adj.mu[n] + tr.dt * tracking_gradient(as, st.x, c.x_d) +
                              st.h * (st.K.transpose() * adj.lambda[n]);
        const Vector mu = tx * before + (1.0 - tx) * adj.mu[n];
        H[n - 1] = running_cost(as.centroid(st.x), c.x_d) + 0.5 * c.alpha * st.u.squaredNorm() +
                   adj.lambda[n].dot(g) + mu.dot(as.dofs().restrict_to_free(st.v));
    }
    return H;
}

double quadrature_norm(const Matrix& a, double dt) { return std::sqrt(dt * a.squaredNorm()); }

Matrix clip(const Matrix& u, double lo, double hi) { return u.cwiseMax(lo).cwiseMin(hi); }

Matrix projected_residual(const Matrix& u, const Matrix& r, double lo, double hi) {
    return u - clip(u - r, lo, hi);
}

double bb_step(const Matrix& du, const Matrix& dd, const Matrix& d, double theta_max, double fallback) {
    const double dd2 = dd.squaredNorm();
    if (dd2 == 0.0) return fallback;
    const double cap = theta_max / d.lpNorm<Eigen::Infinity>();
    const double theta_s = -(du.cwiseProduct(dd).sum()) / dd2;
    if (theta_s > 0.0) return std::min(theta_s, cap);
    // Geometric mean of the two secant step lengths.
    return std::min(du.norm() / std::sqrt(dd2), cap);
}

FbsmResult fbsm(const ForwardSolver& solver, const Vector& x0, const Matrix& u0, const OcpConfig& c,
                const FbsmObserver& observer) {
    validate(c);
    const Assembler& as = solver.assembler();
    const double dt = solver.dt();

    FbsmResult res;
    res.u = clip(u0, c.u_min, c.u_max);
    res.trajectory = solver.simulate(x0, res.u);
    double J = objective(res.trajectory, as, c);
    res.adjoint = adjoint_sweep(res.trajectory, as, c);
    res.r = control_residual(res.trajectory, res.adjoint, c);

    FbsmIteration it0;
    it0.J = J;
    it0.r_norm = quadrature_norm(res.r, dt);
    it0.pg_norm = quadrature_norm(projected_residual(res.u, res.r, c.u_min, c.u_max), dt);
    res.history.push_back(it0);
    if (observer) observer(it0);

    const double r0_inf = res.r.lpNorm<Eigen::Infinity>();
    const double constant_theta = r0_inf > 0.0 ? 1.0 / r0_inf : 1.0;
    double theta = std::min(constant_theta, c.theta_max / std::max(r0_inf, std::numeric_limits<double>::min()));
    if (it0.pg_norm <= c.tol) {
        res.converged = true;
        res.stop_reason = "initial guess is stationary";
        return res;
    }

    int rejections = 0;
    for (int k = 1; k <= c.max_sweeps;) {
        const Matrix d = -res.r;
        const Matrix u_trial = clip(res.u + theta * d, c.u_min, c.u_max);
        Trajectory trial;
        double J_trial = std::numeric_limits<double>::infinity();
        try {
            trial = solver.simulate(x0, u_trial);
            J_trial = objective(trial, as, c);
        } catch (const Error&) {
            J_trial = std::numeric_limits<double>::infinity();
        }
        if (!(J_trial <= J + 1e-12 * std::abs(J))) {
            theta *= 0.5;
            if (++rejections > c.max_rejections) {
                res.stop_reason = "line search stalled";
                return res;
            }
            continue;
        }

        AdjointTrajectory adj = adjoint_sweep(trial, as, c);
        Matrix r = control_residual(trial, adj, c);
        const Matrix du = u_trial - res.u;
        const Matrix dd = -r - d;

        FbsmIteration rec;
        rec.k = k;
        rec.J = J_trial;
        rec.r_norm = quadrature_norm(r, dt);
        rec.pg_norm = quadrature_norm(projected_residual(u_trial, r, c.u_min, c.u_max), dt);
        rec.du_norm = quadrature_norm(du, dt);
        rec.theta = theta;
        rec.rejections = rejections;

        res.u = u_trial;
        res.trajectory = std::move(trial);
        res.adjoint = std::move(adj);
        res.r = std::move(r);
        J = J_trial;
        res.history.push_back(rec);
        if (observer) observer(rec);

        if (std::max(rec.pg_norm, rec.du_norm) <= c.tol) {
            res.converged = true;
            res.stop_reason = "tolerance reached";
            return res;
        }
        theta = c.theta_policy == ThetaPolicy::constant
                    ? std::min(constant_theta, c.theta_max / (-res.r).lpNorm<Eigen::Infinity>())
                    : bb_step(du, dd, -res.r, c.theta_max, constant_theta);
        rejections = 0;
        ++k;
    }
    res.stop_reason = "max sweeps reached";
    return res;
}

}  // namespace limbless
