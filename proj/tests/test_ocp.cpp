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


#include <doctest.h>

#include <cmath>
#include <random>

#include "limbless/errors.hpp"
#include "limbless/oracle.hpp"
#include "limbless/scenario.hpp"

using namespace limbless;

namespace {

Scenario tiny(const std::string& scheme, double dt) {
    Scenario s = preset("undulatory-ocp-paper");
    s.mesh.length = 4.0;
    s.mesh.width = 1.0;
    s.mesh.nx = 4;
    s.mesh.ny = 1;
    s.mesh.nz = 1;
    s.layout = ControlLayout::element;
    s.T = 1.0;
    s.dt = dt;
    s.scheme = scheme;
    s.newton.tol = 1e-12;
    s.model.friction.mu_f = 0.5;
    s.model.friction.mu_b = 2.0;
    s.ocp.x_d = Vec3(1.0, 0.5, 0.5);
    return s;
}

Matrix random_controls(int rows, int cols, unsigned seed, double amp) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-amp, amp);
    Matrix u(rows, cols);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = d(rng);
    return u;
}

}  // namespace

TEST_CASE("objective at rest reduces to (T + 1) times the tracking cost") {
    const Scenario s = tiny("symplectic-euler", 0.1);
    Problem p(s);
    const Matrix u = Matrix::Zero(p.assembler().num_channels(), s.steps() + 1);
    const Trajectory tr = p.solver().simulate(p.initial_positions(), u);
    // centroid (2, .5, .5), target (1, .5, .5): 1/2 |e|^2 = 0.5
    CHECK(objective(tr, p.assembler(), s.ocp) == doctest::Approx((s.T + 1.0) * 0.5));
}

TEST_CASE("control residual is the exact gradient of the discrete objective") {
    for (const char* scheme : {"symplectic-euler", "midpoint", "implicit-euler"}) {
        const Scenario s = tiny(scheme, 0.1);
        Problem p(s);
        const Assembler& as = p.assembler();
        const Vector x0 = p.initial_positions();
        const int nc = as.num_channels(), N = s.steps();
        const Matrix u = random_controls(nc, N + 1, 3, 0.2);

        const Trajectory tr = p.solver().simulate(x0, u);
        const Matrix grad = s.dt * control_residual(tr, adjoint_sweep(tr, as, s.ocp), s.ocp);

        auto J = [&](const Vector& flat) {
            const Matrix uu = Eigen::Map<const Matrix>(flat.data(), nc, N + 1);
            return objective(p.solver().simulate(x0, uu), as, s.ocp);
        };
        const Vector flat = Eigen::Map<const Vector>(u.data(), u.size());
        const Vector fd = fd_gradient(J, flat, 1e-6);
        const Vector g = Eigen::Map<const Vector>(grad.data(), grad.size());
        INFO(scheme);
        CHECK((g - fd).norm() < 1e-6 * fd.norm());
        CHECK(g.dot(fd) / (g.norm() * fd.norm()) > 0.99999);
    }
}

TEST_CASE("gradient stays exact when steps are split") {
    Scenario s = tiny("symplectic-euler", 0.25);
    s.newton.tol = 1e-11;
    s.newton.max_iter = 5;
    Problem p(s);
    const Assembler& as = p.assembler();
    const Vector x0 = p.initial_positions();
    const int nc = as.num_channels(), N = s.steps();
    const Matrix u = random_controls(nc, N + 1, 11, 0.6);

    const Trajectory tr = p.solver().simulate(x0, u);
    int split = 0;
    for (const auto& st : tr.stages) split += st.substeps > 1;
    REQUIRE(split > 0);
    const Matrix grad = s.dt * control_residual(tr, adjoint_sweep(tr, as, s.ocp), s.ocp);

    auto J = [&](const Vector& flat) {
        const Matrix uu = Eigen::Map<const Matrix>(flat.data(), nc, N + 1);
        return objective(p.solver().simulate(x0, uu), as, s.ocp);
    };
    const Vector flat = Eigen::Map<const Vector>(u.data(), u.size());
    const Vector fd = fd_gradient(J, flat, 1e-6);
    const Vector g = Eigen::Map<const Vector>(grad.data(), grad.size());
    CHECK((g - fd).norm() < 1e-6 * fd.norm());
}

TEST_CASE("hamiltonian has one value per step") {
    const Scenario s = tiny("symplectic-euler", 0.1);
    Problem p(s);
    const Trajectory tr =
        p.solver().simulate(p.initial_positions(), random_controls(p.assembler().num_channels(), 11, 5, 0.1));
    const AdjointTrajectory adj = adjoint_sweep(tr, p.assembler(), s.ocp);
    CHECK(hamiltonian(tr, adj, p.assembler(), s.ocp).size() == 10);
    CHECK(adj.mu.size() == 11);
    CHECK(adj.lambda[0].isZero(0.0));
}

TEST_CASE("projection helpers") {
    const Matrix u = random_controls(3, 7, 9, 0.6);
    const Matrix c = clip(u, -0.3, 0.2);
    CHECK(clip(c, -0.3, 0.2) == c);
    CHECK(c.maxCoeff() <= 0.2);
    CHECK(c.minCoeff() >= -0.3);
    CHECK(quadrature_norm(Matrix::Constant(2, 5, 2.0), 0.1) == doctest::Approx(2.0));

    // first-order conditions at the bounds: r <= 0 at the upper one, r >= 0 at the lower one
    Matrix ub(1, 4), rb(1, 4);
    ub << 0.2, -0.3, 0.0, 0.2;
    rb << -5.0, 3.0, 0.0, 1e-3;
    const Matrix pg = projected_residual(ub, rb, -0.3, 0.2);
    CHECK(pg(0, 0) == 0.0);
    CHECK(pg(0, 1) == 0.0);
    CHECK(pg(0, 2) == 0.0);
    CHECK(pg(0, 3) == doctest::Approx(1e-3));
}

TEST_CASE("Barzilai-Borwein step examples") {
    Matrix du(1, 1), dd(1, 1), d(1, 1);
    du << 1.0;
    d << 1.0;
    dd << -2.0;
    CHECK(bb_step(du, dd, d, 10.0, 7.0) == doctest::Approx(0.5));
    dd << 2.0;
    // negative curvature estimate: geometric mean |du| / |dd|
    CHECK(bb_step(du, dd, d, 10.0, 7.0) == doctest::Approx(0.5));
    d << 4.0;
    CHECK(bb_step(du, dd, d, 0.4, 7.0) == doctest::Approx(0.1));
    dd << 0.0;
    CHECK(bb_step(du, dd, d, 0.4, 7.0) == 7.0);
}

TEST_CASE("sweep decreases J monotonically and ends at a KKT point") {
    Scenario s = tiny("symplectic-euler", 0.1);
    s.ocp.u_min = -0.1;
    s.ocp.u_max = 0.1;
    s.ocp.max_sweeps = 60;
    s.ocp.tol = 1e-6;
    Problem p(s);
    int calls = 0;
    const Matrix u0 = Matrix::Constant(p.assembler().num_channels(), s.steps() + 1, 0.01);
    const FbsmResult res = fbsm(p.solver(), p.initial_positions(), u0, s.ocp, [&](const FbsmIteration&) { ++calls; });
    REQUIRE(res.history.size() > 5);
    CHECK(calls == static_cast<int>(res.history.size()));
    for (size_t k = 1; k < res.history.size(); ++k) CHECK(res.history[k].J <= res.history[k - 1].J);
    CHECK(res.history.back().pg_norm < 0.2 * res.history.front().pg_norm);

    // sign conditions at active nodes, and the residual agrees with the final trajectory
    const Matrix r = control_residual(res.trajectory, adjoint_sweep(res.trajectory, p.assembler(), s.ocp), s.ocp);
    CHECK((r - res.r).norm() == 0.0);
    int active = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double ui = res.u.data()[i], ri = r.data()[i];
        if (ui == s.ocp.u_max) {
            ++active;
            CHECK(ri <= 1e-3);
        }
        if (ui == s.ocp.u_min) {
            ++active;
            CHECK(ri >= -1e-3);
        }
    }
    CHECK(active > 0);
}

TEST_CASE("configuration checks") {
    OcpConfig c;
    c.alpha = 0.0;
    c.u_min = 0.5;
    c.u_max = 0.2;
    try {
        validate(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems().size() == 2);
    }
    CHECK(theta_policy("bb") == ThetaPolicy::barzilai_borwein);
    CHECK(theta_policy("constant") == ThetaPolicy::constant);
    CHECK_THROWS_AS(theta_policy("armijo"), ConfigError);
}
