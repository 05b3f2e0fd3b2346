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


#include "limbless/oracle.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace limbless {

double BeamCase::u_o() const { return 2.0 * std::numbers::pi * nu * B / (3.0 * L); }
double BeamCase::kappa() const { return 3.0 * u_o() / B; }

double analytic_centroid(const BeamCase& c) {
    const double k = c.kappa();
    const double s = std::sin(0.5 * k * c.L);
    return 2.0 / (k * k * c.L) * s * s;
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double eps) {
    Vector g(x.size());
    Vector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + eps;
        const double fp = f(xp);
        xp[i] = x[i] - eps;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

namespace {

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

Mat3 random_mat(std::mt19937& rng, double amp) {
    std::uniform_real_distribution<double> d(-amp, amp);
    Mat3 H;
    for (int i = 0; i < 9; ++i) H(i / 3, i % 3) = d(rng);
    return H;
}

}  // namespace

std::vector<AuditEntry> derivative_audit(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double h = 1e-6;
    std::vector<AuditEntry> out;

    BoxMeshSpec spec;
    spec.length = 2.0;
    spec.width = 1.0;
    spec.nx = 2;
    spec.ny = 1;
    spec.nz = 1;
    spec.pair_chambers = false;
    const Mesh m = build_box_mesh(spec);
    PhysicalModel pm;
    pm.friction.mu_l = 0.8;
    pm.friction.mu_f = 0.3;
    pm.friction.mu_b = 2.0;
    pm.viscous.mu_o = 0.05;
    const Assembler as(m, pm, per_element_controls(m), DofMap(m.num_dofs(), {}));

    Vector x = as.reference_positions();
    Vector v(x.size());
    Vector u(as.num_channels());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] += 0.05 * unit(rng);
        v[i] = 0.5 * unit(rng);
    }
    for (Eigen::Index c = 0; c < u.size(); ++c) u[c] = 0.3 * unit(rng);

    const AssembledSystem sys = as.assemble(x, v, u, {true, true, true, true});
    const Matrix K(sys.K), G(sys.G);
    double ek = 0.0, eg = 0.0, eb = 0.0;
    for (int j = 0; j < as.num_free(); ++j) {
        Vector xp = x, xm = x, vp = v, vm = v;
        xp[j] += h;
        xm[j] -= h;
        vp[j] += h;
        vm[j] -= h;
        ek = std::max(ek, ((as.residual(xp, v, u) - as.residual(xm, v, u)) / (2 * h) - K.col(j)).lpNorm<Eigen::Infinity>());
        eg = std::max(eg, ((as.residual(x, vp, u) - as.residual(x, vm, u)) / (2 * h) - G.col(j)).lpNorm<Eigen::Infinity>());
    }
    for (int c = 0; c < as.num_channels(); ++c) {
        Vector up = u, um = u;
        up[c] += h;
        um[c] -= h;
        eb = std::max(eb, ((as.residual(x, v, up) - as.residual(x, v, um)) / (2 * h) - sys.B.col(c)).lpNorm<Eigen::Infinity>());
    }
    out.push_back({"K columns", rel(ek, K.lpNorm<Eigen::Infinity>())});
    out.push_back({"G columns", rel(eg, G.lpNorm<Eigen::Infinity>())});
    out.push_back({"B columns", rel(eb, sys.B.lpNorm<Eigen::Infinity>())});

    const Vector zero = Vector::Zero(x.size());
    const Vector g_int = as.residual(x, zero, u);
    const Vector g_energy = fd_gradient([&](const Vector& y) { return as.internal_energy(y, u); }, x, h);
    out.push_back({"residual vs stored energy", rel((g_energy - g_int).lpNorm<Eigen::Infinity>(),
                                                    g_int.lpNorm<Eigen::Infinity>())});

    const MaterialParams& mp = pm.material;
    const Vec3 fiber = Vec3::UnitX();
    const Mat3 F = Mat3::Identity() + random_mat(rng, 0.2);
    const double ug = 0.3 * unit(rng);
    const GrowthPoint gp = growth_tensors(ug, fiber);
    const StressState st = neo_hookean(F, gp, mp);
    auto energy = [&](const Mat3& Fx, double uu) {
        const GrowthPoint g = growth_tensors(uu, fiber);
        return g.Jg * neo_hookean_energy(Fx * g.Fg_inv, mp);
    };
    Mat3 dpsi;
    for (int k = 0; k < 9; ++k) {
        Mat3 Fp = F, Fm = F;
        Fp(k / 3, k % 3) += h;
        Fm(k / 3, k % 3) -= h;
        dpsi(k / 3, k % 3) = (energy(Fp, ug) - energy(Fm, ug)) / (2 * h);
    }
    out.push_back({"stress vs energy", rel((dpsi - st.P).cwiseAbs().maxCoeff(), st.P.cwiseAbs().maxCoeff())});

    const Mat3 H = random_mat(rng, 1.0);
    auto pe = [&](const Mat3& Fe) {
        return Mat3(mp.mu * Fe + (mp.lambda * std::log(Fe.determinant()) - mp.mu) * Fe.inverse().transpose());
    };
    const Mat3 dpe = (pe(st.Fe + h * H) - pe(st.Fe - h * H)) / (2 * h);
    const Mat3 tan = elastic_tangent_apply(st, mp, H);
    out.push_back({"tangent vs stress", rel((dpe - tan).cwiseAbs().maxCoeff(), tan.cwiseAbs().maxCoeff())});

    const ControlDerivatives cd = control_derivatives(st, gp, mp);
    const Mat3 dpu =
        (neo_hookean(F, growth_tensors(ug + h, fiber), mp).P - neo_hookean(F, growth_tensors(ug - h, fiber), mp).P) /
        (2 * h);
    out.push_back({"control tangent vs stress", rel((dpu - cd.dP_du).cwiseAbs().maxCoeff(), cd.dP_du.cwiseAbs().maxCoeff())});

    const double ang = std::numbers::pi * unit(rng);
    auto tau_at = [](double a) { return Vec3(std::cos(a), std::sin(a), 0.0); };
    const Vec3 tau = tau_at(ang);
    const Vec3 vt(unit(rng), unit(rng), unit(rng));
    const Traction tr = traction(vt, tau, pm.friction);
    Mat3 dv;
    for (int k = 0; k < 3; ++k) {
        Vec3 vp = vt, vm = vt;
        vp[k] += h;
        vm[k] -= h;
        dv.col(k) = (traction(vp, tau, pm.friction).t - traction(vm, tau, pm.friction).t) / (2 * h);
    }
    // the tangent only moves along the unit circle in the substrate plane
    const Vec3 dtau_fd =
        (traction(vt, tau_at(ang + h), pm.friction).t - traction(vt, tau_at(ang - h), pm.friction).t) / (2 * h);
    const Vec3 dtau = tr.d_dtau * Vec3(-std::sin(ang), std::cos(ang), 0.0);
    const double e_t = std::max((dv - tr.d_dv).cwiseAbs().maxCoeff() / tr.d_dv.cwiseAbs().maxCoeff(),
                                (dtau_fd - dtau).cwiseAbs().maxCoeff() / dtau.cwiseAbs().maxCoeff());
    out.push_back({"traction derivatives", e_t});
    return out;
}

namespace {

// Signed turning of the cross-section centreline in the X-Z plane.
double turning_angle(const Mesh& m, const Vector& x) {
    std::vector<Vec3> c(m.nx + 1, Vec3::Zero());
    for (int i = 0; i <= m.nx; ++i) {
        for (int k = 0; k <= m.nz; ++k)
            for (int j = 0; j <= m.ny; ++j) c[i] += x.segment<3>(3 * m.node_index(i, j, k));
        c[i] /= (m.ny + 1) * (m.nz + 1);
    }
    double total = 0.0;
    for (int i = 1; i < m.nx; ++i) {
        const Vec3 a = c[i] - c[i - 1], b = c[i + 1] - c[i];
        total += std::atan2(a.x() * b.z() - a.z() * b.x(), a.x() * b.x() + a.z() * b.z());
    }
    return total;
}

}  // namespace

BeamResult run_beam_case(const Scenario& base, int nx, double nu) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario s = base;
    s.mesh.nx = nx;
    s.gait.reset();
    Problem p(s);

    BeamCase bc;
    bc.L = s.mesh.length;
    bc.B = s.mesh.width;
    bc.nu = nu;

    const std::vector<double> t = s.time_grid();
    const int nc = p.assembler().num_channels();
    Matrix u(nc, static_cast<Eigen::Index>(t.size()));
    for (size_t n = 0; n < t.size(); ++n) u.col(n).setConstant(bc.u_o() * t[n] / s.T);

    SimulateOptions opt;
    opt.cache_tangents = false;
    opt.energies = false;
    const Trajectory tr = p.solver().simulate(p.initial_positions(), u, opt);

    BeamResult r;
    r.nx = nx;
    r.nu = nu;
    r.computed = p.assembler().centroid(tr.x.back()).x();
    r.analytic = analytic_centroid(bc);
    r.abs_error = std::abs(r.computed - r.analytic);
    r.rel_error = r.abs_error / (std::abs(r.analytic) > 1e-9 * bc.L ? std::abs(r.analytic) : bc.L);
    r.turning = std::abs(turning_angle(p.mesh(), tr.x.back()));
    r.residual = p.assembler().residual(tr.x.back(), Vector::Zero(tr.x.back().size()), u.col(u.cols() - 1))
                     .cwiseAbs()
                     .maxCoeff();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<BeamResult> run_beam_benchmark(const Scenario& base) {
    std::vector<BeamResult> out;
    for (double nu : base.beam_nu)
        for (int nx : base.beam_nx) out.push_back(run_beam_case(base, nx, nu));
    return out;
}

}  // namespace limbless
