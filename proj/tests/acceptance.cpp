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

// End-to-end checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "limbless/oracle.hpp"
#include "limbless/output.hpp"
#include "limbless/scenario.hpp"
#include "limbless/sweep.hpp"

using namespace limbless;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string f3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + f3(v[i]);
    return s + "]";
}

bool strictly_increasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

int hardware_threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

// 1. Beam against the thin-beam arc.
Outcome beam() {
    const Scenario s = preset("beam-paper");
    const std::vector<BeamResult> rows = run_beam_benchmark(s);
    Outcome o{true, ""};
    for (double nu : s.beam_nu) {
        std::vector<double> err;
        double at20 = 0.0, computed20 = 0.0;
        for (const auto& r : rows) {
            if (r.nu != nu) continue;
            err.push_back(r.rel_error);
            if (r.nx == 20) at20 = r.rel_error, computed20 = r.computed;
        }
        bool monotone = true;
        for (size_t i = 1; i < err.size(); ++i) monotone = monotone && err[i] < err[i - 1];
        const bool ok = nu == 1.0 ? std::abs(computed20) < 0.05 * s.mesh.length : at20 < 0.02;
        o.pass = o.pass && ok && monotone;
        o.detail += "nu=" + f3(nu) + " err(nx)=" + list(err) + (ok ? "" : " [nx=20 off]") +
                    (monotone ? "" : " [not monotone]") + "; ";
    }
    return o;
}

// 2. Analytic derivatives against central differences.
Outcome audit() {
    Outcome o{true, ""};
    for (const AuditEntry& e : derivative_audit(7)) {
        o.pass = o.pass && e.max_rel_error < 1e-5;
        o.detail += e.name + "=" + f3(e.max_rel_error) + " ";
    }
    return o;
}

Scenario small_ocp(double dt) {
    Scenario s = preset("undulatory-ocp-paper");
    s.mesh.length = 4.0;
    s.mesh.width = 1.0;
    s.mesh.nx = 4;
    s.mesh.ny = 1;
    s.mesh.nz = 1;
    s.layout = ControlLayout::element;
    s.T = 10 * 0.1;
    s.dt = dt;
    s.newton.tol = 1e-12;
    s.model.friction.mu_f = 0.5;
    s.model.friction.mu_b = 2.0;
    s.ocp.x_d = Vec3(1.0, 0.5, 0.5);
    return s;
}

// Smooth control history starting from rest, sampled on the time grid.
Matrix smooth_controls(int channels, const std::vector<double>& t) {
    Matrix u(channels, t.size());
    for (int c = 0; c < channels; ++c)
        for (size_t n = 0; n < t.size(); ++n) {
            const double w = 2.0 * M_PI * t[n];
            u(c, n) = 0.2 * std::sin(w) * std::cos(0.7 * c) + 0.1 * (1.0 - std::cos(w)) * std::sin(0.7 * c);
        }
    return u;
}

Matrix residual_on(double dt, double beta) {
    Scenario s = small_ocp(dt);
    s.model.friction.beta = beta;
    Problem p(s);
    const Matrix u = smooth_controls(p.assembler().num_channels(), s.time_grid());
    const Trajectory tr = p.solver().simulate(p.initial_positions(), u);
    return control_residual(tr, adjoint_sweep(tr, p.assembler(), s.ocp), s.ocp);
}

// Relative distance of the residual density on the coarse nodes from a fine
// reference, optionally over [t_lo, t_hi] only. The last node carries no
// stage under tau_u = 0 and is skipped.
std::vector<double> residual_errors(double beta, double t_lo, double t_hi) {
    const double dt_ref = 0.1 / 64;
    const Matrix ref = residual_on(dt_ref, beta);
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
        const Matrix r = residual_on(dt, beta);
        const int stride = static_cast<int>(std::lround(dt / dt_ref));
        double num = 0.0, den = 0.0;
        for (int n = 0; n + 1 < r.cols(); ++n) {
            if (n * dt < t_lo - 1e-12 || n * dt > t_hi + 1e-12) continue;
            num += (r.col(n) - ref.col(n * stride)).squaredNorm();
            den += ref.col(n * stride).squaredNorm();
        }
        err.push_back(std::sqrt(num / den));
    }
    return err;
}

std::vector<double> orders(const std::vector<double>& err) {
    std::vector<double> q;
    for (size_t i = 1; i < err.size(); ++i) q.push_back(std::log2(err[i - 1] / err[i]));
    return q;
}

// 3. Control residual against the finite-difference gradient, and its
// convergence in the step size.
Outcome adjoint() {
    Outcome o;
    double cosine = 0.0, fd_rel = 0.0;
    {
        const Scenario s = small_ocp(0.1);
        Problem p(s);
        const Assembler& as = p.assembler();
        const Vector x0 = p.initial_positions();
        const int nc = as.num_channels(), N = s.steps();
        const Matrix u = smooth_controls(nc, s.time_grid());
        const Trajectory tr = p.solver().simulate(x0, u);
        const Matrix r = control_residual(tr, adjoint_sweep(tr, as, s.ocp), s.ocp);
        auto J = [&](const Vector& flat) {
            const Matrix uu = Eigen::Map<const Matrix>(flat.data(), nc, N + 1);
            return objective(p.solver().simulate(x0, uu), as, s.ocp);
        };
        const Vector fd = fd_gradient(J, Eigen::Map<const Vector>(u.data(), u.size()), 1e-6) / s.dt;
        const Vector g = Eigen::Map<const Vector>(r.data(), r.size());
        cosine = g.dot(fd) / (g.norm() * fd.norm());
        fd_rel = (g - fd).norm() / fd.norm();
    }
    const double beta = small_ocp(0.1).model.friction.beta;
    const std::vector<double> err = residual_errors(beta, 0.0, 1.0);
    const std::vector<double> q = orders(err);
    const bool first_order = std::all_of(q.begin(), q.end(), [](double v) { return v >= 0.8; });
    const std::vector<double> q_smooth = orders(residual_errors(1.0, 0.1, 0.9));
    o.pass = cosine > 0.99 && first_order;
    o.detail = "cos=" + f3(cosine) + " rel_fd=" + f3(fd_rel) + " err(dt=0.1,0.05,0.025)=" + list(err) +
               " order=" + list(q) + (first_order ? "" : " [below first order]") +
               "; interior orders with beta=1: " + list(q_smooth);
    return o;
}

// 4. Whole-period gaits on an isotropic substrate.
Outcome isotropy() {
    Outcome o{true, ""};
    for (const char* name : {"undulatory-paper", "crawling-paper", "inching-paper"}) {
        Scenario s = preset(name);
        apply_anisotropy(s, 1.0);
        const Trajectory tr = run_gait(s);
        const double dx = tr.centroid.back().x() - tr.centroid.front().x();
        const bool ok = std::abs(dx) < 1e-3 * s.mesh.length;
        o.pass = o.pass && ok;
        o.detail += std::string(name) + " dx=" + f3(dx) + (ok ? "" : " [too large]") + "; ";
    }
    return o;
}

// 5. Displacement against friction anisotropy.
Outcome anisotropy() {
    Outcome o{true, ""};
    for (const char* name : {"undulatory-paper", "crawling-paper", "inching-paper"}) {
        const Scenario s = preset(name);
        std::vector<double> dx;
        for (const SweepRow& r : run_sweep(s, hardware_threads())) dx.push_back(r.dx);
        const bool ok = strictly_increasing(dx) && dx.back() > 0.0;
        o.pass = o.pass && ok;
        o.detail += std::string(name) + " dx=" + list(dx) + (ok ? "" : " [not increasing]") + "; ";
    }
    return o;
}

struct OcpRun {
    std::string name;
    FbsmResult res;
    double travel = 0.0, distance = 0.0, arrival = INFINITY;
    double seconds = 0.0;
};

// 6. FBSM on the three locomotion problems.
Outcome optimal_control() {
    std::vector<OcpRun> runs;
    for (const char* name : {"undulatory-ocp-paper", "crawling-ocp-paper", "inching-ocp-paper"}) runs.push_back({name});
    auto work = [&](OcpRun& run) {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario s = preset(run.name);
        s.newton.tol = 1e-10;
        s.ocp.max_sweeps = 200;
        Problem p(s);
        const Matrix u0 = Matrix::Constant(p.assembler().num_channels(), s.steps() + 1, s.u0);
        run.res = fbsm(p.solver(), p.initial_positions(), u0, s.ocp);
        const auto& c = run.res.trajectory.centroid;
        run.travel = (c.front() - s.ocp.x_d).norm();
        run.distance = (c.back() - s.ocp.x_d).norm();
        for (size_t n = 0; n < c.size(); ++n)
            if ((c[n] - s.ocp.x_d).norm() <= 0.05 * run.travel) {
                run.arrival = run.res.trajectory.t[n];
                break;
            }
        run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    std::vector<std::thread> pool;
    for (auto& r : runs) pool.emplace_back(work, std::ref(r));
    for (auto& t : pool) t.join();

    Outcome o{true, ""};
    for (const OcpRun& run : runs) {
        const auto& h = run.res.history;
        bool monotone = true;
        for (size_t k = 1; k < h.size(); ++k) monotone = monotone && h[k].J <= h[k - 1].J;
        double r_min = h.front().r_norm, pg_min = h.front().pg_norm;
        for (const auto& it : h) r_min = std::min(r_min, it.r_norm), pg_min = std::min(pg_min, it.pg_norm);
        const double r_drop = h.front().r_norm / h.back().r_norm;
        const double pg_drop = h.front().pg_norm / h.back().pg_norm;
        const bool close = run.distance < 0.05 * run.travel;
        const bool ok = monotone && close && r_drop >= 10.0;
        o.pass = o.pass && ok;
        o.detail += run.name + ": sweeps=" + std::to_string(h.size() - 1) + " J " + f3(h.front().J) + "->" +
                    f3(h.back().J) + (monotone ? "" : " [J rose]") + " dist/travel=" + f3(run.distance / run.travel) +
                    (close ? "" : " [far]") + " |r| drop=" + f3(r_drop) + (r_drop >= 10.0 ? "" : " [<10x]") +
                    " |pg| drop=" + f3(pg_drop) + " arrival=" + f3(run.arrival) + " (" + run.res.stop_reason + ", " +
                    f3(run.seconds) + " s); ";
    }
    const bool order = runs[2].arrival < runs[1].arrival && runs[1].arrival < runs[0].arrival;
    o.pass = o.pass && order;
    o.detail += order ? "arrival order inching < crawling < undulatory" : "[arrival order violated]";
    return o;
}

// Frictionless beam, left face clamped axially, steering its centroid by
// growth. The optimum sits on the upper bound with a smooth end layer.
Scenario hamiltonian_problem(double dt) {
    Scenario s = preset("beam-paper");
    s.mesh.length = 4.0;
    s.mesh.width = 1.0;
    s.mesh.nx = 4;
    s.mesh.ny = 1;
    s.mesh.nz = 1;
    s.scheme = "symplectic-euler";
    s.model.viscous.mu_o = 30.0;
    s.layout = ControlLayout::element;
    s.T = 1.0;
    s.dt = dt;
    s.newton.tol = 1e-12;
    s.ocp.x_d = Vec3(2.5, 0.5, 0.5);
    s.ocp.alpha = 0.1;
    s.ocp.u_min = -0.5;
    s.ocp.u_max = 0.5;
    s.ocp.tol = 1e-9;
    s.ocp.max_sweeps = 400;
    return s;
}

struct HamRun {
    double dt = 0.0;
    FbsmResult res;
    double deviation = 0.0;
};

std::vector<HamRun> hamiltonian_runs() {
    std::vector<HamRun> runs;
    for (double dt : {0.1, 0.05, 0.025}) {
        const Scenario s = hamiltonian_problem(dt);
        Problem p(s);
        const Matrix u0 = Matrix::Constant(p.assembler().num_channels(), s.steps() + 1, s.u0);
        HamRun run{dt, fbsm(p.solver(), p.initial_positions(), u0, s.ocp)};
        const Vector H = hamiltonian(run.res.trajectory, run.res.adjoint, p.assembler(), s.ocp);
        run.deviation = (H.array() - H[0]).abs().maxCoeff();
        runs.push_back(std::move(run));
    }
    return runs;
}

// 7. Hamiltonian drift on a converged iterate under step refinement.
Outcome hamiltonian_drift(const std::vector<HamRun>& runs) {
    Outcome o{true, ""};
    std::vector<double> dev;
    for (const HamRun& r : runs) {
        dev.push_back(r.deviation);
        o.pass = o.pass && r.res.converged;
        if (!r.res.converged) o.detail += "[dt=" + f3(r.dt) + " not converged] ";
    }
    const bool decreasing = std::is_sorted(dev.rbegin(), dev.rend()) && dev.front() > dev.back();
    o.pass = o.pass && decreasing;
    o.detail += "max|H-H0|(dt=0.1,0.05,0.025)=" + list(dev) + (decreasing ? "" : " [not decreasing]");
    return o;
}

// 8. Variational inequality signs at active bounds.
Outcome kkt(const std::vector<HamRun>& runs) {
    Outcome o{true, ""};
    const Scenario ref = hamiltonian_problem(0.1);
    const double lo = ref.ocp.u_min, hi = ref.ocp.u_max;
    int active = 0, violations = 0;
    double worst_interior = 0.0;
    for (const HamRun& run : runs) {
        const Matrix& u = run.res.u;
        const Matrix& r = run.res.r;
        const double scale = std::max(1.0, r.lpNorm<Eigen::Infinity>());
        const double eps = 1e-6 * scale;
        for (Eigen::Index n = 0; n < u.cols(); ++n)
            for (Eigen::Index c = 0; c < u.rows(); ++c) {
                if (u(c, n) <= lo) {
                    ++active;
                    violations += r(c, n) < -eps;
                } else if (u(c, n) >= hi) {
                    ++active;
                    violations += r(c, n) > eps;
                } else {
                    worst_interior = std::max(worst_interior, std::abs(r(c, n)) / scale);
                }
            }
        o.pass = o.pass && run.res.converged;
    }
    o.pass = o.pass && active > 0 && violations == 0 && worst_interior < 1e-6;
    o.detail = "active nodes=" + std::to_string(active) + " sign violations=" + std::to_string(violations) +
               " max interior |r|=" + f3(worst_interior);
    return o;
}

// 9. Identical inputs give identical bytes.
Outcome determinism() {
    auto forward = [] {
        Scenario s = preset("crawling-paper");
        s.T = 1.0;
        Problem p(s);
        const Trajectory tr = p.solver().simulate(p.initial_positions(), p.gait_controls());
        return trajectory_csv(tr) + states_csv(tr, 5);
    };
    auto optimal = [] {
        Scenario s = small_ocp(0.1);
        s.ocp.max_sweeps = 5;
        Problem p(s);
        const Matrix u0 = Matrix::Constant(p.assembler().num_channels(), s.steps() + 1, s.u0);
        const FbsmResult res = fbsm(p.solver(), p.initial_positions(), u0, s.ocp);
        return convergence_csv(res.history) + controls_csv(s.time_grid(), res.u) + trajectory_csv(res.trajectory);
    };
    auto sweep = [](int threads) {
        Scenario s = preset("crawling-paper");
        s.T = 1.0;
        return sweep_csv(run_sweep(s, threads));
    };
    const bool f = forward() == forward();
    const bool g = optimal() == optimal();
    const bool w = sweep(1) == sweep(4);
    Outcome o{f && g && w, ""};
    o.detail = std::string("forward ") + (f ? "identical" : "differs") + ", ocp " + (g ? "identical" : "differs") +
               ", sweep 1 vs 4 threads " + (w ? "identical" : "differs");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    auto wanted = [&](int k) { return only.empty() || only.count(k); };

    std::vector<HamRun> ham;
    double ham_seconds = 0.0;
    if (wanted(7) || wanted(8)) {
        const auto t0 = std::chrono::steady_clock::now();
        ham = hamiltonian_runs();
        ham_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"beam verification", beam},
        {"derivative audit", audit},
        {"adjoint gradient consistency", adjoint},
        {"isotropy null result", isotropy},
        {"anisotropy monotonicity", anisotropy},
        {"FBSM locomotion problems", optimal_control},
        {"Hamiltonian refinement",
         [&] {
             Outcome o = hamiltonian_drift(ham);
             o.detail += " (three FBSM runs, " + f3(ham_seconds) + " s)";
             return o;
         }},
        {"KKT bound signs", [&] { return kkt(ham); }},
        {"determinism", determinism},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        if (!wanted(k)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k, criteria[i].first.c_str(),
                    o.detail.c_str(), sec);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
