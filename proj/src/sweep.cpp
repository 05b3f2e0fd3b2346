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


#include "limbless/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "limbless/output.hpp"

namespace limbless {

Trajectory run_gait(const Scenario& s) {
    Problem p(s);
    SimulateOptions opt;
    opt.cache_tangents = false;
    return p.solver().simulate(p.initial_positions(), p.gait_controls(), opt);
}

std::vector<SweepRow> run_sweep(const Scenario& s, int threads) {
    if (!s.gait) throw ConfigError({"sweep needs a gait block"});
    const std::vector<double> gammas = s.sweep_gamma.empty() ? std::vector<double>{s.gait->gamma} : s.sweep_gamma;
    const std::vector<double> fs = s.sweep_f.empty() ? std::vector<double>{s.gait->f} : s.sweep_f;

    std::vector<SweepRow> rows;
    for (double r : s.sweep_ratios)
        for (double g : gammas)
            for (double f : fs) rows.push_back({r, g, f});

    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(rows.size());
    auto worker = [&] {
        for (size_t i = next++; i < rows.size(); i = next++) {
            try {
                Scenario run = s;
                apply_anisotropy(run, rows[i].ratio);
                run.gait->gamma = rows[i].gamma;
                run.gait->f = rows[i].f;
                const Trajectory tr = run_gait(run);
                rows[i].centroid_end = tr.centroid.back();
                rows[i].dx = tr.centroid.back().x() - tr.centroid.front().x();
                rows[i].W_end = tr.W.empty() ? 0.0 : tr.W.back();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int n = std::clamp(threads, 1, static_cast<int>(rows.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "ratio,gamma,f,dx,x_end,y_end,z_end,W_end\n";
    for (const SweepRow& r : rows)
        os << fmt(r.ratio) << ',' << fmt(r.gamma) << ',' << fmt(r.f) << ',' << fmt(r.dx) << ','
           << fmt(r.centroid_end.x()) << ',' << fmt(r.centroid_end.y()) << ',' << fmt(r.centroid_end.z()) << ','
           << fmt(r.W_end) << '\n';
    return os.str();
}

}  // namespace limbless
