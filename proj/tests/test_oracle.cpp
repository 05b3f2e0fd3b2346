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
#include <numbers>

#include "limbless/oracle.hpp"

using namespace limbless;

TEST_CASE("analytic beam centroid") {
    constexpr double pi = std::numbers::pi;
    BeamCase c;
    c.nu = 1.0;
    CHECK(c.kappa() * c.L == doctest::Approx(2 * pi));
    CHECK(std::abs(analytic_centroid(c)) < 1e-14);
    c.nu = 0.5;
    CHECK(analytic_centroid(c) == doctest::Approx(20.0 / (pi * pi)));
    c.nu = 0.25;
    CHECK(analytic_centroid(c) == doctest::Approx(40.0 / (pi * pi)));
    CHECK(c.u_o() == doctest::Approx(0.2094395 * 0.25).epsilon(1e-6));
}

TEST_CASE("central differences") {
    auto sq = [](const Vector& x) { return x[0] * x[0]; };
    CHECK(fd_gradient(sq, Vector::Constant(1, 3.0), 1e-6)[0] == doctest::Approx(6.0).epsilon(1e-9));

    auto lin = [](const Vector& x) { return 2.0 * x[0] - 0.5 * x[1]; };
    const Vector g = fd_gradient(lin, Vector::Zero(2), 1e-3);
    CHECK(std::abs(g[0] - 2.0) < 1e-12);
    CHECK(std::abs(g[1] + 0.5) < 1e-12);

    // truncation error shrinks by four when the step halves
    auto s = [](const Vector& x) { return std::sin(x[0]); };
    const double e1 = std::abs(fd_gradient(s, Vector::Constant(1, 0.7), 1e-2)[0] - std::cos(0.7));
    const double e2 = std::abs(fd_gradient(s, Vector::Constant(1, 0.7), 5e-3)[0] - std::cos(0.7));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("derivative audit is tight") {
    const auto rows = derivative_audit(3);
    CHECK(rows.size() == 8);
    for (const AuditEntry& r : rows) {
        INFO(r.name);
        CHECK(r.max_rel_error < 1e-6);
    }
}

TEST_CASE("coarse beam bends the right way and improves with refinement") {
    const Scenario s = preset("beam-paper");
    const BeamResult a = run_beam_case(s, 5, 0.25);
    const BeamResult b = run_beam_case(s, 10, 0.25);
    CHECK(a.analytic == doctest::Approx(40.0 / (std::numbers::pi * std::numbers::pi)));
    CHECK(b.rel_error < a.rel_error);
    CHECK(b.turning > a.turning);
    CHECK(b.turning < std::numbers::pi / 2 * 1.05);
}
