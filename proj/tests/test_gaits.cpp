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

#include "limbless/errors.hpp"
#include "limbless/gaits.hpp"

using namespace limbless;

TEST_CASE("growth_at evaluates the wave formulas") {
    GaitSpec g;
    CHECK(growth_at(g, 0.0, 0.0).first == 0.0);
    const auto [v, d] = growth_at(g, 0.0, 0.25);
    CHECK(v == doctest::Approx(0.3));
    CHECK(d == doctest::Approx(-0.3));

    g.kind = GaitKind::crawling;
    g.f = 2.0;
    // 2 pi (2 * 0.1) + 2 pi 0.2 + pi = 1.8 pi
    const double expect = 0.3 * std::sin(1.8 * std::numbers::pi);
    CHECK(growth_at(g, 0.2, 0.1).first == doctest::Approx(expect));
    CHECK(growth_at(g, 0.2, 0.1).second == growth_at(g, 0.2, 0.1).first);

    g.kind = GaitKind::inching;
    g.u_o = 0.75;
    g.f = 1.0;
    g.gamma = 0.5;
    g.n_strokes = 4;
    // |sin(4 pi / 8)| = 1, sin(pi * 0.5) = 1
    const auto [iv, id] = growth_at(g, 0.5, 0.125);
    CHECK(iv == doctest::Approx(-0.75));
    CHECK(id == doctest::Approx(0.75));
}

TEST_CASE("polarity holds pointwise for every kind") {
    for (auto kind : {GaitKind::undulatory, GaitKind::crawling, GaitKind::inching}) {
        GaitSpec g;
        g.kind = kind;
        for (double s = 0.0; s <= 1.0; s += 0.07)
            for (double t = 0.0; t <= 4.0; t += 0.113) {
                const auto [v, d] = growth_at(g, s, t);
                if (gait_polarity(kind) == Polarity::antagonistic)
                    CHECK(v + d == 0.0);
                else
                    CHECK(v - d == 0.0);
                CHECK(std::abs(v) < 1.0);
            }
    }
}

TEST_CASE("travelling waves are periodic in time") {
    for (auto kind : {GaitKind::undulatory, GaitKind::crawling}) {
        GaitSpec g;
        g.kind = kind;
        g.f = 1.6;
        for (double s : {0.05, 0.4, 0.95})
            for (double t : {0.0, 0.3, 1.7})
                CHECK(std::abs(growth_at(g, s, t + 1.0 / g.f).first - growth_at(g, s, t).first) < 1e-12);
    }
}

TEST_CASE("channel sampling uses column centroids") {
    const Mesh m = build_box_mesh({});
    const ControlMap cm = column_controls(m, Polarity::antagonistic);
    REQUIRE(cm.num_channels() == 20);
    for (int c = 0; c < 20; ++c) CHECK(cm.channels[c].s == doctest::Approx((c + 0.5) / 20.0));

    GaitSpec g;
    const std::vector<double> t{0.0, 0.25, 0.5};
    const Matrix u = sample_to_channels(g, cm, t);
    CHECK(u.rows() == 20);
    CHECK(u.cols() == 3);
    CHECK(u(3, 1) == doctest::Approx(0.3 * std::sin(2 * std::numbers::pi * (0.25 + 3.5 / 20.0))));

    g.u_o = 0.0;
    CHECK(sample_to_channels(g, cm, t).isZero(0.0));
}

TEST_CASE("inching envelope has 4n zero crossings over n strokes and T = 4") {
    GaitSpec g;
    g.kind = GaitKind::inching;
    g.gamma = 0.5;
    g.n_strokes = 4;
    // count near-zero local minima of the envelope on a fine grid over (0, 4]
    const int samples = 40000;
    auto env = [&](int i) { return std::abs(growth_at(g, 0.5, 4.0 * i / samples).first); };
    int roots = 0;
    for (int i = 1; i < samples; ++i)
        if (env(i) < 1e-2 && env(i) <= env(i - 1) && env(i) < env(i + 1)) ++roots;
    if (env(samples) < 1e-12) ++roots;
    CHECK(roots == 16);
}

TEST_CASE("invalid gaits are rejected with every problem listed") {
    GaitSpec g;
    g.u_o = 1.0;
    g.f = 0.0;
    g.gamma = -1.0;
    try {
        validate(g);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems().size() == 3);
    }
    CHECK_THROWS_AS(gait_kind("swimming"), ConfigError);
    CHECK(gait_kind(to_string(GaitKind::inching)) == GaitKind::inching);
}
