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

#include "limbless/scenario.hpp"

namespace limbless {

/// Tethered beam bent into a circular arc by opposite growth of its two halves.
struct BeamCase {
    double L = 10.0;
    double B = 1.0;
    double nu = 0.25;   // fraction of a full circle

    double u_o() const;
    double kappa() const;
};

/// Thin-beam centroid abscissa (2 / (kappa^2 L)) sin^2(kappa L / 2).
double analytic_centroid(const BeamCase& c);

/// Central differences, one coordinate at a time.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x, double eps);

struct AuditEntry {
    std::string name;
    double max_rel_error = 0.0;
};

/// Central-difference checks of every analytic derivative on a 2x1x1 mesh at
/// a random admissible state: assembled K, G, B columns, residual against the
/// stored energy, stress against the strain energy, elastic and control
/// tangents against the stress, and traction derivatives. Errors are
/// max-norm differences relative to the max-norm of the analytic quantity.
std::vector<AuditEntry> derivative_audit(unsigned seed = 1);

struct BeamResult {
    int nx = 0;
    double nu = 0.0;
    double computed = 0.0;
    double analytic = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;   // relative to the analytic value, or to L when that is zero
    double turning = 0.0;     // angle between the end tangents, unwrapped
    double residual = 0.0;    // max |g| at the final state, zero velocity
    double seconds = 0.0;
};

/// Ramps the bending growth linearly over [0, T] on the beam scenario with
/// nx longitudinal elements and returns the terminal centroid.
BeamResult run_beam_case(const Scenario& base, int nx, double nu);

/// All (nu, nx) pairs of the scenario's beam grid, nu-major.
std::vector<BeamResult> run_beam_benchmark(const Scenario& base);

}  // namespace limbless
