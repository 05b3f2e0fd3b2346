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

#include "limbless/mesh.hpp"

namespace limbless {

/// Velocity-proportional anisotropic friction of a flat, stationary substrate.
/// Sliding along the tangent tau sees mu_f (forward, +tau) or mu_b (backward),
/// blended by tanh((v . tau) / beta); sliding across it sees mu_l.
struct FrictionParams {
    double mu_l = 1.0;
    double mu_f = 1.0;
    double mu_b = 1.0;
    double beta = 0.1;
    Vec3 normal = Vec3::UnitZ();
};

struct ViscousParams {
    double mu_o = 1e-3;
};

struct EffectiveMu {
    double value = 0.0;
    double d_dslip = 0.0;  // d mu_t / d (v . tau)
};

EffectiveMu effective_mu_t(const Vec3& v, const Vec3& tau, const FrictionParams& fp);

struct Traction {
    Vec3 t = Vec3::Zero();
    Mat3 d_dv = Mat3::Zero();
    Mat3 d_dtau = Mat3::Zero();
};

/// t = -[mu_l (I - n n^T) + (mu_t - mu_l) tau tau^T] v and its partial
/// derivatives. tau must be a unit vector orthogonal to the substrate normal.
Traction traction(const Vec3& v, const Vec3& tau, const FrictionParams& fp);

inline Vec3 viscous_force(const Vec3& v, const ViscousParams& vp) { return -vp.mu_o * v; }

}  // namespace limbless
