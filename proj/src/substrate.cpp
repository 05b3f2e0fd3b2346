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

#include "limbless/substrate.hpp"

#include <cmath>
#include <sstream>

#include "limbless/errors.hpp"

namespace limbless {

EffectiveMu effective_mu_t(const Vec3& v, const Vec3& tau, const FrictionParams& fp) {
    const double slip = v.dot(tau) / fp.beta;
    const double c = std::tanh(slip);
    const double half_diff = 0.5 * (fp.mu_f - fp.mu_b);
    return {0.5 * (fp.mu_f + fp.mu_b) + half_diff * c, half_diff * (1.0 - c * c) / fp.beta};
}

Traction traction(const Vec3& v, const Vec3& tau, const FrictionParams& fp) {
    constexpr double kFrameTol = 1e-9;
    if (std::abs(tau.norm() - 1.0) > kFrameTol || std::abs(tau.dot(fp.normal)) > kFrameTol) {
        std::ostringstream os;
        os << "traction: tangent (" << tau.transpose() << ") is not a unit vector in the substrate plane";
        throw Error(os.str());
    }
    const Mat3 I = Mat3::Identity();
    const Vec3& n = fp.normal;
    const EffectiveMu mt = effective_mu_t(v, tau, fp);
    const double tv = tau.dot(v);
    const double dm = mt.value - fp.mu_l;

    Traction out;
    const Mat3 B = fp.mu_l * (I - n * n.transpose()) + dm * (tau * tau.transpose());
    out.t = -B * v;
    // d(mu_t)/dv = mu_t' tau, entering through the (tau . v) tau term.
    out.d_dv = -(B + mt.d_dslip * tv * (tau * tau.transpose()));
    out.d_dtau = -(dm * (tv * I + tau * v.transpose()) + mt.d_dslip * tv * (tau * v.transpose()));
    return out;
}

}  // namespace limbless
