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


#include "limbless/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace limbless {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw Error("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "t,x_cm,y_cm,z_cm,U,W\n";
    for (size_t n = 0; n < tr.t.size(); ++n) {
        const Vec3& c = tr.centroid[n];
        const double U = n < tr.U.size() ? tr.U[n] : 0.0;
        const double W = n < tr.W.size() ? tr.W[n] : 0.0;
        os << fmt(tr.t[n]) << ',' << fmt(c.x()) << ',' << fmt(c.y()) << ',' << fmt(c.z()) << ',' << fmt(U) << ','
           << fmt(W) << '\n';
    }
    return os.str();
}

std::string controls_csv(const std::vector<double>& t, const Matrix& u) {
    std::ostringstream os;
    os << 't';
    for (Eigen::Index c = 0; c < u.rows(); ++c) os << ",u_" << c;
    os << '\n';
    for (Eigen::Index n = 0; n < u.cols(); ++n) {
        os << fmt(t[n]);
        for (Eigen::Index c = 0; c < u.rows(); ++c) os << ',' << fmt(u(c, n));
        os << '\n';
    }
    return os.str();
}

std::string convergence_csv(const std::vector<FbsmIteration>& history) {
    std::ostringstream os;
    os << "k,J,r_norm,pg_norm,du_norm,theta,rejections\n";
    for (const FbsmIteration& it : history)
        os << it.k << ',' << fmt(it.J) << ',' << fmt(it.r_norm) << ',' << fmt(it.pg_norm) << ',' << fmt(it.du_norm)
           << ',' << fmt(it.theta) << ',' << it.rejections << '\n';
    return os.str();
}

std::string hamiltonian_csv(const std::vector<double>& t, const Vector& H) {
    std::ostringstream os;
    os << "t,H\n";
    for (Eigen::Index n = 0; n < H.size(); ++n) os << fmt(t[n + 1]) << ',' << fmt(H[n]) << '\n';
    return os.str();
}

std::string states_csv(const Trajectory& tr, int stride) {
    std::ostringstream os;
    os << "step,t,node,x,y,z\n";
    if (stride <= 0) return os.str();
    for (int n = 0; n <= tr.steps(); n += stride) {
        const Vector& x = tr.x[n];
        for (Eigen::Index a = 0; a < x.size() / 3; ++a)
            os << n << ',' << fmt(tr.t[n]) << ',' << a << ',' << fmt(x[3 * a]) << ',' << fmt(x[3 * a + 1]) << ','
               << fmt(x[3 * a + 2]) << '\n';
    }
    return os.str();
}

std::string beam_csv(const std::vector<BeamResult>& rows) {
    std::ostringstream os;
    os << "nx,nu,computed,analytic,rel_error,turning\n";
    for (const BeamResult& r : rows)
        os << r.nx << ',' << fmt(r.nu) << ',' << fmt(r.computed) << ',' << fmt(r.analytic) << ',' << fmt(r.rel_error)
           << ',' << fmt(r.turning) << '\n';
    return os.str();
}

std::string audit_csv(const std::vector<AuditEntry>& rows) {
    std::ostringstream os;
    os << "check,max_rel_error\n";
    for (const AuditEntry& r : rows) os << '"' << r.name << "\"," << fmt(r.max_rel_error) << '\n';
    return os.str();
}

nlohmann::json error_json(const std::exception& e) {
    nlohmann::json j;
    j["message"] = e.what();
    j["kind"] = "error";
    if (const auto* le = dynamic_cast<const Error*>(&e)) j["kind"] = le->kind();
    if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) j["problems"] = ce->problems();
    if (const auto* ge = dynamic_cast<const GeometryError*>(&e)) j["element"] = ge->element();
    if (const auto* ie = dynamic_cast<const ElementInversionError*>(&e)) j["element"] = ie->element();
    if (const auto* gv = dynamic_cast<const GrowthValidityError*>(&e)) j["growth"] = gv->growth();
    if (const auto* se = dynamic_cast<const SingularMatrixError*>(&e)) j["step"] = se->step();
    if (const auto* cv = dynamic_cast<const ConvergenceError*>(&e)) {
        j["step"] = cv->step();
        if (std::isfinite(cv->residual())) j["residual"] = cv->residual();
    }
    return {{"error", j}};
}

}  // namespace limbless
