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

#include "limbless/errors.hpp"

#include <sstream>

namespace limbless {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream os;
    os << "invalid configuration (" << problems.size() << " problem"
       << (problems.size() == 1 ? "" : "s") << ")";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}

std::string growth_message(double u) {
    std::ostringstream os;
    os.precision(17);
    os << "growth u = " << u << " violates u > -1 (J_g must stay positive)";
    return os.str();
}

std::string inversion_message(int element, double je) {
    std::ostringstream os;
    os << "element " << element << " inverted: J_e = " << je;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

GrowthValidityError::GrowthValidityError(double u) : Error(growth_message(u)), u_(u) {}

ElementInversionError::ElementInversionError(int element, double je)
    : Error(inversion_message(element, je)), element_(element) {}

}  // namespace limbless
