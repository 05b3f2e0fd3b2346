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

#include <stdexcept>
#include <string>
#include <vector>

namespace limbless {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    /// Short machine-readable category, used in the CLI error JSON.
    virtual const char* kind() const noexcept { return "error"; }
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }
    const char* kind() const noexcept override { return "config"; }

private:
    std::vector<std::string> problems_;
};

class GeometryError : public Error {
public:
    GeometryError(const std::string& what, int element)
        : Error(what), element_(element) {}
    int element() const noexcept { return element_; }
    const char* kind() const noexcept override { return "geometry"; }

private:
    int element_;
};

/// Growth value outside the admissible range u > -1.
class GrowthValidityError : public Error {
public:
    explicit GrowthValidityError(double u);
    double growth() const noexcept { return u_; }
    const char* kind() const noexcept override { return "growth"; }

private:
    double u_;
};

/// Elastic volume ratio J_e <= 0 at some quadrature point.
class ElementInversionError : public Error {
public:
    ElementInversionError(int element, double je);
    int element() const noexcept { return element_; }
    const char* kind() const noexcept override { return "inversion"; }

private:
    int element_;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, int step)
        : Error(what), step_(step) {}
    int step() const noexcept { return step_; }
    const char* kind() const noexcept override { return "singular"; }

private:
    int step_;
};

/// Newton failure after exhausting local step halvings.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int step, double residual)
        : Error(what), step_(step), residual_(residual) {}
    int step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }
    const char* kind() const noexcept override { return "convergence"; }

private:
    int step_;
    double residual_;
};

}  // namespace limbless
