// Copyright 2026 The zerot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ZEROT_LEVMAR_HPP
#define ZEROT_LEVMAR_HPP

#include <functional>

#include <Eigen/Dense>

namespace zerot {

struct LevMarOptions {
    int max_iterations = 500;
    double relative_chi2_tolerance = 1e-12;
    double step_tolerance = 1e-10;
    double initial_damping = 1e-3;
};

struct LevMarResult {
    Eigen::VectorXd params;
    double chi2 = 0.0;
    int iterations = 0;
    bool converged = false;
    Eigen::MatrixXd jtj;  // J^T J at params; its inverse is the covariance
};

/// Fills the weighted residual vector and, when jacobian is non-null, its
/// Jacobian. Returns false if x is outside the model's domain.
using ResidualFn = std::function<bool(const Eigen::VectorXd& x, Eigen::VectorXd& residual, Eigen::MatrixXd* jacobian)>;

/// Damped Gauss-Newton with Marquardt diagonal scaling. Each step solves
/// (J^T J + lambda diag(J^T J)) dx = -J^T r; lambda shrinks after an accepted
/// step and grows after a rejected one, so the iteration slides between
/// Gauss-Newton and scaled gradient descent.
LevMarResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd x0, const LevMarOptions& options = {});

}  // namespace zerot

#endif
