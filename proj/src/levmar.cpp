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

#include "levmar.hpp"

#include <cmath>
#include <limits>

namespace zerot {

LevMarResult levenberg_marquardt(const ResidualFn& fn, Eigen::VectorXd x0, const LevMarOptions& options) {
    LevMarResult out;
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    out.params = std::move(x0);
    if (!fn(out.params, r, &J)) {
        out.chi2 = std::numeric_limits<double>::infinity();
        return out;
    }
    out.chi2 = r.squaredNorm();
    double lambda = options.initial_damping;
    Eigen::VectorXd r_trial;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter + 1;
        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        Eigen::VectorXd diag = A.diagonal();
        for (Eigen::Index i = 0; i < diag.size(); ++i)
            diag[i] = std::max(diag[i], 1e-12 * std::max(1.0, diag.maxCoeff()));

        Eigen::MatrixXd M = A;
        M.diagonal() += lambda * diag;
        const Eigen::VectorXd step = M.ldlt().solve(-g);
        const double step_norm = step.norm();
        const bool tiny_step = step_norm < options.step_tolerance * (1.0 + out.params.norm());

        const Eigen::VectorXd trial = out.params + step;
        bool accepted = false;
        double chi2_trial = std::numeric_limits<double>::infinity();
        if (step.allFinite() && fn(trial, r_trial, nullptr)) {
            chi2_trial = r_trial.squaredNorm();
            accepted = std::isfinite(chi2_trial) && chi2_trial < out.chi2;
        }

        if (accepted) {
            const double rel = (out.chi2 - chi2_trial) / std::max(out.chi2, std::numeric_limits<double>::min());
            out.params = trial;
            out.chi2 = chi2_trial;
            fn(out.params, r, &J);
            lambda = std::max(lambda * 0.1, 1e-15);
            if (rel < options.relative_chi2_tolerance || tiny_step || out.chi2 == 0.0) {
                out.converged = true;
                break;
            }
        } else {
            // A tiny step is only meaningful while damping is moderate; heavy
            // damping shrinks every step regardless of the gradient.
            if (tiny_step && lambda <= 1e4) {
                out.converged = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e20)
                break;
        }
    }
    out.jtj = J.transpose() * J;
    return out;
}

}  // namespace zerot
