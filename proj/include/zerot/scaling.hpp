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

#ifndef ZEROT_SCALING_HPP
#define ZEROT_SCALING_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "zerot/montecarlo.hpp"

namespace zerot {

enum class Parity { even, odd, all };
enum class Ansatz { quadratic, corrected };

std::string_view parity_name(Parity parity);
Parity parse_parity(std::string_view name);
std::string_view ansatz_name(Ansatz ansatz);
Ansatz parse_ansatz(std::string_view name);

struct FitParameter {
    std::string name;
    double value = 0.0;
    double error = 0.0;  // one sigma from inverse curvature; inf if unidentified
    double bootstrap_error = std::numeric_limits<double>::quiet_NaN();
};

struct ScalingFit {
    Model model = Model::rbim2d;
    Ansatz ansatz = Ansatz::quadratic;
    Parity parity = Parity::all;
    std::vector<FitParameter> parameters;
    double chi2 = 0.0;
    int dof = 0;
    std::size_t points_used = 0;
    std::vector<int> sizes_used;
    int starts = 0;
    int starts_converged = 0;
    int iterations = 0;  // of the winning start
    int bootstrap_replicas = 0;
    std::vector<std::string> warnings;

    const FitParameter& parameter(std::string_view name) const;
    bool has(std::string_view name) const;
    double value(std::string_view name) const { return parameter(name).value; }
    double error(std::string_view name) const { return parameter(name).error; }
    double p_c0() const { return value("p_c0"); }
    double nu0() const { return value("nu0"); }
};

struct FitOptions {
    /// Drop sizes below this (exposes the small-L cutoff; default keeps all).
    int min_size = 0;
    /// Gaussian-noise bootstrap replicas (0 disables).
    int bootstrap_replicas = 0;
    std::uint64_t bootstrap_seed = 0;
};

/// Weighted chi-square of an ansatz over a point set, with the analytic
/// gradient. Parameter order: A, B, C, p_c0, nu0 and, for the corrected
/// ansatz, D_even, mu_even and/or D_odd, mu_odd for each parity present.
///
///   x = (p - p_c0) L^(1/nu0)
///   P = A + B x + C x^2 [+ D_parity(L) L^(-1/mu_parity(L))]
class ScalingObjective {
  public:
    ScalingObjective(std::span<const PfailPoint> points, Ansatz ansatz);

    const std::vector<std::string>& parameter_names() const { return names_; }
    std::size_t size() const { return sizes_.size(); }

    double predict(std::span<const double> params, int size, double p) const;
    double chi_square(std::span<const double> params) const;
    std::vector<double> gradient(std::span<const double> params) const;

    /// Weighted residuals (model - data)/sigma and their Jacobian, row-major
    /// (points x parameters). False outside the domain (nu0, mu <= 0).
    bool residuals(std::span<const double> params, std::vector<double>& r, std::vector<double>* jac) const;

    bool has_even() const { return even_slot_ >= 0; }
    bool has_odd() const { return odd_slot_ >= 0; }

  private:
    Ansatz ansatz_;
    std::vector<int> sizes_;
    std::vector<double> ps_;
    std::vector<double> ys_;
    std::vector<double> sigmas_;
    std::vector<std::string> names_;
    int even_slot_ = -1;  // index of D_even, mu_even follows
    int odd_slot_ = -1;
};

/// P_fail = A + B x + C x^2 over the selected parity subset. Multi-start over
/// p_c0 (around the curve crossing) and nu0, best chi-square wins.
/// InputError with fewer than 2 sizes, 3 p values, or no positive dof;
/// FitFailure when no start converges.
ScalingFit fit_quadratic(std::span<const PfailPoint> points, Parity parity, const FitOptions& options = {});

/// Adds D L^(-1/mu) per parity. Needs at least 4 sizes, and 2 per parity
/// that is present.
ScalingFit fit_corrected(std::span<const PfailPoint> points, Parity parity, const FitOptions& options = {});

struct SizeSlope {
    int size = 0;
    double slope = 0.0;
    double error = 0.0;
    std::size_t points = 0;
    bool used = false;
};

struct SlopeExponent {
    double nu0 = 0.0;
    double error = 0.0;
    double inverse_nu0 = 0.0;  // fitted slope of log(slope) vs log L
    std::vector<SizeSlope> slopes;
    std::vector<std::string> warnings;
};

/// Per size, the slope of P_fail(p) at p_ref from a weighted linear fit over
/// the widest p window symmetric about p_ref (or half_window when given);
/// then nu0 from the slope of log(slope) against log L. Sizes with a
/// non-positive slope are excluded with a warning; InputError if fewer than
/// 3 remain.
SlopeExponent slope_exponent(std::span<const PfailPoint> points, double p_ref,
                             std::optional<double> half_window = std::nullopt);

struct PairCrossing {
    int size_a = 0;
    int size_b = 0;
    std::optional<double> p;
};

struct CrossingEstimate {
    std::optional<double> p_c0;  // median over adjacent-size pairs
    double spread = 0.0;         // half the range of pair crossings
    std::vector<PairCrossing> pairs;
    std::vector<std::string> warnings;
};

/// For each pair of adjacent sizes, linear interpolation of the difference of
/// their P_fail curves on shared p values; the first sign change is the
/// crossing. Pairs that never cross are reported absent with a warning.
CrossingEstimate crossing_estimate(std::span<const PfailPoint> points);

/// Parameters of a noiseless synthetic dataset.
struct SyntheticTruth {
    double A = 0.3;
    double B = 5.0;
    double C = 8.0;
    double p_c0 = 0.103;
    double nu0 = 1.46;
    double D_even = 0.0;
    double mu_even = 1.0;
    double D_odd = 0.0;
    double mu_odd = 1.0;
};

/// Exact ansatz values on sizes x grid. n_samples only sets the reported
/// counts and the binomial standard error sqrt(P(1-P)/n) (floored like the
/// sweep estimate); pfail itself carries no noise.
std::vector<PfailPoint> synthetic_points(Model model, const SyntheticTruth& truth, std::span<const int> sizes,
                                         const PGrid& grid, std::uint64_t n_samples);

/// Points of the given parity with size >= min_size.
std::vector<PfailPoint> select_points(std::span<const PfailPoint> points, Parity parity, int min_size = 0);

}  // namespace zerot

#endif
