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

#include "zerot/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "levmar.hpp"
#include "zerot/errors.hpp"

namespace zerot {

std::string_view parity_name(Parity parity) {
    switch (parity) {
    case Parity::even:
        return "even";
    case Parity::odd:
        return "odd";
    default:
        return "all";
    }
}

Parity parse_parity(std::string_view name) {
    if (name == "even")
        return Parity::even;
    if (name == "odd")
        return Parity::odd;
    if (name == "all")
        return Parity::all;
    throw InputError("unknown parity '" + std::string(name) + "' (expected even, odd or all)");
}

std::string_view ansatz_name(Ansatz ansatz) { return ansatz == Ansatz::quadratic ? "quadratic" : "corrected"; }

Ansatz parse_ansatz(std::string_view name) {
    if (name == "quadratic")
        return Ansatz::quadratic;
    if (name == "corrected")
        return Ansatz::corrected;
    throw InputError("unknown ansatz '" + std::string(name) + "' (expected quadratic or corrected)");
}

const FitParameter& ScalingFit::parameter(std::string_view name) const {
    for (const auto& p : parameters)
        if (p.name == name)
            return p;
    throw InputError("fit has no parameter '" + std::string(name) + "'");
}

bool ScalingFit::has(std::string_view name) const {
    return std::any_of(parameters.begin(), parameters.end(), [&](const auto& p) { return p.name == name; });
}

std::vector<PfailPoint> select_points(std::span<const PfailPoint> points, Parity parity, int min_size) {
    std::vector<PfailPoint> out;
    for (const auto& pt : points) {
        if (pt.size < min_size)
            continue;
        if (parity == Parity::even && !pt.even())
            continue;
        if (parity == Parity::odd && pt.even())
            continue;
        out.push_back(pt);
    }
    return out;
}

std::vector<PfailPoint> synthetic_points(Model model, const SyntheticTruth& t, std::span<const int> sizes,
                                         const PGrid& grid, std::uint64_t n_samples) {
    if (n_samples < 1)
        throw InputError("synthetic data needs n_samples >= 1");
    const double n = static_cast<double>(n_samples);
    std::vector<PfailPoint> out;
    for (int L : sizes) {
        const double Ls = static_cast<double>(L);
        for (Decimal p : grid.values()) {
            const double x = (p.value() - t.p_c0) * std::pow(Ls, 1.0 / t.nu0);
            double v = t.A + t.B * x + t.C * x * x;
            v += L % 2 == 0 ? t.D_even * std::pow(Ls, -1.0 / t.mu_even) : t.D_odd * std::pow(Ls, -1.0 / t.mu_odd);
            PfailPoint pt;
            pt.model = model;
            pt.size = L;
            pt.p = p;
            pt.n_samples = n_samples;
            pt.pfail = v;
            const double clamped = std::clamp(v, 0.0, 1.0);
            pt.n_fail = static_cast<std::uint64_t>(std::llround(clamped * n));
            const double floor = 1.0 / ((n + 2.0) * (n + 2.0));
            pt.std_error = std::sqrt(std::max(clamped * (1.0 - clamped), floor) / n);
            out.push_back(pt);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Objective

ScalingObjective::ScalingObjective(std::span<const PfailPoint> points, Ansatz ansatz) : ansatz_(ansatz) {
    for (const auto& pt : points) {
        if (!(pt.std_error > 0.0))
            throw InputError("every point needs a positive standard error");
        sizes_.push_back(pt.size);
        ps_.push_back(pt.p.value());
        ys_.push_back(pt.pfail);
        sigmas_.push_back(pt.std_error);
    }
    names_ = {"A", "B", "C", "p_c0", "nu0"};
    if (ansatz_ == Ansatz::corrected) {
        const bool any_even = std::any_of(sizes_.begin(), sizes_.end(), [](int L) { return L % 2 == 0; });
        const bool any_odd = std::any_of(sizes_.begin(), sizes_.end(), [](int L) { return L % 2 != 0; });
        if (any_even) {
            even_slot_ = static_cast<int>(names_.size());
            names_.insert(names_.end(), {"D_even", "mu_even"});
        }
        if (any_odd) {
            odd_slot_ = static_cast<int>(names_.size());
            names_.insert(names_.end(), {"D_odd", "mu_odd"});
        }
    }
}

double ScalingObjective::predict(std::span<const double> q, int size, double p) const {
    const double Ls = static_cast<double>(size);
    const double x = (p - q[3]) * std::pow(Ls, 1.0 / q[4]);
    double v = q[0] + q[1] * x + q[2] * x * x;
    if (ansatz_ == Ansatz::corrected) {
        const int slot = size % 2 == 0 ? even_slot_ : odd_slot_;
        v += q[slot] * std::pow(Ls, -1.0 / q[slot + 1]);
    }
    return v;
}

bool ScalingObjective::residuals(std::span<const double> q, std::vector<double>& r, std::vector<double>* jac) const {
    const std::size_t n = sizes_.size();
    const std::size_t m = names_.size();
    if (q.size() != m)
        throw ContractViolation("parameter vector has the wrong length");
    if (!(q[4] > 1e-3))
        return false;
    for (int slot : {even_slot_, odd_slot_})
        if (slot >= 0 && !(q[slot + 1] > 1e-3))
            return false;
    r.resize(n);
    if (jac)
        jac->assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double Ls = static_cast<double>(sizes_[i]);
        const double lnL = std::log(Ls);
        const double scale = std::pow(Ls, 1.0 / q[4]);
        const double x = (ps_[i] - q[3]) * scale;
        double v = q[0] + q[1] * x + q[2] * x * x;
        int slot = -1;
        double corr = 0.0;
        if (ansatz_ == Ansatz::corrected) {
            slot = sizes_[i] % 2 == 0 ? even_slot_ : odd_slot_;
            corr = std::pow(Ls, -1.0 / q[slot + 1]);
            v += q[slot] * corr;
        }
        const double w = 1.0 / sigmas_[i];
        r[i] = (v - ys_[i]) * w;
        if (!std::isfinite(r[i]))
            return false;
        if (jac) {
            double* row = jac->data() + i * m;
            const double dPdx = q[1] + 2.0 * q[2] * x;
            row[0] = w;
            row[1] = x * w;
            row[2] = x * x * w;
            row[3] = -dPdx * scale * w;
            row[4] = -dPdx * x * lnL / (q[4] * q[4]) * w;
            if (slot >= 0) {
                const double mu = q[slot + 1];
                row[slot] = corr * w;
                row[slot + 1] = q[slot] * corr * lnL / (mu * mu) * w;
            }
        }
    }
    return true;
}

double ScalingObjective::chi_square(std::span<const double> q) const {
    std::vector<double> r;
    if (!residuals(q, r, nullptr))
        return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (double v : r)
        s += v * v;
    return s;
}

std::vector<double> ScalingObjective::gradient(std::span<const double> q) const {
    std::vector<double> r;
    std::vector<double> jac;
    const std::size_t m = names_.size();
    std::vector<double> g(m, std::numeric_limits<double>::quiet_NaN());
    if (!residuals(q, r, &jac))
        return g;
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < m; ++j)
            g[j] += 2.0 * r[i] * jac[i * m + j];
    return g;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

struct Candidate {
    LevMarResult lm;
    bool valid = false;
};

ResidualFn make_residual_fn(const ScalingObjective& obj) {
    return [&obj](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        std::vector<double> rv;
        std::vector<double> jv;
        std::span<const double> q(x.data(), static_cast<std::size_t>(x.size()));
        if (!obj.residuals(q, rv, J ? &jv : nullptr))
            return false;
        r = Eigen::Map<const Eigen::VectorXd>(rv.data(), static_cast<Eigen::Index>(rv.size()));
        if (J) {
            *J = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                jv.data(), static_cast<Eigen::Index>(rv.size()), x.size());
        }
        return true;
    };
}

struct ParameterSplit {
    std::vector<Eigen::Index> linear;     // A, B, C, D_*
    std::vector<Eigen::Index> nonlinear;  // p_c0, nu0, mu_*
};

ParameterSplit split_parameters(std::size_t count) {
    ParameterSplit s;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(count); ++j) {
        const bool lin = j < 3 || (j >= 5 && (j - 5) % 2 == 0);
        (lin ? s.linear : s.nonlinear).push_back(j);
    }
    return s;
}

// Variable projection: residuals as a function of the nonlinear parameters
// only, with the linear ones eliminated by weighted least squares at every
// evaluation. The Jacobian is Kaufman's projected form. The eliminated
// values are written back into `full` on each call.
ResidualFn make_projected_fn(const ResidualFn& fn, const ParameterSplit& split, Eigen::VectorXd& full) {
    return [&fn, &split, &full](const Eigen::VectorXd& theta, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        Eigen::VectorXd q = Eigen::VectorXd::Zero(full.size());
        for (std::size_t k = 0; k < split.nonlinear.size(); ++k)
            q(split.nonlinear[k]) = theta(static_cast<Eigen::Index>(k));
        Eigen::VectorXd r0;
        Eigen::MatrixXd J0;
        if (!fn(q, r0, &J0))
            return false;
        // With every linear parameter at zero the model vanishes, so r0 = -y/sigma
        // and the linear columns of J0 are the weighted design matrix.
        Eigen::MatrixXd X(J0.rows(), static_cast<Eigen::Index>(split.linear.size()));
        for (std::size_t k = 0; k < split.linear.size(); ++k)
            X.col(static_cast<Eigen::Index>(k)) = J0.col(split.linear[k]);
        const auto qr = X.colPivHouseholderQr();
        const Eigen::VectorXd beta = qr.solve(-r0);
        if (!beta.allFinite())
            return false;
        for (std::size_t k = 0; k < split.linear.size(); ++k)
            q(split.linear[k]) = beta(static_cast<Eigen::Index>(k));
        Eigen::MatrixXd Jq;
        if (!fn(q, r, J ? &Jq : nullptr))
            return false;
        full = q;
        if (J) {
            Eigen::MatrixXd Jn(Jq.rows(), static_cast<Eigen::Index>(split.nonlinear.size()));
            for (std::size_t k = 0; k < split.nonlinear.size(); ++k)
                Jn.col(static_cast<Eigen::Index>(k)) = Jq.col(split.nonlinear[k]);
            *J = Jn - X * qr.solve(Jn);
        }
        return true;
    };
}

// One start: projected solve for the nonlinear parameters, then a polish of
// all parameters together so the reported curvature is the full one.
LevMarResult fit_from(const ResidualFn& fn, const ParameterSplit& split, const Eigen::VectorXd& theta0,
                      std::size_t nparams) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nparams));
    const ResidualFn projected = make_projected_fn(fn, split, full);
    LevMarResult reduced = levenberg_marquardt(projected, theta0);
    if (!std::isfinite(reduced.chi2))
        return reduced;
    Eigen::VectorXd r;
    projected(reduced.params, r, nullptr);  // leaves the matching linear values in full
    LevMarResult polished = levenberg_marquardt(fn, full);
    polished.converged = polished.converged || (reduced.converged && polished.chi2 <= reduced.chi2 * (1.0 + 1e-9));
    polished.iterations += reduced.iterations;
    return polished;
}

// One-sigma errors from (J^T J)^-1. Directions the data cannot resolve get
// an infinite error instead of a meaningless finite one.
std::vector<double> curvature_errors(const Eigen::MatrixXd& jtj) {
    const Eigen::Index m = jtj.rows();
    std::vector<double> err(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
    Eigen::VectorXd d = jtj.diagonal();
    Eigen::VectorXd s(m);
    for (Eigen::Index i = 0; i < m; ++i)
        s(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
    const Eigen::MatrixXd scaled = s.asDiagonal() * jtj * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    const double cutoff = 1e-13 * std::max(ev.maxCoeff(), 1e-300);
    std::vector<bool> unresolved(static_cast<std::size_t>(m), false);
    Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (ev(k) > cutoff) {
            inv += V.col(k) * V.col(k).transpose() / ev(k);
        } else {
            for (Eigen::Index i = 0; i < m; ++i)
                if (std::abs(V(i, k)) > 1e-3)
                    unresolved[static_cast<std::size_t>(i)] = true;
        }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        if (s(i) == 0.0 || unresolved[static_cast<std::size_t>(i)])
            continue;
        err[static_cast<std::size_t>(i)] = std::sqrt(std::max(inv(i, i), 0.0)) * s(i);
    }
    return err;
}

template <typename T>
double median_of(std::vector<T> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ScalingFit run_fit(std::span<const PfailPoint> all_points, Parity parity, Ansatz ansatz, const FitOptions& options) {
    const std::vector<PfailPoint> pts = select_points(all_points, parity, options.min_size);
    if (pts.empty())
        throw InputError("no points left after parity/size selection");
    const Model model = pts.front().model;
    for (const auto& pt : pts)
        if (pt.model != model)
            throw InputError("all points of a fit must come from the same model");

    std::set<int> sizes;
    std::set<std::int64_t> pvals;
    std::set<int> even_sizes;
    std::set<int> odd_sizes;
    for (const auto& pt : pts) {
        sizes.insert(pt.size);
        pvals.insert(pt.p.micros());
        (pt.even() ? even_sizes : odd_sizes).insert(pt.size);
    }
    if (sizes.size() < 2)
        throw InputError("scaling fit needs at least 2 distinct sizes, got " + std::to_string(sizes.size()));
    if (pvals.size() < 3)
        throw InputError("scaling fit needs at least 3 distinct p values, got " + std::to_string(pvals.size()));
    if (ansatz == Ansatz::corrected) {
        if (sizes.size() < 4)
            throw InputError("corrected ansatz needs at least 4 distinct sizes, got " + std::to_string(sizes.size()));
        if ((!even_sizes.empty() && even_sizes.size() < 2) || (!odd_sizes.empty() && odd_sizes.size() < 2))
            throw InputError("corrected ansatz needs at least 2 sizes of each parity it fits");
    }

    const ScalingObjective obj(pts, ansatz);
    const auto& names = obj.parameter_names();
    const int nparams = static_cast<int>(names.size());
    const int dof = static_cast<int>(pts.size()) - nparams;
    if (dof <= 0)
        throw InputError("scaling fit has no degrees of freedom (" + std::to_string(pts.size()) + " points, " +
                         std::to_string(nparams) + " parameters)");

    ScalingFit fit;
    fit.model = model;
    fit.ansatz = ansatz;
    fit.parity = parity;
    fit.dof = dof;
    fit.points_used = pts.size();
    fit.sizes_used.assign(sizes.begin(), sizes.end());
    if (parity == Parity::all && !even_sizes.empty() && !odd_sizes.empty())
        fit.warnings.push_back("even and odd sizes pooled; their finite-size behavior can differ");

    // Start grid.
    const CrossingEstimate crossing = crossing_estimate(pts);
    std::vector<double> pv;
    for (auto m : pvals)
        pv.push_back(static_cast<double>(m) / static_cast<double>(Decimal::kScale));
    double step = pv.back() - pv.front();
    for (std::size_t i = 1; i < pv.size(); ++i)
        step = std::min(step, pv[i] - pv[i - 1]);
    const double center = crossing.p_c0.value_or(0.5 * (pv.front() + pv.back()));
    const std::vector<double> nu_starts = {0.8, 1.0, 1.25, 1.5, 1.75};
    const std::vector<double> mu_starts = {0.5, 1.0, 2.0};
    std::vector<std::vector<double>> mu_combos = {{}};
    for (int slot = 5; slot < nparams; slot += 2) {
        std::vector<std::vector<double>> next;
        for (const auto& c : mu_combos)
            for (double mu : mu_starts) {
                auto e = c;
                e.push_back(mu);
                next.push_back(e);
            }
        mu_combos = next;
    }

    const ResidualFn fn = make_residual_fn(obj);
    const ParameterSplit split = split_parameters(names.size());
    Candidate best;
    Candidate best_any;
    for (int dk : {0, -1, 1, -2, 2}) {
        for (double nu : nu_starts) {
            for (const auto& mus : mu_combos) {
                Eigen::VectorXd theta(static_cast<Eigen::Index>(split.nonlinear.size()));
                theta(0) = center + dk * step;
                theta(1) = nu;
                for (std::size_t k = 0; k < mus.size(); ++k)
                    theta(static_cast<Eigen::Index>(2 + k)) = mus[k];
                LevMarResult lm = fit_from(fn, split, theta, names.size());
                ++fit.starts;
                if (!std::isfinite(lm.chi2))
                    continue;
                const bool in_range = lm.params(3) > 0.0 && lm.params(3) < 1.0;
                if (!best_any.valid || lm.chi2 < best_any.lm.chi2)
                    best_any = Candidate{lm, true};
                if (lm.converged && in_range) {
                    ++fit.starts_converged;
                    if (!best.valid || lm.chi2 < best.lm.chi2)
                        best = Candidate{lm, true};
                }
            }
        }
    }
    if (!best.valid) {
        std::string why = "scaling fit found no admissible optimum (converged with 0 < p_c0 < 1) from " +
                          std::to_string(fit.starts) + " starts";
        if (best_any.valid)
            why += "; best start ended at p_c0=" + std::to_string(best_any.lm.params(3)) +
                   ", nu0=" + std::to_string(best_any.lm.params(4)) +
                   " (the data may not resolve a size dependence)";
        throw FitFailure(why, best_any.valid ? best_any.lm.chi2 : std::numeric_limits<double>::infinity());
    }

    fit.chi2 = best.lm.chi2;
    fit.iterations = best.lm.iterations;
    const std::vector<double> errs = curvature_errors(best.lm.jtj);
    for (int j = 0; j < nparams; ++j)
        fit.parameters.push_back(FitParameter{names[j], best.lm.params(j), errs[static_cast<std::size_t>(j)]});

    if (options.bootstrap_replicas > 0) {
        std::mt19937_64 gen(options.bootstrap_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<std::vector<double>> samples(static_cast<std::size_t>(nparams));
        for (int rep = 0; rep < options.bootstrap_replicas; ++rep) {
            std::vector<PfailPoint> noisy = pts;
            for (auto& pt : noisy)
                pt.pfail += pt.std_error * normal(gen);
            const ScalingObjective nobj(noisy, ansatz);
            LevMarResult lm = levenberg_marquardt(make_residual_fn(nobj), best.lm.params);
            if (!lm.converged)
                continue;
            for (int j = 0; j < nparams; ++j)
                samples[static_cast<std::size_t>(j)].push_back(lm.params(j));
        }
        fit.bootstrap_replicas = static_cast<int>(samples[0].size());
        if (samples[0].size() >= 2) {
            for (int j = 0; j < nparams; ++j) {
                const auto& s = samples[static_cast<std::size_t>(j)];
                double mean = 0.0;
                for (double v : s)
                    mean += v;
                mean /= static_cast<double>(s.size());
                double var = 0.0;
                for (double v : s)
                    var += (v - mean) * (v - mean);
                fit.parameters[static_cast<std::size_t>(j)].bootstrap_error =
                    std::sqrt(var / static_cast<double>(s.size() - 1));
            }
        }
    }

    const double a = fit.value("A");
    const double asymptote = failure_asymptote(model);
    if (!(a > 0.0 && a < asymptote))
        fit.warnings.push_back("fitted A=" + std::to_string(a) + " outside (0, " + std::to_string(asymptote) + ")");
    return fit;
}

}  // namespace

ScalingFit fit_quadratic(std::span<const PfailPoint> points, Parity parity, const FitOptions& options) {
    return run_fit(points, parity, Ansatz::quadratic, options);
}

ScalingFit fit_corrected(std::span<const PfailPoint> points, Parity parity, const FitOptions& options) {
    return run_fit(points, parity, Ansatz::corrected, options);
}

// ---------------------------------------------------------------------------
// Slope exponent

SlopeExponent slope_exponent(std::span<const PfailPoint> points, double p_ref, std::optional<double> half_window) {
    std::map<int, std::vector<const PfailPoint*>> by_size;
    for (const auto& pt : points)
        by_size[pt.size].push_back(&pt);
    if (by_size.size() < 3)
        throw InputError("slope exponent needs at least 3 distinct sizes");

    SlopeExponent out;
    constexpr double kEps = 1e-9;
    for (auto& [L, group] : by_size) {
        SizeSlope ss;
        ss.size = L;
        double pmin = 1.0;
        double pmax = 0.0;
        for (const auto* pt : group) {
            pmin = std::min(pmin, pt->p.value());
            pmax = std::max(pmax, pt->p.value());
        }
        if (p_ref < pmin - kEps || p_ref > pmax + kEps) {
            out.warnings.push_back("L=" + std::to_string(L) + ": p grid does not bracket p_ref, excluded");
            out.slopes.push_back(ss);
            continue;
        }
        const double h = half_window.value_or(std::min(p_ref - pmin, pmax - p_ref)) + kEps;
        std::vector<const PfailPoint*> win;
        for (const auto* pt : group)
            if (std::abs(pt->p.value() - p_ref) <= h)
                win.push_back(pt);
        if (win.size() < 2)
            win = group;
        // Weighted regression of P on (p - p_ref); the quadratic term, when the
        // window allows it, keeps curvature out of the slope.
        const Eigen::Index ncoef = win.size() >= 4 ? 3 : 2;
        Eigen::MatrixXd X(static_cast<Eigen::Index>(win.size()), ncoef);
        Eigen::VectorXd y(static_cast<Eigen::Index>(win.size()));
        for (std::size_t i = 0; i < win.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double w = 1.0 / win[i]->std_error;
            const double dx = win[i]->p.value() - p_ref;
            X(row, 0) = w;
            X(row, 1) = dx * w;
            if (ncoef == 3)
                X(row, 2) = dx * dx * w;
            y(row) = win[i]->pfail * w;
        }
        ss.points = win.size();
        const Eigen::MatrixXd xtx = X.transpose() * X;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
        if (!lu.isInvertible()) {
            out.warnings.push_back("L=" + std::to_string(L) + ": degenerate p window, excluded");
            out.slopes.push_back(ss);
            continue;
        }
        const Eigen::MatrixXd cov = lu.inverse();
        const Eigen::VectorXd coef = cov * (X.transpose() * y);
        ss.slope = coef(1);
        ss.error = std::sqrt(std::max(cov(1, 1), 0.0));
        if (!(ss.slope > 0.0)) {
            out.warnings.push_back("L=" + std::to_string(L) + ": non-positive slope, excluded");
            out.slopes.push_back(ss);
            continue;
        }
        ss.used = true;
        out.slopes.push_back(ss);
    }

    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (const auto& ss : out.slopes) {
        if (!ss.used)
            continue;
        ++used;
        const double sigma = ss.error / ss.slope;
        const double w = sigma > 0.0 ? 1.0 / (sigma * sigma) : 1.0;
        const double x = std::log(static_cast<double>(ss.size));
        const double y = std::log(ss.slope);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    if (used < 3)
        throw InputError("slope exponent has only " + std::to_string(used) + " usable sizes (need 3)");
    const double det = sw * sxx - sx * sx;
    const double k = (sw * sxy - sx * sy) / det;
    const double k_err = std::sqrt(sw / det);
    out.inverse_nu0 = k;
    out.nu0 = 1.0 / k;
    out.error = k_err / (k * k);
    if (!(k > 0.0))
        out.warnings.push_back("log-log slope is not positive; nu0 estimate is meaningless");
    return out;
}

// ---------------------------------------------------------------------------
// Curve crossings

CrossingEstimate crossing_estimate(std::span<const PfailPoint> points) {
    std::map<int, std::map<std::int64_t, double>> curves;
    for (const auto& pt : points)
        curves[pt.size][pt.p.micros()] = pt.pfail;
    if (curves.size() < 2)
        throw InputError("crossing estimate needs at least 2 distinct sizes");

    CrossingEstimate out;
    std::vector<double> found;
    for (auto it = curves.begin(); std::next(it) != curves.end(); ++it) {
        auto nx = std::next(it);
        PairCrossing pc{it->first, nx->first, std::nullopt};
        std::vector<std::pair<double, double>> diff;  // (p, P_b - P_a)
        for (const auto& [pm, ya] : it->second) {
            auto jt = nx->second.find(pm);
            if (jt != nx->second.end())
                diff.emplace_back(static_cast<double>(pm) / static_cast<double>(Decimal::kScale), jt->second - ya);
        }
        int crossings = 0;
        for (std::size_t i = 0; i < diff.size(); ++i) {
            double p_here = std::numeric_limits<double>::quiet_NaN();
            if (diff[i].second == 0.0 && (i == 0 || diff[i - 1].second != 0.0)) {
                p_here = diff[i].first;
            } else if (i + 1 < diff.size() && diff[i].second != 0.0 && diff[i + 1].second != 0.0 &&
                       (diff[i].second < 0.0) != (diff[i + 1].second < 0.0)) {
                const auto [p0, d0] = diff[i];
                const auto [p1, d1] = diff[i + 1];
                p_here = p0 - d0 * (p1 - p0) / (d1 - d0);
            }
            if (std::isnan(p_here))
                continue;
            ++crossings;
            if (!pc.p)
                pc.p = p_here;
        }
        if (!pc.p) {
            out.warnings.push_back("sizes " + std::to_string(pc.size_a) + " and " + std::to_string(pc.size_b) +
                                   ": curves do not cross in the sampled range");
        } else {
            if (crossings > 1)
                out.warnings.push_back("sizes " + std::to_string(pc.size_a) + " and " + std::to_string(pc.size_b) +
                                       ": multiple crossings, using the lowest p");
            found.push_back(*pc.p);
        }
        out.pairs.push_back(pc);
    }
    if (!found.empty()) {
        out.p_c0 = median_of(found);
        const auto [lo, hi] = std::minmax_element(found.begin(), found.end());
        out.spread = 0.5 * (*hi - *lo);
    }
    return out;
}

}  // namespace zerot
