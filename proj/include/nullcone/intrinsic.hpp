#pragma once
// Chart-side operators by finite differences.  Independent of the jet code:
// derivatives come from 5-point central differences with one Richardson step.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nullcone/forms.hpp"

namespace nullcone::intrinsic {

struct FdOptions {
    double step = 1e-3;      // scaled by max(1, |x_mu|)
    double tolerance = 1e-5; // allowed Richardson disagreement, relative to max(1, |value|)
};

using VecFn = std::function<Eigen::VectorXd(std::span<const double>)>;

/// d fn / dx_dir; StepFailure when the two Richardson levels disagree.
Eigen::VectorXd partial(const VecFn& fn, std::span<const double> x, int dir,
                        const FdOptions& opt = {});

using ChartField = std::function<forms::Form(std::span<const double>)>;
using MetricFn = std::function<Eigen::MatrixXd(std::span<const double>)>;

forms::Form d(const ChartField& b, std::span<const double> x, const FdOptions& opt = {});
forms::Form delta(const ChartField& b, const MetricFn& g, double eps, std::span<const double> x,
                  const FdOptions& opt = {});
forms::Form box(const ChartField& b, const MetricFn& g, double eps, std::span<const double> x,
                const FdOptions& opt = {});

/// Gamma^l_{mu nu} as n matrices indexed [l](mu, nu).
std::vector<Eigen::MatrixXd> christoffel(const MetricFn& g, std::span<const double> x,
                                         const FdOptions& opt = {});

/// Covariant Hessian of a scalar function of the chart coordinates.
Eigen::MatrixXd hessian(const std::function<double(std::span<const double>)>& phi, const MetricFn& g,
                        std::span<const double> x, const FdOptions& opt = {});

}  // namespace nullcone::intrinsic
