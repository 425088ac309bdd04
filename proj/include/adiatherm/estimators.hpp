// Copyright 2026 The adiatherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADIATHERM_ESTIMATORS_HPP
#define ADIATHERM_ESTIMATORS_HPP

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "adiatherm/types.hpp"

namespace adiatherm {

/// Binary entropy (nats) of (1 + tanh beta0) / 2.
double s0_of_beta0(double beta0);

/// Entropy density of a product X-thermal state with <X> = mean_x.
double entropy_from_x(double mean_x);

/// entropy_from_x(r tanh beta0).
double predicted_noisy_entropy(double beta0, double r);

/// Closed-form derivative of predicted_noisy_entropy with respect to beta0,
/// written as a magnitude: r (1 - r^2 tanh^2) artanh(r tanh) / (1 + (1 - r^2) sinh^2).
double d_noisy_entropy_d_beta0(double beta0, double r);

/// |2 ln(1 - r)| / C, the largest reachable inverse temperature at noise r.
double beta_max_scaling(double r, double c);

/// -beta0 (1 - tanh^2 beta0) / (dE/dbeta0), valid for noiseless isentropic runs.
double beta_closed_form(double beta0, double de_dbeta0);

/// One protocol data point. beta_f is NaN until estimate_beta_curve fills it.
struct CurveRecord {
    double beta0 = 0.0;
    double E = 0.0;
    double S = 0.0;
    double beta_f = std::numeric_limits<double>::quiet_NaN();
    double p = 0.0;
    int M = 0;
    double dt = 0.0;
    int N = 0;
    /// Set when |dE/dbeta0| fell below the flatness threshold.
    bool flat = false;
};

/// beta_f = (dS/dbeta0) / (dE/dbeta0) with centered differences inside the grid
/// and one-sided ones at its ends. Flat-energy points keep beta_f = NaN.
std::vector<CurveRecord> estimate_beta_curve(std::span<const CurveRecord> records,
                                             double flat_threshold = 1e-6);

/// Value with a one-sigma standard error.
struct Measured {
    double value = 0.0;
    double error = 0.0;
};

struct BetaEstimate {
    double beta = 0.0;
    double beta_error = 0.0;
    double temperature = 0.0;
    double temperature_error = 0.0;
    /// m = -1 or +1 drives the logarithm to infinity; beta is then +-inf and T = 0.
    bool overflow = false;
};

/// beta = 1/2 (m - m') / (e - e') ln((1 - m) / (1 + m)) with first-order
/// Gaussian error propagation; T = 1/beta carries sigma_beta / beta^2.
BetaEstimate beta_from_observables(Measured e, Measured e_prime, Measured m, Measured m_prime);

enum class SeriesKind { Entropy, Energy };

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    SeriesKind kind = SeriesKind::Entropy;

    void validate() const;
};

/// S(t) = entropy_from_x(exp(-alpha t) tanh beta0).
double decay_model(double t, double alpha, double beta0);

struct DecayFit {
    double alpha = 0.0;
    /// exp(-alpha T) at the last sample time.
    double r = 1.0;
    double rms = 0.0;
};

/// Least-squares alpha >= 0 for decay_model.
DecayFit fit_decay(const TimeSeries& series, double beta0);

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Linear interpolation on a strictly monotone abscissa (increasing or decreasing).
/// Returns NaN outside the sampled range.
double interpolate(std::span<const double> x, std::span<const double> y, double at);

}  // namespace adiatherm

#endif  // ADIATHERM_ESTIMATORS_HPP
