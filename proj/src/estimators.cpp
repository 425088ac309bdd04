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

#include "adiatherm/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "adiatherm/types.hpp"

namespace adiatherm {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_r(double r) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidArgument(fmt::format("noise amplitude r = {} outside (0, 1]", r));
}

}  // namespace

double s0_of_beta0(double beta0) {
    if (!std::isfinite(beta0)) {
        if (std::isnan(beta0)) throw InvalidArgument("beta0 is NaN");
        return 0.0;
    }
    return entropy_from_x(std::tanh(beta0));
}

double entropy_from_x(double mean_x) {
    if (std::isnan(mean_x) || std::abs(mean_x) > 1.0 + 1e-12) {
        throw InvalidArgument(fmt::format("<X> = {} outside [-1, 1]", mean_x));
    }
    const double m = std::clamp(mean_x, -1.0, 1.0);
    return 0.0 - xlogx(0.5 * (1.0 + m)) - xlogx(0.5 * (1.0 - m));  // leading 0.0 avoids -0
}

double predicted_noisy_entropy(double beta0, double r) {
    check_r(r);
    return entropy_from_x(r * std::tanh(beta0));
}

double d_noisy_entropy_d_beta0(double beta0, double r) {
    check_r(r);
    const double t = std::tanh(beta0);
    const double s = std::sinh(beta0);
    return r * (1.0 - r * r * t * t) * std::atanh(r * t) / (1.0 + (1.0 - r * r) * s * s);
}

double beta_max_scaling(double r, double c) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("beta_max_scaling needs 0 < r < 1");
    if (!(c > 0.0)) throw InvalidArgument("beta_max_scaling needs C > 0");
    return std::abs(2.0 * std::log(1.0 - r)) / c;
}

double beta_closed_form(double beta0, double de_dbeta0) {
    if (de_dbeta0 == 0.0 || !std::isfinite(de_dbeta0)) {
        throw InvalidArgument("dE/dbeta0 must be finite and nonzero");
    }
    const double t = std::tanh(beta0);
    return -beta0 * (1.0 - t * t) / de_dbeta0;
}

std::vector<CurveRecord> estimate_beta_curve(std::span<const CurveRecord> records, double flat_threshold) {
    if (records.size() < 3) throw InvalidArgument("temperature estimation needs at least three beta0 points");
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!std::isfinite(r.beta0) || !std::isfinite(r.E) || !std::isfinite(r.S)) {
            throw NumericalError(fmt::format("non-finite record at beta0 index {}", i));
        }
        if (i > 0 && !(r.beta0 > records[i - 1].beta0)) {
            throw InvalidArgument("beta0 grid must be strictly increasing");
        }
    }
    std::vector<CurveRecord> out(records.begin(), records.end());
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        const double h = records[hi].beta0 - records[lo].beta0;
        const double de = (records[hi].E - records[lo].E) / h;
        const double ds = (records[hi].S - records[lo].S) / h;
        out[i].flat = std::abs(de) < flat_threshold;
        out[i].beta_f = out[i].flat ? std::numeric_limits<double>::quiet_NaN() : ds / de;
    }
    return out;
}

BetaEstimate beta_from_observables(Measured e, Measured e_prime, Measured m, Measured m_prime) {
    const double de = e.value - e_prime.value;
    if (de == 0.0) throw InvalidArgument("e and e' coincide; temperature undefined");
    if (std::abs(m.value) > 1.0 + 1e-12 || std::abs(m_prime.value) > 1.0 + 1e-12) {
        throw InvalidArgument("|m| must not exceed 1");
    }
    // Rounding can push an exact +-1 just past the boundary.
    m.value = std::clamp(m.value, -1.0, 1.0);
    m_prime.value = std::clamp(m_prime.value, -1.0, 1.0);
    BetaEstimate out;
    const double dm = m.value - m_prime.value;
    if (std::abs(m.value) == 1.0) {
        out.overflow = true;
        out.beta = dm == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), -m.value * dm / de);
        out.beta_error = std::numeric_limits<double>::infinity();
        out.temperature = dm == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.temperature_error = 0.0;
        return out;
    }
    const double log_ratio = std::log((1.0 - m.value) / (1.0 + m.value));
    out.beta = 0.5 * dm / de * log_ratio;

    const double d_e = -out.beta / de;
    const double d_e_prime = out.beta / de;
    const double d_m = 0.5 * (log_ratio / de + dm / de * (-2.0 / (1.0 - m.value * m.value)));
    const double d_m_prime = -0.5 * log_ratio / de;
    out.beta_error = std::hypot(d_e * e.error, d_e_prime * e_prime.error, std::hypot(d_m * m.error, d_m_prime * m_prime.error));
    if (out.beta == 0.0) {
        out.temperature = std::numeric_limits<double>::infinity();
        out.temperature_error = std::numeric_limits<double>::infinity();
    } else {
        out.temperature = 1.0 / out.beta;
        out.temperature_error = out.beta_error / (out.beta * out.beta);
    }
    return out;
}

void TimeSeries::validate() const {
    if (times.size() != values.size()) throw InvalidArgument("time series columns differ in length");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InvalidArgument("time series times must increase strictly");
    }
}

double decay_model(double t, double alpha, double beta0) {
    return entropy_from_x(std::exp(-alpha * t) * std::tanh(beta0));
}

DecayFit fit_decay(const TimeSeries& series, double beta0) {
    series.validate();
    if (series.kind != SeriesKind::Entropy) throw InvalidArgument("decay fits need an entropy series");
    if (beta0 == 0.0) throw InvalidArgument("decay fit is degenerate at beta0 = 0");
    if (series.times.size() < 2) throw InvalidArgument("decay fit needs at least two samples");
    const double t_max = series.times.back();
    if (!(t_max > 0.0)) throw InvalidArgument("decay fit needs positive times");

    auto cost = [&](double alpha) {
        double sum = 0.0;
        for (std::size_t i = 0; i < series.times.size(); ++i) {
            const double d = series.values[i] - decay_model(series.times[i], alpha, beta0);
            sum += d * d;
        }
        return sum;
    };

    // Coarse scan over a range where exp(-alpha t_max) spans 1 down to 1e-8,
    // then golden-section refinement in the best bracket.
    const double alpha_hi = 18.0 / t_max;
    constexpr int kScan = 400;
    int best = 0;
    double best_cost = cost(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double c = cost(alpha_hi * i / kScan);
        if (c < best_cost) {
            best_cost = c;
            best = i;
        }
    }
    double lo = alpha_hi * std::max(best - 1, 0) / kScan;
    double hi = alpha_hi * std::min(best + 1, kScan) / kScan;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    double f1 = cost(x1);
    double f2 = cost(x2);
    int iterations = 0;
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
        if (++iterations > 500) throw NumericalError("decay fit did not converge");
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = cost(x2);
        }
    }
    DecayFit fit;
    fit.alpha = 0.5 * (lo + hi);
    // The boundary alpha = 0 is attainable exactly; keep it when it is no worse.
    if (cost(0.0) <= cost(fit.alpha)) fit.alpha = 0.0;
    fit.r = std::exp(-fit.alpha * t_max);
    fit.rms = std::sqrt(cost(fit.alpha) / series.times.size());
    return fit;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("line fit needs two or more paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericalError("line fit abscissae are all equal");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double interpolate(std::span<const double> x, std::span<const double> y, double at) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("interpolation needs two or more samples");
    const bool increasing = x.back() > x.front();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if ((increasing && !(x[i + 1] > x[i])) || (!increasing && !(x[i + 1] < x[i]))) {
            throw InvalidArgument("interpolation abscissa must be strictly monotone");
        }
    }
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i];
        const double b = x[i + 1];
        if ((at >= std::min(a, b)) && (at <= std::max(a, b))) {
            const double w = (at - a) / (b - a);
            return y[i] + w * (y[i + 1] - y[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace adiatherm
