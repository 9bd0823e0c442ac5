#include "dispersive/decay_fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dispersive {

namespace {

struct LineFit {
  double slope;
  double intercept;
  double residual;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit needs at least two distinct abscissae");
  LineFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += d * d;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

void check_positive(double v, const char* what, std::size_t i) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite (sample " +
                                std::to_string(i) + ")");
  }
}

}  // namespace

PowerFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_power_law needs at least two samples");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    check_positive(x[i], "abscissa", i);
    check_positive(y[i], "value", i);
  }
  // Values are taken relative to the first sample: the quotient is exact
  // under scaling by powers of two, so the slope is bitwise stable.
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i] / y[0]);
  }
  const LineFit line = least_squares(lx, ly);
  return PowerFit{line.slope, line.intercept + std::log(y[0]), line.residual, x.size()};
}

PowerFit fit_exponent(std::span<const DecaySample> samples) {
  if (samples.size() < kMinDecaySamples) {
    throw std::invalid_argument("decay fit needs at least " + std::to_string(kMinDecaySamples) + " samples");
  }
  std::vector<double> t(samples.size());
  std::vector<double> m(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i].t;
    m[i] = samples[i].M;
  }
  return fit_power_law(t, m);
}

DecaySeries make_decay_series(std::vector<DecaySample> samples, double predicted, double slack, bool sharp) {
  if (!(slack >= 0.0)) throw std::invalid_argument("slack must be non-negative");
  const PowerFit fit = fit_exponent(samples);
  DecaySeries series;
  series.samples = std::move(samples);
  series.fitted_exponent = fit.slope;
  series.intercept = fit.intercept;
  series.residual = fit.residual;
  series.predicted_exponent = predicted;
  series.slack = slack;
  series.sharp = sharp;
  series.pass = fit.slope <= predicted + slack;
  if (sharp) series.pass = series.pass && std::abs(fit.slope - predicted) <= slack;
  return series;
}

std::vector<double> geometric_times(double t_lo, double t_hi, std::size_t count) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo) || count < 2) {
    throw std::invalid_argument("geometric_times needs 0 < t_lo < t_hi and count >= 2");
  }
  std::vector<double> out(count);
  const double ratio = std::log(t_hi / t_lo);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = t_lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.back() = t_hi;
  return out;
}

DecaySeries kernel_decay_sweep(const DispersionRelation& rel, int n, int k, std::span<const double> times,
                               double predicted, double slack, bool sharp, const SupGridSpec& grid) {
  std::vector<DecaySample> samples;
  samples.reserve(times.size());
  for (double t : times) samples.push_back({t, sup_norm(rel, n, k, t, grid).value});
  return make_decay_series(std::move(samples), predicted, slack, sharp);
}

DecaySeries lowfreq_decay_sweep(const DispersionRelation& rel, int n, std::span<const double> times,
                                double predicted, double slack, double tol, const SupGridSpec& grid) {
  std::vector<DecaySample> samples;
  samples.reserve(times.size());
  for (double t : times) samples.push_back({t, low_freq_sup(rel, n, t, tol, grid).value});
  return make_decay_series(std::move(samples), predicted, slack, false);
}

ScalingFit fit_dyadic_scaling(std::span<const int> ks, std::span<const double> values) {
  if (ks.size() != values.size()) throw std::invalid_argument("fit_dyadic_scaling: length mismatch");
  if (ks.size() < 2) throw std::invalid_argument("fit_dyadic_scaling needs at least two scales");
  std::vector<double> x(ks.size());
  std::vector<double> y(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    check_positive(values[i], "sup norm", i);
    x[i] = ks[i];
  }
  for (std::size_t i = 0; i < ks.size(); ++i) y[i] = std::log2(values[i] / values[0]);
  const LineFit line = least_squares(x, y);
  ScalingFit out;
  out.ks.assign(ks.begin(), ks.end());
  out.values.assign(values.begin(), values.end());
  out.slope = line.slope;
  out.intercept = line.intercept + std::log2(values[0]);
  out.residual = line.residual;
  return out;
}

ScalingFit dyadic_scaling_fit(const DispersionRelation& rel, int n, double t_fixed,
                              std::span<const int> k_list, const SupGridSpec& grid) {
  std::vector<double> values;
  values.reserve(k_list.size());
  for (int k : k_list) {
    if (k < 0 || k > 8) throw std::invalid_argument("dyadic scaling fit needs k in [0, 8]");
    values.push_back(sup_norm(rel, n, k, t_fixed, grid).value);
  }
  return fit_dyadic_scaling(k_list, values);
}

}  // namespace dispersive
