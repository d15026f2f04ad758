// Copyright 2026 The Auction Forge Authors.
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

#include "af/env/value_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "af/errors.hpp"

namespace af::env {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Standard-normal quantile of the lower-tail probability p, and of the
// upper-tail probability when `upper` is set (keeps precision near 1).
double normal_tail_quantile(double prob, bool upper) {
  if (!(prob > 0.0)) return upper ? INFINITY : -INFINITY;
  if (prob >= 1.0) return upper ? -INFINITY : INFINITY;
  if (upper) return -normal_quantile(prob);
  return normal_quantile(prob);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  if (!(p > 0.0)) return -INFINITY;
  if (!(p < 1.0)) return INFINITY;
  double x = acklam(p);
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

ValueLaw ValueLaw::truncated_normal(double mean, double stddev, double lo, double hi) {
  ValueLaw law;
  law.kind = LawKind::kTruncatedNormal;
  law.mean = mean;
  law.stddev = stddev;
  law.lo = lo;
  law.hi = hi;
  return law;
}

ValueLaw ValueLaw::truncated_exponential(double rate, double lo, double hi) {
  ValueLaw law;
  law.kind = LawKind::kTruncatedExponential;
  law.rate = rate;
  law.lo = lo;
  law.hi = hi;
  return law;
}

ValueLaw ValueLaw::uniform(double lo, double hi) {
  ValueLaw law;
  law.kind = LawKind::kUniform;
  law.lo = lo;
  law.hi = hi;
  return law;
}

double ValueLaw::cdf(double t) const {
  if (t <= lo) return 0.0;
  if (t >= hi) return 1.0;
  switch (kind) {
    case LawKind::kUniform: return (t - lo) / (hi - lo);
    case LawKind::kTruncatedExponential:
      return std::expm1(-rate * (t - lo)) / std::expm1(-rate * (hi - lo));
    case LawKind::kTruncatedNormal: {
      const double a = (lo - mean) / stddev;
      const double b = (hi - mean) / stddev;
      const double z = (t - mean) / stddev;
      // Work in whichever tail keeps the differences well conditioned.
      if (a > 0.0) return (normal_sf(a) - normal_sf(z)) / (normal_sf(a) - normal_sf(b));
      return (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
    }
  }
  return 0.0;
}

double ValueLaw::survival(double t) const {
  if (t <= lo) return 1.0;
  if (t >= hi) return 0.0;
  switch (kind) {
    case LawKind::kUniform: return (hi - t) / (hi - lo);
    case LawKind::kTruncatedExponential: {
      const double span = hi - lo;
      return -std::expm1(-rate * (hi - t)) * std::exp(-rate * (t - lo)) / -std::expm1(-rate * span);
    }
    case LawKind::kTruncatedNormal: {
      const double a = (lo - mean) / stddev;
      const double b = (hi - mean) / stddev;
      const double z = (t - mean) / stddev;
      if (b < 0.0) return (normal_cdf(b) - normal_cdf(z)) / (normal_cdf(b) - normal_cdf(a));
      return (normal_sf(z) - normal_sf(b)) / (normal_sf(a) - normal_sf(b));
    }
  }
  return 0.0;
}

double ValueLaw::pdf(double t) const {
  if (t < lo || t > hi) return 0.0;
  switch (kind) {
    case LawKind::kUniform: return 1.0 / (hi - lo);
    case LawKind::kTruncatedExponential:
      return rate * std::exp(-rate * (t - lo)) / -std::expm1(-rate * (hi - lo));
    case LawKind::kTruncatedNormal: {
      const double a = (lo - mean) / stddev;
      const double b = (hi - mean) / stddev;
      const double mass = a > 0.0 ? normal_sf(a) - normal_sf(b) : normal_cdf(b) - normal_cdf(a);
      return normal_pdf((t - mean) / stddev) / (stddev * mass);
    }
  }
  return 0.0;
}

double ValueLaw::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  double t = lo;
  switch (kind) {
    case LawKind::kUniform: t = lo + u * (hi - lo); break;
    case LawKind::kTruncatedExponential:
      t = lo - std::log1p(u * std::expm1(-rate * (hi - lo))) / rate;
      break;
    case LawKind::kTruncatedNormal: {
      const double a = (lo - mean) / stddev;
      const double b = (hi - mean) / stddev;
      const double lower = normal_cdf(a) + u * (normal_cdf(b) - normal_cdf(a));
      double z;
      if (lower < 0.5) {
        z = normal_tail_quantile(lower, false);
      } else {
        const double upper = (1.0 - u) * normal_sf(a) + u * normal_sf(b);
        z = normal_tail_quantile(upper, true);
      }
      t = mean + stddev * z;
      break;
    }
  }
  return std::clamp(t, lo, hi);
}

std::string ValueLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case LawKind::kUniform: os << "U[" << lo << ", " << hi << "]"; break;
    case LawKind::kTruncatedExponential: os << "Exp(" << rate << ") on [" << lo << ", " << hi << "]"; break;
    case LawKind::kTruncatedNormal: os << "N(" << mean << ", " << stddev << ") on [" << lo << ", " << hi << "]"; break;
  }
  return os.str();
}

namespace {

int discrete_id(std::span<const float> ctx, int domain, const char* what) {
  const int id = static_cast<int>(std::lround(ctx[0]));
  if (id < 1 || id > domain) {
    throw ValidationError(std::string(what) + " context id " + std::to_string(id) + " outside 1.." +
                          std::to_string(domain));
  }
  return id;
}

double sigmoid_dot(std::span<const float> x, std::span<const float> y) {
  double dot = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) dot += static_cast<double>(x[k]) * y[k];
  return 1.0 / (1.0 + std::exp(-dot));
}

}  // namespace

ValueLaw conditional_law(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                         std::span<const float> y_j) {
  if (static_cast<int>(x_i.size()) != spec.bidder_dim || static_cast<int>(y_j.size()) != spec.item_dim) {
    throw ValidationError("context dimensions do not match setting " + spec.label());
  }
  switch (spec.family) {
    case ValueFamily::kNormalByBidder: {
      const int x = discrete_id(x_i, spec.bidder_domain, "bidder");
      discrete_id(y_j, spec.item_domain, "item");
      return ValueLaw::truncated_normal(x / 6.0, 0.1);
    }
    case ValueFamily::kNormalOrExponential: {
      const int x = discrete_id(x_i, spec.bidder_domain, "bidder");
      const int y = discrete_id(y_j, spec.item_domain, "item");
      if (y == 1) return ValueLaw::truncated_normal(x / 6.0, 0.1);
      return ValueLaw::truncated_exponential((bidder + 1) / 6.0);
    }
    case ValueFamily::kUniformSigmoid:
      return ValueLaw::uniform(0.0, sigmoid_dot(x_i, y_j));
    case ValueFamily::kNormalModular: {
      const int x = discrete_id(x_i, spec.bidder_domain, "bidder");
      const int y = discrete_id(y_j, spec.item_domain, "item");
      return ValueLaw::truncated_normal(((x + y) % 10 + 1) / 11.0, 0.05);
    }
  }
  throw ValidationError("unsupported value law for setting " + spec.label());
}

double conditional_cdf(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                       std::span<const float> y_j, double t) {
  return conditional_law(spec, bidder, x_i, y_j).cdf(t);
}

double conditional_pdf(const SettingSpec& spec, int bidder, std::span<const float> x_i,
                       std::span<const float> y_j, double t) {
  return conditional_law(spec, bidder, x_i, y_j).pdf(t);
}

float value_cap(const SettingSpec& spec, std::span<const float> x_i, std::span<const float> y_j) {
  if (spec.unit_box()) return 1.0f;
  return static_cast<float>(sigmoid_dot(x_i, y_j));
}

}  // namespace af::env
