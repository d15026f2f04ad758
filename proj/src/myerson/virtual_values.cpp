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

#include "af/myerson/virtual_values.hpp"

#include <algorithm>
#include <cmath>

#include "af/errors.hpp"

namespace af::myerson {

VirtualValueTable::VirtualValueTable(double lo, double hi, std::vector<double> raw, std::vector<double> ironed)
    : lo_(lo), hi_(hi), raw_(std::move(raw)), ironed_(std::move(ironed)) {
  if (ironed_.size() < 2 || raw_.size() != ironed_.size() || !(hi > lo)) {
    throw ValidationError("virtual value table needs at least two grid points on a nonempty interval");
  }
}

double VirtualValueTable::grid_point(int k) const {
  const int last = grid_size() - 1;
  return k == last ? hi_ : lo_ + (hi_ - lo_) * static_cast<double>(k) / last;
}

double VirtualValueTable::operator()(double t) const {
  if (t <= lo_) return ironed_.front();
  if (t >= hi_) return ironed_.back();
  const int last = grid_size() - 1;
  const double pos = (t - lo_) / (hi_ - lo_) * last;
  const int k = std::min(static_cast<int>(pos), last - 1);
  const double w = pos - k;
  return ironed_[static_cast<std::size_t>(k)] * (1.0 - w) + ironed_[static_cast<std::size_t>(k + 1)] * w;
}

double VirtualValueTable::threshold(double level, double tol) const {
  if ((*this)(lo_) >= level) return lo_;
  if ((*this)(hi_) < level) return hi_;
  double a = lo_, b = hi_;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if ((*this)(mid) >= level) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return b;
}

VirtualValueTable build_virtual_values(const env::ValueLaw& law, int grid) {
  if (grid < 2) throw ValidationError("virtual value grid needs at least 2 points");
  const double lo = law.lo, hi = law.hi;
  const auto g = static_cast<std::size_t>(grid);
  std::vector<double> t(g), q(g), raw(g);
  for (std::size_t k = 0; k < g; ++k) {
    t[k] = k + 1 == g ? hi : lo + (hi - lo) * static_cast<double>(k) / (grid - 1);
    q[k] = law.survival(t[k]);
    if (k + 1 == g) {
      raw[k] = hi;
      continue;
    }
    const double f = law.pdf(t[k]);
    if (!(f > 0.0) || !std::isfinite(f)) {
      if (k == 0) {
        // Only the endpoint may have zero density; fall back to the next point.
        raw[k] = -INFINITY;
        continue;
      }
      throw ValidationError("density vanishes at t=" + std::to_string(t[k]) + " inside the support of " + law.describe());
    }
    raw[k] = t[k] - q[k] / f;
  }
  if (std::isinf(raw[0])) raw[0] = std::min(raw[1], t[0]);

  // Upper concave hull of (q, R = t q). q falls as t rises, so walk the grid
  // from the top end, where q is smallest.
  std::vector<std::size_t> hull;
  auto revenue = [&](std::size_t k) { return t[k] * q[k]; };
  for (std::size_t step = 0; step < g; ++step) {
    const std::size_t k = g - 1 - step;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // Drop b when it lies on or below the chord from a to k.
      const double cross = (q[b] - q[a]) * (revenue(k) - revenue(a)) - (revenue(b) - revenue(a)) * (q[k] - q[a]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  std::vector<double> ironed = raw;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t upper = hull[h], lower = hull[h + 1];  // upper > lower in grid index
    if (upper - lower < 2) continue;
    const double dq = q[lower] - q[upper];
    if (!(dq > 0.0)) continue;
    const double slope = (revenue(lower) - revenue(upper)) / dq;
    for (std::size_t k = lower + 1; k < upper; ++k) ironed[k] = slope;
  }
  for (std::size_t k = 1; k < g; ++k) ironed[k] = std::max(ironed[k], ironed[k - 1]);
  for (std::size_t k = 0; k < g; ++k) ironed[k] = std::min(ironed[k], t[k]);
  return VirtualValueTable(lo, hi, std::move(raw), std::move(ironed));
}

}  // namespace af::myerson
