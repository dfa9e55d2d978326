#pragma once

// Dickman's function and the comparison of smooth-divisor counts with it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "divisors.hpp"

namespace alladiff {

/// rho sampled on a uniform grid. Exact on [0, 2]; beyond 2 the averaging form
/// u rho(u) = int_{u-1}^{u} rho(t) dt is solved by trapezoid with a sliding window sum.
class RhoTable {
 public:
  explicit RhoTable(double step = 1e-3, double u_max = 10.0) : step_(step), u_max_(u_max) {
    detail::require(step > 0 && step <= 0.5, "step must lie in (0, 0.5]");
    const double inv = 1.0 / step;
    per_unit_ = static_cast<std::size_t>(std::llround(inv));
    detail::require(std::abs(inv - static_cast<double>(per_unit_)) < 1e-9, "1/step must be an integer");
    detail::require(u_max >= 2.0, "u_max must be >= 2");
    const std::size_t N = per_unit_;
    const auto n = static_cast<std::size_t>(std::ceil(u_max * static_cast<double>(N) - 1e-9));
    samples_.resize(n + 1);
    for (std::size_t i = 0; i <= std::min(n, 2 * N); ++i) {
      const double u = at(i);
      samples_[i] = u <= 1.0 ? 1.0 : 1.0 - std::log(u);
    }
    // window = sum of samples strictly inside (i - N, i)
    double window = 0;
    for (std::size_t j = N + 2; j <= 2 * N; ++j) window += samples_[j];
    for (std::size_t i = 2 * N + 1; i <= n; ++i) {
      samples_[i] = step_ * (0.5 * samples_[i - N] + window) / (at(i) - 0.5 * step_);
      window += samples_[i] - samples_[i - N + 1];
    }
  }

  double step() const { return step_; }
  double u_max() const { return u_max_; }
  const std::vector<double>& samples() const { return samples_; }

  double operator()(double u) const {
    detail::require(u >= 0, "rho is defined for u >= 0");
    detail::require(u <= u_max_ + 1e-12, "u beyond the tabulated range");
    if (u <= 1.0) return 1.0;
    if (u <= 2.0) return 1.0 - std::log(u);
    const double x = u / step_;
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= samples_.size()) return samples_.back();
    const double frac = x - static_cast<double>(i);
    return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
  }

 private:
  double at(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(per_unit_); }

  double step_;
  double u_max_;
  std::size_t per_unit_ = 0;
  std::vector<double> samples_;
};

inline double dickman_rho(double u, double step = 1e-3, double u_max = 10.0) {
  detail::require(u >= 0, "rho is defined for u >= 0");
  return RhoTable(step, std::max(u_max, 2.0))(u);
}

/// c_K = h q^{1-g} / (q - 1).
inline Rational c_constant(const BigInt& h, int g, std::uint64_t q) {
  detail::require(h >= 1, "class number must be >= 1");
  detail::require(q >= 2, "q must be >= 2");
  detail::require(g >= 0, "genus must be >= 0");
  Rational c(h, 1);
  if (g <= 1)
    c *= ipow(q, static_cast<unsigned long>(1 - g));
  else
    c /= ipow(q, static_cast<unsigned long>(g - 1));
  c /= big(q - 1);
  c.canonicalize();
  return c;
}

struct PsiRatioEntry {
  int n = 0, m = 0;
  BigInt psi;
  Rational u;
  Rational ratio;  // Psi(n, m) / (c_K q^n)
  double rho = 0;
  double deviation = 0;  // |ratio - rho(u)|
  std::string regime;
};

inline std::string smoothness_regime(int n, int m) {
  if (m >= n) return "u<=1";
  if (10 * m <= n) return "m<=n/10";
  if (static_cast<double>(m) * m >= n * std::log(static_cast<double>(n))) return "m>=sqrt(n log n)";
  return "intermediate";
}

inline std::vector<PsiRatioEntry> psi_ratio_report(const PlaceTable& table, const std::vector<std::pair<int, int>>& pairs,
                                                   const RhoTable& rho = RhoTable()) {
  const Rational c = table.leading_constant();
  std::vector<PsiRatioEntry> out;
  for (const auto& [n, m] : pairs) {
    PsiRatioEntry e;
    e.n = n;
    e.m = m;
    e.psi = psi(table, n, m);
    e.u = make_rational(BigInt(n), BigInt(m));
    e.ratio = Rational(e.psi) / (c * Rational(ipow(table.q, static_cast<unsigned long>(n))));
    e.ratio.canonicalize();
    e.rho = rho(e.u.get_d());
    e.deviation = std::abs(e.ratio.get_d() - e.rho);
    e.regime = smoothness_regime(n, m);
    out.push_back(std::move(e));
  }
  return out;
}

/// For every u sampled at three or more m, whether the deviation strictly
/// decreases as m grows.
inline std::map<std::string, bool> deviation_trends(const std::vector<PsiRatioEntry>& entries) {
  std::map<std::string, std::vector<const PsiRatioEntry*>> by_u;
  for (const auto& e : entries) by_u[e.u.get_str()].push_back(&e);
  std::map<std::string, bool> out;
  for (auto& [u, list] : by_u) {
    if (list.size() < 3) continue;
    std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->m < b->m; });
    bool ok = true;
    for (std::size_t i = 1; i < list.size(); ++i)
      if (!(list[i]->deviation < list[i - 1]->deviation)) ok = false;
    out[u] = ok;
  }
  return out;
}

}  // namespace alladiff
