#include "bellscan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bellscan {

namespace {

constexpr Outcome kPlus = Outcome::plus;
constexpr Outcome kMinus = Outcome::minus;

struct PairCells {
  double pp, pm, mp, mm, total;
};

PairCells pair_cells(const CountsTable& counts, int a, int b) {
  const auto total = counts.total(a, b);
  if (total == 0) {
    throw EmptyCellError("setting pair (" + std::to_string(a) + "," + std::to_string(b) +
                         ") has no trials");
  }
  return PairCells{static_cast<double>(counts.at(a, b, kPlus, kPlus)),
                   static_cast<double>(counts.at(a, b, kPlus, kMinus)),
                   static_cast<double>(counts.at(a, b, kMinus, kPlus)),
                   static_cast<double>(counts.at(a, b, kMinus, kMinus)),
                   static_cast<double>(total)};
}

double quadrature(double s1, double s2) { return std::sqrt(s1 * s1 + s2 * s2); }

StatWithSigma difference(const Estimate& lhs, const Estimate& rhs) {
  return two_tailed_stat(lhs.value - rhs.value, quadrature(lhs.sigma, rhs.sigma));
}

long double log_binomial_pmf(std::uint64_t n, std::uint64_t j) {
  static const long double log_win = std::log(0.75L);
  static const long double log_loss = std::log(0.25L);
  const auto nl = static_cast<long double>(n);
  const auto jl = static_cast<long double>(j);
  return std::lgamma(nl + 1) - std::lgamma(jl + 1) - std::lgamma(nl - jl + 1) + jl * log_win +
         (nl - jl) * log_loss;
}

}  // namespace

CountsTable tabulate(std::span<const CandidateEvent> trials) {
  CountsTable table;
  for (const auto& t : trials) table.add(t);
  return table;
}

double joint_prob(const CountsTable& counts, int a, int b, Outcome x, Outcome y) {
  const auto c = pair_cells(counts, a, b);
  return static_cast<double>(counts.at(a, b, x, y)) / c.total;
}

Estimate correlation(const CountsTable& counts, int a, int b) {
  const auto c = pair_cells(counts, a, b);
  const double same = c.pp + c.mm;
  const double diff = c.pm + c.mp;
  return Estimate{(same - diff) / c.total, std::sqrt(4.0 * same * diff / (c.total * c.total * c.total))};
}

Estimate marginal_a(const CountsTable& counts, Outcome x, int a, int b) {
  const auto c = pair_cells(counts, a, b);
  const double plus = c.pp + c.pm;
  const double minus = c.mp + c.mm;
  const double sigma = std::sqrt(plus * minus / (c.total * c.total * c.total));
  return Estimate{(x == kPlus ? plus : minus) / c.total, sigma};
}

Estimate marginal_b(const CountsTable& counts, Outcome y, int a, int b) {
  const auto c = pair_cells(counts, a, b);
  const double plus = c.pp + c.mp;
  const double minus = c.pm + c.mm;
  const double sigma = std::sqrt(plus * minus / (c.total * c.total * c.total));
  return Estimate{(y == kPlus ? plus : minus) / c.total, sigma};
}

double p_two_tailed(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

double p_one_tailed(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

StatWithSigma chsh(const CountsTable& counts) {
  const auto e00 = correlation(counts, 0, 0);
  const auto e01 = correlation(counts, 0, 1);
  const auto e10 = correlation(counts, 1, 0);
  const auto e11 = correlation(counts, 1, 1);

  StatWithSigma s;
  s.value = std::abs(e00.value + e01.value + e10.value - e11.value);
  s.sigma = std::sqrt(e00.sigma * e00.sigma + e01.sigma * e01.sigma + e10.sigma * e10.sigma +
                      e11.sigma * e11.sigma);
  const double excess = s.value - kChshBound;
  if (s.sigma > 0.0) {
    const double deviation = excess / s.sigma;
    s.z = std::max(0.0, deviation);
    s.p = p_one_tailed(deviation);
  } else if (excess > 0.0) {
    s.z = std::numeric_limits<double>::infinity();
    s.p = 0.0;
    s.degenerate = true;
  } else {
    s.z = 0.0;
    s.p = excess == 0.0 ? 0.5 : 1.0;
  }
  return s;
}

StatWithSigma two_tailed_stat(double value, double sigma) {
  StatWithSigma s{value, sigma, 0.0, 1.0, false};
  if (sigma > 0.0) {
    s.z = std::abs(value) / sigma;
    s.p = p_two_tailed(s.z);
  } else if (value != 0.0) {
    s.z = std::numeric_limits<double>::infinity();
    s.p = 0.0;
    s.degenerate = true;
  }
  return s;
}

NoSignalSet nosignal(const CountsTable& counts) {
  const auto b00 = marginal_b(counts, kPlus, 0, 0);
  const auto b01 = marginal_b(counts, kPlus, 0, 1);
  const auto b10 = marginal_b(counts, kPlus, 1, 0);
  const auto b11 = marginal_b(counts, kPlus, 1, 1);
  const auto a00 = marginal_a(counts, kPlus, 0, 0);
  const auto a01 = marginal_a(counts, kPlus, 0, 1);
  const auto a10 = marginal_a(counts, kPlus, 1, 0);
  const auto a11 = marginal_a(counts, kPlus, 1, 1);
  return NoSignalSet{
      .ab0 = difference(b00, b10),
      .ab1 = difference(b01, b11),
      .ba0 = difference(a00, a01),
      .ba1 = difference(a10, a11),
  };
}

double chi2_upper_tail_dof4(double chi2) {
  if (chi2 <= 0.0) return 1.0;
  return std::exp(-0.5 * chi2) * (1.0 + 0.5 * chi2);
}

Chi2Result chi2_nosignal(const NoSignalSet& ns) {
  double sum = 0.0;
  for (const auto* s : {&ns.ab0, &ns.ab1, &ns.ba0, &ns.ba1}) {
    if (!(s->sigma > 0.0)) throw DomainError("no-signaling statistic has zero sigma");
    const double r = s->value / s->sigma;
    sum += r * r;
  }
  return Chi2Result{sum, 4, chi2_upper_tail_dof4(sum)};
}

double binomial_upper_tail(std::uint64_t n, std::uint64_t k) {
  if (n == 0) throw DomainError("binomial tail of an empty sample");
  if (k > n) throw DomainError("win count exceeds sample size");
  if (k == 0) return 1.0;

  // Sum away from the mode so every term shrinks: the upper tail directly when
  // k sits above the mode, otherwise the complement of the lower tail.
  constexpr long double kNegligible = 1e-30L;
  const auto mode = static_cast<std::uint64_t>(std::floor(0.75L * static_cast<long double>(n + 1)));
  if (k >= mode) {
    const long double log_first = log_binomial_pmf(n, k);
    long double term = 1.0L;
    long double sum = 0.0L;
    for (std::uint64_t j = k; j <= n; ++j) {
      sum += term;
      if (term < kNegligible * sum) break;
      term *= 3.0L * static_cast<long double>(n - j) / static_cast<long double>(j + 1);
    }
    return static_cast<double>(std::min(1.0L, std::exp(log_first) * sum));
  }
  const long double log_first = log_binomial_pmf(n, k - 1);
  long double term = 1.0L;
  long double sum = 0.0L;
  for (std::uint64_t j = k - 1;; --j) {
    sum += term;
    if (j == 0 || term < kNegligible * sum) break;
    term *= static_cast<long double>(j) / (3.0L * static_cast<long double>(n - j + 1));
  }
  return static_cast<double>(std::clamp(1.0L - std::exp(log_first) * sum, 0.0L, 1.0L));
}

std::uint64_t chsh_wins(const CountsTable& counts) {
  std::uint64_t wins = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const bool anti = a == 1 && b == 1;
      wins += anti ? counts.at(a, b, kPlus, kMinus) + counts.at(a, b, kMinus, kPlus)
                   : counts.at(a, b, kPlus, kPlus) + counts.at(a, b, kMinus, kMinus);
    }
  }
  return wins;
}

double p_chsh_binomial(const CountsTable& counts) {
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) pair_cells(counts, a, b);
  }
  return binomial_upper_tail(counts.total(), chsh_wins(counts));
}

StatWithSigma pooled_two_proportion_z(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2,
                                      std::uint64_t n2) {
  if (n1 == 0 || n2 == 0) throw DomainError("two-proportion test with an empty sample");
  if (x1 > n1 || x2 > n2) throw DomainError("success count exceeds sample size");
  const double d1 = static_cast<double>(n1);
  const double d2 = static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / (d1 + d2);
  const double value = static_cast<double>(x1) / d1 - static_cast<double>(x2) / d2;
  if (pooled <= 0.0 || pooled >= 1.0) return StatWithSigma{value, 0.0, 0.0, 1.0, false};
  return two_tailed_stat(value, std::sqrt(pooled * (1.0 - pooled) * (1.0 / d1 + 1.0 / d2)));
}

SampleStats analyze_counts(const CountsTable& counts) {
  SampleStats stats;
  stats.chsh = chsh(counts);
  stats.p_chsh_binomial = p_chsh_binomial(counts);
  stats.nosig = nosignal(counts);
  const auto& ns = stats.nosig;
  if (ns.ab0.sigma > 0.0 && ns.ab1.sigma > 0.0 && ns.ba0.sigma > 0.0 && ns.ba1.sigma > 0.0) {
    stats.chi2 = chi2_nosignal(ns);
  }
  return stats;
}

}  // namespace bellscan
