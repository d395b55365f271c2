#pragma once

// Conventional (Gaussian) analysis of a Bell-CHSH sample: joint-frequency
// estimators, propagated standard deviations assuming sigma(N) = sqrt(N) for
// every count, the CHSH parameter, the four no-signaling equalities and their
// joint chi-square test, plus an i.i.d. binomial tail for the CHSH game.
//
// Every function is pure. Estimators for a setting pair with no trials throw
// EmptyCellError.

#include <cstdint>
#include <span>

#include "bellscan/model.hpp"

namespace bellscan {

/// The local-realist bound on |S|.
inline constexpr double kChshBound = 2.0;

CountsTable tabulate(std::span<const CandidateEvent> trials);

/// N^{xy}_{ab} / N_{ab}.
double joint_prob(const CountsTable& counts, int a, int b, Outcome x, Outcome y);

/// E_ab = p(++) - p(+-) - p(-+) + p(--), with
/// sigma^2 = 4 (N++ + N--)(N+- + N-+) / N_ab^3.
Estimate correlation(const CountsTable& counts, int a, int b);

/// Alice's marginal p_A(x|ab) = sum_y p(xy|ab), with
/// sigma^2 = (N++ + N+-)(N-+ + N--) / N_ab^3 (identical for x = +1 and -1).
Estimate marginal_a(const CountsTable& counts, Outcome x, int a, int b);

/// Bob's marginal p_B(y|ab) = sum_x p(xy|ab), with
/// sigma^2 = (N++ + N-+)(N+- + N--) / N_ab^3.
Estimate marginal_b(const CountsTable& counts, Outcome y, int a, int b);

/// Two-sided standard normal tail, erfc(z / sqrt 2).
double p_two_tailed(double z);

/// Upper standard normal tail, erfc(z / sqrt 2) / 2. Accepts any real.
double p_one_tailed(double z);

/// S = |E00 + E01 + E10 - E11| with the four correlation sigmas added in
/// quadrature. z = max(0, (S - 2) / sigma); p is the upper normal tail of the
/// signed deviation (S - 2) / sigma, so S below the bound yields p > 1/2.
StatWithSigma chsh(const CountsTable& counts);

/// Tests value against a null of zero: z = |value| / sigma, two-tailed p.
/// sigma == 0 gives z = 0, p = 1 when value is 0, otherwise a degenerate
/// statistic with p = 0.
StatWithSigma two_tailed_stat(double value, double sigma);

/// S_{A->B0} = p_B(+|00) - p_B(+|10)    S_{A->B1} = p_B(+|01) - p_B(+|11)
/// S_{B->A0} = p_A(+|00) - p_A(+|01)    S_{B->A1} = p_A(+|10) - p_A(+|11)
NoSignalSet nosignal(const CountsTable& counts);

/// Upper tail of the chi-square distribution with 4 degrees of freedom,
/// exp(-x/2) (1 + x/2).
double chi2_upper_tail_dof4(double chi2);

/// Sum of squared z over the four equalities, tested as chi-square with 4 dof.
/// Throws DomainError when any sigma is zero.
Chi2Result chi2_nosignal(const NoSignalSet& ns);

/// P(Binomial(n, 3/4) >= k), exact summation in extended precision.
/// Throws DomainError when n == 0 or k > n.
double binomial_upper_tail(std::uint64_t n, std::uint64_t k);

/// Number of CHSH-game wins: x*y = +1 for (a,b) != (1,1), x*y = -1 for (1,1).
std::uint64_t chsh_wins(const CountsTable& counts);

/// binomial_upper_tail(total, chsh_wins). Throws EmptyCellError when any
/// setting pair is empty.
double p_chsh_binomial(const CountsTable& counts);

/// Pooled two-proportion z-test of x1/n1 against x2/n2. value is the
/// difference of proportions, sigma the pooled standard error. A pooled
/// proportion of 0 or 1 yields z = 0, p = 1.
StatWithSigma pooled_two_proportion_z(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2,
                                      std::uint64_t n2);

/// Full battery for one sample. Throws EmptyCellError when a pair is empty.
SampleStats analyze_counts(const CountsTable& counts);

}  // namespace bellscan
