#pragma once

#include <span>
#include <string>
#include <vector>

namespace satsmell::stats {

struct TestOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
    std::string method;
};

struct AdjustedOutcome {
    double raw_p = 1.0;
    double q_value = 1.0;
    int rank_index = 0;  // 1-based position in the p-ascending order
    bool rejected = false;
};

// --- numeric primitives -----------------------------------------------------

double normal_cdf(double x);
// Inverse standard normal CDF (rational approximation, |error| < 1.2e-9).
double normal_quantile(double p);
// Regularized incomplete beta I_x(a, b) via Lentz continued fraction.
double incomplete_beta(double a, double b, double x);
// Two-sided p for a Student-t statistic with dof degrees of freedom.
double student_t_two_sided_p(double t, double dof);

// 1-based average (fractional) ranks; ties share the mean of their rank span.
std::vector<double> average_ranks(std::span<const double> values);

// --- tests ------------------------------------------------------------------

// Composite-normality Anderson-Darling test (mean and variance estimated).
// statistic = small-sample adjusted A*^2 = A^2 (1 + 0.75/n + 2.25/n^2),
// p from the Stephens case-3 piecewise approximation.
// Throws SampleTooSmall (n < 8) and ConstantSample.
TestOutcome anderson_darling(std::span<const double> sample);

enum class SpearmanPValue { TApprox, ExactPermutation };

// Spearman rank correlation; statistic carries rho. p-value from the
// t-approximation by default; exact permutation enumeration for n <= 10.
// Throws LengthMismatch, TooShort (n < 3), ConstantInput.
TestOutcome spearman_rho(std::span<const double> x, std::span<const double> y,
                         SpearmanPValue mode = SpearmanPValue::TApprox);

// Paired signed-rank test. Zero differences are dropped; |d| ties get average
// ranks; statistic W = min(W+, W-). Exact by enumeration of all 2^n sign
// assignments for n <= 12, else normal approximation with tie and continuity
// corrections. Two-sided. Throws LengthMismatch, AllZeroDifferences.
TestOutcome wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Benjamini-Hochberg step-up adjustment. Output order matches input order;
// rank ties are broken by input position. Throws OutOfRange on p outside
// [0,1] or alpha outside (0,1), InsufficientData on empty input.
std::vector<AdjustedOutcome> bh_adjust(const std::vector<double>& p_values, double alpha);

struct Quartiles {
    double q1, q2, q3;
};

// Linear-interpolation quantiles at 0.25/0.5/0.75 (inclusive method).
Quartiles quartiles(std::span<const double> values);

enum class RhoBand { None, Weak, Moderate, Strong, Perfect };

struct RhoBands {
    double weak_hi = 0.4;      // |rho| below this (and > 0) is weak
    double moderate_hi = 0.7;  // |rho| in [weak_hi, this) is moderate
};

RhoBand interpret_rho(double rho, const RhoBands& bands = {});
const char* to_string(RhoBand band);

}  // namespace satsmell::stats
