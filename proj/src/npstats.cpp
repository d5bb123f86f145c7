#include "satsmell/npstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "satsmell/errors.hpp"

namespace satsmell::stats {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw OutOfRange("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation with one Halley refinement step.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

namespace {

double beta_cf(double a, double b, double x) {
    // Lentz's algorithm for the incomplete beta continued fraction.
    const int max_iter = 300;
    const double eps = 1e-15;
    const double tiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    double p = incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

TestOutcome anderson_darling(std::span<const double> sample) {
    const size_t n = sample.size();
    if (n < 8) throw SampleTooSmall("anderson_darling: need n >= 8, got " + std::to_string(n));
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) throw ConstantSample("anderson_darling: constant sample");

    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double ui = normal_cdf((x[i] - mean) / sd);
        double vi = normal_cdf((x[n - 1 - i] - mean) / sd);
        ui = std::clamp(ui, 1e-300, 1.0 - 1e-15);
        vi = std::clamp(vi, 1e-300, 1.0 - 1e-15);
        acc += (2.0 * static_cast<double>(i + 1) - 1.0) * (std::log(ui) + std::log1p(-vi));
    }
    double nn = static_cast<double>(n);
    double a2 = -nn - acc / nn;
    double a_star = a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));

    double p;
    if (a_star >= 0.6) {
        p = std::exp(1.2937 - 5.709 * a_star + 0.0186 * a_star * a_star);
    } else if (a_star >= 0.34) {
        p = std::exp(0.9177 - 4.279 * a_star - 1.38 * a_star * a_star);
    } else if (a_star > 0.2) {
        p = 1.0 - std::exp(-8.318 + 42.796 * a_star - 59.938 * a_star * a_star);
    } else {
        p = 1.0 - std::exp(-13.436 + 101.14 * a_star - 223.73 * a_star * a_star);
    }
    return {a_star, std::clamp(p, 0.0, 1.0), "stephens-case3"};
}

namespace {

double pearson_of(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double num = 0.0, da = 0.0, db = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (a[i] - ma) * (b[i] - mb);
        da += (a[i] - ma) * (a[i] - ma);
        db += (b[i] - mb) * (b[i] - mb);
    }
    return num / std::sqrt(da * db);
}

}  // namespace

TestOutcome spearman_rho(std::span<const double> x, std::span<const double> y,
                         SpearmanPValue mode) {
    if (x.size() != y.size())
        throw LengthMismatch("spearman_rho: length mismatch " + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()));
    const size_t n = x.size();
    if (n < 3) throw TooShort("spearman_rho: need n >= 3, got " + std::to_string(n));
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) throw ConstantInput("spearman_rho: constant input vector");

    std::vector<double> rx = average_ranks(x);
    std::vector<double> ry = average_ranks(y);
    double rho = std::clamp(pearson_of(rx, ry), -1.0, 1.0);

    if (mode == SpearmanPValue::ExactPermutation) {
        if (n > 10)
            throw OutOfRange("spearman_rho: exact permutation limited to n <= 10");
        std::vector<double> perm = ry;
        std::sort(perm.begin(), perm.end());
        const double target = std::fabs(rho) - 1e-12;
        uint64_t total = 0, at_least = 0;
        do {
            ++total;
            if (std::fabs(pearson_of(rx, perm)) >= target) ++at_least;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return {rho, static_cast<double>(at_least) / static_cast<double>(total),
                "exact-permutation"};
    }

    double dof = static_cast<double>(n - 2);
    double p;
    if (1.0 - rho * rho < 1e-15) {
        p = 0.0;
    } else {
        double t = rho * std::sqrt(dof / (1.0 - rho * rho));
        p = student_t_two_sided_p(t, dof);
    }
    return {rho, p, "t-approx"};
}

TestOutcome wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw LengthMismatch("wilcoxon_signed_rank: length mismatch " +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    std::vector<double> abs_d;
    std::vector<int> sign;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_d.push_back(std::fabs(d));
        sign.push_back(d > 0 ? 1 : -1);
    }
    const size_t n = abs_d.size();
    if (n == 0) throw AllZeroDifferences("wilcoxon_signed_rank: all differences are zero");

    std::vector<double> ranks = average_ranks(abs_d);
    double w_plus = 0.0, w_minus = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (sign[i] > 0) w_plus += ranks[i];
        else w_minus += ranks[i];
    }
    double w = std::min(w_plus, w_minus);
    double total = w_plus + w_minus;

    if (n <= 12) {
        // Exact conditional distribution given the observed (possibly tied)
        // rank configuration: enumerate all 2^n sign assignments.
        const uint64_t count = uint64_t{1} << n;
        uint64_t at_most = 0;
        for (uint64_t mask = 0; mask < count; ++mask) {
            double wp = 0.0;
            for (size_t i = 0; i < n; ++i)
                if (mask & (uint64_t{1} << i)) wp += ranks[i];
            if (std::min(wp, total - wp) <= w + 1e-9) ++at_most;
        }
        double p = static_cast<double>(at_most) / static_cast<double>(count);
        return {w, std::min(p, 1.0), "exact"};
    }

    double nn = static_cast<double>(n);
    double mu = nn * (nn + 1.0) / 4.0;
    double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    // Tie correction: subtract sum(t^3 - t)/48 over tie groups of |d|.
    {
        std::vector<double> sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        size_t i = 0;
        while (i < sorted.size()) {
            size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            double t = static_cast<double>(j - i + 1);
            if (t > 1.0) var -= (t * t * t - t) / 48.0;
            i = j + 1;
        }
    }
    double num = w_plus - mu;
    // Continuity correction shrinks |num| by 0.5.
    if (num > 0.5) num -= 0.5;
    else if (num < -0.5) num += 0.5;
    else num = 0.0;
    double z = num / std::sqrt(var);
    double p = std::clamp(2.0 * (1.0 - normal_cdf(std::fabs(z))), 0.0, 1.0);
    return {w, p, "normal-approx"};
}

std::vector<AdjustedOutcome> bh_adjust(const std::vector<double>& p_values, double alpha) {
    if (p_values.empty()) throw InsufficientData("bh_adjust: empty p-value list");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw OutOfRange("bh_adjust: alpha must be in (0,1), got " + std::to_string(alpha));
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw OutOfRange("bh_adjust: p-value outside [0,1]: " + std::to_string(p));

    const size_t m = p_values.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    // Ties broken by input position for a deterministic rank_index.
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t i, size_t j) { return p_values[i] < p_values[j]; });

    // q_(i) = min over j >= i of min(m p_(j) / j, 1), via a suffix scan.
    // Clamped to >= p_(i): true in exact arithmetic (j <= m), so only guards
    // against a one-ulp rounding dip at j = m.
    std::vector<double> q_sorted(m);
    double running = 1.0;
    for (size_t idx = m; idx-- > 0;) {
        double candidate = static_cast<double>(m) * p_values[order[idx]] /
                           static_cast<double>(idx + 1);
        running = std::min(running, std::min(candidate, 1.0));
        q_sorted[idx] = std::max(running, p_values[order[idx]]);
    }

    // k = max{ i : p_(i) <= i * alpha / m }; reject exactly i <= k.
    size_t k = 0;
    for (size_t idx = 0; idx < m; ++idx) {
        double threshold = static_cast<double>(idx + 1) * alpha / static_cast<double>(m);
        if (p_values[order[idx]] <= threshold) k = idx + 1;
    }

    std::vector<AdjustedOutcome> out(m);
    for (size_t idx = 0; idx < m; ++idx) {
        size_t input_pos = order[idx];
        out[input_pos] = {p_values[input_pos], q_sorted[idx], static_cast<int>(idx + 1),
                          idx + 1 <= k};
    }
    return out;
}

Quartiles quartiles(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("quartiles: empty input");
    std::vector<double> x(values.begin(), values.end());
    std::sort(x.begin(), x.end());
    auto at = [&](double q) {
        double h = q * static_cast<double>(x.size() - 1);
        size_t lo = static_cast<size_t>(std::floor(h));
        size_t hi = std::min(lo + 1, x.size() - 1);
        return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

RhoBand interpret_rho(double rho, const RhoBands& bands) {
    double r = std::fabs(rho);
    if (r > 1.0 + 1e-12) throw OutOfRange("interpret_rho: |rho| > 1: " + std::to_string(rho));
    r = std::min(r, 1.0);
    if (r == 0.0) return RhoBand::None;
    if (r == 1.0) return RhoBand::Perfect;
    if (r < bands.weak_hi) return RhoBand::Weak;
    if (r < bands.moderate_hi) return RhoBand::Moderate;
    return RhoBand::Strong;
}

const char* to_string(RhoBand band) {
    switch (band) {
        case RhoBand::None: return "none";
        case RhoBand::Weak: return "weak";
        case RhoBand::Moderate: return "moderate";
        case RhoBand::Strong: return "strong";
        case RhoBand::Perfect: return "perfect";
    }
    return "?";
}

}  // namespace satsmell::stats
