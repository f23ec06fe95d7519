#include "fiscast/association.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fiscast/detail/dist.hpp"
#include "fiscast/errors.hpp"

namespace fiscast {

namespace {

using detail::chi_square_cdf;
using detail::std_normal_cdf;
using detail::student_t_two_sided_p;

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_len) {
    if (x.size() != y.size()) raise(errc::length_mismatch, "samples must have equal length");
    if (x.size() < min_len) {
        raise(errc::too_short, "need at least " + std::to_string(min_len) + " observations");
    }
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Mid-ranks (1-based, ties averaged).
std::vector<double> mid_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double two_sided_from_cdf(double cdf_le, double cdf_ge) {
    return std::min(1.0, 2.0 * std::min(cdf_le, cdf_ge));
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3);
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) raise(errc::zero_variance, "degenerate sample");
    return sxy / std::sqrt(sxx * syy);
}

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3);
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[j] - x[i];
            const double dy = y[j] - y[i];
            if (dx == 0.0 && dy == 0.0) {
                ++ties_x;
                ++ties_y;
            } else if (dx == 0.0) {
                ++ties_x;
            } else if (dy == 0.0) {
                ++ties_y;
            } else if (dx * dy > 0.0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const double dx_term = n0 - static_cast<double>(ties_x);
    const double dy_term = n0 - static_cast<double>(ties_y);
    if (dx_term == 0.0 || dy_term == 0.0) {
        raise(errc::all_tied, "every pair is tied in one of the samples");
    }
    return static_cast<double>(concordant - discordant) / std::sqrt(dx_term * dy_term);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3);
    const auto rx = mid_ranks(x);
    const auto ry = mid_ranks(y);
    return pearson_r(rx, ry);
}

TestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3);
    const std::size_t n = x.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];
    const double md = mean_of(d);
    double ss = 0.0;
    for (double v : d) ss += (v - md) * (v - md);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) raise(errc::zero_variance, "paired differences have zero spread");
    const double t = md / (sd / std::sqrt(static_cast<double>(n)));
    return {t, student_t_two_sided_p(t, static_cast<double>(n - 1)), false};
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3);
    std::vector<double> d;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i] - y[i];
        if (v != 0.0) d.push_back(v);
    }
    if (d.empty()) raise(errc::all_zero_differences, "all paired differences are zero");
    if (d.size() < 3) raise(errc::too_short, "need at least 3 nonzero differences");
    const std::size_t n = d.size();

    std::vector<double> abs_d(n);
    for (std::size_t i = 0; i < n; ++i) abs_d[i] = std::fabs(d[i]);
    const auto ranks = mid_ranks(abs_d);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (d[i] > 0.0) w_plus += ranks[i];

    if (n <= 25) {
        // exact distribution conditional on the tie pattern: dynamic program
        // over doubled ranks (mid-ranks doubled are integers)
        std::vector<long long> r2(n);
        long long total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            total += r2[i];
        }
        std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
        count[0] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (long long s = total; s >= r2[i]; --s) {
                count[s] += count[s - r2[i]];
            }
        }
        const double denom = std::pow(2.0, static_cast<double>(n));
        const long long w2 = std::llround(2.0 * w_plus);
        double cdf_le = 0.0, cdf_ge = 0.0;
        for (long long s = 0; s <= total; ++s) {
            if (s <= w2) cdf_le += count[s];
            if (s >= w2) cdf_ge += count[s];
        }
        return {w_plus, two_sided_from_cdf(cdf_le / denom, cdf_ge / denom), true};
    }

    // normal approximation with tie correction
    const double nn = static_cast<double>(n);
    const double mean_w = nn * (nn + 1.0) / 4.0;
    double tie_term = 0.0;
    {
        auto sorted = abs_d;
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double var_w = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = std::max(std::fabs(w_plus - mean_w) - 0.5, 0.0) / std::sqrt(var_w);
    return {w_plus, std::min(1.0, 2.0 * (1.0 - std_normal_cdf(z))), false};
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 3 || y.size() < 3) {
        raise(errc::too_short, "each sample needs at least 3 observations");
    }
    const std::size_t nx = x.size(), ny = y.size();
    auto u_of = [](std::span<const double> a, std::span<const double> b) {
        double u = 0.0;
        for (double av : a) {
            for (double bv : b) {
                if (av > bv)
                    u += 1.0;
                else if (av == bv)
                    u += 0.5;
            }
        }
        return u;
    };
    const double u_obs = u_of(x, y);

    if (std::min(nx, ny) <= 10 && nx + ny <= 20) {
        // exact permutation distribution of U over all assignments of the
        // pooled sample to the two groups
        std::vector<double> pooled(x.begin(), x.end());
        pooled.insert(pooled.end(), y.begin(), y.end());
        std::sort(pooled.begin(), pooled.end());
        std::vector<bool> mask(nx + ny, false);
        std::fill(mask.begin(), mask.begin() + static_cast<long>(nx), true);
        // iterate over all combinations via prev_permutation on the mask
        double n_le = 0.0, n_ge = 0.0, n_total = 0.0;
        std::vector<double> ga, gb;
        ga.reserve(nx);
        gb.reserve(ny);
        do {
            ga.clear();
            gb.clear();
            for (std::size_t i = 0; i < pooled.size(); ++i) {
                (mask[i] ? ga : gb).push_back(pooled[i]);
            }
            const double u = u_of(ga, gb);
            n_total += 1.0;
            if (u <= u_obs + 1e-12) n_le += 1.0;
            if (u >= u_obs - 1e-12) n_ge += 1.0;
        } while (std::prev_permutation(mask.begin(), mask.end()));
        return {u_obs, two_sided_from_cdf(n_le / n_total, n_ge / n_total), true};
    }

    // normal approximation with tie correction
    const double nxd = static_cast<double>(nx), nyd = static_cast<double>(ny);
    const double nd = nxd + nyd;
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    const double mean_u = nxd * nyd / 2.0;
    const double var_u =
        nxd * nyd / 12.0 * (nd + 1.0 - tie_term / (nd * (nd - 1.0)));
    if (var_u <= 0.0) raise(errc::zero_variance, "all pooled values identical");
    const double z = std::max(std::fabs(u_obs - mean_u) - 0.5, 0.0) / std::sqrt(var_u);
    return {u_obs, std::min(1.0, 2.0 * (1.0 - std_normal_cdf(z))), false};
}

TestResult chi_square_independence(std::span<const double> x, std::span<const double> y,
                                   int bins) {
    if (bins < 2) raise(errc::config_error, "need at least 2 bins");
    const std::size_t n = x.size();
    if (x.size() != y.size()) raise(errc::length_mismatch, "samples must have equal length");
    if (n < static_cast<std::size_t>(3 * bins * bins)) {
        raise(errc::too_short, "need at least 3*bins^2 observations");
    }

    auto bin_of = [&](std::span<const double> v) {
        std::vector<double> sorted(v.begin(), v.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> cuts;
        for (int b = 1; b < bins; ++b) {
            const std::size_t at =
                std::min(n - 1, static_cast<std::size_t>(static_cast<double>(n) * b / bins));
            cuts.push_back(sorted[at]);
        }
        std::vector<int> assignment(n);
        for (std::size_t i = 0; i < n; ++i) {
            int b = 0;
            while (b < bins - 1 && v[i] >= cuts[static_cast<std::size_t>(b)]) ++b;
            assignment[i] = b;
        }
        return assignment;
    };

    const auto bx = bin_of(x);
    const auto by = bin_of(y);
    std::vector<std::vector<double>> observed(static_cast<std::size_t>(bins),
                                              std::vector<double>(static_cast<std::size_t>(bins),
                                                                  0.0));
    std::vector<double> row(static_cast<std::size_t>(bins), 0.0);
    std::vector<double> colsum(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        observed[bx[i]][by[i]] += 1.0;
        row[bx[i]] += 1.0;
        colsum[by[i]] += 1.0;
    }
    double stat = 0.0;
    for (int a = 0; a < bins; ++a) {
        for (int b = 0; b < bins; ++b) {
            const double expected = row[a] * colsum[b] / static_cast<double>(n);
            if (expected < 1.0) {
                raise(errc::sparse_cells, "expected cell count below 1; use fewer bins");
            }
            const double diff = observed[a][b] - expected;
            stat += diff * diff / expected;
        }
    }
    const double df = static_cast<double>((bins - 1) * (bins - 1));
    return {stat, 1.0 - chi_square_cdf(stat, df), false};
}

std::vector<ScreenReport> predictor_screen(const SeriesFrame& frame, const std::string& target,
                                           const std::vector<std::string>& predictors,
                                           const ScreenOptions& options) {
    const auto& tgt = frame.col(target);
    std::vector<ScreenReport> out;

    auto screen_one = [&](const std::string& name, std::span<const double> values,
                          bool aggregate) {
        ScreenReport rep;
        rep.predictor = name;
        rep.is_aggregate = aggregate;
        rep.r = pearson_r(values, tgt.values());
        rep.tau = kendall_tau_b(values, tgt.values());
        rep.rho = spearman_rho(values, tgt.values());
        // an exact linear relation makes the paired tests degenerate; such a
        // predictor is trivially dependent, so the significance gate is
        // short-circuited and the degenerate tests are reported with p = 0
        const bool deterministic = std::fabs(rep.r) >= 1.0 - 1e-12;
        auto guarded = [&](auto&& fn) -> TestResult {
            try {
                return fn();
            } catch (const Error& err) {
                if (deterministic && (err.code() == errc::zero_variance ||
                                      err.code() == errc::all_zero_differences)) {
                    return {0.0, 0.0, true};
                }
                throw;
            }
        };
        rep.tests["t"] = guarded([&] { return paired_t_test(values, tgt.values()); });
        rep.tests["chi2"] =
            guarded([&] { return chi_square_independence(values, tgt.values(),
                                                         options.chi2_bins); });
        rep.tests["wilcoxon"] =
            guarded([&] { return wilcoxon_signed_rank(values, tgt.values()); });
        rep.tests["mannwhitney"] = guarded([&] { return mann_whitney_u(values, tgt.values()); });
        const double strongest =
            std::max({std::fabs(rep.r), std::fabs(rep.tau), std::fabs(rep.rho)});
        const bool significant =
            deterministic || (rep.tests["t"].p_value < options.significance_level &&
                              rep.tests["mannwhitney"].p_value < options.significance_level);
        rep.passes = strongest >= options.correlation_threshold && significant;
        return rep;
    };

    for (const auto& name : predictors) {
        out.push_back(screen_one(name, frame.col(name).values(), false));
    }
    if (predictors.size() > 1) {
        std::vector<double> aggregate(frame.length(), 0.0);
        for (const auto& name : predictors) {
            const auto vals = frame.col(name).values();
            for (std::size_t i = 0; i < aggregate.size(); ++i) aggregate[i] += vals[i];
        }
        out.push_back(screen_one("aggregate", aggregate, true));
    }
    return out;
}

}  // namespace fiscast
