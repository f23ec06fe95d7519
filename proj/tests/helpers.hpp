#pragma once

#include <cmath>
#include <vector>

#include "fiscast/detail/rng.hpp"
#include "fiscast/series.hpp"

namespace testutil {

using fiscast::AnnualSeries;
using fiscast::detail::Rng;

inline AnnualSeries make_series(std::vector<double> values, int start_year = 2000,
                                const std::string& name = "s") {
    return AnnualSeries(name, start_year, std::move(values));
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool close_rel(double a, double b, double rel_tol) {
    return std::fabs(a - b) <= rel_tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace testutil
