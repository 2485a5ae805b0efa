#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "snse/spectral_field.hpp"

namespace snse {

// One row of a convergence table.
struct ErrorReport {
    double h = 0.0;
    double err_v = 0.0;
    double err_p = 0.0;
    double halfwidth_v = 0.0;  // 0 for single-trajectory errors
    double halfwidth_p = 0.0;
    double denom_v = 0.0;
    double denom_p = 0.0;
    double denom_halfwidth_v = 0.0;
    double denom_halfwidth_p = 0.0;
    int runs = 1;
    uint64_t seed = 0;
};

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<double, double>> points;  // (log h, log err)
};

// Squared Parseval sums contributed by one trajectory.
struct TrajectoryErrors {
    double num_v = 0.0;  // sum_n |approx_n - exact_n|^2
    double den_v = 0.0;  // sum_n |exact_n|^2
    double num_p = 0.0;
    double den_p = 0.0;
};

// Maps a run index to the end-of-horizon squared errors of that realization.
using TrajectoryRunner = std::function<TrajectoryErrors(uint64_t run_index)>;

// Relative L2 error in coefficient space and the denominator norm.  Bands may
// differ; the smaller field is compared inside the union band.
std::pair<double, double> relative_l2_error(const SpectralField& approx,
                                            const SpectralField& exact);

// Runs K independent trajectories (concurrently; reduction in run-index
// order), forming err = sqrt(mean num)/sqrt(mean den) with 95% half-widths by
// the delta method on the ratio of means.  Throws on any diverged run with
// its index.  workers = 0 picks the default pool size.
ErrorReport mean_square_error(const TrajectoryRunner& runner, int K, uint64_t base_seed,
                              double h = 0.0, int workers = 0);

// Least-squares slope of log err_v (or err_p) against log h.
OrderFit fit_order(const std::vector<ErrorReport>& reports, bool pressure = false);

// Worker pool width: SNSE_WORKERS when set, else hardware concurrency.
int default_worker_count();

}  // namespace snse
