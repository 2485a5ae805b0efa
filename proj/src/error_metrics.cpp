#include "snse/error_metrics.hpp"

#include "snse/layer_methods.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace snse {

namespace {

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // sample variance
};

MeanVar mean_var(const std::vector<double>& x) {
    MeanVar mv;
    const double n = static_cast<double>(x.size());
    for (double v : x) mv.mean += v;
    mv.mean /= n;
    if (x.size() > 1) {
        for (double v : x) mv.var += (v - mv.mean) * (v - mv.mean);
        mv.var /= (n - 1.0);
    }
    return mv;
}

double covariance(const std::vector<double>& x, const std::vector<double>& y,
                  double mx, double my) {
    if (x.size() < 2) return 0.0;
    double c = 0.0;
    for (size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
    return c / (static_cast<double>(x.size()) - 1.0);
}

// 95% half-width of R = sqrt(mean x / mean y) by the delta method, with the
// numerator/denominator covariance kept (same samples feed both).
double ratio_halfwidth(const MeanVar& x, const MeanVar& y, double cov, int K) {
    if (x.mean <= 0.0 || y.mean <= 0.0) return 0.0;
    const double r = std::sqrt(x.mean / y.mean);
    const double vx = x.var / K;
    const double vy = y.var / K;
    const double cxy = cov / K;
    const double var_r = 0.25 * r * r *
                         (vx / (x.mean * x.mean) + vy / (y.mean * y.mean) -
                          2.0 * cxy / (x.mean * y.mean));
    return var_r > 0.0 ? 1.96 * std::sqrt(var_r) : 0.0;
}

double denom_halfwidth(const MeanVar& y, int K) {
    if (y.mean <= 0.0) return 0.0;
    return 1.96 * std::sqrt(y.var / K) / (2.0 * std::sqrt(y.mean));
}

}  // namespace

int default_worker_count() {
    if (const char* env = std::getenv("SNSE_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::pair<double, double> relative_l2_error(const SpectralField& approx,
                                            const SpectralField& exact) {
    if (approx.period() != exact.period() || approx.components() != exact.components())
        throw std::invalid_argument("relative_l2_error: incompatible fields");
    const int M = std::max(approx.cutoff(), exact.cutoff());
    const SpectralField diff = embedded(approx, M) - embedded(exact, M);
    const double den = parseval_norm(exact);
    if (den == 0.0) throw std::invalid_argument("relative_l2_error: zero exact field");
    return {parseval_norm(diff) / den, den};
}

ErrorReport mean_square_error(const TrajectoryRunner& runner, int K, uint64_t base_seed,
                              double h, int workers) {
    if (K < 2) throw std::invalid_argument("mean_square_error: K must be >= 2");
    if (workers <= 0) workers = default_worker_count();
    workers = std::min(workers, K);

    std::vector<TrajectoryErrors> results(K);
    std::vector<std::exception_ptr> failures(K);
    std::atomic<int> next{0};

    const auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= K) return;
            try {
                results[i] = runner(static_cast<uint64_t>(i));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (int i = 0; i < K; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const BlowUpError& e) {
            throw BlowUpError("mean_square_error: run " + std::to_string(i) +
                                  " diverged: " + e.what(),
                              e.step);
        } catch (const std::exception& e) {
            throw std::runtime_error("mean_square_error: run " + std::to_string(i) +
                                     " failed: " + e.what());
        }
    }

    std::vector<double> nv(K), dv(K), np(K), dp(K);
    for (int i = 0; i < K; ++i) {
        nv[i] = results[i].num_v;
        dv[i] = results[i].den_v;
        np[i] = results[i].num_p;
        dp[i] = results[i].den_p;
    }

    ErrorReport rep;
    rep.h = h;
    rep.runs = K;
    rep.seed = base_seed;
    const MeanVar mnv = mean_var(nv), mdv = mean_var(dv);
    const MeanVar mnp = mean_var(np), mdp = mean_var(dp);
    if (mdv.mean <= 0.0) throw std::invalid_argument("mean_square_error: zero velocity denominator");
    rep.err_v = std::sqrt(mnv.mean / mdv.mean);
    rep.halfwidth_v = ratio_halfwidth(mnv, mdv, covariance(nv, dv, mnv.mean, mdv.mean), K);
    rep.denom_v = std::sqrt(mdv.mean);
    rep.denom_halfwidth_v = denom_halfwidth(mdv, K);
    if (mdp.mean > 0.0) {
        rep.err_p = std::sqrt(mnp.mean / mdp.mean);
        rep.halfwidth_p = ratio_halfwidth(mnp, mdp, covariance(np, dp, mnp.mean, mdp.mean), K);
        rep.denom_p = std::sqrt(mdp.mean);
        rep.denom_halfwidth_p = denom_halfwidth(mdp, K);
    }
    return rep;
}

OrderFit fit_order(const std::vector<ErrorReport>& reports, bool pressure) {
    std::vector<double> hs;
    for (const auto& r : reports)
        if (std::find(hs.begin(), hs.end(), r.h) == hs.end()) hs.push_back(r.h);
    if (hs.size() < 3) throw std::invalid_argument("fit_order: need >= 3 distinct step sizes");

    OrderFit fit;
    for (const auto& r : reports) {
        const double err = pressure ? r.err_p : r.err_v;
        if (err <= 0.0) throw std::invalid_argument("fit_order: non-positive error value");
        fit.points.emplace_back(std::log(r.h), std::log(err));
    }
    const double n = static_cast<double>(fit.points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double det = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : fit.points) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace snse
