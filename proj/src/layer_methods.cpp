#include "snse/layer_methods.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace snse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_step_inputs(const LayerState& state, const SpectralField& f_k,
                       const std::vector<SpectralField>& gamma_k,
                       const std::vector<double>& dW, const MethodParams& params) {
    const SpectralField& v = state.velocity;
    if (v.cutoff() != params.M)
        throw std::invalid_argument("step: state band does not match params.M");
    if (!f_k.same_layout(v)) throw std::invalid_argument("step: forcing band/period mismatch");
    if (gamma_k.size() != dW.size())
        throw std::invalid_argument("step: gamma count does not match noise dimension");
    for (const auto& g : gamma_k)
        if (!g.same_layout(v))
            throw std::invalid_argument("step: gamma band/period mismatch");
}

// Stochastic increment of one layer.  The summed noise is smoothed by half a
// diffusion step (shift angle a/2), splitting the layer's averaging evenly
// around the point where the increment is injected; all three methods share
// this convention so their updates from a common state stay comparable.
SpectralField noise_term(const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, int M, double L, double a) {
    SpectralField acc(M, L, 2);
    for (size_t r = 0; r < gamma_k.size(); ++r) {
        SpectralField term = gamma_k[r];
        term *= dW[r];
        acc += term;
    }
    return diffusion_average(acc, 0.5 * a);
}

}  // namespace

double MethodParams::shift_angle(double L) const {
    return kTwoPi * sigma * std::sqrt(h) / L;
}

SpectralField rademacher_weighted_transport(const SpectralField& v, double a, int out_M) {
    const int M = v.cutoff();
    SpectralField breve(out_M, v.period(), 2);
    for (int i = 0; i < 2; ++i) {
        // column i of V: coefficients v_n times the i-th Rademacher weight
        // (1/4) sum_j e^{i a (n, xi_j)} xi_j^i = i sin(a n_i) cos(a n_{3-i})
        SpectralField column(M, v.period(), 2);
        for (int n1 = -M; n1 < M; ++n1) {
            for (int n2 = -M; n2 < M; ++n2) {
                const double weight = (i == 0) ? std::sin(a * n1) * std::cos(a * n2)
                                               : std::cos(a * n1) * std::sin(a * n2);
                const Complex factor(0.0, weight);
                column.at(n1, n2, 0) = factor * v.at(n1, n2, 0);
                column.at(n1, n2, 1) = factor * v.at(n1, n2, 1);
            }
        }
        breve += multiply(extract_component(v, i), column, out_M);
    }
    return breve;
}

SpectralField convective_term(const SpectralField& v, int out_M) {
    SpectralField nl(out_M, v.period(), 2);
    for (int i = 0; i < 2; ++i)
        nl += multiply(extract_component(v, i), derivative(v, i + 1), out_M);
    return nl;
}

LayerState step_method_b(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params) {
    check_step_inputs(state, f_k, gamma_k, dW, params);
    const SpectralField& v = state.velocity;
    const int M = params.M;
    const double a = params.shift_angle(v.period());

    SpectralField next = diffusion_average(v, a);
    const SpectralField breve =
        truncated(rademacher_weighted_transport(v, a, 2 * M), M);
    SpectralField pb = leray_project(breve).solenoidal;
    pb *= -std::sqrt(params.h) / params.sigma;
    next += pb;
    SpectralField pf = leray_project(f_k).solenoidal;
    pf *= params.h;
    next += pf;
    next += noise_term(gamma_k, dW, M, v.period(), a);
    return {state.k + 1, state.t + params.h, std::move(next), std::nullopt};
}

LayerState step_method_c(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params) {
    check_step_inputs(state, f_k, gamma_k, dW, params);
    const SpectralField& v = state.velocity;
    const int M = params.M;
    const double a = params.shift_angle(v.period());

    SpectralField next = diffusion_average(v, a);
    const SpectralField nl = truncated(convective_term(v, 2 * M), M);
    SpectralField pnl = leray_project(nl).solenoidal;
    pnl *= -params.h;
    next += pnl;
    SpectralField pf = leray_project(f_k).solenoidal;
    pf *= params.h;
    next += pf;
    next += noise_term(gamma_k, dW, M, v.period(), a);
    return {state.k + 1, state.t + params.h, std::move(next), std::nullopt};
}

LayerState step_method_a(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params) {
    check_step_inputs(state, f_k, gamma_k, dW, params);
    const SpectralField& v = state.velocity;
    const int M = params.M;
    const double L = v.period();
    const int G = 4 * M;
    const double dx = L / G;
    const double disp = params.sigma * std::sqrt(params.h);

    const std::vector<double> vals = evaluate_on_grid(v, G);
    const RademacherSet xi = RademacherSet::make(2);

    std::vector<Point> displaced;
    displaced.reserve(static_cast<size_t>(G) * G * xi.vectors.size());
    for (int i = 0; i < G; ++i) {
        for (int j = 0; j < G; ++j) {
            const size_t base = (static_cast<size_t>(i) * G + j) * 2;
            const double x1 = i * dx - vals[base] * params.h;
            const double x2 = j * dx - vals[base + 1] * params.h;
            for (const auto& s : xi.vectors)
                displaced.push_back({x1 + disp * s[0], x2 + disp * s[1]});
        }
    }
    const auto shifted = evaluate_at(v, displaced);

    std::vector<double> breve_samples(static_cast<size_t>(G) * G * 2, 0.0);
    const double weight = 1.0 / static_cast<double>(xi.vectors.size());
    size_t idx = 0;
    for (size_t node = 0; node < static_cast<size_t>(G) * G; ++node) {
        for (size_t j = 0; j < xi.vectors.size(); ++j, ++idx) {
            breve_samples[node * 2] += weight * shifted[idx][0];
            breve_samples[node * 2 + 1] += weight * shifted[idx][1];
        }
    }
    const SpectralField breve = from_grid_samples(breve_samples, G, M, L, 2);

    SpectralField next = leray_project(breve).solenoidal;
    SpectralField pf = leray_project(f_k).solenoidal;
    pf *= params.h;
    next += pf;
    next += noise_term(gamma_k, dW, M, L, params.shift_angle(L));
    return {state.k + 1, state.t + params.h, std::move(next), std::nullopt};
}

SpectralField recover_pressure_b(const SpectralField& velocity_next,
                                 const SpectralField& f_next, const MethodParams& params) {
    if (params.h <= 0.0)
        throw std::invalid_argument("recover_pressure_b: h must be positive");
    const int M = velocity_next.cutoff();
    const double a = params.shift_angle(velocity_next.period());
    // Gradient balance on the doubled band: the convective quadratic form
    // carries the same half-step smoothing as the layer's stochastic
    // increment, the forcing enters exactly.
    const SpectralField nl =
        diffusion_average(convective_term(velocity_next, 2 * M), 0.5 * a);
    SpectralField grad_p = leray_project(nl).gradient_part;
    grad_p *= -1.0;
    grad_p += leray_project(embedded(f_next, 2 * M)).gradient_part;
    return potential_of_gradient(grad_p);
}

SpectralField recover_pressure_c(const SpectralField& velocity_next,
                                 const SpectralField& f_next, const MethodParams& params) {
    (void)params;
    const int M = velocity_next.cutoff();
    const SpectralField nl = convective_term(velocity_next, 2 * M);
    SpectralField grad_p = leray_project(nl).gradient_part;
    grad_p *= -1.0;
    grad_p += leray_project(embedded(f_next, 2 * M)).gradient_part;
    return potential_of_gradient(grad_p);
}

SpectralField recover_pressure(const SpectralField& velocity_next,
                               const SpectralField& f_next, const MethodParams& params) {
    return params.method == Method::B ? recover_pressure_b(velocity_next, f_next, params)
                                      : recover_pressure_c(velocity_next, f_next, params);
}

std::vector<LayerState> run_solver(const ProblemSpec& problem, const MethodParams& params,
                                   const WienerPath& path, bool with_pressure) {
    if (path.N > 0 && std::abs(path.N * path.h - problem.T) > 1e-9 * std::max(problem.T, 1.0))
        throw std::invalid_argument("run_solver: path does not span the problem horizon");
    if (params.M < problem.M)
        throw std::invalid_argument("run_solver: params.M smaller than problem coefficient band");
    const int M = params.M;
    const double L = problem.L;

    const auto coeffs_at = [&](double t) {
        SpectralField f = embedded(problem.forcing(t), M);
        std::vector<SpectralField> gamma;
        for (const auto& g : problem.noise_coeffs(t)) gamma.push_back(embedded(g, M));
        return std::pair(std::move(f), std::move(gamma));
    };

    const auto monitor = [&](const SpectralField& v, int k) {
        if (!all_finite(v))
            throw BlowUpError("non-finite velocity coefficient at step " + std::to_string(k), k);
        double coeff_sum = 0.0;
        for (const Complex& c : v.raw()) coeff_sum += std::abs(c);
        // sum of moduli bounds the pointwise magnitude; only when the cheap
        // bound trips do we evaluate the collocation grid
        if (coeff_sum > params.blowup_bound && max_pointwise_norm(v) > params.blowup_bound)
            throw BlowUpError("velocity magnitude exceeded blow-up bound at step " +
                                  std::to_string(k),
                              k);
    };

    std::vector<LayerState> states;
    states.reserve(path.N + 1);
    LayerState init{0, 0.0, embedded(problem.phi, M), std::nullopt};
    if (with_pressure || path.N == 0)
        init.pressure = recover_pressure(init.velocity, coeffs_at(0.0).first, params);
    monitor(init.velocity, 0);
    states.push_back(std::move(init));

    for (int k = 0; k < path.N; ++k) {
        const double t_k = k * path.h;
        auto [f_k, gamma_k] = coeffs_at(t_k);
        std::vector<double> dW(path.q);
        for (int r = 0; r < path.q; ++r) dW[r] = path.increment(k, r);

        LayerState next = [&] {
            switch (params.method) {
                case Method::A: return step_method_a(states.back(), f_k, gamma_k, dW, params);
                case Method::B: return step_method_b(states.back(), f_k, gamma_k, dW, params);
                default: return step_method_c(states.back(), f_k, gamma_k, dW, params);
            }
        }();
        monitor(next.velocity, k + 1);
        if (with_pressure || k + 1 == path.N)
            next.pressure =
                recover_pressure(next.velocity, embedded(problem.forcing(next.t), M), params);
        states.push_back(std::move(next));
    }
    return states;
}

}  // namespace snse
