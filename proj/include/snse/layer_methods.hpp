#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "snse/model_problems.hpp"
#include "snse/spectral_field.hpp"
#include "snse/stochastic.hpp"

namespace snse {

enum class Method { A, B, C };

struct MethodParams {
    double sigma = 0.0;
    double h = 0.0;
    int M = 0;
    Method method = Method::B;
    double blowup_bound = 1e6;  // abort when max pointwise |v| exceeds this

    // a = 2 pi sigma sqrt(h) / L, the per-step Rademacher shift angle
    double shift_angle(double L) const;
};

struct LayerState {
    int k = 0;
    double t = 0.0;
    SpectralField velocity{2, 1.0, 2};
    std::optional<SpectralField> pressure;  // band 2M when recovered
};

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, int step) : std::runtime_error(what), step(step) {}
    int step;
};

// breve v = V(x) v(x) with V_n = v_n * (1/4) sum_j e^{i a (n, xi_j)} xi_j^T,
// assembled at band out_M by direct convolution.
SpectralField rademacher_weighted_transport(const SpectralField& v, double a, int out_M);

// (v, grad) v at band out_M.
SpectralField convective_term(const SpectralField& v, int out_M);

// Characteristics form: average the partial sum at the 2^n displaced points
// x - v(x) h + sigma sqrt(h) xi_j over a (4M)^2 collocation grid, then the
// Leray-projected update.
LayerState step_method_a(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params);

// Spectral algorithm with the Rademacher transport matrix:
// v_n(t_{k+1}) = cos(a n1) cos(a n2) v_n - (sqrt(h)/sigma) (P breve v)_n
//              + h (P f)_n + half-step-smoothed sum_r gamma_{r,n} dw_r.
LayerState step_method_b(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params);

// Direct representation: diffusion average minus h P[(v,grad)v] plus forcing
// and noise.
LayerState step_method_c(const LayerState& state, const SpectralField& f_k,
                         const std::vector<SpectralField>& gamma_k,
                         const std::vector<double>& dW, const MethodParams& params);

// grad p = -Pperp[half-step-smoothed (v,grad)v] + Pperp f from the updated
// velocity, integrated back to the scalar potential.  Output band 2M.
SpectralField recover_pressure_b(const SpectralField& velocity_next,
                                 const SpectralField& f_next, const MethodParams& params);

// grad p = -Pperp[(v,grad)v] + Pperp f, integrated back to the scalar
// potential.  Output band 2M.
SpectralField recover_pressure_c(const SpectralField& velocity_next,
                                 const SpectralField& f_next, const MethodParams& params);

SpectralField recover_pressure(const SpectralField& velocity_next,
                               const SpectralField& f_next, const MethodParams& params);

// Full march k = 0..N-1 from v(0) = phi; pressure recovered at every layer
// when with_pressure is set, otherwise only at the final one.
std::vector<LayerState> run_solver(const ProblemSpec& problem, const MethodParams& params,
                                   const WienerPath& path, bool with_pressure = true);

}  // namespace snse
