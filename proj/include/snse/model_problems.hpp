#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "snse/spectral_field.hpp"

namespace snse {

// What the closed-form solutions need from a noise realization at one time.
struct PathSummary {
    std::vector<double> w;    // w_r(t), r = 1..q
    double integral = 0.0;    // I(t) = int_0^t w_1 ds (model 2 only)
};

struct ExactSolution {
    std::function<SpectralField(double t, const PathSummary&)> velocity_at;
    std::function<SpectralField(double t, const PathSummary&)> pressure_at;
};

// One SNSE instance: dv = [sigma^2/2 Lap v - (v,grad)v - grad p + f] dt
//                       + sum_r gamma_r dw_r on (0,L)^2, v(0) = phi.
struct ProblemSpec {
    double sigma = 0.0;
    double L = 1.0;
    double T = 0.0;
    int q = 1;
    int M = 2;  // band the coefficient fields are constructed at
    SpectralField phi{2, 1.0, 2};
    std::function<SpectralField(double t)> forcing;
    std::function<std::vector<SpectralField>(double t)> noise_coeffs;
    std::optional<ExactSolution> exact;
};

// Checks div phi = 0 and div gamma_r(t) = 0 at a few sample times; throws on
// violation beyond 1e-12 * norm.
void validate_problem(const ProblemSpec& problem);

// Decaying Taylor vortex forced purely through the noise: f = 0, phi = 0,
// q = 1, gamma_1 the vortex shape with the viscous decay factor.  Exact
// solution is gamma_1(t,x) w(t) with the matching quadratic pressure.
// M = 0 picks the minimal band 2|kappa|.
ProblemSpec model1(double sigma, double A, int kappa, double L, double T, int M = 0);

// Taylor vortex initial condition with constant noise coefficient
// (gamma1, gamma2); exact solution is the decayed vortex translated by
// gamma * I(t) plus the constant drift gamma * w(t).
ProblemSpec model2(double sigma, double A, int kappa, double L, double T,
                   double gamma1, double gamma2, int M = 0);

// Per-mode phase e^{-i (2 pi / L)(n, shift)}; addend goes onto mode 0.
SpectralField translate_solution(const SpectralField& V, const std::array<double, 2>& shift,
                                 const std::array<double, 2>& addend);

// The shared Taylor-vortex building blocks (band M, amplitude factor applied).
SpectralField taylor_velocity(double A, int kappa, double L, int M, double factor);
SpectralField taylor_pressure(double A, int kappa, double L, int M, double factor);

}  // namespace snse
