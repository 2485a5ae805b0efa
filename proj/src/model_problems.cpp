#include "snse/model_problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snse {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectralField taylor_velocity(double A, int kappa, double L, int M, double factor) {
    SpectralField v(M, L, 2);
    if (kappa == 0) return v;
    if (std::abs(kappa) > M - 1)
        throw std::invalid_argument("taylor_velocity: band too small for kappa");
    for (int u1 = -1; u1 <= 1; u1 += 2) {
        for (int u2 = -1; u2 <= 1; u2 += 2) {
            // A sin(2 pi k x1 / L) cos(2 pi k x2 / L) and its partner
            v.at(kappa * u1, kappa * u2, 0) = Complex(0.0, -A * u1 / 4.0) * factor;
            v.at(kappa * u1, kappa * u2, 1) = Complex(0.0, A * u2 / 4.0) * factor;
        }
    }
    return v;
}

SpectralField taylor_pressure(double A, int kappa, double L, int M, double factor) {
    SpectralField p(M, L, 1);
    if (kappa == 0) return p;
    if (2 * std::abs(kappa) > M - 1)
        throw std::invalid_argument("taylor_pressure: band too small for kappa");
    const double amp = A * A / 8.0 * factor;
    for (int u = -1; u <= 1; u += 2) {
        p.at(2 * kappa * u, 0) = amp;
        p.at(0, 2 * kappa * u) = amp;
    }
    return p;
}

SpectralField translate_solution(const SpectralField& V, const std::array<double, 2>& shift,
                                 const std::array<double, 2>& addend) {
    const int M = V.cutoff();
    const double k = kTwoPi / V.period();
    SpectralField out(M, V.period(), V.components());
    for (int n1 = -M; n1 < M; ++n1) {
        for (int n2 = -M; n2 < M; ++n2) {
            const Complex phase = std::polar(1.0, -k * (n1 * shift[0] + n2 * shift[1]));
            for (int c = 0; c < V.components(); ++c)
                out.at(n1, n2, c) = V.at(n1, n2, c) * phase;
        }
    }
    for (int c = 0; c < V.components(); ++c) out.at(0, 0, c) += addend[c];
    return out;
}

void validate_problem(const ProblemSpec& problem) {
    const auto check_divfree = [](const SpectralField& u, const char* what) {
        const double norm = parseval_norm(u);
        if (parseval_norm(divergence(u)) > 1e-12 * std::max(norm, 1.0))
            throw std::invalid_argument(std::string("problem coefficient not divergence-free: ") + what);
    };
    check_divfree(problem.phi, "phi");
    for (double t : {0.0, 0.5 * problem.T, problem.T}) {
        const auto gammas = problem.noise_coeffs(t);
        if (static_cast<int>(gammas.size()) != problem.q)
            throw std::invalid_argument("noise_coeffs size does not match q");
        for (const auto& g : gammas) check_divfree(g, "gamma_r");
    }
}

ProblemSpec model1(double sigma, double A, int kappa, double L, double T, int M) {
    if (M == 0) M = std::max(2, 2 * std::abs(kappa));
    ProblemSpec p;
    p.sigma = sigma;
    p.L = L;
    p.T = T;
    p.q = 1;
    p.M = M;
    p.phi = SpectralField(M, L, 2);
    p.forcing = [M, L](double) { return SpectralField(M, L, 2); };
    const double lam = sigma * sigma * std::pow(kTwoPi * kappa / L, 2);
    p.noise_coeffs = [=](double t) {
        return std::vector<SpectralField>{
            taylor_velocity(A, kappa, L, M, std::exp(-lam * t))};
    };
    ExactSolution exact;
    exact.velocity_at = [=](double t, const PathSummary& ps) {
        return taylor_velocity(A, kappa, L, M, std::exp(-lam * t) * ps.w.at(0));
    };
    exact.pressure_at = [=](double t, const PathSummary& ps) {
        const double w = ps.w.at(0);
        return taylor_pressure(A, kappa, L, 2 * M, std::exp(-2.0 * lam * t) * w * w);
    };
    p.exact = std::move(exact);
    return p;
}

ProblemSpec model2(double sigma, double A, int kappa, double L, double T,
                   double gamma1, double gamma2, int M) {
    if (M == 0) M = std::max(2, 2 * std::abs(kappa));
    ProblemSpec p;
    p.sigma = sigma;
    p.L = L;
    p.T = T;
    p.q = 1;
    p.M = M;
    p.phi = taylor_velocity(A, kappa, L, M, 1.0);
    p.forcing = [M, L](double) { return SpectralField(M, L, 2); };
    p.noise_coeffs = [=](double) {
        SpectralField g(M, L, 2);
        g.at(0, 0, 0) = gamma1;
        g.at(0, 0, 1) = gamma2;
        return std::vector<SpectralField>{std::move(g)};
    };
    const double lam = sigma * sigma * std::pow(kTwoPi * kappa / L, 2);
    ExactSolution exact;
    exact.velocity_at = [=](double t, const PathSummary& ps) {
        const double w = ps.w.at(0);
        const SpectralField V = taylor_velocity(A, kappa, L, M, std::exp(-lam * t));
        return translate_solution(V, {gamma1 * ps.integral, gamma2 * ps.integral},
                                  {gamma1 * w, gamma2 * w});
    };
    exact.pressure_at = [=](double t, const PathSummary& ps) {
        const SpectralField P = taylor_pressure(A, kappa, L, 2 * M, std::exp(-2.0 * lam * t));
        return translate_solution(P, {gamma1 * ps.integral, gamma2 * ps.integral}, {0.0, 0.0});
    };
    p.exact = std::move(exact);
    return p;
}

}  // namespace snse
