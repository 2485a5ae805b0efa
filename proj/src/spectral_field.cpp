#include "snse/spectral_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snse {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectralField::SpectralField(int cutoff, double period, int components)
    : M_(cutoff), L_(period), comps_(components) {
    if (cutoff <= 0) throw std::invalid_argument("cutoff M must be positive");
    if (period <= 0.0) throw std::invalid_argument("period L must be positive");
    if (components != 1 && components != 2)
        throw std::invalid_argument("components must be 1 or 2");
    coeffs_.assign(static_cast<size_t>(2 * M_) * (2 * M_) * comps_, Complex{});
}

Complex& SpectralField::at(int n1, int n2, int c) {
    return coeffs_[(static_cast<size_t>(n1 + M_) * (2 * M_) + (n2 + M_)) * comps_ + c];
}

const Complex& SpectralField::at(int n1, int n2, int c) const {
    return coeffs_[(static_cast<size_t>(n1 + M_) * (2 * M_) + (n2 + M_)) * comps_ + c];
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!same_layout(other)) throw std::invalid_argument("field layout mismatch in +=");
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!same_layout(other)) throw std::invalid_argument("field layout mismatch in -=");
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

LerayPair leray_project(const SpectralField& u) {
    if (u.components() != 2)
        throw std::invalid_argument("leray_project requires a 2-component field");
    const int M = u.cutoff();
    SpectralField sol(M, u.period(), 2);
    SpectralField grad(M, u.period(), 2);
    for (int n1 = -M; n1 < M; ++n1) {
        for (int n2 = -M; n2 < M; ++n2) {
            const Complex u1 = u.at(n1, n2, 0);
            const Complex u2 = u.at(n1, n2, 1);
            if (n1 == 0 && n2 == 0) {
                sol.at(0, 0, 0) = u1;
                sol.at(0, 0, 1) = u2;
                continue;
            }
            const double nsq = double(n1) * n1 + double(n2) * n2;
            const Complex proj = (u1 * double(n1) + u2 * double(n2)) / nsq;
            grad.at(n1, n2, 0) = proj * double(n1);
            grad.at(n1, n2, 1) = proj * double(n2);
            sol.at(n1, n2, 0) = u1 - grad.at(n1, n2, 0);
            sol.at(n1, n2, 1) = u2 - grad.at(n1, n2, 1);
        }
    }
    return {std::move(sol), std::move(grad)};
}

SpectralField potential_of_gradient(const SpectralField& g_field, double tol_scale) {
    if (g_field.components() != 2)
        throw std::invalid_argument("potential_of_gradient requires a 2-component field");
    const LerayPair split = leray_project(g_field);
    const double norm = parseval_norm(g_field);
    if (parseval_norm(split.solenoidal) > tol_scale * norm && norm > 0.0)
        throw std::invalid_argument(
            "potential_of_gradient: input has a nonzero solenoidal part");
    const int M = g_field.cutoff();
    const double L = g_field.period();
    SpectralField g(M, L, 1);
    for (int n1 = -M; n1 < M; ++n1) {
        for (int n2 = -M; n2 < M; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const double nsq = double(n1) * n1 + double(n2) * n2;
            const Complex dot = g_field.at(n1, n2, 0) * double(n1) +
                                g_field.at(n1, n2, 1) * double(n2);
            g.at(n1, n2) = Complex(0.0, -L / kTwoPi) * dot / nsq;
        }
    }
    return g;
}

SpectralField diffusion_average(const SpectralField& u, double a) {
    if (a < 0.0) throw std::invalid_argument("diffusion_average: a must be >= 0");
    const int M = u.cutoff();
    SpectralField out(M, u.period(), u.components());
    for (int n1 = -M; n1 < M; ++n1) {
        const double c1 = std::cos(a * n1);
        for (int n2 = -M; n2 < M; ++n2) {
            const double mult = c1 * std::cos(a * n2);
            for (int c = 0; c < u.components(); ++c)
                out.at(n1, n2, c) = mult * u.at(n1, n2, c);
        }
    }
    return out;
}

SpectralField multiply(const SpectralField& u, const SpectralField& v, int out_M) {
    if (u.period() != v.period())
        throw std::invalid_argument("multiply: mismatched periods");
    if (u.components() != 1 && v.components() != 1)
        throw std::invalid_argument("multiply: one factor must be scalar");
    const SpectralField& s = (u.components() == 1) ? u : v;
    const SpectralField& w = (u.components() == 1) ? v : u;
    const int Ms = s.cutoff();
    const int Mw = w.cutoff();
    SpectralField out(out_M, u.period(), w.components());
    for (int m1 = -Ms; m1 < Ms; ++m1) {
        for (int m2 = -Ms; m2 < Ms; ++m2) {
            const Complex sc = s.at(m1, m2);
            if (sc == Complex{}) continue;
            for (int l1 = -Mw; l1 < Mw; ++l1) {
                const int o1 = m1 + l1;
                if (o1 < -out_M || o1 >= out_M) continue;
                for (int l2 = -Mw; l2 < Mw; ++l2) {
                    const int o2 = m2 + l2;
                    if (o2 < -out_M || o2 >= out_M) continue;
                    for (int c = 0; c < w.components(); ++c)
                        out.at(o1, o2, c) += sc * w.at(l1, l2, c);
                }
            }
        }
    }
    return out;
}

SpectralField derivative(const SpectralField& u, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("derivative: axis must be 1 or 2");
    const int M = u.cutoff();
    const double k = kTwoPi / u.period();
    SpectralField out(M, u.period(), u.components());
    for (int n1 = -M; n1 < M; ++n1) {
        for (int n2 = -M; n2 < M; ++n2) {
            const Complex factor(0.0, k * (axis == 1 ? n1 : n2));
            for (int c = 0; c < u.components(); ++c)
                out.at(n1, n2, c) = factor * u.at(n1, n2, c);
        }
    }
    return out;
}

SpectralField divergence(const SpectralField& u) {
    if (u.components() != 2)
        throw std::invalid_argument("divergence requires a 2-component field");
    const int M = u.cutoff();
    const double k = kTwoPi / u.period();
    SpectralField out(M, u.period(), 1);
    for (int n1 = -M; n1 < M; ++n1)
        for (int n2 = -M; n2 < M; ++n2)
            out.at(n1, n2) = Complex(0.0, k) *
                             (double(n1) * u.at(n1, n2, 0) + double(n2) * u.at(n1, n2, 1));
    return out;
}

std::vector<std::vector<double>> evaluate_at(const SpectralField& u,
                                             const std::vector<Point>& points) {
    const int M = u.cutoff();
    const double k = kTwoPi / u.period();
    const double imag_tol = 1e-10 * parseval_norm(u);
    std::vector<std::vector<double>> out;
    out.reserve(points.size());
    for (const Point& p : points) {
        std::vector<Complex> acc(u.components(), Complex{});
        for (int n1 = -M; n1 < M; ++n1) {
            for (int n2 = -M; n2 < M; ++n2) {
                const Complex phase = std::polar(1.0, k * (n1 * p[0] + n2 * p[1]));
                for (int c = 0; c < u.components(); ++c)
                    acc[c] += u.at(n1, n2, c) * phase;
            }
        }
        std::vector<double> vals(u.components());
        for (int c = 0; c < u.components(); ++c) {
            if (std::abs(acc[c].imag()) > imag_tol)
                throw std::runtime_error(
                    "evaluate_at: Hermitian symmetry violation (imaginary residue)");
            vals[c] = acc[c].real();
        }
        out.push_back(std::move(vals));
    }
    return out;
}

double parseval_norm(const SpectralField& u) {
    double sum = 0.0;
    for (const Complex& c : u.raw()) sum += std::norm(c);
    return std::sqrt(sum);
}

SpectralField extract_component(const SpectralField& u, int c) {
    if (c < 0 || c >= u.components())
        throw std::invalid_argument("extract_component: bad component index");
    const int M = u.cutoff();
    SpectralField out(M, u.period(), 1);
    for (int n1 = -M; n1 < M; ++n1)
        for (int n2 = -M; n2 < M; ++n2)
            out.at(n1, n2) = u.at(n1, n2, c);
    return out;
}

SpectralField embedded(const SpectralField& u, int out_M) {
    const int M = u.cutoff();
    SpectralField out(out_M, u.period(), u.components());
    for (int n1 = -M; n1 < M; ++n1) {
        for (int n2 = -M; n2 < M; ++n2) {
            for (int c = 0; c < u.components(); ++c) {
                const Complex val = u.at(n1, n2, c);
                if (val == Complex{}) continue;
                if (!out.in_band(n1, n2))
                    throw std::invalid_argument("embedded: nonzero mode outside target band");
                out.at(n1, n2, c) = val;
            }
        }
    }
    return out;
}

SpectralField truncated(const SpectralField& u, int out_M) {
    const int M = u.cutoff();
    SpectralField out(out_M, u.period(), u.components());
    const int lo = -(out_M - 1);
    const int hi = out_M - 1;
    for (int n1 = std::max(lo, -M); n1 <= std::min(hi, M - 1); ++n1)
        for (int n2 = std::max(lo, -M); n2 <= std::min(hi, M - 1); ++n2)
            for (int c = 0; c < u.components(); ++c)
                out.at(n1, n2, c) = u.at(n1, n2, c);
    return out;
}

double hermitian_residual(const SpectralField& u) {
    const int M = u.cutoff();
    double worst = 0.0;
    for (int n1 = -(M - 1); n1 < M; ++n1)
        for (int n2 = -(M - 1); n2 < M; ++n2)
            for (int c = 0; c < u.components(); ++c)
                worst = std::max(worst,
                                 std::abs(u.at(-n1, -n2, c) - std::conj(u.at(n1, n2, c))));
    // the -M row/column has no mirror inside the band; realness requires zero
    for (int n = -M; n < M; ++n)
        for (int c = 0; c < u.components(); ++c)
            worst = std::max({worst, std::abs(u.at(-M, n, c)), std::abs(u.at(n, -M, c))});
    return worst;
}

bool all_finite(const SpectralField& u) {
    for (const Complex& c : u.raw())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

std::vector<double> evaluate_on_grid(const SpectralField& u, int grid_size) {
    const double dx = u.period() / grid_size;
    std::vector<Point> pts;
    pts.reserve(static_cast<size_t>(grid_size) * grid_size);
    for (int i = 0; i < grid_size; ++i)
        for (int j = 0; j < grid_size; ++j)
            pts.push_back({i * dx, j * dx});
    const auto vals = evaluate_at(u, pts);
    std::vector<double> out;
    out.reserve(vals.size() * u.components());
    for (const auto& v : vals)
        for (double x : v) out.push_back(x);
    return out;
}

SpectralField from_grid_samples(const std::vector<double>& samples, int grid_size,
                                int out_M, double period, int components) {
    if (samples.size() != static_cast<size_t>(grid_size) * grid_size * components)
        throw std::invalid_argument("from_grid_samples: sample count mismatch");
    SpectralField out(out_M, period, components);
    const double scale = 1.0 / (static_cast<double>(grid_size) * grid_size);
    for (int n1 = -(out_M - 1); n1 < out_M; ++n1) {
        for (int n2 = -(out_M - 1); n2 < out_M; ++n2) {
            std::vector<Complex> acc(components, Complex{});
            for (int i = 0; i < grid_size; ++i) {
                for (int j = 0; j < grid_size; ++j) {
                    const Complex phase =
                        std::polar(1.0, -kTwoPi * (double(n1) * i + double(n2) * j) / grid_size);
                    const size_t base = (static_cast<size_t>(i) * grid_size + j) * components;
                    for (int c = 0; c < components; ++c)
                        acc[c] += samples[base + c] * phase;
                }
            }
            for (int c = 0; c < components; ++c)
                out.at(n1, n2, c) = acc[c] * scale;
        }
    }
    return out;
}

double max_pointwise_norm(const SpectralField& u) {
    const int G = 4 * u.cutoff();
    const auto vals = evaluate_on_grid(u, G);
    double worst = 0.0;
    const int comps = u.components();
    for (size_t i = 0; i < vals.size(); i += comps) {
        double sq = 0.0;
        for (int c = 0; c < comps; ++c) sq += vals[i + c] * vals[i + c];
        worst = std::max(worst, sq);
    }
    return std::sqrt(worst);
}

}  // namespace snse
