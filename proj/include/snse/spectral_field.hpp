#pragma once

#include <array>
#include <complex>
#include <vector>

namespace snse {

using Complex = std::complex<double>;
using Point = std::array<double, 2>;

struct ModeIndex {
    int n1 = 0;
    int n2 = 0;
};

// Truncated Fourier representation of a periodic scalar or 2-vector field on
// the square (0,L)^2.  Modes run over the band n1,n2 in {-M,...,M-1}; fields
// built from real data keep their support inside the symmetric sub-band
// {-(M-1),...,M-1}^2 so that Hermitian symmetry (realness) can hold.
//
// Normalization: u(x) = sum_n u_n exp(i (2 pi / L) (n, x)), so that
// sum_n |u_n|^2 = (1/L^2) * integral_Q |u|^2 dx.
class SpectralField {
public:
    SpectralField(int cutoff, double period, int components);

    int cutoff() const { return M_; }
    double period() const { return L_; }
    int components() const { return comps_; }
    int band_size() const { return 2 * M_; }

    bool in_band(int n1, int n2) const {
        return n1 >= -M_ && n1 < M_ && n2 >= -M_ && n2 < M_;
    }

    Complex& at(int n1, int n2, int c = 0);
    const Complex& at(int n1, int n2, int c = 0) const;

    const std::vector<Complex>& raw() const { return coeffs_; }
    std::vector<Complex>& raw() { return coeffs_; }

    bool same_layout(const SpectralField& other) const {
        return M_ == other.M_ && L_ == other.L_ && comps_ == other.comps_;
    }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    int M_;
    double L_;
    int comps_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

struct LerayPair {
    SpectralField solenoidal;
    SpectralField gradient_part;
};

// Helmholtz-Hodge-Leray split per mode: (Pu)_n = u_n - (u_n^T n / |n|^2) n.
// The zero mode passes through to the solenoidal part.
LerayPair leray_project(const SpectralField& u);

// Scalar potential g with grad g equal to the input gradient field:
// g_n = -i (L / 2 pi) (u_n^T n) / |n|^2, g_0 = 0.  Rejects inputs whose
// solenoidal part exceeds tol_scale * parseval_norm.
SpectralField potential_of_gradient(const SpectralField& g_field,
                                    double tol_scale = 1e-10);

// Per-mode multiplier cos(a n1) cos(a n2): the exact average of the four
// Rademacher shifts x + (a L / 2 pi) xi_j.
SpectralField diffusion_average(const SpectralField& u, double a);

// Fourier coefficients of the pointwise product, direct convolution, output
// truncated to band out_M.  Exact whenever out_M >= M_u + M_v.  One factor
// must be scalar; contractions are assembled by the caller.
SpectralField multiply(const SpectralField& u, const SpectralField& v,
                       int out_M);

// d/dx^axis: per-mode multiplication by i (2 pi / L) n_axis.  axis is 1 or 2.
SpectralField derivative(const SpectralField& u, int axis);

// Scalar field i (2 pi / L) (n1 u^1_n + n2 u^2_n).
SpectralField divergence(const SpectralField& u);

// Partial-sum evaluation at arbitrary points; returns the real parts and
// throws if the imaginary residue exceeds 1e-10 * parseval_norm.
std::vector<std::vector<double>> evaluate_at(const SpectralField& u,
                                             const std::vector<Point>& points);

double parseval_norm(const SpectralField& u);

// --- helpers used by the layer methods and model problems ---

SpectralField extract_component(const SpectralField& u, int c);

// Copy into a (usually larger) band; out-of-band source modes are rejected.
SpectralField embedded(const SpectralField& u, int out_M);

// Keep only modes inside the symmetric sub-band {-(out_M-1),...,out_M-1}^2;
// everything else (including the -out_M row/column) is discarded so that
// truncation preserves realness.
SpectralField truncated(const SpectralField& u, int out_M);

// max_n |coeff(-n) - conj(coeff(n))| over modes with both n and -n in band.
double hermitian_residual(const SpectralField& u);

bool all_finite(const SpectralField& u);

// Real samples on the uniform grid x_ij = (i,j) L / G, row-major in i (x^1).
// Throws on imaginary residue like evaluate_at.
std::vector<double> evaluate_on_grid(const SpectralField& u, int grid_size);

// Inverse of evaluate_on_grid by trapezoidal (here: rectangle) quadrature,
// exact for fields band-limited within +-grid_size/2.  Output support is the
// symmetric sub-band of out_M.
SpectralField from_grid_samples(const std::vector<double>& samples,
                                int grid_size, int out_M, double period,
                                int components);

// max over the (4M)^2 collocation grid of the pointwise vector magnitude.
double max_pointwise_norm(const SpectralField& u);

}  // namespace snse
