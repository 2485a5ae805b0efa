#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace snse {

// Counter-based generator (Philox4x32-10) keyed by (seed, run_index).  Every
// normal draw is addressed by (step, draw) so trajectories are reproducible
// independently of thread count and evaluation order.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t run_index);

    // Standard normal via Box-Muller on two counter-addressed uniforms.
    double normal(uint64_t step, uint32_t draw) const;

    // Uniform in (0,1).
    double uniform(uint64_t step, uint32_t draw) const;

private:
    uint32_t key_[2];
};

// One realization of the q-dimensional driving Wiener process on [0,T] with N
// uniform steps, plus (optionally) the pathwise integral I(t) = int_0^t w_1 ds
// advanced by its exact joint Gaussian update.
struct WienerPath {
    int q = 0;
    double T = 0.0;
    int N = 0;
    double h = 0.0;
    std::vector<double> increments;  // N x q, row-major
    std::vector<double> values;      // (N+1) x q running sums, values[0] = 0
    std::vector<double> i_values;    // N+1 when populated, else empty
    uint64_t seed = 0;
    uint64_t run_index = 0;

    double increment(int k, int r) const { return increments[static_cast<size_t>(k) * q + r]; }
    double value(int k, int r) const { return values[static_cast<size_t>(k) * q + r]; }
    bool has_integral() const { return !i_values.empty(); }
};

WienerPath generate_path(int q, double T, int N, uint64_t seed,
                         uint64_t run_index = 0, bool with_integral = false);

// Coarse path on the same realization: values (and i_values) are subsampled,
// increments are the successive differences of the subsampled values, so
// w(T) and I(T) are bit-identical across all coarsening factors.
WienerPath coarsen_path(const WienerPath& p, int factor);

// All 2^dim sign vectors, xi_1 = (1,...,1), xi_{2^dim} = (-1,...,-1).
struct RademacherSet {
    int dim = 0;
    std::vector<std::vector<int>> vectors;

    static RademacherSet make(int dim);
};

// CSV replay format: k, t_k, w_1..w_q, I (I column present only when the
// path carries the integral).
void dump_path_csv(const WienerPath& p, std::ostream& out);
WienerPath load_path_csv(std::istream& in);

}  // namespace snse
