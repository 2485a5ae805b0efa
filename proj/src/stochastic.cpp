#include "snse/stochastic.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace snse {

namespace {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

// Philox4x32-10 (Salmon et al. constants).
void philox4x32(const uint32_t key_in[2], const uint32_t ctr_in[4], uint32_t out[4]) {
    uint32_t k0 = key_in[0], k1 = key_in[1];
    uint32_t c0 = ctr_in[0], c1 = ctr_in[1], c2 = ctr_in[2], c3 = ctr_in[3];
    for (int round = 0; round < 10; ++round) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(0xD2511F53u, c0, hi0, lo0);
        mulhilo(0xCD9E8D57u, c2, hi1, lo1);
        const uint32_t n0 = hi1 ^ c1 ^ k0;
        const uint32_t n1 = lo1;
        const uint32_t n2 = hi0 ^ c3 ^ k1;
        const uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
}

inline double to_unit_interval(uint32_t hi, uint32_t lo) {
    const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
    // 53-bit mantissa, shifted into (0,1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

CounterRng::CounterRng(uint64_t seed, uint64_t run_index) {
    const uint64_t mixed = splitmix64(seed ^ splitmix64(run_index + 0x123456789ABCDEF0ull));
    key_[0] = static_cast<uint32_t>(mixed);
    key_[1] = static_cast<uint32_t>(mixed >> 32);
}

double CounterRng::uniform(uint64_t step, uint32_t draw) const {
    const uint32_t ctr[4] = {static_cast<uint32_t>(step),
                             static_cast<uint32_t>(step >> 32), draw, 0u};
    uint32_t out[4];
    philox4x32(key_, ctr, out);
    return to_unit_interval(out[0], out[1]);
}

double CounterRng::normal(uint64_t step, uint32_t draw) const {
    const uint32_t ctr[4] = {static_cast<uint32_t>(step),
                             static_cast<uint32_t>(step >> 32), draw, 0u};
    uint32_t out[4];
    philox4x32(key_, ctr, out);
    const double u1 = to_unit_interval(out[0], out[1]);
    const double u2 = to_unit_interval(out[2], out[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WienerPath generate_path(int q, double T, int N, uint64_t seed, uint64_t run_index,
                         bool with_integral) {
    if (q < 1) throw std::invalid_argument("generate_path: q must be >= 1");
    if (T < 0.0) throw std::invalid_argument("generate_path: T must be >= 0");
    if (N < 0) throw std::invalid_argument("generate_path: N must be >= 0");
    WienerPath p;
    p.q = q;
    p.T = T;
    p.N = N;
    p.h = (N > 0) ? T / N : 0.0;
    p.seed = seed;
    p.run_index = run_index;
    p.increments.assign(static_cast<size_t>(N) * q, 0.0);
    p.values.assign(static_cast<size_t>(N + 1) * q, 0.0);
    if (with_integral) p.i_values.assign(N + 1, 0.0);

    const CounterRng rng(seed, run_index);
    const double sqrt_h = std::sqrt(p.h);
    for (int k = 0; k < N; ++k) {
        for (int r = 0; r < q; ++r) {
            const double dw = sqrt_h * rng.normal(static_cast<uint64_t>(k), static_cast<uint32_t>(r));
            p.increments[static_cast<size_t>(k) * q + r] = dw;
            p.values[static_cast<size_t>(k + 1) * q + r] =
                p.values[static_cast<size_t>(k) * q + r] + dw;
        }
        if (with_integral) {
            // exact joint update of (w_1, I): I_{k+1} = I_k + h w_1(t_k)
            //   + (h/2) dw_1 + (h^{3/2}/sqrt(12)) eta_k
            const double eta = rng.normal(static_cast<uint64_t>(k), static_cast<uint32_t>(q));
            p.i_values[k + 1] = p.i_values[k] + p.h * p.values[static_cast<size_t>(k) * q] +
                                0.5 * p.h * p.increments[static_cast<size_t>(k) * q] +
                                p.h * sqrt_h / std::sqrt(12.0) * eta;
        }
    }
    return p;
}

WienerPath coarsen_path(const WienerPath& p, int factor) {
    if (factor < 1 || p.N % factor != 0)
        throw std::invalid_argument("coarsen_path: factor must divide N");
    if (factor == 1) return p;
    WienerPath c;
    c.q = p.q;
    c.T = p.T;
    c.N = p.N / factor;
    c.h = p.h * factor;
    c.seed = p.seed;
    c.run_index = p.run_index;
    c.values.resize(static_cast<size_t>(c.N + 1) * p.q);
    c.increments.resize(static_cast<size_t>(c.N) * p.q);
    for (int k = 0; k <= c.N; ++k)
        for (int r = 0; r < p.q; ++r)
            c.values[static_cast<size_t>(k) * p.q + r] =
                p.values[static_cast<size_t>(k) * factor * p.q + r];
    for (int k = 0; k < c.N; ++k)
        for (int r = 0; r < p.q; ++r)
            c.increments[static_cast<size_t>(k) * p.q + r] =
                c.values[static_cast<size_t>(k + 1) * p.q + r] -
                c.values[static_cast<size_t>(k) * p.q + r];
    if (p.has_integral()) {
        c.i_values.resize(c.N + 1);
        for (int k = 0; k <= c.N; ++k) c.i_values[k] = p.i_values[static_cast<size_t>(k) * factor];
    }
    return c;
}

RademacherSet RademacherSet::make(int dim) {
    if (dim < 1 || dim > 20) throw std::invalid_argument("RademacherSet: bad dimension");
    RademacherSet set;
    set.dim = dim;
    const int count = 1 << dim;
    set.vectors.reserve(count);
    for (int j = 0; j < count; ++j) {
        std::vector<int> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = (j >> i) & 1 ? -1 : 1;
        set.vectors.push_back(std::move(v));
    }
    return set;
}

void dump_path_csv(const WienerPath& p, std::ostream& out) {
    out << "k,t_k";
    for (int r = 0; r < p.q; ++r) out << ",w_" << (r + 1);
    if (p.has_integral()) out << ",I";
    out << "\n";
    char buf[64];
    for (int k = 0; k <= p.N; ++k) {
        out << k;
        std::snprintf(buf, sizeof(buf), ",%.17g", k * p.h);
        out << buf;
        for (int r = 0; r < p.q; ++r) {
            std::snprintf(buf, sizeof(buf), ",%.17g", p.value(k, r));
            out << buf;
        }
        if (p.has_integral()) {
            std::snprintf(buf, sizeof(buf), ",%.17g", p.i_values[k]);
            out << buf;
        }
        out << "\n";
    }
}

WienerPath load_path_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_path_csv: empty input");
    int q = 0;
    bool with_integral = false;
    {
        std::stringstream header(line);
        std::string col;
        while (std::getline(header, col, ',')) {
            if (col.rfind("w_", 0) == 0) ++q;
            if (col == "I") with_integral = true;
        }
    }
    if (q < 1) throw std::runtime_error("load_path_csv: no w columns in header");

    WienerPath p;
    p.q = q;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');  // k
        std::getline(row, cell, ',');
        times.push_back(std::stod(cell));
        for (int r = 0; r < q; ++r) {
            std::getline(row, cell, ',');
            p.values.push_back(std::stod(cell));
        }
        if (with_integral) {
            std::getline(row, cell, ',');
            p.i_values.push_back(std::stod(cell));
        }
    }
    if (times.empty()) throw std::runtime_error("load_path_csv: no rows");
    p.N = static_cast<int>(times.size()) - 1;
    p.T = times.back();
    p.h = (p.N > 0) ? p.T / p.N : 0.0;
    p.increments.resize(static_cast<size_t>(p.N) * q);
    for (int k = 0; k < p.N; ++k)
        for (int r = 0; r < q; ++r)
            p.increments[static_cast<size_t>(k) * q + r] =
                p.values[static_cast<size_t>(k + 1) * q + r] -
                p.values[static_cast<size_t>(k) * q + r];
    return p;
}

}  // namespace snse
