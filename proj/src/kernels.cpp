#include "pfedgame/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfedgame::kernels {

namespace {

inline void matmul_bias_row(const double* a, std::size_t d, const double* b, const double* bias,
                            std::size_t c, double* out_row) {
    for (std::size_t k = 0; k < c; ++k) out_row[k] = bias ? bias[k] : 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double aij = a[j];
        const double* brow = b + j * c;
        for (std::size_t k = 0; k < c; ++k) out_row[k] += aij * brow[k];
    }
}

inline void softmax_xent_grad_row(const double* z, std::size_t c, int label, double* out_row) {
    double m = z[0];
    for (std::size_t k = 1; k < c; ++k) m = std::max(m, z[k]);
    double sum = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
        out_row[k] = std::exp(z[k] - m);
        sum += out_row[k];
    }
    for (std::size_t k = 0; k < c; ++k) out_row[k] /= sum;
    out_row[label] -= 1.0;
}

inline std::size_t argmax_row(const double* z, std::size_t c) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < c; ++k) {
        if (z[k] > z[best]) best = k;  // lowest index wins ties
    }
    return best;
}

inline double combine_coord(const std::vector<const double*>& srcs,
                            const std::vector<double>& weights, std::size_t j) {
    double lo = srcs[0][j];
    double hi = lo;
    double s = 0.0;
    for (std::size_t i = 0; i < srcs.size(); ++i) {
        const double v = srcs[i][j];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        s += weights[i] * v;
    }
    return std::clamp(s, lo, hi);
}

void check_combine_args(const std::vector<const double*>& srcs,
                        const std::vector<double>& weights) {
    if (srcs.empty() || srcs.size() != weights.size()) {
        throw std::invalid_argument("convex_combine: sources/weights size mismatch");
    }
}

}  // namespace

void matmul_bias(const double* a, std::size_t n, std::size_t d, const double* b,
                 const double* bias, std::size_t c, double* out) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
        matmul_bias_row(a + i * d, d, b, bias, c, out + i * c);
    }
}

void matmul_at_b(const double* a, std::size_t n, std::size_t d, const double* b, std::size_t c,
                 double scale, double* out) {
    const long long total = static_cast<long long>(d * c);
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < total; ++idx) {
        const std::size_t j = static_cast<std::size_t>(idx) / c;
        const std::size_t k = static_cast<std::size_t>(idx) % c;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i * d + j] * b[i * c + k];
        out[idx] = s * scale;
    }
}

void matmul_a_bt(const double* a, std::size_t n, std::size_t c, const double* b, std::size_t h,
                 double* out) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
        const double* arow = a + i * c;
        double* orow = out + i * h;
        for (std::size_t j = 0; j < h; ++j) {
            const double* brow = b + j * c;
            double s = 0.0;
            for (std::size_t k = 0; k < c; ++k) s += arow[k] * brow[k];
            orow[j] = s;
        }
    }
}

void softmax_xent_grad(const double* logits, std::size_t n, std::size_t c, const int* labels,
                       double* out) {
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < nn; ++i) {
        softmax_xent_grad_row(logits + i * c, c, labels[i], out + i * c);
    }
}

std::size_t count_correct(const double* logits, std::size_t n, std::size_t c, const int* labels) {
    const long long nn = static_cast<long long>(n);
    long long correct = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct)
    for (long long i = 0; i < nn; ++i) {
        if (argmax_row(logits + i * c, c) == static_cast<std::size_t>(labels[i])) ++correct;
    }
    return static_cast<std::size_t>(correct);
}

void convex_combine(const std::vector<const double*>& srcs, const std::vector<double>& weights,
                    std::size_t len, double* out) {
    check_combine_args(srcs, weights);
    const long long total = static_cast<long long>(len);
#pragma omp parallel for schedule(static)
    for (long long j = 0; j < total; ++j) {
        out[j] = combine_coord(srcs, weights, static_cast<std::size_t>(j));
    }
}

namespace serial {

void matmul_bias(const double* a, std::size_t n, std::size_t d, const double* b,
                 const double* bias, std::size_t c, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        matmul_bias_row(a + i * d, d, b, bias, c, out + i * c);
    }
}

void matmul_at_b(const double* a, std::size_t n, std::size_t d, const double* b, std::size_t c,
                 double scale, double* out) {
    for (std::size_t idx = 0; idx < d * c; ++idx) {
        const std::size_t j = idx / c;
        const std::size_t k = idx % c;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i * d + j] * b[i * c + k];
        out[idx] = s * scale;
    }
}

void matmul_a_bt(const double* a, std::size_t n, std::size_t c, const double* b, std::size_t h,
                 double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a + i * c;
        double* orow = out + i * h;
        for (std::size_t j = 0; j < h; ++j) {
            const double* brow = b + j * c;
            double s = 0.0;
            for (std::size_t k = 0; k < c; ++k) s += arow[k] * brow[k];
            orow[j] = s;
        }
    }
}

void softmax_xent_grad(const double* logits, std::size_t n, std::size_t c, const int* labels,
                       double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        softmax_xent_grad_row(logits + i * c, c, labels[i], out + i * c);
    }
}

std::size_t count_correct(const double* logits, std::size_t n, std::size_t c, const int* labels) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (argmax_row(logits + i * c, c) == static_cast<std::size_t>(labels[i])) ++correct;
    }
    return correct;
}

void convex_combine(const std::vector<const double*>& srcs, const std::vector<double>& weights,
                    std::size_t len, double* out) {
    check_combine_args(srcs, weights);
    for (std::size_t j = 0; j < len; ++j) out[j] = combine_coord(srcs, weights, j);
}

}  // namespace serial

}  // namespace pfedgame::kernels
