#pragma once

#include <cstddef>
#include <vector>

namespace pfedgame::kernels {

// Data-parallel inner loops used by the learners, the aggregation function
// and the accuracy evaluator. Each OpenMP kernel partitions work over
// independent output elements (or an exact integer reduction), so its result
// is bit-identical to the serial mirror in kernels::serial at any thread
// count. Tests compare the two; the bench tool times them.

/// C[n x c] = A[n x d] * B[d x c] (+ optional bias[c] broadcast over rows)
void matmul_bias(const double* a, std::size_t n, std::size_t d, const double* b,
                 const double* bias, std::size_t c, double* out);

/// C[d x c] = A^T[d x n] * B[n x c], scaled by `scale`
void matmul_at_b(const double* a, std::size_t n, std::size_t d, const double* b, std::size_t c,
                 double scale, double* out);

/// C[n x h] = A[n x c] * B^T[c x h], where B is [h x c]
void matmul_a_bt(const double* a, std::size_t n, std::size_t c, const double* b, std::size_t h,
                 double* out);

/// Row-wise softmax of logits followed by subtraction of the one-hot label:
/// out[i,:] = softmax(logits[i,:]) - e_{labels[i]}. Stable (max-shifted).
void softmax_xent_grad(const double* logits, std::size_t n, std::size_t c, const int* labels,
                       double* out);

/// Number of rows whose argmax (lowest index wins ties) equals the label.
std::size_t count_correct(const double* logits, std::size_t n, std::size_t c, const int* labels);

/// out[j] = sum_i w[i] * src[i][j], clamped to the coordinate-wise
/// [min, max] envelope of the inputs. The clamp keeps convex combinations of
/// equal points exact and bounds rounding at the envelope edges.
void convex_combine(const std::vector<const double*>& srcs, const std::vector<double>& weights,
                    std::size_t len, double* out);

namespace serial {

void matmul_bias(const double* a, std::size_t n, std::size_t d, const double* b,
                 const double* bias, std::size_t c, double* out);
void matmul_at_b(const double* a, std::size_t n, std::size_t d, const double* b, std::size_t c,
                 double scale, double* out);
void matmul_a_bt(const double* a, std::size_t n, std::size_t c, const double* b, std::size_t h,
                 double* out);
void softmax_xent_grad(const double* logits, std::size_t n, std::size_t c, const int* labels,
                       double* out);
std::size_t count_correct(const double* logits, std::size_t n, std::size_t c, const int* labels);
void convex_combine(const std::vector<const double*>& srcs, const std::vector<double>& weights,
                    std::size_t len, double* out);

}  // namespace serial

}  // namespace pfedgame::kernels
