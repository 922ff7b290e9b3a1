// Times the OpenMP kernels against their serial reference implementations,
// plus one full simulation round at both exec modes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pfedgame/config.hpp"
#include "pfedgame/kernels.hpp"
#include "pfedgame/rng.hpp"
#include "pfedgame/simulator.hpp"

using namespace pfedgame;

namespace {

double time_best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

void report(const std::string& name, double serial_s, double parallel_s) {
    std::printf("%-22s %10.4f ms %10.4f ms %8.2fx\n", name.c_str(), serial_s * 1e3,
                parallel_s * 1e3, serial_s / parallel_s);
}

std::vector<double> random_matrix(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> m(n);
    for (double& v : m) v = rng.uniform(-1.0, 1.0);
    return m;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run serial code\n");
#endif
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    const std::size_t n = 2048, d = 256, c = 64, h = 128;
    const auto x = random_matrix(n * d, 1);
    const auto w = random_matrix(d * c, 2);
    const auto bias = random_matrix(c, 3);
    const auto g = random_matrix(n * c, 4);
    const auto w2 = random_matrix(h * c, 5);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % c);
    std::vector<double> out1(n * c), out2(d * c), out3(n * h);

    report("matmul_bias",
           time_best_of(5, [&] {
               kernels::serial::matmul_bias(x.data(), n, d, w.data(), bias.data(), c, out1.data());
           }),
           time_best_of(5, [&] {
               kernels::matmul_bias(x.data(), n, d, w.data(), bias.data(), c, out1.data());
           }));
    report("matmul_at_b",
           time_best_of(5, [&] {
               kernels::serial::matmul_at_b(x.data(), n, d, g.data(), c, 1.0 / double(n),
                                            out2.data());
           }),
           time_best_of(5, [&] {
               kernels::matmul_at_b(x.data(), n, d, g.data(), c, 1.0 / double(n), out2.data());
           }));
    report("matmul_a_bt",
           time_best_of(5, [&] {
               kernels::serial::matmul_a_bt(g.data(), n, c, w2.data(), h, out3.data());
           }),
           time_best_of(5, [&] {
               kernels::matmul_a_bt(g.data(), n, c, w2.data(), h, out3.data());
           }));
    std::vector<double> grad_buf(n * c);
    report("softmax_xent_grad",
           time_best_of(5, [&] {
               kernels::serial::softmax_xent_grad(out1.data(), n, c, labels.data(),
                                                  grad_buf.data());
           }),
           time_best_of(5, [&] {
               kernels::softmax_xent_grad(out1.data(), n, c, labels.data(), grad_buf.data());
           }));
    report("count_correct",
           time_best_of(5, [&] {
               volatile std::size_t r =
                   kernels::serial::count_correct(out1.data(), n, c, labels.data());
               (void)r;
           }),
           time_best_of(5, [&] {
               volatile std::size_t r = kernels::count_correct(out1.data(), n, c, labels.data());
               (void)r;
           }));

    const std::size_t len = 1 << 20;
    const auto v0 = random_matrix(len, 10);
    const auto v1 = random_matrix(len, 11);
    const auto v2 = random_matrix(len, 12);
    std::vector<const double*> srcs = {v0.data(), v1.data(), v2.data()};
    std::vector<double> weights = {0.5, 0.3, 0.2};
    std::vector<double> combined(len);
    report("convex_combine",
           time_best_of(5, [&] {
               kernels::serial::convex_combine(srcs, weights, len, combined.data());
           }),
           time_best_of(5, [&] { kernels::convex_combine(srcs, weights, len, combined.data()); }));

    // One full pfedgame round, serial loop vs OpenMP loop over nodes.
    SimConfig cfg = expand_preset("extreme-synthetic");
    cfg.dataset.synthetic.per_class = 400;
    cfg.train.epochs = 4;
    cfg.exec = ExecMode::serial;
    SimState serial_state = setup_state(cfg);
    const double round_serial = time_best_of(3, [&] {
        SimState s = serial_state;
        run_round(s, 0, cfg);
    });
    cfg.exec = ExecMode::openmp;
    const double round_parallel = time_best_of(3, [&] {
        SimState s = serial_state;
        run_round(s, 0, cfg);
    });
    report("run_round (k=5)", round_serial, round_parallel);
    return 0;
}
