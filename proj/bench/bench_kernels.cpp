// Serial vs OpenMP timings of the data-parallel kernels. Each kernel is run
// both ways, the outputs are compared byte for byte, and the best of
// `reps` wall times is reported.
//
//   bench_kernels [reps] [threads]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "optodicke/exec.hpp"
#include "optodicke/meanfield.hpp"
#include "optodicke/quantum1d.hpp"
#include "optodicke/stability.hpp"

using namespace optodicke;

namespace {

double best_of(int reps, const std::function<std::string()>& f, std::string& out) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        out = f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, int reps, const std::function<std::string(Exec)>& kernel) {
    std::string a, b;
    const double ts = best_of(reps, [&] { return kernel(Exec::serial); }, a);
    const double tp = best_of(reps, [&] { return kernel(Exec::parallel); }, b);
    std::printf("%-28s %12.4f %12.4f %8.2fx  %s\n", name, ts * 1e3, tp * 1e3, ts / tp,
                a == b ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    if (argc > 2) set_thread_count(std::atoi(argv[2]));
    std::printf("threads: %d, best of %d\n", thread_count(), reps);
    std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

    DimensionlessParams fig4;
    fig4.g = 3.0;
    fig4.kappa = 2.0;
    fig4.eta_a = 4.0;
    fig4.eta_b = -4.0;
    const auto mu_grid = meanfield::make_mu_grid({0.0, 4.0, 200001, false});
    row("sweep (200001 mu)", reps, [&](Exec e) { return meanfield::sweep_csv(meanfield::sweep(fig4, mu_grid, e)); });

    DimensionlessParams fig5;
    fig5.g = 2.0;
    fig5.kappa = 1.0;
    const auto scan_grid = meanfield::make_mu_grid({0.0, 3.0, 5001, false});
    row("spectrum scan (5001 mu)", reps,
        [&](Exec e) { return stability::spectrum_csv(stability::scan_spectrum(fig5, scan_grid, e)); });

    DimensionlessParams cat;
    cat.V = 1e4;
    cat.lambda = 1.05;
    const auto wf = quantum1d::ground_state(cat, quantum1d::default_grid(cat, quantum1d::Domain::full, 2049));
    quantum1d::WignerOptions opt;
    opt.n_p = 513;
    opt.x_stride = 4;
    row("wigner (513 x 513)", reps, [&](Exec e) { return quantum1d::wigner_csv(quantum1d::wigner(wf, opt, e)); });

    std::vector<double> lambdas;
    for (int i = 0; i <= 40; ++i) lambdas.push_back(0.9 + 0.005 * i);
    DimensionlessParams sq;
    sq.V = 1e4;
    row("squeezing (41 lambda)", reps,
        [&](Exec e) { return quantum1d::squeezing_csv(quantum1d::squeezing_sweep(sq, lambdas, 2048, e)); });
    return 0;
}
