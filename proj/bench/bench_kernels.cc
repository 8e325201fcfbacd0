// Serial reference vs OpenMP table kernel vs statevector, same tape.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <algorithm>
#include <cstdlib>

#include <omp.h>

#include "shornoise/analytic.h"
#include "shornoise/statevec.h"

using namespace shornoise;

namespace {

template <class F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  const unsigned n_max = argc > 1 ? static_cast<unsigned>(std::atoi(argv[1])) : 14;
  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%4s %8s %6s %12s %12s %12s %10s %12s\n", "n", "omega", "K", "reference_s", "kernel_s", "statevec_s",
              "speedup", "max_diff");
  for (unsigned n = 8; n <= n_max; n += 2) {
    const uint64_t omega = (uint64_t{1} << (n / 2)) + 3;
    const PeriodicFamily family(n, omega, 1);
    const NoiseConfig config{1.0, 2, NoiseMode::full_noise, NoiseDistribution::gaussian_unit, 42};
    const auto tape = draw_tape(n, config);
    std::vector<double> slow, fast, sv;
    const double t_ref = seconds([&] { slow = prob_table_reference(family, config, tape); });
    const double t_ker = seconds([&] { fast = prob_table(family, config, tape); });
    const double t_sv = seconds([&] { sv = measure_distribution(apply_qft_noisy(prepare_periodic(family), config, tape)); });
    double diff = 0;
    for (size_t v = 0; v < fast.size(); ++v) diff = std::max({diff, std::abs(fast[v] - slow[v]), std::abs(sv[v] - slow[v])});
    std::printf("%4u %8llu %6llu %12.4f %12.4f %12.4f %10.1f %12.3g\n", n, static_cast<unsigned long long>(omega),
                static_cast<unsigned long long>(family.size()), t_ref, t_ker, t_sv, t_ref / t_ker, diff);
  }
  return 0;
}
