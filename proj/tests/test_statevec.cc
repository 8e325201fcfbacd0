#include <cmath>
#include <complex>
#include <numeric>

#include "doctest.h"
#include "shornoise/analytic.h"
#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"
#include "shornoise/statevec.h"

using namespace shornoise;
using cd = std::complex<double>;

namespace {

NoiseConfig make(NoiseMode mode, double eps, unsigned band, uint64_t seed) {
  return NoiseConfig{eps, band, mode, NoiseDistribution::gaussian_unit, seed};
}

}  // namespace

TEST_SUITE("statevec") {
  TEST_CASE("prepare_periodic") {
    const auto a = prepare_periodic(PeriodicFamily(2, 1, 0));
    for (const auto& z : a.amplitudes()) CHECK(std::abs(z - cd(0.5)) < 1e-15);
    const auto b = prepare_periodic(PeriodicFamily(4, 4, 1));
    for (uint64_t i = 0; i < 16; ++i) CHECK(std::abs(b.amplitudes()[i]) == doctest::Approx(i % 4 == 1 ? 0.5 : 0.0));
    const auto c = prepare_periodic(PeriodicFamily(3, 8, 5));
    CHECK(c.amplitudes()[5] == cd(1.0));
    CHECK(c.norm_squared() == doctest::Approx(1.0));
    CHECK_THROWS_AS(QuantumState(21), CapacityError);
  }

  TEST_CASE("single qubit is a Hadamard") {
    const auto exact = make(NoiseMode::exact, 0, 2, 0);
    const auto out = apply_qft_noisy(QuantumState(1), exact, NoiseTape{});
    CHECK(std::abs(out.amplitudes()[0] - cd(M_SQRT1_2)) < 1e-15);
    CHECK(std::abs(out.amplitudes()[1] - cd(M_SQRT1_2)) < 1e-15);
  }

  TEST_CASE("exact mode equals the dense DFT matrix") {
    const auto exact = make(NoiseMode::exact, 0, 2, 0);
    for (unsigned n = 1; n <= 8; ++n) {
      const uint64_t dim = uint64_t{1} << n;
      // Random input state against the explicit matrix product.
      CounterRng rng(n);
      QuantumState in(n);
      for (auto& z : in.amplitudes()) z = cd(rng.gaussian(), rng.gaussian());
      const double norm = std::sqrt(in.norm_squared());
      for (auto& z : in.amplitudes()) z /= norm;
      const auto out = apply_qft_noisy(in, exact, NoiseTape{});
      double worst = 0;
      for (uint64_t v = 0; v < dim; ++v) {
        cd acc = 0;
        for (uint64_t u = 0; u < dim; ++u)
          acc += std::polar(1.0, 2 * M_PI * static_cast<double>((u * v) % dim) / static_cast<double>(dim)) *
                 in.amplitudes()[u];
        acc /= std::sqrt(static_cast<double>(dim));
        worst = std::max(worst, std::abs(acc - out.amplitudes()[v]));
      }
      CHECK(worst < 1e-10);
    }
  }

  TEST_CASE("gate counts per mode") {
    const unsigned n = 9, b = 4;
    const uint64_t total = n * (n - 1) / 2;
    uint64_t at_least_b = 0, above_b = 0;
    for (unsigned s = 0; s < n; ++s)
      for (unsigned k = 2; k <= n - s; ++k) {
        at_least_b += k >= b;
        above_b += k > b;
      }
    const uint64_t at_b = at_least_b - above_b;
    for (NoiseMode m : kAllModes) {
      const auto c = make(m, 0.5, b, 1);
      GateCounts counts;
      apply_qft_noisy(QuantumState(n), c, draw_tape(n, c), &counts, true);
      CHECK(counts.hadamards == n);
      CHECK(counts.rotations() + counts.deleted_rotations == total);
      CHECK(counts.max_norm_drift < 1e-12);
      switch (m) {
        case NoiseMode::exact:
          CHECK(counts.perfect_rotations == total);
          break;
        case NoiseMode::coppersmith:
          CHECK(counts.deleted_rotations == at_least_b);
          break;
        case NoiseMode::full_noise:
          CHECK(counts.perturbed_rotations == at_least_b);
          break;
        case NoiseMode::single_level:
          CHECK(counts.perturbed_rotations == at_b);
          CHECK(counts.perfect_rotations == total - at_b);
          break;
        case NoiseMode::banded_noisy:
          CHECK(counts.perturbed_rotations == at_b);
          CHECK(counts.deleted_rotations == above_b);
          break;
      }
      CHECK(counts.perturbed_rotations == draw_tape(n, c).size());
    }
  }

  TEST_CASE("norm drift at 20 qubits") {
    const auto c = make(NoiseMode::full_noise, 1.0, 2, 4);
    GateCounts counts;
    const auto out = apply_qft_noisy(prepare_periodic(PeriodicFamily(20, 1023, 7)), c, draw_tape(20, c), &counts, true);
    CHECK(counts.max_norm_drift < 1e-9);
    CHECK(std::abs(out.norm_squared() - 1) < 1e-9);
  }

  TEST_CASE("collapse identities") {
    const unsigned n = 9;
    const auto in = prepare_periodic(PeriodicFamily(n, 21, 4));
    const auto exact = measure_distribution(apply_qft_noisy(in, make(NoiseMode::exact, 0, 3, 0), NoiseTape{}));
    const auto fn = make(NoiseMode::full_noise, 0, 3, 8);
    const auto full = measure_distribution(apply_qft_noisy(in, fn, draw_tape(n, fn)));
    const auto bn = make(NoiseMode::banded_noisy, 0, 3, 8);
    const auto banded = measure_distribution(apply_qft_noisy(in, bn, draw_tape(n, bn)));
    const auto copp = measure_distribution(apply_qft_noisy(in, make(NoiseMode::coppersmith, 0, 4, 0), NoiseTape{}));
    for (uint64_t v = 0; v < in.dimension(); ++v) {
      CHECK(std::abs(full[v] - exact[v]) < 1e-12);
      CHECK(std::abs(banded[v] - copp[v]) < 1e-12);
    }
  }

  TEST_CASE("tape mismatch is rejected") {
    const auto c = make(NoiseMode::full_noise, 1, 2, 0);
    CHECK_THROWS_AS(apply_qft_noisy(QuantumState(6), c, draw_tape(7, c)), ConfigError);
  }

  TEST_CASE("measure_distribution and sampling") {
    const auto point = measure_distribution(QuantumState::basis(4, 9));
    for (uint64_t v = 0; v < 16; ++v) CHECK(point[v] == (v == 9 ? 1.0 : 0.0));
    const auto uniform = measure_distribution(prepare_periodic(PeriodicFamily(5, 1, 0)));
    for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 32));
    const auto peaks = measure_distribution(
        apply_qft_noisy(prepare_periodic(PeriodicFamily(8, 8, 3)), make(NoiseMode::exact, 0, 2, 0), NoiseTape{}));
    CHECK(std::abs(std::accumulate(peaks.begin(), peaks.end(), 0.0) - 1) < 1e-12);
    for (uint64_t v = 0; v < 256; ++v) CHECK(std::abs(peaks[v] - (v % 32 == 0 ? 0.125 : 0.0)) < 1e-12);
    const std::vector<double> d{0.25, 0.0, 0.5, 0.25};
    CHECK(sample_outcome(d, 0.1) == 0);
    CHECK(sample_outcome(d, 0.3) == 2);
    CHECK(sample_outcome(d, 0.9) == 3);
  }

  TEST_CASE("analytic and statevector consume the same tape") {
    CounterRng rng(31);
    for (int i = 0; i < 10; ++i) {
      const auto n = static_cast<unsigned>(rng.between(3, 10));
      const uint64_t w = rng.between(1, (uint64_t{1} << n) - 1);
      PeriodicFamily f(n, w, rng.below(w));
      const auto c = make(kAllModes[i % 5], 1.3, static_cast<unsigned>(rng.between(2, n - 1)), rng.next_u64());
      const auto tape = draw_tape(n, c);
      const auto sv = measure_distribution(apply_qft_noisy(prepare_periodic(f), c, tape));
      const auto an = prob_table(f, c, tape);
      for (uint64_t v = 0; v < f.dimension(); ++v) CHECK(std::abs(sv[v] - an[v]) < 1e-9);
    }
  }

  TEST_CASE("pipeline examples") {
    const auto exact = make(NoiseMode::exact, 0, 2, 0);
    const auto s = full_pipeline(15, 7, exact, 1, 200);
    CHECK(s.n == 8);
    CHECK(s.omega == 4);
    for (const auto& o : s.outcomes) {
      CHECK((o.measured_v % 64 == 0));
      CHECK(o.success == (o.measured_v == 64 || o.measured_v == 192));
      if (o.success) {
        CHECK(o.factor_a == 3);
        CHECK(o.factor_b == 5);
      }
    }
    const auto fail = full_pipeline(15, 14, exact, 1, 50);
    CHECK(fail.omega == 2);
    CHECK(fail.successes == 0);
    const auto gcd_case = full_pipeline(15, 6, exact, 1, 3);
    CHECK(gcd_case.successes == 3);
    CHECK(gcd_case.outcomes[0].factor_from_gcd);
    CHECK_THROWS_AS(full_pipeline(2047, 3, exact, 1, 1), CapacityError);
    const auto noisy = full_pipeline(15, 7, make(NoiseMode::full_noise, 1.0, 2, 0), 3, 200);
    CHECK(noisy.success_rate() < s.success_rate());
  }
}
