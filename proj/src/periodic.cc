#include "shornoise/periodic.h"

#include <algorithm>
#include <string>

#include "shornoise/errors.h"
#include "shornoise/numtheory.h"

namespace shornoise {

using u128 = unsigned __int128;

PeriodicFamily::PeriodicFamily(unsigned n, uint64_t omega, uint64_t u_star)
    : n_(n), omega_(omega), u_star_(u_star) {
  if (n < 1 || n > 62) throw DomainError("PeriodicFamily: n must be in [1, 62]");
  if (omega < 1) throw DomainError("PeriodicFamily: omega must be >= 1");
  if (u_star >= omega) throw DomainError("PeriodicFamily: need 0 <= u* < omega");
  const uint64_t dim = uint64_t{1} << n;
  if (u_star >= dim) throw DomainError("PeriodicFamily: u* must be < 2^n");
  size_ = (dim - u_star + omega - 1) / omega;
}

uint64_t PeriodicFamily::member(uint64_t k) const {
  if (k >= size_) throw IndexError("PeriodicFamily::member: k=" + std::to_string(k) + " >= K=" + std::to_string(size_));
  return u_star_ + k * omega_;
}

unsigned qubits_for_modulus(uint64_t N) {
  if (N < 2 || N >= (uint64_t{1} << 31)) throw DomainError("qubits_for_modulus: N must be in [2, 2^31)");
  const uint64_t sq = N * N;
  unsigned n = 0;
  while ((uint64_t{1} << n) < sq) ++n;
  return n;
}

std::variant<ShorInstance, FactorRevealed> make_instance(uint64_t N, uint64_t x) {
  if (N < 3 || N % 2 == 0 || is_prime(N)) throw DomainError("make_instance: N must be an odd composite >= 9");
  if (x == 0 || x >= N) throw DomainError("make_instance: need 1 <= x < N");
  uint64_t g = gcd_u64(x, N);
  if (g != 1) return FactorRevealed{g};
  ShorInstance inst{N, x, qubits_for_modulus(N), 0};
  Factorization phi;
  phi.value = euler_phi(N);
  phi.factors = factorize(phi.value).factors;
  inst.omega = multiplicative_order(x, N, phi);
  return inst;
}

uint64_t nearest_multiple(unsigned n, uint64_t omega, uint64_t j) {
  u128 num = (static_cast<u128>(j) << (n + 1)) + omega;
  return static_cast<uint64_t>(num / (2 * static_cast<u128>(omega)));
}

uint64_t floor_multiple(unsigned n, uint64_t omega, uint64_t j) {
  return static_cast<uint64_t>((static_cast<u128>(j) << n) / omega);
}

std::vector<uint64_t> useful_set(const PeriodicFamily& family, uint64_t radius) {
  const uint64_t dim = family.dimension();
  const uint64_t mask = dim - 1;
  std::vector<uint64_t> out;
  if (radius >= dim / 2) {
    out.resize(dim);
    for (uint64_t v = 0; v < dim; ++v) out[v] = v;
    return out;
  }
  out.reserve(family.omega() * (2 * radius + 1));
  for (uint64_t j = 0; j < family.omega(); ++j) {
    uint64_t center = nearest_multiple(family.n(), family.omega(), j);
    for (uint64_t d = 0; d <= 2 * radius; ++d) out.push_back((center + dim - radius + d) & mask);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace shornoise
