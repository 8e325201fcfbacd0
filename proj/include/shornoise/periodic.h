#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace shornoise {

/// The support {u* + k w : 0 <= k < K} of the pre-QFT state inside [0, 2^n).
class PeriodicFamily {
 public:
  /// Throws DomainError unless 1 <= n <= 62, omega >= 1, u_star < min(omega, 2^n).
  PeriodicFamily(unsigned n, uint64_t omega, uint64_t u_star);

  unsigned n() const { return n_; }
  uint64_t omega() const { return omega_; }
  uint64_t u_star() const { return u_star_; }
  /// K = ceil((2^n - u*) / w).
  uint64_t size() const { return size_; }
  uint64_t dimension() const { return uint64_t{1} << n_; }

  /// u^(k) = u* + k w. Throws IndexError for k >= K.
  uint64_t member(uint64_t k) const;
  /// Bit s of u^(k).
  unsigned member_bit(uint64_t k, unsigned s) const { return static_cast<unsigned>((member(k) >> s) & 1u); }

  bool operator==(const PeriodicFamily&) const = default;

 private:
  unsigned n_;
  uint64_t omega_;
  uint64_t u_star_;
  uint64_t size_;
};

struct ShorInstance {
  uint64_t N;
  uint64_t x;
  unsigned n;  ///< 2^(n-1) < N^2 <= 2^n
  uint64_t omega;
};

/// gcd(x, N) > 1: the base itself already splits N.
struct FactorRevealed {
  uint64_t factor;
};

/// Qubit count with 2^(n-1) < N^2 <= 2^n.
unsigned qubits_for_modulus(uint64_t N);

/// Builds the period-finding instance for (N, x); ω is computed from the
/// factorization of N (small N only, N < 2^32).
std::variant<ShorInstance, FactorRevealed> make_instance(uint64_t N, uint64_t x);

/// round(2^n j / w) with ties rounded up.
uint64_t nearest_multiple(unsigned n, uint64_t omega, uint64_t j);

/// floor(2^n j / w).
uint64_t floor_multiple(unsigned n, uint64_t omega, uint64_t j);

/// Sorted, distinct outcomes v within `radius` (cyclically, mod 2^n) of some
/// round(2^n j / w), 0 <= j < w.
std::vector<uint64_t> useful_set(const PeriodicFamily& family, uint64_t radius);

/// The default radius n^2.
inline uint64_t default_useful_radius(unsigned n) { return static_cast<uint64_t>(n) * n; }

}  // namespace shornoise
