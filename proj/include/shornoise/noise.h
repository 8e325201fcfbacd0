#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shornoise {

enum class NoiseMode { exact, coppersmith, full_noise, single_level, banded_noisy };
enum class NoiseDistribution { gaussian_unit, uniform_pm1, trit };

std::string_view to_string(NoiseMode mode);
std::string_view to_string(NoiseDistribution dist);
/// Throws ConfigError on an unknown name.
NoiseMode parse_mode(std::string_view name);
NoiseDistribution parse_distribution(std::string_view name);

inline constexpr NoiseMode kAllModes[] = {NoiseMode::exact, NoiseMode::coppersmith, NoiseMode::full_noise,
                                          NoiseMode::single_level, NoiseMode::banded_noisy};

/// What the circuit does with a controlled rotation of a given level k >= 2.
enum class GateAction { perfect, perturbed, deleted };

struct NoiseConfig {
  double epsilon = 0.0;
  unsigned band = 2;
  NoiseMode mode = NoiseMode::exact;
  NoiseDistribution distribution = NoiseDistribution::gaussian_unit;
  uint64_t seed = 0;

  /// Throws ConfigError if epsilon < 0 (or not finite) or band < 2.
  void validate() const;
  bool operator==(const NoiseConfig&) const = default;
};

bool is_noisy(NoiseMode mode);

/// Gate handling for level k under `config` (k = 1 is the Hadamard and is
/// always perfect).
GateAction gate_action(const NoiseConfig& config, unsigned level);

/// (1 + epsilon r) / 2^k, in turns.
double perturbed_angle(unsigned level, double draw, double epsilon);

/// The i.i.d. draws r^(s)_t, one per perturbed gate. Sweep s (target qubit
/// n-1-s in circuit order) uses r^(s)_t at gate level b + t.
class NoiseTape {
 public:
  NoiseTape() = default;

  unsigned n() const { return n_; }
  unsigned band() const { return band_; }
  NoiseMode mode() const { return mode_; }
  NoiseDistribution distribution() const { return distribution_; }
  uint64_t seed() const { return seed_; }

  /// Number of sweeps that carry draws (n - b + 1 for noisy modes, 0 otherwise).
  unsigned sweeps() const { return static_cast<unsigned>(offsets_.empty() ? 0 : offsets_.size() - 1); }
  /// Draws in sweep s.
  unsigned sweep_length(unsigned s) const { return static_cast<unsigned>(offsets_[s + 1] - offsets_[s]); }
  bool contains(unsigned s, unsigned t) const { return s < sweeps() && t < sweep_length(s); }
  /// Throws IndexError when (s, t) is not a perturbed gate.
  double at(unsigned s, unsigned t) const;
  size_t size() const { return draws_.size(); }
  /// Draws flattened in (s, t) lexicographic order.
  const std::vector<double>& flat() const { return draws_; }

  /// Throws ConfigError unless the tape was drawn for this (n, band, mode).
  void check_matches(unsigned n, const NoiseConfig& config) const;

  bool operator==(const NoiseTape&) const = default;

  /// Rebuilds a tape from explicit draws; the shape is implied by (n, band, mode).
  static NoiseTape from_draws(unsigned n, unsigned band, NoiseMode mode, NoiseDistribution dist, uint64_t seed,
                              std::vector<double> draws);

 private:
  friend NoiseTape draw_tape(unsigned n, const NoiseConfig& config);
  static std::vector<size_t> offsets_for(unsigned n, unsigned band, NoiseMode mode);

  unsigned n_ = 0;
  unsigned band_ = 2;
  NoiseMode mode_ = NoiseMode::exact;
  NoiseDistribution distribution_ = NoiseDistribution::gaussian_unit;
  uint64_t seed_ = 0;
  std::vector<size_t> offsets_;
  std::vector<double> draws_;
};

/// Single draw r^(s)_t of the counter stream keyed by seed.
double tape_draw(uint64_t seed, NoiseDistribution dist, unsigned s, unsigned t);

/// Fully populated tape. Exact and coppersmith modes give an empty tape.
/// Throws ConfigError for a noisy mode with n <= band.
NoiseTape draw_tape(unsigned n, const NoiseConfig& config);

/// JSON: {"n","band","mode","distribution","seed","draws":[{"s","t","r"}...]}
/// in (s, t) order; doubles are written with round-trip precision.
std::string tape_to_json(const NoiseTape& tape);
NoiseTape tape_from_json(std::string_view text);

/// Little-endian binary: "SNTP" magic, u32 version, u32 n, u32 band, u32 mode,
/// u32 distribution, u64 seed, u64 count, then count x (u32 s, u32 t, f64 r).
std::string tape_to_binary(const NoiseTape& tape);
NoiseTape tape_from_binary(std::string_view bytes);

}  // namespace shornoise
