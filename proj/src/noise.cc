#include "shornoise/noise.h"

#include <cmath>
#include <bit>
#include <cstring>
#include <nlohmann/json.hpp>

#include "shornoise/counter_rng.h"
#include "shornoise/errors.h"

namespace shornoise {

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::exact: return "exact";
    case NoiseMode::coppersmith: return "coppersmith";
    case NoiseMode::full_noise: return "full_noise";
    case NoiseMode::single_level: return "single_level";
    case NoiseMode::banded_noisy: return "banded_noisy";
  }
  return "?";
}

std::string_view to_string(NoiseDistribution dist) {
  switch (dist) {
    case NoiseDistribution::gaussian_unit: return "gaussian_unit";
    case NoiseDistribution::uniform_pm1: return "uniform_pm1";
    case NoiseDistribution::trit: return "trit";
  }
  return "?";
}

NoiseMode parse_mode(std::string_view name) {
  for (NoiseMode m : kAllModes)
    if (to_string(m) == name) return m;
  throw ConfigError("unknown noise mode '" + std::string(name) + "'");
}

NoiseDistribution parse_distribution(std::string_view name) {
  for (auto d : {NoiseDistribution::gaussian_unit, NoiseDistribution::uniform_pm1, NoiseDistribution::trit})
    if (to_string(d) == name) return d;
  throw ConfigError("unknown noise distribution '" + std::string(name) + "'");
}

void NoiseConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be a finite value >= 0");
  if (band < 2) throw ConfigError("band must be >= 2");
}

bool is_noisy(NoiseMode mode) {
  return mode == NoiseMode::full_noise || mode == NoiseMode::single_level || mode == NoiseMode::banded_noisy;
}

GateAction gate_action(const NoiseConfig& config, unsigned level) {
  if (level < 2) return GateAction::perfect;
  const unsigned b = config.band;
  switch (config.mode) {
    case NoiseMode::exact: return GateAction::perfect;
    case NoiseMode::coppersmith: return level >= b ? GateAction::deleted : GateAction::perfect;
    case NoiseMode::full_noise: return level >= b ? GateAction::perturbed : GateAction::perfect;
    case NoiseMode::single_level: return level == b ? GateAction::perturbed : GateAction::perfect;
    case NoiseMode::banded_noisy:
      if (level < b) return GateAction::perfect;
      return level == b ? GateAction::perturbed : GateAction::deleted;
  }
  return GateAction::perfect;
}

double perturbed_angle(unsigned level, double draw, double epsilon) {
  return (1.0 + epsilon * draw) / std::ldexp(1.0, static_cast<int>(level));
}

double tape_draw(uint64_t seed, NoiseDistribution dist, unsigned s, unsigned t) {
  const uint64_t bits = counter_hash(seed, s, t);
  switch (dist) {
    case NoiseDistribution::gaussian_unit: return inverse_normal_cdf(to_unit_open(bits));
    case NoiseDistribution::uniform_pm1: return 2.0 * to_unit_open(bits) - 1.0;
    case NoiseDistribution::trit: {
      auto idx = static_cast<uint64_t>((static_cast<unsigned __int128>(bits) * 3) >> 64);
      return static_cast<double>(idx) - 1.0;
    }
  }
  return 0.0;
}

std::vector<size_t> NoiseTape::offsets_for(unsigned n, unsigned band, NoiseMode mode) {
  std::vector<size_t> offsets;
  if (!is_noisy(mode)) return offsets;
  if (n <= band)
    throw ConfigError("noisy mode " + std::string(to_string(mode)) + " needs n > band (n=" + std::to_string(n) +
                      ", band=" + std::to_string(band) + ")");
  const unsigned sweeps = n - band + 1;
  offsets.push_back(0);
  for (unsigned s = 0; s < sweeps; ++s) {
    size_t len = mode == NoiseMode::full_noise ? n - band - s + 1 : 1;
    offsets.push_back(offsets.back() + len);
  }
  return offsets;
}

double NoiseTape::at(unsigned s, unsigned t) const {
  if (!contains(s, t))
    throw IndexError("NoiseTape: no draw at (s=" + std::to_string(s) + ", t=" + std::to_string(t) + ")");
  return draws_[offsets_[s] + t];
}

void NoiseTape::check_matches(unsigned n, const NoiseConfig& config) const {
  if (!is_noisy(config.mode)) return;
  if (n_ != n || band_ != config.band || mode_ != config.mode)
    throw ConfigError("noise tape (n=" + std::to_string(n_) + ", band=" + std::to_string(band_) + ", mode=" +
                      std::string(to_string(mode_)) + ") does not match the requested circuit (n=" +
                      std::to_string(n) + ", band=" + std::to_string(config.band) + ", mode=" +
                      std::string(to_string(config.mode)) + ")");
}

NoiseTape NoiseTape::from_draws(unsigned n, unsigned band, NoiseMode mode, NoiseDistribution dist, uint64_t seed,
                                std::vector<double> draws) {
  NoiseTape tape;
  tape.n_ = n;
  tape.band_ = band;
  tape.mode_ = mode;
  tape.distribution_ = dist;
  tape.seed_ = seed;
  tape.offsets_ = offsets_for(n, band, mode);
  size_t expected = tape.offsets_.empty() ? 0 : tape.offsets_.back();
  if (draws.size() != expected)
    throw ConfigError("noise tape: expected " + std::to_string(expected) + " draws, got " +
                      std::to_string(draws.size()));
  tape.draws_ = std::move(draws);
  return tape;
}

NoiseTape draw_tape(unsigned n, const NoiseConfig& config) {
  config.validate();
  NoiseTape tape;
  tape.n_ = n;
  tape.band_ = config.band;
  tape.mode_ = config.mode;
  tape.distribution_ = config.distribution;
  tape.seed_ = config.seed;
  tape.offsets_ = NoiseTape::offsets_for(n, config.band, config.mode);
  if (tape.offsets_.empty()) return tape;
  tape.draws_.resize(tape.offsets_.back());
  for (unsigned s = 0; s < tape.sweeps(); ++s)
    for (unsigned t = 0; t < tape.sweep_length(s); ++t)
      tape.draws_[tape.offsets_[s] + t] = tape_draw(config.seed, config.distribution, s, t);
  return tape;
}

std::string tape_to_json(const NoiseTape& tape) {
  nlohmann::ordered_json j;
  j["n"] = tape.n();
  j["band"] = tape.band();
  j["mode"] = to_string(tape.mode());
  j["distribution"] = to_string(tape.distribution());
  j["seed"] = tape.seed();
  auto draws = nlohmann::ordered_json::array();
  for (unsigned s = 0; s < tape.sweeps(); ++s)
    for (unsigned t = 0; t < tape.sweep_length(s); ++t) draws.push_back({{"s", s}, {"t", t}, {"r", tape.at(s, t)}});
  j["draws"] = std::move(draws);
  return j.dump();
}

NoiseTape tape_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("noise tape JSON: ") + e.what());
  }
  try {
    unsigned n = j.at("n").get<unsigned>();
    unsigned band = j.at("band").get<unsigned>();
    NoiseMode mode = parse_mode(j.at("mode").get<std::string>());
    NoiseDistribution dist = parse_distribution(j.at("distribution").get<std::string>());
    uint64_t seed = j.at("seed").get<uint64_t>();
    auto offsets_probe = NoiseTape::from_draws(n, band, mode, dist, seed,
                                               std::vector<double>(j.at("draws").size(), 0.0));
    std::vector<double> draws;
    draws.reserve(j.at("draws").size());
    size_t idx = 0;
    for (unsigned s = 0; s < offsets_probe.sweeps(); ++s) {
      for (unsigned t = 0; t < offsets_probe.sweep_length(s); ++t, ++idx) {
        const auto& d = j.at("draws").at(idx);
        if (d.at("s").get<unsigned>() != s || d.at("t").get<unsigned>() != t)
          throw ConfigError("noise tape JSON: draws out of (s, t) order at index " + std::to_string(idx));
        draws.push_back(d.at("r").get<double>());
      }
    }
    return NoiseTape::from_draws(n, band, mode, dist, seed, std::move(draws));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("noise tape JSON: ") + e.what());
  }
}

namespace {

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(std::string_view bytes, size_t& pos) {
  if (pos + sizeof(T) > bytes.size()) throw ConfigError("noise tape binary: truncated");
  T value;
  std::memcpy(&value, bytes.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

static_assert(std::endian::native == std::endian::little, "binary tape format assumes a little-endian host");

}  // namespace

std::string tape_to_binary(const NoiseTape& tape) {
  std::string out = "SNTP";
  put<uint32_t>(out, 1);
  put<uint32_t>(out, tape.n());
  put<uint32_t>(out, tape.band());
  put<uint32_t>(out, static_cast<uint32_t>(tape.mode()));
  put<uint32_t>(out, static_cast<uint32_t>(tape.distribution()));
  put<uint64_t>(out, tape.seed());
  put<uint64_t>(out, tape.size());
  for (unsigned s = 0; s < tape.sweeps(); ++s) {
    for (unsigned t = 0; t < tape.sweep_length(s); ++t) {
      put<uint32_t>(out, s);
      put<uint32_t>(out, t);
      put<double>(out, tape.at(s, t));
    }
  }
  return out;
}

NoiseTape tape_from_binary(std::string_view bytes) {
  if (bytes.substr(0, 4) != "SNTP") throw ConfigError("noise tape binary: bad magic");
  size_t pos = 4;
  if (take<uint32_t>(bytes, pos) != 1) throw ConfigError("noise tape binary: unsupported version");
  unsigned n = take<uint32_t>(bytes, pos);
  unsigned band = take<uint32_t>(bytes, pos);
  auto mode_raw = take<uint32_t>(bytes, pos);
  auto dist_raw = take<uint32_t>(bytes, pos);
  if (mode_raw > 4 || dist_raw > 2) throw ConfigError("noise tape binary: bad mode/distribution code");
  uint64_t seed = take<uint64_t>(bytes, pos);
  uint64_t count = take<uint64_t>(bytes, pos);
  auto mode = static_cast<NoiseMode>(mode_raw);
  auto shape = NoiseTape::from_draws(n, band, mode, static_cast<NoiseDistribution>(dist_raw), seed,
                                     std::vector<double>(count, 0.0));
  std::vector<double> draws;
  draws.reserve(count);
  for (unsigned s = 0; s < shape.sweeps(); ++s) {
    for (unsigned t = 0; t < shape.sweep_length(s); ++t) {
      if (take<uint32_t>(bytes, pos) != s || take<uint32_t>(bytes, pos) != t)
        throw ConfigError("noise tape binary: draws out of (s, t) order");
      draws.push_back(take<double>(bytes, pos));
    }
  }
  if (pos != bytes.size()) throw ConfigError("noise tape binary: trailing bytes");
  return NoiseTape::from_draws(n, band, mode, static_cast<NoiseDistribution>(dist_raw), seed, std::move(draws));
}

}  // namespace shornoise
