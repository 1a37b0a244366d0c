#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "schurnorm/kernel.hpp"

namespace schurnorm {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct RunConfig {
  // Exactly one of the two is set; Mackey-Glass parameters map to (a, b, tau).
  std::optional<MackeyGlassParams> mackey_glass = MackeyGlassParams{};
  std::optional<KernelParams> kernel;

  double nu0 = 0.01;
  int grid_m = 251;
  int fine_m = 1001;
  double omega_min = -20.0;
  double omega_max = 20.0;
  double omega_step = 0.05;
  double delta_step = 0.005;
  int trunc_n = 50;
  int asymptotic_trunc_n = 1000;
  int max_outer = 5000;
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path output_dir = "out";

  // (a, b, tau, nu0) with omega = 0.
  KernelParams kernel_params() const;
  // 1 / Lambda for Mackey-Glass input, empty for direct kernel parameters.
  std::optional<double> lambda_inverse() const;

  // Number of frequencies in the sweep and the k-th one (ascending).
  int omega_count() const;
  double omega_at(int k) const;
};

// Throws ConfigError on malformed input, unknown keys or violated invariants.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

std::string to_json(const RunConfig& config);

}  // namespace schurnorm
