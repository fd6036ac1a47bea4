#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mvmr/trainer.hpp"

namespace mvmr {

/// Deterministic multi-view multi-label generator. Each sample gets latent
/// per-label scores that mix a shared factor (label correlation) with
/// independent ones; labels are their signs. View v embeds the latent scores
/// through a fixed random linear map, blended with isotropic noise according
/// to its informativeness.
struct SyntheticSpec {
  std::uint64_t seed = 0;
  int labeled = 0;
  int unlabeled = 0;
  int test = 0;
  int labels = 2;
  int views = 2;
  std::vector<double> informativeness;  // per view, in [0, 1]
  double label_correlation = 0.5;       // in [0, 1]
  double noise_level = 0.1;             // >= 0

  void validate() const;
};

Dataset generate_synthetic(const SyntheticSpec& spec);

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

}  // namespace mvmr
