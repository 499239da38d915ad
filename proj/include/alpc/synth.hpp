#pragma once

#include <cstdint>
#include <vector>

#include "alpc/types.hpp"

namespace alpc {

// Recipe for a labeled multi-view Gaussian-mixture dataset: c latent cluster
// means at pairwise distance >= separation * noise_sigma, samples assigned
// round-robin, and each view produced by a seeded orthonormal linear map of
// the latent means plus isotropic noise.
struct SynthSpec {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t l = 0;
  std::size_t latent_dim = 0;
  std::vector<std::size_t> view_dims;  // length l
  double separation = 10.0;            // in units of noise_sigma
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

// Deterministic under spec.seed; labels are balanced within +-1.
MultiViewDataset generate(const SynthSpec& spec);

}  // namespace alpc
