#pragma once

#include <random>
#include <string>

#include "hhs/io.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(HHS_DATA_DIR) + "/" + name; }

inline hhs::HHSStructure bundled(const std::string& name) { return hhs::io::load_structure(data_path(name)); }

/// Same relations, but a random share of projection entries and every rho
/// point redrawn, so the metric constants become nonzero.
inline hhs::HHSStructure perturbed(const hhs::HHSStructure& s, std::uint64_t seed, double share = 0.2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto data = s.data();
  for (auto& d : data.domains) {
    std::uniform_int_distribution<hhs::Vertex> pick(0, static_cast<hhs::Vertex>(d.space.size() - 1));
    for (auto& c : d.projection) {
      if (coin(rng) < share) c = pick(rng);
    }
  }
  for (auto& r : data.rho) {
    std::uniform_int_distribution<hhs::Vertex> pick(0, static_cast<hhs::Vertex>(data.domains[r.in].space.size() - 1));
    r.vertex = pick(rng);
  }
  return hhs::HHSStructure::create(std::move(data));
}

}  // namespace fixtures
