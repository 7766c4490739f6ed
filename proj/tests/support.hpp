#pragma once

// Random generators and brute-force oracles shared by the test binaries.

#include <algorithm>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "wqt/core_algebra.hpp"
#include "wqt/matter.hpp"

namespace wqt::testing {

inline SpacePtr numbered_space(std::size_t n, const std::string& prefix = "z") {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return make_space(std::move(labels));
}

/// Uniform over all maps Z∪⊥ → Z∪⊥ fixing ⊥.
inline Map random_map(const SpacePtr& space, std::mt19937& rng) {
  std::uniform_int_distribution<StateIndex> pick(0, space->bottom());
  std::vector<StateIndex> image(space->size());
  for (auto& v : image) v = pick(rng);
  return Map(space, std::move(image));
}

inline std::vector<StateIndex> random_subset(const SpacePtr& space, std::mt19937& rng) {
  std::vector<StateIndex> members;
  std::bernoulli_distribution keep(0.5);
  for (StateIndex z = 0; z < space->size(); ++z) {
    if (keep(rng)) members.push_back(z);
  }
  return members;
}

inline Proposition random_filter(const SpacePtr& space, std::mt19937& rng) {
  return Proposition::filter(space, random_subset(space, rng));
}

/// Random idempotent: pick a fixed set F, send every other state into F or to ⊥.
inline Proposition random_proposition(const SpacePtr& space, std::mt19937& rng) {
  const auto fixed = random_subset(space, rng);
  std::vector<StateIndex> image(space->size(), space->bottom());
  for (StateIndex z : fixed) image[z] = z;
  std::uniform_int_distribution<std::size_t> pick(0, fixed.size());
  for (StateIndex z = 0; z < space->size(); ++z) {
    if (std::find(fixed.begin(), fixed.end(), z) != fixed.end()) continue;
    const std::size_t k = pick(rng);
    image[z] = k == fixed.size() ? space->bottom() : fixed[k];
  }
  return Proposition::from_map(Map(space, std::move(image)));
}

/// Random partition into blocks with outcome labels o0, o1, ...
inline std::vector<std::pair<std::string, std::vector<StateIndex>>> random_partition(const SpacePtr& space,
                                                                                     std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, space->size() - 1);
  std::vector<std::vector<StateIndex>> blocks(space->size());
  for (StateIndex z = 0; z < space->size(); ++z) blocks[pick(rng)].push_back(z);
  std::vector<std::pair<std::string, std::vector<StateIndex>>> out;
  for (auto& b : blocks) {
    if (!b.empty()) out.emplace_back("o" + std::to_string(out.size()), std::move(b));
  }
  return out;
}

/// {B ∈ S : AB = BA for all A ∈ M} by a plain double loop over S × M.
inline std::vector<Map> brute_force_commutant(std::span<const Map> subset, const Semigroup& s) {
  std::vector<Map> out;
  for (const Map& b : s.elements) {
    bool ok = true;
    for (const Map& a : subset) {
      for (StateIndex z = 0; z <= b.space()->bottom() && ok; ++z) {
        ok = a(b(z)) == b(a(z));
      }
    }
    if (ok) out.push_back(b);
  }
  return out;
}

using CMatrix = matter::ComplexMatrix<double>;

inline CMatrix random_complex(Eigen::Index n, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937& rng) {
  const CMatrix m = random_complex(n, rng);
  return (m + m.adjoint()) / 2.0;
}

/// ρ = M M* / tr with M of size n × r, so rank(ρ) = r almost surely.
inline CMatrix random_density(Eigen::Index n, Eigen::Index rank, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, rank);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) m(i, j) = {g(rng), g(rng)};
  }
  CMatrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

}  // namespace wqt::testing
