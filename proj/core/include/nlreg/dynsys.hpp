/*
 Copyright 2026 The nlreg Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NLREG_DYNSYS_HPP
#define NLREG_DYNSYS_HPP

#include "nlreg/smooth_map.hpp"
#include "nlreg/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlreg {

using Rhs = std::function<void(double t, std::span<const double> x,
                               std::span<double> dx)>;

struct Block {
  std::string name;
  int offset = 0;
  int size = 0;
};

/// Named, contiguous sub-vectors of an assembled state.
class StateLayout {
public:
  StateLayout() = default;
  explicit StateLayout(std::vector<std::pair<std::string, int>> blocks);

  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(const std::string& name) const;
  bool has(const std::string& name) const;

private:
  std::vector<Block> blocks_;
  int dim_ = 0;
};

/// An autonomous right-hand side together with the meaning of its state.
struct System {
  Rhs rhs;
  StateLayout layout;

  int dim() const { return layout.dim(); }
  Vec operator()(const Vec& x, double t = 0.0) const;
};

/**
 * Exosystem w' = s(w) on R^r.
 *
 * `w_box` is the region sampled for initial conditions. `admissible` maps a
 * box sample onto the admissible set W (a circle, a limit cycle, ...); the
 * identity when unset.
 */
struct ExosystemSpec {
  int r = 0;
  SmoothMap s;
  Box w_box;
  std::function<Vec(const Vec&)> admissible;

  Vec project(const Vec& w) const { return admissible ? admissible(w) : w; }
  void validate() const;
};

/**
 * Plant in normal form
 *
 *   z'   = f0(z, w) + f1(z, zeta, w) zeta
 *   zeta' = q(z, zeta, w) + u,     e = y = zeta.
 *
 * f0 takes the packed argument (z, w); f1 and q take (z, zeta, w).
 */
struct PlantSpec {
  int n = 0;
  int r = 0;
  SmoothMap f0;
  SmoothMap f1;
  SmoothMap q;

  void validate() const;
  void validate_against(const ExosystemSpec& exo) const;
};

struct ScenarioSets {
  Box z_box;
  Box xi_box;
  Interval e_interval{-1.0, 1.0};
  int runs = 50;
  std::uint64_t seed = 1;

  void validate(int n, int d) const;
};

/// (z, w) -> (f0(z, w), s(w)); layout blocks "z", "w".
System zero_dynamics_rhs(const PlantSpec& plant, const ExosystemSpec& exo);

/// The zero dynamics as a jet-evaluable vector field on R^{n+r}.
SmoothMap zero_dynamics_field(const PlantSpec& plant, const ExosystemSpec& exo);

/// Plant plus exosystem with a constant input u; layout "z", "zeta", "w".
System augmented_openloop_rhs(const PlantSpec& plant, const ExosystemSpec& exo,
                              double u);

} // namespace nlreg

#endif // NLREG_DYNSYS_HPP
