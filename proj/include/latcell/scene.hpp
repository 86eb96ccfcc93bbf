#pragma once

#include "latcell/energy.hpp"
#include "latcell/geometry.hpp"
#include "latcell/lattice.hpp"
#include "latcell/material.hpp"
#include "latcell/types.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace latcell::scene {

enum class ScheduleKind { Reciprocal, Offset };

ScheduleKind schedule_kind_from_string(const std::string& tag);
const char* to_string(ScheduleKind kind);

struct Schedule {
  ScheduleKind kind = ScheduleKind::Reciprocal;
  int k_min = 4;
  int k_max = 40;
  double theta = 0.37;
};

/// A fully resolved experiment description. `spec` keeps the JSON it was
/// parsed from so reports can echo a round-trippable copy.
struct Scene {
  int version = 1;
  lattice::BravaisLattice lattice = lattice::BravaisLattice::cubic();
  geometry::ConvexPolytope domain;
  material::PairPotential potential = material::builtin_potential("quadratic_cutoff");
  material::Deformation deformation = material::AffineDeformation{Mat3::Identity()};
  std::optional<geometry::InterfacePlane> interface;
  Schedule schedule;
  BoundaryRule boundary_rule = BoundaryRule::Closed;
  energy::QuadratureOptions quadrature;
  int threads = 1;
  std::string format = "csv";
  std::vector<std::string> densities;
  nlohmann::json spec;
};

/// Strict parse: unknown fields anywhere are rejected.
Scene parse_scene(const nlohmann::json& j);

/// Parse from raw text; validation messages carry a 1-based line number
/// pointing at the offending key or parse position.
Scene parse_scene_text(const std::string& text);

Scene load_scene(const std::string& path);

/// The JSON whose parse reproduces this scene.
nlohmann::json scene_to_json(const Scene& s);

}  // namespace latcell::scene
