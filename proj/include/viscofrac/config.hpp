#pragma once

// Simulation configuration read from a TOML-style file with the sections
// [model] [grid] [time] [initial] [boundary] [solver] [output].

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viscofrac/constitutive.hpp"
#include "viscofrac/expression.hpp"
#include "viscofrac/grid.hpp"
#include "viscofrac/momentum.hpp"

namespace viscofrac {

struct ConfigValue {
  enum class Type { Number, Bool, String, Array } type = Type::Number;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<ConfigValue> items;

  static ConfigValue parse(const std::string& literal);
  std::string to_string() const;
};

/// section -> key -> value. Keys before any section header land in "".
using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

/// Parses the TOML subset: [section] headers, key = value lines, # comments,
/// numbers, booleans, "strings" and [arrays]. Throws std::invalid_argument
/// with the line number on errors.
ConfigTable parse_config_table(const std::string& text);

/// Sets `key` (either "section.key" or a bare key found in exactly one
/// section) to a literal value.
void apply_override(ConfigTable& table, const std::string& key, const std::string& literal);

struct SimConfig {
  Section section = Section::Two;
  ConstitutiveLaw law;
  double alpha = 1.0;
  double eta = 1e-3;
  double eps_pf = 0.1;
  int k = 0;  // G_k order, 0 = default

  int dim = 2;
  std::array<int, 2> cells{16, 16};
  std::array<double, 2> length{1.0, 1.0};
  FaceMask mask = FaceMask::from_faces({Face::Left});

  double dt = 0.01;
  double t_final = 1.0;

  std::array<Expression, 2> u0;
  std::array<Expression, 2> u1;
  Expression v0 = Expression::constant(1.0);

  std::map<Face, std::array<Expression, 2>> traction;  // Neumann faces without an entry are traction free
  std::array<Expression, 2> body_force;
  bool ramp = true;  // section = 3: blend in the compatible traction

  NewtonConfig newton;

  std::string output_dir = "output";
  int cadence = 10;
  bool write_vtk = true;

  int steps() const;
  Grid make_grid() const;
  int hk_order() const;
};

SimConfig config_from_table(const ConfigTable& table);
SimConfig parse_config(const std::string& text);
ConfigTable load_config_table(const std::string& path);

}  // namespace viscofrac
