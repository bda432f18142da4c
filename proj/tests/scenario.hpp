#pragma once

// Config text for the standard test scenarios.

#include <sstream>
#include <string>

#include "viscofrac/config.hpp"

namespace viscofrac::testing {

struct Scenario {
  int section = 2;
  std::string law = "p_growth";
  double p = 2.0;
  double a = 1.0;
  int n = 100;
  double alpha = 1.0;
  double eta = 1e-3;
  double eps_pf = 0.1;
  int cells = 16;
  int dim = 2;
  double dt = 0.01;
  int steps = 50;
  std::string u0 = "[0, 0]";
  std::string u1 = "[0, 0]";
  std::string v0 = "1";
  std::string traction_right = "[\"0.5 * min(t / 0.2, 1)\", \"0\"]";
  std::string body_force;
  bool ramp = true;

  std::string text() const {
    std::ostringstream os;
    os.precision(17);
    os << "[model]\nsection = " << section << "\nlaw = \"" << law << "\"\np = " << p << "\na = " << a
       << "\nn = " << n << "\nalpha = " << alpha << "\neta = " << eta << "\neps_pf = " << eps_pf << "\n"
       << "[grid]\ndim = " << dim << "\ncells = " << cells << "\nlength = 1\n"
       << "dirichlet = [\"left\"]\n"
       << "[time]\ndt = " << dt << "\nsteps = " << steps << "\n"
       << "[initial]\nu0 = " << u0 << "\nu1 = " << u1 << "\nv0 = \"" << v0 << "\"\n"
       << "[boundary]\ntraction_right = " << traction_right << "\nramp = " << (ramp ? "true" : "false") << "\n";
    if (!body_force.empty()) os << "body_force = " << body_force << "\n";
    os << "[output]\ncadence = 10\nvtk = false\n";
    return os.str();
  }

  SimConfig config() const { return parse_config(text()); }
};

}  // namespace viscofrac::testing
