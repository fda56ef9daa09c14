#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmlab/linalg.hpp"

namespace qmlab {

// Parse or validation failure with source position (1-based; 0 when the
// failure is not tied to a location, e.g. a missing file).
struct ConfigError : Error {
  ConfigError(const std::string& msg, int line_ = 0, int col_ = 0)
      : Error(msg), line(line_), col(col_) {}
  int line;
  int col;
};

enum class Scenario { measurement, relstate, oscillator, x3p_eigen, relpos, all };

std::string scenario_name(Scenario s);
Scenario parse_scenario(const std::string& name);

struct MeasurementConfig {
  std::vector<double> theta;   // mixing angles, radians in [0, 2pi)
  double duration = 1.0;       // interaction interval length
  int time_points = 33;        // sampled on [-duration/4, 2 duration]
  double level_up = 0.0;       // free Hamiltonian levels of the two outcomes
  double level_dn = 0.0;
};

struct RelstateConfig {
  int trials = 200;
  int max_dim = 16;
};

struct OscillatorConfig {
  double mass = 1.0;
  double stiffness = 1.0;
  double hbar = 1.0;
  double amplitude_sigmas = 10.0;  // packet amplitude in units of sigma
  int time_points = 129;           // closed-form series over two periods
  int grid_points = 8192;
  int steps_per_period = 16384;    // Crank-Nicolson resolution
};

struct EigenfunctionConfig {
  std::vector<double> lambda;
  int grid_points = 8192;
};

struct RelposConfig {
  std::vector<double> masses;  // ascending
  double center = 0.1;         // momentum profile center
  double width = 0.2;          // momentum profile width
  int grid_points = 2048;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::all;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool plots = true;
  MeasurementConfig measurement;
  RelstateConfig relstate;
  OscillatorConfig oscillator;
  EigenfunctionConfig eigenfunction;
  RelposConfig relpos;
  // Named overrides for the two adjustable tolerances (exact, quadrature).
  std::map<std::string, double> tolerances;
};

// Built-in configuration used by `check` and as the base for parsing.
ScenarioConfig default_config();

// Parse the key-value document. `origin` names the source in errors.
ScenarioConfig parse_config(const std::string& text, const std::string& origin);
ScenarioConfig load_config(const std::string& path);

// Canonical text form; parse(serialize(c)) reproduces c bit-for-bit.
std::string serialize_config(const ScenarioConfig& config);

// Range validation shared by the parser and programmatic construction.
void validate_config(const ScenarioConfig& config);

}  // namespace qmlab
