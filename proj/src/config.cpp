#include "qmlab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace qmlab {

namespace {

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Cursor {
  std::string origin;
  int line = 0;
  int col = 0;
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << origin << ":" << line << ":" << col << ": " << msg;
    throw ConfigError(os.str(), line, col);
  }
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const Cursor& at) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    at.fail("expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    at.fail("expected a number, got '" + text + "'");
  return v;
}

std::int64_t parse_integer(const std::string& text, const Cursor& at) {
  double v = parse_number(text, at);
  if (v != std::floor(v) || std::abs(v) > 1e15)
    at.fail("expected an integer, got '" + text + "'");
  return static_cast<std::int64_t>(v);
}

std::uint64_t parse_u64(const std::string& text, const Cursor& at) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    at.fail("expected a non-negative integer, got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    at.fail("integer out of range: '" + text + "'");
  }
}

std::string parse_string(const std::string& text, const Cursor& at) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"')
    at.fail("expected a double-quoted string, got '" + text + "'");
  std::string body = text.substr(1, text.size() - 2);
  if (body.find('"') != std::string::npos)
    at.fail("embedded quotes are not supported");
  return body;
}

bool parse_bool(const std::string& text, const Cursor& at) {
  if (text == "true") return true;
  if (text == "false") return false;
  at.fail("expected true or false, got '" + text + "'");
}

std::vector<double> parse_array(const std::string& text, const Cursor& at) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    at.fail("expected [v, v, ...], got '" + text + "'");
  std::string body = trim(text.substr(1, text.size() - 2));
  std::vector<double> out;
  if (body.empty()) return out;
  size_t start = 0;
  while (true) {
    size_t comma = body.find(',', start);
    std::string item = trim(comma == std::string::npos
                                ? body.substr(start)
                                : body.substr(start, comma - start));
    if (item.empty()) at.fail("empty array element");
    out.push_back(parse_number(item, at));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string serialize_array(const std::vector<double>& vs) {
  std::string out = "[";
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += format_g(vs[i]);
  }
  return out + "]";
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::measurement: return "measurement";
    case Scenario::relstate: return "relstate";
    case Scenario::oscillator: return "oscillator";
    case Scenario::x3p_eigen: return "x3p-eigen";
    case Scenario::relpos: return "relpos";
    case Scenario::all: return "all";
  }
  throw Error("unreachable scenario");
}

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::measurement, Scenario::relstate,
                     Scenario::oscillator, Scenario::x3p_eigen,
                     Scenario::relpos, Scenario::all})
    if (scenario_name(s) == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  const double pi = std::acos(-1.0);
  c.measurement.theta = {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};
  c.eigenfunction.lambda = {0.5, 1.0, 2.0};
  c.relpos.masses = {1.0, 2.0, 4.0, 8.0, 16.0};
  c.tolerances = {{"exact", 1e-10}, {"quadrature", 1e-6}};
  return c;
}

void validate_config(const ScenarioConfig& c) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  const double two_pi = 2 * std::acos(-1.0);
  check(!c.measurement.theta.empty(), "measurement.theta must be non-empty");
  for (double th : c.measurement.theta)
    check(th >= 0 && th < two_pi,
          "measurement.theta entries must lie in [0, 2pi), got " + format_g(th));
  check(c.measurement.duration > 0, "measurement.duration must be positive");
  check(c.measurement.time_points >= 2 && c.measurement.time_points <= 100000,
        "measurement.time_points must be in [2, 100000]");
  check(std::isfinite(c.measurement.level_up) && std::isfinite(c.measurement.level_dn),
        "measurement levels must be finite");

  check(c.relstate.trials >= 1 && c.relstate.trials <= 100000,
        "relstate.trials must be in [1, 100000]");
  check(c.relstate.max_dim >= 2 && c.relstate.max_dim <= 64,
        "relstate.max_dim must be in [2, 64]");

  check(c.oscillator.mass > 0, "oscillator.mass must be positive");
  check(c.oscillator.stiffness > 0, "oscillator.stiffness must be positive");
  check(c.oscillator.hbar > 0, "oscillator.hbar must be positive");
  check(c.oscillator.amplitude_sigmas > 0 && c.oscillator.amplitude_sigmas <= 1000,
        "oscillator.amplitude_sigmas must be in (0, 1000]");
  check(c.oscillator.time_points >= 2 && c.oscillator.time_points <= 100000,
        "oscillator.time_points must be in [2, 100000]");
  check(c.oscillator.grid_points >= 64 && c.oscillator.grid_points <= (1 << 20),
        "oscillator.grid_points must be in [64, 2^20]");
  check(c.oscillator.steps_per_period >= 256 &&
            c.oscillator.steps_per_period <= (1 << 20),
        "oscillator.steps_per_period must be in [256, 2^20]");

  check(!c.eigenfunction.lambda.empty(), "x3p-eigen.lambda must be non-empty");
  for (double l : c.eigenfunction.lambda)
    check(l > 0, "x3p-eigen.lambda entries must be positive");
  check(c.eigenfunction.grid_points >= 64 &&
            c.eigenfunction.grid_points <= (1 << 20),
        "x3p-eigen.grid_points must be in [64, 2^20]");

  check(c.relpos.masses.size() >= 2, "relpos.masses needs at least two entries");
  for (size_t i = 0; i < c.relpos.masses.size(); ++i) {
    check(c.relpos.masses[i] > 0, "relpos.masses entries must be positive");
    if (i) check(c.relpos.masses[i] > c.relpos.masses[i - 1],
                 "relpos.masses must be strictly ascending");
  }
  check(c.relpos.width > 0, "relpos.width must be positive");
  check(std::isfinite(c.relpos.center), "relpos.center must be finite");
  check(c.relpos.grid_points >= 64 && c.relpos.grid_points <= (1 << 20),
        "relpos.grid_points must be in [64, 2^20]");

  check(!c.out_dir.empty(), "out must be non-empty");
  for (const auto& [name, value] : c.tolerances) {
    check(name == "exact" || name == "quadrature",
          "unknown tolerance '" + name + "'");
    check(value > 0 && value < 1, "tolerance " + name + " must be in (0, 1)");
  }
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  ScenarioConfig c = default_config();
  Cursor at{origin, 0, 1};
  std::string section;  // empty = top level

  // (section, key) -> value handler.  The cursor points at the value.
  using Handler = std::function<void(const std::string&, const Cursor&)>;
  std::map<std::pair<std::string, std::string>, Handler> handlers;
  auto num = [&](const char* sec, const char* key, double* dst) {
    handlers[{sec, key}] = [dst](const std::string& v, const Cursor& a) {
      *dst = parse_number(v, a);
    };
  };
  auto integer = [&](const char* sec, const char* key, int* dst) {
    handlers[{sec, key}] = [dst](const std::string& v, const Cursor& a) {
      *dst = static_cast<int>(parse_integer(v, a));
    };
  };
  auto array = [&](const char* sec, const char* key, std::vector<double>* dst) {
    handlers[{sec, key}] = [dst](const std::string& v, const Cursor& a) {
      *dst = parse_array(v, a);
    };
  };

  handlers[{"", "scenario"}] = [&](const std::string& v, const Cursor& a) {
    try {
      c.scenario = parse_scenario(parse_string(v, a));
    } catch (const ConfigError& e) {
      a.fail(e.what());
    }
  };
  handlers[{"", "seed"}] = [&](const std::string& v, const Cursor& a) {
    c.seed = parse_u64(v, a);
  };
  handlers[{"", "out"}] = [&](const std::string& v, const Cursor& a) {
    c.out_dir = parse_string(v, a);
  };
  handlers[{"", "plots"}] = [&](const std::string& v, const Cursor& a) {
    c.plots = parse_bool(v, a);
  };

  array("measurement", "theta", &c.measurement.theta);
  num("measurement", "duration", &c.measurement.duration);
  integer("measurement", "time_points", &c.measurement.time_points);
  num("measurement", "level_up", &c.measurement.level_up);
  num("measurement", "level_dn", &c.measurement.level_dn);

  integer("relstate", "trials", &c.relstate.trials);
  integer("relstate", "max_dim", &c.relstate.max_dim);

  num("oscillator", "mass", &c.oscillator.mass);
  num("oscillator", "stiffness", &c.oscillator.stiffness);
  num("oscillator", "hbar", &c.oscillator.hbar);
  num("oscillator", "amplitude_sigmas", &c.oscillator.amplitude_sigmas);
  integer("oscillator", "time_points", &c.oscillator.time_points);
  integer("oscillator", "grid_points", &c.oscillator.grid_points);
  integer("oscillator", "steps_per_period", &c.oscillator.steps_per_period);

  array("x3p-eigen", "lambda", &c.eigenfunction.lambda);
  integer("x3p-eigen", "grid_points", &c.eigenfunction.grid_points);

  array("relpos", "masses", &c.relpos.masses);
  num("relpos", "center", &c.relpos.center);
  num("relpos", "width", &c.relpos.width);
  integer("relpos", "grid_points", &c.relpos.grid_points);

  handlers[{"tolerances", "exact"}] = [&](const std::string& v, const Cursor& a) {
    c.tolerances["exact"] = parse_number(v, a);
  };
  handlers[{"tolerances", "quadrature"}] = [&](const std::string& v,
                                               const Cursor& a) {
    c.tolerances["quadrature"] = parse_number(v, a);
  };

  static const std::vector<std::string> known_sections = {
      "measurement", "relstate", "oscillator", "x3p-eigen", "relpos",
      "tolerances"};

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++at.line;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    size_t indent = line.find_first_not_of(" \t");
    at.col = static_cast<int>(indent) + 1;

    if (body.front() == '[') {
      if (body.back() != ']') at.fail("unterminated section header");
      std::string name = trim(body.substr(1, body.size() - 2));
      bool known = false;
      for (const auto& s : known_sections) known = known || s == name;
      if (!known) at.fail("unknown section [" + name + "]");
      section = name;
      continue;
    }

    size_t eq = body.find('=');
    if (eq == std::string::npos) at.fail("expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty()) at.fail("missing key before '='");
    Cursor value_at = at;
    value_at.col = at.col + static_cast<int>(line.find('=', indent) + 1 - indent);
    if (value.empty()) value_at.fail("missing value for '" + key + "'");

    auto it = handlers.find({section, key});
    if (it == handlers.end()) {
      std::string where = section.empty() ? "at top level" : "in [" + section + "]";
      at.fail("unknown key '" + key + "' " + where);
    }
    it->second(value, value_at);
  }

  try {
    validate_config(c);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "scenario = \"" << scenario_name(c.scenario) << "\"\n";
  os << "seed = " << c.seed << "\n";
  os << "out = \"" << c.out_dir << "\"\n";
  os << "plots = " << (c.plots ? "true" : "false") << "\n";
  os << "\n[measurement]\n";
  os << "theta = " << serialize_array(c.measurement.theta) << "\n";
  os << "duration = " << format_g(c.measurement.duration) << "\n";
  os << "time_points = " << c.measurement.time_points << "\n";
  os << "level_up = " << format_g(c.measurement.level_up) << "\n";
  os << "level_dn = " << format_g(c.measurement.level_dn) << "\n";
  os << "\n[relstate]\n";
  os << "trials = " << c.relstate.trials << "\n";
  os << "max_dim = " << c.relstate.max_dim << "\n";
  os << "\n[oscillator]\n";
  os << "mass = " << format_g(c.oscillator.mass) << "\n";
  os << "stiffness = " << format_g(c.oscillator.stiffness) << "\n";
  os << "hbar = " << format_g(c.oscillator.hbar) << "\n";
  os << "amplitude_sigmas = " << format_g(c.oscillator.amplitude_sigmas) << "\n";
  os << "time_points = " << c.oscillator.time_points << "\n";
  os << "grid_points = " << c.oscillator.grid_points << "\n";
  os << "steps_per_period = " << c.oscillator.steps_per_period << "\n";
  os << "\n[x3p-eigen]\n";
  os << "lambda = " << serialize_array(c.eigenfunction.lambda) << "\n";
  os << "grid_points = " << c.eigenfunction.grid_points << "\n";
  os << "\n[relpos]\n";
  os << "masses = " << serialize_array(c.relpos.masses) << "\n";
  os << "center = " << format_g(c.relpos.center) << "\n";
  os << "width = " << format_g(c.relpos.width) << "\n";
  os << "grid_points = " << c.relpos.grid_points << "\n";
  os << "\n[tolerances]\n";
  for (const auto& [name, value] : c.tolerances)
    os << name << " = " << format_g(value) << "\n";
  return os.str();
}

}  // namespace qmlab
