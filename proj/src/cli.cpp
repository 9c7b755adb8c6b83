#include "casimir/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace casimir::cli {

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    Section* current = nullptr;
    std::string current_name;
    for (int line = 1; std::getline(in, raw); ++line) {
      const std::string s = trim(raw.substr(0, raw.find('#')));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated section header");
        current_name = trim(s.substr(1, s.size() - 2));
        if (current_name.empty()) fail(line, "empty section name");
        if (sections_.count(current_name)) fail(line, "duplicate section [" + current_name + "]");
        current = &sections_[current_name];
        current->line = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      if (!current) fail(line, "key outside a section");
      const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
      if (key.empty() || value.empty()) fail(line, "expected 'key = value'");
      if (current->entries.count(key)) fail(line, "duplicate key [" + current_name + "] " + key);
      current->entries[key] = Entry{value, line, false};
    }
  }

  [[noreturn]] static void fail(int line, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ": " + what);
  }

  bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

  std::vector<std::string> sections_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [name, s] : sections_) {
      if (name.rfind(prefix, 0) == 0) out.push_back(name);
    }
    return out;
  }

  int section_line(const std::string& name) const { return sections_.at(name).line; }

  const Entry* find(const std::string& section, const std::string& key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.entries.find(key);
    if (e == s->second.entries.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  double number(const std::string& section, const std::string& key, double fallback) {
    const Entry* e = find(section, key);
    return e ? parse_number(*e, section, key) : fallback;
  }

  double required_number(const std::string& section, const std::string& key) {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError("[" + section + "] " + key + ": required");
    return parse_number(*e, section, key);
  }

  int integer(const std::string& section, const std::string& key, int fallback) {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    const double v = parse_number(*e, section, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(e->line, "[" + section + "] " + key + ": expected an integer");
    return static_cast<int>(v);
  }

  std::string word(const std::string& section, const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& allowed) {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    for (const auto& a : allowed) {
      if (e->value == a) return a;
    }
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    fail(e->line, "[" + section + "] " + key + ": expected " + list + ", got '" + e->value + "'");
  }

  Eigen::Vector3d vector(const std::string& section, const std::string& key, const Eigen::Vector3d& fallback) {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    std::istringstream in(e->value);
    Eigen::Vector3d v;
    std::string extra;
    for (int i = 0; i < 3; ++i) {
      std::string token;
      if (!(in >> token)) fail(e->line, "[" + section + "] " + key + ": expected three numbers");
      v(i) = parse_number(Entry{token, e->line, true}, section, key);
    }
    if (in >> extra) fail(e->line, "[" + section + "] " + key + ": expected three numbers");
    return v;
  }

  void check_all_used() const {
    for (const auto& [name, s] : sections_) {
      for (const auto& [key, e] : s.entries) {
        if (!e.used) fail(e.line, "unknown key [" + name + "] " + key);
      }
    }
  }

 private:
  static double parse_number(const Entry& e, const std::string& section, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v)) {
      fail(e.line, "[" + section + "] " + key + ": expected a number, got '" + e.value + "'");
    }
    return v;
  }

  std::map<std::string, Section> sections_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

const force::Sphere& sphere(const RunConfig& c, int id) {
  for (const auto& s : c.ensemble.spheres) {
    if (s.id == id) return s;
  }
  throw ConfigError("[sphere." + std::to_string(id) + "]: required by this command");
}

void collect(CommandOutput& out, const std::string& where, const force::ForceResult& r) {
  for (const auto& w : r.warnings) out.diagnostics.push_back(where + ": " + w);
  if (!r.converged()) {
    out.converged = false;
    out.diagnostics.push_back(where + ": truncation change " + format_number(r.convergence_estimate) +
                              " exceeds 5%");
  }
}

}  // namespace

std::vector<double> ScanRange::values() const {
  std::vector<double> v;
  if (steps == 1) return {min};
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    v.push_back(log_spacing ? std::exp(std::log(min) + t * (std::log(max) - std::log(min))) : min + t * (max - min));
  }
  v.back() = max;
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NaN";
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

RunConfig parse_config(const std::string& text) {
  Reader in(text);
  RunConfig c;

  const std::string E = "ensemble";
  const bool meters = in.word(E, "units", "R", {"R", "m"}) == "m";
  c.ensemble.eps_background = in.number(E, "eps_background", 1.0);
  c.ensemble.temperature = in.number(E, "temperature", 0.0);
  const double scale = meters ? 1.0 : in.number(E, "R", 1e-6);
  require(scale > 0.0, "[ensemble] R: must be positive");

  for (const auto& name : in.sections_with_prefix("sphere.")) {
    const int line = in.section_line(name);
    const std::string tag = name.substr(7);
    char* end = nullptr;
    const long id = std::strtol(tag.c_str(), &end, 10);
    if (tag.empty() || *end != '\0' || id < 1) Reader::fail(line, "sphere sections are [sphere.<id>] with id >= 1");
    force::Sphere s;
    s.id = static_cast<int>(id);
    s.center = in.vector(name, "center", Eigen::Vector3d::Zero()) * scale;
    const double radius = meters ? in.required_number(name, "radius") : in.number(name, "radius", 1.0);
    s.material = mie::MaterialPair{in.required_number(name, "eps"), c.ensemble.eps_background, radius * scale};
    if (s.id == 1 && !meters && radius != 1.0) {
      Reader::fail(line, "[sphere.1] radius: must be 1 when units = R");
    }
    c.ensemble.spheres.push_back(s);
  }
  std::sort(c.ensemble.spheres.begin(), c.ensemble.spheres.end(),
            [](const force::Sphere& a, const force::Sphere& b) { return a.id < b.id; });
  c.R = c.ensemble.spheres.empty() ? scale : c.ensemble.spheres.front().material.radius;
  if (!c.ensemble.spheres.empty() && c.ensemble.spheres.front().id != 1) {
    throw ConfigError("[sphere.1]: required when spheres are given");
  }

  const std::string S = "spectral";
  c.options.L_max = in.integer(S, "lmax", c.options.L_max);
  c.options.matsubara_l_max = in.integer(S, "matsubara_lmax", c.options.matsubara_l_max);
  c.options.n_nodes = in.integer(S, "nodes", c.options.n_nodes);
  c.options.coupling = in.word(S, "coupling", "static", {"static", "mie"}) == "mie" ? mie::CouplingModel::FullMie
                                                                                   : mie::CouplingModel::StaticLimit;
  c.options.stress_kernel = in.word(S, "stress_kernel", "true", {"true", "false"}) == "true";

  const std::string C = "scan";
  c.x.min = in.number(C, "x_min", c.x.min);
  c.x.max = in.number(C, "x_max", c.x.max);
  c.x.steps = in.integer(C, "steps", c.x.steps);
  c.x.log_spacing = in.word(C, "spacing", "linear", {"linear", "log"}) == "log";
  c.theta.min = in.number(C, "theta_min", c.theta.min);
  c.theta.max = in.number(C, "theta_max", c.theta.max);
  c.theta.steps = in.integer(C, "theta_steps", c.theta.steps);
  c.separation = in.number(C, "separation", c.separation);

  const std::string L = "largen";
  c.n_min = in.integer(L, "n_min", c.n_min);
  c.n_max = in.integer(L, "n_max", c.n_max);
  c.lambda = in.number(L, "lambda", c.lambda);
  c.large_R = in.number(L, "radius", c.large_R);
  c.large_s = in.number(L, "s", c.large_s);
  c.correction = in.number(L, "correction", c.correction);

  in.check_all_used();

  require(c.options.L_max >= 1, "[spectral] lmax: must be >= 1");
  require(c.options.matsubara_l_max >= 1, "[spectral] matsubara_lmax: must be >= 1");
  require(c.options.n_nodes >= 1, "[spectral] nodes: must be >= 1");
  require(c.x.steps >= 1 && c.x.max >= c.x.min, "[scan]: need steps >= 1 and x_max >= x_min");
  require(!c.x.log_spacing || c.x.min > 0.0, "[scan] spacing = log: needs x_min > 0");
  require(c.theta.steps >= 1 && c.theta.max >= c.theta.min, "[scan]: need theta_steps >= 1 and theta_max >= theta_min");
  require(c.n_min >= 3 && c.n_max >= c.n_min, "[largen]: need 3 <= n_min <= n_max");
  require(c.large_R > 0.0 && c.large_s > 2.0 * c.large_R, "[largen]: need s > 2 radius > 0");
  require(c.ensemble.temperature >= 0.0, "[ensemble] temperature: must be >= 0");
  require(c.ensemble.eps_background > 0.0, "[ensemble] eps_background: must be positive");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path + ": cannot open");
  std::ostringstream s;
  s << f.rdbuf();
  try {
    return parse_config(s.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply(RunConfig& config, const Overrides& overrides) {
  if (overrides.L_max) {
    require(*overrides.L_max >= 1, "--lmax: must be >= 1");
    config.options.L_max = *overrides.L_max;
  }
  if (overrides.temperature) {
    require(*overrides.temperature >= 0.0, "--temp: must be >= 0");
    config.ensemble.temperature = *overrides.temperature;
  }
}

CommandOutput cmd_force(const RunConfig& config) {
  try {
    config.ensemble.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  CommandOutput out;
  out.csv = "sphere_id,Fx,Fy,Fz,conv\n";
  for (const auto& s : config.ensemble.spheres) {
    const auto r = force::force_on_sphere(config.ensemble, s.id, config.options);
    collect(out, "sphere " + std::to_string(s.id), r);
    out.csv += std::to_string(s.id) + "," + format_number(r.force.x()) + "," + format_number(r.force.y()) + "," +
               format_number(r.force.z()) + "," + format_number(r.convergence_estimate) + "\n";
  }
  return out;
}

CommandOutput cmd_scan_two(const RunConfig& config) {
  const auto& a = sphere(config, 1);
  const auto& b = sphere(config, 2);
  require(config.ensemble.spheres.size() == 2, "scan2: needs exactly spheres 1 and 2");
  const double contact = (a.material.radius + b.material.radius) / config.R;
  require(config.x.min > contact, "[scan] x_min: must exceed (R1 + R2) / R1 = " + format_number(contact));
  CommandOutput out;
  out.csv = "x,force_dimensionless\n";
  for (double x : config.x.values()) {
    force::Ensemble e = config.ensemble;
    e.spheres = {force::Sphere{1, Eigen::Vector3d(0, 0, x * config.R), a.material},
                 force::Sphere{2, Eigen::Vector3d::Zero(), b.material}};
    const auto r = force::force_on_sphere(e, 1, config.options);
    collect(out, "x = " + format_number(x), r);
    out.csv += format_number(x) + "," + format_number(r.force.z()) + "\n";
  }
  return out;
}

CommandOutput cmd_scan_three(const RunConfig& config) {
  const auto& mat = sphere(config, 1).material;
  const auto x = config.x.values(), theta = config.theta.values();
  require(config.separation > 2.0, "[scan] separation: spheres 1 and 2 overlap");
  CommandOutput out;
  Eigen::MatrixXd v;
  if (config.options.L_max == 1) {
    v = force::scan_three_spheres(mat, config.ensemble.eps_background, config.ensemble.temperature, config.separation,
                                  x, theta)
            .potential;
  } else {
    v.resize(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(theta.size()));
    force::Options o = config.options;
    o.estimate_convergence = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < theta.size(); ++j) {
        force::Ensemble e = config.ensemble;
        const double R = mat.radius;
        e.spheres = {force::Sphere{1, Eigen::Vector3d::Zero(), mat},
                     force::Sphere{2, Eigen::Vector3d(0, 0, config.separation * R), mat},
                     force::Sphere{3, x[i] * R * Eigen::Vector3d(std::sin(theta[j]), 0, std::cos(theta[j])), mat}};
        double p = std::numeric_limits<double>::quiet_NaN();
        try {
          e.validate();
          p = force::force_on_sphere(e, 1, o).potential;
        } catch (const std::invalid_argument&) {
        }
        v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p;
      }
    }
  }
  out.csv = "x,theta,potential_dimensionless\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double p = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::isnan(p)) {
        out.diagnostics.push_back("x = " + format_number(x[i]) + ", theta = " + format_number(theta[j]) +
                                  ": sphere 3 overlaps sphere 1 or 2; row is NaN");
      }
      out.csv += format_number(x[i]) + "," + format_number(theta[j]) + "," + format_number(p) + "\n";
    }
  }
  return out;
}

CommandOutput cmd_large_n(const RunConfig& config) {
  CommandOutput out;
  out.csv = "N,V_dimensionless,sign,ratio\n";
  // V_N / V_{N-1} of the closed form.
  const double ratio = -config.lambda * std::pow(config.large_R / config.large_s, 3) / std::exp(1.0);
  for (int N = config.n_min; N <= config.n_max; ++N) {
    const double v = force::large_N_potential(N, config.lambda, config.large_R, config.large_s);
    const int sign = (v > 0.0) - (v < 0.0);
    out.csv += std::to_string(N) + "," + format_number(v) + "," + std::to_string(sign) + "," +
               format_number(ratio / N) + "\n";
  }
  return out;
}

}  // namespace casimir::cli
