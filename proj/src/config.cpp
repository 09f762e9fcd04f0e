#include "lpvff/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lpvff/errors.hpp"
#include "lpvff/text.hpp"

namespace lpvff {

namespace {

// A setter returns an error message, empty on success.
using Setter = std::function<std::string(RunConfig&, std::string_view)>;

template <typename F>
Setter number(F field) {
  return [field](RunConfig& c, std::string_view v) -> std::string {
    const auto x = parse_double(v);
    if (!x || !std::isfinite(*x)) return "expected a finite number, got '" + std::string(v) + "'";
    field(c) = *x;
    return {};
  };
}

template <typename T, typename F>
Setter integer(F field, double lo) {
  return [field, lo](RunConfig& c, std::string_view v) -> std::string {
    const auto x = parse_double(v);
    if (!x || *x != std::floor(*x) || *x < lo || *x > 1e15) {
      return "expected an integer >= " + format_double(lo) + ", got '" + std::string(v) + "'";
    }
    field(c) = static_cast<T>(*x);
    return {};
  };
}

template <typename F>
Setter kernel(F field) {
  return [field](RunConfig& c, std::string_view v) -> std::string {
    try {
      field(c) = parse_kernel_spec(std::string(v));
    } catch (const InvalidArgument& e) {
      return e.what();
    }
    return {};
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"plant.m", number([](RunConfig& c) -> double& { return c.plant.m; })},
      {"plant.J", number([](RunConfig& c) -> double& { return c.plant.J; })},
      {"plant.r_pulley", number([](RunConfig& c) -> double& { return c.plant.r_pulley; })},
      {"plant.d", number([](RunConfig& c) -> double& { return c.plant.d; })},
      {"plant.L", number([](RunConfig& c) -> double& { return c.plant.L; })},
      {"plant.EA", number([](RunConfig& c) -> double& { return c.plant.EA; })},
      {"plant.ell", number([](RunConfig& c) -> double& { return c.plant.ell; })},
      {"plant.rho_min", number([](RunConfig& c) -> double& { return c.plant.rho_min; })},
      {"plant.rho_max", number([](RunConfig& c) -> double& { return c.plant.rho_max; })},
      {"plant.frozen_stiffness",
       [](RunConfig& c, std::string_view v) -> std::string {
         if (v == "none") {
           c.plant.frozen_stiffness.reset();
           return {};
         }
         const auto x = parse_double(v);
         if (!x || !std::isfinite(*x)) return "expected a number or 'none'";
         c.plant.frozen_stiffness = *x;
         return {};
       }},
      {"controller.kp", number([](RunConfig& c) -> double& { return c.controller.kp; })},
      {"controller.kd", number([](RunConfig& c) -> double& { return c.controller.kd; })},
      {"trajectory.y_start",
       number([](RunConfig& c) -> double& { return c.trajectory.y_start; })},
      {"trajectory.y_end", number([](RunConfig& c) -> double& { return c.trajectory.y_end; })},
      {"trajectory.duration",
       number([](RunConfig& c) -> double& { return c.trajectory.duration; })},
      {"trajectory.dt", number([](RunConfig& c) -> double& { return c.trajectory.dt; })},
      {"trajectory.t_total",
       number([](RunConfig& c) -> double& { return c.trajectory.t_total; })},
      {"kernels.centers",
       integer<std::size_t>([](RunConfig& c) -> std::size_t& { return c.kernels.centers; }, 1)},
      {"kernels.lambda", number([](RunConfig& c) -> double& { return c.kernels.lambda; })},
      {"kernels.lambda_grid",
       [](RunConfig& c, std::string_view v) -> std::string {
         if (v == "true") {
           c.kernels.lambda_grid = true;
         } else if (v == "false") {
           c.kernels.lambda_grid = false;
         } else {
           return "expected 'true' or 'false'";
         }
         return {};
       }},
      {"kernels.theta1", kernel([](RunConfig& c) -> KernelSpec& { return c.kernels.theta1; })},
      {"kernels.theta2", kernel([](RunConfig& c) -> KernelSpec& { return c.kernels.theta2; })},
      {"learning.iterations",
       integer<int>([](RunConfig& c) -> int& { return c.iterations; }, 1)},
      {"learning.noise_std", number([](RunConfig& c) -> double& { return c.noise_std; })},
      {"output.dir",
       [](RunConfig& c, std::string_view v) -> std::string {
         if (v.empty()) return "output directory must not be empty";
         c.output_dir = std::string(v);
         return {};
       }},
      {"output.seed",
       integer<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.seed; }, 0)},
  };
  return table;
}

// Validation messages start with the dotted key they are about.
std::string key_of_message(const std::string& msg) {
  const auto sp = msg.find(' ');
  return msg.substr(0, sp);
}

}  // namespace

void RunConfig::validate() const {
  plant.validate();
  controller.validate();
  const auto& t = trajectory;
  if (!(t.dt > 0.0)) throw InvalidArgument("trajectory.dt must be > 0");
  if (!(t.duration > 0.0)) throw InvalidArgument("trajectory.duration must be > 0");
  if (!(t.t_total >= t.duration)) throw InvalidArgument("trajectory.t_total must be >= duration");
  if (t.t_total / t.dt > 1e7) throw InvalidArgument("trajectory.dt too small for t_total");
  for (const auto& [name, y] : {std::pair{"trajectory.y_start", t.y_start},
                                std::pair{"trajectory.y_end", t.y_end}}) {
    const double rho = plant.rho_of(y);
    if (!(rho >= plant.rho_min && rho <= plant.rho_max)) {
      throw InvalidArgument(std::string(name) + " puts rho = " + format_double(rho) +
                            " outside [plant.rho_min, plant.rho_max]");
    }
  }
  if (kernels.centers < 1) throw InvalidArgument("kernels.centers must be >= 1");
  if (!(kernels.lambda > 0.0)) throw InvalidArgument("kernels.lambda must be > 0");
  try {
    kernels.theta1.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("kernels.theta1 ") + e.what());
  }
  try {
    kernels.theta2.validate();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("kernels.theta2 ") + e.what());
  }
  if (iterations < 1) throw InvalidArgument("learning.iterations must be >= 1");
  if (!(noise_std >= 0.0)) throw InvalidArgument("learning.noise_std must be >= 0");
  if (output_dir.empty()) throw InvalidArgument("output.dir must not be empty");
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line = raw;
    // Inline comments need a blank before the '#'.
    for (std::size_t i = 1; i < line.size(); ++i) {
      if (line[i] == '#' && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source, line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"plant", "controller", "trajectory", "kernels", "learning",
                                    "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ParseError(source, line_no, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    if (section.empty()) throw ParseError(source, line_no, "key outside any section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(source, line_no, "unknown key '" + key + "'");
    if (seen.count(key)) {
      throw ParseError(source, line_no,
                       "duplicate key '" + key + "' (first set on line " +
                           std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    const std::string err = it->second(cfg, value);
    if (!err.empty()) throw ParseError(source, line_no, key + ": " + err);
  }

  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    const auto it = seen.find(key_of_message(msg));
    throw ParseError(source, it == seen.end() ? 0 : it->second, msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), path);
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream os;
  auto kv = [&os](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  const auto f = format_double;
  os << "[plant]\n";
  kv("m", f(c.plant.m));
  kv("J", f(c.plant.J));
  kv("r_pulley", f(c.plant.r_pulley));
  kv("d", f(c.plant.d));
  kv("L", f(c.plant.L));
  kv("EA", f(c.plant.EA));
  kv("ell", f(c.plant.ell));
  kv("rho_min", f(c.plant.rho_min));
  kv("rho_max", f(c.plant.rho_max));
  kv("frozen_stiffness", c.plant.frozen_stiffness ? f(*c.plant.frozen_stiffness) : "none");
  os << "\n[controller]\n";
  kv("kp", f(c.controller.kp));
  kv("kd", f(c.controller.kd));
  os << "\n[trajectory]\n";
  kv("y_start", f(c.trajectory.y_start));
  kv("y_end", f(c.trajectory.y_end));
  kv("duration", f(c.trajectory.duration));
  kv("dt", f(c.trajectory.dt));
  kv("t_total", f(c.trajectory.t_total));
  os << "\n[kernels]\n";
  kv("centers", std::to_string(c.kernels.centers));
  kv("lambda", f(c.kernels.lambda));
  kv("lambda_grid", c.kernels.lambda_grid ? "true" : "false");
  kv("theta1", to_string(c.kernels.theta1));
  kv("theta2", to_string(c.kernels.theta2));
  os << "\n[learning]\n";
  kv("iterations", std::to_string(c.iterations));
  kv("noise_std", f(c.noise_std));
  os << "\n[output]\n";
  kv("dir", c.output_dir);
  kv("seed", std::to_string(c.seed));
  return os.str();
}

Trajectory make_trajectory(const RunConfig& cfg) {
  const auto& t = cfg.trajectory;
  return point_to_point(t.y_start, t.y_end, t.duration, t.dt, t.t_total);
}

LearnConfig make_learn_config(const RunConfig& cfg) {
  LearnConfig lc = default_learn_config(cfg.plant, cfg.kernels.centers, cfg.kernels.lambda);
  lc.spec1 = cfg.kernels.theta1;
  lc.spec2 = cfg.kernels.theta2;
  if (cfg.kernels.lambda_grid) lc.lambda_grid = default_lambda_ladder();
  return lc;
}

IdentificationConfig make_identification_config(const RunConfig& cfg) {
  IdentificationConfig ic;
  ic.learn = make_learn_config(cfg);
  ic.iterations = cfg.iterations;
  ic.noise = {cfg.noise_std, cfg.seed};
  return ic;
}

}  // namespace lpvff
