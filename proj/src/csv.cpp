#include "lpvff/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lpvff/text.hpp"

namespace lpvff {

namespace {

void row(std::ostringstream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << format_double(v);
    first = false;
  }
  os << '\n';
}

}  // namespace

std::string traces_csv(const TrackingTraces& tr) {
  std::ostringstream os;
  os << "t,r0,y,e,u_ff,u_fb\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    row(os, {tr.t[i], tr.r0[i], tr.y[i], tr.e[i], tr.u_ff[i], tr.u_fb[i]});
  }
  return os.str();
}

std::string figure3_csv(const std::vector<Figure3Row>& rows) {
  std::ostringstream os;
  os << "rho,theta2_learned,theta2_true\n";
  for (const auto& r : rows) row(os, {r.rho, r.theta2_learned, r.theta2_true});
  return os.str();
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "name,e_max_ratio,e_2_ratio\n";
  for (const auto& r : rows) {
    os << r.name << ',' << format_double(r.e_max_ratio) << ',' << format_double(r.e_2_ratio)
       << '\n';
  }
  return os.str();
}

std::string table_text(const std::vector<TableRow>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  std::ostringstream os;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-*s  %12s  %12s\n", static_cast<int>(width), "name",
                "e_max ratio", "e_2 ratio");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %12.4f  %12.4f\n", static_cast<int>(width),
                  r.name.c_str(), r.e_max_ratio, r.e_2_ratio);
    os << buf;
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,r0,r1,r2,r3,r4\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    row(os, {traj.time(i), traj.r0[i], traj.r1[i], traj.r2[i], traj.r3[i], traj.r4[i]});
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << content;
  if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace lpvff
