#include <fstream>
#include <map>
#include <sstream>

#include "lpvff/errors.hpp"
#include "lpvff/learning.hpp"
#include "lpvff/text.hpp"

namespace lpvff {

namespace {

constexpr std::string_view kMagic = "lpvff-model 1";

}  // namespace

std::string serialize_model(const FFModel& model) {
  std::ostringstream os;
  os << kMagic << '\n';
  os << "rho_domain " << format_double(model.rho_min) << ' ' << format_double(model.rho_max)
     << '\n';
  os << "lambda " << format_double(model.lambda) << '\n';
  os << "kernel1 " << to_string(model.spec1) << '\n';
  os << "kernel2 " << to_string(model.spec2) << '\n';
  os << "centers " << model.centers.size() << '\n';
  os << "data\n";
  for (std::size_t m = 0; m < model.centers.size(); ++m) {
    os << format_double(model.centers[m]) << ' ' << format_double(model.alpha1[m]) << ' '
       << format_double(model.alpha2[m]) << '\n';
  }
  return os.str();
}

FFModel parse_model(const std::string& text, const std::string& source) {
  std::istringstream is(text);
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(source, line_no, msg); };

  auto next_line = [&](std::string_view& out) {
    while (std::getline(is, raw)) {
      ++line_no;
      std::string_view s = trim(raw);
      if (s.empty() || s.front() == '#') continue;
      out = s;
      return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line) || line != kMagic) fail("expected header '" + std::string(kMagic) + "'");

  FFModel model;
  std::map<std::string, std::size_t> seen;
  std::size_t count = 0;
  bool have_count = false;
  while (true) {
    if (!next_line(line)) fail("unexpected end of file before 'data'");
    if (line == "data") break;
    const auto sp = line.find(' ');
    const std::string key(line.substr(0, sp));
    const std::string_view value = sp == std::string_view::npos ? "" : trim(line.substr(sp));
    if (seen.count(key)) fail("duplicate key '" + key + "'");
    seen[key] = line_no;

    if (key == "rho_domain") {
      const auto parts = split(value, ' ');
      if (parts.size() != 2) fail("rho_domain takes two numbers");
      const auto lo = parse_double(parts[0]);
      const auto hi = parse_double(parts[1]);
      if (!lo || !hi) fail("rho_domain: bad number");
      model.rho_min = *lo;
      model.rho_max = *hi;
    } else if (key == "lambda") {
      const auto v = parse_double(value);
      if (!v) fail("lambda: bad number");
      model.lambda = *v;
    } else if (key == "kernel1" || key == "kernel2") {
      try {
        (key == "kernel1" ? model.spec1 : model.spec2) = parse_kernel_spec(std::string(value));
      } catch (const InvalidArgument& e) {
        fail(e.what());
      }
    } else if (key == "centers") {
      const auto v = parse_double(value);
      if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
        fail("centers must be a positive integer");
      }
      count = static_cast<std::size_t>(*v);
      have_count = true;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  for (const char* k : {"rho_domain", "lambda", "kernel1", "kernel2", "centers"}) {
    if (!seen.count(k)) fail(std::string("missing key '") + k + "'");
  }
  if (!have_count) fail("missing center count");

  for (std::size_t m = 0; m < count; ++m) {
    if (!next_line(line)) fail("expected " + std::to_string(count) + " data rows");
    std::vector<std::string_view> f;
    for (auto part : split(line, ' ')) {
      if (!part.empty()) f.push_back(part);
    }
    if (f.size() != 3) fail("data row needs 'center alpha1 alpha2'");
    const auto c = parse_double(f[0]);
    const auto a1 = parse_double(f[1]);
    const auto a2 = parse_double(f[2]);
    if (!c || !a1 || !a2) fail("data row: bad number");
    model.centers.push_back(*c);
    model.alpha1.push_back(*a1);
    model.alpha2.push_back(*a2);
  }
  if (next_line(line)) fail("trailing content after data rows");

  try {
    model.validate();
  } catch (const InvalidArgument& e) {
    line_no = 0;
    fail(e.what());
  }
  return model;
}

void save_model(const FFModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write model file " + path);
  os << serialize_model(model);
  if (!os) throw std::runtime_error("failed writing model file " + path);
}

FFModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path, 0, "cannot open model file");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_model(buf.str(), path);
}

}  // namespace lpvff
