#include "mixlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "mixlab/errors.hpp"

namespace mixlab::io {

using nlohmann::json;

namespace {

template <class T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("roof file is missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("roof file has a malformed \"") + key + "\"");
  }
}

}  // namespace

RoofFile roof_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("roof file must hold a JSON object");
  static const char* const kKeys[] = {"alpha", "beta", "degree_y", "coeffs", "real"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      throw ValidationError("roof file has unknown key \"" + key + "\"");
  }
  RoofFile out;
  out.alpha = required<double>(j, "alpha");
  out.beta = required<double>(j, "beta");
  const int degree_y = required<int>(j, "degree_y");
  const bool real = required<bool>(j, "real");
  if (degree_y < 0) throw ValidationError("degree_y must be >= 0");
  if (!(out.alpha >= 0.0 && out.alpha < 1.0 && out.beta >= 0.0 && out.beta < 1.0))
    throw ValidationError("alpha and beta must lie in [0, 1)");
  const json& coeffs = j.at("coeffs");
  if (!coeffs.is_array()) throw ValidationError("\"coeffs\" must be an array");
  std::vector<FiberedTrigPoly::Mode> modes;
  for (const json& c : coeffs) {
    FiberedTrigPoly::Mode mode;
    mode.m = required<int>(c, "m");
    mode.k = required<int>(c, "k");
    mode.c = {required<double>(c, "re"), required<double>(c, "im")};
    if (std::abs(mode.k) > degree_y)
      throw ValidationError("coefficient with |k| > degree_y");
    modes.push_back(mode);
  }
  out.phi = FiberedTrigPoly::from_modes(modes, real);
  return out;
}

json roof_to_json(const RoofFile& roof) {
  json coeffs = json::array();
  for (const auto& mode : roof.phi.modes())
    coeffs.push_back({{"k", mode.k}, {"m", mode.m}, {"re", mode.c.real()}, {"im", mode.c.imag()}});
  return {{"alpha", roof.alpha},
          {"beta", roof.beta},
          {"degree_y", roof.phi.degree_y()},
          {"coeffs", coeffs},
          {"real", roof.phi.is_real()}};
}

RoofFile load_roof(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read roof file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("roof file " + path.string() + " is not valid JSON: " + e.what());
  }
  return roof_from_json(j);
}

json report_to_json(const cohomology::ClassifierReport& report) {
  json values = json::array();
  for (const auto& e : report.entries) {
    values.push_back({{"m", e.label.m},
                      {"n", e.label.n},
                      {"re", e.value.real()},
                      {"im", e.value.imag()},
                      {"abs", std::abs(e.value)},
                      {"exact_zero", e.exact_zero}});
  }
  return {{"verdict", cohomology::to_string(report.verdict)},
          {"distributions", values},
          {"phi_l2", report.phi_norm},
          {"tol", report.tol}};
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_csv(out, header, rows);
}

}  // namespace mixlab::io
