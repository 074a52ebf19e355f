#pragma once

// Serialization: roof files, classifier reports and plot-ready CSV.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixlab/cohomology.hpp"
#include "mixlab/skewshift.hpp"
#include "mixlab/trigpoly.hpp"

namespace mixlab::io {

struct RoofFile {
  double alpha = 0.0;
  double beta = 0.0;
  FiberedTrigPoly phi;
};

/// {"alpha", "beta", "degree_y", "coeffs": [{"k", "m", "re", "im"}], "real"}; the
/// coefficient of e^{2 pi i (m x + k y)}. Real-flagged input must list conjugate pairs.
RoofFile roof_from_json(const nlohmann::json& j);
nlohmann::json roof_to_json(const RoofFile& roof);
RoofFile load_roof(const std::filesystem::path& path);

nlohmann::json report_to_json(const cohomology::ClassifierReport& report);

/// Shortest decimal text that round-trips (17 significant digits), C locale.
std::string format_double(double v);

/// Writes a header row and data rows; every cell is already formatted text.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace mixlab::io
