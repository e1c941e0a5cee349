#pragma once

#include <filesystem>
#include <iosfwd>

#include "atlas/model.hpp"

namespace atlas {

inline constexpr int kModelFormatVersion = 1;

// Model files are JSON documents:
//   { "format_version": 1, "n":, "p":, "M":, "r":, "variant": "...",
//     "banks": [spline][density bank][basis index] }
// with splines in flat storage order (output, then f|g|h block, then k, then
// coordinate). Numbers are written in shortest round-trip form, so saving and
// loading reproduces every finite coefficient bit for bit. Non-finite
// coefficients are refused at save time.
void save_model(const AtlasModel& model, std::ostream& out);
void save_model(const AtlasModel& model, const std::filesystem::path& file);
AtlasModel load_model(std::istream& in);
AtlasModel load_model(const std::filesystem::path& file);

}  // namespace atlas
