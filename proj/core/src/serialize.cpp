#include "atlas/serialize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace atlas {

namespace {
using nlohmann::json;

json bank_arrays(const AtlasModel& model) {
  json splines = json::array();
  const int per_output = model.splines_per_output();
  const int n = model.input_dim();
  const int M = model.num_exponentials();
  auto spline_at = [&](int o, int s) -> const MixedDensitySpline& {
    if (s < n) return model.f(o, s);
    if (s < n + M * n) return model.g(o, (s - n) / n + 1, (s - n) % n);
    const int t = s - n - M * n;
    return model.h(o, t / n + 1, t % n);
  };
  for (int o = 0; o < model.output_dim(); ++o) {
    for (int s = 0; s < per_output; ++s) {
      const MixedDensitySpline& sp = spline_at(o, s);
      json banks = json::array();
      for (int rho = 0; rho < sp.bank_count(); ++rho) {
        json coeffs = json::array();
        for (double c : sp.bank(rho).coeffs()) {
          if (!std::isfinite(c))
            throw std::invalid_argument("save_model: non-finite coefficient");
          coeffs.push_back(c);
        }
        banks.push_back(std::move(coeffs));
      }
      splines.push_back(std::move(banks));
    }
  }
  return splines;
}
}  // namespace

void save_model(const AtlasModel& model, std::ostream& out) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["n"] = model.input_dim();
  doc["p"] = model.output_dim();
  doc["M"] = model.num_exponentials();
  doc["r"] = model.max_density();
  doc["variant"] = to_string(model.variant());
  doc["banks"] = bank_arrays(model);
  out << doc.dump(1, '\t') << '\n';
  if (!out) throw std::runtime_error("save_model: write failed");
}

void save_model(const AtlasModel& model, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out)
    throw std::runtime_error("save_model: cannot open " + file.string());
  save_model(model, out);
}

AtlasModel load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("load_model: parse error: ") + e.what());
  }
  auto require = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end())
      throw std::runtime_error(std::string("load_model: missing field '") + key + "'");
    return *it;
  };
  const int version = require("format_version").get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error("load_model: unsupported format_version " +
                             std::to_string(version));
  const int n = require("n").get<int>();
  const int p = require("p").get<int>();
  const int M = require("M").get<int>();
  const int r = require("r").get<int>();
  const Variant variant = variant_from_string(require("variant").get<std::string>());

  AtlasModel model(n, p, M, r, variant);
  const json& splines = require("banks");
  const std::size_t expected =
      static_cast<std::size_t>(p) * static_cast<std::size_t>(model.splines_per_output());
  if (!splines.is_array() || splines.size() != expected)
    throw std::runtime_error("load_model: banks shape mismatch");

  auto spline_at = [&](int o, int s) -> MixedDensitySpline& {
    if (s < n) return model.f(o, s);
    if (s < n + M * n) return model.g(o, (s - n) / n + 1, (s - n) % n);
    const int t = s - n - M * n;
    return model.h(o, t / n + 1, t % n);
  };
  std::size_t flat = 0;
  for (int o = 0; o < p; ++o) {
    for (int s = 0; s < model.splines_per_output(); ++s, ++flat) {
      MixedDensitySpline& sp = spline_at(o, s);
      const json& banks = splines[flat];
      if (!banks.is_array() || static_cast<int>(banks.size()) != sp.bank_count())
        throw std::runtime_error("load_model: bank count mismatch");
      for (int rho = 0; rho < sp.bank_count(); ++rho) {
        const json& coeffs = banks[static_cast<std::size_t>(rho)];
        auto dst = sp.bank(rho).coeffs();
        if (!coeffs.is_array() || coeffs.size() != dst.size())
          throw std::runtime_error("load_model: coefficient count mismatch");
        for (std::size_t i = 0; i < dst.size(); ++i) {
          const json& v = coeffs[i];
          if (!v.is_number())
            throw std::runtime_error("load_model: non-numeric coefficient");
          dst[i] = v.get<double>();
        }
      }
    }
  }
  return model;
}

AtlasModel load_model(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw std::runtime_error("load_model: cannot open " + file.string());
  return load_model(in);
}

}  // namespace atlas
