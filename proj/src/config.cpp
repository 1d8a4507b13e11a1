#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "systolic/defect_report.hpp"
#include "systolic/errors.hpp"

namespace systolic {

namespace {

using nlohmann::json;

Vec2 vec_of(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(std::string(what) + " must be a two-element array");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

AnalyticFamily family_of(const json& j) {
  const std::string name = j.at("family").get<std::string>();
  if (name == "constant") {
    return ConstantFamily{j.value("c", 1.0)};
  }
  if (name == "trig") {
    return TrigFamily{j.value("epsilon", 0.1), j.value("k", 1), j.value("l", 0)};
  }
  if (name == "trig-poly") {
    TrigPolynomialFamily fam;
    fam.constant = j.value("constant", 1.0);
    fam.exponentiate = j.value("exp", false);
    for (const json& m : j.value("modes", json::array())) {
      if (!m.is_array() || m.size() != 4) {
        throw ParseError("trig-poly mode must be [k, l, cos_coeff, sin_coeff]");
      }
      fam.modes.push_back(
          {m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<double>(), m.at(3).get<double>()});
    }
    return fam;
  }
  if (name == "gaussian-bump") {
    GaussianBumpFamily fam;
    fam.amplitude = j.value("amplitude", fam.amplitude);
    fam.width = j.value("width", fam.width);
    if (j.contains("center")) {
      fam.center = vec_of(j.at("center"), "center");
    }
    return fam;
  }
  if (name == "riemann-bump") {
    RiemannBumpFamily fam;
    fam.alpha = j.value("alpha", fam.alpha);
    fam.inner_radius = j.value("inner_radius", 0.0);
    fam.outer_radius = j.value("outer_radius", 0.0);
    if (j.contains("center")) {
      fam.center = vec_of(j.at("center"), "center");
    }
    return fam;
  }
  throw ParseError("unknown factor family '" + name + "'");
}

}  // namespace

MetricConfig parse_metric_config(const std::string& json_text) {
  MetricConfig cfg;
  try {
    const json j = json::parse(json_text);
    if (j.contains("lattice")) {
      const json& lat = j.at("lattice");
      if (lat.contains("tau")) {
        const Vec2 t = vec_of(lat.at("tau"), "tau");
        cfg.lattice = Lattice2D::from_tau({t.x, t.y});
      } else if (lat.contains("basis")) {
        const json& b = lat.at("basis");
        if (!b.is_array() || b.size() != 2) {
          throw ParseError("basis must be [[b1x, b1y], [b2x, b2y]]");
        }
        cfg.lattice = normalize_coarea(Lattice2D(vec_of(b.at(0), "b1"), vec_of(b.at(1), "b2")));
      } else {
        throw ParseError("lattice needs 'tau' or 'basis'");
      }
    }
    if (j.contains("grid")) {
      cfg.nu = j.at("grid").value("nu", cfg.nu);
      cfg.nv = j.at("grid").value("nv", cfg.nv);
    }
    if (j.contains("factor")) {
      const json& f = j.at("factor");
      if (f.contains("grid_file")) {
        cfg.grid_file = f.at("grid_file").get<std::string>();
      } else {
        cfg.family = family_of(f);
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return cfg;
}

MetricConfig load_metric_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric_config(ss.str());
}

ConformalMetric normalized_metric(const ScalarField& factor) {
  const Lattice2D& lat = factor.lattice();
  const double c = lat.coarea();
  if (std::abs(c - 1.0) <= kLatticeTolerance) {
    return ConformalMetric(factor);
  }
  // x' = x / sqrt(c) keeps f^2 |dx|^2 fixed when f' = sqrt(c) f.
  const double s = 1.0 / std::sqrt(c);
  const Lattice2D unit(lat.b1() * s, lat.b2() * s);
  std::vector<double> v(factor.values().begin(), factor.values().end());
  for (double& x : v) {
    x *= std::sqrt(c);
  }
  return ConformalMetric(ScalarField(unit, factor.nu(), factor.nv(), std::move(v)));
}

ConformalMetric build_metric(const MetricConfig& config) {
  if (config.grid_file) {
    return normalized_metric(read_grid_file(*config.grid_file));
  }
  return ConformalMetric(from_analytic(config.lattice, config.nu, config.nv, config.family));
}

}  // namespace systolic
