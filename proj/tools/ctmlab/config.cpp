#include "config.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "ctm/decoupling.hpp"
#include "ctm/errors.hpp"

namespace lab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ctm::ConfigError("config.load: cannot open " + path);
  try {
    return json::parse(f, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw ctm::InputError("config.parse: " + path + ": " + e.what());
  }
}

// Relative paths are taken from the config file's directory; the file must
// exist up front so a broken reference never reaches the numerics.
std::string resolve_existing(const std::string& raw, const fs::path& base) {
  fs::path p(raw);
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) throw ctm::ConfigError("config.load: referenced file missing: " + p.string());
  return p.lexically_normal().string();
}

std::array<double, 3> vec3(const json& j, double fill) {
  std::array<double, 3> out{fill, fill, fill};
  for (std::size_t i = 0; i < j.size() && i < 3; ++i) out[i] = j.at(i).get<double>();
  return out;
}

RegionSpec parse_region(const json& j, const std::string& name, const fs::path& base) {
  RegionSpec r;
  r.name = name;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "halfplane") {
    r.kind = RegionSpec::Kind::halfplane;
    r.axis = j.at("axis").get<int>();
    r.side = j.at("side").get<int>();
    r.value = j.at("value").get<double>();
  } else if (kind == "rect") {
    r.kind = RegionSpec::Kind::rect;
    r.lo = vec3(j.at("lo"), -1e30);
    r.hi = vec3(j.at("hi"), 1e30);
  } else if (kind == "file") {
    r.kind = RegionSpec::Kind::file;
    r.path = resolve_existing(j.at("path").get<std::string>(), base);
  } else if (kind == "original_boxes") {
    r.kind = RegionSpec::Kind::original_boxes;
    for (const auto& b : j.at("boxes")) {
      const auto t = b.at("t");
      const auto x = b.at("x");
      r.boxes.push_back({t.at(0).get<double>(), t.at(1).get<double>(), x.at(0).get<double>(),
                         x.at(1).get<double>()});
    }
    if (r.boxes.empty()) throw ctm::ConfigError("config.region: original_boxes without boxes");
  } else {
    throw ctm::ConfigError("config.region: unknown kind '" + kind + "'");
  }
  return r;
}

ctm::MetricSpec parse_metric(const json& j, const fs::path& base) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "flat") return ctm::MetricSpec::flat();
  if (family == "diagonal") return ctm::MetricSpec::diagonal(j.at("diag").get<std::vector<double>>());
  if (family == "conformal_constant")
    return ctm::MetricSpec::conformal_constant(j.at("phi").get<double>());
  if (family == "conformal_bump")
    return ctm::MetricSpec::conformal_bump(j.at("amplitude").get<double>(),
                                           j.at("width").get<double>(),
                                           j.at("center").get<std::vector<double>>());
  if (family == "curve_induced") {
    std::vector<Eigen::Vector2d> verts;
    if (j.contains("curve_file")) {
      verts = ctm::read_curve_file(resolve_existing(j.at("curve_file").get<std::string>(), base));
    } else {
      for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    }
    return ctm::MetricSpec::curve_induced(
        ctm::build_chart(verts, j.value("rotation", 0.0)));
  }
  if (family == "tabulated")
    return ctm::MetricSpec::tabulated(resolve_existing(j.at("path").get<std::string>(), base));
  throw ctm::ConfigError("config.metric: unknown family '" + family + "'");
}

ctm::Lattice parse_lattice(const json& j) {
  return ctm::build_lattice(j.at("dim").get<int>(), j.at("shape").get<std::vector<int>>(),
                            j.at("spacing").get<std::vector<double>>(),
                            j.at("origin").get<std::vector<double>>());
}

}  // namespace

ctm::Region RegionSpec::build(const ctm::Lattice& lat, const ctm::CurveChart* chart) const {
  switch (kind) {
    case Kind::halfplane:
      return ctm::region_halfplane(lat, axis, side, value, name);
    case Kind::rect:
      return ctm::region_rect(lat, {lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}, name);
    case Kind::file:
      return ctm::read_region_file(path, lat);
    case Kind::original_boxes: {
      if (!chart)
        throw ctm::ConfigError("config.region: original_boxes requires a chart experiment");
      const auto boxes_copy = boxes;
      return ctm::region_in_original(
          lat, *chart,
          [boxes_copy](double t, double x) {
            for (const auto& b : boxes_copy)
              if (t >= b[0] && t <= b[1] && x >= b[2] && x <= b[3]) return true;
            return false;
          },
          name);
    }
  }
  throw ctm::ConfigError("config.region: unreachable kind");
}

ExperimentConfig load_experiment(const std::string& path) {
  const json j = parse_file(path);
  const fs::path base = fs::path(path).has_parent_path() ? fs::path(path).parent_path() : ".";
  try {
    ExperimentConfig cfg;
    cfg.id = j.at("id").get<std::string>();
    cfg.kind = j.at("kind").get<std::string>();
    cfg.lattice = parse_lattice(j.at("lattice"));
    cfg.mass = j.value("mass", 1.0);
    if (cfg.mass <= 0.0) throw ctm::ConfigError("config.load: mass must be positive");
    cfg.seed = j.value("seed", std::uint64_t{12345});
    cfg.plot = j.value("plot", std::string{});

    if (cfg.kind == "green") {
      cfg.metric = parse_metric(j.at("metric"), base);
      for (const auto& s : j.at("sources")) {
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t a = 0; a < s.size() && a < 3; ++a) idx[a] = s.at(a).get<int>();
        if (!cfg.lattice.inside(idx))
          throw ctm::ConfigError("config.load: green source outside the lattice");
        cfg.sources.push_back(idx);
      }
      if (cfg.sources.empty()) throw ctm::ConfigError("config.load: green needs sources");
    } else if (cfg.kind == "markov-check") {
      cfg.metric = parse_metric(j.at("metric"), base);
      const auto& r = j.at("regions");
      cfg.region_a = parse_region(r.at("a"), "a", base);
      cfg.region_cut = parse_region(r.at("cut"), "cut", base);
      cfg.region_b = parse_region(r.at("b"), "b", base);
      cfg.tolerance = j.value("tolerance", 1e-8);
    } else if (cfg.kind == "transfer") {
      cfg.metric = parse_metric(j.at("metric"), base);
      cfg.taus = j.at("taus").get<std::vector<double>>();
      if (cfg.taus.empty()) throw ctm::ConfigError("config.load: transfer needs taus");
      cfg.rate_floor = j.value("rate_floor", 0.95);
    } else if (cfg.kind == "spectrum") {
      cfg.metric = parse_metric(j.at("metric"), base);
      cfg.step = j.at("step").get<int>();
    } else if (cfg.kind == "decouple") {
      if (j.contains("curve_file")) {
        cfg.curve =
            ctm::read_curve_file(resolve_existing(j.at("curve_file").get<std::string>(), base));
      } else {
        for (const auto& v : j.at("vertices"))
          cfg.curve.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      }
      if (j.contains("rotation_scan"))
        cfg.rotations = j.at("rotation_scan").get<std::vector<double>>();
      else
        cfg.rotations = {j.value("rotation", 0.0)};
      if (cfg.rotations.empty()) throw ctm::ConfigError("config.load: empty rotation scan");
      cfg.region_l1 = parse_region(j.at("l1"), "l1", base);
      cfg.region_l2 = parse_region(j.at("l2"), "l2", base);
      cfg.bound_slack = j.value("bound_slack", 1.05);
    } else {
      throw ctm::ConfigError("config.load: unknown kind '" + cfg.kind + "'");
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ctm::ConfigError("config.load: " + path + ": " + e.what());
  }
}

SuiteConfig load_suite_config(const std::string& path) {
  const json j = parse_file(path);
  try {
    SuiteConfig cfg;
    if (j.contains("data_dir")) {
      const fs::path base = fs::path(path).has_parent_path() ? fs::path(path).parent_path() : ".";
      fs::path p(j.at("data_dir").get<std::string>());
      if (p.is_relative()) p = base / p;
      cfg.data_dir = p.lexically_normal().string();
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tier")) cfg.tier = j.at("tier").get<std::string>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    return cfg;
  } catch (const json::exception& e) {
    throw ctm::ConfigError("config.load: " + path + ": " + e.what());
  }
}

}  // namespace lab
