#include "pathwise/experiments/config.hpp"

#include <algorithm>
#include <cmath>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pathwise/errors.hpp"

namespace pathwise::exp {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& s) {
  std::vector<std::string> parts;
  const std::string trimmed = boost::algorithm::trim_copy(s);
  if (trimmed.empty()) return {};
  boost::algorithm::split(parts, trimmed, boost::is_any_of(", \t"), boost::token_compress_on);
  std::vector<double> out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != p.size()) throw ConfigError("not a number: '" + p + "'");
    out.push_back(v);
  }
  return out;
}

Eigen::VectorXd parse_vector(const std::string& s) {
  auto v = parse_list(s);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (double v : parse_list(s)) {
    if (v < 0 || v != std::floor(v)) throw ConfigError("seeds must be non-negative integers");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

template <class T>
void read(const pt::ptree& tree, const char* key, T& out) {
  // get_optional<T> swallows conversion failures; get<T> reports them
  if (tree.get_child_optional(key)) out = tree.get<T>(key);
}

void read_vector(const pt::ptree& tree, const char* key, Eigen::VectorXd& out) {
  if (auto v = tree.get_optional<std::string>(key)) out = parse_vector(*v);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    read(tree, "simulation.dt", c.simulation.dt);
    read(tree, "simulation.t_final", c.simulation.t_final);
    read(tree, "simulation.seed", c.simulation.seed);
    read(tree, "simulation.record_stride", c.simulation.record_stride);
    read_vector(tree, "simulation.x0", c.simulation.x0);
    if (auto m = tree.get_optional<std::string>("simulation.mode")) c.simulation.mode = parse_coordinate_mode(*m);

    read(tree, "controller.family", c.controller.family);
    read(tree, "controller.task", c.controller.task);
    if (auto p = tree.get_optional<std::string>("controller.poles")) c.controller.poles = parse_list(*p);
    if (auto e = tree.get_optional<std::string>("controller.epsilon")) {
      if (boost::algorithm::trim_copy(*e) == "none")
        c.controller.epsilon.reset();
      else
        c.controller.epsilon = std::stod(*e);
    }
    read(tree, "controller.delta_threshold", c.controller.delta_threshold);

    read(tree, "reference.beta", c.reference.beta);
    read(tree, "reference.alpha", c.reference.alpha);
    read(tree, "reference.omega", c.reference.omega);

    if (auto e = tree.get_optional<std::string>("figures.epsilons")) c.figures.epsilons = parse_list(*e);
    if (auto s = tree.get_optional<std::string>("figures.seeds")) c.figures.seeds = parse_seeds(*s);
    read(tree, "figures.fig1_second_seed", c.figures.fig1_second_seed);
    read(tree, "figures.comparison_t_final", c.figures.comparison_t_final);

    if (auto s = tree.get_optional<std::string>("estimator.seeds")) c.estimator.seeds = parse_seeds(*s);
    if (auto e = tree.get_optional<std::string>("estimator.epsilons")) c.estimator.epsilons = parse_list(*e);
    read(tree, "estimator.horizon", c.estimator.horizon);
    read(tree, "estimator.dt", c.estimator.dt);
    read_vector(tree, "estimator.x0", c.estimator.x0);

    read(tree, "analysis.system", c.analysis.system);
    read_vector(tree, "analysis.point", c.analysis.point);
    read(tree, "analysis.radius", c.analysis.radius);
    read(tree, "analysis.samples", c.analysis.samples);
    read(tree, "analysis.stability_paths", c.analysis.stability_paths);
    read(tree, "analysis.stability_horizon", c.analysis.stability_horizon);
    read(tree, "analysis.stability_radius", c.analysis.stability_radius);
    read(tree, "analysis.stability_dt", c.analysis.stability_dt);
    read(tree, "analysis.stability_seed", c.analysis.stability_seed);

    read(tree, "output.dir", c.output_dir);
    read(tree, "output.workers", c.workers);
  } catch (const pt::ptree_bad_data& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

void ExperimentConfig::apply_fast_profile() {
  fast = true;
  tolerance_scale = 10.0;
  simulation.dt = std::max(simulation.dt, 1e-5);
  estimator.dt = std::max(estimator.dt, 1e-5);
  auto lift = [](std::vector<double>& eps) {
    if (std::any_of(eps.begin(), eps.end(), [](double e) { return e < 1e-4; })) eps = {1e-2, 1e-3, 1e-4};
  };
  lift(figures.epsilons);
  lift(estimator.epsilons);
  if (controller.epsilon) controller.epsilon = std::max(*controller.epsilon, 1e-4);
}

void ExperimentConfig::validate() const {
  if (!(simulation.dt > 0.0) || !(simulation.t_final > 0.0)) throw ConfigError("dt and t_final must be positive");
  if (!(figures.comparison_t_final > 0.0)) throw ConfigError("figures.comparison_t_final must be positive");
  if (simulation.x0.size() != 3) throw ConfigError("simulation.x0 must have 3 entries");
  if (simulation.record_stride < 1) throw ConfigError("simulation.record_stride must be >= 1");
  if (controller.poles.empty()) throw ConfigError("controller.poles is empty");
  for (double e : figures.epsilons)
    if (!(e > 0.0)) throw ConfigError("figure epsilons must be positive");
  for (double e : estimator.epsilons)
    if (!(e > 0.0)) throw ConfigError("estimator epsilons must be positive");
}

}  // namespace pathwise::exp
