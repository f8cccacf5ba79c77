#include "irgg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace irgg {

namespace pt = boost::property_tree;

const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::table1: return "table1";
    case ExperimentKind::table2: return "table2";
    case ExperimentKind::analytic_curve: return "analytic-curve";
    case ExperimentKind::mc_interval: return "mc-interval";
    case ExperimentKind::attack: return "attack";
    case ExperimentKind::supply: return "supply";
  }
  return "?";
}

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"experiment", {"kind", "name", "seed", "threads", "output"}},
    {"geometry", {"d1", "d2", "dep"}},
    {"simulation", {"window", "seeds"}},
    {"curve", {"bound", "k1", "k2", "lam2", "lam2_min", "lam2_max", "lam2_count"}},
    {"mc", {"side", "lam2", "trials", "confidence", "step", "coarse_every", "lam1_max", "inset"}},
    {"model", {"lam1", "lam2"}},
    {"supply", {"area", "radius", "k1", "k2", "k2_pmf", "trials"}},
};
// Sections whose keys are free-form labels.
const std::set<std::string> kListSections = {"rows", "attacks"};

std::vector<double> parse_numbers(const std::string& where, const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || !std::isfinite(v)) {
      throw ConfigError(where + ": '" + tok + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree, ExperimentConfig& cfg) : tree_(tree), cfg_(cfg) {
    for (const auto& [section, body] : tree_) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError("key '" + section + "' must belong to a [section]");
      }
      const bool list = kListSections.count(section) != 0;
      const auto known = kKnownKeys.find(section);
      if (!list && known == kKnownKeys.end()) throw ConfigError("unknown section [" + section + "]");
      for (const auto& [key, value] : body) {
        if (!list && known->second.count(key) == 0) {
          throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        }
        cfg_.echo.emplace_back(section + "." + key, value.data());
      }
    }
  }

  bool has(const std::string& section, const std::string& key) const {
    return tree_.get_child_optional(pt::ptree::path_type(section + "." + key, '.')).has_value();
  }

  std::string text(const std::string& section, const std::string& key, const std::string& fallback) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'));
    return v ? trim(*v) : fallback;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    const std::vector<double> v = parse_numbers(section + "." + key, text(section, key, ""));
    if (v.size() != 1) throw ConfigError(section + "." + key + ": expected one number");
    return v.front();
  }

  long long integer(const std::string& section, const std::string& key, long long fallback) const {
    const double v = number(section, key, static_cast<double>(fallback));
    if (v != std::floor(v)) throw ConfigError(section + "." + key + ": expected an integer");
    return static_cast<long long>(v);
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) const {
    return parse_numbers(section + "." + key, text(section, key, ""));
  }

  std::vector<std::pair<std::string, std::string>> entries(const std::string& section) const {
    std::vector<std::pair<std::string, std::string>> out;
    if (const auto child = tree_.get_child_optional(section)) {
      for (const auto& [key, value] : *child) out.emplace_back(key, trim(value.data()));
    }
    return out;
  }

 private:
  static std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
  }

  const pt::ptree& tree_;
  ExperimentConfig& cfg_;
};

ExperimentKind parse_kind(const std::string& s) {
  static const std::map<std::string, ExperimentKind> kinds = {
      {"table1", ExperimentKind::table1},           {"table2", ExperimentKind::table2},
      {"analytic-curve", ExperimentKind::analytic_curve}, {"mc-interval", ExperimentKind::mc_interval},
      {"attack", ExperimentKind::attack},           {"supply", ExperimentKind::supply},
  };
  const auto it = kinds.find(s);
  if (it == kinds.end()) {
    throw ConfigError("experiment.kind: '" + s +
                      "' is not one of table1, table2, analytic-curve, mc-interval, attack, supply");
  }
  return it->second;
}

BoundId parse_bound(const std::string& s) {
  static const std::map<std::string, BoundId> bounds = {
      {"small-ratio", BoundId::small_ratio},         {"small-ratio-refined", BoundId::small_ratio_refined},
      {"large-ratio", BoundId::large_ratio},         {"triangle-site", BoundId::triangle_site},
      {"det-supply", BoundId::det_supply},
  };
  const auto it = bounds.find(s);
  if (it == bounds.end()) {
    throw ConfigError("curve.bound: '" + s +
                      "' is not one of small-ratio, small-ratio-refined, large-ratio, triangle-site, det-supply");
  }
  return it->second;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void read_geometry(const Reader& r, ExperimentConfig& cfg) {
  cfg.geometry.d1 = r.number("geometry", "d1", cfg.geometry.d1);
  cfg.geometry.d2 = r.number("geometry", "d2", cfg.geometry.d2);
  cfg.geometry.dep = r.number("geometry", "dep", cfg.geometry.dep);
  require(cfg.geometry.d1 > 0.0 && cfg.geometry.d2 > 0.0 && cfg.geometry.dep > 0.0,
          "geometry: d1, d2 and dep must be positive");
}

void read_rows(const Reader& r, ExperimentConfig& cfg, bool need_geometry) {
  for (const auto& [key, value] : r.entries("rows")) {
    const std::vector<double> v = parse_numbers("rows." + key, value);
    DensityRow row;
    if (v.size() == 5) {
      row = {v[0], v[1], {v[2], v[3], v[4]}};
    } else if (v.size() == 2 && !need_geometry) {
      row = {v[0], v[1], cfg.geometry};
    } else {
      throw ConfigError("rows." + key + ": expected " +
                        std::string(need_geometry ? "'lam1 lam2 d1 d2 dep'" : "'lam1 lam2' or 'lam1 lam2 d1 d2 dep'"));
    }
    require(row.lam1 >= 0.0 && row.lam2 >= 0.0, "rows." + key + ": densities must be non-negative");
    require(row.geometry.d1 > 0.0 && row.geometry.d2 > 0.0 && row.geometry.dep > 0.0,
            "rows." + key + ": distances must be positive");
    cfg.rows.push_back(row);
  }
  require(!cfg.rows.empty(), "[rows] must list at least one row");
}

void read_simulation(const Reader& r, ExperimentConfig& cfg) {
  cfg.window = r.number("simulation", "window", cfg.window);
  cfg.seeds = static_cast<int>(r.integer("simulation", "seeds", cfg.seeds));
  require(cfg.window > 0.0, "simulation.window must be positive");
  require(cfg.seeds >= 1, "simulation.seeds must be at least 1");
}

std::vector<double> read_lam2_grid(const Reader& r, const std::string& section) {
  std::vector<double> grid;
  if (r.has(section, "lam2")) {
    grid = r.numbers(section, "lam2");
  } else if (r.has(section, "lam2_min") || r.has(section, "lam2_max") || r.has(section, "lam2_count")) {
    const double lo = r.number(section, "lam2_min", 0.0);
    const double hi = r.number(section, "lam2_max", lo);
    const long long n = r.integer(section, "lam2_count", 2);
    require(n >= 1 && hi >= lo, section + ": need lam2_count >= 1 and lam2_max >= lam2_min");
    for (long long i = 0; i < n; ++i) grid.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  require(!grid.empty(), section + ": give lam2 (a list) or lam2_min/lam2_max/lam2_count");
  for (double v : grid) require(v >= 0.0, section + ".lam2: densities must be non-negative");
  return grid;
}

void check_domain(const std::string& where, const BoundQuery& q) {
  try {
    check_lattice_domain(q);
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  ExperimentConfig cfg;
  const Reader r(tree, cfg);

  require(r.has("experiment", "kind"), "experiment.kind is required");
  cfg.kind = parse_kind(r.text("experiment", "kind", ""));
  cfg.name = r.text("experiment", "name", to_string(cfg.kind));
  require(!cfg.name.empty() && cfg.name.find('/') == std::string::npos,
          "experiment.name must be a plain file stem");
  const long long seed = r.integer("experiment", "seed", 1);
  require(seed >= 0, "experiment.seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  const long long threads = r.integer("experiment", "threads", 0);
  require(threads >= 0, "experiment.threads must be non-negative (0 = all cores)");
  cfg.threads = static_cast<unsigned>(threads);
  cfg.output_dir = r.text("experiment", "output", cfg.output_dir);

  read_geometry(r, cfg);

  switch (cfg.kind) {
    case ExperimentKind::table1:
    case ExperimentKind::table2: {
      read_simulation(r, cfg);
      read_rows(r, cfg, false);
      for (std::size_t i = 0; i < cfg.rows.size(); ++i) {
        const DensityRow& row = cfg.rows[i];
        check_domain("row " + std::to_string(i + 1), BoundQuery::from(row.geometry, row.lam1, row.lam2));
      }
      break;
    }
    case ExperimentKind::analytic_curve: {
      cfg.bound = parse_bound(r.text("curve", "bound", "small-ratio"));
      cfg.supply.k1 = static_cast<int>(r.integer("curve", "k1", 1));
      cfg.supply.k2 = static_cast<int>(r.integer("curve", "k2", 1));
      require(cfg.supply.k1 >= 1 && cfg.supply.k2 >= 1, "curve.k1 and curve.k2 must be at least 1");
      cfg.lam2_grid = read_lam2_grid(r, "curve");
      if (cfg.bound == BoundId::small_ratio || cfg.bound == BoundId::small_ratio_refined ||
          cfg.bound == BoundId::large_ratio) {
        check_domain("geometry", BoundQuery::from(cfg.geometry, 0.0, 0.0));
      }
      if (cfg.bound == BoundId::small_ratio_refined) {
        require(lattice_derived(cfg.geometry).c == 3,
                "geometry: the refined bound requires floor(d2/d1) = 3");
      }
      break;
    }
    case ExperimentKind::mc_interval: {
      cfg.lam2_grid = read_lam2_grid(r, "mc");
      cfg.side = r.number("mc", "side", 10.0 * std::max(cfg.geometry.d1, cfg.geometry.d2));
      SearchOptions& s = cfg.search;
      s.trials = static_cast<std::size_t>(std::max(0LL, r.integer("mc", "trials", 100)));
      s.confidence = r.number("mc", "confidence", s.confidence);
      s.step = r.number("mc", "step", s.step);
      s.coarse_every = static_cast<int>(r.integer("mc", "coarse_every", s.coarse_every));
      s.lam1_max = r.number("mc", "lam1_max", s.lam1_max);
      if (r.has("mc", "inset")) s.inset = r.number("mc", "inset", 0.0);
      require(s.trials >= 1, "mc.trials must be at least 1");
      require(s.confidence > 0.0 && s.confidence < 1.0, "mc.confidence must lie in (0, 1)");
      require(s.step > 0.0 && s.coarse_every >= 1 && s.lam1_max >= s.step,
              "mc: need step > 0, coarse_every >= 1 and lam1_max >= step");
      for (BondVariant v : {BondVariant::upper_merge, BondVariant::upper_crossing, BondVariant::lower_vacant}) {
        BondTrialConfig t;
        t.side = cfg.side;
        t.variant = v;
        t.query = BoundQuery::from(cfg.geometry, 0.0, 0.0);
        t.inset = s.inset;
        try {
          validate(t);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("mc (") + to_string(v) + "): " + e.what());
        }
      }
      break;
    }
    case ExperimentKind::attack: {
      read_simulation(r, cfg);
      cfg.model.lam1 = r.number("model", "lam1", -1.0);
      cfg.model.lam2 = r.number("model", "lam2", -1.0);
      require(cfg.model.lam1 >= 0.0 && cfg.model.lam2 >= 0.0,
              "model.lam1 and model.lam2 are required and must be non-negative");
      cfg.model.d1 = cfg.geometry.d1;
      cfg.model.d2 = cfg.geometry.d2;
      cfg.model.dep = cfg.geometry.dep;
      cfg.model.window = Window::square(cfg.window);
      for (const auto& [key, value] : r.entries("attacks")) {
        std::istringstream in(value);
        std::string type;
        in >> type;
        std::string rest;
        std::getline(in, rest);
        const std::vector<double> v = parse_numbers("attacks." + key, rest);
        AttackEntry e{key, RandomAttack{}};
        if (type == "disk" && v.size() == 3) {
          e.spec = DiskAttack{{v[0], v[1]}, v[2]};
        } else if (type == "random" && v.size() == 2) {
          e.spec = RandomAttack{v[0], v[1]};
        } else {
          throw ConfigError("attacks." + key + ": expected 'disk cx cy radius' or 'random q1 q2'");
        }
        try {
          validate(e.spec, cfg.model.window);
        } catch (const std::invalid_argument& err) {
          throw ConfigError("attacks." + key + ": " + err.what());
        }
        cfg.attacks.push_back(std::move(e));
      }
      require(!cfg.attacks.empty(), "[attacks] must list at least one attack");
      break;
    }
    case ExperimentKind::supply: {
      read_rows(r, cfg, false);
      SupplySettings& s = cfg.supply;
      if (r.has("supply", "area")) {
        s.area = r.number("supply", "area", 0.0);
      } else {
        const double radius = r.number("supply", "radius", lattice_derived(cfg.geometry).r);
        s.area = kTriangleCellArea * radius * radius;
      }
      s.k1 = static_cast<int>(r.integer("supply", "k1", 1));
      s.k2 = static_cast<int>(r.integer("supply", "k2", 1));
      s.trials = static_cast<std::size_t>(std::max(0LL, r.integer("supply", "trials", 20000)));
      require(s.area > 0.0, "supply: cell area must be positive");
      require(s.k1 >= 1 && s.k2 >= 1, "supply.k1 and supply.k2 must be at least 1");
      require(s.trials >= 1, "supply.trials must be at least 1");
      if (r.has("supply", "k2_pmf")) {
        try {
          s.k2_pmf = SupplyPmf(r.numbers("supply", "k2_pmf"));
        } catch (const std::exception& e) {
          throw ConfigError(std::string("supply.k2_pmf: ") + e.what());
        }
      }
      break;
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace irgg
