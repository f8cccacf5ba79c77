#include "irgg/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "irgg/version.hpp"

namespace irgg {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    write(header);
  }

  void write(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    out_.flush();
    if (!out_) throw std::runtime_error("CSV write failed");
  }

 private:
  std::ofstream out_;
  std::size_t width_;
};

std::vector<std::uint64_t> seed_list(std::uint64_t base, int count) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < count; ++i) s.push_back(base + static_cast<std::uint64_t>(i));
  return s;
}

struct Context {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;
  std::ostream* log;
  RunReport& report;

  CsvWriter open(const std::string& suffix, const std::vector<std::string>& header) {
    const std::filesystem::path p = dir / (cfg.name + suffix + ".csv");
    report.files.push_back(p.string());
    return CsvWriter(p, header);
  }
  void note(const std::string& line) {
    if (log) *log << line << '\n' << std::flush;
  }
};

void run_table(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  CsvWriter csv = ctx.open("", csv_columns(cfg.kind));
  const auto seeds = seed_list(cfg.seed, cfg.seeds);
  for (std::size_t i = 0; i < cfg.rows.size(); ++i) {
    const auto t0 = Clock::now();
    const DensityRow& row = cfg.rows[i];
    const BoundQuery q = BoundQuery::from(row.geometry, row.lam1, row.lam2);
    const double lhs = cfg.kind == ExperimentKind::table1 ? small_ratio_lhs(q) : large_ratio_lhs(q);
    ModelParams p{row.lam1, row.lam2, row.geometry.d1, row.geometry.d2, row.geometry.dep,
                  Window::square(cfg.window)};
    const AttackSummary s = mutual_stats_over_seeds(p, seeds, cfg.threads);
    csv.write({std::to_string(i + 1), fmt(row.lam1), fmt(row.lam2), fmt(row.geometry.d1), fmt(row.geometry.d2),
               fmt(row.geometry.dep), fmt(cfg.window), std::to_string(cfg.seed), std::to_string(cfg.seeds),
               fmt(lhs), fmt(s.mean_f1), fmt(s.mean_f2), fmt(s.min_f1), fmt(s.min_f2), fmt_ms(ms_since(t0))});
    ++ctx.report.rows;
    ctx.note("row " + std::to_string(i + 1) + ": f1=" + fmt(s.mean_f1) + " f2=" + fmt(s.mean_f2));
  }
}

void run_curve(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  CsvWriter csv = ctx.open("", csv_columns(cfg.kind));
  CurveRequest req{cfg.bound, cfg.geometry, cfg.supply.k1, cfg.supply.k2};
  static const char* names[] = {"small-ratio", "small-ratio-refined", "large-ratio", "triangle-site", "det-supply"};
  for (double lam2 : cfg.lam2_grid) {
    const auto t0 = Clock::now();
    const CurvePoint pt = solve_threshold_curve(req, {lam2}).front();
    csv.write({names[static_cast<int>(cfg.bound)], fmt(cfg.geometry.d1), fmt(cfg.geometry.d2), fmt(cfg.geometry.dep),
               std::to_string(cfg.supply.k1), std::to_string(cfg.supply.k2), fmt(lam2), fmt(pt.lam1),
               fmt_ms(ms_since(t0))});
    ++ctx.report.rows;
  }
}

void run_interval(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  CsvWriter csv = ctx.open("", csv_columns(cfg.kind));
  CsvWriter trail = ctx.open("_trail", {"lam2", "variant", "lam1", "trials", "failures", "failures_g2", "accepted"});
  SearchOptions opts = cfg.search;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  for (double lam2 : cfg.lam2_grid) {
    const auto t0 = Clock::now();
    const IntervalResult r = confidence_interval(lam2, cfg.geometry, cfg.side, opts);
    std::size_t evaluated = 0;
    for (const SearchResult* s : {&r.upper_merge, &r.upper_crossing, &r.lower}) {
      for (const GridTally& g : s->trail) {
        trail.write({fmt(lam2), to_string(s->variant), fmt(g.lam1), std::to_string(g.trials),
                     std::to_string(g.failures), std::to_string(g.failures_g2), g.accepted ? "1" : "0"});
      }
      evaluated += s->trail.size();
    }
    std::optional<double> lower_eff;
    if (r.lower.lam1) lower_eff = effective_density(*r.lower.lam1, lam2, cfg.geometry.dep);
    csv.write({fmt(lam2), fmt(cfg.geometry.d1), fmt(cfg.geometry.d2), fmt(cfg.geometry.dep), fmt(cfg.side),
               std::to_string(opts.trials), fmt(opts.confidence), std::to_string(cfg.seed),
               fmt(r.upper_merge.lam1), fmt(r.upper_crossing.lam1), fmt(r.upper()), fmt(r.lower.lam1),
               fmt(lower_eff), std::to_string(evaluated), fmt_ms(ms_since(t0))});
    ++ctx.report.rows;
    ctx.note("lam2=" + fmt(lam2) + ": lam1 in [" + fmt(r.lower.lam1) + ", " + fmt(r.upper()) + "]");
  }
}

void run_attack(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  CsvWriter csv = ctx.open("", csv_columns(cfg.kind));
  const auto seeds = seed_list(cfg.seed, cfg.seeds);
  const ModelParams& m = cfg.model;
  for (const AttackEntry& a : cfg.attacks) {
    const auto t0 = Clock::now();
    const AttackSummary s = post_attack_percolation(m, a.spec, seeds, cfg.threads);
    std::string type = "random";
    std::string cx, cy, radius, q1, q2;
    if (const auto* d = std::get_if<DiskAttack>(&a.spec)) {
      type = "disk";
      cx = fmt(d->center.x);
      cy = fmt(d->center.y);
      radius = fmt(d->radius);
    } else {
      const auto& r = std::get<RandomAttack>(a.spec);
      q1 = fmt(r.q1);
      q2 = fmt(r.q2);
    }
    csv.write({a.label, type, cx, cy, radius, q1, q2, fmt(m.lam1), fmt(m.lam2), fmt(m.d1), fmt(m.d2), fmt(m.dep),
               fmt(cfg.window), std::to_string(cfg.seed), std::to_string(cfg.seeds), fmt(s.mean_f1),
               fmt(s.mean_f2), fmt(s.min_f1), fmt(s.min_f2), fmt_ms(ms_since(t0))});
    ++ctx.report.rows;
    ctx.note(a.label + ": f1=" + fmt(s.mean_f1) + " f2=" + fmt(s.mean_f2));
  }
}

void run_supply(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const SupplySettings& s = cfg.supply;
  CsvWriter csv = ctx.open("", csv_columns(cfg.kind));
  const SupplyPmf k2_pmf = s.k2_pmf ? *s.k2_pmf : SupplyPmf::point_mass(s.k2);
  const SupplyRequirement g2_needs = SupplyRequirement::constant(s.k1);
  const SupplyRequirement g1_needs =
      s.k2_pmf ? SupplyRequirement::random(*s.k2_pmf) : SupplyRequirement::constant(s.k2);
  for (std::size_t i = 0; i < cfg.rows.size(); ++i) {
    const auto t0 = Clock::now();
    const DensityRow& row = cfg.rows[i];
    const double det = det_supply_lhs(row.lam1, row.lam2, s.area, s.k1, s.k2);
    const double p12 = rand_supply_p12(row.lam1, row.lam2, s.area, s.k1, k2_pmf);
    const std::uint64_t seed = cfg.seed + i;
    const SupplyEstimate e = estimate_supply_probability(row.lam1, row.lam2, s.area, g2_needs, g1_needs, s.trials, seed);
    csv.write({fmt(row.lam1), fmt(row.lam2), fmt(s.area), std::to_string(s.k1), std::to_string(s.k2),
               s.k2_pmf ? "random" : "fixed", fmt(det), fmt(p12), fmt(e.p), fmt(e.std_error),
               std::to_string(e.trials), std::to_string(seed), fmt_ms(ms_since(t0))});
    ++ctx.report.rows;
  }
}

nlohmann::ordered_json manifest_json(const ExperimentConfig& cfg, const RunReport& report) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : cfg.echo) config[key] = value;
  return {
      {"name", cfg.name},
      {"kind", to_string(cfg.kind)},
      {"version", kVersion},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"config", config},
      {"files", report.files},
      {"rows", report.rows},
  };
}

}  // namespace

std::vector<std::string> csv_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::table1:
    case ExperimentKind::table2:
      return {"row", "lam1", "lam2", "d1", "d2", "dep", "window", "seed", "seeds", "bound_lhs",
              "f1_mean", "f2_mean", "f1_min", "f2_min", "wall_ms"};
    case ExperimentKind::analytic_curve:
      return {"bound", "d1", "d2", "dep", "k1", "k2", "lam2", "lam1", "wall_ms"};
    case ExperimentKind::mc_interval:
      return {"lam2", "d1", "d2", "dep", "side", "trials", "confidence", "seed", "upper_merge",
              "upper_crossing", "upper", "lower", "lower_effective", "points_evaluated", "wall_ms"};
    case ExperimentKind::attack:
      return {"label", "type", "cx", "cy", "radius", "q1", "q2", "lam1", "lam2", "d1", "d2", "dep",
              "window", "seed", "seeds", "f1_mean", "f2_mean", "f1_min", "f2_min", "wall_ms"};
    case ExperimentKind::supply:
      return {"lam1", "lam2", "area", "k1", "k2", "k2_mode", "det_lhs", "rand_p12", "mc_p",
              "mc_std_error", "mc_trials", "seed", "wall_ms"};
  }
  return {};
}

RunReport run_experiment(ExperimentConfig cfg, const RunOverrides& overrides, std::ostream* log) {
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  if (overrides.threads) cfg.threads = *overrides.threads;

  RunReport report;
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  report.manifest = (dir / (cfg.name + ".manifest.json")).string();

  const auto t0 = Clock::now();
  Context ctx{cfg, dir, log, report};
  const auto write_manifest = [&](const std::string& status, const std::string& error) {
    report.runtime_ms = ms_since(t0);
    nlohmann::ordered_json j = manifest_json(cfg, report);
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    j["runtime_ms"] = report.runtime_ms;
    std::ofstream out(report.manifest);
    out << j.dump(2) << '\n';
  };

  try {
    switch (cfg.kind) {
      case ExperimentKind::table1:
      case ExperimentKind::table2: run_table(ctx); break;
      case ExperimentKind::analytic_curve: run_curve(ctx); break;
      case ExperimentKind::mc_interval: run_interval(ctx); break;
      case ExperimentKind::attack: run_attack(ctx); break;
      case ExperimentKind::supply: run_supply(ctx); break;
    }
  } catch (const std::exception& e) {
    write_manifest("failed", e.what());
    throw;
  }
  write_manifest("ok", "");
  return report;
}

}  // namespace irgg
