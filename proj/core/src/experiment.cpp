#include "elastica/experiment.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <memory>
#include <ostream>

#include "elastica/contour.hpp"
#include "elastica/topology.hpp"

namespace elastica {

DomainPtr make_domain(const SimulationConfig& cfg) { return Domain::create(cfg.grid_n, cfg.grid_extent); }

ScalarField build_initial_field(const SimulationConfig& cfg, const DomainPtr& domain) {
  return std::visit(
      [&](const auto& init) -> ScalarField {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, CurvesInit>) {
          RecoveryParams rp = default_recovery_params(init.curves, cfg.energy.epsilon);
          if (init.delta > 0.0) rp.delta = init.delta;
          return build_recovery_field(init.curves, rp, domain);
        } else if constexpr (std::is_same_v<T, ShapeInit>) {
          const GrayImage img = rasterize(init.shape, init.pixels, init.image_extent);
          return init_from_image(img, init.blur_sigma, init.image_extent, domain);
        } else if constexpr (std::is_same_v<T, ImageInit>) {
          return init_from_image(init.params, domain);
        } else {
          Snapshot snap = read_snapshot(init.path);
          if (!(snap.field.grid() == domain->grid())) {
            throw ConfigError(fmt::format("init.snapshot: grid n={} extent={} does not match the configured grid",
                                          snap.field.grid().n, snap.field.grid().extent));
          }
          return ScalarField(domain, std::vector<double>(snap.field.values().begin(), snap.field.values().end()));
        }
      },
      cfg.init);
}

TimeSeriesRecord make_record(int step, double time, const ScalarField& u, const EnergyParams& p,
                             const TVSolveParams* tv) {
  TimeSeriesRecord r;
  r.step = step;
  r.time = time;
  r.energy = energy_total(u, p);
  const ContourMetrics cm = contour_metrics(extract_contour(u));
  r.components = cm.component_count;
  r.length = cm.length;
  r.max_radius = cm.max_radius;
  if (tv) r.T_tilde = winding_improved(u, p, *tv).value;
  return r;
}

WeightProvider improved_winding_weights(const TVSolveParams& t) {
  return [t](const ScalarField& u, const EnergyParams& p) {
    const PhiSolution sol = minimize_phi(u, p, t);
    return std::make_shared<const std::vector<double>>(sol.phi.values().begin(), sol.phi.values().end());
  };
}

ExperimentResult run_experiment(const SimulationConfig& cfg, const ExperimentOptions& options) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  const DomainPtr domain = make_domain(cfg);
  res.initial = build_initial_field(cfg, domain);
  res.ramps_done_step = cfg.flow.relax_steps + cfg.flow.ramp.L_ramp_steps;

  std::unique_ptr<TimeSeriesWriter> writer;
  if (options.write_files) {
    std::filesystem::create_directories(cfg.output_dir);
    writer = std::make_unique<TimeSeriesWriter>(cfg.output_dir / "timeseries.csv");
  }

  auto observer = [&](const StepContext& ctx) {
    const bool tv_due = cfg.tv_every > 0 && ctx.step % cfg.tv_every == 0;
    TimeSeriesRecord r = make_record(ctx.step, ctx.time, *ctx.u, *ctx.params, tv_due ? &cfg.topology : nullptr);
    res.series.push_back(r);
    res.params.push_back(*ctx.params);
    if (writer) {
      writer->append(r);
      if (ctx.snapshot_due) {
        writer->flush();
        write_snapshot(*ctx.u, cfg.output_dir / fmt::format("snapshot_{:06d}.pfield", ctx.step), ctx.step,
                       ctx.time);
      }
    }
    if (options.keep_fields_every > 0 && ctx.step % options.keep_fields_every == 0) {
      res.kept.push_back({ctx.step, ctx.time, *ctx.u});
    }
    if (options.log && options.log_every > 0 && ctx.step % options.log_every == 0) {
      fmt::print(*options.log, "[{}] step {:6d} t {:.6e} F {:.8g} B {:.6g} L {:.6g} Tbar {:.6g} comps {}\n",
                 cfg.name, ctx.step, ctx.time, r.energy.total, r.energy.B, r.energy.Lval, r.energy.T_bar,
                 r.components);
      if (ctx.result) {
        fmt::print(*options.log, "    tau {:.3e} newton {} cg {} halvings {}\n", ctx.result->tau_used,
                   ctx.result->newton_iters, ctx.result->cg_iters, ctx.result->halvings);
      }
      options.log->flush();
    }
    if (options.extra_observer) options.extra_observer(ctx);
  };

  WeightProvider weights;
  if (cfg.winding_mode == WindingMode::Improved) weights = improved_winding_weights(cfg.topology);
  res.trajectory = run_simulation(res.initial, cfg.energy, cfg.flow, cfg.steps, cfg.snapshot_every, observer, weights);

  if (writer) {
    writer->flush();
    write_snapshot(res.trajectory.final_field, cfg.output_dir / "final.pfield",
                   res.trajectory.records.empty() ? 0 : res.trajectory.records.back().step,
                   res.trajectory.final_time);
  }
  return res;
}

}  // namespace elastica
