"""AUV Anchor Tools CLI"""

import math
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import typer
from pydantic import ValidationError
from rich.console import Console

from .config import Config, RuntimeConfig, ScenarioConfig, load_config
from .core import (
    EXIT_VALIDATION,
    AnchorToolsError,
    ArtifactWriter,
    DisplayRenderer,
    setup_logging,
    validate_seed,
    validate_step,
    validate_workers,
)
from .core.errors import AllInfeasible, InputError, NoCoverage
from .models import (
    ClusterDesign,
    CoverageRule,
    InsDivergenceModel,
    LegSampling,
    MeasurementCovariance,
    RangeErrorParams,
    SimulationSetup,
)
from .modules import deployment, ins_drift, localization, planner, simulator
from .modules.profile_acoustics import los_variance, resolve_profile

app = typer.Typer(
    name="auv-anchor",
    help="Anchor-cluster deployment planning for AUV navigation",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)
renderer = DisplayRenderer(console)

CONFIG_OPTION = typer.Option(None, "--config", "-c", help="Scenario JSON file")
OUT_OPTION = typer.Option(Path("out"), "--out", "-o", help="Output directory")
SEED_OPTION = typer.Option(None, "--seed", help="Master seed (u64), overrides config")
STEP_OPTION = typer.Option(None, "--step-m", help="Traversal step in meters, overrides config")


def _fail(message: str, code: int) -> None:
    err_console.print(f"[red]{message}[/]")
    raise typer.Exit(code)


def _guarded(action: Callable[[], None]) -> None:
    """Run a command body, mapping library errors to exit codes."""
    try:
        action()
    except AnchorToolsError as e:
        _fail(f"{type(e).__name__}: {e}", e.exit_code)
    except ValidationError as e:
        _fail(f"Invalid input: {e}", EXIT_VALIDATION)


def _scenario(config: Optional[Path], seed: Optional[str], step_m: Optional[float]) -> Config:
    ok, err = validate_step(step_m)
    if not ok:
        raise InputError(err)
    cfg = load_config(config)
    if seed is not None:
        ok, value, err = validate_seed(seed)
        if not ok:
            raise InputError(err)
        cfg = cfg.override("simulation.master_seed", value)
    if step_m is not None:
        cfg = cfg.override("traversal.step_m", step_m)
    return cfg


def _design(s: ScenarioConfig) -> ClusterDesign:
    return ClusterDesign(
        anchor_depth=s.anchors.anchor_depth_m,
        target_depth=s.target.depth_m,
        design_elevation=math.radians(s.anchors.design_elevation_deg),
        comm_range=s.anchors.comm_range_m,
        rule=CoverageRule(
            min_anchors=s.coverage.min_anchors, range_metric=s.coverage.range_metric
        ),
        traversal_step=s.traversal.step_m,
        layer_thickness=s.profile.layer_thickness_m,
    )


def _ins(s: ScenarioConfig) -> InsDivergenceModel:
    return InsDivergenceModel(**s.ins.model_dump())


def _leg(s: ScenarioConfig) -> LegSampling:
    return LegSampling(speed=s.kinematics.speed_mps, slot=s.kinematics.slot_s)


@app.callback()
def _global(
    output_format: str = typer.Option("table", "--format", help="table|json|yaml"),
    debug: bool = typer.Option(False, "--debug", help="Enable debug logging"),
    log_file: Optional[str] = typer.Option(None, "--log-file", help="Also log to this file"),
    workers: Optional[int] = typer.Option(
        None, "--workers", help="Thread pool size for parallel maps"
    ),
):
    setup_logging(debug=debug, log_file=log_file)
    ok, err = validate_workers(workers)
    if not ok:
        _fail(err, EXIT_VALIDATION)
    try:
        RuntimeConfig.set_output_format(output_format)
    except ValueError as e:
        _fail(str(e), EXIT_VALIDATION)
    if workers is not None:
        RuntimeConfig.set_max_workers(workers)


# ============ Commands ============
@app.command("field")
def cmd_field(
    config: Optional[Path] = CONFIG_OPTION,
    out: Path = OUT_OPTION,
    seed: Optional[str] = SEED_OPTION,
    step_m: Optional[float] = STEP_OPTION,
):
    """Expected CRLB over one cluster's coverage at the design depth"""

    def run():
        cfg = _scenario(config, seed, step_m)
        s = cfg.scenario
        design = _design(s)
        profile = resolve_profile(s.profile.name, s.profile.csv_path)
        params = RangeErrorParams(gamma=s.anchors.gamma)
        n_ca = s.anchors.counts()[0]
        cluster = design.cluster(n_ca)

        field = localization.expected_crlb_field(
            cluster,
            profile,
            params,
            localization.coverage_region(cluster, design.comm_range, design.rule),
            step=design.traversal_step,
            comm_range=design.comm_range,
            rule=design.rule,
            layer_thickness=design.layer_thickness,
        )
        d_com = localization.coverage_radius(cluster, design.comm_range, design.rule)
        slab = profile.slab(design.target_depth, design.anchor_depth, design.layer_thickness)
        sigma_d_sq = los_variance(slab, design.design_elevation, params)
        center = (*cluster.center, design.target_depth)
        phi = localization.fim(
            localization.jacobian(center, cluster.anchors),
            MeasurementCovariance(variances=(sigma_d_sq,) * n_ca),
        )
        horizontal, vertical = localization.crlb_components(phi)
        values = np.array([c[2] for c in field.cells() if c[3]])

        writer = ArtifactWriter(out)
        writer.write_csv(
            "field.csv",
            ({"x_m": x, "y_m": y, "crlb_m2": v, "covered": int(c)} for x, y, v, c in field.cells()),
            ["x_m", "y_m", "crlb_m2", "covered"],
        )
        summary = {
            "n_ca": n_ca,
            "rule": design.rule.label,
            "q_m2": field.q,
            "coverage_radius_m": d_com,
            "cells": len(field.xs) * len(field.ys),
            "covered_cells": field.covered_count,
            "crlb_min_m2": float(values.min()),
            "crlb_max_m2": float(values.max()),
            "sigma_d_sq_m2": sigma_d_sq,
            "center_crlb_m2": localization.center_crlb(n_ca, design.design_elevation, sigma_d_sq),
            "center_horizontal_m2": horizontal,
            "center_vertical_m2": vertical,
        }
        geometry = {
            "cluster": cluster.to_dict(),
            "design_elevation_deg": math.degrees(design.design_elevation),
            "step_m": design.traversal_step,
        }
        writer.write_json("field.json", {**summary, **geometry, "config": cfg.data})

        if not renderer.render(summary, RuntimeConfig.get_output_format()):
            renderer.detail(
                summary,
                f"CRLB field, N_ca={n_ca}",
                [
                    ("Q (m^2)", "q_m2"),
                    ("Coverage radius (m)", "coverage_radius_m"),
                    ("Covered cells", "covered_cells"),
                    ("Center CRLB (m^2)", "center_crlb_m2"),
                ],
            )
            renderer.info("Wrote " + ", ".join(p.name for p in writer.written()) + f" to {out}")

    _guarded(run)


@app.command("optimize")
def cmd_optimize(
    config: Optional[Path] = CONFIG_OPTION,
    out: Path = OUT_OPTION,
    seed: Optional[str] = SEED_OPTION,
    step_m: Optional[float] = STEP_OPTION,
):
    """Sweep anchors per cluster and lambda1 over the hybrid objective"""

    def run():
        cfg = _scenario(config, seed, step_m)
        s = cfg.scenario
        assessed = planner.assess_candidates(
            s.anchors.counts(),
            s.region.side_km,
            s.anchors.n_total,
            resolve_profile(s.profile.name, s.profile.csv_path),
            RangeErrorParams(gamma=s.anchors.gamma),
            _design(s),
        )
        feasible = [a for _, a, _ in assessed if a is not None]
        if not feasible:
            raise AllInfeasible(
                "; ".join(f"N_ca={n}: {reason}" for n, _, reason in assessed)
            )
        rows, verdict = planner.lambda_sweep(
            feasible, s.weights.grid(), _ins(s), _leg(s), s.weights.lambda2
        )

        candidates = []
        for n, assessment, reason in assessed:
            entry = {"n_ca": n, "status": "feasible" if assessment else "infeasible"}
            if assessment:
                entry.update(
                    d_com_m=assessment.d_com,
                    q_m2=assessment.q,
                    d_h_m=assessment.plan.d_h,
                    best_lambda1=verdict["best_lambda1_per_candidate"][str(n)],
                )
            else:
                entry["reason"] = reason
            candidates.append(entry)

        writer = ArtifactWriter(out)
        writer.write_csv(
            "sweep.csv", rows, ["n_ca", "lambda1", "q_m2", "nav_m2", "objective_m2", "path"]
        )
        writer.write_json(
            "verdict.json", {**verdict, "candidates": candidates, "config": cfg.data}
        )

        if not renderer.render({**verdict, "candidates": candidates}, RuntimeConfig.get_output_format()):
            for entry in candidates:
                if entry["n_ca"] == verdict["best_n_ca"]:
                    entry["status"] = "best"
            renderer.table(
                candidates,
                "Anchors per cluster",
                [
                    {"name": "N_ca", "key": "n_ca"},
                    {"name": "d_com (m)", "key": "d_com_m"},
                    {"name": "Q (m^2)", "key": "q_m2"},
                    {"name": "d_h (m)", "key": "d_h_m"},
                    {"name": "best lambda1", "key": "best_lambda1"},
                    {"name": "Status", "key": "status"},
                ],
                hint=f"Verdict: N_ca={verdict['best_n_ca']}, lambda1={verdict['best_lambda1']}",
            )

    _guarded(run)


@app.command("feasibility")
def cmd_feasibility(
    config: Optional[Path] = CONFIG_OPTION,
    out: Path = OUT_OPTION,
    seed: Optional[str] = SEED_OPTION,
    step_m: Optional[float] = STEP_OPTION,
):
    """Maximum serviceable side versus total anchors"""

    def run():
        cfg = _scenario(config, seed, step_m)
        s = cfg.scenario
        design = _design(s)
        model = _ins(s)
        n_totals = list(range(s.feasibility.n_total_min, s.feasibility.n_total_max + 1))

        rows, radii = [], {}
        for n_ca in s.anchors.counts():
            if s.feasibility.n_total_min < n_ca:
                raise InputError(
                    f"feasibility.n_total_min={s.feasibility.n_total_min} is below per_cluster={n_ca}"
                )
            try:
                d_com = localization.coverage_radius(design.cluster(n_ca), design.comm_range, design.rule)
                sweep = deployment.feasibility_sweep(n_totals, n_ca, d_com, model)
            except NoCoverage:
                d_com, sweep = None, [(n, None) for n in n_totals]
            radii[str(n_ca)] = d_com
            for n_total, side in sweep:
                status = "infeasible" if side is None else ("unbounded" if math.isinf(side) else "feasible")
                rows.append(
                    {
                        "per_cluster": n_ca,
                        "n_total": n_total,
                        "max_side_km": side if status == "feasible" else None,
                        "status": status,
                    }
                )

        writer = ArtifactWriter(out)
        writer.write_csv("feasibility.csv", rows, ["per_cluster", "n_total", "max_side_km", "status"])
        writer.write_json("feasibility.json", {"coverage_radius_m": radii, "config": cfg.data})

        by_status = {}
        for row in rows:
            key = (row["per_cluster"], row["status"])
            by_status[key] = by_status.get(key, 0) + 1
        summary = [
            {
                "per_cluster": n_ca,
                "d_com_m": radii[str(n_ca)],
                "feasible": by_status.get((n_ca, "feasible"), 0),
                "infeasible": by_status.get((n_ca, "infeasible"), 0),
                "max_side_km": max(
                    (r["max_side_km"] for r in rows if r["per_cluster"] == n_ca and r["max_side_km"] is not None),
                    default=None,
                ),
            }
            for n_ca in s.anchors.counts()
        ]
        if not renderer.render(summary, RuntimeConfig.get_output_format()):
            renderer.table(
                summary,
                "Coverage square versus anchors",
                [
                    {"name": "N_ca", "key": "per_cluster"},
                    {"name": "d_com (m)", "key": "d_com_m"},
                    {"name": "Feasible rows", "key": "feasible"},
                    {"name": "Infeasible rows", "key": "infeasible"},
                    {"name": "Largest side (km)", "key": "max_side_km"},
                ],
            )

    _guarded(run)


@app.command("simulate")
def cmd_simulate(
    config: Optional[Path] = CONFIG_OPTION,
    out: Path = OUT_OPTION,
    seed: Optional[str] = SEED_OPTION,
    step_m: Optional[float] = STEP_OPTION,
):
    """Seeded Monte Carlo voyages across each candidate deployment"""

    def run():
        cfg = _scenario(config, seed, step_m)
        s = cfg.scenario
        design = _design(s)
        setup = SimulationSetup(
            design=design,
            profile=resolve_profile(s.profile.name, s.profile.csv_path),
            params=RangeErrorParams(gamma=s.anchors.gamma),
            coverage_model=s.simulation.coverage_model,
            pin_center_error=s.simulation.pin_center_error,
        )
        model, leg = _ins(s), _leg(s)
        master_seed = s.simulation.master_seed

        trial_rows, sample_rows, summaries = [], [], {}
        for n_ca in s.anchors.counts():
            d_com = localization.coverage_radius(design.cluster(n_ca), design.comm_range, design.rule)
            plan = deployment.layout_clusters(s.region.side_km, s.anchors.n_total, n_ca, d_com)
            reports, summary = simulator.monte_carlo(
                plan, setup, s.simulation.path_kind, s.simulation.trials, model, leg, master_seed
            )
            for t, report in enumerate(reports):
                trial_rows.append(
                    {
                        "n_ca": n_ca,
                        "trial": t,
                        "seed": str(report.trial_seed),
                        "mean_error_var_m2": report.mean_error_var,
                    }
                )
                if s.simulation.per_sample:
                    sample_rows.extend(
                        {
                            "n_ca": n_ca,
                            "trial": t,
                            "s_m": p.s,
                            "error_var_m2": p.error_var,
                            "in_coverage": int(p.in_coverage),
                        }
                        for p in report.per_sample
                    )
            summaries[str(n_ca)] = {
                **summary.model_dump(),
                "nav_fraction_mean": math.fsum(r.nav_fraction for r in reports) / len(reports),
                "d_com_m": d_com,
                "d_h_m": plan.d_h,
            }

        writer = ArtifactWriter(out)
        writer.write_csv("trials.csv", trial_rows, ["n_ca", "trial", "seed", "mean_error_var_m2"])
        if s.simulation.per_sample:
            writer.write_csv(
                "samples.csv", sample_rows, ["n_ca", "trial", "s_m", "error_var_m2", "in_coverage"]
            )
        writer.write_json(
            "summary.json",
            {
                "master_seed": master_seed,
                "path_kind": s.simulation.path_kind,
                "summaries": summaries,
                "config": cfg.data,
            },
        )

        if not renderer.render(summaries, RuntimeConfig.get_output_format()):
            renderer.table(
                [{"n_ca": int(k), **v} for k, v in summaries.items()],
                f"Monte Carlo ({s.simulation.path_kind}, {s.simulation.trials} trials)",
                [
                    {"name": "N_ca", "key": "n_ca"},
                    {"name": "mean (m^2)", "key": "mean"},
                    {"name": "std (m^2)", "key": "std"},
                    {"name": "min (m^2)", "key": "min"},
                    {"name": "max (m^2)", "key": "max"},
                    {"name": "RMSE (m)", "key": "rmse_mean"},
                    {"name": "nav share", "key": "nav_fraction_mean"},
                ],
            )

    _guarded(run)


@app.command("fit")
def cmd_fit(
    input_csv: Path = typer.Argument(..., help="CSV with delta_p,variance_m2 columns"),
    out: Path = OUT_OPTION,
    distance_unit_m: float = typer.Option(
        1000.0, "--distance-unit-m", help="Meters per exponent distance unit"
    ),
):
    """Fit INS divergence coefficients to a measured error series"""

    def run():
        if distance_unit_m <= 0:
            raise InputError(f"--distance-unit-m must be positive, got {distance_unit_m}")
        series = ins_drift.load_error_series(input_csv)
        fit = ins_drift.fit_divergence(series, distance_unit_m=distance_unit_m)
        data = {**fit.to_dict(), "points": fit.points}
        ArtifactWriter(out).write_json("model.json", data)
        if not renderer.render(data, RuntimeConfig.get_output_format()):
            renderer.detail(
                data,
                "INS divergence fit",
                [
                    ("sigma0^2 (m^2)", "sigma0_sq"),
                    ("beta1 (m^2)", "beta1"),
                    ("beta2 (per unit)", "beta2"),
                    ("unit (m)", "distance_unit_m"),
                    ("residual", "residual"),
                ],
            )

    _guarded(run)


def main():
    app()


if __name__ == "__main__":
    main()
