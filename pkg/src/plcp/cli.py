"""Batch experiment runner.

Usage: ``plcp <experiment> [--config FILE] [--key value ...]``

Config files are flat ``key=value`` text (one pair per line, ``#`` comments);
command-line ``--key value`` flags override file values. Every output file
embeds the fully resolved configuration as a ``# key=value`` header, so any
experiment can be re-run byte-identically from its own artifacts.

Exit codes: 0 success, 1 usage/config error, 2 declared tolerance violated,
3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from . import analytics
from .analytics import (
    UnsupportedAnalyticsError,
    cell_length_cdf,
    facet_densities,
    gaussian_radial,
    laplace_functional,
    laplace_functional_radial,
    laplace_palm,
    laplace_palm_radial,
    nn_cdf,
    nn_cdf_palm,
    path_loss_radial,
    to_planar,
)
from .estimators import (
    dkw_epsilon,
    empirical_cell_law,
    empirical_facet_densities,
    empirical_laplace,
    empirical_nn_cdf,
    empirical_nn_cdf_palm,
    empirical_width_sweep,
    interpolated_cdf,
    ks_distance,
)
from .quadrature import QuadratureError, QuadratureSpec
from .rng import GENERATOR_NAME, SeedSpec
from .sampler import (
    ModelParams,
    default_buffer,
    realization_sections,
    sample_stationary,
)
from .tessellation import UnboundedCellError, build_voronoi, gqp_census

EXPERIMENTS = (
    "sample",
    "nn-cdf",
    "nn-cdf-palm",
    "laplace",
    "facets",
    "typical-cell",
    "gqp",
    "render",
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text}")


def _float_list(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(x) for x in text.split(","))


@dataclass
class ExperimentConfig:
    experiment: str
    lambda_l: float = 1.0
    mu: float = 1.0
    orientation: str = "isotropic"
    obs_radius: float = 0.0  # 0 means experiment-specific default
    buffer: float = -1.0  # negative means the default heuristic
    grid_min: float = 0.0
    grid_max: float = 3.0
    grid_count: int = 60
    n: int = 1000
    master_seed: int = 12345
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    trunc_tail: float = 1e-10
    max_subdivisions: int = 4000
    counting_radius: float = 0.0  # 0 means the minus-sampling default
    laplace_f: str = "gaussian"
    alpha: float = 4.0
    rho0: float = 0.1
    support_radius: float = 0.0  # 0 means the family default
    width_sweep: tuple[float, ...] = ()
    width_sweep_n: int = 300
    figures: bool = True
    out_dir: str = "."

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"experiment must be one of {', '.join(EXPERIMENTS)}; got {self.experiment!r}"
            )
        for key in ("lambda_l", "mu"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be positive")
        if self.orientation not in ("isotropic", "manhattan"):
            raise ConfigError("orientation must be isotropic or manhattan")
        for key in ("grid_count", "n", "width_sweep_n", "max_subdivisions"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be a positive integer")
        for key in ("abs_tol", "rel_tol", "trunc_tail"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be positive")
        if self.grid_max <= self.grid_min:
            raise ConfigError("grid_max must exceed grid_min")
        if self.grid_min < 0:
            raise ConfigError("grid_min must be nonnegative")

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.lambda_l, self.mu, self.orientation)

    @property
    def quad(self) -> QuadratureSpec:
        return QuadratureSpec(
            self.abs_tol, self.rel_tol, self.max_subdivisions, self.trunc_tail
        )

    @property
    def seed(self) -> SeedSpec:
        return SeedSpec(self.master_seed)


_CONVERTERS = {
    str: str,
    float: float,
    int: int,
    bool: _bool,
    tuple[float, ...]: _float_list,
}


def _field_types() -> dict[str, type]:
    hints = {}
    for f in fields(ExperimentConfig):
        hints[f.name] = f.type if not isinstance(f.type, str) else eval(f.type)  # noqa: S307
    return hints


_FIELD_TYPES = _field_types()


def parse_config(text: str, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Parse flat key=value config text, then apply flag overrides (flags win)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key] = val
    if overrides:
        values.update(overrides)
    if "experiment" not in values:
        raise ConfigError("missing required key: experiment")
    kwargs = {}
    for key, val in values.items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key: {key}")
        try:
            kwargs[key] = _CONVERTERS[_FIELD_TYPES[key]](val)
        except ValueError as exc:
            raise ConfigError(f"malformed value for {key}: {val!r} ({exc})") from exc
    config = ExperimentConfig(**kwargs)
    config.validate()
    return config


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def metadata_lines(config: ExperimentConfig) -> str:
    rows = [f"# plcp={__version__}", f"# generator={GENERATOR_NAME}"]
    for f in fields(ExperimentConfig):
        rows.append(f"# {f.name}={_format_value(getattr(config, f.name))}")
    return "\n".join(rows) + "\n"


def config_from_metadata(path, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Rebuild the resolved config from an artifact's metadata header.

    Accepts delimited artifacts ("# key=value" header lines), JSON artifacts
    (the "_metadata" object), and SVG artifacts (header inside the leading
    XML comment).
    """
    values: dict[str, str] = {}
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        meta = json.loads(text).get("_metadata", {})
        values = {k: str(v) for k, v in meta.items() if k in _FIELD_TYPES}
    else:
        for raw in text.splitlines():
            raw = raw.strip()
            if raw in ("<!--", "-->") or not raw:
                continue
            if not raw.startswith("#"):
                break
            body = raw[1:].strip()
            if "=" not in body:
                continue
            key, val = body.split("=", 1)
            if key.strip() in _FIELD_TYPES:
                values[key.strip()] = val.strip()
    if overrides:
        values.update(overrides)
    text = "\n".join(f"{k}={v}" for k, v in values.items())
    return parse_config(text)


def _metadata_dict(config: ExperimentConfig) -> dict:
    meta = {"plcp": __version__, "generator": GENERATOR_NAME}
    for f in fields(ExperimentConfig):
        meta[f.name] = _format_value(getattr(config, f.name))
    return meta


def _write_json(path: Path, config: ExperimentConfig, payload: dict):
    doc = {"_metadata": _metadata_dict(config), **payload}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _resolved_obs_radius(config: ExperimentConfig, support: float | None = None) -> float:
    if config.obs_radius > 0:
        return config.obs_radius
    if config.experiment in ("nn-cdf", "nn-cdf-palm"):
        return config.grid_max
    if config.experiment == "facets":
        return 10.0
    if config.experiment == "typical-cell":
        return 4.0 / config.lambda_l
    if config.experiment == "laplace" and support is not None:
        return support
    return 5.0


def _resolved_buffer(config: ExperimentConfig, r_max_query: float = 0.0) -> float:
    if config.buffer >= 0:
        return config.buffer
    return default_buffer(config.params, r_max_query)


def _laplace_function(config: ExperimentConfig):
    if config.laplace_f == "gaussian":
        f = gaussian_radial()
        if config.support_radius > 0:
            f = analytics.RadialFunction(f.evaluator, config.support_radius)
        return f
    if config.laplace_f == "pathloss":
        support = config.support_radius if config.support_radius > 0 else 10.0
        return path_loss_radial(alpha=config.alpha, rho0=config.rho0, support_radius=support)
    raise ConfigError(f"laplace_f must be gaussian or pathloss, got {config.laplace_f!r}")


# --- experiments -------------------------------------------------------------

def _run_sample(config: ExperimentConfig, out: Path) -> int:
    obs = _resolved_obs_radius(config)
    real = sample_stationary(config.params, obs, _resolved_buffer(config), config.seed)
    (out / "realization.csv").write_text(
        metadata_lines(config) + realization_sections(real)
    )
    if config.figures:
        from .render import save_realization_figure

        save_realization_figure(out / "realization.png", real)
    return EXIT_OK


def _run_nn_cdf(config: ExperimentConfig, out: Path, palm: bool) -> int:
    grid = np.linspace(config.grid_min, config.grid_max, config.grid_count)
    analytic_fn = nn_cdf_palm if palm else nn_cdf
    empirical_fn = empirical_nn_cdf_palm if palm else empirical_nn_cdf
    params, quad = config.params, config.quad
    ecdf = empirical_fn(params, config.grid_max, config.n, config.seed)
    analytic = np.array([analytic_fn(float(r), params, quad) for r in grid])
    empirical = ecdf.evaluate(grid)
    gap = np.abs(empirical - analytic)
    smooth_cdf = interpolated_cdf(
        lambda r: analytic_fn(r, params, quad), float(ecdf.values.max()) + 1e-9
    )
    ks = ks_distance(ecdf, smooth_cdf)
    threshold = 2.0 * dkw_epsilon(config.n)
    name = "nn_cdf_palm" if palm else "nn_cdf"
    rows = [metadata_lines(config).rstrip("\n"), "r,F_empirical,F_analytic,abs_gap"]
    for r, fe, fa, g in zip(grid, empirical, analytic, gap):
        rows.append(f"{float(r)!r},{float(fe)!r},{float(fa)!r},{float(g)!r}")
    (out / f"{name}.csv").write_text("\n".join(rows) + "\n")
    _write_json(
        out / f"{name}.json",
        config,
        {
            "ks_statistic": ks,
            "ks_threshold": threshold,
            "max_abs_gap": float(gap.max()),
            "n": config.n,
            "passed": ks <= threshold,
        },
    )
    if config.figures:
        from .render import save_curve_figure

        save_curve_figure(
            out / f"{name}.png",
            grid,
            {"analytic": analytic, "empirical": empirical},
            "r",
            "F(r)",
            f"{name} (lambda_l={params.lambda_l}, mu={params.mu})",
        )
    return EXIT_OK if ks <= threshold else EXIT_TOLERANCE


def _run_laplace(config: ExperimentConfig, out: Path) -> int:
    f = _laplace_function(config)
    params, quad = config.params, config.quad
    planar = to_planar(f)
    obs = _resolved_obs_radius(config, support=f.support_radius)
    quad_radial = laplace_functional_radial(f, params, quad)
    quad_planar = laplace_functional(planar, params, quad)
    quad_palm = laplace_palm_radial(f, params, quad)
    mc = empirical_laplace(planar, params, obs, config.n, config.seed)
    mc_palm = empirical_laplace(
        planar, params, obs, config.n, config.seed.substream(1), palm=True
    )
    route_gap = abs(quad_radial - quad_planar) / quad_radial
    ok = (
        abs(mc.mean - quad_radial) <= 3.0 * mc.stderr
        and abs(mc_palm.mean - quad_palm) <= 3.0 * mc_palm.stderr
        and route_gap <= 10.0 * max(quad.rel_tol, quad.abs_tol)
    )
    _write_json(
        out / "laplace.json",
        config,
        {
            "f": config.laplace_f,
            "quadrature_radial": quad_radial,
            "quadrature_planar": quad_planar,
            "quadrature_palm": quad_palm,
            "monte_carlo": {"mean": mc.mean, "stderr": mc.stderr, "n": mc.n},
            "monte_carlo_palm": {
                "mean": mc_palm.mean,
                "stderr": mc_palm.stderr,
                "n": mc_palm.n,
            },
            "radial_vs_planar_rel_gap": route_gap,
            "passed": ok,
        },
    )
    if config.figures:
        from .render import save_curve_figure

        labels = ["quad analytic", "MC empirical", "palm quad analytic", "palm MC empirical"]
        vals = [quad_radial, mc.mean, quad_palm, mc_palm.mean]
        save_curve_figure(
            out / "laplace.png",
            np.arange(len(vals)),
            {"analytic": vals},
            "case " + " / ".join(labels),
            "L",
            f"Laplace functional ({config.laplace_f})",
        )
    return EXIT_OK if ok else EXIT_TOLERANCE


def _run_facets(config: ExperimentConfig, out: Path) -> int:
    params = config.params
    obs = _resolved_obs_radius(config)
    counting = config.counting_radius if config.counting_radius > 0 else None
    est = empirical_facet_densities(
        params,
        config.n,
        config.seed,
        obs_radius=obs,
        buffer=None if config.buffer < 0 else config.buffer,
        counting_radius=counting,
    )
    expected = facet_densities(params)
    rel_errors = [
        abs(e.mean - target) / target
        for e, target in zip((est.vertices, est.edges, est.cells), expected)
    ]
    euler_ok = abs(est.euler.mean) <= 3.0 * est.euler.stderr
    ok = max(rel_errors) <= 0.03 and euler_ok
    _write_json(
        out / "facets.json",
        config,
        {
            "expected": list(expected),
            "estimated": {
                "vertices": {"mean": est.vertices.mean, "stderr": est.vertices.stderr},
                "edges": {"mean": est.edges.mean, "stderr": est.edges.stderr},
                "cells": {"mean": est.cells.mean, "stderr": est.cells.stderr},
            },
            "euler": {"mean": est.euler.mean, "stderr": est.euler.stderr},
            "rel_errors": rel_errors,
            "passed": ok,
        },
    )
    return EXIT_OK if ok else EXIT_TOLERANCE


def _run_typical_cell(config: ExperimentConfig, out: Path) -> int:
    params = config.params
    obs = _resolved_obs_radius(config)
    law = empirical_cell_law(params, config.n, config.seed, obs_radius=obs)
    lam = params.lambda_l
    erlang = lambda l: cell_length_cdf(l, lam)  # noqa: E731
    expo = lambda l: 1.0 - math.exp(-2.0 * lam * l)  # noqa: E731
    ks_total = ks_distance(law.total_length, np.vectorize(erlang))
    ks_plus = ks_distance(law.s_plus, np.vectorize(expo))
    threshold = 2.0 * dkw_epsilon(config.n)
    mean_total = float(np.mean(law.total_length.values))
    stderr_total = float(np.std(law.total_length.values, ddof=1) / math.sqrt(config.n))
    mean_ok = abs(mean_total - 1.0 / lam) <= 3.0 * stderr_total
    sweep = {}
    sweep_ok = True
    if config.width_sweep:
        est = empirical_width_sweep(
            params, list(config.width_sweep), config.width_sweep_n,
            config.seed.substream(2), obs_radius=obs,
        )
        means = [est[mu].mean for mu in sorted(est)]
        sweep_ok = all(a > b for a, b in zip(means, means[1:]))
        sweep = {
            str(mu): {"mean": est[mu].mean, "stderr": est[mu].stderr}
            for mu in sorted(est)
        }
    ok = ks_total <= threshold and ks_plus <= threshold and mean_ok and sweep_ok
    grid = np.linspace(0.0, float(law.total_length.values.max()), config.grid_count)
    rows = [metadata_lines(config).rstrip("\n"), "l,F_empirical,F_analytic,abs_gap"]
    for l in grid:
        fe = float(law.total_length.evaluate(l))
        fa = erlang(float(l))
        rows.append(f"{float(l)!r},{fe!r},{fa!r},{abs(fe - fa)!r}")
    (out / "typical_cell.csv").write_text("\n".join(rows) + "\n")
    _write_json(
        out / "typical_cell.json",
        config,
        {
            "ks_total_vs_erlang": ks_total,
            "ks_splus_vs_exponential": ks_plus,
            "ks_threshold": threshold,
            "mean_total_length": mean_total,
            "mean_total_stderr": stderr_total,
            "width": {"mean": law.width.mean, "stderr": law.width.stderr},
            "width_sweep": sweep,
            "passed": ok,
        },
    )
    if config.figures:
        from .render import save_curve_figure

        fe = law.total_length.evaluate(grid)
        fa = np.array([erlang(float(l)) for l in grid])
        save_curve_figure(
            out / "typical_cell.png",
            grid,
            {"analytic Erlang(2, 2 lambda_l)": fa, "empirical |S|": fe},
            "l",
            "F(l)",
            f"typical cell length (mu={params.mu})",
        )
    return EXIT_OK if ok else EXIT_TOLERANCE


def _run_gqp(config: ExperimentConfig, out: Path) -> int:
    params = config.params
    obs = _resolved_obs_radius(config)
    buffer = _resolved_buffer(config)
    total = 0
    for i in range(config.n):
        real = sample_stationary(params, obs, buffer, config.seed.replication(i))
        total += gqp_census(real)
    _write_json(
        out / "gqp.json",
        config,
        {"replications": config.n, "cocircular_quadruples": total, "passed": total == 0},
    )
    return EXIT_OK if total == 0 else EXIT_TOLERANCE


def _run_render(config: ExperimentConfig, out: Path) -> int:
    from .render import realization_svg

    obs = _resolved_obs_radius(config)
    real = sample_stationary(config.params, obs, _resolved_buffer(config), config.seed)
    tess = build_voronoi(real) if real.n_points else None
    header = metadata_lines(config)
    svg = realization_svg(real, tess)
    comment = "<!--\n" + header + "-->\n"
    (out / "realization.svg").write_text(comment + svg)
    if config.figures:
        from .render import save_realization_figure

        save_realization_figure(out / "realization_figure.png", real, tess)
    return EXIT_OK


def run(config: ExperimentConfig) -> int:
    """Execute one experiment; writes artifacts and returns the exit code."""
    config.validate()
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if config.experiment == "sample":
        return _run_sample(config, out)
    if config.experiment == "nn-cdf":
        return _run_nn_cdf(config, out, palm=False)
    if config.experiment == "nn-cdf-palm":
        return _run_nn_cdf(config, out, palm=True)
    if config.experiment == "laplace":
        return _run_laplace(config, out)
    if config.experiment == "facets":
        return _run_facets(config, out)
    if config.experiment == "typical-cell":
        return _run_typical_cell(config, out)
    if config.experiment == "gqp":
        return _run_gqp(config, out)
    if config.experiment == "render":
        return _run_render(config, out)
    raise ConfigError(f"unknown experiment {config.experiment!r}")


def _parse_flag_overrides(extra: list[str]) -> dict[str, str]:
    overrides: dict[str, str] = {}
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument: {token!r}")
        key = token[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"flag --{key} needs a value")
            val = extra[i + 1]
            i += 1
        overrides[key.replace("-", "_")] = val
        i += 1
    return overrides


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plcp",
        description="Poisson line Cox process experiments",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="flat key=value config file")
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = _parse_flag_overrides(extra)
        overrides["experiment"] = args.experiment
        text = Path(args.config).read_text() if args.config else ""
        config = parse_config(text, overrides)
        return run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnboundedCellError, QuadratureError, UnsupportedAnalyticsError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
