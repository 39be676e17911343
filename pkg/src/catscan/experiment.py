"""Noise studies: slice perturbation, minimum search, Monte Carlo sweeps."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import CatSpec, make_cat
from .errors import InvalidArgument, RegionError
from .quadrature import QuadratureTable, build_table, default_phases, default_x_grid
from .tomography import ReconstructionConfig, extend_phases, reconstruct_at
from .wigner import WignerGrid, convention_factor

NOISE_MODELS = ("per_slice_multiplicative",)
SEARCH_MODES = ("global", "local")
REPORT_SCHEMA = "catscan/minimum-report/1"


def default_n_max(mean_photon: float) -> int:
    """Truncation for cat states: 50 covers nbar <= 5, 60 covers nbar <= 10.

    The thresholds carry a small slack so r = sqrt(5) and r = sqrt(10)
    (squared radii a few ulp above the integer) take the intended branch.
    """
    if mean_photon <= 5.0 + 1e-9:
        return 50
    if mean_photon <= 10.0 + 1e-9:
        return 60
    return 60 + 6 * math.ceil(mean_photon - 10.0)


@dataclass(frozen=True)
class NoiseSpec:
    magnitude: float
    runs: int
    seed: int
    model: str = "per_slice_multiplicative"

    def __post_init__(self):
        if not (0.0 <= self.magnitude < 1.0):
            raise InvalidArgument(
                f"noise magnitude must be in [0, 1), got {self.magnitude}"
            )
        if self.model not in NOISE_MODELS:
            raise InvalidArgument(f"unknown noise model {self.model!r}")
        if not (isinstance(self.runs, int) and self.runs >= 1):
            raise InvalidArgument(f"runs must be a positive integer, got {self.runs}")
        if not isinstance(self.seed, int):
            raise InvalidArgument(f"seed must be an integer, got {self.seed!r}")


def perturb(
    table: QuadratureTable,
    spec: NoiseSpec,
    run_index: int,
    renormalize: bool = False,
) -> QuadratureTable:
    """Scale each phase slice by (1 + eps), eps ~ U[-m, m].

    The draw for slice i of run r seeds a fresh generator from
    (seed, run, slice), so runs and slices are independent and order-free.
    With renormalize=True each scaled slice is rescaled back to unit area.
    """
    if run_index < 0:
        raise InvalidArgument(f"run_index must be >= 0, got {run_index}")
    density = table.density.copy()
    for i in range(table.phases.size):
        rng = np.random.default_rng([spec.seed, run_index, i])
        eps = rng.uniform(-spec.magnitude, spec.magnitude)
        density[i] *= 1.0 + eps
        if renormalize:
            area = np.trapezoid(density[i], table.x_grid)
            if area > 0.0:
                density[i] /= area
    return QuadratureTable(table.phases, table.x_grid, density)


@dataclass(frozen=True)
class MinimumReport:
    location: tuple[float, float]
    value: float
    mean: float
    stddev: float
    convention: str
    seed: int | None = None
    config: dict | None = field(default=None, repr=False)

    def to_json(self, path=None) -> str:
        payload = {
            "schema": REPORT_SCHEMA,
            "location": [self.location[0], self.location[1]],
            "value": self.value,
            "mean": self.mean,
            "stddev": self.stddev,
            "convention": self.convention,
            "seed": self.seed,
            "config": self.config,
        }
        text = json.dumps(payload, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, source) -> "MinimumReport":
        if hasattr(source, "read"):
            payload = json.load(source)
        else:
            text = str(source)
            if text.lstrip().startswith("{"):
                payload = json.loads(text)
            else:
                with open(text) as fh:
                    payload = json.load(fh)
        if payload.get("schema") != REPORT_SCHEMA:
            raise InvalidArgument(f"unknown report schema {payload.get('schema')!r}")
        return cls(
            location=(payload["location"][0], payload["location"][1]),
            value=payload["value"],
            mean=payload["mean"],
            stddev=payload["stddev"],
            convention=payload["convention"],
            seed=payload.get("seed"),
            config=payload.get("config"),
        )


def _parabola_refine(f0: float, f1: float, f2: float, h: float):
    """Vertex offset and value drop of the parabola through three points."""
    denom = f0 - 2.0 * f1 + f2
    if denom <= 0.0:
        return 0.0, 0.0
    shift = 0.5 * h * (f0 - f2) / denom
    drop = (f0 - f2) ** 2 / (8.0 * denom)
    return shift, drop


def find_minimum(
    target,
    search_region,
    mode: str = "global",
    near: tuple[float, float] | None = None,
    local_radius: float = 0.12,
    step: float = 0.005,
    convention: str = "phys",
) -> MinimumReport:
    """Locate a Wigner minimum by dense scan plus parabolic refinement.

    target is either a WignerGrid or a callable f(u_array, v_array) -> array
    in phys convention. mode "global" scans the whole region; mode "local"
    scans the window of local_radius around near. RegionError is raised when
    the scan minimum sits on the window boundary, since the quadratic
    refinement (and the minimum itself) is then unconstrained.
    """
    if mode not in SEARCH_MODES:
        raise InvalidArgument(f"unknown mode {mode!r}")
    if mode == "local" and near is None:
        raise InvalidArgument("mode 'local' requires a near=(u, v) point")
    if step > 0.01:
        raise InvalidArgument(f"scan step must be <= 0.01, got {step}")
    (re_lo, re_hi), (im_lo, im_hi) = search_region
    if not (re_hi > re_lo and im_hi >= im_lo):
        raise InvalidArgument(f"degenerate search region {search_region!r}")
    if mode == "local":
        re_lo = max(re_lo, near[0] - local_radius)
        re_hi = min(re_hi, near[0] + local_radius)
        im_lo = max(im_lo, near[1] - local_radius)
        im_hi = min(im_hi, near[1] + local_radius)
        if re_hi <= re_lo or im_hi < im_lo:
            raise InvalidArgument("local window does not intersect the region")

    if isinstance(target, WignerGrid):
        in_scale = convention_factor(target.convention)
        sel_u = (target.re_axis >= re_lo - 1e-12) & (target.re_axis <= re_hi + 1e-12)
        sel_v = (target.im_axis >= im_lo - 1e-12) & (target.im_axis <= im_hi + 1e-12)
        us = target.re_axis[sel_u]
        vs = target.im_axis[sel_v]
        if us.size < 3 or vs.size < 1:
            raise InvalidArgument("grid has too few nodes inside the region")
        vals = target.values[np.ix_(sel_u, sel_v)] / in_scale
        evaluate = None
    else:
        us = np.arange(re_lo, re_hi + step / 2.0, step)
        vs = np.arange(im_lo, im_hi + step / 2.0, step)
        uu = np.broadcast_to(us[:, None], (us.size, vs.size)).copy()
        vv = np.broadcast_to(vs[None, :], (us.size, vs.size)).copy()
        vals = np.asarray(target(uu, vv), dtype=np.float64)
        evaluate = target

    iu, iv = np.unravel_index(np.argmin(vals), vals.shape)
    on_edge = iu in (0, vals.shape[0] - 1) or (
        vs.size > 2 and iv in (0, vals.shape[1] - 1)
    )
    if on_edge:
        raise RegionError(
            f"scan minimum at ({us[iu]:.4f}, {vs[iv]:.4f}) lies on the "
            f"search boundary; enlarge the region or window"
        )
    u_star, v_star = float(us[iu]), float(vs[iv])
    f_best = float(vals[iu, iv])
    du, drop_u = _parabola_refine(
        vals[iu - 1, iv], vals[iu, iv], vals[iu + 1, iv], us[iu + 1] - us[iu]
    )
    u_star += du
    dv = drop_v = 0.0
    if vs.size > 2 and 0 < iv < vs.size - 1:
        dv, drop_v = _parabola_refine(
            vals[iu, iv - 1], vals[iu, iv], vals[iu, iv + 1], vs[iv + 1] - vs[iv]
        )
        v_star += dv
    if evaluate is not None:
        f_star = float(np.asarray(evaluate(np.array([u_star]), np.array([v_star])))[0])
        f_star = min(f_star, f_best)
    else:
        f_star = f_best - drop_u - drop_v
    out_scale = convention_factor(convention)
    value = f_star * out_scale
    return MinimumReport(
        location=(u_star, v_star),
        value=value,
        mean=value,
        stddev=0.0,
        convention=convention,
    )


def monte_carlo_study(
    cat: CatSpec,
    noise: NoiseSpec,
    recon_config: ReconstructionConfig | None = None,
    probe_point: tuple[float, float] | None = None,
    convention: str = "paper",
    n_max: int | None = None,
    phases=None,
    x_grid=None,
) -> MinimumReport:
    """Repeated reconstruction of W at a probe point under slice noise.

    The clean table is built once, each run perturbs it, extends the phases,
    and reconstructs at the probe. value holds the clean reconstruction;
    mean and stddev (ddof=1, zero for a single run) summarize the runs.
    """
    scale = convention_factor(convention)
    if n_max is None:
        n_max = default_n_max(cat.mean_photon)
    state = make_cat(cat, n_max)
    if phases is None:
        phases = default_phases()
    if x_grid is None:
        x_grid = default_x_grid(cat.mean_photon)
    if recon_config is None:
        recon_config = ReconstructionConfig.for_mean_photon(cat.mean_photon)
    if probe_point is None:
        clean_ext = extend_phases(build_table(state, phases, x_grid))
        report = find_minimum(
            lambda u, v: reconstruct_at(clean_ext, u, v, recon_config),
            ((0.0, 2.0 * cat.r), (0.0, 0.0)),
            step=0.01,
        )
        probe_point = report.location
    table = build_table(state, phases, x_grid)
    clean_ext = extend_phases(table)
    u0, v0 = float(probe_point[0]), float(probe_point[1])
    clean_value = float(reconstruct_at(clean_ext, u0, v0, recon_config)) * scale
    samples = np.empty(noise.runs)
    for run in range(noise.runs):
        noisy = extend_phases(perturb(table, noise, run))
        samples[run] = float(reconstruct_at(noisy, u0, v0, recon_config)) * scale
    stddev = float(np.std(samples, ddof=1)) if noise.runs > 1 else 0.0
    return MinimumReport(
        location=(u0, v0),
        value=clean_value,
        mean=float(np.mean(samples)),
        stddev=stddev,
        convention=convention,
        seed=noise.seed,
        config={
            "r": cat.r,
            "theta": cat.theta,
            "sign": cat.sign,
            "n_max": n_max,
            "phase_count": int(np.asarray(phases).size),
            "x_range": [float(np.min(x_grid)), float(np.max(x_grid))],
            "cutoff_kc": recon_config.cutoff_kc,
            "fit_model": recon_config.fit_model,
            "noise_magnitude": noise.magnitude,
            "noise_model": noise.model,
            "runs": noise.runs,
        },
    )
