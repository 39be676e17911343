"""Command-line front end: named, config-driven experiments emitting CSV/JSON."""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuit import BellState, CatSpec, bell_state, diagonal_basis_amplitudes, make_cat, make_ghz
from .errors import (
    CatscanError,
    InvalidArgument,
    RegionError,
    SymmetryViolation,
    TruncationError,
)
from .experiment import NoiseSpec, default_n_max, find_minimum, monte_carlo_study
from .fock import mean_photon_number, vacuum
from .quadrature import QuadratureTable, build_table, default_phases, default_x_grid
from .tomography import (
    ReconstructionConfig,
    extend_phases,
    filter_kernel,
    filter_kernel_numeric,
    reconstruct_at,
)
from .wigner import (
    PAPER_SCALE,
    calibrate_display_scale,
    cat_wigner_terms,
    convention_factor,
    evaluate_grid,
    wigner_displaced_parity,
    wigner_superposition,
)

EXIT_CONFIG = 2
EXIT_TRUNCATION = 3
EXIT_SYMMETRY = 4
EXIT_REGION = 5
EXIT_OTHER = 6

_BOOLS = {"true": True, "false": False, "yes": True, "no": False}


@dataclass(frozen=True)
class ExperimentConfig:
    cat: CatSpec
    n_max: int
    phase_count: int
    x_min: float
    x_max: float
    x_step: float
    recon: ReconstructionConfig
    noise: NoiseSpec | None
    probe: tuple[float, float] | None
    search_region: tuple[tuple[float, float], tuple[float, float]]
    wigner_range: float
    wigner_step: float
    out_prefix: str

    def __post_init__(self):
        if not (self.x_step > 0.0 and self.x_max > self.x_min):
            raise InvalidArgument("x grid spec requires x_max > x_min and x_step > 0")
        if self.phase_count < 2:
            raise InvalidArgument(f"phase_count must be >= 2, got {self.phase_count}")
        if self.n_max < 1:
            raise InvalidArgument(f"n_max must be >= 1, got {self.n_max}")
        if not (self.wigner_step > 0.0 and self.wigner_range > 0.0):
            raise InvalidArgument("wigner grid spec requires positive range and step")

    def x_grid(self) -> np.ndarray:
        lo = round(self.x_min / self.x_step)
        hi = round(self.x_max / self.x_step)
        return np.arange(lo, hi + 1) * self.x_step

    def phases(self) -> np.ndarray:
        return default_phases(self.phase_count)


_SCHEMA = {
    "r": float,
    "theta": float,
    "sign": str,
    "n_max": int,
    "phase_count": int,
    "x_min": float,
    "x_max": float,
    "x_step": float,
    "cutoff_kc": float,
    "fit_model": str,
    "phase_extension": str,
    "noise_magnitude": float,
    "noise_runs": int,
    "noise_seed": int,
    "probe_re": float,
    "probe_im": float,
    "search_re_min": float,
    "search_re_max": float,
    "search_im_min": float,
    "search_im_max": float,
    "wigner_range": float,
    "wigner_step": float,
    "out_prefix": str,
}


def parse_config(path) -> ExperimentConfig:
    """Parse a key = value config file (one pair per line, # comments)."""
    raw: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidArgument(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise InvalidArgument(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SCHEMA:
            raise InvalidArgument(f"{path}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise InvalidArgument(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value
    vals: dict = {}
    for key, value in raw.items():
        caster = _SCHEMA[key]
        try:
            vals[key] = caster(value)
        except ValueError as exc:
            raise InvalidArgument(f"{path}: key {key!r}: {exc}") from exc
    if "r" not in vals or "theta" not in vals:
        raise InvalidArgument(f"{path}: config must set r and theta")
    cat = CatSpec(vals["r"], vals["theta"], vals.get("sign", "plus"))
    n_max = vals.get("n_max", default_n_max(cat.mean_photon))
    default_grid = default_x_grid(cat.mean_photon)
    recon_kwargs = {}
    if "fit_model" in vals:
        recon_kwargs["fit_model"] = vals["fit_model"]
    if "phase_extension" in vals:
        recon_kwargs["phase_extension"] = vals["phase_extension"]
    if "cutoff_kc" in vals:
        recon = ReconstructionConfig(cutoff_kc=vals["cutoff_kc"], **recon_kwargs)
    else:
        recon = ReconstructionConfig.for_mean_photon(cat.mean_photon, **recon_kwargs)
    noise = None
    if "noise_magnitude" in vals:
        noise = NoiseSpec(
            magnitude=vals["noise_magnitude"],
            runs=vals.get("noise_runs", 50),
            seed=vals.get("noise_seed", 0),
        )
    probe = None
    if "probe_re" in vals or "probe_im" in vals:
        probe = (vals.get("probe_re", 0.0), vals.get("probe_im", 0.0))
    region = (
        (vals.get("search_re_min", 0.02), vals.get("search_re_max", 2.0 * cat.r)),
        (vals.get("search_im_min", 0.0), vals.get("search_im_max", 0.0)),
    )
    return ExperimentConfig(
        cat=cat,
        n_max=n_max,
        phase_count=vals.get("phase_count", 11),
        x_min=vals.get("x_min", float(default_grid[0])),
        x_max=vals.get("x_max", float(default_grid[-1])),
        x_step=vals.get("x_step", 0.01),
        recon=recon,
        noise=noise,
        probe=probe,
        search_region=region,
        wigner_range=vals.get("wigner_range", float(math.ceil(cat.r + 3.0))),
        wigner_step=vals.get("wigner_step", 0.05),
        out_prefix=vals.get("out_prefix", "experiment"),
    )


def _out_path(args, suffix: str) -> Path:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / f"{args.config_data.out_prefix}{suffix}"


def _cmd_cat_state(args) -> int:
    cfg = args.config_data
    state = make_cat(cfg.cat, cfg.n_max)
    print(f"r = {cfg.cat.r:.12g}")
    print(f"theta = {cfg.cat.theta:.12g}")
    print(f"sign = {cfg.cat.sign}")
    print(f"norm = {state.norm():.15g}")
    print(f"mean_photon = {mean_photon_number(state):.15g}")
    print("n,re,im")
    for n, amp in enumerate(state.amplitudes):
        print(f"{n},{float(amp.real)!r},{float(amp.imag)!r}")
    return 0


def _cmd_ghz(args) -> int:
    which = BellState.from_label(args.bell_input)
    ghz = make_ghz(which)
    print(f"input = {which.value}")
    print("three-photon state (H/V basis):")
    for label in ghz.basis_labels():
        amp = ghz.amplitude(label)
        if abs(amp) > 1e-12:
            print(f"  |{label}> : {amp.real:+.6f}{amp.imag:+.6f}j")
    diag = diagonal_basis_amplitudes(ghz, 2)
    print("photon 3 in the 45/135 basis (third slot: H=45, V=135):")
    ok = True
    for label in diag.basis_labels():
        amp = diag.amplitude(label)
        if abs(amp) > 1e-12:
            shown = label[:2] + ("45" if label[2] == "H" else "135")
            print(f"  |{shown}> : {amp.real:+.6f}{amp.imag:+.6f}j")
            # perfect correlation: photons 1 and 2 always share a polarization
            if label[:2] not in ("HH", "VV"):
                ok = False
    pair = bell_state(which)
    print(f"input pair |{which.value}> norm = {pair.norm():.12g}")
    print(f"correlation check: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else EXIT_OTHER


def _cmd_quadrature(args) -> int:
    cfg = args.config_data
    state = make_cat(cfg.cat, cfg.n_max)
    table = build_table(state, cfg.phases(), cfg.x_grid())
    path = _out_path(args, "_quadrature.csv")
    table.to_csv(path)
    print(f"wrote {path} ({table.phases.size} phases x {table.x_grid.size} points)")
    return 0


def _cmd_wigner_oracle(args) -> int:
    cfg = args.config_data
    half = cfg.wigner_range
    count = round(2.0 * half / cfg.wigner_step)
    axis = np.linspace(-half, half, count + 1)
    grid = evaluate_grid(cat_wigner_terms(cfg.cat), axis, axis, args.convention)
    path = _out_path(args, "_wigner.csv")
    grid.to_csv(path)
    print(f"wrote {path} ({axis.size} x {axis.size}, convention {grid.convention})")
    return 0


def _cmd_reconstruct(args) -> int:
    cfg = args.config_data
    state = make_cat(cfg.cat, cfg.n_max)
    table = extend_phases(build_table(state, cfg.phases(), cfg.x_grid()))
    report = find_minimum(
        lambda u, v: reconstruct_at(table, u, v, cfg.recon),
        cfg.search_region,
        convention=args.convention,
    )
    path = _out_path(args, "_minimum.json")
    report.to_json(path)
    print(f"wrote {path}")
    print(
        f"minimum at ({report.location[0]:.4f}, {report.location[1]:.4f}): "
        f"{report.value:.6f} ({report.convention})"
    )
    return 0


def _cmd_noise_study(args) -> int:
    cfg = args.config_data
    if cfg.noise is None:
        raise InvalidArgument("noise-study requires noise_magnitude in the config")
    noise = cfg.noise
    if args.seed is not None:
        noise = NoiseSpec(noise.magnitude, noise.runs, args.seed, noise.model)
    report = monte_carlo_study(
        cfg.cat,
        noise,
        recon_config=cfg.recon,
        probe_point=cfg.probe,
        convention=args.convention,
        n_max=cfg.n_max,
        phases=cfg.phases(),
        x_grid=cfg.x_grid(),
    )
    path = _out_path(args, "_noise.json")
    report.to_json(path)
    print(f"wrote {path}")
    print(
        f"clean {report.value:.6f}, mean {report.mean:.6f}, "
        f"stddev {report.stddev:.6f} ({report.convention}, {noise.runs} runs)"
    )
    return 0


def _cmd_verify(args) -> int:
    checks: list[tuple[str, bool, str]] = []
    rng = np.random.default_rng(20250814 if args.seed is None else args.seed)

    spec = CatSpec(math.sqrt(5.0), 1.11)
    terms = cat_wigner_terms(spec)
    # headroom for displacements up to |alpha| ~ 3.5 before parity readout
    state = make_cat(spec, 70)
    pts = rng.uniform(-2.5, 2.5, size=(20, 2))
    worst = 0.0
    for u, v in pts:
        a = wigner_superposition(terms, u + 1j * v)
        b = wigner_displaced_parity(state, u + 1j * v)
        worst = max(worst, abs(a - b))
    checks.append(("closed form vs displaced parity (20 pts)", worst < 1e-6, f"max diff {worst:.2e}"))

    kc = 12.0
    worst = 0.0
    for xi in np.linspace(-3.0, 3.0, 20):
        worst = max(worst, abs(filter_kernel(xi, kc) - filter_kernel_numeric(xi, kc)))
    checks.append(("filter kernel closed vs numeric (20 pts)", worst < 1e-8, f"max diff {worst:.2e}"))

    vac = vacuum(20)
    x = np.linspace(-6.0, 6.0, 1201)
    table = extend_phases(build_table(vac, default_phases(), x))
    peak = reconstruct_at(table, 0.0, 0.0, ReconstructionConfig(cutoff_kc=8.0))
    dev = abs(peak / (2.0 / math.pi) - 1.0)
    checks.append(("vacuum reconstruction peak vs 2/pi", dev < 0.01, f"rel dev {dev:.2e}"))

    cal = calibrate_display_scale()
    worst = max(abs(f / PAPER_SCALE - 1.0) for f in cal["factors"].values())
    detail = (
        f"fitted {cal['fitted']:.5f} ({cal['deviation_from_2pi']:+.3%} vs 2 pi), "
        f"worst anchor {worst:.3%}"
    )
    checks.append(("display-scale factor consistent with 2 pi", worst < 0.02, detail))

    failed = 0
    for name, ok, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        if not ok:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 0 if failed == 0 else EXIT_OTHER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catscan",
        description="Conditional cat-state generation, homodyne tomography, noise studies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, needs_config=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func, needs_config=needs_config)
        if needs_config:
            p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", default=".", help="output directory (default: cwd)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument(
            "--convention",
            choices=["phys", "paper"],
            default="phys",
            help="Wigner normalization for emitted values",
        )
        return p

    add("cat-state", _cmd_cat_state, "print cat Fock amplitudes, norm, mean photon number")
    ghz = add("ghz", _cmd_ghz, "print the three-photon state and correlation checks", needs_config=False)
    ghz.add_argument("bell_input", help="phi-plus | phi-minus | psi-plus | psi-minus")
    add("quadrature", _cmd_quadrature, "emit the quadrature distribution CSV")
    add("wigner-oracle", _cmd_wigner_oracle, "emit a dense closed-form Wigner CSV")
    p_rec = add("reconstruct", _cmd_reconstruct, "clean tomography plus minimum JSON")
    p_rec.set_defaults(convention="paper")
    p_noise = add("noise-study", _cmd_noise_study, "Monte Carlo noise JSON")
    p_noise.set_defaults(convention="paper")
    add("verify", _cmd_verify, "run oracle cross-checks and the scale calibration", needs_config=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "needs_config", False):
            args.config_data = parse_config(args.config)
        convention_factor(args.convention)
        return args.func(args)
    except InvalidArgument as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TruncationError as exc:
        print(f"error: truncation: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except SymmetryViolation as exc:
        print(f"error: symmetry violation: {exc}", file=sys.stderr)
        return EXIT_SYMMETRY
    except RegionError as exc:
        print(f"error: search region: {exc}", file=sys.stderr)
        return EXIT_REGION
    except CatscanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
