"""Filtered back-projection of Wigner functions from quadrature slices.

W(u, v) = (1 / (4 pi^2)) int_0^pi dphi int dx p(x, phi) K(x - u cos(phi) - v sin(phi))
with the cutoff kernel K(xi) = int_{-kc}^{kc} |k| exp(i k xi) dk. The overall
constant is fixed by vacuum calibration: reconstructing the vacuum table must
return the 2/pi peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidArgument, SymmetryViolation
from .quadrature import QuadratureTable, quadrature_distribution, quadrature_wavefunctions
from .wigner import WignerGrid

PHASE_EXTENSIONS = ("conjugation_symmetry", "none")
FIT_MODELS = ("cubic_spline", "none")
QUAD_RULES = ("trapezoid",)

_POINT_CHUNK = 2048


@dataclass(frozen=True)
class ReconstructionConfig:
    cutoff_kc: float
    phase_extension: str = "conjugation_symmetry"
    fit_model: str = "cubic_spline"
    quad_rule: str = "trapezoid"

    def __post_init__(self):
        if not (self.cutoff_kc > 0.0 and math.isfinite(self.cutoff_kc)):
            raise InvalidArgument(f"cutoff_kc must be positive, got {self.cutoff_kc}")
        if self.phase_extension not in PHASE_EXTENSIONS:
            raise InvalidArgument(f"unknown phase_extension {self.phase_extension!r}")
        if self.fit_model not in FIT_MODELS:
            raise InvalidArgument(f"unknown fit_model {self.fit_model!r}")
        if self.quad_rule not in QUAD_RULES:
            raise InvalidArgument(f"unknown quad_rule {self.quad_rule!r}")

    @classmethod
    def for_mean_photon(cls, mean_photon: float, **kwargs) -> "ReconstructionConfig":
        """Cutoff scaled to the state size: kc = 2 (2 sqrt(nbar) + 4)."""
        if mean_photon < 0.0:
            raise InvalidArgument(f"mean photon number must be >= 0, got {mean_photon}")
        return cls(cutoff_kc=2.0 * (2.0 * math.sqrt(mean_photon) + 4.0), **kwargs)


def filter_kernel(xi, kc: float):
    """Closed form of int_{-kc}^{kc} |k| exp(i k xi) dk.

    K(xi) = (2/xi^2)(cos(kc xi) - 1) + (2 kc / xi) sin(kc xi); the series
    kc^2 (1 - (kc xi)^2 / 4) takes over for |kc xi| < 1e-4 where the closed
    form loses digits to cancellation.
    """
    if not (kc > 0.0 and math.isfinite(kc)):
        raise InvalidArgument(f"cutoff kc must be positive, got {kc}")
    xi_arr = np.asarray(xi, dtype=np.float64)
    t = kc * xi_arr
    small = np.abs(t) < 1e-4
    xi_safe = np.where(small, 1.0, xi_arr)
    out = (2.0 / xi_safe**2) * (np.cos(kc * xi_safe) - 1.0) + (
        2.0 * kc / xi_safe
    ) * np.sin(kc * xi_safe)
    out = np.where(small, kc**2 * (1.0 - t**2 / 4.0), out)
    if out.ndim == 0:
        return float(out)
    return out


def filter_kernel_numeric(xi: float, kc: float) -> float:
    """Direct quadrature of the kernel integral, for cross-checking."""
    from scipy.integrate import quad

    val, _ = quad(lambda k: 2.0 * k * math.cos(k * xi), 0.0, kc, limit=400)
    return val


def extend_phases(
    table: QuadratureTable,
    verify_state=None,
    verify_tol: float = 1e-6,
) -> QuadratureTable:
    """Extend a [0, pi/2] table to [0, pi] via p(x, pi - phi) = p(-x, phi).

    The identity holds for states whose Fock amplitudes can be chosen real
    (conjugation symmetry). When verify_state is given, each extended slice
    is checked against a direct computation and SymmetryViolation is raised
    past verify_tol.
    """
    phases = table.phases
    if phases[0] < -1e-12 or phases[-1] > math.pi / 2 + 1e-9:
        raise InvalidArgument(
            f"input phases must lie in [0, pi/2], got range "
            f"[{phases[0]:.6f}, {phases[-1]:.6f}]"
        )
    new_phases = []
    new_rows = []
    for i in range(phases.size):
        new_phases.append(phases[i])
        new_rows.append(table.density[i])
    for i in range(phases.size - 1, -1, -1):
        mirrored = math.pi - phases[i]
        if mirrored - new_phases[-1] < 1e-12:
            continue
        new_phases.append(mirrored)
        new_rows.append(table.density[i][::-1])
    out = QuadratureTable(np.array(new_phases), table.x_grid, np.array(new_rows))
    if verify_state is not None:
        waves = quadrature_wavefunctions(verify_state.n_max, table.x_grid)
        for i, phi in enumerate(out.phases):
            if phi <= math.pi / 2 + 1e-12:
                continue
            direct = quadrature_distribution(verify_state, phi, table.x_grid, waves)
            err = float(np.max(np.abs(direct - out.density[i])))
            if err > verify_tol:
                raise SymmetryViolation(
                    f"extended slice at phi={phi:.6f} deviates from the "
                    f"direct distribution by {err:.3e} (tol {verify_tol:.1e}); "
                    f"the state lacks conjugation symmetry"
                )
    return out


def fit_slices(table: QuadratureTable, fit_model: str = "cubic_spline") -> list:
    """Per-slice interpolants; both models reproduce the nodes exactly."""
    if fit_model == "cubic_spline":
        return [CubicSpline(table.x_grid, row) for row in table.density]
    if fit_model == "none":
        return [
            (lambda xs, row=row, grid=table.x_grid: np.interp(xs, grid, row))
            for row in table.density
        ]
    raise InvalidArgument(f"unknown fit_model {fit_model!r}")


def _phase_weights(phases: np.ndarray) -> np.ndarray:
    span = phases[-1] - phases[0]
    diffs = np.diff(phases)
    if abs(span - math.pi) < 1e-9:
        # closed [0, pi] grid: trapezoid (half weight at both endpoints)
        w = np.empty_like(phases)
        w[0] = diffs[0] / 2.0
        w[-1] = diffs[-1] / 2.0
        w[1:-1] = (diffs[:-1] + diffs[1:]) / 2.0
        return w
    uniform = diffs.size > 0 and np.allclose(diffs, diffs[0], rtol=0, atol=1e-12)
    if uniform and abs(span + diffs[0] - math.pi) < 1e-9:
        # periodic [0, pi) grid: uniform weights
        return np.full(phases.shape, diffs[0])
    return np.concatenate(
        ([diffs[0] / 2.0], (diffs[:-1] + diffs[1:]) / 2.0, [diffs[-1] / 2.0])
    )


def _prepare(table: QuadratureTable, config: ReconstructionConfig):
    phases = table.phases
    if phases[-1] < math.pi / 2 + 1e-9:
        raise InvalidArgument(
            f"phases only cover [0, {phases[-1]:.4f}]; reconstruction needs "
            f"coverage of [0, pi] (run extend_phases first)"
        )
    x = table.x_grid
    if not np.allclose(x, -x[::-1], rtol=0, atol=1e-12):
        raise InvalidArgument("x grid must be symmetric about 0")
    if config.fit_model == "cubic_spline":
        # evaluate the spline fits on a twice-refined grid before integrating
        n_fine = 2 * (x.size - 1) + 1
        x_fine = np.linspace(x[0], x[-1], n_fine)
        fits = fit_slices(table, config.fit_model)
        density = np.array([f(x_fine) for f in fits])
    else:
        x_fine = x
        density = table.density
    wx = np.empty_like(x_fine)
    dx = np.diff(x_fine)
    wx[0] = dx[0] / 2.0
    wx[-1] = dx[-1] / 2.0
    wx[1:-1] = (dx[:-1] + dx[1:]) / 2.0
    weighted = density * wx[None, :]
    return phases, _phase_weights(phases), x_fine, weighted


def reconstruct_at(table: QuadratureTable, re_pts, im_pts, config: ReconstructionConfig):
    """Reconstructed W (phys convention) at arbitrary phase-space points."""
    re_arr = np.atleast_1d(np.asarray(re_pts, dtype=np.float64))
    im_arr = np.atleast_1d(np.asarray(im_pts, dtype=np.float64))
    if re_arr.shape != im_arr.shape:
        raise InvalidArgument("re and im point arrays must have the same shape")
    phases, wph, x_fine, weighted = _prepare(table, config)
    flat_u = re_arr.ravel()
    flat_v = im_arr.ravel()
    out = np.zeros(flat_u.shape)
    for start in range(0, flat_u.size, _POINT_CHUNK):
        u = flat_u[start : start + _POINT_CHUNK]
        v = flat_v[start : start + _POINT_CHUNK]
        acc = np.zeros(u.shape)
        for i in range(phases.size):
            s = u * math.cos(phases[i]) + v * math.sin(phases[i])
            kern = filter_kernel(x_fine[None, :] - s[:, None], config.cutoff_kc)
            acc += wph[i] * (kern @ weighted[i])
        out[start : start + _POINT_CHUNK] = acc
    out /= 4.0 * math.pi**2
    if np.isscalar(re_pts) and np.isscalar(im_pts):
        return float(out[0])
    return out.reshape(re_arr.shape)


def reconstruct(
    table: QuadratureTable,
    re_axis,
    im_axis,
    config: ReconstructionConfig,
) -> WignerGrid:
    """Dense reconstruction over a rectangular grid, phys convention."""
    re_axis = np.asarray(re_axis, dtype=np.float64)
    im_axis = np.asarray(im_axis, dtype=np.float64)
    uu = np.broadcast_to(re_axis[:, None], (re_axis.size, im_axis.size))
    vv = np.broadcast_to(im_axis[None, :], (re_axis.size, im_axis.size))
    values = reconstruct_at(table, uu, vv, config)
    return WignerGrid(re_axis, im_axis, values, "phys")
