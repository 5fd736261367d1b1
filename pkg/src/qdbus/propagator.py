"""Exact propagation under a time-independent Hermitian matrix.

Everything goes through a full eigendecomposition ``H = V diag(w) V^dagger``;
evolution is then ``V exp(-i w t) V^dagger psi``. Dimensions in this package
stay below a few thousand, so this is cheap and exact to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from qdbus.chain import check_hermitian
from qdbus.errors import ContractError, NumericalError

MAX_DIM = 10_000
DECOMP_TOL = 1e-10
NORM_TOL = 1e-10
GRID_POINTS_PER_PERIOD = 40
REFINE_RTOL = 1e-6
REFINE_CANDIDATES = 5

Target = Union[int, Sequence[int]]


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    @property
    def bandwidth(self) -> float:
        return float(self.eigenvalues[-1] - self.eigenvalues[0])

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class FidelityTrace:
    times: np.ndarray
    fidelities: np.ndarray

    def __post_init__(self):
        if self.times.shape != self.fidelities.shape:
            raise ContractError("times and fidelities must have the same length")
        if np.any(np.diff(self.times) <= 0):
            raise ContractError("times must be strictly increasing")

    def argmax(self) -> tuple[float, float]:
        k = int(np.argmax(self.fidelities))
        return float(self.times[k]), float(self.fidelities[k])


def eigendecompose(h: np.ndarray) -> SpectralDecomposition:
    h = np.asarray(h)
    check_hermitian(h)
    d = h.shape[0]
    if d > MAX_DIM:
        raise ContractError(f"dimension {d} exceeds guard {MAX_DIM}")
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigh failed for {d}x{d} matrix: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(v))):
        raise NumericalError("eigendecomposition produced non-finite values")
    decomp = SpectralDecomposition(w, v)
    scale = max(1.0, float(np.max(np.abs(h)))) if d else 1.0
    resid = float(np.max(np.abs(decomp.reconstruct() - h), initial=0.0))
    ortho = float(np.max(np.abs(v.conj().T @ v - np.eye(d)), initial=0.0))
    if resid > DECOMP_TOL * scale or ortho > DECOMP_TOL:
        raise NumericalError(
            f"decomposition check failed: residual={resid:.3e}, orthogonality={ortho:.3e}"
        )
    return decomp


def evolve(decomp: SpectralDecomposition, psi0: np.ndarray, t: float) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (decomp.dim,):
        raise ContractError(f"state has shape {psi0.shape}, expected ({decomp.dim},)")
    if not math.isfinite(t):
        raise ContractError("t must be finite")
    if t == 0:
        return psi0.copy()
    v = decomp.eigenvectors
    return v @ (np.exp(-1j * decomp.eigenvalues * t) * (v.conj().T @ psi0))


def _targets(decomp: SpectralDecomposition, target: Target) -> np.ndarray:
    idx = np.atleast_1d(np.asarray(target, dtype=int))
    if idx.size == 0 or np.any(idx < 0) or np.any(idx >= decomp.dim):
        raise ContractError(f"target index {target!r} out of range for dimension {decomp.dim}")
    return idx


def _fidelity_curve(decomp, source: int, target: Target, times) -> np.ndarray:
    if not 0 <= source < decomp.dim:
        raise ContractError(f"source index {source} out of range for dimension {decomp.dim}")
    tgt = _targets(decomp, target)
    v = decomp.eigenvectors
    # overlap weights <target|k><k|source>
    weights = v[tgt, :] * v[source, :].conj()
    phases = np.exp(-1j * np.outer(decomp.eigenvalues, np.atleast_1d(times)))
    amps = weights @ phases
    return np.clip(np.sum(np.abs(amps) ** 2, axis=0), 0.0, 1.0)


def transfer_fidelity(decomp: SpectralDecomposition, source_index: int,
                      target_index: Target, t: float) -> float:
    """Population of ``target_index`` at time t after starting in basis
    state ``source_index``. A sequence of targets gives the total population
    of that subspace."""
    return float(_fidelity_curve(decomp, source_index, target_index, [t])[0])


def fidelity_scan(decomp: SpectralDecomposition, source: int, target: Target,
                  t_max: float, n_points: int) -> FidelityTrace:
    if n_points < 2:
        raise ContractError("n_points must be >= 2")
    times = np.linspace(0.0, t_max, n_points)
    return FidelityTrace(times, _fidelity_curve(decomp, source, target, times))


def golden_section_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def peak_fidelity(decomp: SpectralDecomposition, source: int, target: Target,
                  t_window: float, t_min: float = 0.0) -> tuple[float, float]:
    """Global maximum of the transfer fidelity on ``[t_min, t_min + t_window]``.

    A uniform grid with at least 40 points per fastest period is searched
    first; the best few grid maxima are then refined by golden section to
    ``1e-6 * t_window``.
    """
    if not t_window > 0:
        raise ContractError("t_window must be > 0")
    omega = max(decomp.spectral_radius, decomp.bandwidth, 1e-300)
    n_grid = max(GRID_POINTS_PER_PERIOD + 1,
                 int(math.ceil(GRID_POINTS_PER_PERIOD * t_window * omega / (2 * math.pi))) + 1)
    times = np.linspace(t_min, t_min + t_window, n_grid)
    fids = _fidelity_curve(decomp, source, target, times)
    dt = times[1] - times[0]

    order = np.argsort(fids)[::-1]
    picked: list[int] = []
    for k in order:
        if all(abs(int(k) - p) > 1 for p in picked):
            picked.append(int(k))
        if len(picked) == REFINE_CANDIDATES:
            break

    def f(t):
        return transfer_fidelity(decomp, source, target, t)

    best_t, best_f = float(times[order[0]]), float(fids[order[0]])
    tol = REFINE_RTOL * t_window
    for k in picked:
        lo = max(times[0], times[k] - dt)
        hi = min(times[-1], times[k] + dt)
        t_star, f_star = golden_section_max(f, lo, hi, tol)
        if f_star > best_f:
            best_t, best_f = t_star, f_star
    return float(best_t), float(best_f)
