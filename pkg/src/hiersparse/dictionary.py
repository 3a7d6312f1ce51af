"""Classical dictionaries, atom responses, and sinc-modulated meta-atoms.

A classical atom is a unit-norm atomic signal at one target parameter. A
meta-atom is an atomic signal modulated elementwise by a normalized sinc,
which spreads its correlation response into an approximately rectangular
window of width L over the target domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroVector
from .signal_model import ObservationGrid, TargetDomain, atomic_signal, atomic_signals


@dataclass(frozen=True)
class Dictionary:
    """Unit-norm atoms, one per evenly spaced (bin-centered) parameter."""

    atoms: np.ndarray  # (N, A) complex, unit-norm columns
    params: np.ndarray  # (A,) target parameters
    grid: ObservationGrid
    domain: TargetDomain

    @property
    def size(self) -> int:
        return self.params.size


@dataclass(frozen=True)
class MetaAtomSet:
    """Meta-atoms of one hierarchical step: centers spaced exactly L apart,
    whose width-L response windows tile the current search interval."""

    atoms: np.ndarray  # (N, n) complex, unit-norm columns
    centers: np.ndarray  # (n,)
    width: float
    grid: ObservationGrid


def bin_centers(domain: TargetDomain, a: int) -> np.ndarray:
    """Parameters centered in a even bins over the domain."""
    step = domain.width / a
    return domain.u_min + (np.arange(a) + 0.5) * step


def build_classical(grid: ObservationGrid, domain: TargetDomain, a: int) -> Dictionary:
    """Classical dictionary of a unit-norm atoms at bin-centered parameters."""
    if a < 1:
        raise ValueError("dictionary size must be >= 1")
    params = bin_centers(domain, a)
    atoms = atomic_signals(grid, params) / math.sqrt(grid.count)
    return Dictionary(atoms=atoms, params=params, grid=grid, domain=domain)


def response(atom: np.ndarray, grid: ObservationGrid, u: float) -> complex:
    """Correlation of an atom with the atomic signal at u."""
    atom = np.asarray(atom)
    if atom.shape != (grid.count,):
        raise DimensionMismatch("atom length must equal the grid count")
    return complex(np.vdot(atom, atomic_signal(grid, u)))


def response_profile(
    atom: np.ndarray, grid: ObservationGrid, u_samples: np.ndarray
) -> np.ndarray:
    """|correlation| of an atom with atomic signals at each sample."""
    u_samples = np.asarray(u_samples, dtype=np.float64)
    if u_samples.size == 0:
        raise ValueError("u_samples must be nonempty")
    atom = np.asarray(atom)
    if atom.shape != (grid.count,):
        raise DimensionMismatch("atom length must equal the grid count")
    return np.abs(atom.conj() @ atomic_signals(grid, u_samples))


def _sinc_envelope(grid: ObservationGrid, width: float) -> np.ndarray:
    """Sinc envelope centered on the grid midpoint.

    Centering matters: a one-sided grid (starting at 0) would otherwise
    truncate the sinc at its peak, smearing the rectangular response into
    soft edges and heavy out-of-window leakage. With the envelope centered,
    the response magnitude equals that of a symmetric grid (the shift only
    contributes a constant phase), and the width-L window comes out crisp.
    """
    mid = 0.5 * (grid.values[0] + grid.values[-1])
    env = np.sinc(width * (grid.values - mid))
    norm = float(np.linalg.norm(env))
    if norm == 0.0:
        raise ZeroVector("all sinc samples vanish on this grid")
    return env / norm


def meta_atom(grid: ObservationGrid, center: float, width: float) -> np.ndarray:
    """Unit-norm sinc-modulated atom whose response spreads over
    [center - width/2, center + width/2].

    Uses the normalized sinc convention sin(pi x)/(pi x), the Fourier pair
    of the unit rectangle.
    """
    if width <= 0:
        raise ValueError("meta-atom width must be positive")
    return atomic_signal(grid, center) * _sinc_envelope(grid, width)


def meta_atom_set(
    grid: ObservationGrid, centers: np.ndarray, width: float
) -> MetaAtomSet:
    """Stack meta-atoms for one hierarchical step.

    All columns share the same sinc envelope, so a single normalization
    applies and the argmax over correlation magnitudes is unbiased.
    """
    if width <= 0:
        raise ValueError("meta-atom width must be positive")
    centers = np.asarray(centers, dtype=np.float64)
    envelope = _sinc_envelope(grid, width)
    atoms = atomic_signals(grid, centers) * envelope[:, None]
    return MetaAtomSet(atoms=atoms, centers=centers, width=width, grid=grid)
