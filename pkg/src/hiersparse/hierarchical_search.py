"""Hierarchical atom selection: tree descent over sinc-spread meta-atoms.

Each step correlates the residual with n meta-atoms whose width-L response
windows tile the current search interval, keeps the best one, and narrows
the interval by a factor n. After S steps the selected center localizes the
target parameter to half a final bin, using n*S correlations instead of the
n^S of an exhaustive dictionary at the same resolution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dictionary import meta_atom_set
from .errors import DimensionMismatch, EmptyDomain, NonFiniteResidual
from .opcount import OpCounter
from .signal_model import ObservationGrid, TargetDomain


@dataclass(frozen=True)
class HSearchConfig:
    """Branching factor, step count, and selection policies of one search.

    ``reduction`` picks how vector-valued correlations (tensor form) are
    reduced to a selection score: "l2" (matched-filter energy, default) or
    "linf" (peak magnitude). Ties break toward the smallest meta-atom index.
    """

    n: int = 2
    steps: int = 1
    reduction: str = "l2"
    tie_break: str = "lowest_index"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("branching factor must be >= 2")
        if self.steps < 1:
            raise ValueError("step count must be >= 1")
        if self.reduction not in ("l2", "linf"):
            raise ValueError("reduction must be 'l2' or 'linf'")
        if self.tie_break != "lowest_index":
            raise ValueError("only lowest_index tie-breaking is implemented")

    @property
    def resolution(self) -> int:
        """Equivalent exhaustive dictionary size n**steps."""
        return self.n**self.steps


@dataclass
class HSearchOutcome:
    """Selected center, its correlation payload, and multiplications used."""

    u_star: float
    payload: complex | np.ndarray
    mults: int


def _descend(residual, domain, grid, cfg, counter):
    """Shared descent loop. ``residual`` has the grid dimension leading;
    trailing axes ride along through each contraction."""
    if domain.width <= 0:
        raise EmptyDomain("search interval has non-positive width")
    if not np.all(np.isfinite(residual)):
        raise NonFiniteResidual("residual contains non-finite entries")

    n = cfg.n
    n_sens = grid.count
    trailing = int(residual.size // n_sens)
    width = domain.width / n
    offsets = (2 * np.arange(1, n + 1) - 1) / 2.0  # (2k-1)/2, k=1..n
    centers = domain.u_min + offsets * width

    u_star = centers[0]
    payload = None
    for _ in range(cfg.steps):
        mset = meta_atom_set(grid, centers, width)
        counter.add_construction(n * n_sens)
        corr = mset.atoms.conj().T @ residual  # (n,) or (n, trailing)
        counter.add_selection(n * n_sens * trailing, correlations=n)
        if corr.ndim == 1:
            scores = np.abs(corr)
        elif cfg.reduction == "l2":
            scores = np.linalg.norm(corr, axis=1)
        else:
            scores = np.max(np.abs(corr), axis=1)
        j = int(np.argmax(scores))  # first occurrence wins ties
        u_star = float(centers[j])
        payload = corr[j]
        width /= n
        centers = u_star + (2 * np.arange(1, n + 1) - 1 - n) / 2.0 * width
    return u_star, payload


def hsearch_1d(
    residual: np.ndarray,
    domain: TargetDomain,
    grid: ObservationGrid,
    cfg: HSearchConfig,
    counter: OpCounter | None = None,
) -> HSearchOutcome:
    """Hierarchically locate the dominant atomic component of a residual.

    Consumes exactly n*steps correlations (n*steps*N selection
    multiplications) regardless of the data.
    """
    counter = counter if counter is not None else OpCounter()
    residual = np.asarray(residual, dtype=np.complex128)
    if residual.shape != (grid.count,):
        raise DimensionMismatch("residual length must equal the grid count")
    before = counter.selection_mults
    u_star, payload = _descend(residual, domain, grid, cfg, counter)
    return HSearchOutcome(
        u_star=u_star, payload=complex(payload), mults=counter.selection_mults - before
    )


def hsearch_tensor(
    residual_tensor: np.ndarray,
    domain: TargetDomain,
    grid: ObservationGrid,
    cfg: HSearchConfig,
    counter: OpCounter | None = None,
) -> HSearchOutcome:
    """Hierarchical search along the leading tensor dimension.

    Each correlation contracts a meta-atom (conjugated) over the leading
    axis, yielding a vector across the trailing dimensions; selection
    reduces that vector per ``cfg.reduction``. The selected vector is the
    payload, which the multi-dimensional recovery feeds to the next
    dimension's search.
    """
    counter = counter if counter is not None else OpCounter()
    residual_tensor = np.asarray(residual_tensor, dtype=np.complex128)
    if residual_tensor.ndim < 1 or residual_tensor.shape[0] != grid.count:
        raise DimensionMismatch("leading tensor dimension must equal the grid count")
    flat = residual_tensor.reshape(grid.count, -1)
    before = counter.selection_mults
    u_star, payload = _descend(flat, domain, grid, cfg, counter)
    return HSearchOutcome(
        u_star=u_star,
        payload=payload.reshape(residual_tensor.shape[1:]),
        mults=counter.selection_mults - before,
    )
