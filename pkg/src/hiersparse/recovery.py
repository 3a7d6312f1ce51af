"""Greedy sparse recovery: MP, OMP, and their hierarchical and
multi-dimensional variants.

All OMP-family loops share the same skeleton: select an atom from the
residual, append it to the active set, least-squares refit all coefficients
against the original observation, and update the residual. They differ only
in the selection step, which is where the instrumented multiplication
counts diverge.

Refit costs are tracked separately from selection costs under a
normal-equations model (Gram s^2*N + right-hand side s*N + solve s^3 +
reconstruction s*N for support size s), since the predicted-complexity
formulas cover atom selection only.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .dictionary import Dictionary
from .errors import DimensionMismatch, EmptyDictionary, RankDeficientSupport
from .hierarchical_search import HSearchConfig, hsearch_1d, hsearch_tensor
from .opcount import OpCounter
from .signal_model import Observation, ObservationGrid, TargetDomain, atomic_signal

_RANK_RTOL = 1e-10


@dataclass
class SupportEntry:
    """One selected atom: its target parameters and full-length unit atom."""

    params: tuple[float, ...]
    atom: np.ndarray


@dataclass
class RecoveryResult:
    support: list[SupportEntry]
    coefficients: np.ndarray
    estimate: np.ndarray
    residual_norms: np.ndarray
    counter: OpCounter

    @property
    def mults(self) -> int:
        """Selection multiplications (the Table-scope count)."""
        return self.counter.selection_mults

    def to_dict(self) -> dict:
        return {
            "support": [list(entry.params) for entry in self.support],
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "residual_norms": [float(r) for r in self.residual_norms],
            "selection_mults": self.counter.selection_mults,
            "total_mults": self.counter.total_mults,
            "counter": self.counter.as_dict(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


class StopMode(enum.Enum):
    FIXED_ITERATIONS = "fixed_iterations"
    RESIDUAL_THRESHOLD = "residual_threshold"


@dataclass(frozen=True)
class StoppingRule:
    mode: StopMode
    value: float

    def __post_init__(self):
        if self.mode is StopMode.FIXED_ITERATIONS:
            if int(self.value) < 1:
                raise ValueError("fixed iteration count must be >= 1")
        elif not 0 < self.value < 1:
            raise ValueError("residual threshold ratio must lie in (0, 1)")

    @classmethod
    def fixed_iterations(cls, s: int) -> "StoppingRule":
        return cls(StopMode.FIXED_ITERATIONS, int(s))

    @classmethod
    def residual_threshold(cls, ratio: float) -> "StoppingRule":
        return cls(StopMode.RESIDUAL_THRESHOLD, float(ratio))


def least_squares(active_atoms: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Minimum-residual coefficients of y over the active atom columns.

    Raises RankDeficientSupport when the smallest singular value falls
    below 1e-10 of the largest; greedy loops avoid this by never appending
    a duplicate atom.
    """
    active_atoms = np.atleast_2d(np.asarray(active_atoms, dtype=np.complex128))
    sv = np.linalg.svd(active_atoms, compute_uv=False)
    if sv[-1] < _RANK_RTOL * sv[0]:
        raise RankDeficientSupport(
            f"smallest singular value {sv[-1]:.3e} below {_RANK_RTOL} of largest"
        )
    x, _, _, _ = np.linalg.lstsq(active_atoms, y, rcond=None)
    return x


def _as_vector(y) -> np.ndarray:
    if isinstance(y, Observation):
        y = y.y
    return np.asarray(y, dtype=np.complex128).ravel()


def _refit_cost(s: int, n: int) -> int:
    return s * n * (s + 2) + s**3


def _greedy_omp(y, select, stop, counter):
    """OMP skeleton shared by omp/homp/momp/mhomp.

    ``select`` maps a residual to (params, atom). A duplicate selection is
    skipped (refit only); two consecutive duplicates terminate the loop.
    """
    norm_y = float(np.linalg.norm(y))
    residual = y.copy()
    norms = [norm_y]
    support: list[SupportEntry] = []
    coeffs = np.zeros(0, dtype=np.complex128)
    estimate = np.zeros_like(y)
    active = None
    dup_streak = 0
    iterations = 0
    hard_cap = y.size if stop.mode is StopMode.RESIDUAL_THRESHOLD else int(stop.value)

    while iterations < hard_cap:
        if (
            stop.mode is StopMode.RESIDUAL_THRESHOLD
            and norms[-1] <= stop.value * norm_y
        ):
            break
        params, atom = select(residual)
        iterations += 1
        if any(params == entry.params for entry in support):
            dup_streak += 1
        else:
            dup_streak = 0
            support.append(SupportEntry(params=params, atom=atom))
            col = atom[:, None]
            active = col if active is None else np.hstack([active, col])
        coeffs = least_squares(active, y)
        counter.add_refit(_refit_cost(len(support), y.size))
        estimate = active @ coeffs
        residual = y - estimate
        norms.append(float(np.linalg.norm(residual)))
        if dup_streak >= 2:
            break

    return RecoveryResult(
        support=support,
        coefficients=coeffs,
        estimate=estimate,
        residual_norms=np.asarray(norms),
        counter=counter,
    )


def omp(
    y,
    dictionary: Dictionary,
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """Classical OMP: exhaustive argmax of |<a_i, residual>| per iteration."""
    if dictionary.size == 0:
        raise EmptyDictionary("dictionary has no atoms")
    return omp_matrix(
        y,
        dictionary.atoms,
        [(float(p),) for p in dictionary.params],
        stop,
        counter,
    )


def omp_matrix(
    y,
    atoms: np.ndarray,
    params: list[tuple[float, ...]],
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """OMP over an explicit atom matrix (columns unit-norm)."""
    counter = counter if counter is not None else OpCounter()
    y = _as_vector(y)
    atoms = np.asarray(atoms, dtype=np.complex128)
    n, a = atoms.shape
    if a == 0:
        raise EmptyDictionary("dictionary has no atoms")
    if n != y.size:
        raise DimensionMismatch(f"atom length {n} does not match observation {y.size}")

    def select(residual):
        corr = atoms.conj().T @ residual
        counter.add_selection(n * a, correlations=a)
        i = int(np.argmax(np.abs(corr)))
        return tuple(params[i]), atoms[:, i]

    return _greedy_omp(y, select, stop, counter)


def mp(
    y,
    dictionary: Dictionary,
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """Matching pursuit: selected coefficient is the raw correlation, the
    residual loses only that component (no least-squares refit)."""
    if dictionary.size == 0:
        raise EmptyDictionary("dictionary has no atoms")
    counter = counter if counter is not None else OpCounter()
    y = _as_vector(y)
    atoms = dictionary.atoms
    n, a = atoms.shape
    norm_y = float(np.linalg.norm(y))
    residual = y.copy()
    norms = [norm_y]
    support: list[SupportEntry] = []
    index_of: dict[tuple, int] = {}
    coeffs: list[complex] = []
    dup_streak = 0
    iterations = 0
    hard_cap = y.size if stop.mode is StopMode.RESIDUAL_THRESHOLD else int(stop.value)

    while iterations < hard_cap:
        if (
            stop.mode is StopMode.RESIDUAL_THRESHOLD
            and norms[-1] <= stop.value * norm_y
        ):
            break
        corr = atoms.conj().T @ residual
        counter.add_selection(n * a, correlations=a)
        i = int(np.argmax(np.abs(corr)))
        iterations += 1
        key = (float(dictionary.params[i]),)
        c = complex(corr[i])
        if key in index_of:
            dup_streak += 1
            coeffs[index_of[key]] += c
        else:
            dup_streak = 0
            index_of[key] = len(support)
            support.append(SupportEntry(params=key, atom=atoms[:, i]))
            coeffs.append(c)
        residual = residual - c * atoms[:, i]
        counter.add_refit(n)  # coefficient peel-off
        norms.append(float(np.linalg.norm(residual)))
        if dup_streak >= 2:
            break

    coeffs_arr = np.asarray(coeffs, dtype=np.complex128)
    estimate = y - residual
    return RecoveryResult(
        support=support,
        coefficients=coeffs_arr,
        estimate=estimate,
        residual_norms=np.asarray(norms),
        counter=counter,
    )


def homp(
    y,
    grid: ObservationGrid,
    domain: TargetDomain,
    cfg: HSearchConfig,
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """OMP with hierarchical selection replacing the exhaustive argmax."""
    counter = counter if counter is not None else OpCounter()
    y = _as_vector(y)
    n = grid.count
    root_n = math.sqrt(n)

    def select(residual):
        out = hsearch_1d(residual, domain, grid, cfg, counter)
        atom = atomic_signal(grid, out.u_star) / root_n
        counter.add_construction(n)
        return (out.u_star,), atom

    return _greedy_omp(y, select, stop, counter)


def momp(
    y,
    dictionaries: list[Dictionary],
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """Multi-dimensional OMP: sequential per-dimension exhaustive selection
    chained through tensor contractions of the residual."""
    counter = counter if counter is not None else OpCounter()
    y = _as_vector(y)
    dims = [d.grid.count for d in dictionaries]
    if math.prod(dims) != y.size:
        raise DimensionMismatch("product of grid counts must match observation length")
    if any(d.size == 0 for d in dictionaries):
        raise EmptyDictionary("dictionary has no atoms")

    def select(residual):
        params = []
        cols = []
        current = residual.reshape(dims[0], -1)
        for d, dct in enumerate(dictionaries):
            n_d, a_d = dct.atoms.shape
            trailing = current.shape[1]
            corr = dct.atoms.conj().T @ current  # (A_d, trailing)
            counter.add_selection(a_d * n_d * trailing, correlations=a_d)
            i = int(np.argmax(np.linalg.norm(corr, axis=1)))
            params.append(float(dct.params[i]))
            cols.append(dct.atoms[:, i])
            if d + 1 < len(dims):
                current = corr[i].reshape(dims[d + 1], -1)
        atom = reduce(np.kron, cols)
        counter.add_construction(y.size)
        return tuple(params), atom

    return _greedy_omp(y, select, stop, counter)


def mhomp(
    y,
    grids: list[ObservationGrid],
    domains: list[TargetDomain],
    cfgs: list[HSearchConfig],
    stop: StoppingRule,
    counter: OpCounter | None = None,
) -> RecoveryResult:
    """Multi-dimensional hierarchical OMP: per-dimension hierarchical search
    chained through tensor contractions, then refit as in OMP."""
    counter = counter if counter is not None else OpCounter()
    y = _as_vector(y)
    dims = [g.count for g in grids]
    if math.prod(dims) != y.size:
        raise DimensionMismatch("product of grid counts must match observation length")
    if not len(grids) == len(domains) == len(cfgs):
        raise DimensionMismatch("one domain and one search config per grid required")

    def select(residual):
        params = []
        current = residual
        for d, (grid, domain, cfg) in enumerate(zip(grids, domains, cfgs)):
            if d + 1 < len(dims):
                out = hsearch_tensor(
                    current.reshape(dims[d], -1), domain, grid, cfg, counter
                )
                current = out.payload
            else:
                out = hsearch_1d(current.ravel(), domain, grid, cfg, counter)
            params.append(out.u_star)
        cols = [
            atomic_signal(g, u) / math.sqrt(g.count) for g, u in zip(grids, params)
        ]
        atom = reduce(np.kron, cols)
        counter.add_construction(y.size)
        return tuple(params), atom

    return _greedy_omp(y, select, stop, counter)
