"""Complex-multiplication accounting and predicted selection costs.

One complex multiplication counts as one unit; additions are free. Selection
counts cover atom-selection inner products only. Meta-atom construction
(sinc modulation, N multiplications per meta-atom) and least-squares refits
are tracked in separate fields so selection counts stay comparable with the
predicted formulas.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ArityMismatch


@dataclass
class OpCounter:
    """Running tally of complex multiplications, mergeable across tasks."""

    selection_mults: int = 0
    refit_mults: int = 0
    construction_mults: int = 0
    correlations: int = 0

    def add_selection(self, mults: int, correlations: int = 0) -> None:
        if mults < 0 or correlations < 0:
            raise ValueError("counter increments must be non-negative")
        self.selection_mults += int(mults)
        self.correlations += int(correlations)

    def add_refit(self, mults: int) -> None:
        if mults < 0:
            raise ValueError("counter increments must be non-negative")
        self.refit_mults += int(mults)

    def add_construction(self, mults: int) -> None:
        if mults < 0:
            raise ValueError("counter increments must be non-negative")
        self.construction_mults += int(mults)

    @property
    def total_mults(self) -> int:
        return self.selection_mults + self.refit_mults + self.construction_mults

    def merge(self, other: "OpCounter") -> "OpCounter":
        """Accumulate another counter into this one (commutative, lossless)."""
        self.selection_mults += other.selection_mults
        self.refit_mults += other.refit_mults
        self.construction_mults += other.construction_mults
        self.correlations += other.correlations
        return self

    def copy(self) -> "OpCounter":
        return OpCounter(
            self.selection_mults,
            self.refit_mults,
            self.construction_mults,
            self.correlations,
        )

    def as_dict(self) -> dict:
        return {
            "selection_mults": self.selection_mults,
            "refit_mults": self.refit_mults,
            "construction_mults": self.construction_mults,
            "correlations": self.correlations,
            "total_mults": self.total_mults,
        }


class SelectionMethod(enum.Enum):
    CLASSICAL_1D = "classical1d"
    HIER_1D = "hier1d"
    CLASSICAL_3D = "classical3d"
    MULTIDIM_CLASSICAL = "multidim_classical"
    MULTIDIM_HIER = "multidim_hier"


def _check_dims(method: SelectionMethod, dims, want_multi: bool) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ArityMismatch("dimension sizes must be positive")
    if not want_multi and len(dims) != 1:
        raise ArityMismatch(f"{method.value} takes a single dimension size")
    if want_multi and len(dims) < 2:
        raise ArityMismatch(f"{method.value} takes two or more dimension sizes")
    return dims


def _hier_sizes(method: SelectionMethod, sizes) -> tuple[int, list[int]]:
    try:
        n, steps = sizes
    except (TypeError, ValueError):
        raise ArityMismatch(f"{method.value} takes sizes (n, steps)") from None
    steps = [int(s) for s in (steps if hasattr(steps, "__len__") else [steps])]
    if int(n) < 2 or any(s < 1 for s in steps):
        raise ArityMismatch("need branching n >= 2 and steps >= 1")
    return int(n), steps


def _atom_counts(method: SelectionMethod, sizes) -> list[int]:
    sizes = [int(a) for a in (sizes if hasattr(sizes, "__len__") else [sizes])]
    if any(a < 1 for a in sizes):
        raise ArityMismatch(f"{method.value} needs positive dictionary sizes")
    return sizes


def predicted_selection_mults(method: SelectionMethod, dims, sizes) -> int:
    """Exact complex multiplications of one atom-selection invocation.

    ``dims`` lists the per-dimension sensor counts N_d (slowest first);
    ``sizes`` lists dictionary sizes A_d for classical methods or a pair
    ``(n, [S_d])`` for hierarchical ones.
    """
    method = SelectionMethod(method)
    if method is SelectionMethod.CLASSICAL_1D:
        (n_sens,) = _check_dims(method, dims, want_multi=False)
        (a,) = _atom_counts(method, sizes)
        return n_sens * a
    if method is SelectionMethod.HIER_1D:
        (n_sens,) = _check_dims(method, dims, want_multi=False)
        n, steps = _hier_sizes(method, sizes)
        if len(steps) != 1:
            raise ArityMismatch("hier1d takes a single step count")
        return n_sens * n * steps[0]
    if method is SelectionMethod.CLASSICAL_3D:
        dims = _check_dims(method, dims, want_multi=True)
        sizes = _atom_counts(method, sizes)
        if len(sizes) != len(dims):
            raise ArityMismatch("one dictionary size per dimension required")
        return math.prod(dims) * math.prod(sizes)
    if method is SelectionMethod.MULTIDIM_CLASSICAL:
        dims = _check_dims(method, dims, want_multi=True)
        sizes = _atom_counts(method, sizes)
        if len(sizes) != len(dims):
            raise ArityMismatch("one dictionary size per dimension required")
        return sum(
            a * math.prod(dims[d:]) for d, a in enumerate(sizes)
        )
    if method is SelectionMethod.MULTIDIM_HIER:
        dims = _check_dims(method, dims, want_multi=True)
        n, steps = _hier_sizes(method, sizes)
        if len(steps) != len(dims):
            raise ArityMismatch("one step count per dimension required")
        return sum(
            n * s * math.prod(dims[d:]) for d, s in enumerate(steps)
        )
    raise ArityMismatch(f"unknown method {method!r}")


def predicted_correlations(method: SelectionMethod, sizes) -> int:
    """Number of atom correlations of one selection invocation."""
    method = SelectionMethod(method)
    if method is SelectionMethod.CLASSICAL_1D:
        (a,) = _atom_counts(method, sizes)
        return a
    if method is SelectionMethod.HIER_1D:
        n, steps = _hier_sizes(method, sizes)
        if len(steps) != 1:
            raise ArityMismatch("hier1d takes a single step count")
        return n * steps[0]
    if method is SelectionMethod.CLASSICAL_3D:
        return math.prod(_atom_counts(method, sizes))
    if method is SelectionMethod.MULTIDIM_CLASSICAL:
        return sum(_atom_counts(method, sizes))
    if method is SelectionMethod.MULTIDIM_HIER:
        n, steps = _hier_sizes(method, sizes)
        return sum(n * s for s in steps)
    raise ArityMismatch(f"unknown method {method!r}")
