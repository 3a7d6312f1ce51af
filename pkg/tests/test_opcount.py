import pytest

from hiersparse.errors import ArityMismatch
from hiersparse.opcount import (
    OpCounter,
    SelectionMethod,
    predicted_correlations,
    predicted_selection_mults,
)


def test_classical_1d_paper_value():
    assert predicted_selection_mults(SelectionMethod.CLASSICAL_1D, [256], [1024]) == 262144


def test_hier_1d_paper_value_and_gain():
    hier = predicted_selection_mults(SelectionMethod.HIER_1D, [256], (2, [10]))
    assert hier == 5120
    assert 262144 / hier == 51.2
    assert 262144 / hier >= 30


def test_multidim_hier_unit_dims():
    got = predicted_selection_mults(
        SelectionMethod.MULTIDIM_HIER, [1, 1, 1], (2, [1, 1, 1])
    )
    assert got == 6


def test_multidim_classical_paper_example():
    got = predicted_selection_mults(
        SelectionMethod.MULTIDIM_CLASSICAL, [8, 4, 2], [16, 8, 4]
    )
    assert got == 16 * 64 + 8 * 8 + 4 * 2 == 1096


def test_classical_3d_formula():
    got = predicted_selection_mults(SelectionMethod.CLASSICAL_3D, [4, 3, 2], [8, 6, 4])
    assert got == (4 * 3 * 2) * (8 * 6 * 4)


def test_full_paper_scale_exceeds_2e14():
    dims = [256, 64, 32]
    sizes = [2560, 640, 320]
    predicted = predicted_selection_mults(SelectionMethod.CLASSICAL_3D, dims, sizes)
    assert predicted > 2e14


def test_predicted_correlations():
    assert predicted_correlations(SelectionMethod.HIER_1D, (2, [4])) == 8
    assert predicted_correlations(SelectionMethod.CLASSICAL_1D, [16]) == 16
    assert predicted_correlations(SelectionMethod.MULTIDIM_CLASSICAL, [4, 5, 6]) == 15
    assert predicted_correlations(SelectionMethod.CLASSICAL_3D, [4, 5, 6]) == 120
    assert predicted_correlations(SelectionMethod.MULTIDIM_HIER, (2, [3, 2, 1])) == 12


def test_arity_errors():
    with pytest.raises(ArityMismatch):
        predicted_selection_mults(SelectionMethod.CLASSICAL_1D, [256, 64], [1024])
    with pytest.raises(ArityMismatch):
        predicted_selection_mults(SelectionMethod.MULTIDIM_CLASSICAL, [8, 4], [16])
    with pytest.raises(ArityMismatch):
        predicted_selection_mults(SelectionMethod.HIER_1D, [256], (1, [10]))
    with pytest.raises(ArityMismatch):
        predicted_selection_mults(SelectionMethod.MULTIDIM_HIER, [8, 4], (2, [3]))
    with pytest.raises(ArityMismatch):
        predicted_correlations(SelectionMethod.CLASSICAL_1D, [0])


def test_counter_accumulation_and_merge():
    c = OpCounter()
    c.add_selection(100, correlations=4)
    c.add_refit(20)
    c.add_construction(8)
    assert c.total_mults == 128
    d = OpCounter()
    d.add_selection(1, correlations=1)
    d.merge(c)
    assert d.selection_mults == 101 and d.correlations == 5
    snap = c.copy()
    c.add_selection(1)
    assert snap.selection_mults == 100
    with pytest.raises(ValueError):
        c.add_selection(-1)
    assert c.as_dict()["total_mults"] == c.total_mults
