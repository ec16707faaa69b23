from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nwvoa.exact import matmul
from nwvoa.lattice import mode_apply
from nwvoa.nw import sugawara_state
from nwvoa.relaxed import RelaxedModuleSpec, module_component
from nwvoa.screening import (
    FUSION_RULES,
    LogModuleSpec,
    ScreeningMap,
    commutes_with_images,
    deformed_L0,
    deformed_mode,
    delta_expand,
    delta_rs,
    hvir_fusion,
    kernel_profile,
    pi_fusion,
    rank_two_certificate,
    screen,
    screening_matrix,
    screening_state,
    vacuum_map,
    vmodule_compatible,
    weight_gap,
    witness_index,
)


def test_vacuum_is_screened_to_zero(frame):
    assert not screen(frame.vacuum())


def test_screening_witness(frame):
    g = frame.vec({"alpha": -1, "beta": -1})
    sign = frame.cocycle(frame.vec("alpha"), frame.intern(g))
    assert screen(frame.exp(g)) == frame.exp(frame.vec({"beta": -1})) * sign
    assert sign == -1  # cocycle convention of the frame


def test_kernel_profile_low_weights(frame):
    prof = kernel_profile(2, 1, frame)
    assert prof[(0, 0)] == 1
    assert prof[(1, -1)] == prof[(1, 1)] == 1
    assert prof[(1, 0)] == 2
    assert prof[(2, 0)] == 6


def test_vacuum_block_shapes(frame):
    blk = screening_matrix(vacuum_map(), 1, 0, frame)
    assert blk.dim_source == 3
    assert len(blk.matrix) == blk.dim_target
    assert blk.rank == blk.dim_source - blk.dim_ker == 1


def test_compatibility_examples():
    assert vmodule_compatible(3, 2, 0, 1) == (True, 0)
    assert vmodule_compatible(3, 2, F(1, 3), 1) == (False, F(1, 3))
    for lam in (F(0), F(2, 7), F(-5, 3)):
        assert vmodule_compatible(1, 0, lam, 1)[0]
    assert not vmodule_compatible(1, 0, F(1, 2), 1, target_y=0)[0]


@settings(max_examples=30)
@given(st.integers(-4, 5).filter(lambda x: x != 1), st.fractions(-3, 3, max_denominator=4),
       st.fractions(-2, 2, max_denominator=6), st.integers(-1, 2))
def test_weight_gap_congruence(x, y, lam, r):
    gap = weight_gap(x, y, lam, r)
    assert gap == F(y) / (x - 1) - lam + 1 - r
    assert (gap.denominator == 1) == vmodule_compatible(x, y, lam, r)[0]


def test_fusion_table():
    assert len(FUSION_RULES) == 5
    assert hvir_fusion(3, 2) == (2, 1)
    assert hvir_fusion(1, 0) == (0, None)
    assert hvir_fusion(1, 4) is None
    assert pi_fusion(1, F(1, 3), -1, F(1, 2)) == (0, F(5, 6))
    for r in (0, 1, 3):
        for s in (F(1, 2), F(-2)):
            assert hvir_fusion(-r, delta_rs(r, s)) == (-r - 1, delta_rs(r + 1, s))


def test_screening_commutes_with_affine_fields(frame, inverse_qhr):
    states = module_component(RelaxedModuleSpec(0, 0, 0, 0), 1, 0, frame).states
    spec = LogModuleSpec(3, 2, 0).source
    states += module_component(spec, spec.layer_weight(0) + 1, spec.layer_charge(1), frame).states
    assert commutes_with_images(inverse_qhr, states, mode_bound=1) == []


def test_nilpotent_part_vanishes_without_target(frame):
    spec = LogModuleSpec(0, 0, 0)
    h = spec.source.layer_weight(0)
    for i in (0, 1, 2):
        semi, nil = deformed_L0(spec, h, spec.source.layer_charge(i), frame)
        assert semi == [[h]] and nil == [[0]]


@pytest.mark.parametrize("spec", [LogModuleSpec(0, 0, 0), LogModuleSpec(1, 0, F(1, 3))])
def test_nilpotent_part_at_witness(frame, spec):
    jw = witness_index(spec, frame)
    src = spec.source
    h, j = src.layer_weight(0), src.layer_charge(jw - 1)
    semi, nil = deformed_L0(spec, h, j, frame)
    assert any(any(row) for row in nil)
    assert all(c == 0 for row in matmul(nil, nil) for c in row)
    assert all(semi[i][i] == h for i in range(len(semi)))


def test_incompatible_spec_rejected(frame):
    with pytest.raises(ValueError):
        deformed_L0(LogModuleSpec(3, 2, F(1, 3)), 0, 0, frame)


def test_delta_of_conformal_vector(frame, inverse_qhr):
    om = sugawara_state(inverse_qhr)
    assert delta_expand(om) == {0: om, 1: screening_state(frame)}


def test_deformed_l0_is_l0_plus_s(frame, inverse_qhr):
    om = sugawara_state(inverse_qhr)
    spec = LogModuleSpec(1, 0, 0)
    for i in (-2, -1, 0, 1):
        z = spec.source.top(frame, i)
        assert deformed_mode(om, 1, z) == mode_apply(om, 1, z) + screen(z)


def test_rank_two_small(frame, inverse_qhr):
    cert = rank_two_certificate(LogModuleSpec(0, 0, 0), depth=1, frame=frame, real=inverse_qhr)
    assert cert.passed, cert.summary
    assert cert.nu == 1
    rec = cert.records[0]
    assert set(rec) == {"spec", "bidegree", "dim_source", "dim_target", "rank_S", "dim_ker",
                        "nilpotent_rank", "checks"}


def test_x2_screening_does_not_descend(frame, inverse_qhr):
    # S does not factor through the quotient realization of the x = 2 source
    cert = rank_two_certificate(LogModuleSpec(2, 1, 1), depth=1, frame=frame, real=inverse_qhr)
    flags = [c["pass"] for r in cert.records for c in r["checks"] if c["name"] == "S_well_defined"]
    assert flags and not all(flags)
    assert not cert.passed


def test_screening_map_target_layers():
    smap = ScreeningMap.of(RelaxedModuleSpec(3, 2, 1, 0))
    assert (smap.target.x, smap.target.y, smap.target.r) == (2, 1, 0)
