import pytest

from nwvoa.frame_io import dump_frame, dumps_frame, format_state, load_frame, loads_frame, parse_state
from nwvoa.lattice import heisenberg
from nwvoa.nw import sugawara_state


def test_frame_round_trip(frame, tmp_path):
    path = tmp_path / "nw.ini"
    dump_frame(frame, path)
    back = load_frame(path)
    assert back == frame
    assert back.conformal.in_frame(frame) == frame.conformal
    assert back.charge.in_frame(frame) == frame.charge
    assert dumps_frame(back) == dumps_frame(frame)


def test_state_round_trip(frame, inverse_qhr):
    for st in list(inverse_qhr.images.values()) + [sugawara_state(inverse_qhr)]:
        assert parse_state(frame, format_state(st)) == st


def test_named_vector_modes(frame):
    want = heisenberg(frame.vec("alpha"), -2, frame.exp(frame.vec("c"))) * -3
    assert parse_state(frame, "(* -3 (alpha -2) (e 0 0 1 0 0))") == want


@pytest.mark.parametrize("bad", ["(e 1 2)", "(foo -1)", "(alpha 1)", "(* (e 0 0 1 0 0) (e 0 0 1 0 0))", "(+ 1"])
def test_bad_expressions(frame, bad):
    with pytest.raises(ValueError):
        parse_state(frame, bad)


def test_bad_frame_text():
    with pytest.raises(ValueError):
        loads_frame("[frame]\ngenerators = a b\nlattice_basis = a b\n[gram]\na = 0 1\nb = 2 0\n")
