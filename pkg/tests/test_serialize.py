import json

import numpy as np
import pytest

from qcorr import ValidationError, make_rng, random_channel, random_density, random_povm
from qcorr.serialize import (
    channel_from_json,
    channel_to_json,
    dump_json,
    load_json,
    povm_from_json,
    povm_to_json,
    state_from_json,
    state_to_json,
)


def test_round_trips(tmp_path):
    rng = make_rng(0)
    rho = random_density((2, 3), None, rng, labels=("A", "B"))
    back = state_from_json(json.loads(json.dumps(state_to_json(rho))))
    assert np.array_equal(back.matrix, rho.matrix) and back.labels == rho.labels
    ch = random_channel(2, 3, 2, rng)
    assert np.array_equal(channel_from_json(channel_to_json(ch)).stack, ch.stack)
    M = random_povm(3, 5, rng, "C")
    M2 = povm_from_json(povm_to_json(M))
    assert M2.label == "C" and all(np.array_equal(a, b) for a, b in zip(M.elements, M2.elements))
    p = tmp_path / "s.json"
    dump_json(state_to_json(rho), p)
    assert np.array_equal(state_from_json(load_json(p)).matrix, rho.matrix)


def test_vector_input_is_a_pure_state():
    s = state_from_json({"re": [2 ** -0.5, 0, 0, 2 ** -0.5], "dims": [2, 2]})
    assert np.allclose(s.matrix[0, 3], 0.5)


def test_bad_payloads():
    with pytest.raises(ValidationError):
        state_from_json({"re": [[1, 0], [0, 1]]})
    with pytest.raises(ValidationError):
        state_from_json({"im": [[0]]})
    with pytest.raises(ValidationError):
        channel_from_json({"d_in": 3, "kraus": [{"re": [[1, 0], [0, 1]]}]})


def test_dump_is_deterministic():
    obj = {"b": [1.0, 2.5], "a": {"y": 1, "x": 0.1}}
    assert dump_json(obj) == dump_json(json.loads(dump_json(obj)))
