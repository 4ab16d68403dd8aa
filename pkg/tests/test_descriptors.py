import json

import numpy as np
import pytest

from mixedphase import descriptors
from mixedphase.errors import ParseError, ValidationError


def test_load_json_reports_line(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"eigenvalues": [0.5,\n 0.5,]}')
    with pytest.raises(ParseError, match="line 2"):
        descriptors.load_json(str(bad))


def test_parse_state_minimal():
    spec = descriptors.parse_state({"eigenvalues": [0.8, 0.2]})
    np.testing.assert_allclose(spec.eigenvalues, [0.8, 0.2])
    np.testing.assert_allclose(spec.basis, np.eye(2))
    assert spec.pairing is None
    assert spec.dim == 2


def test_parse_state_density_and_complement():
    spec = descriptors.parse_state({"eigenvalues": [0.8, 0.2], "basis": "computational"})
    np.testing.assert_allclose(spec.density().matrix, np.diag([0.8, 0.2]))
    np.testing.assert_allclose(spec.complement().matrix, np.diag([0.2, 0.8]))


def test_parse_state_explicit_columns_with_complex_entries():
    s = 1 / np.sqrt(2)
    obj = {
        "eigenvalues": [0.7, 0.3],
        "basis": {"columns": [[s, [0, s]], [s, [0, -s]]]},
    }
    spec = descriptors.parse_state(obj)
    want = np.array([[s, s], [s * 1j, -s * 1j]])
    np.testing.assert_allclose(spec.basis, want)
    spec.density()  # orthonormality accepted downstream


def test_parse_state_pairing_is_one_based():
    obj = {"eigenvalues": [0.5, 0.3, 0.2], "pairing": [2, 3, 1]}
    spec = descriptors.parse_state(obj)
    assert spec.pairing == (1, 2, 0)
    np.testing.assert_allclose(np.diag(spec.complement().matrix).real, [0.2, 0.5, 0.3])


def test_parse_state_field_errors():
    with pytest.raises(ValidationError, match="unknown fields"):
        descriptors.parse_state({"eigenvalues": [1.0], "extra": 1})
    with pytest.raises(ValidationError, match="missing field 'eigenvalues'"):
        descriptors.parse_state({})
    with pytest.raises(ValidationError, match="eigenvalues"):
        descriptors.parse_state({"eigenvalues": "lots"})
    with pytest.raises(ValidationError, match=r"eigenvalues\[1\]"):
        descriptors.parse_state({"eigenvalues": [0.5, "x"]})
    with pytest.raises(ValidationError, match="basis"):
        descriptors.parse_state({"eigenvalues": [1.0], "basis": "fourier"})
    with pytest.raises(ValidationError, match=r"pairing\[0\]: index 0"):
        descriptors.parse_state({"eigenvalues": [0.5, 0.5], "pairing": [0, 1]})
    with pytest.raises(ValidationError, match=r"pairing\[1\]"):
        descriptors.parse_state({"eigenvalues": [0.5, 0.5], "pairing": [2, True]})


def test_parse_state_rejects_boolean_eigenvalue():
    with pytest.raises(ValidationError):
        descriptors.parse_state({"eigenvalues": [True, 0.0]})


def test_parse_path_axis_form():
    obj = {"segments": [{"axis": [0, 0, 1], "angle": 1.5, "steps": 50}]}
    segs = descriptors.parse_path(obj)
    assert len(segs) == 1
    assert segs[0].steps == 50
    assert segs[0].duration == pytest.approx(1.5)
    np.testing.assert_allclose(segs[0].generator, np.diag([0.5, -0.5]), atol=1e-15)


def test_parse_path_default_steps():
    obj = {"segments": [{"axis": [1, 0, 0], "angle": 0.5}]}
    assert descriptors.parse_path(obj)[0].steps == 200
    assert descriptors.parse_path(obj, default_steps=37)[0].steps == 37


def test_parse_path_generator_form():
    gen = [[0.0, [0.0, -1.0], 0.0], [[0.0, 1.0], 0.0, 0.0], [0.0, 0.0, 0.0]]
    obj = {"segments": [{"generator": gen, "angle": 0.9}]}
    seg = descriptors.parse_path(obj)[0]
    want = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
    np.testing.assert_allclose(seg.generator, want)
    assert seg.duration == pytest.approx(0.9)


def test_parse_path_errors():
    with pytest.raises(ValidationError, match="segments"):
        descriptors.parse_path({"segments": []})
    with pytest.raises(ValidationError, match="exactly one"):
        descriptors.parse_path({"segments": [{"angle": 1.0}]})
    with pytest.raises(ValidationError, match="exactly one"):
        descriptors.parse_path(
            {"segments": [{"axis": [0, 0, 1], "generator": [[0]], "angle": 1.0}]}
        )
    with pytest.raises(ValidationError, match="missing field 'angle'"):
        descriptors.parse_path({"segments": [{"axis": [0, 0, 1]}]})
    with pytest.raises(ValidationError, match="unknown"):
        descriptors.parse_path({"segments": [{"axis": [0, 0, 1], "angle": 1, "speed": 2}]})
    with pytest.raises(ValidationError):
        descriptors.parse_path({"segments": [{"axis": [0, 0, 1], "angle": 1, "steps": -5}]})
    # a non-hermitian generator fails inside segment construction but should
    # surface as a descriptor problem
    with pytest.raises(ValidationError):
        descriptors.parse_path({"segments": [{"generator": [[0, 1], [0, 0]], "angle": 1.0}]})


def test_round_trip_through_files(tmp_path):
    state_obj = {"eigenvalues": [0.6, 0.4], "basis": "computational", "pairing": [2, 1]}
    path_obj = {"segments": [{"axis": [0, 1, 0], "angle": 2.0, "steps": 80}]}
    sp = tmp_path / "state.json"
    pp = tmp_path / "path.json"
    sp.write_text(json.dumps(state_obj))
    pp.write_text(json.dumps(path_obj))
    spec = descriptors.parse_state(descriptors.load_json(str(sp)))
    segs = descriptors.parse_path(descriptors.load_json(str(pp)))
    assert spec.pairing == (1, 0)
    assert segs[0].steps == 80
