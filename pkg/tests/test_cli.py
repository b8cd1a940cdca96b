import json

import numpy as np
import pytest

from blochvec.cli import main
from blochvec.documents import (
    amplitudes_document,
    coherence_document,
    dump_json,
    map_document,
    matrix_document,
)

from conftest import EXAMPLE_3X3


@pytest.fixture
def write_doc(tmp_path):
    counter = iter(range(1000))

    def _write(doc):
        path = tmp_path / f"doc{next(counter)}.json"
        dump_json(doc, str(path))
        return str(path)

    return _write


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check_maximally_mixed(write_doc, capsys):
    path = write_doc(matrix_document(np.eye(3) / 3))
    code, payload = run_json(capsys, ["check", path, "--json", "--verify"])
    assert code == 0
    assert payload["verdict"] == "PSD"
    assert payload["sign_changes"] == 3
    assert payload["eigenvalue_agreement"] is True


def test_check_indefinite_diag(write_doc, capsys):
    path = write_doc(matrix_document(np.diag([0.5, 0.75, -0.25])))
    code, payload = run_json(capsys, ["check", path, "--json"])
    assert code == 2
    assert payload["verdict"] == "NotPSD"
    assert payload["sign_changes"] == 2


def test_check_inverted_example_matrix(write_doc, capsys):
    path = write_doc(matrix_document(EXAMPLE_3X3))
    code, payload = run_json(capsys, ["check", path, "--invert", "--json"])
    assert code == 2
    assert payload["S"][2] < 0


def test_check_coherence_payload(write_doc, capsys):
    path = write_doc(coherence_document(np.zeros(15), dim=4))
    code, payload = run_json(capsys, ["check", path, "--json"])
    assert code == 0
    assert payload["verdict"] == "PSD"


def test_check_composite_coherence_uses_product_basis(write_doc, capsys):
    # coherence components of a dims-document refer to the product basis;
    # the verdict must match the matrix route on the same operator
    from blochvec import (CompositeLayout, build_product_basis, partial_transpose,
                          to_coherence, werner_state)

    layout = CompositeLayout(dims=(2, 2))
    pt = partial_transpose(werner_state(0.6), layout, 0)
    state = to_coherence(pt, build_product_basis((2, 2)))
    coh_path = write_doc(coherence_document(state.n, dim=4, dims=(2, 2)))
    mat_path = write_doc(matrix_document(pt, dims=(2, 2)))
    code_c, payload_c = run_json(capsys, ["check", coh_path, "--json"])
    code_m, payload_m = run_json(capsys, ["check", mat_path, "--json"])
    assert code_c == code_m == 2
    np.testing.assert_allclose(payload_c["S"], payload_m["S"], atol=1e-12)


def test_invariants_composite_coherence_matches_matrix_route(write_doc, capsys):
    from blochvec import build_product_basis, to_coherence, werner_state

    rho = werner_state(0.3)
    state = to_coherence(rho, build_product_basis((2, 2)))
    coh_path = write_doc(coherence_document(state.n, dim=4, dims=(2, 2)))
    mat_path = write_doc(matrix_document(rho))  # plain dim-4 document
    _, payload_c = run_json(capsys, ["invariants", coh_path, "--json"])
    _, payload_m = run_json(capsys, ["invariants", mat_path, "--json"])
    # invariant values are basis independent
    for k in payload_c["casimirs"]:
        assert payload_c["casimirs"][k] == pytest.approx(payload_m["casimirs"][k],
                                                         abs=1e-10)
    assert payload_c["degeneracy"] == payload_m["degeneracy"]
    assert payload_c["max_discrepancy"] < 1e-10


def test_check_parse_failure(write_doc, capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["check", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_check_non_hermitian_exits_1(write_doc, capsys):
    path = write_doc(matrix_document(np.array([[1.0, 1.0], [0.0, 0.0]])))
    assert main(["check", path]) == 1
    assert "error:" in capsys.readouterr().err


def test_check_human_readable(write_doc, capsys):
    path = write_doc(matrix_document(np.eye(2) / 2))
    assert main(["check", path]) == 0
    out = capsys.readouterr().out
    assert "verdict: PSD" in out
    assert "S1=1" in out.replace(" ", "")


def test_invariants_command(write_doc, capsys):
    path = write_doc(matrix_document(np.diag([0.5, 0.3, 0.2])))
    code, payload = run_json(capsys, ["invariants", path, "--json", "--max-order", "6"])
    assert code == 0
    assert payload["max_discrepancy"] < 1e-10
    assert payload["trace_powers"]["2"]["closed"] == pytest.approx(0.38, abs=1e-12)
    assert payload["casimirs"]["2"] == pytest.approx(0.07, abs=1e-12)
    assert payload["casimirs"]["3"] == pytest.approx(0.01, abs=1e-12)
    assert payload["degeneracy"] == "NonDegenerate"


def test_invariants_unsupported_order(write_doc, capsys):
    path = write_doc(matrix_document(np.eye(3) / 3))
    assert main(["invariants", path, "--max-order", "12"]) == 1


def test_werner_single_point(capsys):
    code, payload = run_json(capsys, ["werner", "--x", "0.6", "--json"])
    assert code == 0
    row = payload["rows"][0]
    assert row["ppt"] is False
    assert row["S3_pt"] < 0 and row["S4_pt"] < 0


def test_werner_sweep_boundary(capsys):
    code, payload = run_json(capsys, ["werner", "--sweep", "11", "--json"])
    assert code == 0
    assert len(payload["rows"]) == 11
    assert payload["boundary"] == pytest.approx(1 / 3, abs=1e-6)
    seps = [row["ppt"] for row in payload["rows"]]
    assert seps[0] is True and seps[-1] is False


def test_tangle_ghz(write_doc, capsys):
    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    path = write_doc(amplitudes_document(ghz))
    code, payload = run_json(capsys, ["tangle", path, "--json"])
    assert code == 0
    assert payload["tau"] == pytest.approx(1.0, abs=1e-8)
    assert payload["ckw_holds"] is True
    assert payload["permutation_spread"] <= 1e-8


def test_tangle_w_state(write_doc, capsys):
    w = np.zeros(8)
    w[1] = w[2] = w[4] = 1 / np.sqrt(3)
    path = write_doc(amplitudes_document(w))
    code, payload = run_json(capsys, ["tangle", path, "--json"])
    assert code == 0
    assert payload["tau"] == pytest.approx(0.0, abs=1e-8)
    assert payload["ckw_lhs"] == pytest.approx(8 / 9, abs=1e-8)
    assert payload["ckw_rhs"] == pytest.approx(8 / 9, abs=1e-8)


def test_tangle_product_state(write_doc, capsys):
    psi = np.zeros(8)
    psi[0] = 1.0
    path = write_doc(amplitudes_document(psi))
    code, payload = run_json(capsys, ["tangle", path, "--json"])
    assert code == 0
    for key in ("tau", "c2_ab", "c2_ac", "ckw_lhs", "ckw_rhs"):
        assert payload[key] == pytest.approx(0.0, abs=1e-8)


def test_tangle_unnormalized_exits_1(write_doc, capsys):
    path = write_doc(amplitudes_document(np.ones(8)))
    assert main(["tangle", path]) == 1


def test_map_identity_keeps_verdict(write_doc, capsys):
    rng = np.random.default_rng(5)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    state_path = write_doc(matrix_document(rho))
    map_path = write_doc(map_document(np.eye(8), np.zeros(8), dim=3))
    code, payload = run_json(capsys, ["map", map_path, state_path, "--json"])
    assert code == 0
    assert payload["verdict"] in ("PSD", "Boundary")


def test_map_zero_gives_maximally_mixed(write_doc, capsys):
    state_path = write_doc(matrix_document(np.diag([1.0, 0.0, 0.0])))
    map_path = write_doc(map_document(np.zeros((8, 8)), np.zeros(8), dim=3))
    code, payload = run_json(capsys, ["map", map_path, state_path, "--json"])
    assert code == 0
    assert np.abs(payload["image_coherence"]).max() == 0.0
    assert payload["verdict"] == "PSD"


def test_map_inversion_on_example_matrix(write_doc, capsys):
    state_path = write_doc(matrix_document(EXAMPLE_3X3))
    map_path = write_doc(map_document(-np.eye(8), np.zeros(8), dim=3))
    code, payload = run_json(capsys, ["map", map_path, state_path, "--json"])
    assert code == 2
    assert payload["verdict"] == "NotPSD"


def test_map_shape_mismatch(write_doc, capsys):
    state_path = write_doc(matrix_document(np.eye(4) / 4))
    map_path = write_doc(map_document(np.eye(8), np.zeros(8), dim=3))
    assert main(["map", map_path, state_path]) == 1


def test_cli_verdict_equals_library_call(write_doc, capsys):
    from blochvec import check_positivity

    rng = np.random.default_rng(8)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    mat = (g + g.conj().T) / 2
    mat += (1 - np.trace(mat).real) / 4 * np.eye(4)
    path = write_doc(matrix_document(mat))
    _, payload = run_json(capsys, ["check", path, "--json"])
    seq = check_positivity(mat)
    assert payload["verdict"] == seq.verdict.value
    assert payload["sign_changes"] == seq.sign_changes
    np.testing.assert_allclose(payload["S"], seq.S, atol=0)


def test_werner_domain_error(capsys):
    assert main(["werner", "--x", "1.5"]) == 1
    assert "error:" in capsys.readouterr().err


def test_tangle_wrong_length_exits_1(write_doc, capsys):
    path = write_doc(amplitudes_document(np.array([1.0, 0.0, 0.0, 0.0])))
    assert main(["tangle", path]) == 1


def test_invariants_qubit_has_only_quadratic(write_doc, capsys):
    path = write_doc(matrix_document(np.diag([0.75, 0.25])))
    code, payload = run_json(capsys, ["invariants", path, "--json", "--max-order", "4"])
    assert code == 0
    assert list(payload["casimirs"]) == ["2"]
    assert payload["casimirs"]["2"] == pytest.approx(0.25, abs=1e-12)
    assert "degeneracy" not in payload


def test_invariants_four_level_degeneracy_line(write_doc, capsys):
    path = write_doc(matrix_document(np.diag([0.5, 0.5, 0.0, 0.0])))
    code, payload = run_json(capsys, ["invariants", path, "--json", "--max-order", "4"])
    assert code == 0
    assert payload["degeneracy"] == "PatternAABB"


def test_tol_env_override(write_doc, capsys, monkeypatch):
    # slightly indefinite matrix: strict tolerance rejects, loose accepts
    mat = np.diag([0.6, 0.4 + 5e-7, -5e-7])
    path = write_doc(matrix_document(mat))
    monkeypatch.setenv("BLOCHVEC_TOL", "1e-12")
    assert main(["check", path]) == 2
    monkeypatch.setenv("BLOCHVEC_TOL", "1e-3")
    assert main(["check", path]) == 0
    monkeypatch.delenv("BLOCHVEC_TOL")
    capsys.readouterr()
    assert main(["check", path, "--tol", "1e-12"]) == 2
