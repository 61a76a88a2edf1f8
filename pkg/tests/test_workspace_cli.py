import json
from pathlib import Path

import pytest

from kcx.cli import run
from kcx.workspace import WorkspaceError, parse_workspace, render_workspace

FILES = Path(__file__).parent.parent / "examples_kcx"


def read(name: str) -> str:
    return (FILES / name).read_text()


def test_parse_circle_workspace():
    ws = parse_workspace(read("circle.kcx"))
    assert set(ws.algebras) == {"A"}
    assert set(ws.modules) == {"Omega"}
    assert set(ws.connections) == {"canonical"}
    nabla = ws.connections["canonical"]
    t = nabla.ctx.omega_tensor_M
    assert nabla.gamma["d(x)"] == t.element(["-x", "0", "0", "-x"])


def test_redefinition_rejected():
    text = read("circle.kcx") + "\nalgebra A { char: 0; vars: z; }\n"
    with pytest.raises(WorkspaceError):
        parse_workspace(text)


def test_unknown_reference_rejected():
    with pytest.raises(WorkspaceError) as err:
        parse_workspace("module M over Nowhere { kahler; }")
    assert "Nowhere" in str(err.value)


def test_fat_point_connection_fails_at_load():
    text = read("fatpoint.kcx") + "\nconnection bad on Omega {\n  d(x) -> 0;\n}\n"
    with pytest.raises(WorkspaceError) as err:
        parse_workspace(text)
    assert "residue" in str(err.value)


def test_parse_render_parse_identity():
    for name in ("circle.kcx", "fatpoint.kcx", "p1.kcx", "plane.kcx"):
        ws = parse_workspace(read(name))
        rendered = render_workspace(ws)
        ws2 = parse_workspace(rendered)
        assert render_workspace(ws2) == rendered
        assert set(ws2.algebras) == set(ws.algebras)
        assert set(ws2.connections) == set(ws.connections)
        for conn in ws.connections:
            a = ws.connections[conn]
            b = ws2.connections[conn]
            assert [a.gamma[g].comps for g in a.module.gens] == [
                b.gamma[g].comps for g in b.module.gens
            ]


def test_presented_module_relations():
    text = (
        "algebra A { char: 0; vars: x, y; }\n"
        "module M over A { gens: u, v; rel: x*u + y*v; }\n"
    )
    ws = parse_workspace(text)
    M = ws.modules["M"]
    assert M.element({"u": "x", "v": "y"}).is_zero()
    with pytest.raises(WorkspaceError):
        parse_workspace("algebra A { char: 0; vars: x; }\nmodule M over A { gens: u; rel: u^2; }")


def test_char_override():
    ws = parse_workspace(read("circle.kcx"), char_override=5)
    assert ws.char == 5
    assert ws.algebras["A"].field.char == 5


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_check_circle():
    code, text = run(["check", str(FILES / "circle.kcx")])
    assert code == 0
    assert "[PASS] canonical:H.1" in text
    assert "[PASS] canonical:C.2" in text


def test_cli_check_json_schema():
    code, text = run(["check", str(FILES / "circle.kcx"), "--json"])
    assert code == 0
    payload = json.loads(text)
    assert payload["command"] == "check"
    assert payload["solver"] is None
    assert {c["id"] for c in payload["checks"]} >= {"well-defined[canonical]", "canonical:K.4"}
    assert all(set(c) == {"id", "status", "witness", "residue"} for c in payload["checks"])


def test_cli_solve_fatpoint_empty():
    code, text = run(["solve", str(FILES / "fatpoint.kcx"), "--module", "Omega", "--degree", "3", "--json"])
    assert code == 0
    payload = json.loads(text)
    assert payload["solver"] == {"status": "empty", "dim": -1}


def test_cli_solve_circle_family():
    code, text = run(["solve", str(FILES / "circle.kcx"), "--module", "Omega", "--degree", "1", "--json"])
    assert code == 0
    assert json.loads(text)["solver"]["status"] == "family"


def test_cli_curvature_plane():
    code, text = run(["curvature", str(FILES / "plane.kcx")])
    assert code == 0
    assert "not flat" in text


def test_cli_torsion_plane():
    code, text = run(["torsion", str(FILES / "plane.kcx")])
    assert code == 0
    assert "torsion-free" in text  # the twisted connection is symmetric


def test_cli_convert_roundtrip():
    code, text = run(["convert", str(FILES / "circle.kcx")])
    assert code == 0
    assert "[PASS] roundtrip[canonical]" in text
    assert "horizontal form of canonical:" in text


def test_cli_glue_p1():
    code, text = run(["glue", str(FILES / "p1.kcx"), "--degree", "6", "--json"])
    assert code == 0
    assert json.loads(text)["solver"] == {"status": "empty", "dim": -1}


def test_cli_glue_p1_char2():
    code, text = run(["glue", str(FILES / "p1.kcx"), "--degree", "6", "--char", "2", "--json"])
    assert code == 0
    payload = json.loads(text)
    assert payload["solver"]["status"] == "unique"


def test_cli_gallery():
    code, text = run(["gallery", "--json"])
    assert code == 0
    payload = json.loads(text)
    ids = [c["id"] for c in payload["checks"]]
    assert len(ids) >= 10
    assert "circle-naive-reject" in ids
    assert all(c["status"] == "pass" for c in payload["checks"])


def test_cli_gallery_deterministic():
    _, text1 = run(["gallery", "--json"])
    _, text2 = run(["gallery", "--json"])
    assert text1 == text2


def test_cli_naive_circle_reports_residue(tmp_path):
    bad = tmp_path / "naive.kcx"
    bad.write_text(
        "algebra A { char: 0; vars: x, y; rel: x^2 + y^2 - 1; }\n"
        "module Omega over A { kahler; }\n"
        "connection naive on Omega { d(x) -> 0; d(y) -> 0; }\n"
    )
    code, text = run(["check", str(bad), "--json"])
    assert code == 1
    payload = json.loads(text)
    assert payload["checks"][0]["id"] == "well-defined[naive]"
    assert payload["checks"][0]["residue"] == "2*d(x)@d(x) + 2*d(y)@d(y)"


def test_cli_exit_codes():
    code, text = run(["check", "/nonexistent/file.kcx"])
    assert code == 2
    code, _ = run(["solve", str(FILES / "circle.kcx"), "--module", "Missing"])
    assert code == 2
    # a failing check exits 1
    bad = FILES / ".." / "examples_kcx"  # reuse plane file with a broken glue-free check
    code, text = run(["check", str(FILES / "p1.kcx")])
    assert code == 1  # no connections in the file
