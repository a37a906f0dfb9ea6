"""End-to-end CLI runs: exit codes, file outputs, determinism."""

from __future__ import annotations

import json

import pytest

from lcsq.cli import main

EX_SYS = "11100;10011|01\n"
K33_G = "6\n" + "".join(f"{a} {b}\n" for a in (1, 2, 3) for b in (4, 5, 6))
K34_G = "7\n" + "".join(f"{a} {b}\n" for a in (1, 2, 3, 4) for b in (5, 6, 7))


@pytest.fixture()
def files(tmp_path):
    (tmp_path / "ex.sys").write_text(EX_SYS)
    (tmp_path / "k33.g").write_text(K33_G)
    (tmp_path / "k34.g").write_text(K34_G)
    (tmp_path / "bad.sys").write_text("111;11|00\n")
    return tmp_path


def run(*argv) -> int:
    return main([str(a) for a in argv])


def test_build_demo_system(files, capsys):
    out = files / "fig1.json"
    assert run("build", "--system", files / "ex.sys", "--construction", "Gstar",
               "--out", out) == 0
    assert "vertices: 8, edges: 20" in capsys.readouterr().out
    data = json.loads(out.read_text())
    assert len(data["vertices"]) == 8
    assert len(data["edges"]) == 20


def test_build_full_decolor(files, capsys):
    out = files / "gpp.json"
    assert run("build", "--graph", files / "k33.g", "--b", "100000",
               "--construction", "Gstar", "--decolor", "full", "--out", out) == 0
    assert "vertices: 426" in capsys.readouterr().out
    data = json.loads(out.read_text())
    assert all("color" not in v for v in data["vertices"])


def test_build_parse_error_exit_2(files, capsys):
    assert run("build", "--system", files / "bad.sys", "--construction", "G") == 2
    assert "row length mismatch" in capsys.readouterr().err


def test_build_requires_input(files):
    assert run("build", "--construction", "G") == 2


def test_build_deterministic(files):
    out1, out2 = files / "a.json", files / "b.json"
    run("build", "--graph", files / "k33.g", "--construction", "Gstar",
        "--decolor", "full", "--out", out1)
    run("build", "--graph", files / "k33.g", "--construction", "Gstar",
        "--decolor", "full", "--out", out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_solve(files, capsys):
    assert run("solve", "--system", files / "ex.sys") == 0
    assert "solution:" in capsys.readouterr().out
    # K3,3 with b = e1 has no solution
    assert run("solve", "--graph", files / "k33.g", "--b", "100000") == 1


def test_group_k33(files, capsys):
    report = files / "g.json"
    assert run("group", "--graph", files / "k33.g", "--homogeneous",
               "--json", report) == 0
    assert "order: 16, abelian: True" in capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data["order"] == 16 and data["abelian"] is True
    assert data["abelianized_order"] == 16


def test_group_k34(files, capsys):
    assert run("group", "--graph", files / "k34.g", "--homogeneous") == 0
    assert "order: 256, abelian: False" in capsys.readouterr().out


def test_group_gamma_word(files, capsys):
    report = files / "gamma.json"
    assert run("group", "--graph", files / "k33.g", "--b", "100000",
               "--word", "gamma", "--json", report) == 0
    assert "!= identity" in capsys.readouterr().out
    assert json.loads(report.read_text())["word_is_identity"] is False


def test_group_cap_exit_3(files):
    assert run("group", "--graph", files / "k34.g", "--homogeneous",
               "--cap", "10") == 3


def test_coset_cap_env_override(files, monkeypatch):
    monkeypatch.setenv("LCSQ_COSET_CAP", "10")
    assert run("group", "--graph", files / "k34.g", "--homogeneous") == 3


def test_cert_qiso_pauli(files, capsys):
    report = files / "report.json"
    assert run("cert", "qiso", "--graph", files / "k33.g", "--b1", "000000",
               "--b2", "100000", "--rep", "pauli", "--report", report) == 0
    assert "certificate passes" in capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data["verification"]["passed"] is True


def test_cert_qiso_pauli_with_lift(files, capsys):
    report = files / "lifted.json"
    assert run("cert", "qiso", "--graph", files / "k33.g", "--b1", "000000",
               "--b2", "100000", "--rep", "pauli", "--lift",
               "--report", report) == 0
    out = capsys.readouterr().out
    assert "lifted certificate over 426-vertex graphs passes" in out
    data = json.loads(report.read_text())
    assert data["lifted_verification"]["passed"] is True


def test_cert_qut_regular_k33(files, capsys):
    assert run("cert", "qut", "--graph", files / "k33.g", "--rep", "regular") == 0
    out = capsys.readouterr().out
    assert "witness: none" in out


def test_cert_qut_regular_k34_witness(files, capsys):
    cert_out = files / "cert.json"
    assert run("cert", "qut", "--graph", files / "k34.g", "--rep", "regular",
               "--out", cert_out) == 0
    assert "witness: found" in capsys.readouterr().out
    data = json.loads(cert_out.read_text())
    assert data["backend"] == "group_algebra"


def test_cert_cap_exit_3(files):
    assert run("cert", "qut", "--graph", files / "k34.g", "--rep", "regular",
               "--cap", "10") == 3


def test_cert_infinite_group_caps(files, capsys):
    # the demo system's homogeneous solution group is infinite (it contains
    # a free product of two involutions), so enumeration must cap out
    assert run("cert", "qut", "--system", files / "ex.sys", "--rep", "regular",
               "--cap", "2000") == 3
    assert "exceeded cap" in capsys.readouterr().out


def test_cert_pauli_usage_errors(files):
    assert run("cert", "qiso", "--graph", files / "k34.g", "--b1", "0000000",
               "--b2", "1000000", "--rep", "pauli") == 2
    assert run("cert", "qiso", "--graph", files / "k33.g", "--b1", "000000",
               "--b2", "110000", "--rep", "pauli") == 2
    assert run("cert", "qiso", "--graph", files / "k33.g", "--rep", "pauli") == 2


def test_iso_and_aut(files, capsys):
    a, b = files / "a.json", files / "b.json"
    run("build", "--graph", files / "k33.g", "--construction", "Gstar", "--out", a)
    run("build", "--graph", files / "k33.g", "--b", "100000",
        "--construction", "Gstar", "--out", b)
    mapping = files / "map.json"
    assert run("iso", a, a, "--map-out", mapping) == 0
    assert "isomorphic" in capsys.readouterr().out
    assert json.loads(mapping.read_text())["0"] == 0
    assert run("iso", a, b) == 1
    assert "non-isomorphic" in capsys.readouterr().out
    report = files / "aut.json"
    assert run("aut", a, "--json", report) == 0
    assert json.loads(report.read_text())["order"] == 16


def test_unknown_flag_exit_2(files):
    assert run("group", "--graph", files / "k33.g", "--no-such-flag") == 2


def test_malformed_graph_json_exit_2(files, capsys):
    bad = files / "broken.json"
    bad.write_text('{"vertices": [{"id": 0}]}')  # no "edges"
    assert run("aut", bad) == 2
    assert "error:" in capsys.readouterr().err
    bad.write_text("not json at all")
    assert run("aut", bad) == 2
