"""The shipped sample files keep working as documented."""

from pathlib import Path

from fusionalg.cli import entry

DATA = Path(__file__).resolve().parent.parent / "data"


def test_sample_documents_check_clean(capsys):
    for name in (
        "hopf_fun_z3.json",
        "comodule_regular_z2.json",
        "comodule_trivial_z2.json",
        "gset_free_two_orbits_z2.json",
        "gset_regular_z3.json",
    ):
        assert entry(["check", str(DATA / name)]) == 0, name
    capsys.readouterr()


def test_sample_solve_connection_outcomes(capsys):
    assert entry(["solve-connection", str(DATA / "comodule_regular_z2.json")]) == 0
    assert entry(["solve-connection", str(DATA / "comodule_trivial_z2.json")]) == 3
    out = capsys.readouterr().out
    assert "strong connection found" in out
    assert "certified infeasible" in out


def test_sample_scenarios_run_clean(tmp_path, capsys):
    for command, name in (
        ("fusion", "scenario_theorem_main.json"),
        ("fusion", "scenario_pullback.json"),
        ("classical", "scenario_join_vs_fusion.json"),
        ("classical", "scenario_diagonal_join_freeness.json"),
    ):
        cert = tmp_path / f"{name}.cert.json"
        assert entry([command, str(DATA / name), "--output", str(cert)]) == 0, name
        assert entry(["verify-certificate", str(cert)]) == 0, name
    capsys.readouterr()
