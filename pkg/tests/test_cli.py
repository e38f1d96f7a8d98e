from __future__ import annotations

import io
import json
from fractions import Fraction


from efx_multigraph import build_instance, save_instance, running_example
from efx_multigraph.cli import main
from efx_multigraph.model import instance_to_text


def run_cli(capsys, argv, stdin_text=None, monkeypatch=None):
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_gen_pipe_decide(capsys, monkeypatch):
    code, doc = run_cli(capsys, ["gen", "--family", "c4-counter"])
    assert code == 0
    code, verdict = run_cli(capsys, ["decide", "--target", "orientation"],
                            stdin_text=json.dumps(doc), monkeypatch=monkeypatch)
    assert code == 0
    assert verdict["exists"] is False
    assert verdict["state_space"] == 256


def test_solve_then_verify_roundtrip(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    save_instance(running_example(), inst_path)
    code, alloc_doc = run_cli(capsys, ["solve", str(inst_path), "--method", "bipartite"])
    assert code == 0
    alloc_path = tmp_path / "alloc.json"
    alloc_path.write_text(json.dumps(alloc_doc))
    code, verdict = run_cli(capsys, ["verify", str(inst_path), str(alloc_path)])
    assert code == 0
    assert verdict["pass"] is True


def test_solve_trace_embeds_snapshots(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    save_instance(running_example(), inst_path)
    code, doc = run_cli(capsys, ["solve", str(inst_path), "--trace"])
    assert code == 0
    assert set(doc["trace"]["snapshots"]) == {"greedy", "saturate", "safe", "final"}
    assert doc["trace"]["flags"]["safe"]["p5"] is True


def test_verify_failure_exit_code(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    save_instance(build_instance(2, [(0, 1, 2, 2), (0, 1, 1, 1)]), inst_path)
    alloc_path = tmp_path / "alloc.json"
    alloc_path.write_text('{"bundles": [[0, 1], []]}')
    code, verdict = run_cli(capsys, ["verify", str(inst_path), str(alloc_path)])
    assert code == 2
    assert verdict["pass"] is False
    assert verdict["witnesses"][0]["envier"] == 1


def test_verify_orientation_flag(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    save_instance(build_instance(3, [(0, 1, 2, 2)]), inst_path)
    alloc_path = tmp_path / "alloc.json"
    alloc_path.write_text('{"bundles": [[], [], [0]]}')  # wasteful but EFX
    code, verdict = run_cli(capsys, ["verify", str(inst_path), str(alloc_path)])
    assert code == 0
    code, verdict = run_cli(capsys, ["verify", str(inst_path), str(alloc_path), "--orientation"])
    assert code == 2
    assert verdict["is_orientation"] is False


def test_verify_custom_alpha(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    save_instance(build_instance(2, [(0, 1, 4, 4), (0, 1, 3, 3), (0, 1, 3, 3)]), inst_path)
    alloc_path = tmp_path / "alloc.json"
    alloc_path.write_text('{"bundles": [[1], [0, 2]]}')
    code, _ = run_cli(capsys, ["verify", str(inst_path), str(alloc_path)])
    assert code == 2
    code, verdict = run_cli(capsys, ["verify", str(inst_path), str(alloc_path), "--alpha", "3/4"])
    assert code == 0
    assert verdict["alpha"] == "3/4"


def test_decide_budget_exit(capsys, monkeypatch):
    inst = build_instance(2, [(0, 1, 1, 1)] * 6)
    code, _ = run_cli(capsys, ["decide", "--target", "orientation", "--budget", "10"],
                      stdin_text=instance_to_text(inst), monkeypatch=monkeypatch)
    assert code == 3


def test_decide_budget_env_override(capsys, monkeypatch):
    monkeypatch.setenv("EFX_ORACLE_BUDGET", "10")
    inst = build_instance(2, [(0, 1, 1, 1)] * 6)
    code, _ = run_cli(capsys, ["decide", "--target", "orientation"],
                      stdin_text=instance_to_text(inst), monkeypatch=monkeypatch)
    assert code == 3


def test_decide_count_requires_orientation(capsys, monkeypatch):
    inst = build_instance(2, [(0, 1, 1, 1)])
    code, _ = run_cli(capsys, ["decide", "--target", "allocation", "--count"],
                      stdin_text=instance_to_text(inst), monkeypatch=monkeypatch)
    assert code == 1


def test_method_structure_mismatch_exit(capsys, monkeypatch):
    path = build_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1)])
    code, _ = run_cli(capsys, ["solve", "--method", "star"],
                      stdin_text=instance_to_text(path), monkeypatch=monkeypatch)
    assert code == 4


def test_auto_rejects_general_graphs(capsys, monkeypatch):
    general = build_instance(4, [(0, 1, 1, 1), (1, 2, 1, 1), (0, 2, 1, 1), (2, 3, 1, 1)])
    code, _ = run_cli(capsys, ["solve"],
                      stdin_text=instance_to_text(general), monkeypatch=monkeypatch)
    assert code == 4


def test_auto_routes_odd_cycle(capsys, monkeypatch):
    pairs = []
    for i in range(5):
        j = (i + 1) % 5
        pairs += [(min(i, j), max(i, j), 2, 2), (min(i, j), max(i, j), 1, 1)]
    inst = build_instance(5, pairs)
    code, doc = run_cli(capsys, ["solve"], stdin_text=instance_to_text(inst),
                        monkeypatch=monkeypatch)
    assert code == 0
    assert sum(len(b) for b in doc["bundles"]) == inst.m


def test_auto_triangle_falls_back_to_oracle(capsys, monkeypatch):
    triangle = build_instance(3, [(0, 1, 2, 2), (1, 2, 3, 3), (0, 2, 4, 4)])
    code, doc = run_cli(capsys, ["solve"], stdin_text=instance_to_text(triangle),
                        monkeypatch=monkeypatch)
    assert code == 0
    assert sum(len(b) for b in doc["bundles"]) == 3


def test_parse_error_exit(capsys, monkeypatch):
    code, _ = run_cli(capsys, ["analyze"], stdin_text="{nope", monkeypatch=monkeypatch)
    assert code == 1


def test_orient_reports_alphas(capsys, monkeypatch):
    code, doc = run_cli(capsys, ["orient", "--method", "half-efx"],
                        stdin_text=instance_to_text(running_example()),
                        monkeypatch=monkeypatch)
    assert code == 0
    assert len(doc["alpha_per_agent"]) == 7
    assert all(Fraction(a) >= Fraction(1, 2) for a in doc["alpha_per_agent"])


def test_orient_star(capsys, monkeypatch):
    inst = build_instance(3, [(0, 1, 4, 4), (0, 1, 2, 2), (0, 2, 5, 5)])
    code, doc = run_cli(capsys, ["orient", "--method", "star"],
                        stdin_text=instance_to_text(inst), monkeypatch=monkeypatch)
    assert code == 0
    assert doc["alpha_per_agent"] == ["1", "1", "1"]


def test_analyze_report(capsys, monkeypatch):
    code, doc = run_cli(capsys, ["analyze"], stdin_text=instance_to_text(running_example()),
                        monkeypatch=monkeypatch)
    assert code == 0
    assert doc["family"] == "bipartite"
    assert doc["bipartition"] == {"s": [0, 1, 2, 3], "t": [4, 5, 6]}


def test_reduce_partition_command(capsys):
    code, doc = run_cli(capsys, ["reduce-partition", "--set", "1,2,3"])
    assert code == 0
    assert doc["n"] == 8
    p_values = [e["wu"] for e in doc["edges"] if {e["u"], e["v"]} == {3, 4}]
    assert sorted(p_values) == ["1", "2", "3"]


def test_gen_random_roundtrip(capsys, monkeypatch):
    code, doc = run_cli(capsys, ["gen", "--family", "random", "--n", "5", "--m", "8",
                                 "--q-max", "2", "--shape", "bipartite", "--seed", "11"])
    assert code == 0
    code, rep = run_cli(capsys, ["analyze"], stdin_text=json.dumps(doc),
                        monkeypatch=monkeypatch)
    assert code == 0
    assert rep["q"] <= 2


def test_gen_bad_family_usage(capsys):
    assert main(["gen", "--family", "nonsense"]) == 1
