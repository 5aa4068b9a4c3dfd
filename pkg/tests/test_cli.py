"""End-to-end checks of the command line layer, run in process."""

import io
import json
import sys

import pytest

from tatekit import cli
from tatekit.errors import TheoremViolationError, TransferNonzeroError
from tatekit.gmodule import augmentation_kernel_module, cyclic, klein_four


def mul_table(g):
    return [[g.mul(a, b) for b in g.elements()] for a in g.elements()]


def matrix_rows(m):
    return [list(row) for row in m.entries]


def klein_scenario():
    v4 = klein_four()
    aug = augmentation_kernel_module(v4)
    return {
        "theta": {"mul_table": mul_table(v4)},
        "module": {
            "rank": 3,
            "generators": [
                {"element_index": g, "matrix": matrix_rows(aug.action[g])} for g in (1, 2)
            ],
        },
        "places": [
            {"label": "v1", "decomposition_members": [0, 1]},
            {"label": "v2", "decomposition_members": [0, 2]},
            {"label": "v3", "decomposition_members": [0, 3]},
        ],
    }


def quarter_scenario():
    g = cyclic(4)
    return {
        "theta": {"mul_table": mul_table(g)},
        "module": {
            "rank": 2,
            "generators": [{"element_index": 1, "matrix": [[0, -1], [1, 0]]}],
        },
        "places": [
            {"label": "v", "decomposition_members": [0, 1, 2, 3]},
            {"label": "u", "decomposition_members": [0, 1, 2, 3]},
        ],
    }


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    body = json.loads(captured.out) if captured.out else None
    return code, body, captured.err


def write(tmp_path, name, obj) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


# -- single operations -------------------------------------------------------


def test_snf_report_shape(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"matrix": [[2, 4], [6, 8]]})
    code, body, _ = run_cli(capsys, ["snf", path])
    assert code == 0
    assert body["op"] == "snf"
    assert body["version"]
    assert len(body["input_digest"]) == 64
    assert body["result"]["diagonal"] == ["2", "4"]
    assert body["result"]["rank"] == "2"
    assert body["trace"] == ["smith_normal_form"]


def test_digest_ignores_formatting_and_int_spelling(tmp_path, capsys):
    a = write(tmp_path, "a.json", {"matrix": [[2, 4], [6, 8]]})
    b = tmp_path / "b.json"
    b.write_text('{\n  "matrix": [ [ "2", "4" ],\n               [ "6", "8" ] ]\n}\n')
    _, body_a, _ = run_cli(capsys, ["snf", a])
    _, body_b, _ = run_cli(capsys, ["snf", str(b)])
    assert body_a == body_b


def test_reports_are_byte_deterministic(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"matrix": [[1, 2], [3, 4]]})
    cli.main(["snf", path])
    first = capsys.readouterr().out
    cli.main(["snf", path])
    second = capsys.readouterr().out
    assert first == second
    assert first.endswith("\n")


def test_stdin_and_out_file(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO('{"theta_order": 4}'))
    out = tmp_path / "report.json"
    code = cli.main(["exponents", "-", "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out == ""
    body = json.loads(out.read_text())
    assert body["result"] == {"theta_order": "4", "lam": "2", "rho": "49", "d": "52"}


def test_trace_goes_to_stderr(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"matrix": [[1]]})
    code, _, err = run_cli(capsys, ["snf", path, "--trace"])
    assert code == 0
    assert err == "# smith_normal_form\n"


def test_tate_and_transfer_ops(tmp_path, capsys):
    payload = {
        "group": {"mul_table": mul_table(cyclic(4))},
        "module": {
            "rank": 2,
            "generators": [{"element_index": 1, "matrix": [[0, -1], [1, 0]]}],
        },
    }
    path = write(tmp_path, "tate.json", payload)
    code, body, _ = run_cli(capsys, ["tate", path])
    assert code == 0
    assert body["result"]["coinvariants"]["invariant_factors"] == ["2"]
    assert body["result"]["h_minus1"]["invariant_factors"] == ["2"]
    assert body["result"]["h0"]["order"] == "1"

    payload["subgroup_members"] = [0, 2]
    payload["class"] = ["1"]
    path = write(tmp_path, "transfer.json", payload)
    code, body, _ = run_cli(capsys, ["transfer", path])
    assert code == 0
    assert body["result"]["target"]["invariant_factors"] == ["2", "2"]
    assert body["result"]["nonzero"] is True


def test_counterexample_op(tmp_path, capsys):
    path = write(tmp_path, "c.json", {"p": 13})
    code, body, _ = run_cli(capsys, ["counterexample-local", path])
    assert code == 0
    res = body["result"]
    assert res["period"] == "2"
    assert res["index_divisibility"] == "4"
    assert [b["square_class"] for b in res["branches"]] == ["eps", "pi", "eps*pi"]
    assert all(b["restriction_nonzero"] is True for b in res["branches"])


def test_teichmuller_uses_env_precision(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "t.json", {"p": 5, "alpha": 2})
    monkeypatch.setenv("TATEKIT_PRECISION", "3")
    code, body, _ = run_cli(capsys, ["teichmuller", path])
    assert code == 0
    assert body["result"]["precision"] == "3"
    assert body["result"]["value"] == "57"
    assert body["result"]["digits"] == ["2", "1", "2"]  # 57 = 2 + 1*5 + 2*25

    # explicit payload precision wins over the environment
    path = write(tmp_path, "t2.json", {"p": 5, "alpha": 2, "precision": 2})
    _, body, _ = run_cli(capsys, ["teichmuller", path])
    assert body["result"]["value"] == "7"

    monkeypatch.setenv("TATEKIT_PRECISION", "zero")
    code, body, _ = run_cli(capsys, ["teichmuller", path])
    assert code == 1 and body["error"]["code"] == "DOMAIN_ERROR"
    monkeypatch.setenv("TATEKIT_PRECISION", "0")
    code, body, _ = run_cli(capsys, ["teichmuller", path])
    assert code == 1


def test_quad_sub_op(tmp_path, capsys):
    path = write(tmp_path, "q.json", {"p": 5, "f": 1, "e": 2, "alpha": 2})
    code, body, _ = run_cli(capsys, ["quad-sub", path])
    assert code == 0
    assert body["result"]["square_class"] == "eps*pi"
    assert body["result"]["is_unit_class"] is False
    assert body["result"]["derivation"]

    path = write(tmp_path, "q2.json", {"p": 5, "f": 1, "e": 3})
    code, body, _ = run_cli(capsys, ["quad-sub", path])
    assert code == 1
    assert body["error"]["code"] == "ODD_DEGREE"


def test_sha1_op(tmp_path, capsys):
    path = write(tmp_path, "s.json", {"scenario": klein_scenario()})
    code, body, _ = run_cli(capsys, ["sha1", path])
    assert code == 0
    res = body["result"]
    assert res["s_form"]["invariant_factors"] == ["2"]
    assert res["shapiro_form"]["invariant_factors"] == ["2"]
    assert res["agree"] is True


def test_obstruction_op(tmp_path, capsys):
    scen = quarter_scenario()
    scen["local_classes"] = {"v": [1], "u": [1]}
    path = write(tmp_path, "o.json", {"scenario": scen})
    code, body, _ = run_cli(capsys, ["tate-obstruction", path])
    assert code == 0
    assert body["result"]["verdict"] == "EXISTS"

    scen["local_classes"] = {"v": [1]}
    path = write(tmp_path, "o2.json", {"scenario": scen})
    code, body, _ = run_cli(capsys, ["tate-obstruction", path])
    assert code == 0
    assert body["result"]["verdict"] == "OBSTRUCTED"
    assert body["result"]["obstruction"] == ["1"]

    del scen["local_classes"]
    path = write(tmp_path, "o3.json", {"scenario": scen})
    code, body, _ = run_cli(capsys, ["tate-obstruction", path])
    assert code == 1
    assert body["error"]["code"] == "SCHEMA_ERROR"


def test_subgroup_bound_op(tmp_path, capsys):
    path = write(tmp_path, "g.json", {"group": {"mul_table": mul_table(klein_four())}})
    code, body, _ = run_cli(capsys, ["subgroup-bound", path])
    assert code == 0
    assert body["result"]["subgroup_count"] == "5"
    assert body["result"]["holds"] is True


def test_split_sim_op(tmp_path, capsys):
    payload = {
        "scenario": klein_scenario(),
        "n": 2,
        "sigma": [
            {"label": "v1", "generators": [[1, 1]]},
            {"label": "v2", "generators": [[2, 1]]},
            {"label": "v3", "generators": [[3, 1]]},
        ],
        "alpha": [1],
    }
    path = write(tmp_path, "tower.json", payload)
    code, body, _ = run_cli(capsys, ["split-sim", path])
    assert code == 0
    res = body["result"]
    assert res["chosen_s"] == "3"
    assert res["cardinality_sequence"] == ["7", "13", "13"]
    assert res["transfer_vanished"] is True
    assert res["alpha1_nonzero"] is True
    assert res["splitting_degree"] == {"base": "2", "exponent": "2"}
    assert res["bound"] == {"base": "2", "exponent": "49"}


# -- failure modes -------------------------------------------------------------


def test_schema_error_exits_one(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"matrix": "nope"})
    code, body, _ = run_cli(capsys, ["snf", path])
    assert code == 1
    assert body["error"]["code"] == "SCHEMA_ERROR"


def test_parse_error_and_missing_file(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, body, _ = run_cli(capsys, ["snf", str(broken)])
    assert code == 1 and body["error"]["code"] == "PARSE_ERROR"
    code, body, _ = run_cli(capsys, ["snf", str(tmp_path / "absent.json")])
    assert code == 1 and body["error"]["code"] == "DOMAIN_ERROR"


def test_bool_is_not_an_integer(tmp_path, capsys):
    path = write(tmp_path, "b.json", {"theta_order": True})
    code, body, _ = run_cli(capsys, ["exponents", path])
    assert code == 1
    assert body["error"]["code"] == "SCHEMA_ERROR"


def test_theorem_violations_map_to_exit_two():
    assert cli._exit_code(TheoremViolationError("x")) == 2
    assert cli._exit_code(TransferNonzeroError("x")) == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("tatekit ")


# -- run and batch ---------------------------------------------------------------


def test_run_single_job(tmp_path, capsys):
    path = write(tmp_path, "job.json", {"op": "exponents", "input": {"theta_order": 2}})
    code, body, _ = run_cli(capsys, ["run", path])
    assert code == 0
    assert body["op"] == "exponents"
    assert body["result"]["rho"] == "3"


def test_run_rejects_unknown_op(tmp_path, capsys):
    path = write(tmp_path, "job.json", {"op": "frobnicate", "input": {}})
    code, body, _ = run_cli(capsys, ["run", path])
    assert code == 1
    assert body["error"]["code"] == "SCHEMA_ERROR"


def test_run_needs_exactly_one_source(tmp_path, capsys):
    code, body, _ = run_cli(capsys, ["run"])
    assert code == 1 and body["error"]["code"] == "DOMAIN_ERROR"
    job = write(tmp_path, "job.json", {"op": "exponents", "input": {"theta_order": 2}})
    batch = write(tmp_path, "batch.json", {"jobs": []})
    code, body, _ = run_cli(capsys, ["run", job, "--batch", batch])
    assert code == 1 and body["error"]["code"] == "DOMAIN_ERROR"


def test_batch_preserves_order_and_aggregates_exit(tmp_path, capsys):
    jobs = {
        "jobs": [
            {"op": "exponents", "input": {"theta_order": 1}},
            {"op": "teichmuller", "input": {"p": 5, "alpha": 0}},  # zero input fails
            {"op": "exponents", "input": {"theta_order": 4}},
        ]
    }
    path = write(tmp_path, "batch.json", jobs)
    code, body, _ = run_cli(capsys, ["run", "--batch", path])
    assert code == 1
    reports = body["reports"]
    assert len(reports) == 3
    assert reports[0]["result"]["rho"] == "1"
    assert reports[1]["error"]["code"] == "ZERO_INPUT"
    assert reports[1]["op"] == "teichmuller"
    assert reports[2]["result"]["rho"] == "49"


def test_batch_of_successes_exits_zero(tmp_path, capsys):
    jobs = {
        "jobs": [
            {"op": "exponents", "input": {"theta_order": k}} for k in (1, 2, 3, 4, 8, 16)
        ]
    }
    path = write(tmp_path, "batch.json", jobs)
    code, body, _ = run_cli(capsys, ["run", "--batch", path])
    assert code == 0
    assert [r["result"]["theta_order"] for r in body["reports"]] == [
        "1", "2", "3", "4", "8", "16",
    ]


def test_empty_batch(tmp_path, capsys):
    path = write(tmp_path, "batch.json", {"jobs": []})
    code, body, _ = run_cli(capsys, ["run", "--batch", path])
    assert code == 0
    assert body["reports"] == []


def test_batch_rejects_non_list(tmp_path, capsys):
    path = write(tmp_path, "batch.json", {"jobs": {"op": "exponents"}})
    code, body, _ = run_cli(capsys, ["run", "--batch", path])
    assert code == 1 and body["error"]["code"] == "SCHEMA_ERROR"
