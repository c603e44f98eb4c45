import json
import math

import pytest

from radmax import cli, dyadic, experiments
from radmax.experiments import Scenario, ScenarioError
from radmax.parsing import parse_set

SMALL = {
    "kernel-validate": {"params": {"n_pairs": 20}},
    "conditions": {"set": ["lacunary:ratio=1/2,k=-8..0", "dilated:base={cantor:depth=6},k=-4..0"],
                   "grids": {"delta": "2^-2..2^-8", "n_max": 8, "max_len": 8}},
    "equivalences": {"set": "lacunary:ratio=1/2,k=-8..0"},
    "sharpness": {"set": "dilated:base={cantor:depth={depth}},k=-4..0", "params": {"p": [1.1]},
                  "grids": {"ladder": [3, 4, 5, 6]}},
    "domination": {"set": "lacunary:ratio=1/2,k=-3..2", "params": {"profiles": ["ball:R=1"]},
                   "grids": {"r": "geo:0.3..3:16", "t_levels": 3}},
    "lower-bound": {"set": "lacunary:ratio=1/2,k=-3..2", "params": {"n_pairs": 8}},
}


def write_config(tmp_path, kind, **extra):
    cfg = {"name": kind.replace("-", "_"), "kind": kind, **SMALL[kind], **extra}
    path = tmp_path / f"{kind}.json"
    path.write_text(json.dumps(cfg))
    return path


# -- runner ----------------------------------------------------------------------------

@pytest.mark.parametrize("kind", experiments.KINDS)
def test_every_kind_runs_and_is_reproducible(tmp_path, kind):
    cfg = write_config(tmp_path, kind)
    out = tmp_path / "out"
    snapshots = []
    for _ in range(2):
        res = experiments.run({**json.loads(cfg.read_text()), "output": str(out)})
        assert res.status == experiments.EXIT_OK, res.failures
        snapshots.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert snapshots[0] == snapshots[1]
    assert any(n.endswith("_summary.json") for n in snapshots[0])
    assert any(n.endswith(".csv") for n in snapshots[0])
    summary = json.loads((out / f"{cfg.stem.replace('-', '_')}_summary.json").read_text())
    # defaults are written back into the summary
    assert summary["scenario"]["seed"] == 0
    assert set(experiments.DEFAULT_PARAMS[kind]) <= set(summary["scenario"]["params"])


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    cfg = json.loads(write_config(tmp_path, "lower-bound").read_text())
    monkeypatch.setenv("RADMAX_THREADS", "1")
    a = experiments.run(cfg).csv_text("lower_bound")
    monkeypatch.setenv("RADMAX_THREADS", "3")
    b = experiments.run(cfg).csv_text("lower_bound")
    assert a == b
    monkeypatch.setenv("RADMAX_THREADS", "many")
    with pytest.raises(ScenarioError):
        experiments.workers()


def test_scenario_validation():
    with pytest.raises(ScenarioError):
        Scenario.from_dict({"kind": "bogus"})
    with pytest.raises(ScenarioError):
        Scenario.from_dict({"name": "x"})
    with pytest.raises(ScenarioError):
        Scenario.from_dict({"kind": "conditions", "colour": "red"})
    with pytest.raises(ScenarioError):
        experiments.run({"kind": "conditions"})
    with pytest.raises(ScenarioError):
        experiments.run({"kind": "conditions", "set": "nonsense:x=1"})


def test_kernel_validation_failure_sets_invariant_status():
    res = experiments.run({"kind": "kernel-validate", "params": {"n_pairs": 5, "tol": 1e-300}})
    assert res.status == experiments.EXIT_INVARIANT and res.failures


def test_kernel_validation_summary_bound():
    res = experiments.run({"kind": "kernel-validate", "params": {"d": 3, "n_pairs": 30}})
    assert res.summary["normalization"]["d=3"]["max_abs_error"] <= 1e-8


# -- sharpness examples ---------------------------------------------------------------

def test_sharpness_lacunary_both_bounded():
    s = experiments.sharpness_scan(parse_set("lacunary:ratio=1/2,k=-16..0"), 3, 1.2, None, None,
                                   list(range(3, 17)))
    assert s.condition.bounded and s.witness.bounded and s.co_moving


def test_sharpness_full_interval_dilates_both_grow():
    s = experiments.sharpness_scan(parse_set("dilated:base={explicit:[1;2]},k=-12..0"), 3, 1.2, None, None,
                                   list(range(4, 12)))
    assert not s.condition.bounded and not s.witness.bounded
    assert abs(s.witness.slope - s.condition.slope) <= 0.25 * s.condition.slope


def test_sharpness_empty_set_is_zero():
    s = experiments.sharpness_scan(parse_set("empty"), 3, 1.2, None, None, [3, 4, 5])
    assert s.condition.values == [0.0] * 3 and s.witness.values == [0.0] * 3
    with pytest.raises(ValueError):
        experiments.sharpness_scan(lambda m: parse_set("empty"), 3, 1.2)


def test_lattice_sample():
    E = parse_set("explicit:[1;3/2],7/4")
    S = dyadic.lattice_sample(E, 2, resolution=5)
    assert S.points == tuple(parse_set("explicit:1,5/4,3/2,7/4").points)
    assert S.resolution == 5 and not S.has_genuine_mass


# -- CLI ----------------------------------------------------------------------------------

def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_kernel_validate(capsys):
    code, out, _ = run_cli(capsys, "kernel-validate", "--d", "3", "--n", "10")
    assert code == 0
    assert out.splitlines()[0] == "d,r,t,abs_error"
    assert len(out.splitlines()) == 12
    code, out, _ = run_cli(capsys, "kernel-validate", "--d", "3", "--n", "5", "--tol", "1e-300")
    assert code == 2 and "FAILED" in out


def test_cli_entropy(capsys):
    code, out, _ = run_cli(capsys, "entropy", "--set", "dilated:base={cantor:depth=12},k=-2..0", "--delta",
                           "2^-2..2^-19", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["kappa_hat"] == pytest.approx(math.log(2) / math.log(3), abs=0.05)


@pytest.mark.parametrize("alias,name", sorted(cli.COND_ALIASES.items()))
def test_cli_check_aliases(capsys, alias, name):
    argv = ["check", "--cond", alias, "--set", "lacunary:ratio=1/2,k=-6..0", "--p", "1.25", "--delta",
            "2^-2..2^-8", "--n-max", "6", "--max-len", "6", "--json"]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    assert json.loads(out)["functional"] == name
    code2, out2, _ = run_cli(capsys, *[name if a == alias else a for a in argv])
    assert code2 == 0 and out2 == out


def test_cli_check_tent_norm_and_csv(capsys):
    code, out, _ = run_cli(capsys, "check", "--cond", "tent-norm", "--set", "explicit:1", "--p", "1.5",
                           "--max-len", "4")
    assert code == 0
    assert out.splitlines()[0].startswith("functional,")
    assert "verdict=" in out.splitlines()[-1]


def test_cli_carleson_and_maximal(capsys):
    code, out, _ = run_cli(capsys, "carleson", "--set", "explicit:1", "--range", "-2..2", "--max-len", "4",
                           "--json")
    assert code == 0 and json.loads(out)["sup"] == pytest.approx(0.5)
    code, out, _ = run_cli(capsys, "maximal", "--set", "explicit:1,2", "--f", "ball:R=1", "--grid",
                           "0.5,1.5", "--t-levels", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,value,err_bound,n_samples,argmax_t" and len(lines) == 3


def test_cli_experiment(tmp_path, capsys):
    cfg = write_config(tmp_path, "conditions")
    code, out, _ = run_cli(capsys, "experiment", "conditions", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code == 0
    assert (tmp_path / "o" / "conditions_conditions.csv").exists()
    code, out, err = run_cli(capsys, "experiment", "sharpness", "--config", str(cfg))
    assert code == 1 and "not 'sharpness'" in err


def test_cli_invariant_exit(tmp_path, capsys):
    path = tmp_path / "k.json"
    path.write_text(json.dumps({"kind": "kernel-validate", "params": {"n_pairs": 3, "tol": 1e-300}}))
    code, _, err = run_cli(capsys, "experiment", "kernel-validate", "--config", str(path))
    assert code == 2 and "FAILED" in err


@pytest.mark.parametrize("argv", [
    ["check", "--cond", "9.9", "--set", "explicit:1"],
    ["check", "--cond", "1.1", "--set", "bogus"],
    ["check", "--cond", "1.1", "--set", "explicit:1", "--p", "3"],
    ["entropy", "--set", "explicit:1", "--delta", "2^-1..7"],
    ["experiment", "conditions", "--config", "/nonexistent.json"],
])
def test_cli_usage_errors(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and "error" in err


def test_cli_argparse_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["check"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["no-such-command"])
    assert info.value.code == 1
