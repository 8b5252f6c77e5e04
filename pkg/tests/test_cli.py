import json

import numpy as np
import pytest

from tracealg import cli, paperdata, tracelab


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_matrix(path, m):
    path.write_text(json.dumps([[[z.real, z.imag] for z in row] for row in m]))
    return str(path)


def test_series_n3_pure_bigraded(capsys):
    code, out, _ = run(capsys, "series", "--n", "3", "--variant", "pure", "--grading", "bi")
    assert code == 0
    body = [line for line in out.splitlines() if not line.startswith(("#", "DEN"))]
    assert body == ["1  0 0", "-1  1 1", "1  2 2"]


def test_series_json_with_expansion(capsys):
    code, out, _ = run(capsys, "--format", "json", "series", "--n", "2", "--variant", "mixed", "--expand", "2")
    payload = json.loads(out)
    assert code == 0 and payload["series"]["coeffs"][0] == [0, 0, 1]


def test_series_single_and_special(capsys):
    code, out, _ = run(capsys, "--format", "json", "series", "--n", "2", "--grading", "single", "--expand", "6")
    got = [c for _, c in json.loads(out)["series"]["coeffs"]]
    assert code == 0 and got == [c for c in paperdata.series_list("pure_series_n2")[:7] if c]
    code, out, _ = run(capsys, "special", "sharp", "--n", "3", "--expand", "8", "--format", "json")
    assert code == 0
    assert json.loads(out)["series"]["coeffs"][-1] == [8, 10]


def test_formanek_series_and_schur(capsys):
    code, out, _ = run(capsys, "series", "--method", "formanek", "--n", "5", "--grading", "single",
                       "--max-degree", "19")
    assert code == 0 and out.split()[-1] == "483792"
    code, out, _ = run(capsys, "series", "--method", "formanek", "--n", "5", "--max-degree", "6", "--schur")
    assert out.splitlines()[6] == "6: 10*f[6,0] 8*f[5,1] 15*f[4,2] 4*f[3,3]"


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "series", "--n", "3", "--order", "1,1")[0] == 2
    assert run(capsys, "series", "--method", "formanek", "--n", "3")[0] == 2
    assert run(capsys, "verify", "--id", "nope")[0] == 2
    assert run(capsys, "verify")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["series"])
    assert e.value.code == 2


def test_simtest(capsys, tmp_path):
    rng = np.random.default_rng(0)
    a = tracelab.random_complex(4, rng)
    u = tracelab.random_unitary(4, rng)
    fa = write_matrix(tmp_path / "a.json", a)
    fb = write_matrix(tmp_path / "b.json", u @ a @ u.conj().T)
    fc = write_matrix(tmp_path / "c.json", a + np.eye(4))
    code, out, _ = run(capsys, "simtest", "--a", fa, "--b", fb)
    assert code == 0 and json.loads(out)["verdict"] == "similar"
    code, out, _ = run(capsys, "simtest", "--a", fa, "--b", fc, "--exhaustive", "4")
    assert json.loads(out) == {"verdict": "not_similar", "witness": "x", "words_checked": 1}
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert run(capsys, "simtest", "--a", str(bad), "--b", fb)[0] == 2


def test_generators_pass_fail_and_budget(capsys, monkeypatch):
    code, out, _ = run(capsys, "generators", "verify", "--set", "gen1", "--max-degree", "6")
    assert code == 0 and "deficit" not in out
    code, out, _ = run(capsys, "generators", "verify", "--set", "ter1", "--max-degree", "5")
    assert code == 1 and out.splitlines()[-1] == "degree 5: 66 of 68 (deficit 2)"
    monkeypatch.setattr(tracelab, "MAX_COLUMNS", 5)
    code, out, _ = run(capsys, "--format", "json", "generators", "verify", "--set", "gen1", "--max-degree", "6")
    assert code == 3 and json.loads(out)["status"] == "budget"


def test_verify_single_identity(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "--id", "gcd_n4")
    assert code == 0 and json.loads(out)["checks"][0]["status"] == "pass"


def test_output_is_deterministic(capsys):
    argv = ("--format", "json", "generators", "verify", "--set", "p171", "--max-degree", "6", "--seed", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_worker_pool_keeps_order(capsys, monkeypatch):
    monkeypatch.setattr(cli, "_suite", lambda budget, unbounded: [("identity", "gcd_n4", None),
                                                                   ("identity", "second_differences", None),
                                                                   ("identity", "pi_denominator", None)])
    serial = run(capsys, "verify", "all")
    monkeypatch.setenv(cli.WORKERS_ENV, "2")
    assert run(capsys, "verify", "all") == serial
    monkeypatch.setenv(cli.WORKERS_ENV, "many")
    assert run(capsys, "verify", "all")[0] == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "series", "--n", "2", "--output", str(target))
    assert code == 0 and out == "" and target.read_text().startswith("# vars s t")
