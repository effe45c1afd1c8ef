import io
import json

import pytest

from appellf2.cli import TOL_ENV, CliConfig, UsageError, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run("--format", "json", *argv)
    return code, (json.loads(out) if out else None), err


F2_REDUCTION = ("f2", "--d", "2", "--a", "1", "--ap", "1", "--b", "1", "--bp", "1")


class TestF2:
    def test_reduction_example(self):
        code, doc, _ = run_json(*F2_REDUCTION, "--x", "0.25", "--y", "0.25")
        assert code == 0
        assert doc["command"] == "f2"
        assert doc["result"]["value"] == pytest.approx(4.0, rel=1e-14)
        assert doc["result"]["method"] == "reduction"
        assert set(doc["result"]) == {"value", "abs_error", "method", "terms"}
        assert doc["inputs"]["a_prime"] == 1.0

    def test_origin(self):
        code, doc, _ = run_json(*F2_REDUCTION, "--x", "0", "--y", "0")
        assert code == 0 and doc["result"]["value"] == 1.0

    def test_brute_force_agrees(self):
        args = ("f2", "--d", "2.5", "--a", "0.5", "--ap", "1.5", "--b", "2", "--bp", "3", "--x", "0.3", "--y", "0.4")
        _, fast, _ = run_json(*args)
        _, slow, _ = run_json(*args, "--brute-force")
        assert slow["result"]["method"] == "bruteforce"
        assert abs(fast["result"]["value"] - slow["result"]["value"]) <= 1e-10 * abs(slow["result"]["value"])
        code, chk, _ = run_json(*args, "--check")
        assert code == 0 and chk["check"]["rel_residual"] <= 1e-10

    def test_plain_output(self):
        code, out, _ = run(*F2_REDUCTION, "--x", "0.25", "--y", "0.25")
        assert code == 0
        assert "value: 4" in out and "method: reduction" in out

    def test_missing_argument_is_usage_error(self):
        code, _, _ = run("f2", "--d", "2")
        assert code == 2

    def test_no_strategy_is_domain_error(self):
        code, _, err = run("f2", "--d", "2.2", "--a", "0.3", "--ap", "0.4", "--b", "1.7", "--bp", "2.9",
                           "--x", "0.8", "--y", "0.7")
        assert code == 2 and err


def test_f1():
    code, doc, _ = run_json("f1", "--a", "1", "--b", "2", "--bp", "2", "--c", "2", "--x", "0.2", "--y", "0.3")
    assert code == 0
    assert doc["result"]["value"] == pytest.approx(1.8333757422001424, rel=1e-12)


class TestIntegral:
    def test_exponential_case_with_check(self):
        code, doc, _ = run_json("integral", "--d", "1", "--h", "2", "--a", "1.3", "--b", "1.3", "--k", "0.5",
                                "--ap", "0.7", "--bp", "0.7", "--kp", "0.5", "--check")
        assert code == 0
        assert doc["result"]["value"] == pytest.approx(1.0, rel=1e-14)
        assert doc["check"]["rel_residual"] <= 1e-10
        assert set(doc["check"]) == {"oracle_value", "rel_residual"}

    def test_landau_lifshitz_terminating(self):
        code, doc, _ = run_json("integral", "--gamma", "2", "--s", "1", "--p", "0", "--a", "-1", "--ap", "-1",
                                "--k", "0.3", "--kp", "0.4", "--h", "1", "--check")
        assert code == 0
        assert doc["result"]["value"] == pytest.approx(0.62, rel=1e-14)
        assert doc["check"]["rel_residual"] <= 1e-10

    def test_nonpositive_h(self):
        code, _, err = run("integral", "--d", "1", "--h", "-1", "--a", "1", "--b", "1", "--k", "0.1")
        assert code == 2 and "h" in err

    def test_condition_quoted(self):
        code, _, err = run("integral", "--d", "1", "--h", "1", "--a", "1", "--b", "2", "--k", "0.8",
                           "--ap", "1", "--bp", "2", "--kp", "0.5")
        assert code == 2 and "|k|+|k'| < h" in err


class TestAppendix:
    def test_spot_value(self):
        code, doc, _ = run_json("appendix", "I.18", "--param", "h=2", "--param", "k=1")
        assert code == 0
        assert doc["result"]["value"] == pytest.approx(0.7725887222397811, rel=1e-14)
        assert doc["check"]["rel_residual"] <= 1e-8

    def test_list(self):
        code, out, _ = run("appendix", "--list")
        assert code == 0 and "I.21" in out

    def test_bad_param(self):
        assert run("appendix", "I.18", "--param", "h2")[0] == 2


class TestVerify:
    def test_appendix_seed_7(self):
        code, doc, _ = run_json("verify", "appendix", "--seed", "7")
        assert code == 0
        assert doc["result"]["failures"] == 0 and doc["result"]["cases"] >= 105
        assert {r["identity"] for r in doc["result"]["reports"]} >= {f"I.{i}" for i in range(1, 22)}

    def test_recurrences_byte_identical(self):
        a = run("--format", "json", "--seed", "3", "verify", "recurrences")
        b = run("verify", "recurrences", "--seed", "3", "--format", "json")
        assert a[0] == 0 and a[1] == b[1]

    def test_csv(self):
        code, out, _ = run("--format", "csv", "verify", "physics")
        assert code == 0
        assert out.splitlines()[0] == "suite,identity,rel_residual,status,params"

    def test_plain(self):
        code, out, _ = run("verify", "products")
        assert code == 0 and out.startswith("products:") and "0 failures" in out


class TestMatrix:
    def test_spiked_single(self):
        code, doc, _ = run_json("matrix", "spiked", "--gamma", "2", "--alpha", "2", "--n", "1")
        assert code == 0 and doc["result"]["entries"] == [[pytest.approx(1.0, rel=1e-14)]]

    def test_kratzer_single_csv(self):
        code, out, _ = run("--format", "csv", "matrix", "kratzer", "--A", "0", "--B", "2", "--l", "0",
                           "--alpha", "1", "--n", "1")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "n,m,value"
        n, m, v = lines[1].split(",")
        assert (n, m) == ("0", "0") and float(v) == pytest.approx(1.5, rel=1e-14)

    def test_csv_round_trips(self):
        _, out, _ = run("--format", "csv", "matrix", "spiked", "--gamma", "2.3", "--alpha", "1.1", "--n", "4")
        _, doc, _ = run_json("matrix", "spiked", "--gamma", "2.3", "--alpha", "1.1", "--n", "4")
        rows = [line.split(",") for line in out.splitlines()[1:]]
        assert len(rows) == 16
        for n, m, v in rows:
            assert float(v) == doc["result"]["entries"][int(n)][int(m)]
            assert len(v.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17

    def test_spiked_block_symmetric(self):
        _, doc, _ = run_json("matrix", "spiked", "--gamma", "2", "--alpha", "1", "--n", "4")
        e = doc["result"]["entries"]
        assert all(abs(e[i][j] - e[j][i]) <= 1e-12 * abs(e[i][j]) for i in range(4) for j in range(4))

    def test_variational(self):
        code, out, _ = run("--format", "csv", "matrix", "spiked", "--gamma", "2", "--alpha", "1", "--n", "3",
                           "--variational", "--lambda", "0.1", "--h0")
        assert code == 0
        sections = out.strip().split("\n\n")
        assert [s.splitlines()[0] for s in sections] == ["n,m,value", "k,eigenvalue", "n,energy"]
        code, doc, _ = run_json("matrix", "spiked", "--gamma", "2", "--alpha", "1", "--n", "3",
                                "--variational", "--lambda", "0")
        assert doc["result"]["eigenvalues"] == pytest.approx([4.0, 8.0, 12.0], rel=1e-13)

    def test_variational_needs_lambda(self):
        assert run("matrix", "spiked", "--gamma", "2", "--alpha", "1", "--n", "2", "--variational")[0] == 2

    def test_bad_basis_arguments(self):
        assert run("matrix", "spiked", "--alpha", "1", "--n", "2")[0] == 2
        assert run("matrix", "spiked", "--gamma", "1.2", "--alpha", "1", "--n", "2")[0] == 2


class TestGlobals:
    def test_tolerance_range(self):
        assert run("--tol", "0.5", *F2_REDUCTION, "--x", "0.1", "--y", "0.1")[0] == 2
        assert run("--tol", "0", *F2_REDUCTION, "--x", "0.1", "--y", "0.1")[0] == 2
        with pytest.raises(UsageError):
            CliConfig(tolerance=1.0)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(TOL_ENV, "0.5")
        assert run(*F2_REDUCTION, "--x", "0.1", "--y", "0.1")[0] == 2
        # an explicit flag wins over the environment
        assert run("--tol", "1e-10", *F2_REDUCTION, "--x", "0.1", "--y", "0.1")[0] == 0
        monkeypatch.setenv(TOL_ENV, "abc")
        assert run(*F2_REDUCTION, "--x", "0.1", "--y", "0.1")[0] == 2
        monkeypatch.setenv(TOL_ENV, "1e-9")
        code, doc, _ = run_json("verify", "products")
        assert code == 0 and doc["inputs"]["tol"] == 1e-9

    def test_json_deterministic(self):
        args = ("f2", "--d", "3", "--a", "0.5", "--ap", "0.7", "--b", "2", "--bp", "2", "--x", "-0.8", "--y", "0.5")
        a, b = run("--format", "json", *args), run("--format", "json", *args)
        assert a[0] == 0 and a[1] == b[1]
        assert json.loads(a[1])["result"]["value"] == pytest.approx(1.3139392776322705, rel=1e-12)

    def test_unknown_subcommand(self):
        assert run("nope")[0] == 2
