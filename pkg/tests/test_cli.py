"""Command line behavior: formats, exit codes, determinism."""

import json

import pytest

from popdiff.cli import main
from popdiff.f2n import f2set_dumps, f2set_loads, linear_subspace, make_set, read_set, sumset, write_set


def run(*args):
    return main(list(args))


def test_gen_random(tmp_path, capsys):
    out = tmp_path / "A.set"
    assert run("gen", "--n", "4", "--family", "random", "--card", "8",
               "--seed", "7", "--out", str(out)) == 0
    assert read_set(out).card == 8
    assert "card=8" in capsys.readouterr().out


def test_gen_subspace_and_niveau(tmp_path):
    v = tmp_path / "V.set"
    assert run("gen", "--n", "4", "--family", "subspace", "--dim", "2", "--out", str(v)) == 0
    assert read_set(v).card == 4
    w = tmp_path / "N.set"
    assert run("gen", "--n", "3", "--family", "niveau", "--wmin", "2", "--out", str(w)) == 0
    assert read_set(w).point_list() == [3, 5, 6, 7]


def test_gen_alpha_must_give_integer_cardinality(tmp_path):
    assert run("gen", "--n", "4", "--family", "random", "--alpha", "1/3",
               "--out", str(tmp_path / "x.set")) == 1


def test_gen_usage_errors(tmp_path):
    out = str(tmp_path / "x.set")
    assert run("gen", "--n", "4", "--family", "random", "--out", out) == 1
    assert run("gen", "--n", "4", "--family", "subspace", "--out", out) == 1
    assert run("gen", "--n", "4", "--family", "subspace", "--dim", "9", "--out", out) == 1


def test_dcset_c_zero_matches_sumset(tmp_path, capsys):
    a_path = tmp_path / "A.set"
    run("gen", "--n", "6", "--family", "random", "--card", "20", "--seed", "3",
        "--out", str(a_path))
    d_path = tmp_path / "D.set"
    assert run("dcset", str(a_path), "--c", "0", "--out", str(d_path)) == 0
    a = read_set(a_path)
    assert read_set(d_path) == sumset(a, a)
    assert "|D|=" in capsys.readouterr().out


def test_dcset_subspace_closed_form(tmp_path):
    v_path = tmp_path / "V.set"
    run("gen", "--n", "6", "--family", "subspace", "--dim", "4", "--out", str(v_path))
    d_path = tmp_path / "D.set"
    assert run("dcset", str(v_path), "--c", "1/2", "--out", str(d_path)) == 0
    assert read_set(d_path) == read_set(v_path)


def test_dcset_rejects_floats(tmp_path):
    a_path = tmp_path / "A.set"
    run("gen", "--n", "4", "--family", "random", "--card", "4", "--seed", "0",
        "--out", str(a_path))
    assert run("dcset", str(a_path), "--c", "0.5") == 1


def test_dcset_parse_error_exit_one(tmp_path):
    bad = tmp_path / "bad.set"
    bad.write_text("F2SET v1 n=2\nzz\n")
    assert run("dcset", str(bad), "--c", "1/2") == 1
    assert run("dcset", str(tmp_path / "missing.set"), "--c", "1/2") == 1


@pytest.fixture(scope="module")
def small_cert(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cert")
    a_path = tmp / "A.set"
    cert_path = tmp / "cert.json"
    assert run("gen", "--n", "12", "--family", "random", "--alpha", "1/2",
               "--seed", "0", "--out", str(a_path)) == 0
    assert run("construct", str(a_path), "--c", "1/8", "--seed", "0",
               "--out", str(cert_path)) == 0
    return cert_path


def test_construct_and_verify_roundtrip(small_cert):
    assert run("verify", str(small_cert)) == 0


def test_construct_retry_exhausted_exit_two(tmp_path):
    v_path = tmp_path / "V.set"
    write_set(linear_subspace(10, [1 << i for i in range(9)]), v_path)
    code = run("construct", str(v_path), "--c", "1/2", "--seed", "3",
               "--out", str(tmp_path / "c.json"), "--lemma-trials", "2")
    assert code == 2
    assert not (tmp_path / "c.json").exists()


def test_construct_exploratory_gate(tmp_path):
    a_path = tmp_path / "A.set"
    run("gen", "--n", "8", "--family", "random", "--card", "128", "--seed", "1",
        "--out", str(a_path))
    out = tmp_path / "c.json"
    assert run("construct", str(a_path), "--c", "3/4", "--seed", "0",
               "--out", str(out)) == 1
    assert run("construct", str(a_path), "--c", "3/4", "--seed", "0",
               "--out", str(out), "--exploratory") == 0


def test_verify_tampered_exit_three(small_cert, tmp_path, capsys):
    obj = json.loads(small_cert.read_text())
    obj["seed"] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    assert run("verify", str(bad)) == 3
    assert "replay" in capsys.readouterr().err

    obj = json.loads(small_cert.read_text())
    obj["plan"]["lemma_rhs"] += 1
    bad.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    assert run("verify", str(bad)) == 3
    assert "schema" in capsys.readouterr().err


def test_verify_point_addition_exit_three(small_cert, tmp_path):
    obj = json.loads(small_cert.read_text())
    a2 = f2set_loads(f"F2SET v1 n={obj['n']}\n{obj['a2']}\n")
    extra = next(x for x in range(1 << obj["n"]) if x not in a2)
    bumped = make_set(obj["n"], a2.point_list() + [extra])
    obj["a2"] = f2set_dumps(bumped).split("\n")[1]
    obj["stats"]["card_a2"] = bumped.card
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    assert run("verify", str(bad)) == 3


def test_verify_unreadable_and_malformed(tmp_path):
    assert run("verify", str(tmp_path / "missing.json")) == 1
    garbage = tmp_path / "g.json"
    garbage.write_text("{not json")
    assert run("verify", str(garbage)) == 3


def test_bound_values(capsys):
    assert run("bound", "16", "1/2", "1/16") == 0
    assert capsys.readouterr().out.strip() == "42"
    assert run("bound", "20", "1/2", "1/4") == 0
    assert capsys.readouterr().out.strip() == "10"
    assert run("bound", "9", "1/4", "1/4") == 0
    assert capsys.readouterr().out.strip() == "0"
    assert run("bound", "8", "1/2", "2") == 1  # c outside (0, 1)


def test_maxsub(tmp_path, capsys):
    v_path = tmp_path / "V.set"
    run("gen", "--n", "5", "--family", "subspace", "--dim", "3", "--out", str(v_path))
    assert run("maxsub", str(v_path)) == 0
    assert "dimension=3" in capsys.readouterr().out


def test_maxsub_missing_zero(tmp_path, capsys):
    p = tmp_path / "x.set"
    write_set(make_set(4, [1, 2]), p)
    assert run("maxsub", str(p)) == 0
    assert "dimension 0" in capsys.readouterr().out


def test_sweep_deterministic_and_blank_columns(tmp_path):
    args = ["sweep", "--n", "8", "--alpha", "1/2,1/3", "--c", "0,1/4",
            "--family", "random", "--seeds", "2"]
    one, two = tmp_path / "1.csv", tmp_path / "2.csv"
    assert run(*args, "--out", str(one)) == 0
    assert run(*args, "--out", str(two)) == 0
    assert one.read_bytes() == two.read_bytes()

    rows = one.read_text().splitlines()
    header = rows[0].split(",")
    parsed = [dict(zip(header, line.split(","))) for line in rows[1:]]
    assert len(parsed) == 8
    for row in parsed:
        if row["alpha"] == "1/3":
            assert row["reason"] == "alpha*2^n is not an integer"
            assert row["card_a"] == ""
        elif row["c"] == "0":
            assert row["theorem_bound"] == "" and row["achieved"] == ""
            assert row["card_d"] != ""
        else:
            assert row["success"] == "true"
            assert row["bound_ok"] == "true"
            assert int(row["achieved"]) >= int(row["guarantee"])


def test_sweep_families(tmp_path):
    out = tmp_path / "fam.csv"
    assert run("sweep", "--n", "8", "--alpha", "1/2,3/8", "--c", "1/4",
               "--family", "subspace", "--out", str(out)) == 0
    rows = out.read_text().splitlines()
    assert "power-of-two" in rows[2]  # 3/8 density is not a subspace size

    assert run("sweep", "--n", "8", "--alpha", "1/2", "--c", "1/4",
               "--family", "niveau", "--out", str(out)) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[5] != ""  # card_a recorded (actual niveau size, at most the budget)


def test_sweep_parallel_matches_serial(tmp_path):
    base = ["sweep", "--n", "6,8", "--alpha", "1/2", "--c", "1/8", "--seeds", "2"]
    serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
    assert run(*base, "--out", str(serial)) == 0
    assert run(*base, "--jobs", "4", "--out", str(parallel)) == 0
    assert serial.read_bytes() == parallel.read_bytes()


def test_usage_error_exit_one():
    assert run("bound", "16", "0.5", "1/16") == 1
    assert run("nonsense") == 1
