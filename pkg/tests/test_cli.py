import json

import pytest

from cyclozdf.cli import dump_json, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def test_construct_p_squared(capsys):
    code, doc, _ = run_json(capsys, "construct", "--family", "p-squared", "--p", "3")
    assert code == 0
    assert doc["schema_version"] == "1"
    assert doc["command"] == "construct"
    (c,) = doc["results"]["constructions"]
    assert (c["e"], c["predicted"]["n"], c["m"], c["predicted"]["S"]) == (2, 9, 3, [3, 7])
    assert c["cosets"] == [[0], [1, 2, 4, 5, 7, 8], [3, 6]]
    assert c["table"] == [0, 1, 1, 2, 1, 1, 2, 1, 1]


def test_construct_two_power(capsys):
    code, doc, _ = run_json(capsys, "construct", "--family", "two-power", "--k", "3")
    (c,) = doc["results"]["constructions"]
    assert code == 0
    assert c["e"] == 3
    assert (c["predicted"]["n"], c["predicted"]["m"], c["predicted"]["S"]) == (8, 5, [0, 2])


def test_construct_invalid(capsys):
    code, out, err = run(capsys, "construct", "--family", "p-squared", "--p", "4")
    assert code == 2
    assert out == ""
    assert "p must be an odd prime" in err


def test_construct_missing_parameter(capsys):
    code, _, err = run(capsys, "construct", "--family", "mp-crt", "--m", "2")
    assert code == 2
    assert "--p" in err


def test_verify_z4(capsys):
    code, doc, _ = run_json(capsys, "verify", "--family", "z4")
    assert code == 0
    reports = doc["results"]["reports"]
    assert [(r["measured"]["n"], r["measured"]["m"], r["measured"]["S"]) for r in reports] == [
        (4, 4, [0]),
        (4, 3, [0, 2]),
    ]
    assert all(r["verdict"] == "PASS" for r in reports)


def test_verify_n_e(capsys):
    code, doc, _ = run_json(capsys, "verify", "--n", "9", "--e", "2")
    res = doc["results"]
    assert code == 0
    assert res["measured"] == {"n": 9, "m": 3, "S": [3, 7]}
    assert res["matched_family"]["family"] == "P_SQUARED"
    assert res["paths_agree"] is True


def test_verify_equivalent_generator(capsys):
    _, a, _ = run_json(capsys, "verify", "--n", "9", "--e", "5")
    _, b, _ = run_json(capsys, "verify", "--n", "9", "--e", "2")
    assert a["results"]["subgroup"] == b["results"]["subgroup"]
    assert a["results"]["measured"] == b["results"]["measured"]


def test_verify_no_family(capsys):
    code, doc, _ = run_json(capsys, "verify", "--n", "9", "--e", "8")
    assert code == 0
    assert doc["results"]["matched_family"] is None


def test_verify_corrupted_expectation(capsys):
    code, doc, _ = run_json(
        capsys, "verify", "--family", "two-power", "--k", "3", "--expect-m", "6"
    )
    assert code == 1
    assert doc["results"]["verdict"] == "FAIL"
    code, doc, _ = run_json(capsys, "verify", "--n", "9", "--e", "2", "--expect-S", "3,8")
    assert code == 1


def test_verify_unverifiable(capsys):
    code, doc, _ = run_json(
        capsys, "verify", "--family", "two-power", "--k", "5", "--brute-bound", "16"
    )
    assert code == 0
    assert doc["results"]["verdict"] == "UNVERIFIABLE"


def test_verify_needs_target(capsys):
    code, _, err = run(capsys, "verify")
    assert code == 2


def test_seed_generator(capsys):
    code, doc, _ = run_json(
        capsys, "verify", "--family", "mp-crt", "--m", "2", "--p", "5", "--s", "2",
        "--t", "2", "--seed-generator", "3",
    )
    assert code == 0
    assert doc["results"]["reports"][0]["descriptor"]["parameters"]["g"] == 3
    code, _, err = run(
        capsys, "verify", "--family", "mp-crt", "--m", "2", "--p", "5", "--s", "2",
        "--t", "2", "--seed-generator", "4",
    )
    assert code == 2


def test_spectrum_text(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--e", "3", "--emit", "text")
    assert code == 0
    assert out.splitlines()[:3] == ["a=1: 0", "a=2: 2", "a=3: 0"]
    assert "S={0, 2}" in out


def test_spectrum_json(capsys):
    code, doc, _ = run_json(capsys, "spectrum", "--n", "10", "--e", "9")
    res = doc["results"]
    assert code == 0
    assert res["S"] == [0, 2]
    assert all(row["N"] == (2 if row["a"] % 2 == 0 else 0) for row in res["per_shift"])


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--e", "3", "--emit", "csv")
    assert out == "a,N\n1,0\n2,2\n3,0\n"


def test_spectrum_non_unit(capsys):
    code, _, err = run(capsys, "spectrum", "--n", "6", "--e", "4")
    assert code == 2
    assert "not a unit" in err


def test_scan_z4(capsys):
    code, doc, _ = run_json(capsys, "scan", "--n-min", "4", "--n-max", "4")
    recs = doc["results"]["records"]
    assert code == 0
    assert [(r["e"], r["m"], r["S"], r["family"]) for r in recs] == [
        (1, 4, [0], "Z4"),
        (3, 3, [0, 2], "Z4"),
    ]


def test_scan_z7(capsys):
    _, doc, _ = run_json(capsys, "scan", "--n-min", "7", "--n-max", "7")
    recs = doc["results"]["records"]
    assert {"n": 7, "e": 2, "k": 3, "m": 3, "S": [2], "classification": "ZDBF", "family": None} in recs


def test_scan_z9(capsys):
    _, doc, _ = run_json(capsys, "scan", "--n-min", "9", "--n-max", "9")
    by_e = {r["e"]: r for r in doc["results"]["records"]}
    assert by_e[2]["S"] == [3, 7] and by_e[2]["family"] == "P_SQUARED"
    assert by_e[4]["S"] == [0, 6] and by_e[4]["family"] == "P_POWER_PLUS_S"


def test_scan_csv_header(capsys):
    code, out, _ = run(capsys, "scan", "--n-min", "9", "--n-max", "9", "--emit", "csv")
    lines = out.splitlines()
    assert lines[0] == "n,e,k,m,S,classification,family"
    assert "9,2,6,3,3|7,ZDF,P_SQUARED" in lines


@pytest.mark.parametrize("lo,hi", [("1", "5"), ("9", "4")])
def test_scan_invalid_range(capsys, lo, hi):
    code, _, _ = run(capsys, "scan", "--n-min", lo, "--n-max", hi)
    assert code == 2


def test_scan_above_brute_bound(capsys):
    code, _, _ = run(capsys, "scan", "--n-min", "2", "--n-max", "40", "--brute-bound", "20")
    assert code == 2


def test_scan_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "scan", "--n-min", "2", "--n-max", "40")
    _, parallel, _ = run(capsys, "scan", "--n-min", "2", "--n-max", "40", "--jobs", "3")
    # inputs echo --jobs, results must not differ
    assert json.loads(serial)["results"] == json.loads(parallel)["results"]


def test_table(capsys):
    code, doc, _ = run_json(capsys, "table")
    assert code == 0
    rows = doc["results"]["reports"]
    assert len(rows) == 7
    assert [r["descriptor"]["family"] for r in rows] == [
        "Z4", "TWO_POWER", "P_SQUARED", "P_POWER_MINUS", "P_POWER_PLUS_S", "MP_CRT", "P1P2_CRT",
    ]
    assert all(r["verdict"] == "PASS" for r in rows)


def test_json_round_trip(capsys):
    for argv in (
        ["table"],
        ["scan", "--n-min", "2", "--n-max", "20"],
        ["construct", "--family", "z4"],
        ["verify", "--n", "35", "--e", "9"],
    ):
        _, out, _ = run(capsys, *argv)
        assert dump_json(json.loads(out)) == out
        assert not any(isinstance(v, float) for v in _leaves(json.loads(out)))


def _leaves(doc):
    if isinstance(doc, dict):
        for v in doc.values():
            yield from _leaves(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from _leaves(v)
    else:
        yield doc


def test_out_path(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, out, _ = run(capsys, "table", "--emit", "csv", "--out", str(path))
    assert code == 0
    assert out == ""
    assert path.read_text().startswith("family,parameters,n,e,")


def test_text_emit(capsys):
    code, out, _ = run(capsys, "table", "--emit", "text")
    assert code == 0
    assert out.rstrip().endswith("overall: PASS")
