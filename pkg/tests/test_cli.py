import json
from fractions import Fraction as Q

import pytest

from mahavier import cr_witness_search, linear_pair
from mahavier.cli import EXIT_FORMAT, EXIT_MATH, EXIT_OK, main
from mahavier.documents import witness_to_json
from mahavier.gallery import BUILDERS, reproduced

GOLDEN = 0.481212


def write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def finite_doc(edges, ids="01"):
    return {"points": [{"id": i, "coords": []} for i in ids], "edges": [list(e) for e in edges]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_golden_mean(tmp_path, capsys):
    path = write(tmp_path / "g.json", finite_doc(["00", "01", "10"]))
    code, out, _ = run(capsys, "analyze", path)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["verdicts"]["entropy"]["value"] == pytest.approx(GOLDEN, abs=1e-6)
    assert report["verdicts"]["cr_turbulent"]["value"] is True
    assert all(c["passed"] for c in report["checks"])
    assert "timings" in report


def test_analyze_two_cycle(tmp_path, capsys):
    path = write(tmp_path / "c.json", finite_doc(["01", "10"]))
    code, out, _ = run(capsys, "analyze", path, "--no-timings")
    assert code == EXIT_OK
    verdicts = json.loads(out)["verdicts"]
    assert verdicts["entropy"]["value"] == 0
    for key in ("cr_turbulent", "reverse_cr_turbulent", "uncountable"):
        assert verdicts[key]["value"] is False


@pytest.mark.parametrize(
    "content",
    ["{", json.dumps({"points": [], "edges": [["a"]]}), json.dumps({"neither": 1}), json.dumps([1, 2])],
)
def test_malformed_input_exits_2(tmp_path, capsys, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run(capsys, "analyze", str(path))
    assert code == EXIT_FORMAT
    assert err.startswith("mahavier: error:")


def test_missing_file_exits_2(tmp_path, capsys):
    assert run(capsys, "analyze", str(tmp_path / "none.json"))[0] == EXIT_FORMAT


def test_no_timings_is_byte_stable(tmp_path, capsys):
    path = write(tmp_path / "g.json", finite_doc(["00", "01", "10"]))
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert run(capsys, "analyze", path, "--no-timings", "--out", str(out))[0] == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert b"timings" not in outs[0]


def test_svg_and_csv(tmp_path, capsys):
    path = write(tmp_path / "g.json", finite_doc(["00", "01", "10"]))
    svg, csv = tmp_path / "g.svg", tmp_path / "g.csv"
    assert run(capsys, "analyze", path, "--svg", str(svg), "--csv", str(csv), "--no-timings")[0] == EXIT_OK
    assert svg.read_text().lstrip().startswith("<svg")
    rows = csv.read_text().splitlines()
    assert len(rows) == 41
    assert float(rows[-1].split(",")[-1]) == pytest.approx(0.497184738, abs=1e-6)


def test_csv_needs_finite_relation(tmp_path, capsys):
    run(capsys, "gallery", "tent", "--out", str(tmp_path))
    code, _, _ = run(capsys, "analyze", str(tmp_path / "tent.json"), "--csv", str(tmp_path / "t.csv"))
    assert code == EXIT_MATH


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_gallery_round_trip(tmp_path, capsys, name):
    code, out, _ = run(capsys, "gallery", name, "--out", str(tmp_path))
    assert code == EXIT_OK
    rel, side = out.split()
    code, report, _ = run(capsys, "analyze", rel, "--no-timings")
    assert code == EXIT_OK
    expected = json.loads(open(side).read())["expected"]
    assert all(reproduced(json.loads(report), expected).values())


def test_gallery_parameters(tmp_path, capsys):
    run(capsys, "gallery", "linear-pair", "--a", "1/3", "--b", "2", "--out", str(tmp_path))
    side = json.loads((tmp_path / "linear-pair.expected.json").read_text())
    assert side["params"] == {"a": "1/3", "b": "2/1"}
    run(capsys, "gallery", "nleg", "--n", "5", "--out", str(tmp_path))
    code, out, _ = run(capsys, "analyze", str(tmp_path / "nleg.json"), "--no-timings")
    verdicts = json.loads(out)["verdicts"]
    assert verdicts["least_turbulent_iterate"]["value"] == 5
    assert verdicts["leg0_tent_pair"]["value"]["m=5"] == "turbulent"


def test_gallery_unknown_entry(tmp_path, capsys):
    assert run(capsys, "gallery", "nope", "--out", str(tmp_path))[0] == EXIT_MATH
    assert run(capsys, "gallery", "linear-pair", "--a", "2", "--out", str(tmp_path))[0] == EXIT_MATH


# -- verify-witness --------------------------------------------------------


@pytest.fixture
def f13(tmp_path, capsys):
    run(capsys, "gallery", "linear-pair", "--out", str(tmp_path))
    return str(tmp_path / "linear-pair.json"), cr_witness_search(linear_pair(Q(1, 3), 2), Q(1, 2))


def test_verify_f13_witness(tmp_path, capsys, f13):
    rel, w = f13
    path = write(tmp_path / "w.json", witness_to_json(w))
    code, out, _ = run(capsys, "verify-witness", rel, path)
    assert code == EXIT_OK
    assert json.loads(out)["verified"] is True


def test_truncated_witness_fails_with_named_inclusion(tmp_path, capsys, f13):
    rel, w = f13
    path = write(tmp_path / "w.json", witness_to_json(w.truncated()))
    code, out, _ = run(capsys, "verify-witness", rel, path)
    assert code == EXIT_MATH
    report = json.loads(out)
    assert report["verified"] is False
    assert report["inclusion"] == "π_first(K) ∪ π_first(L) ⊆ π_last(K) ∩ π_last(L)"


def test_witness_level_mismatch_exits_2(tmp_path, capsys, f13):
    rel, w = f13
    doc = witness_to_json(w)
    doc["level"] += 1
    assert run(capsys, "verify-witness", rel, write(tmp_path / "w.json", doc))[0] == EXIT_FORMAT


def test_verify_finite_witnesses(tmp_path, capsys):
    rel = write(tmp_path / "f.json", finite_doc(["00", "01", "10", "11"]))
    good = {"kind": "cr", "level": 2, "K": [["0", "0"], ["1", "1"]], "L": [["0", "1"], ["1", "0"]]}
    bad = {"kind": "cr", "level": 2, "K": [["0", "0"]], "L": [["0", "1"]]}
    assert run(capsys, "verify-witness", rel, write(tmp_path / "g.json", good))[0] == EXIT_OK
    code, out, _ = run(capsys, "verify-witness", rel, write(tmp_path / "b.json", bad))
    assert code == EXIT_MATH
    report = json.loads(out)
    assert (report["missing_from_last_K"], report["missing_from_last_L"]) == ([], ["0"])


def test_verify_tent_pair(tmp_path, capsys):
    run(capsys, "gallery", "nleg", "--n", "2", "--out", str(tmp_path))
    pair = {
        "kind": "turbulent-pair",
        "m": 2,
        "K": [{"leg": 0, "intervals": [["0", "1/2"]]}],
        "L": [{"leg": 0, "intervals": [["1/2", "1"]]}],
    }
    code, out, _ = run(capsys, "verify-witness", str(tmp_path / "nleg.json"), write(tmp_path / "p.json", pair))
    assert code == EXIT_OK
    assert json.loads(out)["classification"] == "turbulent"
    pair["m"] = 1
    assert run(capsys, "verify-witness", str(tmp_path / "nleg.json"), write(tmp_path / "p.json", pair))[0] == EXIT_MATH


# -- zigzag and entropy ----------------------------------------------------


def test_zigzag_command(tmp_path, capsys):
    path = write(tmp_path / "p.json", {"t": ["0", "1", "2", "3", "4"], "labels": list("AABBA")})
    code, out, _ = run(capsys, "zigzag", path, "--delta", "3/10", "--flip-bound", "3")
    assert code == EXIT_OK
    assert json.loads(out) == {"zigzag_number": 3, "brute_force": 3, "bound": 4, "flip_bound": {"n": 3, "holds": True}}


def test_zigzag_command_errors(tmp_path, capsys):
    assert run(capsys, "zigzag")[0] == EXIT_FORMAT
    assert run(capsys, "zigzag", "--flip-bound", "4")[0] == EXIT_MATH
    assert run(capsys, "zigzag", "--delta", "0")[0] == EXIT_MATH


def test_entropy_command(tmp_path, capsys):
    path = write(tmp_path / "g.json", finite_doc(["00", "01", "10"]))
    code, out, _ = run(capsys, "entropy", path, "--m-max", "400")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["spectral"] == pytest.approx(GOLDEN, abs=1e-6)
    assert report["difference"] < 0.05


def test_entropy_needs_finite(tmp_path, capsys):
    run(capsys, "gallery", "tent", "--out", str(tmp_path))
    assert run(capsys, "entropy", str(tmp_path / "tent.json"))[0] == EXIT_MATH


@pytest.mark.parametrize("value", ["zero", "0", "-3"])
def test_bad_thread_setting_exits_2(tmp_path, capsys, monkeypatch, value):
    monkeypatch.setenv("MAHAVIER_THREADS", value)
    path = write(tmp_path / "g.json", finite_doc(["00"], ids="0"))
    assert run(capsys, "entropy", path)[0] == EXIT_FORMAT


def test_thread_setting_accepted(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MAHAVIER_THREADS", "4")
    path = write(tmp_path / "g.json", finite_doc(["00"], ids="0"))
    assert run(capsys, "entropy", path)[0] == EXIT_OK
