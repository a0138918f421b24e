import csv
import io
import json
import subprocess
import sys

import pytest

from twodel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--n", "12", "--construction", "2")
    data = json.loads(out)
    assert code == 0 and data["n"] == 12 and data["s"] == 12 and data["Q"] == 17
    assert len(data["c"]) == 6 and data["b"] is not None
    code, out, _ = run(capsys, "params", "--n", "12", "--construction", "1", "--no-targets")
    assert code == 0 and "c" not in json.loads(out)


def test_codebook_corrupt_decode_round_trip(capsys, tmp_path):
    path = tmp_path / "book.txt"
    assert run(capsys, "codebook", "--n", "12", "--construction", "2", "-o", str(path))[0] == 0
    lines = path.read_text().splitlines()
    header, words = json.loads(lines[0]), lines[1:]
    assert header["construction"] == 2 and words
    x = words[0]
    code, out, _ = run(capsys, "corrupt", "--word", x, "--positions", "3", "9")
    corrupted = json.loads(out)
    assert code == 0 and corrupted["positions"] == [3, 9]
    code, out, _ = run(capsys, "decode", "--codebook", str(path), "--word", corrupted["word"])
    result = json.loads(out)
    assert code == 0 and result["recovered"] == x and "/" in result["branch"]
    code, out, _ = run(capsys, "decode", "--codebook", str(path), "--word", corrupted["word"], "--oracle")
    assert json.loads(out) == {"recovered": x, "branch": "oracle"}
    code, out, _ = run(capsys, "decode", "--codebook", str(path), "--word", corrupted["word"], "--format", "text")
    assert out.split()[0] == x


def test_corrupt_seeded_is_deterministic(capsys):
    a = run(capsys, "corrupt", "--word", "0110100111", "--seed", "5")
    b = run(capsys, "corrupt", "--word", "0110100111", "--seed", "5")
    assert a == b and a[0] == 0
    code, out, _ = run(capsys, "corrupt", "--word", "0110100111", "--seed", "5", "--format", "text")
    assert out.strip() == json.loads(a[1])["word"]


def test_corrupt_usage_errors(capsys):
    assert run(capsys, "corrupt", "--word", "0110")[0] == 1
    assert run(capsys, "corrupt", "--word", "0110", "--positions", "1", "2", "--seed", "1")[0] == 1
    assert run(capsys, "corrupt", "--word", "0110", "--positions", "2", "2")[0] == 1
    assert run(capsys, "corrupt", "--word", "0120", "--positions", "1", "2")[0] == 1


def test_decode_failure_exit_codes(capsys, tmp_path):
    path = tmp_path / "book.txt"
    run(capsys, "codebook", "--n", "12", "--construction", "1", "-o", str(path))
    assert run(capsys, "decode", "--codebook", str(path), "--word", "0101")[0] == 2
    code, _, err = run(capsys, "decode", "--codebook", str(path), "--word", "1111111111")
    assert code == 3 and "decode failed" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "11", "--construction", "1", "--oracle")
    summary = json.loads(out)
    assert code == 0 and summary["failures"] == 0
    assert summary["instances"] == summary["codewords"] * 55


def test_verify_counterexample(capsys, tmp_path):
    path = tmp_path / "book.txt"
    run(capsys, "codebook", "--n", "12", "--construction", "1", "-o", str(path))
    lines = path.read_text().splitlines()
    assert run(capsys, "verify", "--codebook", str(path))[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines + ["000000000000"]) + "\n")
    code, _, err = run(capsys, "verify", "--codebook", str(bad))
    assert code == 2 and "not a member" in err


def test_verify_reports_counterexample_exit_4(capsys, tmp_path, monkeypatch):
    import twodel.cli as cli
    from twodel.bitseq import delete2
    from twodel.decoding import Failure, VerifyReport

    def fake(words, p, t, **kw):
        x = words[0]
        return VerifyReport(1, 1, (Failure(x, (1, 2), delete2(x, (1, 2)), "forced"),), 0, {})

    monkeypatch.setattr(cli, "verify_codebook", fake)
    code, out, _ = run(capsys, "verify", "--n", "11", "--construction", "2")
    assert code == 4 and json.loads(out)["counterexample"]["reason"] == "forced"


def test_redundancy_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "redundancy", "--n-min", "1024", "--n-max", "1073741824")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 21
    ratios = [float(r["redundancy_ours_paperformula"]) / float(r["redundancy_bgz"]) for r in rows]
    assert all(a > b for a, b in zip(ratios, ratios[1:])) and ratios[-1] < 0.2
    path = tmp_path / "curves.csv"
    run(capsys, "redundancy", "--n-min", "1024", "--n-max", "4096", "-o", str(path))
    assert len(path.read_text().splitlines()) == 4
    assert run(capsys, "redundancy", "--n-min", "10", "--n-max", "5")[0] == 1


def test_constraint_prob_formats(capsys):
    code, out, _ = run(capsys, "constraint-prob", "--n", "10", "--s", "6", "10", "--trials", "5000")
    rows = json.loads(out)
    assert code == 0 and [r["s"] for r in rows] == [6, 10]
    assert rows[1]["estimate"] == 1.0
    code, out, _ = run(capsys, "constraint-prob", "--n", "10", "--s", "6", "--trials", "5000", "--format", "csv")
    assert out.splitlines()[0].startswith("n,s,trials")
    code, out, _ = run(capsys, "constraint-prob", "--n", "10", "--s", "7", "--trials", "100", "--format", "text")
    assert "bound=None" in out


def test_determinism(capsys):
    a = run(capsys, "constraint-prob", "--n", "20", "--s", "12", "--trials", "3000", "--seed", "9")
    b = run(capsys, "constraint-prob", "--n", "20", "--s", "12", "--trials", "3000", "--seed", "9")
    assert a == b


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["params"])
    assert exc.value.code == 1
    assert run(capsys, "params", "--n", "12", "--s", "5")[0] == 1
    assert run(capsys, "codebook", "--n", "23", "--s", "9")[0] == 1
    assert run(capsys, "verify")[0] == 1


def test_cache_dir_flag(tmp_path):
    # a fresh process, so the in-process table memo cannot short-circuit the disk cache
    subprocess.run(
        [sys.executable, "-m", "twodel.cli", "params", "--n", "12", "--s", "9", "--no-targets",
         "--cache-dir", str(tmp_path)],
        capture_output=True, check=True,
    )
    assert [f.name for f in tmp_path.iterdir()] == ["hashfamily-v1-s9.bin"]


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "twodel.cli", "params", "--n", "10", "--no-targets"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["q1"] > 0
