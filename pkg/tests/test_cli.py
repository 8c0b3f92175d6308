import pytest

from codemit.cli import main
from codemit.codes import build_code


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_writes_csv_and_is_reproducible(tmp_path, capsys):
    args = ["run", "--scenario", "grover-noise-sweep", "--shots", "30", "--seeds", "2",
            "--no-timestamp", "--quiet"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert _run(capsys, *args, "--out", str(a))[0] == 0
    assert _run(capsys, *args, "--out", str(b), "--threads", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 2 + 16
    assert _run(capsys, *args, "--out", str(c), "--p2q", "0.04%,1e-4")[0] == 0
    assert len(c.read_text().splitlines()) == 2 + 8


def test_run_config_file_and_errors(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text('scenario = "code-strength"\nshots = 10\nseeds = [5]\ncodes = ["13,7,3"]\n')
    code, out, _ = _run(capsys, "run", "--config", str(cfg), "--no-timestamp", "--quiet")
    assert code == 0 and out.splitlines()[1].startswith("scenario,code,arm")
    cfg.write_text('scenario = "code-strength"\nbogus = 1\n')
    code, _, err = _run(capsys, "run", "--config", str(cfg))
    assert code == 2 and f"{cfg}:2: bogus: unknown setting" in err


def test_resource_limit_exit_code(tmp_path, capsys):
    # a systematic [26,14,3] code, too wide for the dense statevector cap
    k, m = 14, 12
    cols = [{i, i + 1} for i in range(11)] + [{0, 2}, {1, 3}, {2, 4}]
    lines = [f"{k + m} {k} 3"]
    for r in range(m):
        lines.append(" ".join(str(int(r in c)) for c in cols) + " "
                     + " ".join(str(int(r == j)) for j in range(m)))
    path = tmp_path / "wide.txt"
    path.write_text("\n".join(lines) + "\n")
    code, _, err = _run(capsys, "run", "--scenario", "code-strength", "--code", str(path),
                        "--shots", "1", "--seeds", "1", "--quiet")
    assert code == 3 and "resource limit" in err


def test_decode_and_encode(tmp_path, capsys):
    c = build_code("[13,7,3]")
    cw = format(c.encode(0b1010101), "013b")
    flipped = cw[:3] + ("1" if cw[3] == "0" else "0") + cw[4:]
    words = tmp_path / "w.txt"
    words.write_text(f"# shots\n{cw}\n{flipped}\n")
    code, out, _ = _run(capsys, "decode", "--code", "13,7,3", "--in", str(words))
    assert code == 0
    assert out.splitlines() == [f"{cw} Accepted 1010101 corrected=0",
                                f"{flipped} Accepted 1010101 corrected=1"]
    words.write_text("0101\n")
    code, _, err = _run(capsys, "decode", "--code", "13,7,3", "--in", str(words))
    assert code == 2 and ":1: expected 13 bits" in err
    code, out, _ = _run(capsys, "encode", "--code", "13,7,3", "1010101")
    assert out.strip() == f"1010101 {cw}"


def test_decode_reports_rejection(capsys, monkeypatch):
    import io
    c = build_code("[15,7,5]")
    from codemit.decoding import build_syndrome_table
    table = build_syndrome_table(c)
    word = next(v for v in range(1 << 15) if c.syndrome(v) not in table)
    monkeypatch.setattr("sys.stdin", io.StringIO(format(word, "015b") + "\n"))
    code, out, _ = _run(capsys, "decode", "--code", "[15,7,5]")
    assert out.strip() == f"{word:015b} Rejected"


def test_table_cost_and_ideal(tmp_path, capsys):
    code, out, err = _run(capsys, "table", "--code", "15,7,5")
    assert code == 0 and "entries=186 base=121 extension=65" in err
    code, out, _ = _run(capsys, "cost", "--code", "13,7,3")
    assert "added CNOTs: 238" in out and "twoq_count=2016" in out
    code, out, _ = _run(capsys, "cost", "--code", "17,11,3", "--circuit", "iqp", "--layers", "5")
    assert "added CNOTs: 88" in out
    code, out, _ = _run(capsys, "ideal", "--circuit", "grover", "--k", "4", "--top", "1")
    assert out.split()[0] == "1111" and float(out.split()[1]) == pytest.approx(0.9613, abs=1e-4)


def test_unknown_code_exit_code(capsys):
    code, _, err = _run(capsys, "table", "--code", "[99,1,1]")
    assert code == 2 and "unknown code" in err
