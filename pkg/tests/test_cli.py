import io
import contextlib

import pytest

from ramseykit.cli import main
from ramseykit.core import parse_structure, serialize_structure
from ramseykit.fixtures import chain, cor_fan_A
from ramseykit.trees import build_tree, tree_structure


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def test_validate_ok_and_invalid(tmp_path):
    good = tmp_path / "good.struct"
    good.write_text(serialize_structure(cor_fan_A()))
    code, out = run(["validate", str(good)])
    assert code == 0 and "verdict: valid" in out

    bad = tmp_path / "bad.struct"
    bad.write_text("signature:\nrel R 2\nuniverse 3\ntable R\n0 5\n")
    code, out = run(["validate", str(bad)])
    assert code == 1 and "verdict: invalid" in out


def test_parse_error_exit_code(tmp_path):
    broken = tmp_path / "broken.struct"
    broken.write_text("signature:\nrel R x\nuniverse 2\n")
    code, _ = run(["validate", str(broken)])
    assert code == 3


def test_tree_shorthand_and_chain():
    code, out = run(["qftype", "2^<=2@L0", "--tuple", "1,4"])
    assert code == 0 and "closure-size: 3" in out
    code, out = run(["closure", "2^<=2@L0", "--tuple", "1,4"])
    assert code == 0 and "labels: e 0 1" in out


def test_tuple_by_labels():
    code, out = run(["closure", "2^<=2@L0", "--tuple", "0.0,0.1"])
    assert code == 0 and "labels: 0 0.0 0.1" in out


def test_isolate_prints_formula():
    code, out = run(["isolate", "2^<=1@L0", "--tuple", "1,2"])
    assert code == 0 and out.startswith("(and ") and "(fn meet x1 x2)" in out


def test_arrow_exit_codes_and_witness():
    code, out = run(["arrow", "chain:6", "chain:3", "chain:2", "--colors", "2"])
    assert code == 0 and "verdict: holds" in out
    code, out = run(["arrow", "chain:5", "chain:3", "chain:2", "--colors", "2", "--verify"])
    assert code == 1
    assert "verdict: fails" in out and "coloring:" in out and "verify: ok" in out
    assert any(line.startswith("copy ") and " color " in line for line in out.splitlines())


def test_arrow_budget_exit_code():
    code, out = run(["arrow", "chain:6", "chain:3", "chain:2", "--colors", "2", "--budget", "3"])
    assert code == 2 and "budget" in out


def test_report_header_stability():
    argv = ["arrow", "chain:5", "chain:3", "chain:2", "--colors", "2", "--format", "report"]
    code1, out1 = run(argv)
    code2, out2 = run(argv)
    assert (code1, out1) == (code2, out2)
    assert "seed: 0" in out1 and "lane:" in out1 and "workers:" in out1


def test_skew_table():
    code, out = run(["skew", "2", "1"])
    assert code == 0
    assert "0 -> 0.0" in out and "1 -> 1.0.0" in out


def test_fill_writes_files(tmp_path):
    d = tmp_path / "d.struct"
    d.write_text(serialize_structure(tree_structure([(), (0, 0)], "Ls").structure))
    out_dir = tmp_path / "out"
    code, out = run(["fill", str(d), "2", "--out", str(out_dir)])
    assert code == 0 and "k: 1" in out
    filled = parse_structure((out_dir / "filled.struct").read_text())
    assert filled.size == 3
    extracted = parse_structure((out_dir / "extracted.struct").read_text())
    assert extracted.size == 2


def test_amalgam_negative_and_positive(tmp_path):
    a = tmp_path / "a.struct"
    b1 = tmp_path / "b1.struct"
    b2 = tmp_path / "b2.struct"
    from ramseykit.fixtures import cor_B1, cor_B2
    a.write_text(serialize_structure(cor_fan_A()))
    b1.write_text(serialize_structure(cor_B1()))
    b2.write_text(serialize_structure(cor_B2()))
    code, out = run(["amalgam", str(a), str(b1), str(b2),
                     "--e1", "0,2,3,4", "--e2", "0,1,3,4", "--bound", "12"])
    assert code == 1 and "amalgam: none" in out

    code, out = run(["amalgam", str(a), str(a), str(a),
                     "--e1", "0,1,2,3", "--e2", "0,1,2,3", "--bound", "8"])
    assert code == 0 and "amalgam: found" in out


def test_fixture_commands():
    code, out = run(["fixtures", "amalgamation-It"])
    assert code == 1 and "verdict: no-amalgam" in out
    code, out = run(["fixtures", "skew-golden"])
    assert code == 0 and "verdict: ok" in out
    code, out = run(["fixtures", "homogenize-chain", "--seed", "3"])
    assert code == 0 and "verdict: ok" in out


def test_homogenize_request_roundtrip(tmp_path):
    from ramseykit.homogenize import encode_coloring_as_structure
    from ramseykit.iso import enumerate_copies
    from ramseykit.ramsey import Coloring

    host = chain(6)
    pattern = chain(2)
    copies = enumerate_copies(host, pattern)
    coloring = Coloring(host, pattern,
                        {c.element_set: (sum(c.elements) % 2) for c in copies}, 2)
    target = encode_coloring_as_structure(host, pattern, coloring, 2)

    (tmp_path / "target.struct").write_text(serialize_structure(target))
    (tmp_path / "delta.forms").write_text("(rel R1 x1 x2)\n(rel R2 x1 x2)\n")
    request = tmp_path / "req.txt"
    request.write_text(
        "index: chain:6\n"
        f"target: {tmp_path / 'target.struct'}\n"
        "pattern: chain:3\n"
        f"delta: {tmp_path / 'delta.forms'}\n")
    code, out = run(["homogenize", str(request)])
    assert code == 0 and "result: ok" in out and "copy: " in out and "trace:" in out


def test_homogenize_no_copy_and_grow(tmp_path):
    from ramseykit.homogenize import encode_coloring_as_structure
    from ramseykit.ramsey import arrow_holds

    host = chain(5)
    verdict = arrow_holds(host, chain(3), chain(2), 2)
    target = encode_coloring_as_structure(host, chain(2), verdict.witness, 2)
    (tmp_path / "target.struct").write_text(serialize_structure(target))
    (tmp_path / "delta.forms").write_text("(rel R1 x1 x2)\n(rel R2 x1 x2)\n")
    request = tmp_path / "req.txt"
    request.write_text(
        "index: chain:5\n"
        f"target: {tmp_path / 'target.struct'}\n"
        "pattern: chain:3\n"
        f"delta: {tmp_path / 'delta.forms'}\n")
    code, out = run(["homogenize", str(request)])
    assert code == 1 and "no-homogeneous-copy" in out


def test_homogenize_grow_retries_taller_tree(tmp_path):
    request = tmp_path / "req.txt"
    request.write_text(
        "index: 1^<=1@Lt\n"      # too shallow for the pattern
        "target: chain:3\n"
        "pattern: 1^<=2@Lt\n")
    code, out = run(["homogenize", str(request)])
    assert code == 1 and "no-homogeneous-copy" in out
    code, out = run(["homogenize", str(request), "--grow"])
    assert code == 0 and "index: 1^<=2@Lt" in out


def test_unknown_element_is_input_error():
    code, _ = run(["closure", "2^<=1@L0", "--tuple", "9.9.9"])
    assert code == 3
