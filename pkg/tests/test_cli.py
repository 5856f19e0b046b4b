from __future__ import annotations

import io
import json

import pytest

from rnatopo.cli import run


def call(*argv: str) -> tuple[int, str]:
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def test_genus_text():
    code, out = call("genus", "--structure", "([)]")
    assert code == 0 and out.splitlines()[0] == "genus 1"


def test_genus_json():
    code, out = call("--format", "json", "genus", "--structure", "([&)]")
    data = json.loads(out)
    assert code == 0 and data["genus_total"] == 0 and data["boundary_lengths"] == [2, 2]


def test_format_after_subcommand():
    code, out = call("genus", "--structure", "([)]", "--format", "json")
    assert code == 0 and json.loads(out)["genus_total"] == 1


def test_structure_from_file(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text('{"n": 4, "backbones": [[1, 4]], "arcs": [[1, 3], [2, 4]]}')
    code, out = call("shadow", "--structure", f"@{path}")
    assert code == 0 and out.strip() == "([)]"


def test_classify():
    code, out = call("classify", "--structure", "([&)]")
    assert code == 0 and "gamma 0" in out and "AP no" in out


def test_decompose_json():
    code, out = call("--format", "json", "decompose", "--structure", "([&)]")
    assert code == 0 and json.loads(out)


def test_atlas():
    code, out = call("atlas", "--backbones", "1", "--genus", "1")
    assert code == 0 and out.startswith("4 entries")
    code, out = call("--format", "json", "atlas", "--backbones", "2", "--genus", "0", "--from-cuts")
    assert code == 0 and len(json.loads(out)) == 7


def test_fold_and_partition():
    code, out = call("fold", "--seq-r", "GGG", "--seq-s", "CCC")
    assert code == 0 and out.split()[-1] == "-9.0000"
    code, out = call("--format", "json", "partition", "--seq-r", "AA", "--seq-s", "UU")
    assert code == 0 and json.loads(out)


def test_fasta(tmp_path):
    path = tmp_path / "p.fa"
    path.write_text(">r\nGG\nG\n>s\nCCC\n")
    assert call("fold", "--fasta", str(path)) == call("fold", "--seq-r", "GGG", "--seq-s", "CCC")


def test_fasta_needs_two_records(tmp_path):
    path = tmp_path / "p.fa"
    path.write_text(">r\nGGG\n")
    assert call("fold", "--fasta", str(path))[0] == 3


def test_probs_tsv():
    code, out = call("probs", "--seq-r", "AA", "--seq-s", "UU")
    lines = out.splitlines()
    assert code == 0 and lines[0].split("\t") == ["kind", "i", "j", "h", "l", "p"]


def test_sample_is_deterministic():
    a = call("--format", "json", "sample", "--seq-r", "GCAU", "--seq-s", "AUGC", "-k", "20", "--seed", "5")
    b = call("--format", "json", "sample", "--seq-r", "GCAU", "--seq-s", "AUGC", "-k", "20", "--seed", "5")
    assert a == b and a[0] == 0
    rows = [json.loads(line) for line in a[1].splitlines()]
    assert len(rows) == 20 and all("structure" in r for r in rows)


def test_oracle_check():
    code, out = call("oracle-check", "--seq-r", "AA", "--seq-s", "UU")
    assert code == 0 and out.splitlines()[0] == "count dp=7 oracle=7 OK"


def test_jobs(tmp_path):
    paths = []
    for n, (r, s) in enumerate([("GG", "CC"), ("AU", "AU")]):
        p = tmp_path / f"{n}.fa"
        p.write_text(f">r\n{r}\n>s\n{s}\n")
        paths += ["--fasta", str(p)]
    assert call("fold", *paths, "--jobs", "2") == call("fold", *paths)


@pytest.mark.parametrize(
    "argv, code",
    [
        (["genus"], 2),
        (["nonsense"], 2),
        (["genus", "--structure", "(("], 3),
        (["fold", "--seq-r", "AXA", "--seq-s", "U"], 3),
        (["fold", "--seq-r", "A"], 3),
        (["atlas", "--backbones", "1", "--genus", "5"], 4),
        (["fold", "--seq-r", "A" * 10, "--seq-s", "U", "--length-cap", "5"], 4),
        (["oracle-check", "--seq-r", "A" * 10, "--seq-s", "U" * 10], 4),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert call(*argv)[0] == code
    if code != 2:
        assert capsys.readouterr().err.startswith("error:")


def test_atlas_construct_falls_back_to_arcs():
    code, out = call("atlas", "--backbones", "1", "--genus", "2", "--construct", "7")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "1 entries" and "arcs=7\tgenus=2" in lines[1]
