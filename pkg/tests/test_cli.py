import json
import subprocess
import sys

import pytest

from prefpersist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_entail_examples(capsys):
    code, out, _ = run(capsys, "entail", "--logic", "gs5", "--atoms", "p,q", "K p", "~K q")
    assert code == 0 and out.strip() == "true"
    code, out, _ = run(capsys, "entail", "--logic", "gs5", "--atoms", "p,q", "K p & K q", "~K q")
    assert code == 0 and out.strip() == "false"
    code, out, _ = run(capsys, "entail", "--logic", "gs5", "--classical", "K p", "~K q")
    assert out.strip() == "false"


def test_entail_mtel_json(capsys):
    code, out, _ = run(capsys, "entail", "--logic", "mtel", "--atoms", "p,q", "--format", "json", "F(K p)", "F(K q)")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "true" and data["certified"] == 0


def test_classify_and_honest(capsys):
    assert run(capsys, "classify", "--class", "diam", "M(~p)")[1].strip() == "true"
    assert run(capsys, "classify", "--class", "positive:P", "--lang", "FO", "exists x. P(x)")[1].strip() == "true"
    assert run(capsys, "honest", "--atoms", "p,q", "K p | K q")[1].strip() == "false"


def test_pipeline_example(capsys):
    code, out, _ = run(capsys, "pipeline", "--logic", "gs5", "--atoms", "p,q", "--premise", "K p & K q",
                       "--conclusion", "K p")
    assert code == 0
    assert "route: conservative-reduction" in out and out.rstrip().endswith("verdict: true")


def test_pipeline_batch_tsv_and_figure(capsys, tmp_path):
    batch = tmp_path / "q.txt"
    batch.write_text("gs5 | K p & K q | K p\ngs5 | K p \\/ K q | ~K q\n")
    fig = tmp_path / "routes.svg"
    code, out, _ = run(capsys, "pipeline", "--batch", str(batch), "--atoms", "p,q", "--format", "tsv",
                       "--figure", str(fig))
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows[0][0] == "line" and rows[1][-2] == "true" and rows[2][-2] == "false"
    assert fig.exists() and fig.read_text().startswith("<?xml")


def test_persist_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "persist", "--logic", "gs5", "--atoms", "p,q", "--format", "tsv", "K p", "M ~p")
    assert code == 0
    assert out.splitlines()[1:] == ["K p\tfalse\ttrue", "M ~p\ttrue\tfalse"]
    fig = tmp_path / "order.png"
    code, out, _ = run(capsys, "persist", "--logic", "gs5", "--atoms", "p,q", "--corpus", "10", "--figure", str(fig),
                       "K p")
    assert code == 0 and "conservative (corpus of" in out and fig.stat().st_size > 1000


def test_minimal_models_and_witness(capsys):
    code, out, _ = run(capsys, "minimal-models", "--logic", "gs5", "--atoms", "p,q", "K p | K q")
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(capsys, "minimal-models", "--logic", "mtel", "--atoms", "p", "F(K p)")
    assert code == 0 and out.splitlines()[0].startswith("refuted by postponement")
    code, out, _ = run(capsys, "witness", "--logic", "gs5", "--atoms", "p,q")
    assert code == 0 and out.startswith("true")
    code, out, _ = run(capsys, "circ", "--mode", "pred:P", "--minimal", "--dedup", "--max-size", "2",
                       "exists x. P(x)", "forall x y. (P(x) & P(y) -> x = y)")
    assert code == 0 and out.splitlines()[0] == "true"


def test_default_subcommand(capsys, tmp_path):
    th = tmp_path / "nixon.txt"
    th.write_text("default: : ~q / p\ndefault: : ~p / q\n")
    code, out, _ = run(capsys, "default", str(th), "--query", "p | q")
    assert code == 0 and out.strip().splitlines()[-1].endswith("true")


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


@pytest.mark.parametrize("argv,code", [
    (["entail", "--logic", "gs5", "--atoms", "p", "K p", "K r"], 1),
    (["entail", "--logic", "gs5", "K p &", "K q"], 1),
    (["bogus"], 1),
    ([], 1),
    (["entail", "--logic", "gs5", "--atoms", "a,b,c,d,e", "K a", "K b"], 2),
    (["pipeline", "--logic", "gs5"], 1),
    (["entail", "--logic", "gs5", "p", "K p"], 1),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unknown_exit_code(capsys):
    # K p first holds exactly at time 2, beyond horizon 1, and cannot be postponed
    argv = ["entail", "--logic", "mtel", "--atoms", "p,q", "--horizon", "1", "--postpone", "1",
            "F(P(P T) & H(H(H _|_)) & K p)", "K q"]
    code, out, _ = run(capsys, *argv)
    assert (code, out.strip()) == (2, "unknown")
    assert run(capsys, *argv, "--allow-unknown")[0] == 0


def test_reports_are_byte_identical(capsys):
    argv = ["persist", "--logic", "gs5", "--atoms", "p,q", "--corpus", "15", "--seed", "3", "--format", "json",
            "K p | M q"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "prefpersist.cli", "classify", "--class", "box", "K p"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "true"
