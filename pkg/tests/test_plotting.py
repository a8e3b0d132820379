from prefpersist import parse_s5
from prefpersist.pipeline import run_batch
from prefpersist.plotting import persistence_figure, persistence_summary_figure, route_figure

BATCH = "gs5 | K p & K q | K p\ngs5 | K p \\/ K q | ~K q\ngs5 | K p | M ~q | ~K q\ngs5 | K r | K p\n"


def test_route_figure_is_byte_stable(tmp_path):
    rows = run_batch(BATCH, atoms=["p", "q"])
    a = route_figure(rows, tmp_path / "a.svg").read_bytes()
    b = route_figure(rows, tmp_path / "b.svg").read_bytes()
    assert a == b and b"conservative-reduction" in a


def test_persistence_figures(tmp_path, gs5_pq):
    out = persistence_figure(gs5_pq, parse_s5("K p | M q"), tmp_path / "sub" / "o.png")
    assert out.exists() and out.read_bytes()[:4] == b"\x89PNG"
    svg = persistence_summary_figure([("K p", False, True), ("M p", True, False), ("T", True, True)],
                                     tmp_path / "s.svg")
    assert b"downward only" in svg.read_bytes()


def test_pdf_output(tmp_path, gs5_pq):
    out = persistence_figure(gs5_pq, parse_s5("K p"), tmp_path / "o.pdf")
    assert out.read_bytes()[:4] == b"%PDF"
