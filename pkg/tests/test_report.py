"""Figure and CSV rendering for the scan reports."""

from henson.report import (
    dichotomy_csv_rows,
    example_csv_rows,
    fuzz_csv_rows,
    save_dichotomy_figure,
    save_example_figure,
    save_fuzz_figure,
    write_csv,
)

DICHOTOMY = {
    "total_patterns": 20,
    "edge_free_pair": 12,
    "triangle": 8,
    "violations": [],
    "per_constant_set": [
        {"constant": [], "patterns": 16, "edge_free_pair": 9, "triangle": 7},
        {"constant": [1, 2], "patterns": 4, "edge_free_pair": 3, "triangle": 1},
    ],
}

EXAMPLE = {
    "n": 3,
    "ok": True,
    "templates_checked": 42,
    "violations": [],
    "disjunct_verdicts": [{"divides": True, "reason": "kn-phi-bound"}] * 6,
}

FUZZ = {
    "n": 3,
    "seed": 1,
    "trials": 10,
    "consistent": 8,
    "inconsistent": 2,
    "dividing": 3,
    "invariant_checks": 2,
    "failures": [],
}


def test_csv_rows_shapes():
    header, rows = dichotomy_csv_rows(DICHOTOMY)
    assert header[0] == "constant_positions" and len(rows) == 2
    assert rows[0] == ["-", 16, 9, 7, 0]
    assert rows[1][0] == "1|2"
    header, rows = example_csv_rows(EXAMPLE)
    assert len(rows) == 6 and all(r[1] for r in rows)
    header, rows = fuzz_csv_rows(FUZZ)
    assert ["failures", 0] in rows


def test_figures_render_to_files(tmp_path):
    targets = {
        "d.png": (save_dichotomy_figure, DICHOTOMY),
        "e.png": (save_example_figure, EXAMPLE),
        "f.png": (save_fuzz_figure, FUZZ),
    }
    for name, (fn, rep) in targets.items():
        path = tmp_path / name
        fn(rep, path)
        assert path.stat().st_size > 1000


def test_csv_writer(tmp_path):
    path = tmp_path / "out.csv"
    write_csv(path, ["a", "b"], [[1, 2], [3, 4]])
    assert path.read_text().strip().splitlines() == ["a,b", "1,2", "3,4"]
