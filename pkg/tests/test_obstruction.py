import pytest

from gridcolor import obstruction
from gridcolor.bounds import INCONCLUSIVE
from gridcolor.cache import JsonFileCache, VerdictCache
from gridcolor.grid import DomainError, GridDims, verify_coloring
from gridcolor.obstruction import (
    Classifier,
    Status,
    Verdict,
    bipartite_ramsey2,
    chart,
    classify,
    compute_obs,
    default_max_dim,
    render_chart,
)
from gridcolor.search import SearchBudget


@pytest.fixture
def bounds_only():
    return Classifier(search=False)


@pytest.mark.parametrize(
    ("n", "m", "c", "status", "rule"),
    [
        (2, 100, 2, Status.COLORABLE, "trivial"),
        (10, 10, 3, Status.COLORABLE, "construction:bundled:g10x10-3col"),
        (5, 5, 2, Status.NOT_COLORABLE, "uncolor1"),
        (7, 3, 2, Status.NOT_COLORABLE, "uncolor2"),
        (10, 11, 3, Status.NOT_COLORABLE, "profile-cascade"),
        (19, 17, 4, Status.NOT_COLORABLE, "profile-cascade"),
        (18, 18, 4, Status.UNKNOWN, "timeout"),
    ],
)
def test_classify_cascade(bounds_only, n, m, c, status, rule):
    verdict = bounds_only.classify(n, m, c)

    assert verdict.status is status
    assert verdict.rule == rule


def test_colorable_verdicts_carry_valid_witnesses(bounds_only):
    verdict = bounds_only.classify(16, 20, 4)

    assert verdict.status is Status.COLORABLE
    assert verdict.witness.dims == GridDims(16, 20)
    assert verify_coloring(verdict.witness)


def test_refutations_carry_evidence(bounds_only):
    verdict = bounds_only.classify(10, 11, 3)

    assert verdict.letter == "N"
    assert verdict.as_dict()["evidence"]["threshold_k"] >= 1
    assert verdict.witness is None


def test_module_level_classify():
    assert classify(5, 5, 2).status is Status.NOT_COLORABLE


def test_classify_validates_arguments(bounds_only):
    with pytest.raises(DomainError):
        bounds_only.classify(0, 3, 2)


def test_containment_from_memo(bounds_only):
    bounds_only.classify(5, 5, 2)
    bounds_only.classify(10, 10, 3)

    bigger = bounds_only.classify(6, 5, 2)
    smaller = bounds_only.classify(9, 8, 3)

    assert bigger.status is Status.NOT_COLORABLE
    assert bigger.rule == "containment:5x5"
    assert bigger.evidence == {"from": "5x5", "rule": "uncolor1"}
    assert smaller.status is Status.COLORABLE
    assert smaller.rule == "containment:10x10"
    assert smaller.witness.dims == GridDims(9, 8)
    assert verify_coloring(smaller.witness)


def test_memo_answers_repeat_and_transposed_queries(bounds_only):
    first = bounds_only.classify(4, 7, 2)

    assert bounds_only.classify(4, 7, 2) is first
    assert bounds_only.classify(7, 4, 2).status is Status.NOT_COLORABLE


def test_assume_rfc_marks_verdicts_conditional():
    classifier = Classifier(search=False, assume_rfc=True)

    square = classifier.classify(18, 18, 4)
    wide = classifier.classify(12, 21, 4)

    assert square.status is Status.COLORABLE
    assert square.rule == "rfc:g18x18-rfset"
    assert square.conditional
    assert square.as_dict()["conditional"] is True
    assert wide.rule == "rfc:g21x12-rfset-a"


def test_verdicts_persist_through_the_cache(tmp_path):
    path = tmp_path / "verdicts.json"
    Classifier(search=False, cache=VerdictCache(JsonFileCache(path))).classify(7, 3, 2)
    Classifier(search=False, cache=VerdictCache(JsonFileCache(path))).classify(18, 18, 4)

    fresh = Classifier(search=False, cache=VerdictCache(JsonFileCache(path)))
    verdict = fresh.classify(3, 7, 2)

    assert verdict.status is Status.NOT_COLORABLE
    assert verdict.rule == "uncolor2"
    assert JsonFileCache(path).get("7x3x2")["status"] == "NotColorable"
    assert JsonFileCache(path).get("18x18x4") is None


def test_conditional_verdicts_are_not_cached(tmp_path):
    cache = VerdictCache(JsonFileCache(tmp_path / "verdicts.json"))

    Classifier(search=False, assume_rfc=True, cache=cache).classify(18, 18, 4)

    assert cache.get(18, 18, 4) is None


def test_cached_refutation_answers_containment(tmp_path):
    path = tmp_path / "verdicts.json"
    Classifier(search=False, cache=VerdictCache(JsonFileCache(path))).classify(5, 5, 2)

    verdict = Classifier(search=False, cache=VerdictCache(JsonFileCache(path))).classify(5, 9, 2)

    assert verdict.rule == "containment:5x5"


def test_verdict_from_record():
    verdict = Verdict.from_record({"n": 3, "m": 7, "c": 2, "status": "NotColorable", "rule": None})

    assert verdict.rule == "cache"
    assert verdict.record()["status"] == "NotColorable"


def test_search_step_colors_grids(monkeypatch):
    monkeypatch.setattr(obstruction, "find_construction", lambda n, m, c: None)

    verdict = Classifier(budget=SearchBudget(max_nodes=100_000)).classify(4, 4, 2)

    assert verdict.status is Status.COLORABLE
    assert verdict.rule == "search"
    assert verify_coloring(verdict.witness)


def test_maxrf_search_step_refutes(monkeypatch):
    monkeypatch.setattr(obstruction, "check_uncolorable", lambda n, m, c: INCONCLUSIVE)
    monkeypatch.setattr(obstruction, "profile_cascade_uncolorable", lambda n, m, c: INCONCLUSIVE)
    monkeypatch.setattr(obstruction, "maxrf_upper", lambda n, m: n * m)

    verdict = Classifier(budget=SearchBudget(max_nodes=1000)).classify(5, 5, 2)

    assert verdict.status is Status.NOT_COLORABLE
    assert verdict.rule == "maxrf-search"


def test_maxrf_bound_step_refutes(monkeypatch):
    monkeypatch.setattr(obstruction, "check_uncolorable", lambda n, m, c: INCONCLUSIVE)
    monkeypatch.setattr(obstruction, "profile_cascade_uncolorable", lambda n, m, c: INCONCLUSIVE)

    verdict = Classifier(search=False).classify(11, 10, 3)

    assert verdict.rule == "maxrf-bound"
    assert verdict.evidence == {"maxrf_upper": 36, "target": 37}


def test_exhausted_search_is_unknown():
    verdict = Classifier(budget=SearchBudget(max_nodes=5)).classify(18, 18, 4)

    assert verdict.status is Status.UNKNOWN
    assert verdict.letter == "U"


def test_render_chart_layout():
    assert render_chart([["C", "N"]], range(3, 4), range(5, 7)) == "   5  6\n 3  C  N\n"


def test_chart_for_two_colors_is_monotone(bounds_only):
    result = chart(2, range(1, 9), range(1, 9), bounds_only)

    assert "U" not in {x for row in result.cells for x in row}
    for n in range(2, 9):
        for m in range(2, 9):
            if result.letter(n, m) == "C":
                assert result.letter(n - 1, m) == "C"
                assert result.letter(n, m - 1) == "C"
            assert result.letter(n, m) == result.letter(m, n)
    assert result.letter(6, 4) == "C"
    assert result.letter(5, 5) == "N"
    assert result.as_dict()["n_range"] == [1, 8]


def test_obs_for_two_colors(bounds_only):
    report = compute_obs(2, classifier=bounds_only)

    assert report.minimal_grids == (GridDims(3, 7), GridDims(5, 5), GridDims(7, 3))
    assert report.complete
    assert report.cardinality_bounds == (2, 8)
    assert report.as_dict()["minimal"] == [[3, 7], [5, 5], [7, 3]]
    assert report.max_dim == default_max_dim(2) == 7


def test_obs_and_ramsey_validate_palette():
    with pytest.raises(DomainError):
        compute_obs(1)
    with pytest.raises(DomainError):
        bipartite_ramsey2(1)


@pytest.mark.parametrize(("c", "expected"), [(2, (5, 5)), (3, (11, 11)), (4, (17, 19))])
def test_bipartite_ramsey(c, expected):
    assert bipartite_ramsey2(c, Classifier(search=False)) == expected


def test_default_max_dim():
    assert [default_max_dim(c) for c in (2, 3, 4)] == [7, 19, 41]


@pytest.mark.slow
def test_obs_for_three_colors():
    report = compute_obs(3, classifier=Classifier(search=False))

    assert report.complete
    assert report.minimal_grids == (
        GridDims(4, 19),
        GridDims(5, 16),
        GridDims(7, 13),
        GridDims(10, 11),
        GridDims(11, 10),
        GridDims(13, 7),
        GridDims(16, 5),
        GridDims(19, 4),
    )


@pytest.mark.slow
def test_obs_for_four_colors_leaves_the_known_open_grids():
    report = compute_obs(4, classifier=Classifier(search=False))

    assert set(report.unknown_frontier) == {
        GridDims(17, 17),
        GridDims(17, 18),
        GridDims(18, 17),
        GridDims(18, 18),
        GridDims(21, 12),
        GridDims(12, 21),
    }
    assert GridDims(17, 18) in report.dependencies[GridDims(17, 17)]
    assert not report.complete


@pytest.mark.slow
def test_obs_for_four_colors_under_rfc():
    report = compute_obs(4, classifier=Classifier(search=False, assume_rfc=True))

    assert set(report.minimal_grids) == {
        GridDims(41, 5),
        GridDims(31, 6),
        GridDims(29, 7),
        GridDims(25, 9),
        GridDims(23, 10),
        GridDims(22, 11),
        GridDims(21, 13),
        GridDims(19, 17),
        GridDims(17, 19),
        GridDims(13, 21),
        GridDims(11, 22),
        GridDims(10, 23),
        GridDims(9, 25),
        GridDims(7, 29),
        GridDims(6, 31),
        GridDims(5, 41),
    }
    assert all(dims.transpose() in report.minimal_grids for dims in report.minimal_grids)
    assert report.complete
    assert report.as_dict()["assume_rfc"] is True


def test_search_enabled_classifier_decides_small_grids(monkeypatch):
    monkeypatch.setattr(obstruction, "find_construction", lambda n, m, c: None)
    classifier = Classifier(budget=SearchBudget(max_nodes=1_000_000))

    colored = classifier.classify(4, 6, 2)
    refuted = classifier.classify(3, 7, 2)

    assert colored.status is Status.COLORABLE
    assert colored.rule == "search"
    assert colored.witness.dims == GridDims(4, 6)
    assert verify_coloring(colored.witness)
    assert refuted.status is Status.NOT_COLORABLE
    assert refuted.rule == "uncolor2"


def test_search_enabled_classifier_agrees_with_bounds_only(bounds_only):
    searching = Classifier(budget=SearchBudget(max_nodes=1_000_000))

    for n, m in ((4, 6), (6, 4), (5, 4), (5, 5), (6, 3), (7, 2)):
        assert searching.classify(n, m, 2).status is bounds_only.classify(n, m, 2).status


def _expand(rows: dict[str, list[int]], width: int) -> list[str]:
    return [line for key, ns in rows.items() for line in [key.ljust(width, "N")] * len(ns)]


CHART_TWO = [
    "CCCCCCC",
    "CCCCCNN",
    "CCCCCNN",
    "CCCNNNN",
    "CCCNNNN",
    "CNNNNNN",
    "CNNNNNN",
]

CHART_THREE = _expand(
    {
        "C" * 18: [3],
        "C" * 16: [4],
        "C" * 13: [5, 6],
        "C" * 10: [7, 8, 9],
        "C" * 8: [10],
        "C" * 7: [11, 12],
        "C" * 4: [13, 14, 15],
        "C" * 2: [16, 17, 18],
        "C": [19, 20],
    },
    18,
)

CHART_FOUR = _expand(
    {
        "C" * 18: [8, 9, 10, 11],
        "C" * 17 + "U": [12],
        "C" * 17: [13, 14, 15, 16],
        "C" * 13 + "UU": [17, 18],
        "C" * 13: [19, 20],
        "C" * 8 + "U": [21],
        "C" * 7: [22],
        "C" * 6: [23, 24],
        "C" * 5: [25, 26, 27, 28],
        "C" * 3: [29, 30],
        "C" * 2: list(range(31, 41)),
        "C": [41],
    },
    18,
)


def test_chart_for_two_colors_matches_known_table(bounds_only):
    result = chart(2, range(2, 9), range(2, 9), bounds_only)

    assert ["".join(row) for row in result.cells] == CHART_TWO


def test_chart_for_three_colors_matches_known_table(bounds_only):
    result = chart(3, range(3, 21), range(3, 21), bounds_only)

    assert ["".join(row) for row in result.cells] == CHART_THREE


@pytest.mark.slow
def test_chart_for_four_colors_matches_known_table():
    result = chart(4, range(8, 42), range(4, 22), Classifier(search=False))

    assert ["".join(row) for row in result.cells] == CHART_FOUR
