import json

import pytest

from src import fixtures
from src.decomp import search
from src.model import format_rational, load_scheme
from src.report import DecompositionReportGenerator, tim_document, tin_document
from src.run_store import RunNotFoundError, RunStore
from src.tim import TimTopology
from src.tin import TinTarget


@pytest.fixture
def example1_search():
    return search(fixtures.example1_channel())


@pytest.fixture
def generator():
    return DecompositionReportGenerator()


@pytest.fixture
def store(tmp_path):
    return RunStore(tmp_path / "runs")


def test_generate_report(generator, example1_search):
    report = generator.generate(fixtures.example1_channel(), example1_search, title="예제")
    assert report["title"] == "예제"
    assert report["num_links"] == 2
    assert report["num_evaluated"] == 4
    assert report["num_failed"] == 0
    assert report["best_symmetric"] == format_rational(max(r.symmetric for r in example1_search.frontier))
    assert len(report["evaluated"]) == 4
    assert "date" in report
    assert "date" not in generator.strip_volatile(report)


def test_report_without_evaluated(generator, example1_search):
    report = generator.generate(fixtures.example1_channel(), example1_search, include_evaluated=False)
    assert "evaluated" not in report


def test_markdown_lists_frontier(generator, example1_search):
    report = generator.generate(fixtures.example1_channel(), example1_search)
    text = generator.to_markdown(report)
    assert "## 파레토 프런티어" in text
    for entry in report["frontier"]:
        assert f"### 맵 #{entry['mask']}" in text
    assert "검증 실패" not in text


def test_save_files(generator, example1_search, tmp_path):
    report = generator.generate(fixtures.example1_channel(), example1_search)
    generator.save_json(report, tmp_path / "report.json")
    generator.save_markdown(report, tmp_path / "report.md")
    assert json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))["num_evaluated"] == 4
    assert (tmp_path / "report.md").exists()


def test_emit_schemes(generator, example1_search, tmp_path):
    written = generator.emit_schemes(example1_search, tmp_path / "out")
    assert len(written) == len(example1_search.frontier)
    for path, result in zip(written, example1_search.frontier):
        assert path.endswith(f"scheme_{result.mask}.json")
        assert load_scheme(path) == result.scheme


def test_tin_document_reports_cycle_with_reference_node():
    data = tin_document(fixtures.example1_channel(), TinTarget.of(["0.8", "0.8", "0.8"]))
    assert data["feasible"] is False
    assert all(0 <= v <= 3 for v in data["negative_cycle"])


def test_tim_document_golden(golden):
    data = tim_document(TimTopology(5, fixtures.baseline_map().tim_links))
    assert data["n"] == 2
    assert data["directions"][1] == data["directions"][4]
    assert data["user_methods"] == ["half_rate"] * 5


# ---------------------------------------------------------------------------
# 실행 기록
# ---------------------------------------------------------------------------

def test_run_round_trip(store, golden):
    run_id = store.save_run(golden, {"best_symmetric": "1/3"}, title="골든", exhaustive_cap=16)
    meta, result = store.load_run(run_id)
    assert meta["title"] == "골든"
    assert meta["K"] == 5
    assert meta["num_links"] == 11
    assert result == {"best_symmetric": "1/3"}


def test_create_run_without_result(store, golden):
    run_id, meta = store.create_run(golden)
    assert meta["title"] == "제목 없음"
    assert store.load_run(run_id) == (meta, None)


def test_list_update_delete(store, golden):
    first = store.save_run(golden, {}, title="a")
    second = store.save_run(golden, {}, title="b")
    assert {r["id"] for r in store.list_runs()} == {first, second}

    store.update_run_title(first, "새 제목")
    assert store.load_run(first)[0]["title"] == "새 제목"

    store.delete_run(second)
    assert [r["id"] for r in store.list_runs()] == [first]
    with pytest.raises(RunNotFoundError):
        store.load_run(second)


def test_list_skips_broken_metadata(store, golden):
    run_id = store.save_run(golden, {})
    broken = store.base_dir / "broken"
    broken.mkdir()
    (broken / "metadata.json").write_text("{", encoding="utf-8")
    assert [r["id"] for r in store.list_runs()] == [run_id]


@pytest.mark.parametrize("run_id", ["missing", "../runs", "."])
def test_unknown_run_rejected(store, run_id):
    with pytest.raises(RunNotFoundError):
        store.load_run(run_id)
