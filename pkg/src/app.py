"""
TIM-TIN GDoF Lab - FastAPI 웹 서버
"""

import logging
from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException, Request

from .config import DEFAULT_SEED, ORACLE_POWERS, ORACLE_SEEDS, ensure_dirs
from .decomp import SearchBudget, evaluate_map, result_to_dict, search, time_share
from .fixtures import fixture_document, fixture_names
from .model import (
    GdofError,
    channel_from_dict,
    format_rationals,
    map_from_dict,
    scheme_from_dict,
    validate_scheme,
)
from .report import (
    DecompositionReportGenerator,
    gdof_document,
    oracle_document,
    tim_document,
    tin_document,
)
from .run_store import RunNotFoundError, RunStore
from .tim import TimTopology
from .tin import TinTarget

logger = logging.getLogger(__name__)

# 디렉토리 초기화
ensure_dirs()

app = FastAPI(title="TIM-TIN GDoF Lab")

# Managers
run_store = RunStore()
report_generator = DecompositionReportGenerator()


async def _body(request: Request) -> Dict[str, Any]:
    try:
        data = await request.json()
    except ValueError:
        raise HTTPException(status_code=400, detail="요청 본문이 JSON 이 아닙니다") from None
    if not isinstance(data, dict):
        raise HTTPException(status_code=400, detail="요청 본문은 JSON 객체여야 합니다")
    return data


def _channel_and_scheme(data: Dict[str, Any]):
    channel = channel_from_dict(data.get("topology"))
    scheme = validate_scheme(scheme_from_dict(data.get("scheme")), channel)
    return channel, scheme


def _domain_call(fn, *args, **kwargs) -> Dict[str, Any]:
    """도메인 오류는 400 으로"""
    try:
        return fn(*args, **kwargs)
    except (GdofError, ValueError, TypeError) as e:
        logger.info("요청 실패: %s", e)
        raise HTTPException(status_code=400, detail=str(e)) from None


@app.post("/api/eval")
async def api_eval(request: Request):
    """사용자별 GDoF (streams=true 이면 스트림별 분해 포함)"""
    data = await _body(request)

    def handle():
        channel, scheme = _channel_and_scheme(data)
        return gdof_document(scheme, channel, with_streams=bool(data.get("streams", False)))

    return {"success": True, **_domain_call(handle)}


@app.post("/api/sc")
async def api_sc(request: Request):
    """GDoF + 스트림별 연속 간섭 제거 분해"""
    data = await _body(request)

    def handle():
        channel, scheme = _channel_and_scheme(data)
        return gdof_document(scheme, channel, with_streams=True)

    return {"success": True, **_domain_call(handle)}


@app.post("/api/oracle")
async def api_oracle(request: Request):
    """유한 P 전송률과 기울기"""
    data = await _body(request)

    def handle():
        channel, scheme = _channel_and_scheme(data)
        powers = [float(p) for p in data.get("P", ORACLE_POWERS)]
        seeds = list(ORACLE_SEEDS) if data.get("check") else None
        return oracle_document(scheme, channel, powers, int(data.get("seed", DEFAULT_SEED)), seeds)

    return {"success": True, **_domain_call(handle)}


@app.post("/api/tin")
async def api_tin(request: Request):
    """TIN 대칭 GDoF, target 이 있으면 달성 가능성"""
    data = await _body(request)

    def handle():
        channel = channel_from_dict(data.get("topology"))
        target = data.get("target")
        return tin_document(channel, None if target is None else TinTarget.of(target))

    return {"success": True, **_domain_call(handle)}


@app.post("/api/tim")
async def api_tim(request: Request):
    """TIM 비율과 벡터 할당 (links: 1-based [k, i] 목록 또는 threshold)"""
    data = await _body(request)

    def handle():
        channel = channel_from_dict(data.get("topology"))
        if data.get("links") is not None:
            topo = TimTopology(channel.K, map_from_dict({"tim_links": data["links"]}).tim_links)
        else:
            topo = TimTopology.from_channel(channel, data.get("threshold", 0))
        return tim_document(topo)

    return {"success": True, **_domain_call(handle)}


@app.post("/api/decompose")
async def api_decompose(request: Request):
    """분해 맵 하나 평가(map) 또는 분해 탐색"""
    data = await _body(request)

    def handle():
        channel = channel_from_dict(data.get("topology"))
        targets = data.get("tin_targets")
        targets = None if targets is None else TinTarget.of(targets).d
        if data.get("map") is not None:
            return result_to_dict(evaluate_map(channel, map_from_dict(data["map"]), targets), with_scheme=True)

        cap = int(data.get("exhaustive_cap", SearchBudget().exhaustive_cap))
        search_result = search(channel, SearchBudget(exhaustive_cap=cap, tin_targets=targets))
        title = data.get("title") or "TIM-TIN 분해 보고서"
        report = report_generator.generate(channel, search_result, title=title,
                                           include_evaluated=bool(data.get("include_evaluated", False)))
        if data.get("save"):
            report["run_id"] = run_store.save_run(channel, report, title=title, exhaustive_cap=cap)
        report["markdown"] = report_generator.to_markdown(report)
        return report

    return {"success": True, **_domain_call(handle)}


@app.post("/api/timeshare")
async def api_timeshare(request: Request):
    """GDoF 튜플 목록과 가중치의 시분할"""
    data = await _body(request)
    tuples: List[Any] = data.get("tuples") or []
    weights: List[Any] = data.get("weights") or []
    result = _domain_call(time_share, tuples, weights)
    return {"success": True, "gdof": format_rationals(result)}


@app.get("/api/fixtures")
async def get_fixtures():
    """골든 픽스처 목록"""
    return {"fixtures": fixture_names()}


@app.get("/api/fixtures/{name}")
async def get_fixture(name: str):
    """골든 픽스처 JSON 문서"""
    try:
        return fixture_document(name)
    except KeyError:
        raise HTTPException(status_code=404, detail=f"픽스처를 찾을 수 없습니다: {name}") from None


@app.get("/api/runs")
async def get_runs():
    """실행 목록 조회"""
    runs = run_store.list_runs()
    return {
        "runs": [
            {"id": r.get("id"), "title": r.get("title", "제목 없음"), "date": r.get("created_at", "")}
            for r in runs
        ]
    }


@app.get("/api/runs/{run_id}")
async def get_run(run_id: str):
    """실행 상세 조회"""
    try:
        meta, result = run_store.load_run(run_id)
    except RunNotFoundError:
        raise HTTPException(status_code=404, detail=f"실행을 찾을 수 없습니다: {run_id}") from None
    return {"meta": meta, "result": result}


@app.put("/api/runs/{run_id}/title")
async def update_run_title(run_id: str, request: Request):
    """실행 제목 수정"""
    data = await _body(request)
    title: Optional[str] = data.get("title")
    if not title:
        raise HTTPException(status_code=400, detail="title 이 필요합니다")
    try:
        run_store.update_run_title(run_id, title)
    except RunNotFoundError:
        raise HTTPException(status_code=404, detail=f"실행을 찾을 수 없습니다: {run_id}") from None
    return {"success": True}


@app.delete("/api/runs/{run_id}")
async def delete_run(run_id: str):
    """실행 삭제"""
    try:
        run_store.delete_run(run_id)
    except RunNotFoundError:
        raise HTTPException(status_code=404, detail=f"실행을 찾을 수 없습니다: {run_id}") from None
    return {"success": True}


def main():
    """서버 실행"""
    uvicorn.run(app, host="127.0.0.1", port=7860)


if __name__ == "__main__":
    main()
