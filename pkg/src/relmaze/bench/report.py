"""Run reports, heatmap export and report files"""

import json
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np
from pydantic import BaseModel
from tabulate import tabulate

from ..errors import ConsistencyError, MetricUndefinedError
from ..maze.core import Maze
from ..proposer.llm import TranscriptEntry
from .campaign import MazeResult, MazeRun
from .metrics import heatmap, optimality_rate, success_rate

logger = logging.getLogger(__name__)

NOT_AVAILABLE = "N/A"

# heatmap image colours
_OBSTACLE = (0, 0, 0)
_UNVISITED = (255, 255, 255)


class SizeSummary(BaseModel):
    size_class: str
    mazes: int
    success_rate: float
    optimality_rate: Optional[float]  # None when nothing succeeded
    mean_steps: float
    mean_episodes: float


class RunReport(BaseModel):
    """Everything needed to recompute the headline numbers offline"""
    method: str
    proposer: str
    config: Dict[str, Any]
    summaries: List[SizeSummary]
    overall: SizeSummary
    mazes: List[MazeResult]
    heatmaps: Dict[str, List[List[int]]] = {}


def _optional_optimality(results: List[MazeResult]) -> Optional[float]:
    oracle = {r.maze_id: r.oracle_length for r in results if r.oracle_length is not None}
    try:
        return optimality_rate([r.evaluation for r in results], oracle)
    except MetricUndefinedError:
        return None


def summarize(size_class: str, results: List[MazeResult]) -> SizeSummary:
    evals = [r.evaluation for r in results]
    return SizeSummary(
        size_class=size_class,
        mazes=len(results),
        success_rate=success_rate(evals),
        optimality_rate=_optional_optimality(results),
        mean_steps=float(np.mean([e.step_count for e in evals])),
        mean_episodes=float(np.mean([len(r.logs) for r in results])),
    )


def build_report(runs: List[MazeRun], config: Dict[str, Any]) -> RunReport:
    """Aggregate per-maze results by size class, in first-seen order"""
    if not runs:
        raise MetricUndefinedError("report of zero mazes")
    results = [run.result for run in runs]
    groups: "OrderedDict[str, List[MazeResult]]" = OrderedDict()
    for r in results:
        groups.setdefault(r.size_class, []).append(r)

    maps = {
        r.maze_id: heatmap(r.logs, r.maze).tolist()
        for r in results
    }
    return RunReport(
        method=config.get("method", {}).get("name", "unknown"),
        proposer=config.get("proposer", {}).get("kind", "unknown"),
        config=config,
        summaries=[summarize(size, group) for size, group in groups.items()],
        overall=summarize("all", results),
        mazes=results,
        heatmaps=maps,
    )


def check_report(report: RunReport) -> None:
    """Recompute every rate from the embedded logs and compare"""
    by_size: Dict[str, List[MazeResult]] = {}
    for r in report.mazes:
        by_size.setdefault(r.size_class, []).append(r)
    for summary in report.summaries + [report.overall]:
        group = report.mazes if summary.size_class == "all" else by_size.get(summary.size_class, [])
        fresh = summarize(summary.size_class, group)
        if fresh.success_rate != summary.success_rate or fresh.optimality_rate != summary.optimality_rate:
            raise ConsistencyError(f"rates for {summary.size_class} do not match the embedded logs")


def _rate(value: Optional[float]) -> str:
    return NOT_AVAILABLE if value is None else f"{value:.2%}"


def render_table(report: RunReport) -> str:
    """Plain-text grid: one row per size class plus the overall row"""
    headers = ["Size", "Mazes", "Success", "Optimality", "Mean steps", "Mean episodes"]
    rows = [
        [s.size_class, s.mazes, _rate(s.success_rate), _rate(s.optimality_rate),
         f"{s.mean_steps:.1f}", f"{s.mean_episodes:.1f}"]
        for s in report.summaries + [report.overall]
    ]
    title = f"method={report.method} proposer={report.proposer}"
    return f"{title}\n{tabulate(rows, headers=headers, tablefmt='grid')}"


def dump_report(report: RunReport) -> str:
    """Sorted, indented JSON"""
    return json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True)


def load_report(path: Union[str, Path]) -> RunReport:
    return RunReport.model_validate_json(Path(path).read_text(encoding="utf-8"))


def heatmap_image(counts: np.ndarray, maze: Maze, scale: int = 16) -> np.ndarray:
    """RGB image: obstacles black, unvisited white, visits shaded red by count"""
    h, w = counts.shape
    image = np.empty((h, w, 3), dtype=np.uint8)
    image[:, :] = _UNVISITED
    peak = int(counts.max()) if counts.size else 0
    if peak > 0:
        # visited cells fade from light pink (1 visit) to full red (peak)
        shade = (200 - np.round(200 * counts / peak)).astype(np.uint8)
        visited = counts > 0
        image[visited, 0] = 255
        image[visited, 1] = shade[visited]
        image[visited, 2] = shade[visited]
    for r, c in maze.obstacles:
        image[r, c] = _OBSTACLE
    return np.kron(image, np.ones((scale, scale, 1), dtype=np.uint8))


def encode_ppm(image: np.ndarray) -> bytes:
    """Binary portable pixmap (P6)"""
    h, w, _ = image.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + image.astype(np.uint8).tobytes()


def write_heatmaps(out_dir: Path, report: RunReport, scale: int = 16) -> None:
    target = out_dir / "heatmaps"
    target.mkdir(parents=True, exist_ok=True)
    mazes = {r.maze_id: r.maze for r in report.mazes}
    for maze_id, matrix in report.heatmaps.items():
        counts = np.asarray(matrix, dtype=np.int64)
        (target / f"{maze_id}.json").write_text(json.dumps(matrix) + "\n", encoding="utf-8")
        (target / f"{maze_id}.ppm").write_bytes(encode_ppm(heatmap_image(counts, mazes[maze_id], scale)))


def write_transcripts(path: Path, transcripts: Iterable[TranscriptEntry]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for entry in transcripts:
            f.write(entry.model_dump_json() + "\n")
            count += 1
    return count


def write_run_artifacts(
    out_dir: Union[str, Path],
    report: RunReport,
    runs: List[MazeRun],
) -> Path:
    """report.json, report.txt, heatmaps/, transcripts.jsonl and qtable.json for single runs"""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(dump_report(report) + "\n", encoding="utf-8")
    (out / "report.txt").write_text(render_table(report) + "\n", encoding="utf-8")
    write_heatmaps(out, report)

    transcripts = [entry for run in runs for entry in run.transcripts]
    if transcripts:
        n = write_transcripts(out / "transcripts.jsonl", transcripts)
        logger.info("wrote %d transcript entries", n)
    if len(runs) == 1 and runs[0].q_table is not None:
        (out / "qtable.json").write_text(runs[0].q_table.to_snapshot() + "\n", encoding="utf-8")
    logger.info("artifacts written to %s", out)
    return out
