"""Output formatters for the relmaze CLI"""

import json
from typing import Any, Dict, List

import click
import yaml
from tabulate import tabulate

from ..bench.report import RunReport, render_table
from ..bench.suite import SuiteEntry
from ..maze.text import emit_ascii_grid
from .utils import format_rate


class OutputFormatter:
    """Render CLI results as table, json or yaml"""

    @staticmethod
    def _dump(data: Any, format_type: str) -> str:
        if format_type == "json":
            return json.dumps(data, indent=2, default=str)
        return yaml.dump(data, default_flow_style=False, sort_keys=False)

    @staticmethod
    def format_report(report: RunReport, format_type: str = "table") -> str:
        if format_type in ("json", "yaml"):
            data = report.model_dump(mode="json", exclude={"mazes", "heatmaps"})
            return OutputFormatter._dump(data, format_type)
        return OutputFormatter._format_report_table(report)

    @staticmethod
    def _format_report_table(report: RunReport) -> str:
        table = render_table(report)
        failed = [r.maze_id for r in report.mazes if not r.evaluation.reached_goal]
        summary = [
            f"Mazes: {report.overall.mazes}",
            f"Success rate: {format_rate(report.overall.success_rate)}",
            f"Optimality rate: {format_rate(report.overall.optimality_rate)}",
        ]
        if failed:
            shown = ", ".join(failed[:5])
            more = f" and {len(failed) - 5} more" if len(failed) > 5 else ""
            summary.append(f"Failed: {shown}{more}")
        return f"{table}\n\n📊 Summary:\n" + "\n".join(f"  {s}" for s in summary)

    @staticmethod
    def format_suite(entries: List[SuiteEntry], format_type: str = "table") -> str:
        counts: Dict[str, Dict[str, Any]] = {}
        for e in entries:
            row = counts.setdefault(e.size_class, {"size": e.size_class, "mazes": 0, "obstacles": 0})
            row["mazes"] += 1
            row["obstacles"] += len(e.maze.obstacles)
        rows = list(counts.values())
        if format_type in ("json", "yaml"):
            return OutputFormatter._dump(rows, format_type)
        if not rows:
            return "Empty suite."
        table = [
            [r["size"], r["mazes"], f"{r['obstacles'] / r['mazes']:.1f}"]
            for r in rows
        ]
        return tabulate(table, headers=["Size", "Mazes", "Mean obstacles"], tablefmt="grid")

    @staticmethod
    def format_heatmap(report: RunReport, maze_id: str, format_type: str = "table") -> str:
        matrix = report.heatmaps[maze_id]
        if format_type in ("json", "yaml"):
            return OutputFormatter._dump({"maze_id": maze_id, "counts": matrix}, format_type)
        result = next(r for r in report.mazes if r.maze_id == maze_id)
        status = (
            click.style("🟢 SOLVED", fg="green")
            if result.evaluation.reached_goal
            else click.style("❌ FAILED", fg="red")
        )
        lines = [
            f"Maze: {maze_id} {status}",
            emit_ascii_grid(result.maze),
            "",
            tabulate(matrix, tablefmt="grid"),
        ]
        return "\n".join(lines)
