"""SQLite persistence for benchmark results, grouped queries, CSV export.

One ``results`` table, indexed on (prompt_hash, timestamp). The store
assigns the canonical integer id at save time; whatever provisional id the
engine stamped on a result is replaced by the stored one on load. Floats go
in as SQLite REAL (an IEEE double), so every numeric field round-trips
bit-exact. Timestamps are UTC ISO-8601 with milliseconds, which makes
lexicographic comparison chronological.

A connection is opened per operation: cheap at this scale, and it keeps the
store safe to read from the HTTP service's threads while the benchmark
engine writes.
"""

from __future__ import annotations

import csv
import sqlite3
from dataclasses import dataclass
from pathlib import Path

from .bench import BenchmarkResult
from .errors import StorageError
from .quality import QualityScore, Subscores
from .quant import QuantLabel

CSV_COLUMNS = (
    "id",
    "timestamp",
    "platform",
    "endpoint_url",
    "model",
    "quantization_raw",
    "quantization_family",
    "prompt_hash",
    "prompt_text",
    "tokens",
    "tokens_estimated",
    "duration_s",
    "duration_total_s",
    "tokens_per_s",
    "energy_wh",
    "wh_per_token",
    "quality_score",
    "quality_method",
    "judge_model",
    "response_text",
)

_SCHEMA = """
CREATE TABLE IF NOT EXISTS results (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    timestamp TEXT NOT NULL,
    platform TEXT NOT NULL,
    endpoint_url TEXT NOT NULL,
    model TEXT NOT NULL,
    quantization_raw TEXT NOT NULL,
    quantization_family TEXT NOT NULL,
    prompt_hash TEXT NOT NULL,
    prompt_text TEXT NOT NULL,
    tokens INTEGER NOT NULL,
    tokens_estimated INTEGER NOT NULL,
    duration_s REAL NOT NULL,
    duration_total_s REAL NOT NULL,
    tokens_per_s REAL NOT NULL,
    energy_wh REAL NOT NULL,
    wh_per_token REAL NOT NULL,
    quality_score INTEGER NOT NULL,
    quality_method TEXT NOT NULL,
    judge_model TEXT,
    sub_completeness INTEGER,
    sub_diversity INTEGER,
    sub_length INTEGER,
    sub_structure INTEGER,
    response_text TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_results_prompt ON results (prompt_hash, timestamp);
"""


@dataclass(frozen=True)
class BenchmarkGroup:
    """All stored results sharing one normalized prompt, oldest first."""

    prompt_hash: str
    prompt_text: str
    results: tuple[BenchmarkResult, ...]

    def __post_init__(self) -> None:
        if not self.results:
            raise ValueError("a benchmark group cannot be empty")
        if any(r.prompt_hash != self.prompt_hash for r in self.results):
            raise ValueError("group members must share the prompt hash")


def _row_to_result(row: sqlite3.Row) -> BenchmarkResult:
    subs = None
    if row["sub_completeness"] is not None:
        subs = Subscores(
            completeness=row["sub_completeness"],
            diversity=row["sub_diversity"],
            length=row["sub_length"],
            structure=row["sub_structure"],
        )
    quality = QualityScore(
        value=row["quality_score"],
        method=row["quality_method"],
        judge_model=row["judge_model"],
        subscores=subs,
    )
    return BenchmarkResult(
        id=str(row["id"]),
        timestamp=row["timestamp"],
        platform=row["platform"],
        endpoint_url=row["endpoint_url"],
        model=row["model"],
        quantization=QuantLabel(raw=row["quantization_raw"], family=row["quantization_family"]),
        prompt_hash=row["prompt_hash"],
        prompt_text=row["prompt_text"],
        response_text=row["response_text"],
        tokens=row["tokens"],
        tokens_estimated=bool(row["tokens_estimated"]),
        duration_s=row["duration_s"],
        duration_total_s=row["duration_total_s"],
        tokens_per_s=row["tokens_per_s"],
        energy_wh=row["energy_wh"],
        wh_per_token=row["wh_per_token"],
        quality=quality,
    )


def result_to_csv_row(result: BenchmarkResult) -> list:
    """The 20 export fields, in CSV column order."""
    return [
        result.id,
        result.timestamp,
        result.platform,
        result.endpoint_url,
        result.model,
        result.quantization.raw,
        result.quantization.family,
        result.prompt_hash,
        result.prompt_text,
        result.tokens,
        "true" if result.tokens_estimated else "false",
        result.duration_s,
        result.duration_total_s,
        result.tokens_per_s,
        result.energy_wh,
        result.wh_per_token,
        result.quality.value,
        result.quality.method,
        result.quality.judge_model or "",
        result.response_text,
    ]


class ResultStore:
    """Single-file result database; safe for one writer and many readers."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            if self.path.parent and not self.path.parent.exists():
                self.path.parent.mkdir(parents=True, exist_ok=True)
            with self._connect() as conn:
                conn.executescript(_SCHEMA)
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"cannot open result store: {exc}", path=str(self.path)) from exc

    def _connect(self) -> sqlite3.Connection:
        conn = sqlite3.connect(self.path)
        conn.row_factory = sqlite3.Row
        return conn

    def save_result(self, result: BenchmarkResult) -> int:
        """Insert one result; returns the store-assigned id. Durable on return."""
        subs = result.quality.subscores
        try:
            with self._connect() as conn:
                cur = conn.execute(
                    """
                    INSERT INTO results (
                        timestamp, platform, endpoint_url, model,
                        quantization_raw, quantization_family,
                        prompt_hash, prompt_text, tokens, tokens_estimated,
                        duration_s, duration_total_s, tokens_per_s,
                        energy_wh, wh_per_token,
                        quality_score, quality_method, judge_model,
                        sub_completeness, sub_diversity, sub_length, sub_structure,
                        response_text
                    ) VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?,?)
                    """,
                    (
                        result.timestamp,
                        result.platform,
                        result.endpoint_url,
                        result.model,
                        result.quantization.raw,
                        result.quantization.family,
                        result.prompt_hash,
                        result.prompt_text,
                        result.tokens,
                        1 if result.tokens_estimated else 0,
                        result.duration_s,
                        result.duration_total_s,
                        result.tokens_per_s,
                        result.energy_wh,
                        result.wh_per_token,
                        result.quality.value,
                        result.quality.method,
                        result.quality.judge_model,
                        subs.completeness if subs else None,
                        subs.diversity if subs else None,
                        subs.length if subs else None,
                        subs.structure if subs else None,
                        result.response_text,
                    ),
                )
                return int(cur.lastrowid)
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"save failed: {exc}", path=str(self.path)) from exc

    def save_all(self, results: list[BenchmarkResult]) -> list[int]:
        return [self.save_result(r) for r in results]

    def get_result(self, result_id: int) -> BenchmarkResult:
        try:
            with self._connect() as conn:
                row = conn.execute(
                    "SELECT * FROM results WHERE id = ?", (result_id,)
                ).fetchone()
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"read failed: {exc}", path=str(self.path)) from exc
        if row is None:
            raise StorageError(f"no stored result with id {result_id}", path=str(self.path))
        return _row_to_result(row)

    def _where(self, model=None, platform=None, since=None, until=None):
        clauses, params = [], []
        if model is not None:
            clauses.append("model = ?")
            params.append(model)
        if platform is not None:
            clauses.append("platform = ?")
            params.append(platform)
        if since is not None:
            clauses.append("timestamp >= ?")
            params.append(since)
        if until is not None:
            clauses.append("timestamp <= ?")
            params.append(until)
        return (" WHERE " + " AND ".join(clauses) if clauses else ""), params

    def list_results(
        self, model=None, platform=None, since=None, until=None
    ) -> list[BenchmarkResult]:
        where, params = self._where(model, platform, since, until)
        try:
            with self._connect() as conn:
                rows = conn.execute(
                    f"SELECT * FROM results{where} ORDER BY timestamp ASC, id ASC",
                    params,
                ).fetchall()
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"read failed: {exc}", path=str(self.path)) from exc
        return [_row_to_result(r) for r in rows]

    def list_grouped(
        self, model=None, platform=None, since=None, until=None
    ) -> list[BenchmarkGroup]:
        """Groups by prompt_hash, most recently active first; members oldest first."""
        results = self.list_results(model, platform, since, until)
        by_hash: dict[str, list[BenchmarkResult]] = {}
        for result in results:
            by_hash.setdefault(result.prompt_hash, []).append(result)
        groups = [
            BenchmarkGroup(
                prompt_hash=h, prompt_text=members[0].prompt_text, results=tuple(members)
            )
            for h, members in by_hash.items()
        ]
        groups.sort(key=lambda g: max(r.timestamp for r in g.results), reverse=True)
        return groups

    def export_csv(self, destination: str | Path) -> int:
        """Write header plus one RFC-4180 row per stored result; returns row count."""
        results = self.list_results()
        try:
            with open(destination, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f)
                writer.writerow(CSV_COLUMNS)
                for result in results:
                    writer.writerow(result_to_csv_row(result))
        except OSError as exc:
            raise StorageError(f"export failed: {exc}", path=str(destination)) from exc
        return len(results)

    def clean(self, scope: str) -> int:
        """Delete rows by scope: "all", "model:<name>", or "before:<timestamp>"."""
        if scope == "all":
            where, params = "", []
        elif scope.startswith("model:"):
            where, params = " WHERE model = ?", [scope[len("model:"):]]
        elif scope.startswith("before:"):
            where, params = " WHERE timestamp < ?", [scope[len("before:"):]]
        else:
            raise ValueError(f"unknown clean scope: {scope!r}")
        try:
            with self._connect() as conn:
                cur = conn.execute(f"DELETE FROM results{where}", params)
                return cur.rowcount
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"clean failed: {exc}", path=str(self.path)) from exc

    def count(self) -> int:
        try:
            with self._connect() as conn:
                return conn.execute("SELECT COUNT(*) FROM results").fetchone()[0]
        except (sqlite3.Error, OSError) as exc:
            raise StorageError(f"read failed: {exc}", path=str(self.path)) from exc


_CSV_PARSERS = {
    "id": int,
    "tokens": int,
    "tokens_estimated": lambda v: v == "true",
    "duration_s": float,
    "duration_total_s": float,
    "tokens_per_s": float,
    "energy_wh": float,
    "wh_per_token": float,
    "quality_score": int,
}


def load_csv(path: str | Path) -> list[dict]:
    """Parse an export back into typed records (one dict per row, CSV field names)."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise StorageError(f"unexpected CSV header in {path}", path=str(path))
        return [
            {key: _CSV_PARSERS.get(key, str)(value) for key, value in row.items()}
            for row in reader
        ]
