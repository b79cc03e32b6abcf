"""Plain-text emission of reports, tables, curves and the run ledger."""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path
from typing import Iterable, Sequence

LEDGER_COLUMNS = ("plan_hash", "seed", "command", "dataset", "train", "model",
                  "accuracy", "precision_weighted", "recall_weighted", "f_weighted", "auc", "extra")


def fmt(value) -> str:
    """Lossless text for machine-readable files."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "NA"
    return str(value)


def parse_value(text: str):
    if text == "NA":
        return None
    if text in ("true", "false"):
        return text == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def write_record(record: dict, path) -> None:
    lines = [f"{k}={fmt(v)}" for k, v in record.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_record(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, value = line.split("=", 1)
            out[key] = parse_value(value)
    return out


def write_table(rows: Sequence[dict], path, columns: Sequence[str] | None = None) -> None:
    columns = list(columns or (rows[0].keys() if rows else []))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])


def read_table(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [{k: parse_value(v) for k, v in row.items()}
                for row in csv.DictReader(fh, delimiter="\t")]


def render_table(rows: Sequence[dict], columns: Sequence[str], digits: int = 3) -> str:
    """Fixed-width human table with floats rounded to ``digits`` decimals."""
    def cell(v):
        if isinstance(v, float):
            return f"{v:.{digits}f}"
        return "-" if v is None else str(v)

    body = [[cell(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) if body else len(c)
              for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def write_curve(points: Iterable[tuple[float, float]], path, names=("fpr", "tpr")) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(names)
        for a, b in points:
            w.writerow([repr(float(a)), repr(float(b))])


def plan_hash(*parts) -> str:
    text = "\x1f".join(fmt(p) for p in parts)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def upsert_ledger(path, row: dict) -> None:
    """Insert or replace the ledger row keyed by (plan_hash, seed); rows stay sorted by key."""
    path = Path(path)
    rows = []
    if path.exists():
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh, delimiter="\t"))
    new = {c: fmt(row.get(c)) for c in LEDGER_COLUMNS}
    key = (new["plan_hash"], new["seed"])
    rows = [r for r in rows if (r["plan_hash"], r["seed"]) != key]
    rows.append(new)
    rows.sort(key=lambda r: (r["plan_hash"], r["seed"]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(LEDGER_COLUMNS)
        for r in rows:
            w.writerow([r[c] for c in LEDGER_COLUMNS])
