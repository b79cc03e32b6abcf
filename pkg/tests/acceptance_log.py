"""Verdict lines collected by the acceptance suite and echoed in the terminal summary."""

LINES: list[str] = []


def verdict(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f" ({detail})" if detail else "")
    LINES.append(line)
    print(line)
    assert ok, line


def skipped(number: int, title: str, reason: str) -> None:
    line = f"SKIP  criterion {number}: {title} ({reason})"
    LINES.append(line)
    print(line)
