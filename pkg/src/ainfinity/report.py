"""Check results, defect records and the optional process pool."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graded import Grading, TensorWord, Vector


@dataclass(frozen=True)
class Defect:
    location: str
    word: tuple[str, ...]
    value: Vector
    entries: TensorWord | None = None

    def key(self):
        return (self.location, self.word)


@dataclass
class CheckResult:
    passed: bool
    bound: int
    defects: list[Defect] = field(default_factory=list)
    kind: str = ""

    def __bool__(self):
        return self.passed

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def workers() -> int:
    try:
        return max(1, int(os.environ.get("AINF_WORKERS", "1")))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence) -> list:
    """``map`` that fans out over processes when ``AINF_WORKERS > 1``."""
    n = workers()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))


def chunked(seq: Sequence, size: int) -> list[list]:
    return [list(seq[i:i + size]) for i in range(0, len(seq), size)]


def format_word(names: Sequence[str], mark: int | None = None) -> str:
    parts = [f"[{n}]" if i == mark else n for i, n in enumerate(names)]
    return "(" + ",".join(parts) + ")"


def format_vector(vec: Vector, grading: Grading) -> str:
    if not vec:
        return "0"
    terms = []
    for w, c in sorted(vec.items(), key=lambda t: (t[0].entries, t[0].mark is None)):
        body = ",".join(grading.names(w))
        terms.append(f"{c}*{body}")
    return " + ".join(terms).replace("+ -", "- ")


def vector_json(vec: Vector, grading: Grading) -> list[dict]:
    out = []
    for w, c in sorted(vec.items(), key=lambda t: t[0].entries):
        out.append({"c": str(c), "b": ",".join(grading.names(w))})
    return out


def result_json(result: CheckResult, grading: Grading) -> dict:
    return {
        "status": result.status,
        "kind": result.kind,
        "bound": result.bound,
        "defects": [
            {"location": d.location, "word": list(d.word), "value": vector_json(d.value, grading)}
            for d in sorted(result.defects, key=Defect.key)
        ],
    }


def result_text(result: CheckResult, grading: Grading) -> str:
    lines = [f"{result.kind} check, bound {result.bound}: {result.status}"]
    for d in sorted(result.defects, key=Defect.key):
        lines.append(f"  {d.location} {format_word(d.word)}: {format_vector(d.value, grading)}")
    return "\n".join(lines) + "\n"
