"""Published reference values bundled with the package."""

from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources


def _rows(name: str) -> list[dict[str, str]]:
    text = resources.files(__package__).joinpath("data", name).read_text(encoding="ascii")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


@lru_cache(maxsize=None)
def table1() -> dict[int, dict[int, int]]:
    """{n: {k: v(n,k)}} for n = 10^6, 2^28, 2^36."""
    out: dict[int, dict[int, int]] = {}
    for row in _rows("table1.csv"):
        out.setdefault(int(row["n"]), {})[int(row["k"])] = int(row["v"])
    return out


@lru_cache(maxsize=None)
def eigentable() -> dict[int, tuple[str, str]]:
    """{n: (max_abs, max_re)} as the published decimal strings."""
    return {int(row["n"]): (row["max_abs"], row["max_re"]) for row in _rows("eigentable.csv")}
