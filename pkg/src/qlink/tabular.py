"""CSV ingestion and log-log interpolation shared by the spectral datasets."""

from __future__ import annotations

import bisect
import csv
import math
from importlib import resources
from pathlib import Path


class DataError(ValueError):
    """A dataset file is missing, malformed or violates its invariants."""


class RangeError(DataError):
    """A query falls outside the sampled range of a curve."""


BUILTIN_PREFIX = "builtin:"


def resolve_data_path(ref: str | Path, kind: str, base: Path | None = None, suffix: str = ".csv") -> Path:
    """Map ``builtin:<name>`` to a bundled file; resolve others against ``base``."""
    ref = str(ref)
    if ref.startswith(BUILTIN_PREFIX):
        name = ref[len(BUILTIN_PREFIX):]
        path = Path(str(resources.files("qlink") / "data" / f"{kind}_{name}{suffix}"))
        if not path.is_file():
            raise DataError(f"no bundled {kind} dataset named {name!r}")
        return path
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    return path


def read_two_column_csv(path: str | Path, header: tuple[str, str]) -> list[tuple[int, float, float]]:
    """Read a two-column numeric CSV with a fixed header and ``#`` comments.

    Returns ``(line_number, a, b)`` triples so callers can report the
    offending line when their own invariants fail.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc

    rows = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if not seen_header:
            if tuple(fields) != header:
                raise DataError(f"{path}:{lineno}: expected header {','.join(header)!r}, got {line!r}")
            seen_header = True
            continue
        if len(fields) != 2:
            raise DataError(f"{path}:{lineno}: expected 2 columns, got {len(fields)}")
        try:
            a, b = float(fields[0]), float(fields[1])
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric value in {line!r}") from None
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DataError(f"{path}:{lineno}: non-finite value in {line!r}")
        rows.append((lineno, a, b))
    if not seen_header:
        raise DataError(f"{path}: empty file (missing header)")
    return rows


def read_spectrum(path: str | Path, header: tuple[str, str]) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Load a sampled spectrum: positive, strictly increasing wavelengths and non-negative values."""
    rows = read_two_column_csv(path, header)
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 samples, got {len(rows)}")
    prev = 0.0
    for lineno, x, y in rows:
        if x <= prev:
            what = "wavelength must be positive" if x <= 0 else "wavelengths not strictly increasing"
            raise DataError(f"{path}:{lineno}: {what}")
        if y < 0:
            raise DataError(f"{path}:{lineno}: negative value {y!r}")
        prev = x
    return tuple(r[1] for r in rows), tuple(r[2] for r in rows)


def loglog_interp(xs: tuple[float, ...], ys: tuple[float, ...], x: float) -> float:
    """Log-log interpolation, falling back to linear on segments touching zero."""
    if not xs[0] <= x <= xs[-1]:
        raise RangeError(f"wavelength {x!r} m outside sampled range [{xs[0]!r}, {xs[-1]!r}] m")
    i = bisect.bisect_left(xs, x)
    if xs[i] == x:
        return ys[i]
    x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
    if y0 > 0 and y1 > 0:
        t = math.log(x / x0) / math.log(x1 / x0)
        return math.exp(math.log(y0) + t * math.log(y1 / y0))
    t = (x - x0) / (x1 - x0)
    return y0 + t * (y1 - y0)
