"""Reading and writing job-shop instance files.

Two standard text encodings are supported:

* ORLib ("standard"): first non-comment line is ``n m``, then n lines, one
  per job, of space-separated ``machine duration`` pairs with 0-based
  machine ids. Jobs may have fewer than m operations (ragged instances).
* Taillard: a line ``n m``, then an n x m matrix of durations, then an
  n x m matrix of 1-based machine ids.

Machine ids are always 0-based in memory regardless of the source encoding.
Auto-detection tries ORLib first and falls back to Taillard when the first
block does not interleave valid machine ids. Lines starting with ``#`` and
blank lines are ignored.
"""

from __future__ import annotations

from pathlib import Path

from .instance import Instance, make_instance


class ParseError(ValueError):
    """Malformed instance file; the message names the offending line."""


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for ln, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((ln, stripped.split()))
    return out


def _ints(ln: int, toks: list[str]) -> list[int]:
    vals = []
    for tok in toks:
        try:
            vals.append(int(tok))
        except ValueError:
            raise ParseError(f"line {ln}: non-integer token {tok!r}") from None
    return vals


def _parse_orlib(n: int, m: int, rows: list[tuple[int, list[str]]]):
    if len(rows) < n:
        raise ParseError(f"line {rows[-1][0] if rows else 1}: expected {n} job lines, got {len(rows)}")
    if len(rows) > n:
        raise ParseError(f"line {rows[n][0]}: trailing data after {n} job lines")
    machines, durations = [], []
    for ln, toks in rows:
        vals = _ints(ln, toks)
        if len(vals) % 2 != 0:
            raise ParseError(f"line {ln}: odd number of values, expected machine/duration pairs")
        ms, ds = vals[0::2], vals[1::2]
        for v in ms:
            if v < 0 or v >= m:
                raise ParseError(f"line {ln}: machine id {v} out of range [0, {m})")
        for v in ds:
            if v < 0:
                raise ParseError(f"line {ln}: negative duration {v}")
        machines.append(ms)
        durations.append(ds)
    return machines, durations


def _parse_taillard(n: int, m: int, rows: list[tuple[int, list[str]]]):
    vals: list[tuple[int, int]] = []
    for ln, toks in rows:
        vals.extend((v, ln) for v in _ints(ln, toks))
    if len(vals) != 2 * n * m:
        last_ln = rows[-1][0] if rows else 1
        raise ParseError(
            f"line {last_ln}: expected {2 * n * m} values for a {n}x{m} Taillard instance, "
            f"got {len(vals)}")
    durations, machines = [], []
    for j in range(n):
        ds, ms = [], []
        for k in range(m):
            dur, ln_d = vals[j * m + k]
            mach, ln_m = vals[n * m + j * m + k]
            if dur < 0:
                raise ParseError(f"line {ln_d}: negative duration {dur}")
            if mach < 1 or mach > m:
                raise ParseError(f"line {ln_m}: machine id {mach} out of range [1, {m}]")
            ds.append(dur)
            ms.append(mach - 1)
        durations.append(ds)
        machines.append(ms)
    return machines, durations


def parse_instance(data: bytes | str, fmt: str = "auto", name: str = "") -> Instance:
    """Parse one instance from text in ORLib, Taillard, or auto-detected format."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if fmt not in ("orlib", "taillard", "auto"):
        raise ValueError(f"unknown format {fmt!r}")
    lines = _content_lines(data)
    if not lines:
        raise ParseError("line 1: empty file")
    header_ln, header = lines[0]
    vals = _ints(header_ln, header)
    if len(vals) < 2:
        raise ParseError(f"line {header_ln}: header must be 'n m'")
    n, m = vals[0], vals[1]
    if n < 1 or m < 1:
        raise ParseError(f"line {header_ln}: invalid header n={n} m={m}")
    rows = lines[1:]
    if fmt == "orlib":
        machines, durations = _parse_orlib(n, m, rows)
    elif fmt == "taillard":
        machines, durations = _parse_taillard(n, m, rows)
    else:
        try:
            machines, durations = _parse_orlib(n, m, rows)
        except ParseError:
            machines, durations = _parse_taillard(n, m, rows)
    return make_instance(machines, durations, name=name)


def serialize_instance(inst: Instance, fmt: str = "orlib") -> str:
    """Render an instance as ORLib or Taillard text.

    The Taillard encoding requires every job to have exactly m operations;
    ragged instances can only be written as ORLib.
    """
    n, m = inst.shape
    if fmt == "orlib":
        lines = [f"{n} {m}"]
        for j in range(n):
            sl = inst.job_slice(j)
            lines.append(" ".join(
                f"{mach} {dur}" for mach, dur in zip(inst.machine[sl], inst.duration[sl])))
        return "\n".join(lines) + "\n"
    if fmt == "taillard":
        if not (inst.job_len == m).all():
            raise ValueError("Taillard format requires m operations per job")
        lines = [f"{n} {m}"]
        for j in range(n):
            sl = inst.job_slice(j)
            lines.append(" ".join(str(d) for d in inst.duration[sl]))
        for j in range(n):
            sl = inst.job_slice(j)
            lines.append(" ".join(str(mach + 1) for mach in inst.machine[sl]))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def load_instance(path: str | Path, fmt: str = "auto") -> Instance:
    p = Path(path)
    return parse_instance(p.read_text(encoding="utf-8"), fmt=fmt, name=p.stem)


def load_suite(directory: str | Path, fmt: str = "auto") -> list[Instance]:
    """Load every instance file in a directory, sorted by name."""
    d = Path(directory)
    out = []
    for p in sorted(d.iterdir()):
        if p.is_file() and not p.name.startswith(".") and p.suffix != ".csv":
            out.append(load_instance(p, fmt=fmt))
    return out
