"""Text formats: ``wfa v1`` model files and sample files.

Model file::

    wfa v1
    alphabet a b
    dim 2
    initial 1 0
    final 0.5 0.2
    matrix a
    0.25 0
    0 0.4
    matrix b
    ...

``#`` starts a comment. Sample files hold one string per line with
space-separated symbols; an empty line is the empty string.
"""
from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from .wfa import LinearRepresentation, validate


class ModelFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


class DivergenceWarning(UserWarning):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def render_model(rep: LinearRepresentation) -> str:
    lines = ["wfa v1", "alphabet " + " ".join(rep.alphabet), f"dim {rep.dim}",
             "initial " + " ".join(map(_fmt, rep.initial)), "final " + " ".join(map(_fmt, rep.final))]
    for x in rep.alphabet:
        lines.append(f"matrix {x}")
        lines.extend(" ".join(map(_fmt, row)) for row in rep.transitions[x])
    return "\n".join(lines) + "\n"


def write_model(path, rep: LinearRepresentation):
    Path(path).write_text(render_model(rep))


def _floats(path, lineno, fields, d):
    if len(fields) != d:
        raise ModelFormatError(path, lineno, f"expected {d} numbers, got {len(fields)}")
    try:
        return [float(f) for f in fields]
    except ValueError as exc:
        raise ModelFormatError(path, lineno, str(exc)) from None


def parse_model_text(text: str, path="<string>") -> LinearRepresentation:
    lines = [(i, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, f) for i, f in lines if f]
    pos = 0

    def take(keyword):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ModelFormatError(path, last + 1, f"unexpected end of file, expected '{keyword}'")
        lineno, fields = lines[pos]
        if keyword is not None and fields[0] != keyword:
            raise ModelFormatError(path, lineno, f"expected '{keyword}', got '{fields[0]}'")
        pos += 1
        return lineno, fields

    lineno, fields = take("wfa")
    if fields[1:] != ["v1"]:
        raise ModelFormatError(path, lineno, "unsupported header, expected 'wfa v1'")
    lineno, fields = take("alphabet")
    alphabet = fields[1:]
    if not alphabet or len(set(alphabet)) != len(alphabet):
        raise ModelFormatError(path, lineno, "alphabet must be nonempty and duplicate-free")
    lineno, fields = take("dim")
    try:
        d = int(fields[1])
    except (IndexError, ValueError):
        raise ModelFormatError(path, lineno, "dim needs a positive integer") from None
    if d < 1 or len(fields) != 2:
        raise ModelFormatError(path, lineno, "dim needs a positive integer")
    lineno, fields = take("initial")
    initial = _floats(path, lineno, fields[1:], d)
    lineno, fields = take("final")
    final = _floats(path, lineno, fields[1:], d)
    transitions = {}
    while pos < len(lines):
        lineno, fields = take("matrix")
        if len(fields) != 2 or fields[1] not in alphabet:
            raise ModelFormatError(path, lineno, f"'matrix' must name one alphabet symbol")
        if fields[1] in transitions:
            raise ModelFormatError(path, lineno, f"duplicate matrix for {fields[1]!r}")
        rows = []
        for _ in range(d):
            if pos >= len(lines) or lines[pos][1][0] == "matrix":
                nxt = lines[pos][0] if pos < len(lines) else lines[-1][0] + 1
                raise ModelFormatError(path, nxt, f"matrix {fields[1]!r} has fewer than {d} rows")
            row_lineno, row = take(None)
            rows.append(_floats(path, row_lineno, row, d))
        transitions[fields[1]] = np.array(rows)
    missing = [x for x in alphabet if x not in transitions]
    if missing:
        raise ModelFormatError(path, lines[-1][0], f"missing matrices for {missing}")
    return LinearRepresentation(alphabet, initial, transitions, final)


def parse_model(path) -> LinearRepresentation:
    """Read and validate a model file; non-convergence is reported as a warning."""
    rep = parse_model_text(Path(path).read_text(), path)
    report = validate(rep)
    if not report.convergent:
        warnings.warn(f"{path}: {'; '.join(report.problems)}", DivergenceWarning, stacklevel=2)
    return rep


def write_sample(path, strings, model_id: str = "model", seed: int = 0):
    strings = list(strings)
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# sample model={model_id} seed={seed} n={len(strings)}\n")
        for w in strings:
            fh.write(" ".join(w) + "\n")


def read_sample(path) -> list:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                continue
            out.append(tuple(line.split()))
    return out
