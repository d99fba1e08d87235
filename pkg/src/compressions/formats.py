"""Plain-text spectrum files and CSV matrix files."""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .metrics import format_float
from .operators import HermitianMatrix, Spectrum

ASYMMETRY_TOL = 1e-6


def read_spectrum(path) -> Spectrum:
    """One finite decimal per line; blank lines ignored, order irrelevant."""
    vals = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                x = float(text)
            except ValueError:
                raise InputError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not np.isfinite(x):
                raise InputError(f"{path}:{lineno}: non-finite value {text!r}")
            vals.append(x)
    if not vals:
        raise InputError(f"{path}: no eigenvalues")
    return Spectrum(vals)


def write_spectrum(s: Spectrum, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(format_float(x) + "\n" for x in s.values)


def read_matrix_csv(path) -> HermitianMatrix:
    """Real ``n x n`` CSV; rejects matrices that are far from symmetric."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                rows.append([float(v) for v in text.split(",")])
            except ValueError:
                raise InputError(f"{path}:{lineno}: malformed row {text!r}") from None
            if len(rows[-1]) != len(rows[0]):
                raise InputError(f"{path}:{lineno}: expected {len(rows[0])} entries, got {len(rows[-1])}")
    a = np.array(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        raise InputError(f"{path}: matrix is not square (shape {a.shape})")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{path}: non-finite entries")
    scale = np.max(np.abs(a))
    dev = np.max(np.abs(a - a.T))
    if dev > ASYMMETRY_TOL * scale:
        raise InputError(f"{path}: matrix is not symmetric (max |a_ij - a_ji| = {dev:g})")
    return HermitianMatrix(a)


def write_matrix_csv(m: HermitianMatrix, path) -> None:
    if m.field != "real":
        raise InputError("the CSV matrix format holds real matrices only")
    with open(path, "w", encoding="ascii") as fh:
        for row in m.data:
            fh.write(",".join(format_float(x) for x in row) + "\n")
