"""CSV and JSON serialisation of grid functions, coefficients and reports."""
import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np


def _open(path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("w", newline="")


def write_csv(path, header, rows):
    with _open(path) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def _fmt(x):
    return repr(float(x))


def grid_function_rows(f):
    return [(j, _fmt(x), _fmt(v.real), _fmt(v.imag)) for j, (x, v) in enumerate(zip(f.grid.points, f.values))]


def write_grid_function(path, f):
    return write_csv(path, ["j", "x_j", "re", "im"], grid_function_rows(f))


def read_grid_function(path):
    from .grid import CircleGrid, GridFunction

    _, rows = read_csv(path)
    vals = np.array([complex(float(r[2]), float(r[3])) for r in rows])
    return GridFunction(CircleGrid(len(vals) // 2), vals)


def write_fourier_coeffs(path, c):
    rows = [(m, _fmt(v.real), _fmt(v.imag), _fmt(abs(v))) for m, v in c.items()]
    return write_csv(path, ["m", "re", "im", "abs"], rows)


def read_fourier_coeffs(path):
    from .fourier import FourierCoeffs

    _, rows = read_csv(path)
    vals = np.array([complex(float(r[1]), float(r[2])) for r in rows])
    return FourierCoeffs(len(vals) // 2, vals)


def write_snapshots(path, grid, times, rows):
    """Snapshot CSV with columns ``t, j, x_j, re, im``."""
    out = []
    for t, row in zip(times, rows):
        for j, (x, v) in enumerate(zip(grid.points, row)):
            out.append((_fmt(t), j, _fmt(x), _fmt(v.real), _fmt(v.imag)))
    return write_csv(path, ["t", "j", "x_j", "re", "im"], out)


def process_to_json(E):
    """``{eta, nu, rows: [{t_index, cells: [{k, value_num, value_den}]}]}``."""
    return {
        "eta": E.eta,
        "nu": E.nu,
        "rows": [
            {
                "t_index": t,
                "cells": [
                    {"k": k, "value_num": v.numerator, "value_den": v.denominator}
                    for k, v in enumerate(E.row(t))
                ],
            }
            for t in range(E.nu + 1)
        ],
    }


def process_from_json(data):
    from .martingale import ExtendedProcess

    rows = tuple(
        tuple(Fraction(c["value_num"], c["value_den"]) for c in row["cells"])
        for row in sorted(data["rows"], key=lambda r: r["t_index"])
    )
    return ExtendedProcess(data["eta"], data["nu"], rows)


def write_association(path, A):
    return write_csv(path, ["level", "k", "kind", "state"], A.records())


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def write_json(path, obj):
    with _open(path) as fh:
        fh.write(dumps(obj))
    return str(path)
