"""File formats: operator and field CSV, PGM heatmaps, JSON envelopes.

All writers are deterministic: floats are written with ``repr`` precision and
JSON keys are sorted, so equal inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .phase_space import PhaseGrid
from .pom import DiscretePOM

__all__ = [
    "SCHEMA_VERSION",
    "CONVENTIONS",
    "write_operator_csv",
    "read_operator_csv",
    "write_field_csv",
    "read_field_csv",
    "write_pgm",
    "read_pgm",
    "write_json",
    "read_json",
    "write_pom",
    "read_pom",
    "write_counts_csv",
]

SCHEMA_VERSION = "1.0"

CONVENTIONS = {
    "hbar": "1",
    "position": "Q = (a + a^dag)/sqrt(2), Q[n, n+1] = sqrt((n+1)/2)",
    "momentum": "P = i(a^dag - a)/sqrt(2), P[n, n+1] = -i sqrt((n+1)/2), P = -i d/dx",
    "fourier": "F = diag((-i)^n), kernel exp(-ipx)/sqrt(2 pi); P = F* Q F",
    "parity": "Par = diag((-1)^n) = F^2",
    "weyl_operator": "W(q,p) = exp(iqp/2) exp(-iqP) exp(ipQ) = D((q + ip)/sqrt(2)); W* Q W = Q + q",
    "type_a_map": "Gamma^T(f) = 1/(2 pi) int f W T W* dq dp",
    "weyl_map": "Gamma^Par(f) = c int f W Par W* dq dp, c fixed by Gamma^Par(1) = I (c = 1/pi)",
    "position_measure": "E^Q(B)[m, n] = int_B h_m h_n dx (compression of the spectral projection)",
    "block": "operator identities are compared on the lowest dim//4 levels",
    "outer_bin_labels": "outer bins (-inf, e_0) and [e_last, inf) are labeled e_0 - 1 and e_last + 1",
}


def _f(x: float) -> str:
    return repr(float(x))


def write_operator_csv(path, matrix: np.ndarray) -> None:
    """Write every entry as ``row,col,re,im`` (UTF-8, '.' decimal separator)."""
    matrix = np.asarray(matrix, dtype=complex)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("row,col,re,im\n")
        for (i, j), v in np.ndenumerate(matrix):
            fh.write(f"{i},{j},{_f(v.real)},{_f(v.imag)}\n")


def read_operator_csv(path, dim: int | None = None) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no matrix entries")
    idx = np.array([(int(r["row"]), int(r["col"])) for r in rows])
    vals = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
    n = int(idx.max()) + 1 if dim is None else dim
    if idx.min() < 0 or idx.max() >= n:
        raise ValueError(f"{path}: indices outside a {n}x{n} matrix")
    out = np.zeros((n, n), dtype=complex)
    out[idx[:, 0], idx[:, 1]] = vals
    return out


def write_field_csv(path, grid: PhaseGrid, values: np.ndarray) -> None:
    """Write ``q,p,value`` rows, q varying slowest."""
    q, p, _ = grid.nodes()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("q,p,value\n")
        for a, b, v in zip(q, p, np.asarray(values, dtype=float).ravel()):
            fh.write(f"{_f(a)},{_f(b)},{_f(v)}\n")


def read_field_csv(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1], data[:, 2]


def write_pgm(path, values: np.ndarray, lo: float | None = None, hi: float | None = None) -> tuple[float, float]:
    """8-bit binary PGM (P5) heatmap of a field indexed ``values[i_q, i_p]``.

    Image rows run from p_max (top) to p_min, columns from q_min to q_max.
    Pixel value v maps back to ``lo + (hi - lo) * v / 255``; the header
    comment records lo and hi. Returns ``(lo, hi)``.
    """
    values = np.asarray(values, dtype=float)
    lo = float(values.min()) if lo is None else float(lo)
    hi = float(values.max()) if hi is None else float(hi)
    span = hi - lo if hi > lo else 1.0
    img = np.rint(np.clip((values - lo) / span, 0.0, 1.0) * 255).astype(np.uint8)
    img = img.T[::-1]
    header = (
        f"P5\n# value = lo + (hi - lo) * pixel / 255 with lo={_f(lo)} hi={_f(hi)}\n"
        f"# rows: p from max to min; columns: q from min to max\n"
        f"{img.shape[1]} {img.shape[0]}\n255\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())
    return lo, hi


def read_pgm(path) -> np.ndarray:
    """Pixel array (rows, cols) of a P5 file written by :func:`write_pgm`."""
    raw = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        end = raw.index(b"\n", pos)
        line = raw[pos:end].decode("ascii")
        pos = end + 1
        if not line.startswith("#"):
            tokens.extend(line.split())
    if tokens[0] != "P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h = int(tokens[1]), int(tokens[2])
    return np.frombuffer(raw[pos:pos + w * h], dtype=np.uint8).reshape(h, w)


def write_json(path, obj: dict) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2, allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_pom(directory, stem: str, pom: DiscretePOM) -> Path:
    """Write ``<stem>.json`` listing ``{label, matrix_ref}`` plus one operator CSV per effect."""
    directory = Path(directory)
    outcomes = []
    for i, (lab, eff) in enumerate(pom.outcomes):
        ref = f"{stem}_effect{i}.csv"
        write_operator_csv(directory / ref, eff)
        outcomes.append({"label": lab, "matrix_ref": ref})
    path = directory / f"{stem}.json"
    write_json(path, {"schema_version": SCHEMA_VERSION, "outcomes": outcomes, "metadata": pom.metadata})
    return path


def read_pom(path, tol: float = 1e-8) -> DiscretePOM:
    path = Path(path)
    doc = read_json(path)
    outcomes = [(o["label"], read_operator_csv(path.parent / o["matrix_ref"])) for o in doc["outcomes"]]
    return DiscretePOM.from_outcomes(outcomes, tol, doc.get("metadata"))


def write_counts_csv(path, counts: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("label,count\n")
        for lab, c in counts.items():
            fh.write(f"{_f(lab)},{int(c)}\n")
