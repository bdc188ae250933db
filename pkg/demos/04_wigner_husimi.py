"""Wigner and Husimi distributions of a cat-like superposition, written as PGM heatmaps."""
import sys
from pathlib import Path

import numpy as np

from pomquant import FockState, PhaseGrid, husimi, wigner_transform
from pomquant.fileio import write_pgm

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

DIM = 40
state = FockState.from_amplitudes([1, 0, 0, 0, 1], DIM)
grid = PhaseGrid()  # +-8 with 257 midpoints per axis
_, _, w = grid.nodes()

wig = wigner_transform(state, grid)
hus = husimi(state, grid)
print(f"Wigner: min {wig.min():.3f}, integral / pi = {w @ wig.ravel() / np.pi:.8f}")
print(f"Husimi: min {hus.min():.2e}, integral / 2pi = {w @ hus.ravel() / (2 * np.pi):.8f}")
write_pgm(out / "wigner.pgm", wig)
write_pgm(out / "husimi.pgm", hus)
print(f"heatmaps written to {out}/")
