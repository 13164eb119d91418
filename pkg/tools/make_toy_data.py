"""Regenerate the bundled toy dataset (two series x three years, five sectors).

Tables are balanced by construction: value added X is drawn positive,
Y = colsum(W) + X and F = Y - rowsum(W), all integers, so the CSV text is exact.
"""

from pathlib import Path

import numpy as np

from iotnet.iot import IOTable, write_iot

SECTORS = ("01", "15", "25", "26", "36")
OUT = Path(__file__).resolve().parents[1] / "src" / "iotnet" / "data" / "toy"

# series A: blocks {01, 15, 25} and {26, 36}, linked weakly
BASE_A = np.array([
    [30, 80, 60, 2, 0],
    [50, 40, 90, 0, 3],
    [20, 70, 10, 4, 1],
    [3, 0, 2, 40, 70],
    [0, 5, 1, 60, 30],
], dtype=float)

# series B: blocks {01, 15} and {25, 26, 36}
BASE_B = np.array([
    [40, 90, 3, 0, 2],
    [80, 30, 5, 4, 0],
    [2, 6, 20, 70, 50],
    [0, 3, 60, 30, 80],
    [4, 0, 70, 50, 20],
], dtype=float)


def make(base: np.ndarray, seed: int, growth: float, year_index: int) -> IOTable:
    rng = np.random.default_rng(seed + year_index)
    noise = rng.integers(0, 15, size=base.shape)
    W = np.where(base > 0, np.round(base * growth ** year_index) + noise, 0.0)
    X = rng.integers(50, 250, size=5).astype(float)
    Y = W.sum(axis=0) + X
    F = Y - W.sum(axis=1)
    export = np.round(np.abs(F) * rng.uniform(0.1, 0.5, size=5))
    return IOTable(SECTORS, W, F, X, Y, {"export": export})


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for series, base, seed, growth in (("A", BASE_A, 11, 1.10), ("B", BASE_B, 23, 1.02)):
        for k, year in enumerate((2000, 2001, 2002)):
            write_iot(make(base, seed, growth, k), OUT / f"{series}_{year}.csv")


if __name__ == "__main__":
    main()
