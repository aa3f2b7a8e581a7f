"""Grid terrain model: risk maps, random generation, file IO, downscaling.

Each cell carries a risk score in [0, 1]; the derived safety of a cell is
1 - risk. Generated maps split cells into equal thirds of safe (risk 0),
low-risk (risk in (0, 0.1]) and high-risk (risk 1) cells. The PRNG is
Python's random.Random (Mersenne Twister), so any seed regenerates the
same map on every platform.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, MapFormatError, NoDestinationError

Cell = tuple[int, int]

MAP_MAGIC = "riskmap v1"


class CellClass(enum.Enum):
    SAFE = "safe"
    LOW_RISK = "low_risk"
    HIGH_RISK = "high_risk"
    OTHER = "other"


def classify_risk(risk: float) -> CellClass:
    if risk == 0.0:
        return CellClass.SAFE
    if risk == 1.0:
        return CellClass.HIGH_RISK
    if 0.0 < risk <= 0.1:
        return CellClass.LOW_RISK
    return CellClass.OTHER


@dataclass(frozen=True)
class RiskMap:
    """Immutable rectangular grid of per-cell risk scores.

    risk is a (height, width) float array; cell (x, y) lives at risk[y, x].
    """

    width: int
    height: int
    risk: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DimensionError(f"invalid map dims {self.width}x{self.height}")
        arr = np.asarray(self.risk, dtype=np.float64)
        if arr.shape != (self.height, self.width):
            raise DimensionError(
                f"risk array shape {arr.shape} does not match "
                f"{self.width}x{self.height}"
            )
        if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
            bad = np.argwhere((arr < 0.0) | (arr > 1.0) | ~np.isfinite(arr))[0]
            raise MapFormatError(
                f"risk out of [0, 1] at cell ({bad[1]}, {bad[0]})"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "risk", arr)

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def risk_at(self, cell: Cell) -> float:
        x, y = cell
        return float(self.risk[y, x])

    def safety_at(self, cell: Cell) -> float:
        return 1.0 - self.risk_at(cell)

    def class_at(self, cell: Cell) -> CellClass:
        return classify_risk(self.risk_at(cell))

    def cells(self):
        for y in range(self.height):
            for x in range(self.width):
                yield (x, y)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RiskMap)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.risk, other.risk)
        )


def path_safety(riskmap: RiskMap, path: list[Cell]) -> float:
    """Cumulative safety of a path: product of 1 - risk over every cell
    entered, i.e. all path cells except the start cell."""
    s = 1.0
    for cell in path[1:]:
        s *= riskmap.safety_at(cell)
    return s


def generate_random_map(width: int, height: int, seed: int) -> RiskMap:
    """Random map with floor(n/3) high-risk, floor(n/3) low-risk cells and
    the rest (including the mod-3 remainder) safe.

    Low-risk scores are uniform on (0, 0.1]; cell classes are assigned by a
    seeded uniform random permutation.
    """
    if width < 1 or height < 1 or width * height < 3:
        raise DimensionError(f"map must have >= 3 cells, got {width}x{height}")
    n = width * height
    third = n // 3
    rng = random.Random(seed)
    risks = [0.0] * (n - 2 * third)
    risks += [0.1 * (1.0 - rng.random()) for _ in range(third)]
    risks += [1.0] * third
    rng.shuffle(risks)
    arr = np.array(risks, dtype=np.float64).reshape(height, width)
    return RiskMap(width, height, arr)


def pick_destination(riskmap: RiskMap, seed: int) -> Cell:
    """Uniform draw over cells with risk < 1 (safe or low-risk)."""
    eligible = [c for c in riskmap.cells() if riskmap.risk_at(c) < 1.0]
    if not eligible:
        raise NoDestinationError("every cell is high-risk")
    rng = random.Random(seed)
    return eligible[rng.randrange(len(eligible))]


def downscale(riskmap: RiskMap, factor: int) -> RiskMap:
    """Mean-pool each factor x factor block into one output cell."""
    if factor < 1:
        raise DimensionError(f"factor must be >= 1, got {factor}")
    if riskmap.width % factor or riskmap.height % factor:
        raise DimensionError(
            f"dims {riskmap.width}x{riskmap.height} not divisible by {factor}"
        )
    h, w = riskmap.height // factor, riskmap.width // factor
    pooled = riskmap.risk.reshape(h, factor, w, factor).mean(axis=(1, 3))
    return RiskMap(w, h, pooled)


def save_map(riskmap: RiskMap, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{MAP_MAGIC} {riskmap.width} {riskmap.height}\n")
        for y in range(riskmap.height):
            # repr() of a float is its shortest round-trippable decimal form
            fh.write(" ".join(repr(float(v)) for v in riskmap.risk[y]))
            fh.write("\n")


def load_map(path) -> RiskMap:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or " ".join(header[:2]) != MAP_MAGIC:
            raise MapFormatError(f"bad header in {path}")
        try:
            width, height = int(header[2]), int(header[3])
        except ValueError:
            raise MapFormatError(f"non-integer dims in header of {path}") from None
        if width < 1 or height < 1:
            raise DimensionError(f"invalid dims {width}x{height} in {path}")
        rows = []
        for y in range(height):
            toks = fh.readline().split()
            if len(toks) != width:
                raise MapFormatError(
                    f"row {y}: expected {width} values, got {len(toks)}"
                )
            row = []
            for x, tok in enumerate(toks):
                try:
                    v = float(tok)
                except ValueError:
                    raise MapFormatError(f"unparsable risk at cell ({x}, {y})") from None
                if not math.isfinite(v) or v < 0.0 or v > 1.0:
                    raise MapFormatError(f"risk out of [0, 1] at cell ({x}, {y})")
                row.append(v)
            rows.append(row)
        if fh.readline().strip():
            raise MapFormatError(f"trailing data after {height} rows")
    return RiskMap(width, height, np.array(rows, dtype=np.float64))
