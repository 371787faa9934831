"""Problem instances: the immutable grid world, its JSON file format, and a
seeded synthetic generator."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy import ndimage

from .errors import InstanceFormatError, ValidationError

URBAN = 1
AGRICULTURAL = 2
# category code of the virtual cell outside the grid
OUTSIDE = 0


class CellIndex(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True, eq=False)
class Instance:
    """A land-use allocation problem on an ``rows x cols`` grid.

    ``categories`` holds codes 1 (urban), 2 (agricultural) and 3..K (fixed
    uses). ``soil`` is the potential productivity loss of converting each cell
    and is zero outside agricultural cells. ``budget`` is the number of
    agricultural cells to convert.
    """

    categories: np.ndarray
    soil: np.ndarray
    budget: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cats = np.array(self.categories, dtype=np.int64, copy=True)
        soil = np.array(self.soil, dtype=np.float64, copy=True)
        if cats.ndim != 2 or soil.shape != cats.shape:
            raise ValidationError(
                f"grids must be rectangular and equal-shaped, got categories "
                f"{cats.shape} and soil {soil.shape}"
            )
        if cats.size == 0:
            raise ValidationError("grid must have at least one cell")
        if cats.min() < 1:
            raise ValidationError("category codes must be >= 1")
        if not np.all(np.isfinite(soil)) or soil.min() < 0:
            raise ValidationError("soil values must be finite and non-negative")
        budget = int(self.budget)
        if budget != self.budget or budget < 1:
            raise ValidationError(f"budget must be a positive integer, got {self.budget!r}")
        # productivity loss only exists on convertible cells
        soil[cats != AGRICULTURAL] = 0.0
        n_agri = int(np.count_nonzero(cats == AGRICULTURAL))
        if n_agri < budget:
            raise ValidationError(
                f"budget T={budget} exceeds the {n_agri} agricultural cells available"
            )
        if soil.sum() <= 0:
            raise ValidationError("soil_total A must be positive")
        cats.setflags(write=False)
        soil.setflags(write=False)
        object.__setattr__(self, "categories", cats)
        object.__setattr__(self, "soil", soil)
        object.__setattr__(self, "budget", budget)

    @property
    def rows(self) -> int:
        return self.categories.shape[0]

    @property
    def cols(self) -> int:
        return self.categories.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.categories.shape

    @property
    def n_categories(self) -> int:
        return int(self.categories.max())

    @cached_property
    def initial_urban(self) -> int:
        return int(np.count_nonzero(self.categories == URBAN))

    @property
    def urban_target(self) -> int:
        return self.initial_urban + self.budget

    @cached_property
    def soil_total(self) -> float:
        return float(self.soil.sum())

    @cached_property
    def agri_cells(self) -> np.ndarray:
        """Flat (row-major) cell index of each genotype position."""
        cells = np.flatnonzero(self.categories == AGRICULTURAL)
        cells.setflags(write=False)
        return cells

    @property
    def n_vars(self) -> int:
        return len(self.agri_cells)

    @cached_property
    def cell_position(self) -> np.ndarray:
        """Genotype position of each flat cell, -1 for non-agricultural cells."""
        pos = np.full(self.categories.size, -1, dtype=np.int64)
        pos[self.agri_cells] = np.arange(self.n_vars)
        pos.setflags(write=False)
        return pos

    @cached_property
    def agri_soil(self) -> np.ndarray:
        s = self.soil.ravel()[self.agri_cells]
        s.setflags(write=False)
        return s

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """``(R*C, 4)`` flat indices of von Neumann neighbours.

        Missing neighbours point at the sentinel index ``R*C``; flat maps are
        padded with one trailing :data:`OUTSIDE` cell so that lookups through
        this table never need masking.
        """
        rows, cols = self.shape
        r, c = np.divmod(np.arange(rows * cols), cols)
        sentinel = rows * cols
        table = np.full((rows * cols, 4), sentinel, dtype=np.int64)
        for k, (dr, dc) in enumerate(((-1, 0), (1, 0), (0, -1), (0, 1))):
            rr, cc = r + dr, c + dc
            ok = (rr >= 0) & (rr < rows) & (cc >= 0) & (cc < cols)
            table[ok, k] = rr[ok] * cols + cc[ok]
        table.setflags(write=False)
        return table

    @cached_property
    def position_neighbors(self) -> np.ndarray:
        """``(n, 4)`` genotype positions of each position's neighbours, -1 for
        non-agricultural or off-grid neighbours."""
        padded = np.append(self.cell_position, -1)
        nb = padded[self.neighbor_table[self.agri_cells]]
        nb.setflags(write=False)
        return nb

    @cached_property
    def padded_base(self) -> np.ndarray:
        """Flat initial map with the trailing OUTSIDE sentinel."""
        base = np.append(self.categories.ravel(), OUTSIDE)
        base.setflags(write=False)
        return base

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "categories": [int(v) for v in self.categories.ravel()],
            "soil": [float(v) for v in self.soil.ravel()],
            "budget": self.budget,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @cached_property
    def digest(self) -> str:
        """sha256 of the canonical JSON document; identifies the instance in run records."""
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    def validate(self) -> "Instance":
        """Re-run construction checks; returns an equal, independently built instance."""
        return Instance(self.categories, self.soil, self.budget, name=self.name)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.budget == other.budget
            and np.array_equal(self.categories, other.categories)
            and np.array_equal(self.soil, other.soil)
        )

    __hash__ = None


def instance_from_dict(doc: dict, name: str = "") -> Instance:
    for key in ("rows", "cols", "categories", "soil", "budget"):
        if key not in doc:
            raise InstanceFormatError(f"missing field '{key}'")
    rows, cols = doc["rows"], doc["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InstanceFormatError("fields 'rows' and 'cols' must be positive integers")
    for key in ("categories", "soil"):
        if not isinstance(doc[key], list) or len(doc[key]) != rows * cols:
            raise InstanceFormatError(
                f"field '{key}' must be a list of length rows*cols={rows * cols}"
            )
    try:
        cats = np.asarray(doc["categories"], dtype=np.float64)
        soil = np.asarray(doc["soil"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"non-numeric grid entry: {exc}") from None
    if not np.all(cats == np.round(cats)):
        raise InstanceFormatError("field 'categories' must contain integers")
    if not isinstance(doc["budget"], int):
        raise InstanceFormatError("field 'budget' must be an integer")
    return Instance(
        cats.astype(np.int64).reshape(rows, cols),
        soil.reshape(rows, cols),
        doc["budget"],
        name=name,
    )


def load_instance(path) -> Instance:
    """Read and validate an instance JSON file.

    Raises:
        InstanceFormatError: the file is not valid JSON or a field is malformed
            (the message names the line or the field).
        ValidationError: the grid violates an instance invariant.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{path}: top-level value must be an object")
    return instance_from_dict(doc, name=path.stem)


def save_instance(inst: Instance, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(inst.to_dict(), indent=None) + "\n", encoding="utf-8")
    return path


def neighbors(idx: CellIndex | tuple[int, int], inst: Instance) -> list[CellIndex]:
    """In-bounds von Neumann neighbours of ``idx`` (up, down, left, right)."""
    r, c = idx
    if not (0 <= r < inst.rows and 0 <= c < inst.cols):
        raise ValidationError(f"cell {tuple(idx)} is outside the {inst.rows}x{inst.cols} grid")
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        rr, cc = r + dr, c + dc
        if 0 <= rr < inst.rows and 0 <= cc < inst.cols:
            out.append(CellIndex(rr, cc))
    return out


@dataclass(frozen=True)
class GeneratorParams:
    budget_fraction: float = 0.1
    n_categories: int = 5
    urban_seeds: int = 3
    urban_fraction: float = 0.06
    fixed_patches: bool = True
    n_fixed_patches: int = 4
    soil_smoothing: float = 3.0

    def check(self) -> None:
        if not 0 < self.budget_fraction < 1:
            raise ValidationError("budget_fraction must lie in (0, 1)")
        if self.n_categories < 2:
            raise ValidationError("n_categories must be >= 2")
        if self.urban_seeds < 0 or self.n_fixed_patches < 0:
            raise ValidationError("seed and patch counts must be non-negative")
        if not 0 <= self.urban_fraction < 0.5:
            raise ValidationError("urban_fraction must lie in [0, 0.5)")
        if self.soil_smoothing < 0:
            raise ValidationError("soil_smoothing must be non-negative")


def _grow_blob(cats, rng, start, size, code, allowed):
    rows, cols = cats.shape
    blob = {start}
    frontier = [start]
    cats[start] = code
    while len(blob) < size and frontier:
        r, c = frontier[rng.integers(len(frontier))]
        options = [
            (r + dr, c + dc)
            for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1))
            if 0 <= r + dr < rows and 0 <= c + dc < cols and cats[r + dr, c + dc] == allowed
        ]
        if not options:
            frontier.remove((r, c))
            continue
        cell = options[rng.integers(len(options))]
        cats[cell] = code
        blob.add(cell)
        frontier.append(cell)


def generate_instance(
    seed: int, rows: int, cols: int, params: GeneratorParams | None = None
) -> Instance:
    """Build a synthetic instance; a pure function of its arguments.

    Urban areas start as a few contiguous blobs, fixed land uses are
    rectangular patches, and soil is Gaussian-smoothed white noise rescaled to
    [0, 1] so that good and bad soil form spatial clusters.
    """
    params = params or GeneratorParams()
    params.check()
    if rows < 4 or cols < 4:
        raise ValidationError("generated grids need rows, cols >= 4")
    rng = np.random.default_rng(seed)
    cats = np.full((rows, cols), AGRICULTURAL, dtype=np.int64)

    if params.fixed_patches and params.n_categories >= 3:
        max_h, max_w = max(1, rows // 6), max(1, cols // 6)
        for _ in range(params.n_fixed_patches):
            h = int(rng.integers(1, max_h + 1))
            w = int(rng.integers(1, max_w + 1))
            r0 = int(rng.integers(0, rows - h + 1))
            c0 = int(rng.integers(0, cols - w + 1))
            code = int(rng.integers(3, params.n_categories + 1))
            cats[r0:r0 + h, c0:c0 + w] = code

    total_urban = int(round(params.urban_fraction * rows * cols))
    if params.urban_seeds and total_urban:
        per_seed = max(1, total_urban // params.urban_seeds)
        for _ in range(params.urban_seeds):
            free = np.argwhere(cats == AGRICULTURAL)
            if len(free) == 0:
                break
            start = tuple(int(v) for v in free[rng.integers(len(free))])
            _grow_blob(cats, rng, start, per_seed, URBAN, AGRICULTURAL)

    field_ = rng.random((rows, cols))
    if params.soil_smoothing > 0:
        field_ = ndimage.gaussian_filter(field_, params.soil_smoothing, mode="reflect")
    lo, hi = field_.min(), field_.max()
    soil = (field_ - lo) / (hi - lo) if hi > lo else np.ones_like(field_)

    n_agri = int(np.count_nonzero(cats == AGRICULTURAL))
    if n_agri == 0:
        raise ValidationError("generator produced no agricultural cells; lower urban/patch settings")
    budget = min(n_agri, max(1, int(round(params.budget_fraction * n_agri))))
    return Instance(cats, soil, budget, name=f"synthetic-s{seed}-{rows}x{cols}")
