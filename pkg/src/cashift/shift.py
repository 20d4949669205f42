"""Finite-window analysis of a CA shift: languages, Haar cylinder measures, evolution.

Convention: ``(P.x)_k = sum_m c_P(m) x_{k-m}``.  For ``P = X_d - Phi`` the
annihilation condition reads

    x_(s, t-1) = sum_m c_Phi(m) x_(s-m, t),

so a layer determines the layer below it.  Every cell ``(s, t)`` of a window
is therefore a linear functional of the top layer ``t1``, with coefficients
taken from ``Phi^(t1-t)``.  Any assignment on the top layer extends to a
point of the shift (convolution by ``Phi`` is onto, its dual being
multiplication by ``Phi``, which is injective), so the window language is
exactly the image of that linear map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import linalg
from .ca import CAShift
from .errors import BudgetError
from .laurent import Exponent, shape, vadd, vsub

DEFAULT_CELL_BUDGET = 24
DEFAULT_REGION_BUDGET = 1 << 20
DEFAULT_MAX_RADIUS = 12


@dataclass(frozen=True)
class Window:
    """Distinct cells of Z^d in lexicographic order."""

    cells: tuple

    def __post_init__(self):
        cells = [tuple(int(x) for x in c) for c in self.cells]
        if len(set(cells)) != len(cells):
            raise ValueError("window cells must be distinct")
        if cells and len({len(c) for c in cells}) != 1:
            raise ValueError("window cells have mixed dimensions")
        object.__setattr__(self, "cells", tuple(sorted(cells)))

    @classmethod
    def of(cls, cells: Iterable[Exponent]) -> "Window":
        return cls(tuple(set(tuple(c) for c in cells)))

    @cached_property
    def _index(self) -> dict:
        return {c: i for i, c in enumerate(self.cells)}

    def index(self, cell: Exponent) -> int:
        return self._index[tuple(cell)]

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self._index

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def translate(self, v: Exponent) -> "Window":
        return Window(tuple(vadd(c, v) for c in self.cells))


@dataclass(frozen=True)
class Configuration:
    """Values on a window, one residue per cell in window order."""

    window: Window
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.window):
            raise ValueError("configuration length does not match its window")

    @classmethod
    def from_mapping(cls, assignment: Mapping[Exponent, int], p: Optional[int] = None) -> "Configuration":
        assignment = {tuple(c): v for c, v in assignment.items()}
        window = Window.of(assignment)
        values = (assignment[c] for c in window.cells)
        return cls(window, tuple(v % p for v in values) if p else tuple(values))

    def as_dict(self) -> dict:
        return dict(zip(self.window.cells, self.values))

    def __getitem__(self, cell) -> int:
        return self.values[self.window.index(cell)]

    def translate(self, v: Exponent) -> "Configuration":
        return Configuration.from_mapping({vadd(c, v): x for c, x in self.as_dict().items()})

    def restrict(self, cells: Iterable[Exponent]) -> "Configuration":
        table = self.as_dict()
        return Configuration.from_mapping({tuple(c): table[tuple(c)] for c in cells})


@dataclass(frozen=True)
class LanguageSubspace:
    """The configurations on ``window`` occurring in the shift, as an RREF basis.

    Elements are indexed by their basis coordinates ``a`` as
    ``sum_i a_i p^i``; index 0 is the zero configuration.
    """

    p: int
    window: Window
    basis: tuple
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.p**self.rank

    def _vector(self, config) -> list[int]:
        if isinstance(config, Configuration):
            if config.window != self.window:
                raise ValueError("configuration is on a different window")
            return list(config.values)
        if isinstance(config, Mapping):
            return [config[c] for c in self.window.cells]
        return list(config)

    def contains(self, config) -> bool:
        v = self._vector(config)
        return not any(linalg.reduce(v, self.basis, self.pivots, self.p))

    def coordinates(self, config) -> Optional[list[int]]:
        return linalg.coordinates(self._vector(config), self.basis, self.pivots, self.p)

    def index_of(self, config) -> int:
        coords = self.coordinates(config)
        if coords is None:
            raise ValueError("configuration is not in the language")
        return sum(a * self.p**i for i, a in enumerate(coords))

    def digits(self, index: int) -> list[int]:
        out = []
        for _ in range(self.rank):
            index, a = divmod(index, self.p)
            out.append(a)
        return out

    def element(self, index: int) -> tuple:
        v = [0] * len(self.window)
        for a, row in zip(self.digits(index), self.basis):
            if a:
                v = [(x + a * y) % self.p for x, y in zip(v, row)]
        return tuple(v)

    def all_elements(self, budget: int = DEFAULT_REGION_BUDGET) -> np.ndarray:
        """Every element as a row, in index order (shape ``size x |window|``)."""
        if self.size > budget:
            raise BudgetError(f"language has {self.size} elements, budget {budget}")
        coords = coordinate_table(self.p, self.rank)
        if self.rank == 0:
            return np.zeros((1, len(self.window)), dtype=np.int64)
        return coords @ np.array(self.basis, dtype=np.int64) % self.p

    def project(self, cells: Iterable[Exponent]) -> "LanguageSubspace":
        sub = Window.of(cells)
        cols = [self.window.index(c) for c in sub.cells]
        rows = [[row[j] for j in cols] for row in self.basis]
        return _subspace(self.p, sub, rows)

    def same_space(self, other: "LanguageSubspace") -> bool:
        return self.window == other.window and self.basis == other.basis


def coordinate_table(p: int, r: int) -> np.ndarray:
    """All ``p**r`` coordinate vectors, row ``i`` holding the base-p digits of ``i``."""
    idx = np.arange(p**r, dtype=np.int64)
    return np.stack([(idx // p**i) % p for i in range(r)], axis=1) if r else idx[:, None][:, :0]


def _subspace(p: int, window: Window, rows) -> LanguageSubspace:
    basis, pivots = linalg.rref(rows, len(window), p)
    return LanguageSubspace(p, window, tuple(tuple(b) for b in basis), tuple(pivots))


# ------------------------------------------------------------- top-slice cone


@dataclass(frozen=True)
class TopSliceSystem:
    """Each window cell as a functional of the top layer ``t1`` over ``region``.

    ``rows[i]`` maps region indices to coefficients for ``window.cells[i]``.
    """

    p: int
    window: Window
    t1: int
    region: tuple
    rows: tuple

    def matrix(self) -> list[list[int]]:
        out = []
        for row in self.rows:
            dense = [0] * len(self.region)
            for j, c in row.items():
                dense[j] = c
            out.append(dense)
        return out

    def apply(self, y: Sequence[int]) -> tuple:
        return tuple(sum(c * y[j] for j, c in row.items()) % self.p for row in self.rows)


def _as_window(W) -> Window:
    if isinstance(W, Window):
        return W
    return Window.of(W)


def top_slice_system(ca: CAShift, W, region_budget: int = DEFAULT_REGION_BUDGET) -> TopSliceSystem:
    W = _as_window(W)
    if not len(W):
        raise ValueError("empty window")
    t1 = max(c[-1] for c in W)
    rows_by_site = []
    sites: set = set()
    for cell in W:
        s, depth = cell[:-1], t1 - cell[-1]
        power = ca.phi_power(depth)
        row = {}
        for n, c in power.items():
            u = vsub(s, n[:-1])
            row[u] = c
        sites.update(row)
        if len(sites) > region_budget:
            raise BudgetError(f"top-slice region exceeds {region_budget} sites")
        rows_by_site.append(row)
    region = tuple(sorted(sites))
    pos = {u: j for j, u in enumerate(region)}
    rows = tuple({pos[u]: c for u, c in row.items()} for row in rows_by_site)
    return TopSliceSystem(ca.p, W, t1, region, rows)


def language(ca: CAShift, W, cell_budget: int = DEFAULT_CELL_BUDGET,
             region_budget: int = DEFAULT_REGION_BUDGET) -> LanguageSubspace:
    """Window language as the image of the top-slice map (rows = region sites)."""
    W = _as_window(W)
    if len(W) > cell_budget:
        raise BudgetError(f"window has {len(W)} cells, budget {cell_budget}")
    if not len(W):
        return LanguageSubspace(ca.p, W, (), ())
    system = top_slice_system(ca, W, region_budget)
    columns = [[0] * len(W) for _ in system.region]
    for i, row in enumerate(system.rows):
        for j, c in row.items():
            columns[j][i] = c
    return _subspace(ca.p, W, columns)


def language_by_projection(ca: CAShift, W, max_radius: int = DEFAULT_MAX_RADIUS) -> LanguageSubspace:
    """Generic method: kernel of all constraints inside an inflated box, projected to W.

    The box grows one step at a time until two consecutive projections agree.
    Works for any principal annihilator; kept as a cross-check of ``language``.
    """
    W = _as_window(W)
    p, d = ca.p, ca.d
    SP = sorted(shape(ca.P))
    P = ca.P
    lo = [min(c[i] for c in W) for i in range(d)]
    hi = [max(c[i] for c in W) for i in range(d)]
    previous = None
    for r in range(max_radius + 1):
        box = list(itertools.product(*(range(lo[i] - r, hi[i] + r + 1) for i in range(d))))
        pos = {c: j for j, c in enumerate(box)}
        candidates = {vadd(b, m) for b in box for m in SP}
        rows = []
        for k in sorted(candidates):
            cells = [vsub(k, m) for m in SP]
            if all(c in pos for c in cells):
                row = [0] * len(box)
                for m, c in zip(SP, cells):
                    row[pos[c]] = P.coeff(m)
                rows.append(row)
        kernel = linalg.nullspace(rows, len(box), p)
        cols = [pos[c] for c in W.cells]
        current = _subspace(p, W, [[v[j] for j in cols] for v in kernel])
        if previous is not None and current.same_space(previous):
            return current
        previous = current
    raise BudgetError(f"projection did not stabilise within radius {max_radius}")


# ------------------------------------------------------------------- measures


@dataclass(frozen=True)
class MeasureValue:
    """Exact Haar measure: zero, or ``p ** -k``."""

    p: int
    k: Optional[int]

    @classmethod
    def zero(cls, p: int) -> "MeasureValue":
        return cls(p, None)

    @classmethod
    def ppower(cls, p: int, k: int) -> "MeasureValue":
        return cls(p, k)

    @property
    def is_zero(self) -> bool:
        return self.k is None

    def __mul__(self, other: "MeasureValue") -> "MeasureValue":
        if self.is_zero or other.is_zero:
            return MeasureValue.zero(self.p)
        return MeasureValue(self.p, self.k + other.k)

    def fraction(self) -> Fraction:
        return Fraction(0) if self.is_zero else Fraction(1, self.p**self.k)

    def to_json(self) -> dict:
        return {"zero": True} if self.is_zero else {"p_exp": self.k}

    def __str__(self) -> str:
        return "0" if self.is_zero else str(self.fraction())


@dataclass(frozen=True)
class Event:
    """Cylinder ``{x : x|_(window + offset) = config}``."""

    config: Configuration
    offset: Exponent | None = None

    def placed(self) -> dict:
        table = self.config.as_dict()
        if self.offset is None:
            return table
        return {vadd(c, self.offset): v for c, v in table.items()}


def cylinder_measure(ca: CAShift, events: Iterable, cell_budget: int = DEFAULT_CELL_BUDGET) -> MeasureValue:
    """Haar measure of an intersection of cylinder events.

    The marginal on a window is uniform on its language, so the answer is
    ``p^-rank`` when the joint prescription occurs and zero otherwise.
    """
    joint: dict = {}
    for ev in events:
        if isinstance(ev, Configuration):
            ev = Event(ev)
        for c, v in ev.placed().items():
            v %= ca.p
            if joint.setdefault(c, v) != v:
                return MeasureValue.zero(ca.p)
    if not joint:
        return MeasureValue.ppower(ca.p, 0)
    L = language(ca, Window.of(joint), cell_budget)
    if not L.contains(joint):
        return MeasureValue.zero(ca.p)
    return MeasureValue.ppower(ca.p, L.rank)


def sample_point(ca: CAShift, W, seed: int = 0) -> Configuration:
    """Haar-uniform sample of a window: uniform top layer pushed down the cone."""
    W = _as_window(W)
    system = top_slice_system(ca, W)
    rng = np.random.Generator(np.random.Philox(key=seed))
    y = [int(v) for v in rng.integers(0, ca.p, size=len(system.region))]
    return Configuration(W, system.apply(y))


# ------------------------------------------------------------------ evolution


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Layers ``t0, t0-1, ..., t0-steps``; ``None`` marks undetermined cells (cone mode)."""

    p: int
    t0: int
    layers: tuple
    mode: str

    def column_range(self) -> tuple[int, int]:
        sites = [s for layer in self.layers for s in layer]
        if not sites:
            return 0, -1
        return min(s[0] for s in sites), max(s[0] for s in sites)

    def rows(self, lo: Optional[int] = None, hi: Optional[int] = None) -> list[list]:
        """Dense rows for d = 2 (one spatial axis)."""
        if self.layers and any(len(s) != 1 for layer in self.layers for s in layer):
            raise ValueError("dense rows are only defined for one spatial axis")
        clo, chi = self.column_range()
        lo = clo if lo is None else lo
        hi = chi if hi is None else hi
        fill = 0 if self.mode == "zero" else None
        return [[layer.get((s,), fill) for s in range(lo, hi + 1)] for layer in self.layers]


def evolve(ca: CAShift, top: Configuration, steps: int, mode: str = "zero") -> SpaceTimeGrid:
    """Run the automaton downward: ``layer_(t-1)(s) = sum_m c_Phi(m) layer_t(s-m)``.

    ``mode="zero"`` treats cells outside the given row as 0 and keeps the full
    support; ``mode="cone"`` keeps only cells whose whole dependency cone
    lies inside the given row.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if mode not in ("zero", "cone"):
        raise ValueError(f"unknown mode {mode!r}")
    times = {c[-1] for c in top.window}
    if len(times) > 1:
        raise ValueError("top layer must lie in a single time slice")
    t0 = times.pop() if times else 0
    p = ca.p
    terms = [(n[:-1], c) for n, c in ca.phi.items()]
    layer = {c[:-1]: v % p for c, v in top.as_dict().items()}
    if mode == "zero":
        layer = {s: v for s, v in layer.items() if v}
    layers = [layer]
    for _ in range(steps):
        nxt: dict = {}
        if mode == "zero":
            for u, v in layer.items():
                for m, c in terms:
                    s = vadd(u, m)
                    nxt[s] = (nxt.get(s, 0) + c * v) % p
            nxt = {s: v for s, v in nxt.items() if v}
        else:
            candidates = {vadd(u, m) for u in layer for m, _ in terms}
            for s in candidates:
                srcs = [(vsub(s, m), c) for m, c in terms]
                if all(u in layer for u, _ in srcs):
                    nxt[s] = sum(c * layer[u] for u, c in srcs) % p
        layer = nxt
        layers.append(layer)
    return SpaceTimeGrid(p, t0, tuple(layers), mode)


def _glyph(v) -> str:
    if v is None:
        return " "
    if v == 0:
        return "."
    return "0123456789abcdefghijklmnopqrstuvwxyz"[v] if v < 36 else "#"


def render(grid, fmt: str = "text", p: Optional[int] = None) -> bytes:
    """Text ('.' for 0, digits otherwise) or binary PGM (0 -> white, p-1 -> black)."""
    if isinstance(grid, SpaceTimeGrid):
        p = grid.p
        rows = grid.rows()
    else:
        rows = [list(r) for r in grid]
        if p is None:
            raise ValueError("p is required when rendering raw rows")
    if fmt == "text":
        return "\n".join("".join(_glyph(v) for v in row) for row in rows).encode()
    if fmt == "pgm":
        height = len(rows)
        width = len(rows[0]) if rows else 0
        scale = max(p - 1, 1)
        data = bytes(255 if v is None else 255 - (255 * v) // scale for row in rows for v in row)
        return f"P5 {width} {height} 255\n".encode() + data
    raise ValueError(f"unknown render format {fmt!r}")
