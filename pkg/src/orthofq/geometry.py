"""Vectors and point sets in F_q^d.

A vector is stored as a tuple of element encodings. Its canonical integer
encoding is ``venc = sum(enc(x_i) * q**i)``, so coordinate 0 is the least
significant digit.
"""

from __future__ import annotations

import io
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .ffield import FieldElement, FieldSpec, field_for_order


@dataclass(frozen=True)
class FVector:
    field: FieldSpec
    coords: tuple[int, ...]

    @classmethod
    def of(cls, field: FieldSpec, values: Iterable) -> FVector:
        """Build from FieldElements, ints (taken as encodings) or (a, b) pairs."""
        coords = []
        for v in values:
            if isinstance(v, FieldElement):
                if v.field != field:
                    raise ValueError("coordinate from a different field")
                coords.append(v.enc)
            elif isinstance(v, tuple):
                coords.append(field(*v).enc)
            else:
                if not 0 <= v < field.q:
                    raise ValueError(f"encoding {v} out of range for {field}")
                coords.append(v)
        return cls(field, tuple(coords))

    @classmethod
    def from_venc(cls, field: FieldSpec, d: int, venc: int) -> FVector:
        q = field.q
        coords = []
        for _ in range(d):
            venc, c = divmod(venc, q)
            coords.append(c)
        if venc:
            raise ValueError("vector encoding out of range")
        return cls(field, tuple(coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def venc(self) -> int:
        q = self.field.q
        out = 0
        for c in reversed(self.coords):
            out = out * q + c
        return out

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(self.field.from_enc(c) for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def scale(self, s: int | FieldElement) -> FVector:
        s = s.enc if isinstance(s, FieldElement) else s
        f = self.field
        return FVector(f, tuple(f.mul_enc(s, c) for c in self.coords))

    def __add__(self, other: FVector) -> FVector:
        _check_compatible(self, other)
        f = self.field
        return FVector(f, tuple(f.add_enc(x, y) for x, y in zip(self.coords, other.coords)))

    def __str__(self):
        return "(" + ", ".join(str(e) for e in self.elements) + ")"


def _check_compatible(u: FVector, v: FVector) -> None:
    if u.field != v.field:
        raise ValueError(f"vectors over different fields: {u.field} and {v.field}")
    if len(u.coords) != len(v.coords):
        raise ValueError(f"dimension mismatch: {len(u.coords)} vs {len(v.coords)}")


def dot_enc(f: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    acc = 0
    for x, y in zip(u, v):
        acc = f.add_enc(acc, f.mul_enc(x, y))
    return acc


def dot(u: FVector, v: FVector) -> FieldElement:
    """Standard bilinear form sum(u_i * v_i)."""
    _check_compatible(u, v)
    return u.field.from_enc(dot_enc(u.field, u.coords, v.coords))


class PointSet:
    """A finite subset of F_q^d, kept sorted by vector encoding."""

    def __init__(self, field: FieldSpec, d: int, points: Iterable[FVector | int] = ()):
        if d < 1:
            raise ValueError(f"dimension must be positive, got {d}")
        self.field = field
        self.d = d
        size = field.q**d
        vencs = set()
        for pt in points:
            if isinstance(pt, FVector):
                if pt.field != field or pt.d != d:
                    raise ValueError(f"point {pt} is not in {field}^{d}")
                vencs.add(pt.venc)
            else:
                if not 0 <= pt < size:
                    raise ValueError(f"vector encoding {pt} out of range")
                vencs.add(int(pt))
        self.vencs: tuple[int, ...] = tuple(sorted(vencs))
        self._members = frozenset(self.vencs)

    @classmethod
    def full_space(cls, field: FieldSpec, d: int, include_zero: bool = True) -> PointSet:
        start = 0 if include_zero else 1
        return cls(field, d, range(start, field.q**d))

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self):
        return len(self.vencs)

    def __iter__(self) -> Iterator[FVector]:
        f, d = self.field, self.d
        return (FVector.from_venc(f, d, v) for v in self.vencs)

    def __contains__(self, x) -> bool:
        if isinstance(x, FVector):
            return x.field == self.field and x.d == self.d and x.venc in self._members
        return x in self._members

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.field, self.d, self.vencs) == (other.field, other.d, other.vencs)

    def __hash__(self):
        return hash((self.field, self.d, self.vencs))

    def __repr__(self):
        return f"PointSet({self.field}, d={self.d}, size={len(self)})"

    def contains_zero(self) -> bool:
        return 0 in self._members

    def issubset(self, other: PointSet) -> bool:
        return self._members <= other._members

    def without_zero(self) -> PointSet:
        return PointSet(self.field, self.d, (v for v in self.vencs if v))

    @cached_property
    def coords(self) -> np.ndarray:
        """(n, d) integer array of coordinate encodings."""
        return venc_to_coords(self.field, self.d, np.asarray(self.vencs, dtype=np.int64))

    def vectors(self) -> list[FVector]:
        return list(self)


def venc_to_coords(field: FieldSpec, d: int, vencs: np.ndarray) -> np.ndarray:
    q = field.q
    out = np.empty((len(vencs), d), dtype=np.int64)
    rest = vencs.astype(np.int64).copy()
    for i in range(d):
        out[:, i] = rest % q
        rest //= q
    return out


def all_coords(field: FieldSpec, d: int) -> np.ndarray:
    """Coordinates of every vector of F_q^d, row index equal to venc."""
    return venc_to_coords(field, d, np.arange(field.q**d, dtype=np.int64))


def dot_matrix(field: FieldSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Encodings of all dot products X[i] . Y[j] for encoded coordinate arrays.

    With x = a + b t and t^2 = r, the dot product splits into the parts
    A.C + r B.D and A.D + B.C, each reduced mod p.
    """
    p = field.p
    X = np.asarray(X, dtype=np.int64).reshape(len(X), -1)
    Y = np.asarray(Y, dtype=np.int64).reshape(len(Y), -1)
    Xa, Ya = X % p, Y % p
    if field.e == 1:
        return (Xa @ Ya.T) % p
    Xb, Yb = X // p, Y // p
    re = (Xa @ Ya.T + field.residue * (Xb @ Yb.T)) % p
    im = (Xa @ Yb.T + Xb @ Ya.T) % p
    return re + im * p


def orthogonality_matrix(field: FieldSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Boolean matrix Z[i, j] = (X[i] . Y[j] == 0)."""
    return dot_matrix(field, X, Y) == 0


def hyperplane_members(tup: Sequence[FVector], field: FieldSpec, d: int) -> PointSet:
    """All y in F_q^d with y . x = 0 for every x in ``tup``, by enumeration."""
    for x in tup:
        if x.field != field or x.d != d:
            raise ValueError(f"tuple vector {x} is not in {field}^{d}")
    universe = all_coords(field, d)
    mask = np.ones(len(universe), dtype=bool)
    if tup:
        X = np.array([x.coords for x in tup], dtype=np.int64)
        mask &= orthogonality_matrix(field, universe, X).all(axis=1)
    return PointSet(field, d, np.flatnonzero(mask).tolist())


@dataclass(frozen=True)
class ProjectiveLine:
    """A line {t v : t in F_q} through the origin, keyed by its smallest nonzero venc."""

    representative: FVector

    @cached_property
    def points(self) -> tuple[FVector, ...]:
        v = self.representative
        return tuple(v.scale(t) for t in range(v.field.q))

    @classmethod
    def through(cls, v: FVector) -> ProjectiveLine:
        if v.is_zero():
            raise ValueError("the zero vector does not span a line")
        rep = min((v.scale(t) for t in range(1, v.field.q)), key=lambda w: w.venc)
        return cls(rep)

    def __contains__(self, x: FVector) -> bool:
        return x in self.points


def direction_key(v: FVector) -> int:
    """Smallest venc among nonzero multiples of v (the canonical line id)."""
    return min(v.scale(t).venc for t in range(1, v.field.q))


def lines_through_origin(field: FieldSpec, d: int = 2) -> list[ProjectiveLine]:
    """The q+1 lines through the origin of F_q^2, sorted by representative."""
    if d != 2:
        raise ValueError("lines_through_origin is defined for d = 2 only")
    seen = set()
    lines = []
    for venc in range(1, field.q**2):
        if venc in seen:
            continue
        line = ProjectiveLine.through(FVector.from_venc(field, 2, venc))
        seen.update(pt.venc for pt in line.points)
        lines.append(line)
    return sorted(lines, key=lambda l: l.representative.venc)


def perp_line(line: ProjectiveLine) -> ProjectiveLine:
    v = line.representative
    if v.d != 2:
        raise ValueError("perp_line requires ambient dimension 2")
    f = v.field
    a, b = v.coords
    return ProjectiveLine.through(FVector(f, (f.neg_enc(b), a)))


def is_isotropic(line: ProjectiveLine) -> bool:
    v = line.representative
    return dot_enc(v.field, v.coords, v.coords) == 0


def subfield_sphere(p: int, field: FieldSpec, m: int) -> PointSet:
    """Solutions of x_1^2 + ... + x_m^2 = 1 over F_p, embedded in F_q^m."""
    if field.p != p:
        raise ValueError(f"field {field} does not have characteristic {p}")
    if m < 1:
        raise ValueError(f"sphere dimension must be positive, got {m}")
    # subfield elements a in F_p have encoding a, so the embedding is the identity on codes
    pts = [
        FVector(field, xs)
        for xs in itertools.product(range(p), repeat=m)
        if sum(x * x for x in xs) % p == 1
    ]
    return PointSet(field, m, pts)


def subfield_circle(p: int, field: FieldSpec) -> PointSet:
    return subfield_sphere(p, field, 2)


def write_point_set(E: PointSet, fh: TextIO) -> None:
    fh.write(f"# q={E.q} d={E.d}\n")
    for v in E:
        fh.write(",".join(str(c) for c in v.coords) + "\n")


def dumps_point_set(E: PointSet) -> str:
    buf = io.StringIO()
    write_point_set(E, buf)
    return buf.getvalue()


def read_point_set(fh: TextIO) -> PointSet:
    header = fh.readline().strip()
    try:
        fields = dict(tok.split("=", 1) for tok in header.lstrip("#").split())
        q, d = int(fields["q"]), int(fields["d"])
    except (ValueError, KeyError):
        raise ValueError(f"bad point-set header {header!r}, expected '# q=<q> d=<d>'")
    field = field_for_order(q)
    pts = []
    for lineno, line in enumerate(fh, start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coords = tuple(int(c) for c in line.split(","))
        if len(coords) != d:
            raise ValueError(f"line {lineno}: expected {d} coordinates, got {len(coords)}")
        pts.append(FVector.of(field, coords))
    return PointSet(field, d, pts)


def loads_point_set(text: str) -> PointSet:
    return read_point_set(io.StringIO(text))
