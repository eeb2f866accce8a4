"""Finite universes of valuation-carrying points and exact set algebra.

A Universe fixes an ordered atom list and an ordered list of points;
each point assigns every atom.  Duplicate assignments and partial
coverage of the truth table are both allowed (arbitrary state spaces
need them); ``canonical_universe`` builds the special exhaustive,
duplicate-free carrier used to decide tautology and equivalence.

A PointSet is an integer bitmask over a fixed universe, so all set
operations are exact.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .formulas import ATOM_NAME, Atom, Formula, Not, UnknownAtomError


class UniverseMismatchError(ValueError):
    """Two values built over different universes were combined."""


class SizeLimitError(ValueError):
    """An enumeration was requested beyond its configured size limit."""


@dataclass(frozen=True)
class Point:
    """A state: an id plus one truth value per universe atom."""

    id: str
    values: tuple[bool, ...]


@dataclass(frozen=True)
class Universe:
    atoms: tuple[str, ...]
    points: tuple[Point, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("a universe needs at least one atom")
        seen_atoms = set()
        for atom in self.atoms:
            if not ATOM_NAME.fullmatch(atom):
                raise ValueError(f"invalid atom name {atom!r}")
            if atom in seen_atoms:
                raise ValueError(f"duplicate atom {atom!r}")
            seen_atoms.add(atom)
        if not self.points:
            raise ValueError("a universe needs at least one point")
        seen_ids = set()
        for point in self.points:
            if not point.id:
                raise ValueError("point ids must be nonempty")
            if point.id in seen_ids:
                raise ValueError(f"duplicate point id {point.id!r}")
            seen_ids.add(point.id)
            if len(point.values) != len(self.atoms):
                raise ValueError(
                    f"point {point.id!r} assigns {len(point.values)} atoms, "
                    f"expected {len(self.atoms)}"
                )

    @classmethod
    def from_assignments(
        cls,
        atoms: Sequence[str],
        assignments: Iterable[tuple[str, Mapping[str, bool]]],
    ) -> "Universe":
        atoms = tuple(atoms)
        points = []
        for point_id, assignment in assignments:
            extra = set(assignment) - set(atoms)
            if extra:
                raise ValueError(
                    f"point {point_id!r} assigns undeclared atoms {sorted(extra)}"
                )
            points.append(Point(point_id, tuple(bool(assignment.get(a, False)) for a in atoms)))
        return cls(atoms, tuple(points))

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    def index_of(self, point_id: str) -> int:
        for i, point in enumerate(self.points):
            if point.id == point_id:
                return i
        raise KeyError(point_id)

    def assignment(self, index: int) -> dict[str, bool]:
        return dict(zip(self.atoms, self.points[index].values))

    def valuation_index(self, index: int) -> int:
        """Row number of the point's assignment in binary-counting order
        (first atom most significant)."""
        value = 0
        for bit in self.points[index].values:
            value = (value << 1) | int(bit)
        return value

    def is_exhaustive(self) -> bool:
        """True when the points enumerate every assignment exactly once."""
        rows = [self.valuation_index(i) for i in range(self.size)]
        return self.size == 2 ** len(self.atoms) and len(set(rows)) == self.size


def canonical_universe(atoms: Sequence[str], limit: int = 4) -> Universe:
    """The 2^n points of all truth assignments over ``atoms``.

    Ids are "w0".."w{2^n-1}" in binary-counting order of the atom list
    (first atom most significant): for atoms (p,) the point w0 makes p
    false and w1 makes p true.
    """
    atoms = tuple(atoms)
    if not 1 <= len(atoms) <= limit:
        raise SizeLimitError(
            f"canonical universe supports 1..{limit} atoms, got {len(atoms)}"
        )
    points = tuple(
        Point(f"w{i}", values)
        for i, values in enumerate(itertools.product((False, True), repeat=len(atoms)))
    )
    return Universe(atoms, points)


@dataclass(frozen=True)
class PointSet:
    """An exact subset of a universe's points, stored as a bitmask.

    Bit i corresponds to ``universe.points[i]``.
    """

    universe: Universe
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.universe.full_mask:
            raise ValueError(f"mask {self.mask:#x} out of range for universe")

    @classmethod
    def empty(cls, universe: Universe) -> "PointSet":
        return cls(universe, 0)

    @classmethod
    def full(cls, universe: Universe) -> "PointSet":
        return cls(universe, universe.full_mask)

    @classmethod
    def of_ids(cls, universe: Universe, ids: Iterable[str]) -> "PointSet":
        mask = 0
        for point_id in ids:
            mask |= 1 << universe.index_of(point_id)
        return cls(universe, mask)

    def _check(self, other: "PointSet") -> None:
        if self.universe != other.universe:
            raise UniverseMismatchError("point sets belong to different universes")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.universe, self.mask | other.mask)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.universe, self.mask & other.mask)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.universe, self.mask & ~other.mask)

    def complement(self) -> "PointSet":
        return PointSet(self.universe, self.universe.full_mask & ~self.mask)

    def __le__(self, other: "PointSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return self.mask.bit_count()

    def indices(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(self.universe.points[i].id for i in self.indices())

    def render(self) -> str:
        return "{" + ", ".join(self.ids) + "}"


def _atom_mask(universe: Universe, name: str) -> int:
    try:
        column = universe.atoms.index(name)
    except ValueError:
        raise UnknownAtomError(name) from None
    mask = 0
    for i, point in enumerate(universe.points):
        if point.values[column]:
            mask |= 1 << i
    return mask


def truth_set(formula: Formula, universe: Universe) -> PointSet:
    """Exactly the points of ``universe`` satisfying ``formula``."""
    full = universe.full_mask

    def walk(node: Formula) -> int:
        if isinstance(node, Atom):
            return _atom_mask(universe, node.name)
        if isinstance(node, Not):
            return full & ~walk(node.operand)
        return walk(node.left) | walk(node.right)

    return PointSet(universe, walk(formula))


class Classification(enum.Enum):
    TAUTOLOGY = "tautology"
    CONTRADICTION = "contradiction"
    CONTINGENT = "contingent"


def _decision_universe(universe: Universe) -> Universe:
    # Tautology is a property of the atom set, not of whichever points a
    # universe happens to list, so decide it on the exhaustive carrier.
    if universe.is_exhaustive():
        return universe
    return canonical_universe(universe.atoms, limit=len(universe.atoms))


def classify(formula: Formula, universe: Universe) -> Classification:
    carrier = _decision_universe(universe)
    hits = truth_set(formula, carrier)
    if hits.mask == carrier.full_mask:
        return Classification.TAUTOLOGY
    if hits.mask == 0:
        return Classification.CONTRADICTION
    return Classification.CONTINGENT


def are_equivalent(left: Formula, right: Formula, universe: Universe) -> bool:
    carrier = _decision_universe(universe)
    return truth_set(left, carrier) == truth_set(right, carrier)


def dnf_of(points: PointSet) -> str | None:
    """A representative formula for ``points``, by greedy cube cover.

    Returns None when no formula has exactly this truth set (possible
    when the universe carries duplicate assignments and the set splits
    a duplicate class).  The result parses back to the same point set.
    """
    universe = points.universe
    atoms = universe.atoms
    first = atoms[0]
    if points.mask == 0:
        return f"{first} & ~{first}"
    if points.mask == universe.full_mask:
        return f"{first} | ~{first}"

    cubes = []  # (trits, mask): trit per atom in {None, False, True}
    for trits in itertools.product((None, False, True), repeat=len(atoms)):
        mask = 0
        for i, point in enumerate(universe.points):
            if all(t is None or point.values[j] == t for j, t in enumerate(trits)):
                mask |= 1 << i
        if mask and mask & ~points.mask == 0:
            cubes.append((trits, mask))

    covered = 0
    chosen: list[tuple[bool | None, ...]] = []
    while covered != points.mask:
        best = None
        for trits, mask in cubes:
            gain = (mask & ~covered).bit_count()
            fixed = sum(t is not None for t in trits)
            encoded = tuple(0 if t is None else 1 + int(t) for t in trits)
            key = (-gain, fixed, encoded)
            if gain > 0 and (best is None or key < best[0]):
                best = (key, trits, mask)
        if best is None:
            return None
        _, trits, mask = best
        chosen.append(trits)
        covered |= mask

    def literal(j: int, value: bool) -> str:
        return atoms[j] if value else f"~{atoms[j]}"

    parts = [
        " & ".join(literal(j, t) for j, t in enumerate(trits) if t is not None)
        for trits in chosen
    ]
    return " | ".join(parts)
