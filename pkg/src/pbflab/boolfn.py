"""Partial Boolean functions on the hypercube and their building blocks.

Conventions, fixed project-wide and used everywhere (including file I/O):

* A point of ``{0,1}**n`` is an integer ``x`` in ``[0, 2**n)`` whose bit ``i``
  (least significant bit = i=0) holds the variable ``x_{i+1}``.
* The +-1 encoding maps bit value 0 to +1 and bit value 1 to -1
  (the usual Fourier-analysis convention).
* A truth table is a ``bytes`` object of length ``2**n`` over
  ``{ZERO, ONE, UNDEF}``, indexed by the point integer.
* A block is an integer bit mask over the coordinates; flipping a block is
  XOR with its mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

ZERO = 0
ONE = 1
UNDEF = 2

#: Largest arity accepted for explicit truth tables.
MAX_ARITY = 24

_VALUE_CHARS = {ZERO: "0", ONE: "1", UNDEF: "*"}
_CHAR_VALUES = {"0": ZERO, "1": ONE, "*": UNDEF}


def _check_arity(n: int) -> None:
    if not 1 <= n <= MAX_ARITY:
        raise ValueError(f"arity must be in [1, {MAX_ARITY}], got {n}")


def weight(x: int) -> int:
    """Hamming weight of a point (number of 1-bits)."""
    return x.bit_count()


def flip(x: int, block: int) -> int:
    """Flip the coordinates of ``block`` in ``x``; an involution."""
    return x ^ block


def to_pm(x: int, n: int) -> tuple[int, ...]:
    """+-1 vector of a point under the 0 -> +1, 1 -> -1 convention."""
    return tuple(1 - 2 * ((x >> i) & 1) for i in range(n))


def point_from_bits(bits: str) -> int:
    """Point integer from a bitstring whose first character is x_1."""
    x = 0
    for i, ch in enumerate(bits):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid bit character {ch!r}")
    return x


def point_to_bits(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


class PartialFunction:
    """A function ``{0,1}**n -> {ZERO, ONE, UNDEF}`` stored as a truth table.

    Immutable; instances can be shared freely between workers.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: bytes):
        _check_arity(n)
        if len(table) != 1 << n:
            raise ValueError(f"table must have length 2**{n}, got {len(table)}")
        if any(v not in (ZERO, ONE, UNDEF) for v in table):
            raise ValueError("table entries must be ZERO, ONE or UNDEF")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", bytes(table))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("PartialFunction is immutable")

    @classmethod
    def from_values(cls, n: int, values: Iterable[int]) -> "PartialFunction":
        return cls(n, bytes(values))

    @classmethod
    def total_from_ones(cls, n: int, ones: Iterable[int]) -> "PartialFunction":
        """Total function that is ONE exactly on ``ones``."""
        table = bytearray([ZERO]) * (1 << n)
        for x in ones:
            table[x] = ONE
        return cls(n, bytes(table))

    def evaluate(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise ValueError(f"point {x} out of range for arity {self.n}")
        return self.table[x]

    def __call__(self, x: int) -> int:
        return self.evaluate(x)

    def domain(self) -> Iterator[int]:
        """Points where the function is defined, in ascending order."""
        return (x for x, v in enumerate(self.table) if v != UNDEF)

    def undefined_points(self) -> Iterator[int]:
        return (x for x, v in enumerate(self.table) if v == UNDEF)

    @property
    def domain_size(self) -> int:
        return (1 << self.n) - self.table.count(UNDEF)

    @property
    def undefined_count(self) -> int:
        return self.table.count(UNDEF)

    @property
    def is_total(self) -> bool:
        return UNDEF not in self.table

    def is_constant_on_domain(self) -> bool:
        return not (ZERO in self.table and ONE in self.table)

    def with_value(self, x: int, value: int) -> "PartialFunction":
        """Copy with one table entry replaced."""
        t = bytearray(self.table)
        t[x] = value
        return PartialFunction(self.n, bytes(t))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PartialFunction)
            and self.n == other.n
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.n, self.table))

    def __repr__(self) -> str:
        body = "".join(_VALUE_CHARS[v] for v in self.table)
        if len(body) > 32:
            body = body[:29] + "..."
        return f"PartialFunction(n={self.n}, table={body})"


@dataclass(frozen=True)
class PartialAssignment:
    """A partial assignment: fixed coordinates (``support`` mask) and their
    bit values (``values``, a submask of ``support``)."""

    support: int
    values: int

    def __post_init__(self):
        if self.values & ~self.support:
            raise ValueError("values must be a submask of support")

    @property
    def size(self) -> int:
        return self.support.bit_count()

    def consistent_with_point(self, x: int) -> bool:
        return (x & self.support) == self.values

    def conflicts(self, other: "PartialAssignment") -> bool:
        common = self.support & other.support
        return (self.values & common) != (other.values & common)

    def restrict_of(self, x: int) -> bool:
        """True if this assignment equals ``x`` restricted to ``support``."""
        return self.consistent_with_point(x)

    @classmethod
    def of_point(cls, x: int, support: int) -> "PartialAssignment":
        return cls(support, x & support)


def make_symmetric(n: int, profile: Mapping[int, int]) -> PartialFunction:
    """Symmetric partial function whose value at ``x`` is ``profile[wt(x)]``.

    Weights missing from ``profile`` are undefined.
    """
    _check_arity(n)
    labels = [UNDEF] * (n + 1)
    for w, v in profile.items():
        if not 0 <= w <= n:
            raise ValueError(f"weight {w} out of range 0..{n}")
        if v not in (ZERO, ONE, UNDEF):
            raise ValueError(f"invalid label {v!r} for weight {w}")
        labels[w] = v
    table = bytes(labels[weight(x)] for x in range(1 << n))
    return PartialFunction(n, table)


def make_slice(n: int, k: int, labels: Mapping[int, int]) -> PartialFunction:
    """Partial function whose domain is exactly the weight-``k`` slice.

    ``labels`` must assign ZERO or ONE to every weight-``k`` point.
    """
    _check_arity(n)
    if not 0 <= k <= n:
        raise ValueError(f"slice index k={k} out of range 0..{n}")
    table = bytearray([UNDEF]) * (1 << n)
    for x, v in labels.items():
        if weight(x) != k:
            raise ValueError(f"point {x:#x} is not on the {k}-slice")
        if v not in (ZERO, ONE):
            raise ValueError("slice labels must be ZERO or ONE")
        table[x] = v
    for x in range(1 << n):
        if weight(x) == k and table[x] == UNDEF:
            raise ValueError(f"missing label for slice point {point_to_bits(x, n)}")
    return PartialFunction(n, bytes(table))
