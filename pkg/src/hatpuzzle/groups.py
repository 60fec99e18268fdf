"""Commutative groups used as hat-color sets.

Three kinds are supported: cyclic groups ``Z_m``, finite direct products of
cyclic groups (``Z_2 x Z_4``) and the integers. Elements are plain Python
values in canonical form:

* cyclic: the least non-negative residue, an ``int`` in ``[0, m)``
* product: a ``tuple`` holding one canonical component per factor
* integers: an ``int``

so element equality is ``==`` on canonical forms. Groups are immutable and
hashable.

>>> g = parse_group_spec("z2xz4")
>>> g.add((1, 3), (1, 2))
(0, 1)
>>> g.sub((0, 0), (1, 3))
(1, 1)
>>> list(parse_group_spec("z3").elements())
[0, 1, 2]
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Iterator, Tuple, Union

from .errors import GroupMismatchError, GroupSpecParseError, UnsupportedError

Element = Union[int, Tuple[Any, ...]]


def _is_int(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class GroupSpec:
    """Common interface of the color groups."""

    finite: bool

    @property
    def order(self) -> int:
        raise UnsupportedError(f"{self} is infinite and has no finite order")

    def zero(self) -> Element:
        raise NotImplementedError

    def contains(self, a: object) -> bool:
        raise NotImplementedError

    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def check(self, a: object) -> Element:
        """Return ``a`` unchanged if it is a canonical element, else raise."""
        if not self.contains(a):
            raise GroupMismatchError(f"{a!r} is not a canonical element of {self}")
        return a  # type: ignore[return-value]

    def add(self, a: Element, b: Element) -> Element:
        return self._add(self.check(a), self.check(b))

    def neg(self, a: Element) -> Element:
        return self._neg(self.check(a))

    def sub(self, a: Element, b: Element) -> Element:
        return self._add(self.check(a), self._neg(self.check(b)))

    def sum(self, values: Iterable[Element]) -> Element:
        """Sum in iteration order. Values are assumed to be members already."""
        total = self.zero()
        for v in values:
            total = self._add(total, v)
        return total

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order of canonical form."""
        raise UnsupportedError(f"cannot enumerate the infinite group {self}")

    @cached_property
    def element_list(self) -> tuple:
        return tuple(self.elements())

    @cached_property
    def index_of(self) -> dict:
        """Map element -> position in :meth:`elements`."""
        return {e: i for i, e in enumerate(self.element_list)}

    @cached_property
    def sub_table(self) -> tuple:
        """``sub_table[i][j]`` is the index of ``elements[i] - elements[j]``."""
        els = self.element_list
        idx = self.index_of
        return tuple(
            tuple(idx[self._add(a, self._neg(b))] for b in els) for a in els
        )

    def to_json(self, a: Element) -> Any:
        return a

    def from_json(self, obj: Any) -> Element:
        raise NotImplementedError

    def require_finite(self, what: str = "this operation") -> None:
        if not self.finite:
            raise UnsupportedError(f"{what} needs a finite group, got {self}")


@dataclass(frozen=True)
class Cyclic(GroupSpec):
    """The cyclic group of order ``m`` on residues ``0..m-1``."""

    m: int

    def __post_init__(self):
        if not _is_int(self.m) or self.m < 1:
            raise ValueError(f"cyclic order must be a positive integer, got {self.m!r}")

    finite = True

    @property
    def order(self) -> int:
        return self.m

    def __str__(self) -> str:
        return f"z{self.m}"

    def zero(self) -> int:
        return 0

    def contains(self, a: object) -> bool:
        return _is_int(a) and 0 <= a < self.m  # type: ignore[operator]

    def _add(self, a, b):
        return (a + b) % self.m

    def _neg(self, a):
        return -a % self.m

    def sum(self, values):
        return sum(values) % self.m

    def elements(self):
        return iter(range(self.m))

    def from_json(self, obj):
        return self.check(obj)


@dataclass(frozen=True)
class Integers(GroupSpec):
    """The additive group of the integers. Never enumerable."""

    finite = False

    def __str__(self) -> str:
        return "int"

    def zero(self) -> int:
        return 0

    def contains(self, a: object) -> bool:
        return _is_int(a)

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def sum(self, values):
        return sum(values)

    def from_json(self, obj):
        return self.check(obj)


_TABLE_MAX_ORDER = 64


@dataclass(frozen=True)
class Product(GroupSpec):
    """Direct product of two or more non-product factors."""

    factors: Tuple[GroupSpec, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if len(factors) < 2:
            raise ValueError("a product needs at least two factors")
        for f in factors:
            if not isinstance(f, GroupSpec):
                raise TypeError(f"product factor {f!r} is not a GroupSpec")
            if isinstance(f, Product):
                raise ValueError("nested products are not supported; list the factors flat")
        object.__setattr__(self, "_zero", tuple(f.zero() for f in factors))
        if self.finite and self.order <= _TABLE_MAX_ORDER:
            self._install_tables()

    def _install_tables(self) -> None:
        # Small finite products get lookup tables in place of tuple arithmetic.
        els = list(itertools.product(*(f.element_list for f in self.factors)))
        add = {a: {b: self._add(a, b) for b in els} for a in els}
        neg = {a: self._neg(a) for a in els}
        zero = self._zero

        def fast_sum(values):
            total = zero
            for v in values:
                total = add[total][v]
            return total

        object.__setattr__(self, "_add", lambda a, b: add[a][b])
        object.__setattr__(self, "_neg", neg.__getitem__)
        object.__setattr__(self, "sum", fast_sum)

    @property
    def finite(self) -> bool:  # type: ignore[override]
        return all(f.finite for f in self.factors)

    @property
    def order(self) -> int:
        self.require_finite("order")
        return math.prod(f.order for f in self.factors)

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)

    def zero(self) -> tuple:
        return self._zero  # type: ignore[attr-defined]

    def contains(self, a: object) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == len(self.factors)
            and all(f.contains(c) for f, c in zip(self.factors, a))
        )

    def _add(self, a, b):
        return tuple(f._add(x, y) for f, x, y in zip(self.factors, a, b))

    def _neg(self, a):
        return tuple(f._neg(x) for f, x in zip(self.factors, a))

    def sum(self, values):
        values = list(values)
        if not values:
            return self.zero()
        return tuple(f.sum(col) for f, col in zip(self.factors, zip(*values)))

    def elements(self):
        self.require_finite("enumeration")
        return itertools.product(*(f.element_list for f in self.factors))

    def to_json(self, a):
        return [f.to_json(c) for f, c in zip(self.factors, a)]

    def from_json(self, obj):
        if not isinstance(obj, (list, tuple)) or len(obj) != len(self.factors):
            raise GroupMismatchError(f"{obj!r} is not an element of {self}")
        return tuple(f.from_json(c) for f, c in zip(self.factors, obj))


def product(*factors: GroupSpec) -> GroupSpec:
    """Direct product, flattening nested products; a single factor is returned as is."""
    flat: list[GroupSpec] = []
    for f in factors:
        flat.extend(f.factors if isinstance(f, Product) else [f])
    if not flat:
        raise ValueError("product of no factors")
    return flat[0] if len(flat) == 1 else Product(tuple(flat))


_TOKEN = re.compile(r"z(\d+)|int")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse ``z<m>``, ``int`` or ``x``-joined products such as ``z2xz3``."""
    if not isinstance(text, str):
        raise TypeError("group spec must be a string")
    factors: list[GroupSpec] = []
    pos = 0
    for token in text.split("x"):
        match = _TOKEN.fullmatch(token)
        if match is None:
            raise GroupSpecParseError(
                f"expected 'z<m>' or 'int', found {token!r}", text, pos
            )
        if match.group(1) is None:
            factors.append(Integers())
        else:
            m = int(match.group(1))
            if m < 1:
                raise GroupSpecParseError("cyclic order must be >= 1", text, pos + 1)
            factors.append(Cyclic(m))
        pos += len(token) + 1
    return product(*factors)


def as_group(g: "GroupSpec | str") -> GroupSpec:
    return parse_group_spec(g) if isinstance(g, str) else g

