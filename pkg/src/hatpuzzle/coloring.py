"""Finite-support colorings of the agents ``0, 1, 2, ...``.

A coloring gives every agent a group element; all but finitely many agents
wear the group zero. Values are stored as a tuple with trailing zeros
trimmed, which makes the representation unique per function, so ``==`` on
colorings is equality of functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

from .errors import GroupMismatchError
from .groups import Element, GroupSpec, as_group


_new = object.__new__


def _trim(values: tuple, zero) -> tuple:
    end = len(values)
    while end and values[end - 1] == zero:
        end -= 1
    return values[:end] if end != len(values) else values


@dataclass(frozen=True)
class Coloring:
    group: GroupSpec
    values: tuple = ()

    def __post_init__(self):
        zero = self.group.zero()
        values = tuple(self.values)
        for v in values:
            if not self.group.contains(v):
                raise GroupMismatchError(f"{v!r} is not an element of {self.group}")
        object.__setattr__(self, "values", _trim(values, zero))

    @classmethod
    def _trusted(cls, group: GroupSpec, values: tuple) -> "Coloring":
        # Skips validation and trimming. Callers pass canonical, trimmed values.
        obj = _new(cls)
        state = obj.__dict__
        state["group"] = group
        state["values"] = values
        return obj

    @classmethod
    def zeros(cls, group: GroupSpec) -> "Coloring":
        return cls._trusted(group, ())

    @classmethod
    def from_mapping(cls, group: GroupSpec, assignments: Mapping[int, Element]) -> "Coloring":
        if not assignments:
            return cls.zeros(group)
        if min(assignments) < 0:
            raise ValueError("agent indices must be non-negative")
        zero = group.zero()
        values = [zero] * (max(assignments) + 1)
        for n, v in assignments.items():
            values[n] = v
        return cls(group, tuple(values))

    @property
    def assignments(self) -> dict:
        """The non-zero positions as ``{agent: color}``."""
        zero = self.group.zero()
        return {n: v for n, v in enumerate(self.values) if v != zero}

    def value(self, n: int) -> Element:
        if n < 0:
            raise ValueError(f"agent index must be non-negative, got {n}")
        values = self.values
        return values[n] if n < len(values) else self.group.zero()

    __getitem__ = value

    def support(self) -> frozenset:
        zero = self.group.zero()
        return frozenset(n for n, v in enumerate(self.values) if v != zero)

    def padded(self, horizon: int) -> tuple:
        """Values at positions ``0..horizon-1``; positions past the horizon must be zero."""
        values = self.values
        if len(values) > horizon:
            raise ValueError(f"coloring has support beyond horizon {horizon}")
        return values + (self.group.zero(),) * (horizon - len(values))

    def update(self, n: int, v: Element) -> "Coloring":
        """Return ``f[n|v]``: this coloring with agent ``n`` recolored to ``v``."""
        if not self.group.contains(v):
            raise GroupMismatchError(f"{v!r} is not an element of {self.group}")
        if n < 0:
            raise ValueError(f"agent index must be non-negative, got {n}")
        return self._set(n, v)

    def _set(self, n: int, v) -> "Coloring":
        values = self.values
        size = len(values)
        if n < size:
            if values[n] == v:
                return self
            new = values[:n] + (v,) + values[n + 1:]
            if n == size - 1:
                zero = self.group.zero()
                if v == zero:
                    new = _trim(new, zero)
            return Coloring._trusted(self.group, new)
        zero = self.group.zero()
        if v == zero:
            return self
        return Coloring._trusted(self.group, values + (zero,) * (n - size) + (v,))

    def mask_self(self, a: int) -> "Coloring":
        """``f[a|0]``: hide agent ``a``'s own hat before it evaluates a strategy."""
        return self._set(a, self.group.zero())

    def to_json(self) -> dict:
        return {"group": str(self.group), "values": self.values_json()}

    def values_json(self) -> list:
        return [self.group.to_json(v) for v in self.values]

    @classmethod
    def from_json(cls, obj: Any, group: "GroupSpec | str | None" = None) -> "Coloring":
        """Accept ``{"group": ..., "values": [...]}`` or a bare value array plus ``group``."""
        if isinstance(obj, Mapping):
            spec = as_group(obj["group"])
            if group is not None and as_group(group) != spec:
                raise GroupMismatchError(f"coloring is over {spec}, expected {group}")
            values = obj.get("values", [])
        else:
            if group is None:
                raise ValueError("a bare value array needs an explicit group")
            spec, values = as_group(group), obj
        if not isinstance(values, (list, tuple)):
            raise ValueError("coloring values must be an array")
        return cls(spec, tuple(spec.from_json(v) for v in values))

    def __repr__(self) -> str:
        return f"Coloring({self.group}, {list(self.values)})"


def coloring_at(group: GroupSpec, horizon: int, index: int) -> Coloring:
    """The ``index``-th coloring of :func:`enumerate_colorings` without building the list."""
    els = group.element_list
    base = len(els)
    digits = [0] * horizon
    for pos in range(horizon - 1, -1, -1):
        index, digits[pos] = divmod(index, base)
    if index:
        raise IndexError("coloring index out of range")
    return Coloring._trusted(group, _trim(tuple(els[d] for d in digits), group.zero()))


def count_colorings(group: GroupSpec, horizon: int) -> int:
    group.require_finite("coloring enumeration")
    return group.order ** horizon


def enumerate_colorings(group: GroupSpec, horizon: int) -> Iterator[Coloring]:
    """All ``|K|**horizon`` colorings supported below ``horizon``, lexicographic in values."""
    group.require_finite("coloring enumeration")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    zero = group.zero()
    for values in itertools.product(group.element_list, repeat=horizon):
        yield Coloring._trusted(group, _trim(values, zero))


def coloring_of(group: GroupSpec, values: Iterable[Element]) -> Coloring:
    return Coloring(group, tuple(values))
