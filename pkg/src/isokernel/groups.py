"""Groups indexing the time component of space-time kernels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ValidationError

GROUP_KINDS = ("real-line", "real-vector", "finite")


@dataclass(frozen=True)
class GroupDescriptor:
    """``(R, +)``, ``(R^m, +)`` or a finite group given by its multiplication table.

    For finite groups elements are the indices ``0..order-1`` and
    ``table[a][b]`` is the index of ``a * b``.
    """

    kind: str
    m: Optional[int] = None
    table: Optional[Tuple[Tuple[int, ...], ...]] = None
    identity: int = 0

    def __post_init__(self):
        if self.kind not in GROUP_KINDS:
            raise ValidationError("group.kind", f"unknown group kind {self.kind!r}")
        if self.kind == "real-line":
            object.__setattr__(self, "m", 1)
        elif self.kind == "real-vector":
            if self.m is None or int(self.m) < 1:
                raise ValidationError("group.m", "real-vector groups need m >= 1")
        else:
            if not self.table:
                raise ValidationError("group.table", "finite groups need a multiplication table")
            table = tuple(tuple(int(v) for v in row) for row in self.table)
            object.__setattr__(self, "table", table)
            self._check_axioms()

    def _check_axioms(self):
        t = np.array(self.table)
        order = len(t)
        e = self.identity
        if t.shape != (order, order) or t.min() < 0 or t.max() >= order:
            raise ValidationError("group.table", "table must be square with entries in 0..order-1")
        if not 0 <= e < order:
            raise ValidationError("group.identity", "identity index out of range")
        idx = np.arange(order)
        if not (np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)):
            raise ValidationError("group.identity", "identity does not act trivially")
        for row in t:
            if sorted(row) != list(idx):
                raise ValidationError("group.table", "rows must be permutations (inverses missing)")
        # associativity: t[t[a,b],c] == t[a,t[b,c]]
        left = t[t[:, :, None], idx[None, None, :]]
        right = t[idx[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            raise ValidationError("group.table", "operation is not associative")

    @property
    def order(self) -> Optional[int]:
        return len(self.table) if self.kind == "finite" else None

    def inverse(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def difference(self, u, v):
        """``u^{-1} * v``."""
        if self.kind == "finite":
            return self.table[self.inverse(int(u))][int(v)]
        return np.asarray(v, dtype=float) - np.asarray(u, dtype=float)

    def to_json(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind == "real-vector":
            doc["m"] = self.m
        if self.kind == "finite":
            doc["table"] = [list(row) for row in self.table]
            doc["identity"] = self.identity
        return doc

    @classmethod
    def from_json(cls, doc) -> "GroupDescriptor":
        unknown = set(doc) - {"kind", "m", "table", "identity"}
        if unknown:
            raise ValidationError("group", f"unknown keys {sorted(unknown)}")
        return cls(doc.get("kind"), doc.get("m"), doc.get("table"), doc.get("identity", 0))
