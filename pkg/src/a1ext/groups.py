"""Finitely generated 2-local abelian groups: rank plus 2-power torsion."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple


@dataclass(frozen=True)
class FinAbGroup:
    """Z^rank plus cyclic 2-groups; torsion orders sorted descending."""

    rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError("negative rank")
        for t in self.torsion:
            if t < 2 or t & (t - 1):
                raise ValueError(f"torsion order {t} is not a 2-power >= 2")
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion, reverse=True)))

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int = 1) -> "FinAbGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, order: int) -> "FinAbGroup":
        return cls(0, (order,)) if order > 1 else cls.trivial()

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def two_length(self) -> int:
        """Total exponent of 2 in the torsion part."""
        return sum(t.bit_length() - 1 for t in self.torsion)

    def plus(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.rank + other.rank, self.torsion + other.torsion)

    def render(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        i = 0
        tor = self.torsion
        while i < len(tor):
            j = i
            while j < len(tor) and tor[j] == tor[i]:
                j += 1
            count = j - i
            parts.append(f"Z/{tor[i]}" if count == 1 else f"(Z/{tor[i]})^{count}")
            i = j
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()


def direct_sum(groups: Iterable[FinAbGroup]) -> FinAbGroup:
    out = FinAbGroup.trivial()
    for g in groups:
        out = out.plus(g)
    return out


def tensor_2local(a: FinAbGroup, b: FinAbGroup) -> FinAbGroup:
    """A (x) B for 2-local finitely generated groups."""
    torsion = []
    torsion += list(b.torsion) * a.rank
    torsion += list(a.torsion) * b.rank
    for e in a.torsion:
        for f in b.torsion:
            torsion.append(min(e, f))
    return FinAbGroup(a.rank * b.rank, tuple(torsion))


def tor_2local(a: FinAbGroup, b: FinAbGroup) -> FinAbGroup:
    """Tor_1(A, B): one Z/min(e, f) per pair of cyclic summands."""
    torsion = tuple(min(e, f) for e in a.torsion for f in b.torsion)
    return FinAbGroup(0, torsion)


def parse_group(text: str) -> FinAbGroup:
    """Inverse of render, for golden fixtures: "Z + (Z/2)^3", "0", ..."""
    text = text.strip()
    if text in ("0", ""):
        return FinAbGroup.trivial()
    rank = 0
    torsion = []
    for part in text.split("+"):
        part = part.strip()
        power = 1
        if "^" in part:
            part, exp = part.rsplit("^", 1)
            power = int(exp)
            part = part.strip().strip("()")
        if part == "Z":
            rank += power
        elif part.startswith("Z/"):
            torsion += [int(part[2:])] * power
        else:
            raise ValueError(f"cannot parse group part {part!r}")
    return FinAbGroup(rank, tuple(torsion))
