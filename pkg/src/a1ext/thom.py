"""A(1)-module structures on Thom spectra, via the Wu and Cartan formulas.

Covers MO(n) (Sq^i U = w_i U), MTO(n) (Sq^i U = (1/w)_i U with the inverse
total Stiefel-Whitney series), MSO(n) (w_1 = 0), the twisted B(Z/2^{n-1})
Thom modules of the charge-2^n family, and the total-Stiefel-Whitney oracle
for multiples of products of line-bundle classes over (RP^4)^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .modules import GradedA1Module, ModuleBuilder, rp_module, suspend
from .steenrod import binom2

Monomial = Tuple[int, ...]          # exponents, aligned with algebra variables


@dataclass(frozen=True)
class SWAlgebra:
    """Truncated polynomial algebra over F2 on weighted generators."""

    names: Tuple[str, ...]
    degrees: Tuple[int, ...]
    truncation: int
    power_cap: Optional[int] = None   # a^5 = 0 over RP^4, etc.

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def monomials_of_degree(self, d: int) -> List[Monomial]:
        out: List[Monomial] = []

        def rec(i: int, left: int, acc: List[int]) -> None:
            if i == len(self.degrees):
                if left == 0:
                    out.append(tuple(acc))
                return
            top = left // self.degrees[i]
            if self.power_cap is not None:
                top = min(top, self.power_cap)
            for e in range(top + 1):
                rec(i + 1, left - e * self.degrees[i], acc + [e])

        if 0 <= d <= self.truncation:
            rec(0, d, [])
        return sorted(out)

    def monomial_label(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return " ".join(parts) if parts else "1"


@dataclass(frozen=True)
class SWPolynomial:
    algebra: SWAlgebra
    terms: FrozenSet[Monomial]

    def __add__(self, other: "SWPolynomial") -> "SWPolynomial":
        return SWPolynomial(self.algebra, self.terms ^ other.terms)

    def __mul__(self, other: "SWPolynomial") -> "SWPolynomial":
        alg = self.algebra
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                c = tuple(x + y for x, y in zip(a, b))
                if alg.power_cap is not None and any(e > alg.power_cap for e in c):
                    continue
                if alg.monomial_degree(c) > alg.truncation:
                    continue
                acc ^= {c}
        return SWPolynomial(alg, frozenset(acc))

    def __pow__(self, k: int) -> "SWPolynomial":
        out = sw_one(self.algebra)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def component(self, d: int) -> "SWPolynomial":
        return SWPolynomial(
            self.algebra,
            frozenset(t for t in self.terms if self.algebra.monomial_degree(t) == d),
        )

    def max_degree(self) -> int:
        return max((self.algebra.monomial_degree(t) for t in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0,) * len(self.algebra.names)}

    def inverse(self) -> "SWPolynomial":
        """Series inverse of 1 + (higher terms), computed degree by degree."""
        alg = self.algebra
        unit = (0,) * len(alg.names)
        if unit not in self.terms:
            raise ValueError("only series with constant term 1 are invertible")
        higher = SWPolynomial(alg, self.terms ^ {unit})
        out = sw_one(alg)
        power = sw_one(alg)
        # geometric series: 1 + h + h^2 + ...; h raises degree, so it stops
        while True:
            power = power * higher
            if power.is_zero():
                break
            out = out + power
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        labels = sorted(self.algebra.monomial_label(t) for t in self.terms)
        return " + ".join(labels)


def sw_zero(alg: SWAlgebra) -> SWPolynomial:
    return SWPolynomial(alg, frozenset())


def sw_one(alg: SWAlgebra) -> SWPolynomial:
    return SWPolynomial(alg, frozenset({(0,) * len(alg.names)}))


def sw_generator(alg: SWAlgebra, name: str) -> SWPolynomial:
    i = alg.names.index(name)
    mono = tuple(1 if j == i else 0 for j in range(len(alg.names)))
    return SWPolynomial(alg, frozenset({mono}))


def bo_algebra(n: int, truncation: int, no_w1: bool = False) -> SWAlgebra:
    lo = 2 if no_w1 else 1
    return SWAlgebra(
        tuple(f"w{j}" for j in range(lo, n + 1)),
        tuple(range(lo, n + 1)),
        truncation,
    )


def _w_class(alg: SWAlgebra, j: int) -> SWPolynomial:
    """w_j in the algebra; 1 for j = 0, 0 for generators not present."""
    if j == 0:
        return sw_one(alg)
    name = f"w{j}"
    if name in alg.names:
        return sw_generator(alg, name)
    return sw_zero(alg)


def _sq_on_w(alg: SWAlgebra, i: int, j: int) -> SWPolynomial:
    """Wu formula: Sq^i(w_j) = sum_k C((j-i)+(k-1), k) w_{i-k} w_{j+k}.

    Instability handles i > j (zero); i = j comes out of the formula as
    w_j^2 via the k = 0 term.
    """
    if i == 0:
        return _w_class(alg, j)
    if i > j:
        return sw_zero(alg)
    acc = sw_zero(alg)
    for k in range(i + 1):
        if binom2((j - i) + (k - 1), k):
            acc = acc + _w_class(alg, i - k) * _w_class(alg, j + k)
    return acc


def _total_sq_gen(alg: SWAlgebra, gi: int) -> SWPolynomial:
    """Total square of the gi-th generator: sum of all Sq^i of it."""
    j = alg.degrees[gi]
    acc = sw_zero(alg)
    for i in range(j + 1):
        acc = acc + _sq_on_w(alg, i, j)
    return acc


def total_sq(p: SWPolynomial) -> SWPolynomial:
    """Total Steenrod square, term by term (ring homomorphism)."""
    alg = p.algebra
    acc = sw_zero(alg)
    gens = [_total_sq_gen(alg, gi) for gi in range(len(alg.names))]
    for mono in p.terms:
        prod = sw_one(alg)
        for gi, e in enumerate(mono):
            if e:
                prod = prod * gens[gi] ** e
        acc = acc + prod
    return acc


def wu_sq(i: int, p: SWPolynomial) -> SWPolynomial:
    """Sq^i on a polynomial in Stiefel-Whitney classes."""
    if i < 0:
        raise ValueError("Sq^i needs i >= 0")
    alg = p.algebra
    acc = sw_zero(alg)
    total = total_sq(p)
    degs = {alg.monomial_degree(t) for t in p.terms}
    for d in degs:
        part = total_sq(p.component(d)) if len(degs) > 1 else total
        acc = acc + part.component(d + i)
    return acc


def sw_inverse_series(n: int, truncation: int) -> List[SWPolynomial]:
    """Degree components of 1/(1 + w_1 + ... + w_n), degrees 0..truncation."""
    alg = bo_algebra(n, truncation)
    total = sw_one(alg)
    for j in range(1, n + 1):
        total = total + _w_class(alg, j)
    inv = total.inverse()
    return [inv.component(d) for d in range(truncation + 1)]


def thom_module(kind: str, n: int, shift: int = 0,
                truncation: int = 14) -> GradedA1Module:
    """Reduced cohomology of MO(n), MTO(n) or MSO(n) as an A(1)-module.

    The Thom class U sits in degree n (MO/MSO) or -n (MTO); ``shift``
    suspends the result, and ``truncation`` is the top module degree kept.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    kind = kind.upper()
    if kind not in ("MO", "MTO", "MSO"):
        raise ValueError(f"unknown Thom spectrum kind {kind!r}")
    u_deg = -n if kind == "MTO" else n
    lo = u_deg + shift
    poly_top = truncation - lo + 2
    alg = bo_algebra(n, poly_top, no_w1=(kind == "MSO"))
    if kind == "MTO":
        total = sw_one(alg)
        for j in range(1, n + 1):
            total = total + _w_class(alg, j)
        inv = total.inverse()
        theta = [inv.component(d) for d in (1, 2)]
    else:
        theta = [_w_class(alg, 1), _w_class(alg, 2)]

    degrees = list(range(lo, truncation + 1))
    basis: Dict[int, List[Monomial]] = {
        d: alg.monomials_of_degree(d - lo) for d in degrees
    }
    index: Dict[int, Dict[Monomial, int]] = {
        d: {m: i for i, m in enumerate(basis[d])} for d in degrees
    }
    b = ModuleBuilder(lo, [len(basis[d]) for d in degrees],
                      f"{kind}({n})" + (f" shift {shift}" if shift else ""))
    u_name = "U" if kind != "MTO" else "U'"
    for d in degrees:
        for i, mono in enumerate(basis[d]):
            lab = alg.monomial_label(mono)
            b.set_label(d, i, u_name if lab == "1" else f"{lab} {u_name}")
    for d in degrees:
        for i, mono in enumerate(basis[d]):
            mpoly = SWPolynomial(alg, frozenset({mono}))
            sq1m, sq2m = wu_sq(1, mpoly), wu_sq(2, mpoly)
            images = {
                1: sq1m + mpoly * theta[0],
                2: sq2m + sq1m * theta[0] + mpoly * theta[1],
            }
            for jump, img in images.items():
                if d + jump > truncation:
                    continue
                for t in img.terms:
                    b.arrow(jump, d, i, index[d + jump][t])
    return b.build()


def twisted_bz_module(n: int, truncation: int = 16) -> GradedA1Module:
    """Thom module of twice the sign representation over B(Z/2^{n-1}).

    n = 2 gives reduced H*(RP^inf_2) shifted to start in degree 0 (its
    2-Bockstein is the Sq1 action, so no pairing metadata is needed).  For
    n >= 3 the module is the B(Z/2^{n-1}) pattern missing the bottom two
    cells: stacked copies of the Sq2-cone, with the degree pairs carrying the
    2^{n-1} Bockstein recorded in the metadata.
    """
    if n < 2:
        raise ValueError("twisted module needs n >= 2")
    if truncation < 0:
        return ModuleBuilder(0, [1], "TwistedBZ").build()
    if n == 2:
        m = suspend(rp_module(None, 2, truncation=truncation + 2), -2)
        return GradedA1Module(
            m.min_degree, m.dims, m.sq1, m.sq2, m.labels,
            "TwistedBZ(2)",
            {"bockstein_order": 2, "bockstein_pairs": ()},
        )
    b = ModuleBuilder(0, [1] * (truncation + 1), f"TwistedBZ({n})")
    for d in range(0, truncation - 1):
        if d % 4 in (0, 1):
            b.arrow(2, d)
    for d in range(truncation + 1):
        j = d // 2 + 1
        b.set_label(d, 0, f"b^{j} U" if d % 2 == 0 else f"a b^{j} U")
    b.metadata["bockstein_order"] = 2 ** (n - 1)
    b.metadata["bockstein_pairs"] = tuple(
        (d, d + 1) for d in range(1, truncation, 2)
    )
    return b.build()


def line_bundle_algebra(m: int, truncation: int = 4) -> SWAlgebra:
    """Mod-2 cohomology of (RP^4)^m: degree-1 classes a_i with a_i^5 = 0."""
    return SWAlgebra(
        tuple(f"a{i}" for i in range(1, m + 1)),
        (1,) * m,
        truncation,
        power_cap=4,
    )


def virtual_bundle_sw(m: int, subset: Sequence[int], k: int,
                      truncation: int = 4) -> SWPolynomial:
    """Total Stiefel-Whitney class of k copies of prod_{i in S}([L_i] - 1).

    Expands the product as a signed sum of tensor products of line bundles;
    w of a sum multiplies, w of a negative is the series inverse, and
    w(tensor of line bundles) = 1 + sum of the a_i.  Everything is reduced
    mod terms of degree > ``truncation`` (degree 4: the (RP^4)^m skeleton).
    """
    subset = tuple(sorted(set(subset)))
    if not subset:
        raise ValueError("subset must be non-empty")
    if k < 1:
        raise ValueError("need k >= 1")
    if any(i < 1 or i > m for i in subset):
        raise ValueError("subset out of range")
    alg = line_bundle_algebra(m, truncation)
    out = sw_one(alg)
    for bits in range(1 << len(subset)):
        chosen = [subset[j] for j in range(len(subset)) if (bits >> j) & 1]
        cls = sw_one(alg)
        for i in chosen:
            cls = cls + sw_generator(alg, f"a{i}")
        positive = (len(subset) - len(chosen)) % 2 == 0
        factor = cls if positive else cls.inverse()
        out = out * factor ** k
    return out


def sw_vanishes_below_5(m: int, subset: Sequence[int], k: int) -> bool:
    """Whether w(k . lambda_S) = 1 in degrees 1..4 over (RP^4)^m."""
    return virtual_bundle_sw(m, subset, k, truncation=4).is_one()


def bundle_order_lower_bound(m: int, subset: Sequence[int], max_log: int = 4) -> int:
    """Largest power of 2 forced on the order of lambda_S by nonvanishing
    total Stiefel-Whitney classes: order > 2^j whenever w(2^j lambda) != 1."""
    bound = 1
    for j in range(max_log):
        if not sw_vanishes_below_5(m, subset, 2 ** j):
            bound = 2 ** (j + 1)
        else:
            break
    return bound
