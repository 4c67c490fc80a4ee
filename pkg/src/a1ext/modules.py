"""Finite-dimensional graded A(1)-modules given by Sq1/Sq2 action matrices.

A module is stored on a degree window [min_degree, truncation]; action
matrices landing above the truncation have zero rows, so word checks are
automatically restricted to the window.  Validation certifies the module
axioms by brute force: every word in Sq1/Sq2 of total degree <= 8 must act
the same way as any other word with the same Adem normal form (A(1) lives in
degrees <= 6, so this finite check is complete).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from .f2 import F2Matrix, Subspace, kernel_basis, rref, solve
from .steenrod import ZERO, adem_reduce, binom2

Word = Tuple[int, ...]


@dataclass
class GradedA1Module:
    """Graded F2 vector space with Sq1 and Sq2 action matrices.

    ``dims[k]`` is the dimension in degree ``min_degree + k``; ``sq1[k]`` maps
    degree ``min_degree + k`` to ``min_degree + k + 1`` (rows = target dim).
    """

    min_degree: int
    dims: Tuple[int, ...]
    sq1: Tuple[F2Matrix, ...]
    sq2: Tuple[F2Matrix, ...]
    labels: Optional[Tuple[Tuple[str, ...], ...]] = None
    name: str = ""
    metadata: Dict[str, object] = field(default_factory=dict)
    complete: bool = False
    """True when the module is genuinely zero above the window (not a cut)."""

    @property
    def truncation(self) -> int:
        return self.min_degree + len(self.dims) - 1

    def dim(self, d: int) -> int:
        k = d - self.min_degree
        if 0 <= k < len(self.dims):
            return self.dims[k]
        return 0

    def total_dim(self) -> int:
        return sum(self.dims)

    def degrees(self) -> range:
        return range(self.min_degree, self.truncation + 1)

    def sq_at(self, i: int, d: int) -> F2Matrix:
        """Matrix of Sq^i (i = 1 or 2) from degree d to degree d + i."""
        mats = self.sq1 if i == 1 else self.sq2
        k = d - self.min_degree
        if 0 <= k < len(self.dims):
            return mats[k]
        return F2Matrix.zero(self.dim(d + i), self.dim(d))

    def operator(self, word: Word, d: int) -> F2Matrix:
        """Composite of the letters of ``word`` starting in degree d.

        Letters are applied right to left, so word (2, 1) is Sq2 after Sq1.
        """
        out = F2Matrix.identity(self.dim(d))
        deg = d
        for letter in reversed(word):
            out = self.sq_at(letter, deg).matmul(out)
            deg += letter
        return out

    def label(self, d: int, i: int) -> str:
        k = d - self.min_degree
        if self.labels is not None and 0 <= k < len(self.labels):
            row = self.labels[k]
            if i < len(row):
                return row[i]
        return f"x{d}_{i}" if self.dim(d) > 1 else f"x{d}"


def _zero_mats(dims: Sequence[int], jump: int, min_degree: int = 0) -> List[F2Matrix]:
    n = len(dims)

    def dim_at(k: int) -> int:
        return dims[k] if 0 <= k < n else 0

    return [F2Matrix.zero(dim_at(k + jump), dims[k]) for k in range(n)]


class ModuleBuilder:
    """Mutable helper: declare cells, add Sq1/Sq2 arrows, then build."""

    def __init__(self, min_degree: int, dims: Sequence[int], name: str = "") -> None:
        self.min_degree = min_degree
        self.dims = list(dims)
        self.s1 = _zero_mats(self.dims, 1)
        self.s2 = _zero_mats(self.dims, 2)
        self.labels: List[List[str]] = [
            [f"x{min_degree + k}" + (f"_{i}" if d > 1 else "") for i in range(d)]
            for k, d in enumerate(self.dims)
        ]
        self.name = name
        self.metadata: Dict[str, object] = {}
        self.complete = False

    def arrow(self, i: int, d: int, src: int = 0, dst: int = 0) -> None:
        """Toggle Sq^i from (degree d, index src) to (degree d+i, index dst)."""
        k = d - self.min_degree
        mats = self.s1 if i == 1 else self.s2
        mats[k].rows[dst] ^= 1 << src

    def set_label(self, d: int, i: int, text: str) -> None:
        self.labels[d - self.min_degree][i] = text

    def build(self) -> GradedA1Module:
        return GradedA1Module(
            self.min_degree,
            tuple(self.dims),
            tuple(self.s1),
            tuple(self.s2),
            tuple(tuple(row) for row in self.labels),
            self.name,
            dict(self.metadata),
            self.complete,
        )


@dataclass
class Report:
    ok: bool
    failures: List[str]

    def __bool__(self) -> bool:
        return self.ok


def _words_up_to(max_degree: int) -> List[Word]:
    out: List[Word] = [()]
    frontier: List[Word] = [()]
    while frontier:
        nxt: List[Word] = []
        for w in frontier:
            for letter in (1, 2):
                if sum(w) + letter <= max_degree:
                    nxt.append(w + (letter,))
        out.extend(nxt)
        frontier = nxt
    return out


def validate(m: GradedA1Module) -> Report:
    """Check the A(1)-module axioms on the truncation window.

    Words in Sq1/Sq2 of equal Adem normal form must act identically, and
    words reducing to zero must act as zero; degree <= 8 suffices because
    A(1) is concentrated in degrees <= 6.
    """
    failures: List[str] = []
    for k, d in enumerate(m.dims):
        if d < 0:
            failures.append(f"negative dimension at degree {m.min_degree + k}")
    for i, mats in ((1, m.sq1), (2, m.sq2)):
        for k, mat in enumerate(mats):
            deg = m.min_degree + k
            if mat.ncols != m.dim(deg) or mat.nrows != m.dim(deg + i):
                failures.append(f"Sq{i} matrix shape mismatch at degree {deg}")
    if failures:
        return Report(False, failures)

    groups: Dict[object, List[Word]] = {}
    for w in _words_up_to(8):
        groups.setdefault(adem_reduce(w), []).append(w)
    for normal, words in sorted(groups.items(), key=lambda kv: sorted(kv[1])):
        if normal == ZERO:
            for w in words:
                for d in m.degrees():
                    if not m.operator(w, d).is_zero():
                        failures.append(
                            f"word {w} should act as zero; fails at degree {d}"
                        )
                        break
        elif len(words) > 1:
            ref = words[0]
            for w in words[1:]:
                for d in m.degrees():
                    if m.operator(w, d).rows != m.operator(ref, d).rows:
                        failures.append(
                            f"words {ref} and {w} disagree at degree {d}"
                        )
                        break
    return Report(not failures, failures)


# ---------------------------------------------------------------------------
# builtin modules
# ---------------------------------------------------------------------------

def f2_module() -> GradedA1Module:
    b = ModuleBuilder(0, [1], "F2")
    b.complete = True
    return b.build()


def a1_module() -> GradedA1Module:
    """A(1) as a free left module over itself (dims 1,1,1,2,1,1,1)."""
    from .steenrod import A1_DEGREES, a1_basis_by_degree, a1_product_indices

    by_deg = {d: a1_basis_by_degree(d) for d in range(7)}
    b = ModuleBuilder(0, [len(by_deg[d]) for d in range(7)], "A1")
    names = ["Sq0", "Sq1", "Sq2", "Sq3", "Sq2Sq1", "Sq3Sq1", "Sq5+Sq4Sq1", "Sq5Sq1"]
    for d in range(7):
        for i, idx in enumerate(by_deg[d]):
            b.set_label(d, i, names[idx])
    for gen in (1, 2):
        for d in range(7 - gen):
            for i, idx in enumerate(by_deg[d]):
                for k in a1_product_indices(gen, idx):
                    b.arrow(gen, d, i, by_deg[A1_DEGREES[k]].index(k))
    b.complete = True
    return b.build()


def m_module() -> GradedA1Module:
    """A(1) // A(0): cells 0, 2, 3, 5."""
    b = ModuleBuilder(0, [1, 0, 1, 1, 0, 1], "M")
    b.arrow(2, 0)
    b.arrow(1, 2)
    b.arrow(2, 3)
    b.complete = True
    return b.build()


def joker_module() -> GradedA1Module:
    b = ModuleBuilder(0, [1, 1, 1, 1, 1], "J")
    b.arrow(1, 0)
    b.arrow(1, 3)
    b.arrow(2, 0)
    b.arrow(2, 1)
    b.arrow(2, 2)
    b.complete = True
    return b.build()


def question_mark_module() -> GradedA1Module:
    b = ModuleBuilder(0, [1, 0, 1, 1], "Q")
    b.arrow(2, 0)
    b.arrow(1, 2)
    b.complete = True
    return b.build()


def c_eta_module() -> GradedA1Module:
    b = ModuleBuilder(0, [1, 0, 1], "Ceta")
    b.arrow(2, 0)
    b.complete = True
    return b.build()


def p_module(truncation: int = 20) -> GradedA1Module:
    """The 4-periodic module with cells {0} and every degree >= 2.

    Sq1: even degrees >= 2; Sq2: 0 -> 2 and degrees 3, 4 mod 4 (degree >= 3).
    """
    dims = [1 if (d == 0 or d >= 2) else 0 for d in range(truncation + 1)]
    b = ModuleBuilder(0, dims, "P")
    b.arrow(2, 0)
    for d in range(2, truncation + 1):
        if d % 2 == 0 and d + 1 <= truncation:
            b.arrow(1, d)
        if d >= 3 and d % 4 in (3, 0) and d + 2 <= truncation:
            b.arrow(2, d)
    return b.build()


def rp_module(n: Optional[int], k: int, truncation: Optional[int] = None) -> GradedA1Module:
    """Truncated projective space P^n_k: cells x^i for k <= i <= n.

    n=None means infinite; k may be negative (binomials extend mod 2).
    Sq^j x^i = C(i, j) x^{i+j}.
    """
    top = truncation if n is None else (n if truncation is None else min(n, truncation))
    if top is None:
        raise ValueError("infinite projective space needs a truncation")
    if top < k:
        raise ValueError("empty degree range for projective module")
    dims = [1] * (top - k + 1)
    b = ModuleBuilder(k, dims, f"RP({'inf' if n is None else n},{k})")
    b.complete = n is not None and top == n
    for i in range(k, top + 1):
        b.set_label(i, 0, f"x^{i}")
        if i + 1 <= top and binom2(i, 1):
            b.arrow(1, i)
        if i + 2 <= top and binom2(i, 2):
            b.arrow(2, i)
    return b.build()


def bc2n_module(n: int, truncation: int = 20) -> GradedA1Module:
    """Reduced H*(BC_{2^n}; F2) for n >= 2: ring F2[a, b]/(a^2), Sq1 a = 0.

    Sq2 sends b^j to j b^{j+1} and a b^j to j a b^{j+1}; the metadata records
    the degree pairs joined by the 2^n Bockstein (a b^k with b^{k+1}).
    """
    if n < 2:
        raise ValueError("bc2n_module needs n >= 2 (use rp_module for BC_2)")
    b = ModuleBuilder(1, [1] * truncation, f"BC2n({n})")
    for d in range(1, truncation + 1):
        j = d // 2 if d % 2 == 0 else (d - 1) // 2
        b.set_label(d, 0, f"b^{j}" if d % 2 == 0 else (f"a b^{j}" if j else "a"))
        if d + 2 <= truncation and d % 4 in (2, 3):
            b.arrow(2, d)
    b.metadata["bockstein_order"] = 2 ** n
    b.metadata["bockstein_pairs"] = tuple(
        (d, d + 1) for d in range(1, truncation, 2)
    )
    return b.build()


_BUILTIN_RE = re.compile(r"^([A-Za-z0-9]+)(?:\(([-0-9a-z, ]*)\))?$")


def standard_module(name: str, truncation: Optional[int] = None) -> GradedA1Module:
    """Builtin module by name: F2, A1, M, J, Q, Ceta, P, RPinf, RP(n,k), BC2n(n)."""
    match = _BUILTIN_RE.match(name.strip())
    if not match:
        raise ValueError(f"cannot parse module name {name!r}")
    base, argtext = match.group(1), match.group(2)
    args = [a.strip() for a in argtext.split(",")] if argtext else []
    t = truncation if truncation is not None else 20
    simple = {
        "F2": f2_module,
        "A1": a1_module,
        "M": m_module,
        "J": joker_module,
        "Q": question_mark_module,
        "Ceta": c_eta_module,
    }
    if base in simple:
        if args:
            raise ValueError(f"{base} takes no arguments")
        return simple[base]()
    if base == "P":
        return p_module(t)
    if base == "RPinf":
        return rp_module(None, 1, t)
    if base == "RP":
        if len(args) != 2:
            raise ValueError("RP needs (n, k)")
        n = None if args[0] == "inf" else int(args[0])
        k = int(args[1])
        if n is not None and k > n:
            raise ValueError("RP(n, k) needs k <= n")
        return rp_module(n, k, truncation)
    if base == "BC2n":
        if len(args) != 1:
            raise ValueError("BC2n needs (n)")
        return bc2n_module(int(args[0]), t)
    raise ValueError(f"unknown builtin module {name!r}")


# ---------------------------------------------------------------------------
# structural operations
# ---------------------------------------------------------------------------

def suspend(m: GradedA1Module, j: int) -> GradedA1Module:
    if j == 0:
        return m
    return GradedA1Module(
        m.min_degree + j, m.dims, m.sq1, m.sq2, m.labels,
        f"S^{j} {m.name}" if m.name else "",
        dict(m.metadata),
        m.complete,
    )


def direct_sum(a: GradedA1Module, b: GradedA1Module) -> GradedA1Module:
    lo = min(a.min_degree, b.min_degree)
    hi = max(a.truncation, b.truncation)
    dims = [a.dim(d) + b.dim(d) for d in range(lo, hi + 1)]
    out = ModuleBuilder(lo, dims, f"{a.name}+{b.name}" if a.name and b.name else "")
    out.complete = a.complete and b.complete
    for d in range(lo, hi + 1):
        for i in range(a.dim(d)):
            out.set_label(d, i, a.label(d, i))
        for i in range(b.dim(d)):
            out.set_label(d, a.dim(d) + i, b.label(d, i))
        for jump in (1, 2):
            for src_mod, off_src, off_dst in ((a, 0, 0), (b, a.dim(d), a.dim(d + jump))):
                mat = src_mod.sq_at(jump, d)
                for r in range(mat.nrows):
                    row = mat.rows[r]
                    while row:
                        c = (row & -row).bit_length() - 1
                        out.arrow(jump, d, off_src + c, off_dst + r)
                        row &= row - 1
    return out.build()


def tensor_product(a: GradedA1Module, b: GradedA1Module,
                   truncation: Optional[int] = None) -> GradedA1Module:
    """Tensor over F2 with the Cartan action:
    Sq1(x(x)y) = Sq1x(x)y + x(x)Sq1y,
    Sq2(x(x)y) = Sq2x(x)y + Sq1x(x)Sq1y + x(x)Sq2y.
    """
    lo = a.min_degree + b.min_degree
    natural_hi = a.truncation + b.truncation
    hi = natural_hi
    if truncation is not None:
        hi = min(hi, truncation)
    if hi < lo:
        raise ValueError("empty tensor truncation window")

    def pairs(d: int) -> List[Tuple[int, int, int, int]]:
        out = []
        for p in range(a.min_degree, a.truncation + 1):
            q = d - p
            for i in range(a.dim(p)):
                for j in range(b.dim(q)):
                    out.append((p, i, q, j))
        return out

    index: Dict[int, Dict[Tuple[int, int, int, int], int]] = {
        d: {key: n for n, key in enumerate(pairs(d))} for d in range(lo, hi + 1)
    }
    dims = [len(index[d]) for d in range(lo, hi + 1)]
    out = ModuleBuilder(lo, dims, f"{a.name}(x){b.name}" if a.name and b.name else "")
    out.complete = a.complete and b.complete and hi == natural_hi
    for d in range(lo, hi + 1):
        for key, n in index[d].items():
            p, i, q, j = key
            out.set_label(d, n, f"{a.label(p, i)}(x){b.label(q, j)}")
        if d + 2 > hi and d + 1 > hi:
            continue
        for key, n in index[d].items():
            p, i, q, j = key
            sq1a, sq2a = a.sq_at(1, p), a.sq_at(2, p)
            sq1b, sq2b = b.sq_at(1, q), b.sq_at(2, q)
            if d + 1 <= hi:
                tgt = index[d + 1]
                for r in range(sq1a.nrows):
                    if sq1a.entry(r, i):
                        out.arrow(1, d, n, tgt[(p + 1, r, q, j)])
                for r in range(sq1b.nrows):
                    if sq1b.entry(r, j):
                        out.arrow(1, d, n, tgt[(p, i, q + 1, r)])
            if d + 2 <= hi:
                tgt = index[d + 2]
                for r in range(sq2a.nrows):
                    if sq2a.entry(r, i):
                        out.arrow(2, d, n, tgt[(p + 2, r, q, j)])
                for r in range(sq2b.nrows):
                    if sq2b.entry(r, j):
                        out.arrow(2, d, n, tgt[(p, i, q + 2, r)])
                for r1 in range(sq1a.nrows):
                    if not sq1a.entry(r1, i):
                        continue
                    for r2 in range(sq1b.nrows):
                        if sq1b.entry(r2, j):
                            out.arrow(2, d, n, tgt[(p + 1, r1, q + 1, r2)])
    return out.build()


def submodule(m: GradedA1Module, generators: Sequence[Tuple[int, int]]) -> GradedA1Module:
    """A(1)-span of the given (degree, vector) generators, as a module.

    Vectors are bitsets in the ambient degree's basis.  The induced basis per
    degree is the echelonized closure, so the result is deterministic.
    """
    spans: Dict[int, Subspace] = {d: Subspace(m.dim(d)) for d in m.degrees()}
    frontier = [(d, v) for d, v in generators if spans[d].add(v)]
    while frontier:
        d, v = frontier.pop()
        for jump in (1, 2):
            if d + jump > m.truncation:
                continue
            w = m.sq_at(jump, d).apply(v)
            if w and spans[d + jump].add(w):
                frontier.append((d + jump, w))
    degs = [d for d in m.degrees() if spans[d].dim > 0]
    if not degs:
        raise ValueError("empty submodule")
    lo, hi = min(degs), max(degs)
    basis: Dict[int, List[int]] = {d: list(spans[d].rows) for d in range(lo, hi + 1)}
    out = ModuleBuilder(lo, [len(basis[d]) for d in range(lo, hi + 1)])

    def coords(d: int, v: int) -> int:
        cols = basis[d]
        mat = F2Matrix(m.dim(d), len(cols),
                       [sum(((cols[c] >> r) & 1) << c for c in range(len(cols)))
                        for r in range(m.dim(d))])
        x = solve(mat, v)
        if x is None:
            raise AssertionError("closure is not closed")
        return x

    for d in range(lo, hi + 1):
        for jump in (1, 2):
            if d + jump > hi:
                continue
            for c, vec in enumerate(basis[d]):
                img = m.sq_at(jump, d).apply(vec)
                if img:
                    x = coords(d + jump, img)
                    for r in range(len(basis[d + jump])):
                        if (x >> r) & 1:
                            out.arrow(jump, d, c, r)
    return out.build()


# ---------------------------------------------------------------------------
# short exact sequences
# ---------------------------------------------------------------------------

@dataclass
class ShortExactSequence:
    left: GradedA1Module
    middle: GradedA1Module
    right: GradedA1Module
    inject: Dict[int, F2Matrix]    # degree -> dim_middle x dim_left
    surject: Dict[int, F2Matrix]   # degree -> dim_right x dim_middle

    def inject_at(self, d: int) -> F2Matrix:
        return self.inject.get(d, F2Matrix.zero(self.middle.dim(d), self.left.dim(d)))

    def surject_at(self, d: int) -> F2Matrix:
        return self.surject.get(d, F2Matrix.zero(self.right.dim(d), self.middle.dim(d)))


def ses_check(s: ShortExactSequence) -> Report:
    failures: List[str] = []
    lo = min(s.left.min_degree, s.middle.min_degree, s.right.min_degree)
    hi = max(s.left.truncation, s.middle.truncation, s.right.truncation)
    for d in range(lo, hi + 1):
        inj, sur = s.inject_at(d), s.surject_at(d)
        if inj.rank() != s.left.dim(d):
            failures.append(f"inject not injective at degree {d}")
        if sur.rank() != s.right.dim(d):
            failures.append(f"surject not surjective at degree {d}")
        if not sur.matmul(inj).is_zero():
            failures.append(f"surject o inject nonzero at degree {d}")
        if inj.rank() != s.middle.dim(d) - sur.rank():
            failures.append(f"image != kernel at degree {d}")
        for jump in (1, 2):
            if d + jump > hi:
                continue
            lhs = s.inject_at(d + jump).matmul(s.left.sq_at(jump, d))
            rhs = s.middle.sq_at(jump, d).matmul(inj)
            if lhs.rows != rhs.rows:
                failures.append(f"inject does not commute with Sq{jump} at degree {d}")
            lhs = s.surject_at(d + jump).matmul(s.middle.sq_at(jump, d))
            rhs = s.right.sq_at(jump, d).matmul(sur)
            if lhs.rows != rhs.rows:
                failures.append(f"surject does not commute with Sq{jump} at degree {d}")
    return Report(not failures, failures)


# ---------------------------------------------------------------------------
# JSON module files
# ---------------------------------------------------------------------------

def to_json_dict(m: GradedA1Module) -> dict:
    def arrows(mats: Tuple[F2Matrix, ...]) -> List[List[int]]:
        out = []
        for k, mat in enumerate(mats):
            d = m.min_degree + k
            for r in range(mat.nrows):
                for c in range(mat.ncols):
                    if mat.entry(r, c):
                        out.append([d, c, r])
        return out

    data: dict = {
        "min_degree": m.min_degree,
        "dims": list(m.dims),
        "sq1": arrows(m.sq1),
        "sq2": arrows(m.sq2),
    }
    if m.labels is not None:
        data["labels"] = [list(row) for row in m.labels]
    if m.complete:
        data["complete"] = True
    if m.metadata:
        data["metadata"] = {
            k: (list(map(list, v)) if isinstance(v, tuple) else v)
            for k, v in m.metadata.items()
        }
    return data


def from_json_dict(data: dict) -> GradedA1Module:
    b = ModuleBuilder(int(data["min_degree"]), [int(x) for x in data["dims"]])
    for key, jump in (("sq1", 1), ("sq2", 2)):
        for d, src, dst in data.get(key, []):
            b.arrow(jump, int(d), int(src), int(dst))
    for k, row in enumerate(data.get("labels", []) or []):
        for i, text in enumerate(row):
            b.set_label(b.min_degree + k, i, str(text))
    meta = data.get("metadata", {})
    if "bockstein_pairs" in meta:
        meta["bockstein_pairs"] = tuple(tuple(p) for p in meta["bockstein_pairs"])
    b.metadata.update(meta)
    b.complete = bool(data.get("complete", False))
    return b.build()


def save_module(m: GradedA1Module, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(m), fh, indent=1, sort_keys=True)


def load_module(path: str) -> GradedA1Module:
    with open(path, "r", encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
