"""The mod-2 Steenrod algebra in the admissible basis, and the subalgebra A(1).

Elements are F2-linear combinations of admissible monomials
Sq^{i1} ... Sq^{in} (i_j >= 2 i_{j+1}); a combination is stored as a
frozenset of exponent tuples, presence meaning coefficient 1.  Products are
computed by concatenating words and rewriting with the Adem relation

    Sq^a Sq^b = sum_{c=0}^{floor(a/2)} C(b-c-1, a-2c) Sq^{a+b-c} Sq^c,  a < 2b,

always at the leftmost inadmissible pair; each rewrite lowers the word's
left-lexicographic moment, so the reduction terminates.
"""

from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Iterable, List, Sequence, Tuple

Word = Tuple[int, ...]
Element = FrozenSet[Word]

ZERO: Element = frozenset()
ONE: Element = frozenset({()})


def binom2(n: int, k: int) -> int:
    """Binomial coefficient mod 2, valid for negative n as well."""
    if k < 0:
        return 0
    if n >= 0:
        return 1 if (n & k) == k else 0
    # C(n, k) = (-1)^k C(k - n - 1, k), and signs vanish mod 2
    return binom2(k - n - 1, k)


def is_admissible(word: Sequence[int]) -> bool:
    return all(word[j] >= 2 * word[j + 1] for j in range(len(word) - 1))


def word_degree(word: Sequence[int]) -> int:
    return sum(word)


def _adem_pair(a: int, b: int) -> List[Word]:
    """Rewrite Sq^a Sq^b (a < 2b) as a list of one- or two-letter words."""
    out: List[Word] = []
    for c in range(a // 2 + 1):
        if binom2(b - c - 1, a - 2 * c):
            if c == 0:
                out.append((a + b,))
            else:
                out.append((a + b - c, c))
    return out


@lru_cache(maxsize=None)
def adem_reduce(word: Word) -> Element:
    """Express Sq^{word} as a sum of admissible monomials.

    Entries must be >= 1; the empty word is the identity Sq^0.
    """
    for x in word:
        if x < 1:
            raise ValueError("word entries must be positive")
    terms = {tuple(word)}
    result: set[Word] = set()
    while terms:
        w = terms.pop()
        spot = next(
            (j for j in range(len(w) - 1) if w[j] < 2 * w[j + 1]),
            None,
        )
        if spot is None:
            result ^= {w}
            continue
        head, a, b, tail = w[:spot], w[spot], w[spot + 1], w[spot + 2:]
        for piece in _adem_pair(a, b):
            new = head + piece + tail
            if new in terms:
                terms.remove(new)
            else:
                terms.add(new)
    return frozenset(result)


def element(*words: Iterable[int]) -> Element:
    """Element from words, each reduced to admissible form; mod-2 sum."""
    acc: set[Word] = set()
    for w in words:
        acc ^= adem_reduce(tuple(w))
    return frozenset(acc)


def degree(elt: Element) -> int:
    """Common degree of a homogeneous element; -1 for the zero element."""
    degs = {word_degree(w) for w in elt}
    if not degs:
        return -1
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    return degs.pop()


def product(a: Element, b: Element) -> Element:
    acc: set[Word] = set()
    for wa in a:
        for wb in b:
            acc ^= adem_reduce(wa + wb)
    return frozenset(acc)


def sq(i: int) -> Element:
    return ONE if i == 0 else frozenset({(i,)})


def admissible_words(d: int) -> List[Word]:
    """All admissible monomials of degree d, lexicographically sorted."""
    if d < 0:
        return []
    if d == 0:
        return [()]
    out: List[Word] = []

    def extend(prefix: List[int], remaining: int, cap: int) -> None:
        # next entry i1 must satisfy i1 <= cap and leave an admissible tail
        for i1 in range(1, min(remaining, cap) + 1):
            if i1 == remaining:
                out.append(tuple(prefix + [i1]))
            elif i1 > remaining:
                break
            else:
                extend(prefix + [i1], remaining - i1, i1 // 2)

    extend([], d, d)
    return sorted(out)


# A(1) basis in the order used for all matrix coordinates, grouped by degree:
# (deg 0..6, with two classes in degree 3).  The degree-5 class is the
# two-term element Sq^5 + Sq^4 Sq^1 and is never split.
A1_BASIS: Tuple[Element, ...] = (
    ONE,
    frozenset({(1,)}),
    frozenset({(2,)}),
    frozenset({(3,)}),
    frozenset({(2, 1)}),
    frozenset({(3, 1)}),
    frozenset({(5,), (4, 1)}),
    frozenset({(5, 1)}),
)

A1_DEGREES: Tuple[int, ...] = (0, 1, 2, 3, 3, 4, 5, 6)

# each basis element as a composite of the generators Sq^1, Sq^2
# (letters act right-to-left, i.e. word (2, 1) means "Sq^1 then Sq^2")
A1_GENERATOR_WORDS: Tuple[Word, ...] = (
    (),
    (1,),
    (2,),
    (1, 2),
    (2, 1),
    (2, 2),
    (2, 1, 2),
    (2, 2, 2),
)


def a1_basis_by_degree(d: int) -> List[int]:
    """Indices into A1_BASIS of the degree-d part (empty above degree 6)."""
    return [i for i, deg in enumerate(A1_DEGREES) if deg == d]


def admissible_basis(d: int, restrict_to_a1: bool = False) -> List[Element]:
    """Degree-d basis: A(1)'s 8-element basis when restricted, else all
    admissible monomials (as singleton elements)."""
    if restrict_to_a1:
        return [A1_BASIS[i] for i in a1_basis_by_degree(d)]
    return [frozenset({w}) for w in admissible_words(d)]


@lru_cache(maxsize=None)
def _a1_mult_table() -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """table[i][j] = indices k with A1_BASIS[i] * A1_BASIS[j] containing
    A1_BASIS[k]; products of basis elements are verified to stay in A(1)."""
    table: List[Tuple[Tuple[int, ...], ...]] = []
    for i in range(8):
        row: List[Tuple[int, ...]] = []
        for j in range(8):
            p = product(A1_BASIS[i], A1_BASIS[j])
            ks: List[int] = []
            rem = set(p)
            d = A1_DEGREES[i] + A1_DEGREES[j]
            for k in range(8):
                if A1_DEGREES[k] != d:
                    continue
                if A1_BASIS[k] <= frozenset(rem):
                    ks.append(k)
                    rem ^= set(A1_BASIS[k])
            if rem:
                raise AssertionError("A(1) basis not closed under product")
            row.append(tuple(ks))
        table.append(tuple(row))
    return tuple(table)


def a1_product_indices(i: int, j: int) -> Tuple[int, ...]:
    """Product of the i-th and j-th A(1) basis elements, in basis indices."""
    return _a1_mult_table()[i][j]


def in_a1_span(elt: Element) -> bool:
    """Whether elt is an F2-combination of A(1) basis elements."""
    rem = set(elt)
    for k in range(8):
        if A1_BASIS[k] <= frozenset(rem):
            rem ^= set(A1_BASIS[k])
    return not rem


def render(elt: Element) -> str:
    """Text form like "Sq5 Sq1 + Sq6"; terms sorted lexicographically."""
    if not elt:
        return "0"
    parts = []
    for w in sorted(elt):
        parts.append("Sq0" if not w else " ".join(f"Sq{i}" for i in w))
    return " + ".join(parts)
