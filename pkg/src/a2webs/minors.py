"""Products of three complementary minors, expanded in web immanants.

A triple of minors is complementary when the three row index sets
partition 1..n and the three column sets do too, with matching sizes.
Such a product of minors expands exactly as

    minor_1 * minor_2 * minor_3 = sum over D of |L_{D,g}| Imm_D

where g is the boundary word that marks each source position with the
number of the row block containing it (likewise sinks and column
blocks), and |L_{D,g}| is the plain count of consistent labelings.
The coefficients are therefore nonnegative integers computable with
no linear algebra at all; the identity itself is checked numerically
on random rational matrices, and the coefficient matrix over all
triples has full column rank, so the immanants are exactly the span
of these products.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .immanants import ExactMatrix, evaluate_immanant, irreducible_webs
from .labelings import BoundaryLabeling, enumerate_labelings
from .webcore import Web, WebError


def _block(xs: Sequence[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(xs)))
    if len(out) != len(tuple(xs)):
        raise WebError(f"repeated index in {tuple(xs)}")
    return out


@dataclass(frozen=True)
class MinorTriple:
    """Row blocks (I1, I2, I3) and column blocks (J1, J2, J3)."""

    rows: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    cols: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        flat_r = [m for blk in self.rows for m in blk]
        flat_c = [m for blk in self.cols for m in blk]
        n = len(flat_r)
        if sorted(flat_r) != list(range(1, n + 1)):
            raise WebError("row blocks must partition 1..n")
        if sorted(flat_c) != list(range(1, n + 1)):
            raise WebError("column blocks must partition 1..n")
        if any(len(i) != len(j) for i, j in zip(self.rows, self.cols)):
            raise WebError("paired blocks must have equal sizes")

    @classmethod
    def from_sets(cls, I1, I2, I3, J1, J2, J3) -> "MinorTriple":
        return cls(
            (_block(I1), _block(I2), _block(I3)),
            (_block(J1), _block(J2), _block(J3)),
        )

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.rows)


def boundary_from_triple(T: MinorTriple) -> BoundaryLabeling:
    """Source m gets the number of the row block holding m; sinks read
    the column blocks the same way."""
    n = T.n
    src = [0] * n
    snk = [0] * n
    for k, blk in enumerate(T.rows, start=1):
        for m in blk:
            src[m - 1] = k
    for k, blk in enumerate(T.cols, start=1):
        for m in blk:
            snk[m - 1] = k
    return BoundaryLabeling(tuple(src), tuple(snk))


def minor(X: ExactMatrix, I: Sequence[int], J: Sequence[int]) -> Fraction:
    """Determinant of the (I, J) submatrix, 1-indexed; empty gives 1."""
    I, J = _block(I), _block(J)
    if len(I) != len(J):
        raise WebError(f"minor needs equal index sets, got {I} and {J}")
    for m in I + J:
        if not 1 <= m <= X.n:
            raise WebError(f"index {m} outside 1..{X.n}")
    if not I:
        return Fraction(1)
    return X.submatrix([i - 1 for i in I], [j - 1 for j in J]).det()


def decompose_triple(T: MinorTriple) -> dict[Web, int]:
    """Webs with nonzero coefficient in the expansion of T's product,
    each coefficient a plain labeling count."""
    g = boundary_from_triple(T)
    out = {}
    for D in irreducible_webs(T.n):
        c = len(enumerate_labelings(D, g))
        if c:
            out[D] = c
    return out


def triple_product(T: MinorTriple, X: ExactMatrix) -> Fraction:
    return (
        minor(X, T.rows[0], T.cols[0])
        * minor(X, T.rows[1], T.cols[1])
        * minor(X, T.rows[2], T.cols[2])
    )


def check_triple(T: MinorTriple, X: ExactMatrix, imm_cache: Optional[dict] = None) -> bool:
    """Numeric verification of the expansion on one matrix.  Pass a
    dict when checking many triples against the same matrix; immanant
    values are reused through it."""
    if imm_cache is None:
        imm_cache = {}
    rhs = Fraction(0)
    for D, c in decompose_triple(T).items():
        if D.code not in imm_cache:
            imm_cache[D.code] = evaluate_immanant(D, X)
        rhs += c * imm_cache[D.code]
    return triple_product(T, X) == rhs


def all_triples(n: int) -> list[MinorTriple]:
    """Every complementary triple on 1..n, rows and columns both
    running over all 3-block ordered set partitions of matching sizes."""
    by_sizes: dict = {}
    assignments = list(itertools.product((1, 2, 3), repeat=n))
    for assign in assignments:
        blocks = tuple(
            tuple(m for m in range(1, n + 1) if assign[m - 1] == k)
            for k in (1, 2, 3)
        )
        sizes = tuple(len(b) for b in blocks)
        by_sizes.setdefault(sizes, []).append(blocks)
    out = []
    for sizes, row_choices in sorted(by_sizes.items()):
        for rows in row_choices:
            for cols in by_sizes[sizes]:
                out.append(MinorTriple(rows, cols))
    return out


def random_triple(n: int, rng: random.Random) -> MinorTriple:
    assign = [rng.randint(1, 3) for _ in range(n)]
    rows = tuple(
        tuple(m for m in range(1, n + 1) if assign[m - 1] == k) for k in (1, 2, 3)
    )
    labels = [k for k, blk in enumerate(rows, start=1) for _ in blk]
    rng.shuffle(labels)
    cols = tuple(
        tuple(m for m in range(1, n + 1) if labels[m - 1] == k) for k in (1, 2, 3)
    )
    return MinorTriple(rows, cols)


def random_rational_matrix(
    n: int, rng: random.Random, num_bound: int = 9, den_bound: int = 5
) -> ExactMatrix:
    return ExactMatrix.from_rows(
        [
            [
                Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
                for _ in range(n)
            ]
            for _ in range(n)
        ]
    )


def rank_check(n: int) -> dict:
    """Rank of the coefficient matrix (triples by webs).  Full column
    rank means the immanants are a basis for the span of complementary
    minor products.  The report also records the largest coefficient
    seen, since the expansion is not multiplicity free in general."""
    webs = irreducible_webs(n)
    codes = [D.code for D in webs]
    pivots: list[list[Fraction]] = []
    max_coeff = 0
    max_at = None
    triples = all_triples(n)
    for T in triples:
        counts = decompose_triple(T)
        if counts:
            biggest = max(counts.values())
            if biggest > max_coeff:
                max_coeff = biggest
                max_at = T
        by_code = {D.code: c for D, c in counts.items()}
        vec = [Fraction(by_code.get(c, 0)) for c in codes]
        for row in pivots:
            lead = next(k for k, x in enumerate(row) if x)
            if vec[lead]:
                f = vec[lead] / row[lead]
                vec = [a - f * b for a, b in zip(vec, row)]
        if any(vec):
            pivots.append(vec)
    report = {
        "n": n,
        "triples": len(triples),
        "webs": len(webs),
        "rank": len(pivots),
        "max_coefficient": max_coeff,
        "max_coefficient_triple": None,
        "passed": len(pivots) == len(webs),
    }
    if max_at is not None:
        report["max_coefficient_triple"] = {
            "rows": [list(b) for b in max_at.rows],
            "cols": [list(b) for b in max_at.cols],
        }
    return report
