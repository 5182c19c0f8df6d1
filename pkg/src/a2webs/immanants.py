"""Irreducible web enumeration, immanant tables, and exact matrices.

At q = 1 the braid generator maps to E_i - 1.  Multiplying these along
a reduced word of a permutation w and rewriting to irreducible webs
gives one integer f_D(w) per web D.  The function

    Imm_D(X) = sum over w of f_D(w) x_{1,w(1)} ... x_{n,w(n)}

is the immanant attached to D.  Webs are discovered by running the
expansion over all of S_n; completeness of the discovered set is not
taken on faith but certified by two independent counts (a pattern
avoidance scan and a tableau count, module perms), which the test
suite and the verification CLI both enforce.

Immanants of matrices built from positive planar networks are
nonnegative; tnn_check samples that claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

from .exactmath import eval_q1, rational_to_str
from .perms import Perm, all_perms, first_reduced_word, perm_from_word, perm_length
from .spider import WebCombo, hecke_image
from .webcore import Web, WebError

# expansions run over all of S_n, so the cost is factorial; n = 5 is
# the last size that finishes in reasonable time
WEB_BOUND = 5


@dataclass(frozen=True)
class ExactMatrix:
    """Square matrix of rationals, 0-indexed entries."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise WebError("matrix must be square")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ExactMatrix":
        return cls(tuple(tuple(Fraction(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        )

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def submatrix(self, keep_rows: Sequence[int], keep_cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(
            tuple(tuple(self.rows[i][j] for j in keep_cols) for i in keep_rows)
        )

    def det(self) -> Fraction:
        n = self.n
        m = [list(r) for r in self.rows]
        sign = 1
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                sign = -sign
            for r in range(c + 1, n):
                if m[r][c]:
                    f = m[r][c] / m[c][c]
                    for k in range(c, n):
                        m[r][k] -= f * m[c][k]
        out = Fraction(sign)
        for c in range(n):
            out *= m[c][c]
        return out

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "rows": [[rational_to_str(x) for x in r] for r in self.rows],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExactMatrix":
        try:
            rows = obj["rows"]
        except (TypeError, KeyError) as exc:
            raise WebError("matrix object needs a 'rows' field") from exc
        try:
            m = cls.from_rows(rows)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise WebError(f"bad matrix entry: {exc}") from exc
        if "n" in obj and obj["n"] != m.n:
            raise WebError(f"matrix says n={obj['n']} but has {m.n} rows")
        return m


def theta_image(w: Perm, word: Optional[Sequence[int]] = None) -> WebCombo:
    """Image of a permutation at generic parameter: the product of
    (t^2 E_i - 1) along a reduced word.  The combo only depends on w;
    pass a specific reduced word to exercise that independence.

    Diagram concatenation composes wirings left to right, opposite to
    function composition, so the factors are multiplied in reversed
    word order; that way the product realizes w itself, source i
    wired to sink w(i), matching row i and column w(i) of a matrix.
    """
    if word is None:
        word = first_reduced_word(w)
    else:
        word = tuple(word)
        if perm_from_word(len(w), word) != w or len(word) != perm_length(w):
            raise WebError(f"{word} is not a reduced word for {w}")
    return hecke_image(len(w), tuple(reversed(word)))


def _q1_row(combo: WebCombo) -> dict:
    """Integer web coefficients of a combo at q = 1, zeros dropped."""
    out = {}
    for web, coeff in combo.terms():
        v = eval_q1(coeff)
        if v:
            if v.denominator != 1:
                raise WebError(f"non-integer coefficient {v} at q = 1")
            out[web.code] = int(v)
    return out


_IRRED: dict[int, list[Web]] = {}


def irreducible_webs(n: int, bound: int = WEB_BOUND) -> list[Web]:
    """Every irreducible web hit by the S_n expansion, sorted by code.

    The count must equal the number of 4321-avoiding permutations of
    S_n (equivalently a Kostka number); callers are expected to keep
    that certification enforced, as the tests do.
    """
    if not 1 <= n <= bound:
        raise WebError(f"web enumeration is bounded at n = {bound}, got {n}")
    if n not in _IRRED:
        found: dict = {}
        for w in all_perms(n):
            combo = theta_image(w)
            for web, coeff in combo.terms():
                if eval_q1(coeff):
                    found[web.code] = web
        _IRRED[n] = [found[c] for c in sorted(found)]
    return list(_IRRED[n])


class ImmanantTable:
    """Integer coefficients f_D(w), rows indexed by irreducible webs."""

    __slots__ = ("n", "webs", "_rows")

    def __init__(self, n: int, webs: Sequence[Web], rows: dict):
        self.n = n
        self.webs = tuple(webs)
        self._rows = rows  # code -> {perm: int}, zeros omitted

    def coefficient(self, D: Web, w: Perm) -> int:
        if D.code not in self._rows:
            raise WebError("not an irreducible web of this table")
        return self._rows[D.code].get(w, 0)

    def row(self, D: Web) -> dict:
        if D.code not in self._rows:
            raise WebError("not an irreducible web of this table")
        return dict(self._rows[D.code])

    def combo_at_q1(self, w: Perm) -> dict:
        """code -> f_D(w), reconstructed column of the table."""
        out = {}
        for code, row in self._rows.items():
            v = row.get(w, 0)
            if v:
                out[code] = v
        return out

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "webs": [list(D.code) for D in self.webs],
            "rows": [
                {
                    ",".join(map(str, w)): v
                    for w, v in sorted(self._rows[D.code].items())
                }
                for D in self.webs
            ],
        }


_TABLES: dict[int, ImmanantTable] = {}


def immanant_table(n: int, bound: int = WEB_BOUND) -> ImmanantTable:
    if n not in _TABLES:
        webs = irreducible_webs(n, bound)
        rows: dict = {D.code: {} for D in webs}
        for w in all_perms(n):
            for code, v in _q1_row(theta_image(w)).items():
                rows[code][w] = v
        _TABLES[n] = ImmanantTable(n, webs, rows)
    return _TABLES[n]


def evaluate_immanant(D: Web, X: ExactMatrix) -> Fraction:
    """Exact value of Imm_D on a rational matrix."""
    if D.n != X.n:
        raise WebError(f"web on {D.n} strands against a {X.n} by {X.n} matrix")
    table = immanant_table(X.n)
    total = Fraction(0)
    for w, f in table.row(D).items():
        prod = Fraction(f)
        for i in range(X.n):
            prod *= X.entry(i, w[i] - 1)
        total += prod
    return total


def parabolic_image(n: int, i: int, j: int) -> WebCombo:
    """Sum of theta images at q = 1 over the subgroup permuting the
    letters i..j only.  Width 2 gives E_i, width 3 gives D2_i, and
    anything wider dies."""
    if not 1 <= i < j <= n:
        raise WebError(f"need 1 <= i < j <= n, got ({i}, {j}) at n = {n}")
    window = range(i, j + 1)
    acc_terms: dict = {}
    for block in permutations(window):
        w = list(range(1, n + 1))
        for pos, val in zip(window, block):
            w[pos - 1] = val
        for code, v in _q1_row(theta_image(tuple(w))).items():
            acc_terms[code] = acc_terms.get(code, 0) + v
    out = WebCombo.zero(n)
    for code, v in acc_terms.items():
        if v:
            out = out + WebCombo.from_web(Web.from_code(code), v)
    return out


def tnn_check(n: int, samples: int = 100, seed: int = 0) -> dict:
    """Evaluate every immanant on path matrices of random positive
    planar networks; the values must all be nonnegative.  Returns a
    report rather than raising: a negative value is a counterexample
    to a theorem, and the caller decides how loudly to fail."""
    from .networks import random_tnn_matrix  # deferred, networks sits above

    webs = irreducible_webs(n)
    violations = []
    least: Optional[Fraction] = None
    for k in range(samples):
        X = random_tnn_matrix(n, seed + k)
        for D in webs:
            v = evaluate_immanant(D, X)
            if least is None or v < least:
                least = v
            if v < 0:
                violations.append(
                    {
                        "web": list(D.code),
                        "matrix": X.to_json_obj(),
                        "value": rational_to_str(v),
                        "seed": seed + k,
                    }
                )
    return {
        "n": n,
        "samples": samples,
        "seed": seed,
        "immanants": len(webs),
        "min_value": rational_to_str(least) if least is not None else None,
        "violations": violations,
        "passed": not violations,
    }
