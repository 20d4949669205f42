"""Sliding block codes between CA shifts and their polynomial duals.

A local rule is a table on the window language ``L_S`` of the source
shift, indexed by basis coordinates (see ``LanguageSubspace``).  The code
it induces, ``y_k = rule(x|_(k+S))``, lands in ``Q``'s shift iff

    sum_n c_Q(n) rule(x|_(S-n)) = 0   for every x|_W,  W = union_n (S - n),

by shift invariance.  These conditions are linear in the table entries,
which is what makes exhaustive search cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from . import linalg
from .ca import CAShift, canonical_residue, ideal_member, substitute_time
from .errors import BudgetError, TheoremViolation
from .factor import Factorization, univariate_factor, verify_factor_hint
from .laurent import Exponent, LaurentPoly, shape, vscale, vsub
from .shift import (
    Configuration,
    LanguageSubspace,
    Window,
    coordinate_table,
    language,
)

DEFAULT_RULE_BUDGET = 1 << 16
DEFAULT_ELEMENT_BUDGET = 1 << 20
EQUIVARIANCE_CELL_BUDGET = 96


@dataclass(frozen=True)
class LocalRule:
    """``gamma: L_S -> F_p`` with ``gamma(0) = 0``, stored as a table by language index."""

    language: LanguageSubspace
    table: tuple

    def __post_init__(self):
        if len(self.table) != self.language.size:
            raise ValueError(f"table has {len(self.table)} entries, language has {self.language.size}")
        if self.table[0] % self.p:
            raise ValueError("a homomorphism rule must send the zero configuration to 0")

    @property
    def p(self) -> int:
        return self.language.p

    @property
    def window(self) -> Window:
        return self.language.window

    @classmethod
    def zero(cls, lang: LanguageSubspace) -> "LocalRule":
        return cls(lang, (0,) * lang.size)

    @classmethod
    def from_function(cls, lang: LanguageSubspace, f: Callable[[dict], int]) -> "LocalRule":
        cells = lang.window.cells
        table = tuple(f(dict(zip(cells, lang.element(i)))) % lang.p for i in range(lang.size))
        return cls(lang, table)

    @classmethod
    def linear(cls, lang: LanguageSubspace, weights: Mapping[Exponent, int]) -> "LocalRule":
        """``gamma(C) = sum_s weights[s] * C(s)``."""
        weights = {tuple(s): w for s, w in weights.items()}
        return cls.from_function(lang, lambda c: sum(w * c[s] for s, w in weights.items()))

    def __call__(self, config) -> int:
        return self.table[self.language.index_of(config)]

    def is_zero(self) -> bool:
        return not any(self.table)

    def polynomial(self) -> LaurentPoly:
        """``R = sum_s a_s X^-s`` for the linear form agreeing with the rule on basis rows.

        Meaningful for additive rules, where ``y = R x`` reproduces the code.
        """
        lang = self.language
        d = len(lang.window.cells[0])
        terms = {}
        for i, piv in enumerate(lang.pivots):
            a = self.table[lang.p**i]
            if a:
                terms[vscale(-1, lang.window.cells[piv])] = a
        return LaurentPoly(lang.p, d, terms)

    def to_json(self):
        if self.is_zero():
            return "zero"
        return {"cells": [list(c) for c in self.window.cells], "table": list(self.table)}


def apply_local_rule(rule: LocalRule, x: Configuration) -> Configuration:
    """Sliding block code on a finite window: ``out_k = rule(x|_(k+S))`` wherever ``k+S`` fits."""
    S = rule.window.cells
    values = x.as_dict()
    out = {}
    for w in x.window.cells:
        k = vsub(w, S[0])
        cells = [tuple(a + b for a, b in zip(k, s)) for s in S]
        if all(c in values for c in cells):
            sub = [values[c] for c in cells]
            if not rule.language.contains(sub):
                raise ValueError(f"restriction at {k} is not in the rule's language")
            out[k] = rule.table[rule.language.index_of(sub)]
    if not out:
        raise ValueError("window too small for the rule's shape")
    return Configuration.from_mapping(out)


def _equivariance_constraints(lang: LanguageSubspace, caP: CAShift, caQ: CAShift,
                              element_budget: int = DEFAULT_ELEMENT_BUDGET):
    """Distinct index tuples ``(i_n)_n`` over shape(Q) realised by points of P, plus ``c_Q``."""
    S = lang.window.cells
    SQ = sorted(shape(caQ.P))
    coeffs = np.array([caQ.P.coeff(n) for n in SQ], dtype=np.int64)
    if lang.rank == 0:
        return np.zeros((1, len(SQ)), dtype=np.int64), coeffs
    W = Window.of(vsub(s, n) for n in SQ for s in S)
    LW = language(caP, W, cell_budget=EQUIVARIANCE_CELL_BUDGET)
    elements = LW.all_elements(element_budget)
    weights = np.array([lang.p**i for i in range(lang.rank)], dtype=np.int64)
    cols = []
    for n in SQ:
        picks = [W.index(vsub(S[piv], n)) for piv in lang.pivots]
        cols.append(elements[:, picks] @ weights)
    return np.unique(np.stack(cols, axis=1), axis=0), coeffs


def _violations(tables: np.ndarray, idx: np.ndarray, coeffs: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask of tables (rows) satisfying every constraint row."""
    ok = np.ones(len(tables), dtype=bool)
    for start in range(0, len(idx), 256):
        chunk = idx[start:start + 256]
        total = np.zeros((len(tables), len(chunk)), dtype=np.int64)
        for j, c in enumerate(coeffs):
            total += c * tables[:, chunk[:, j]]
        ok &= ~np.any(total % p, axis=1)
    return ok


def equivariance_check(rule: LocalRule, caP: CAShift, caQ: CAShift,
                       element_budget: int = DEFAULT_ELEMENT_BUDGET) -> bool:
    """Does the code of ``rule`` map the shift of P into the shift of Q?"""
    if rule.is_zero():
        return True
    idx, coeffs = _equivariance_constraints(rule.language, caP, caQ, element_budget)
    table = np.array([rule.table], dtype=np.int64)
    return bool(_violations(table, idx, coeffs, rule.p)[0])


def additivity_check(rule: LocalRule, budget: int = DEFAULT_ELEMENT_BUDGET) -> bool:
    """``gamma(C + D) = gamma(C) + gamma(D)`` over all pairs in the language."""
    lang = rule.language
    n = lang.size
    if n * n > budget:
        raise BudgetError(f"{n * n} pairs exceed budget {budget}")
    p = lang.p
    digits = coordinate_table(p, lang.rank)
    weights = np.array([p**i for i in range(lang.rank)], dtype=np.int64)
    summed = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    table = np.array(rule.table, dtype=np.int64)
    return bool(np.all(table[summed] == (table[:, None] + table[None, :]) % p))


def functional_eq_witness(rule: LocalRule, caP: CAShift, caQ: CAShift, trials: int = 1024,
                          seed: int = 0, exhaustive_limit: int = 1 << 16) -> Optional[dict]:
    """A family ``C`` on shape(Phi) | shape(Psi) violating
    ``gamma(sum c_Phi(n) C(n)) = sum c_Psi(n) gamma(C(n))``, or ``None``."""
    lang = rule.language
    p = lang.p
    sites = sorted(shape(caP.phi) | shape(caQ.phi))
    cphi = np.array([caP.phi.coeff(n) for n in sites], dtype=np.int64)
    cpsi = np.array([caQ.phi.coeff(n) for n in sites], dtype=np.int64)
    n = lang.size
    total = n ** len(sites)
    if total <= max(exhaustive_limit, trials):
        fam = coordinate_table(n, len(sites))
    else:
        rng = np.random.Generator(np.random.Philox(key=seed))
        fam = rng.integers(0, n, size=(trials, len(sites)), dtype=np.int64)
    digits = coordinate_table(p, lang.rank)
    weights = np.array([p**i for i in range(lang.rank)], dtype=np.int64)
    table = np.array(rule.table, dtype=np.int64)
    combined = np.zeros((len(fam), lang.rank), dtype=np.int64)
    for j, c in enumerate(cphi):
        if c:
            combined += c * digits[fam[:, j]]
    lhs = table[(combined % p) @ weights]
    rhs = (table[fam] * cpsi).sum(axis=1) % p
    bad = np.nonzero(lhs != rhs)[0]
    if not len(bad):
        return None
    row = fam[bad[0]]
    return {tuple(s): lang.element(int(i)) for s, i in zip(sites, row)}


def functional_eq_check(rule: LocalRule, caP: CAShift, caQ: CAShift, trials: int = 1024,
                        seed: int = 0, exhaustive_limit: int = 1 << 16) -> bool:
    return functional_eq_witness(rule, caP, caQ, trials, seed, exhaustive_limit) is None


def functional_eq_families(rule: LocalRule, caP: CAShift, caQ: CAShift) -> int:
    """Number of families an exhaustive functional-equation check covers."""
    return rule.language.size ** len(shape(caP.phi) | shape(caQ.phi))


def poly_map_check(caP: CAShift, caQ: CAShift, R: LaurentPoly) -> bool:
    """Does ``x -> R x`` send the shift of P into the shift of Q (``P | Q R``)?"""
    return ideal_member(caQ.P * R, caP)


@dataclass
class FoundRule:
    rule: LocalRule
    additive: bool
    dual: Optional[LaurentPoly] = None

    def to_json(self):
        out = {"rule": self.rule.to_json(), "additive": self.additive}
        if self.dual is not None:
            out["dual"] = str(self.dual)
        return out


@dataclass
class HomSearchResult:
    rules: list
    method: str
    candidates: int
    budget: int
    shape_contained: bool

    def to_json(self) -> dict:
        return {
            "rules": [f.rule.to_json() if f.rule.is_zero() else f.to_json() for f in self.rules],
            "all_additive": all(f.additive for f in self.rules),
            "method": self.method,
            "candidates": self.candidates,
            "budget": self.budget,
            "shape_contained": self.shape_contained,
        }


def _tables_from_nullspace(basis: list, ncols: int, p: int, budget: int) -> np.ndarray:
    k = len(basis)
    if p**k > budget:
        raise BudgetError(f"{p**k} equivariant tables exceed budget {budget}")
    if not k:
        return np.zeros((1, ncols), dtype=np.int64)
    return coordinate_table(p, k) @ np.array(basis, dtype=np.int64) % p


def hom_search(caP: CAShift, caQ: CAShift, S: Iterable[Exponent], budget: int = DEFAULT_RULE_BUDGET,
               method: str = "exhaustive") -> HomSearchResult:
    """All 0-fixing local rules on ``S`` whose code maps P's shift into Q's.

    ``method="exhaustive"`` filters every table (``p^(|L_S|-1)`` of them);
    ``method="linear"`` solves the same linear conditions directly.  When
    ``S(P)`` is not inside ``S(Q)`` only the zero rule may survive.
    """
    if (caP.p, caP.d) != (caQ.p, caQ.d):
        raise ValueError("shifts live over different rings")
    lang = language(caP, S)
    p = caP.p
    n = lang.size
    idx, coeffs = _equivariance_constraints(lang, caP, caQ)
    if method == "exhaustive":
        count = p ** (n - 1)
        if count > budget:
            raise BudgetError(f"{count} candidate rules exceed budget {budget}")
        tables = np.hstack([np.zeros((count, 1), dtype=np.int64), coordinate_table(p, n - 1)])
        tables = tables[_violations(tables, idx, coeffs, p)]
    elif method == "linear":
        count = p ** (n - 1)
        rows = []
        for tup in idx:
            row = [0] * (n - 1)
            for i, c in zip(tup, coeffs):
                if i:
                    row[i - 1] = (row[i - 1] + c) % p
            rows.append(row)
        sol = _tables_from_nullspace(linalg.nullspace(rows, n - 1, p), n - 1, p, budget)
        tables = np.hstack([np.zeros((len(sol), 1), dtype=np.int64), sol])
        order = np.lexsort(tables.T) if len(tables) > 1 else np.arange(len(tables))
        tables = tables[order]
    else:
        raise ValueError(f"unknown method {method!r}")
    found = []
    for t in tables:
        rule = LocalRule(lang, tuple(int(v) for v in t))
        additive = additivity_check(rule)
        dual = canonical_residue(rule.polynomial(), caP) if additive else None
        found.append(FoundRule(rule, additive, dual))
    contained = caP.shape() <= caQ.shape()
    if not contained and any(not f.rule.is_zero() for f in found):
        raise TheoremViolation(f"nonzero rule between {caP} and {caQ} although S(P) is not in S(Q)")
    return HomSearchResult(found, method, count, budget, contained)


# ------------------------------------------------------------------ dual side


@dataclass(frozen=True)
class DualHom:
    """Residue class of ``R`` modulo ``<P>``: the dual map ``1 -> R``."""

    representative: LaurentPoly
    witness: LaurentPoly

    def to_json(self) -> str:
        return str(self.representative)


def dual_hom_search(caP: CAShift, caQ: CAShift, support_bound: Iterable[Exponent],
                    budget: int = DEFAULT_ELEMENT_BUDGET) -> list[DualHom]:
    """Classes mod ``<P>`` of all ``R`` supported in the bound with ``P | Q R``.

    Both conditions are linear in the coefficients of ``R``, so the search runs
    over a kernel and its image rather than all ``p^|bound|`` polynomials.
    """
    bound = sorted({tuple(b) for b in support_bound})
    if len(bound) > 16:
        raise BudgetError(f"support bound has {len(bound)} points, limit 16")
    p, d = caP.p, caP.d
    if not bound:
        return [DualHom(LaurentPoly.zero(p, d), LaurentPoly.zero(p, d))]
    k = max(0, -min(b[-1] for b in bound))
    monos = [LaurentPoly.monomial(p, d, b) for b in bound]

    def vectors(polys):
        keys = sorted(set().union(*(q.support() for q in polys)))
        return [[q.coeff(key) for q in polys] for key in keys]

    images_QR = [substitute_time(caQ.P * m, caP, k)[0] for m in monos]
    kernel = linalg.nullspace(vectors(images_QR), len(bound), p)
    if not kernel:
        return [DualHom(LaurentPoly.zero(p, d), LaurentPoly.zero(p, d))]
    residues = [substitute_time(m, caP, k)[0] for m in monos]
    # image of each kernel vector in F_p[x'] (class coordinates), augmented by R itself
    res_keys = sorted(set().union(*(q.support() for q in residues)))
    res_mat = [[q.coeff(key) for key in res_keys] for q in residues]
    augmented = []
    for v in kernel:
        image = [sum(v[i] * res_mat[i][j] for i in range(len(bound))) % p for j in range(len(res_keys))]
        augmented.append(image + list(v))
    basis, pivots = linalg.rref(augmented, len(res_keys) + len(bound), p)
    reps = [row[len(res_keys):] for row, piv in zip(basis, pivots) if piv < len(res_keys)]
    if p ** len(reps) > budget:
        raise BudgetError(f"{p ** len(reps)} classes exceed budget {budget}")
    out = []
    seen = set()
    for coords in coordinate_table(p, len(reps)):
        vec = [0] * len(bound)
        for a, r in zip(coords, reps):
            if a:
                vec = [(x + int(a) * y) % p for x, y in zip(vec, r)]
        R = LaurentPoly(p, d, {b: c for b, c in zip(bound, vec) if c})
        if not poly_map_check(caP, caQ, R):
            raise ArithmeticError(f"kernel element {R} fails the direct ideal check")
        rep = canonical_residue(R, caP)
        if rep not in seen:
            seen.add(rep)
            out.append(DualHom(rep, R))
    return out


def verify_unit_pair(caP: CAShift, R: LaurentPoly, Rinv: LaurentPoly) -> bool:
    """``R * Rinv = 1`` modulo ``<P>``."""
    return ideal_member(R * Rinv - 1, caP)


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    n = p - 1
    primes = []
    f, m = 2, n
    while f * f <= m:
        if m % f == 0:
            primes.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        primes.append(m)
    return next(g for g in range(2, p) if all(pow(g, n // q, p) != 1 for q in primes))


@dataclass
class AutDescription:
    """Units of ``F_p[X^+-1]/<P>``: ``Z/(p-1)`` times a free abelian group.

    ``time_expression`` records ``X_d = unit * X^monomial * prod f_j^e_j``.
    """

    p: int
    torsion_order: int
    torsion_generator: int
    free_generators: list
    inverses: list
    factorization: Factorization
    monomial_only: bool
    factors_asserted: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.free_generators)

    def to_json(self) -> dict:
        fac = self.factorization
        return {
            "torsion": {"order": self.torsion_order, "generator": self.torsion_generator},
            "rank": self.rank,
            "free_generators": [str(g) for g in self.free_generators],
            "inverses": [str(g) for g in self.inverses],
            "time_expression": {
                "unit": fac.unit,
                "monomial": list(fac.monomial) if fac.monomial is not None else None,
                "factors": [[str(g), e] for g, e in fac.factors],
            },
            "monomial_only": self.monomial_only,
            "factors_asserted": self.factors_asserted,
        }


def aut_group(caP: CAShift, factor_hint: Optional[Factorization] = None) -> AutDescription:
    """Generators of the automorphism group via the units of the dual module."""
    p, d = caP.p, caP.d
    phi = caP.phi
    if factor_hint is None:
        if len(phi.variables()) > 1:
            raise ValueError("Phi is multivariate; supply a factor hint")
        fac = univariate_factor(phi)
        asserted = False
    else:
        fac = verify_factor_hint(phi, factor_hint)
        asserted = True
    mono = fac.monomial if fac.monomial is not None else (0,) * d
    time_inv = LaurentPoly.monomial(p, d, (0,) * (d - 1) + (-1,))
    gens, invs = [], []
    for i in range(1, d):
        x = LaurentPoly.variable(p, d, i)
        gens.append(x)
        invs.append(x.inverse_monomial())
    for j, (f, e) in enumerate(fac.factors):
        cof = LaurentPoly.monomial(p, d, mono, fac.unit) * f ** (e - 1)
        for i, (g, k) in enumerate(fac.factors):
            if i != j:
                cof = cof * g**k
        gens.append(f)
        invs.append(cof * time_inv)
    for g, h in zip(gens, invs):
        if not verify_unit_pair(caP, g, h):
            raise ArithmeticError(f"constructed inverse of {g} fails")
    monomial_only = len(fac.factors) == 1 and fac.factors[0][1] == 1
    return AutDescription(p, p - 1, primitive_root(p), gens, invs, fac, monomial_only, asserted)
