"""Exact sparse multivariate polynomials, monomial orders, multivariate
division, Buchberger's algorithm, reduced Groebner bases, unsatisfiability
certification, and complete solving of tiny zero-dimensional systems by
lex elimination.

Monomials are exponent tuples, one entry per system variable.  Polynomials
map monomials to nonzero field coefficients; the coefficient field is
anything the ``fields`` helpers understand (Gaussian rationals ``QI``,
``GF(p)``, or inexact ``complex`` for evaluation-only use).
"""

from __future__ import annotations

import heapq
import itertools
import time

import numpy as np

from .errors import (InvalidParametersError, NotZeroDimensionalError,
                     ResourceLimitError)
from .fields import QI, is_exact, one_like

# ---------------------------------------------------------------------------
# monomials


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True when x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    """Exponent vector of x^a / x^b (caller ensures divisibility)."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a):
    return sum(a)


class MonomialOrder:
    """A monomial order: lex, grlex or grevlex, with an optional variable
    priority permutation (``perm[0]`` is the most significant variable)."""

    def __init__(self, kind="grevlex", perm=None, nvars=None):
        if kind not in ("lex", "grlex", "grevlex"):
            raise InvalidParametersError(f"unknown monomial order {kind!r}")
        self.kind = kind
        if perm is None and nvars is not None:
            perm = tuple(range(nvars))
        self.perm = tuple(perm) if perm is not None else None

    def _p(self, n):
        if self.perm is not None:
            if len(self.perm) != n:
                raise InvalidParametersError("order permutation length mismatch")
            return self.perm
        return range(n)

    def key(self, mono):
        """Sort key: key(a) > key(b) iff x^a > x^b."""
        p = self._p(len(mono))
        if self.kind == "lex":
            return tuple(mono[i] for i in p)
        if self.kind == "grlex":
            return (sum(mono),) + tuple(mono[i] for i in p)
        # grevlex: higher degree first; ties broken by the *smaller*
        # exponent on the least significant variable winning.
        return (sum(mono),) + tuple(-mono[i] for i in reversed(list(p)))

    def gt(self, a, b):
        return self.key(a) > self.key(b)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r}, perm={self.perm})"


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
GREVLEX = MonomialOrder("grevlex")


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse multivariate polynomial; ``terms`` maps exponent tuples to
    nonzero coefficients.  The zero polynomial has an empty map."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms, nvars, prune=True):
        if prune:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = terms
        self.nvars = nvars

    @classmethod
    def zero(cls, nvars):
        return cls({}, nvars, prune=False)

    @classmethod
    def from_terms(cls, pairs, nvars):
        terms = {}
        for m, c in pairs:
            m = tuple(m)
            acc = terms.get(m)
            terms[m] = c if acc is None else acc + c
        return cls(terms, nvars)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    def __add__(self, other):
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m)
            s = c if s is None else s + c
            if s:
                res[m] = s
            elif m in res:
                del res[m]
        return Polynomial(res, self.nvars, prune=False)

    def __sub__(self, other):
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m)
            s = -c if s is None else s - c
            if s:
                res[m] = s
            elif m in res:
                del res[m]
        return Polynomial(res, self.nvars, prune=False)

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.nvars,
                          prune=False)

    def __mul__(self, other):
        res = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                s = res.get(m)
                s = c if s is None else s + c
                if s:
                    res[m] = s
                elif m in res:
                    del res[m]
        return Polynomial(res, self.nvars, prune=False)

    def scale_term(self, coeff, mono):
        """coeff * x^mono * self."""
        if not coeff:
            return Polynomial.zero(self.nvars)
        return Polynomial({mono_mul(m, mono): c * coeff
                           for m, c in self.terms.items()}, self.nvars,
                          prune=False)

    def sub_scaled(self, other, coeff, mono):
        """self - coeff * x^mono * other, in one pass."""
        res = dict(self.terms)
        for m, c in other.terms.items():
            mm = mono_mul(m, mono)
            s = res.get(mm)
            d = c * coeff
            s = -d if s is None else s - d
            if s:
                res[mm] = s
            elif mm in res:
                del res[mm]
        return Polynomial(res, self.nvars, prune=False)

    def leading(self, order):
        """(monomial, coefficient) of the leading term under ``order``."""
        if not self.terms:
            raise InvalidParametersError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def monic(self, order):
        _, lc = self.leading(order)
        one = one_like(lc)
        if lc == one:
            return self
        return Polynomial({m: c / lc for m, c in self.terms.items()},
                          self.nvars, prune=False)

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def constant_term(self):
        z = (0,) * self.nvars
        return self.terms.get(z)

    def is_constant(self):
        return all(sum(m) == 0 for m in self.terms)

    def variables(self):
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def derivative(self, var):
        res = {}
        for m, c in self.terms.items():
            e = m[var]
            if e == 0:
                continue
            mm = m[:var] + (e - 1,) + m[var + 1:]
            mult = c
            for _ in range(e - 1):  # exact integer multiple e*c, field-agnostic
                mult = mult + c
            res[mm] = res[mm] + mult if mm in res else mult
        return Polynomial(res, self.nvars)

    def eval_complex(self, z):
        """Evaluate at a complex vector (exact coefficients are converted)."""
        total = 0j
        for m, c in self.terms.items():
            v = complex(c) if not isinstance(c, complex) else c
            for i, e in enumerate(m):
                if e:
                    v *= z[i] ** e
            total += v
        return total

    def substitute_partial(self, values):
        """Substitute complex numbers for a subset of variables
        (``values``: var index -> complex); returns a complex-coefficient
        polynomial in the same ambient variable set."""
        res = {}
        for m, c in self.terms.items():
            v = complex(c) if not isinstance(c, complex) else c
            mm = list(m)
            for i, z in values.items():
                e = m[i]
                if e:
                    v *= z ** e
                    mm[i] = 0
            mm = tuple(mm)
            res[mm] = res.get(mm, 0j) + v
        return Polynomial({m: c for m, c in res.items() if abs(c) > 0.0},
                          self.nvars, prune=False)

    def map_coefficients(self, fn):
        return Polynomial({m: fn(c) for m, c in self.terms.items()}, self.nvars)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)})"


# ---------------------------------------------------------------------------
# division and S-polynomials


def _content_scale(coeffs):
    """(den, g) such that multiplying every QI by den/g yields primitive
    Gaussian integers; None when not applicable."""
    from math import gcd, lcm
    den = 1
    for c in coeffs:
        if not isinstance(c, QI):
            return None
        den = lcm(den, c.d)
    g = 0
    for c in coeffs:
        scale = den // c.d
        g = gcd(g, abs(c.a * scale))
        g = gcd(g, abs(c.b * scale))
    if g == 0:
        return None
    return den, g


def _apply_scale(terms, den, g):
    return {m: QI(c.a * (den // c.d) // g, c.b * (den // c.d) // g)
            for m, c in terms.items()}


def _strip_content(poly):
    """Scale a QI-coefficient polynomial to a primitive Gaussian-integer
    polynomial (nonzero scalar multiples are interchangeable inside basis
    construction; this is what keeps intermediate coefficients small)."""
    if not poly.terms:
        return poly
    scale = _content_scale(poly.terms.values())
    if scale is None:
        return poly
    return Polynomial(_apply_scale(poly.terms, *scale), poly.nvars, prune=False)


def _remainder(p, divisors, lts, order):
    """Remainder of ``p`` on division by ``divisors`` (quotients are not
    tracked).  ``lts`` carries the precomputed leading terms.  Plain field
    arithmetic: per-coefficient rational reduction is what keeps the
    intermediate integers near the size of the true result."""
    n = p.nvars
    work = p
    remainder = {}
    while work:
        lm, lc = work.leading(order)
        for i, (fm, fc) in enumerate(lts):
            if mono_divides(fm, lm):
                work = work.sub_scaled(divisors[i], lc / fc, mono_div(lm, fm))
                break
        else:
            remainder[lm] = lc
            t = dict(work.terms)
            del t[lm]
            work = Polynomial(t, n, prune=False)
    return Polynomial(remainder, n, prune=False)


def divide(p, divisors, order, verify=False):
    """Multivariate division of ``p`` by an ordered tuple of divisors.

    Returns ``(quotients, remainder)`` with ``p == sum(q_i f_i) + r`` and no
    monomial of ``r`` divisible by any divisor's leading term.  The result
    depends on the divisor order.  With ``verify=True`` the identity is
    re-checked exactly (exact fields only).
    """
    divisors = list(divisors)
    if any(not f for f in divisors):
        raise InvalidParametersError("zero divisor")
    n = p.nvars
    lts = [f.leading(order) for f in divisors]
    quotients = [Polynomial.zero(n) for _ in divisors]
    remainder = {}
    work = p
    while work:
        lm, lc = work.leading(order)
        for i, (fm, fc) in enumerate(lts):
            if mono_divides(fm, lm):
                q_mono = mono_div(lm, fm)
                q_coeff = lc / fc
                quotients[i] = quotients[i] + Polynomial(
                    {q_mono: q_coeff}, n, prune=False)
                work = work.sub_scaled(divisors[i], q_coeff, q_mono)
                break
        else:
            remainder[lm] = lc
            t = dict(work.terms)
            del t[lm]
            work = Polynomial(t, n, prune=False)
    r = Polynomial(remainder, n, prune=False)
    if verify:
        acc = r
        for q, f in zip(quotients, divisors):
            acc = acc + q * f
        if acc != p:
            raise AssertionError("division identity violated")
    return quotients, r


def s_polynomial(f, g, order):
    """S(f, g) with the coefficient-bearing LCM convention: the common
    multiple carries the product of the two leading coefficients, so
    S(f,g) = (LCM/LT(f)) f - (LCM/LT(g)) g with LCM = LC(f)LC(g) x^gamma."""
    if not f or not g:
        raise InvalidParametersError("S-polynomial of a zero polynomial")
    fm, fc = f.leading(order)
    gm, gc = g.leading(order)
    gamma = mono_lcm(fm, gm)
    left = f.scale_term(gc, mono_div(gamma, fm))
    right = g.scale_term(fc, mono_div(gamma, gm))
    return left - right


# ---------------------------------------------------------------------------
# Buchberger


class GroebnerBasis:
    """A Groebner basis: generators, the order it was computed under, and
    whether it has been inter-reduced to the unique reduced basis."""

    __slots__ = ("generators", "order", "reduced")

    def __init__(self, generators, order, reduced=False):
        self.generators = list(generators)
        self.order = order
        self.reduced = reduced

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        polys = ", ".join(format_polynomial(g) for g in self.generators)
        return f"GroebnerBasis([{polys}], reduced={self.reduced})"


def _normalize_generator(f, order):
    """Primitive Gaussian-integer scaling for QI polynomials (cheap, keeps
    coefficients small), monic for other exact fields.  The sign is fixed
    from the leading coefficient so equal-up-to-scale results coincide."""
    if isinstance(next(iter(f.terms.values())), QI):
        f = _strip_content(f)
        lc = f.leading(order)[1]
        if lc.a < 0 or (lc.a == 0 and lc.b < 0):
            f = -f
        return f
    return f.monic(order)


def _dube_degree_bound(d, n):
    # worst-case degree of reduced-basis elements; capped to stay usable
    if n <= 2:
        return max(2 * d * d, 16)
    try:
        b = 2 * (d * d // 2 + d) ** (2 ** (n - 2))
    except OverflowError:
        return 10 ** 6
    return min(b, 10 ** 6)


def buchberger(F, order=GREVLEX, strict=False, max_terms=10 ** 6,
               degree_guard=None, deadline=None):
    """Compute a Groebner basis of the ideal generated by ``F``.

    Default mode uses normal pair selection (smallest LCM degree first)
    plus the coprime-leading-term skip criterion.  ``strict=True`` runs the
    plain repeat-until-stable formulation with no criteria, useful for
    step-by-step reproduction of worked examples.  Budgets: total stored
    terms, a degree guard (defaults to the doubly-exponential worst-case
    bound, hard-capped), and an optional wall-clock ``deadline``.
    """
    F = [f for f in F if f]
    if not F:
        raise InvalidParametersError("no nonzero input polynomials")
    if not all(is_exact(next(iter(f.terms.values()))) for f in F):
        raise InvalidParametersError("Buchberger requires an exact field")
    n = F[0].nvars
    if degree_guard is None:
        degree_guard = _dube_degree_bound(max(f.total_degree() for f in F), n)

    def check_budget(G):
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceLimitError("Buchberger deadline exceeded",
                                     basis_size=len(G))
        total = sum(len(g.terms) for g in G)
        if total > max_terms:
            raise ResourceLimitError("Buchberger term budget exceeded",
                                     basis_size=len(G), terms=total)
        worst = max(g.total_degree() for g in G)
        if worst > degree_guard:
            raise ResourceLimitError("Buchberger degree guard exceeded",
                                     basis_size=len(G), degree=worst)

    if strict:
        G = [f for f in F]
        while True:
            added = False
            for i, j in itertools.combinations(range(len(G)), 2):
                s = s_polynomial(G[i], G[j], order)
                if not s:
                    continue
                _, r = divide(s, G, order)
                if r:
                    G.append(r)
                    added = True
                    check_budget(G)
            if not added:
                return GroebnerBasis(G, order)

    # improved Buchberger with the Gebauer-Moeller pair update (coprime and
    # chain criteria applied on pair creation); working polynomials are kept
    # as canonical primitive Gaussian-integer representatives, and tails are
    # continuously reduced against newcomers (sound: leading terms never
    # change, so every element keeps a standard representation)
    polys = []            # all polynomials ever created, indexed
    lts = []

    def intern(h):
        h = _normalize_generator(h, order)
        polys.append(h)
        lts.append(h.leading(order))
        return len(polys) - 1

    def tail_reduce_against(ih, members):
        # shrink members' tails against the newcomer (cheap, keeps reducer
        # coefficients near reduced-basis size; leading terms untouched)
        new_lt = lts[ih][0]
        for ig in members:
            if ig == ih:
                continue
            p = polys[ig]
            head_m, head_c = lts[ig]
            if not any(m != head_m and mono_divides(new_lt, m)
                       for m in p.terms):
                continue
            tail = Polynomial({m: c for m, c in p.terms.items()
                               if m != head_m}, p.nvars, prune=False)
            red = _remainder(tail, [polys[ih]], [lts[ih]], order)
            combined = red + Polynomial({head_m: head_c}, p.nvars, prune=False)
            polys[ig] = _normalize_generator(combined, order)
            lts[ig] = polys[ig].leading(order)

    def update(G, B, ih):
        # [BW] page 230: filter new and old critical pairs around h
        mh = lts[ih][0]
        C = set(G)
        D = set()
        while C:
            ig = C.pop()
            lcm_hg = mono_lcm(mh, lts[ig][0])

            def lcm_divides(ip):
                return mono_divides(mono_lcm(mh, lts[ip][0]), lcm_hg)

            if mono_mul(mh, lts[ig][0]) == lcm_hg or (
                    not any(lcm_divides(ipx) for ipx in C)
                    and not any(lcm_divides(pr[1]) for pr in D)):
                D.add((ih, ig))
        E = set()
        while D:
            ih0, ig = D.pop()
            if mono_mul(mh, lts[ig][0]) != mono_lcm(mh, lts[ig][0]):
                E.add((ih0, ig))
        B_new = set()
        while B:
            ig1, ig2 = B.pop()
            lcm12 = mono_lcm(lts[ig1][0], lts[ig2][0])
            if not mono_divides(mh, lcm12) \
                    or mono_lcm(lts[ig1][0], mh) == lcm12 \
                    or mono_lcm(lts[ig2][0], mh) == lcm12:
                B_new.add((ig1, ig2))
        B_new |= E
        G_new = {ig for ig in G if not mono_divides(mh, lts[ig][0])}
        G_new.add(ih)
        return G_new, B_new

    # inter-reduce the inputs first ([BW] page 203)
    current = [_normalize_generator(f, order) for f in F]
    while True:
        reduced = []
        for i, p in enumerate(current):
            if reduced:
                r = _remainder(p, reduced,
                                      [q.leading(order) for q in reduced], order)
            else:
                r = p
            if r:
                reduced.append(_normalize_generator(r, order))
        if reduced == current:
            break
        current = reduced

    G = set()
    CP = set()
    for h in sorted(current, key=lambda p: order.key(p.leading(order)[0])):
        G, CP = update(G, CP, intern(h))

    while CP:
        pair = min(CP, key=lambda pr: order.key(
            mono_lcm(lts[pr[0]][0], lts[pr[1]][0])))
        CP.remove(pair)
        ig1, ig2 = pair
        s = s_polynomial(polys[ig1], polys[ig2], order)
        if not s:
            continue
        reducers = sorted(G, key=lambda ig: order.key(lts[ig][0]))
        r = _remainder(s, [polys[ig] for ig in reducers],
                              [lts[ig] for ig in reducers], order)
        if r:
            ih = intern(r)
            check_budget([polys[ig] for ig in G] + [r])
            if r.is_constant():
                # ideal is the whole ring; nothing else can matter
                return GroebnerBasis([r], order)
            if deadline is not None and time.monotonic() > deadline:
                raise ResourceLimitError("Buchberger deadline exceeded",
                                         basis_size=len(G))
            G, CP = update(G, CP, ih)
            tail_reduce_against(ih, sorted(G))

    return GroebnerBasis([polys[ig] for ig in sorted(G)], order)


def reduce_basis(gb):
    """Inter-reduce a Groebner basis to the unique reduced basis: monic
    generators, none of whose monomials is divisible by another generator's
    leading term.  Output order is canonical (descending leading terms)."""
    order = gb.order
    gens = [g.monic(order) for g in gb.generators if g]
    if not gens:
        raise InvalidParametersError("empty basis")
    # minimalize: drop generators whose LT is divisible by another LT
    gens.sort(key=lambda g: order.key(g.leading(order)[0]))
    minimal = []
    lts = []
    for g in gens:
        lm = g.leading(order)[0]
        if not any(mono_divides(other, lm) for other in lts):
            minimal.append(g)
            lts.append(lm)
    # fully inter-reduce (pseudo-reduction keeps coefficients small; the
    # remainder against a Groebner basis is unique up to scaling, so this
    # converges and the final monic pass lands on the reduced basis)
    minimal = [_normalize_generator(g, order) for g in minimal]
    changed = True
    while changed:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1:]
            if not others:
                continue
            lts_others = [g.leading(order) for g in others]
            r = _remainder(minimal[i], others, lts_others, order)
            if not r:
                minimal = others
                changed = True
                break
            r = _normalize_generator(r, order)
            if r != minimal[i] and r != -minimal[i]:
                minimal[i] = r
                changed = True
    minimal = [g.monic(order) for g in minimal]
    minimal.sort(key=lambda g: order.key(g.leading(order)[0]), reverse=True)
    return GroebnerBasis(minimal, order, reduced=True)


def is_unsat(F, order=GREVLEX, **budgets):
    """True iff the system has no common zero over the complex numbers,
    certified by the reduced Groebner basis being {1}.  Exact fields only;
    the certificate is stable under extension of the coefficient field."""
    gb = buchberger(F, order, **budgets)
    # fast path: any constant generator already certifies the unit ideal
    if any(g.is_constant() and g for g in gb.generators):
        return True
    reduced = reduce_basis(gb)
    return (len(reduced.generators) == 1
            and reduced.generators[0].is_constant())


# ---------------------------------------------------------------------------
# solving tiny zero-dimensional systems via lex elimination


def _staircase_bounds(basis, order):
    """Per-variable pure-power exponents from the leading terms, or None
    where a variable has no pure power (positive-dimensional ideal)."""
    n = basis[0].nvars
    bounds = [None] * n
    for g in basis:
        lm = g.leading(order)[0]
        nz = [i for i, e in enumerate(lm) if e]
        if len(nz) == 1:
            i = nz[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
    return bounds


def _standard_monomials(basis, order):
    """Monomials outside the leading-term ideal (a quotient-space basis);
    requires a finite staircase."""
    n = basis[0].nvars
    bounds = _staircase_bounds(basis, order)
    if any(b is None for b in bounds):
        missing = [i for i, b in enumerate(bounds) if b is None]
        raise NotZeroDimensionalError(
            f"no pure-power leading term for variables {missing}")
    lts = [g.leading(order)[0] for g in basis]
    std = []
    for mono in itertools.product(*[range(b) for b in bounds]):
        if not any(mono_divides(lt, mono) for lt in lts):
            std.append(mono)
    return std


def _fglm_to_lex(reduced_gb):
    """Convert a reduced Groebner basis of a zero-dimensional ideal to the
    reduced lex basis by linear algebra over the quotient space: enumerate
    monomials in increasing lex order; each one whose normal form is
    linearly dependent on its predecessors yields a lex basis element."""
    basis = reduced_gb.generators
    src_order = reduced_gb.order
    n = basis[0].nvars
    lex = MonomialOrder("lex", perm=tuple(range(n)))
    std = _standard_monomials(basis, src_order)
    index = {m: i for i, m in enumerate(std)}
    D = len(std)
    one = one_like(next(iter(basis[0].terms.values())))

    def nf_vector(mono):
        _, r = divide(Polynomial({mono: one}, n, prune=False), basis, src_order)
        vec = [None] * D
        for m, c in r.terms.items():
            vec[index[m]] = c
        return vec

    # exact echelon rows: (pivot index, vector, combination over processed
    # lex-standard monomials)
    echelon = []
    lex_standard = []       # monomials whose NF vectors are independent
    lex_basis = []
    heap = [(lex.key((0,) * n), (0,) * n)]
    seen = {(0,) * n}
    while heap:
        _, mono = heapq.heappop(heap)
        if any(mono_divides(g.leading(lex)[0], mono) for g in lex_basis):
            continue
        vec = nf_vector(mono)
        comb = [None] * len(lex_standard)
        for pivot, row, row_comb in echelon:
            c = vec[pivot]
            if c is None or not c:
                continue
            for i, x in enumerate(row):
                if x is None or not x:
                    continue
                prod = c * x
                vec[i] = -prod if vec[i] is None else vec[i] - prod
            for i, x in enumerate(row_comb):
                if x is None or not x:
                    continue
                prod = c * x
                comb[i] = -prod if comb[i] is None else comb[i] - prod
        pivot = next((i for i, x in enumerate(vec) if x is not None and x), None)
        if pivot is None:
            # dependent: mono - sum(comb_j * std mono j) is a lex basis
            # element with leading monomial mono
            terms = {mono: one}
            for j, c in enumerate(comb):
                if c is not None and c:
                    terms[lex_standard[j]] = c
            lex_basis.append(Polynomial(terms, n, prune=False))
            continue
        inv = vec[pivot]
        vec = [None if x is None else x / inv for x in vec]
        comb = [None if x is None else x / inv for x in comb]
        # record that this row is (NF of mono) - previous combination; the
        # combination column for mono itself is -1/inv relative to the new
        # basis element ordering below
        comb = comb + [one / inv]
        for e_i in range(len(echelon)):
            p, row, rc = echelon[e_i]
            echelon[e_i] = (p, row, rc + [None])
        echelon.append((pivot, vec, comb))
        lex_standard.append(mono)
        for v in range(n):
            nxt = mono[:v] + (mono[v] + 1,) + mono[v + 1:]
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (lex.key(nxt), nxt))
    return GroebnerBasis(lex_basis, lex, reduced=True)


def _univariate_coeffs(poly, var):
    """Complex coefficient list (highest degree first) of a polynomial that
    involves only ``var``."""
    deg = max((m[var] for m in poly.terms), default=0)
    coeffs = [0j] * (deg + 1)
    for m, c in poly.terms.items():
        coeffs[deg - m[var]] += complex(c)
    return coeffs


def _newton_polish(polys, z, max_iter=50, tol=1e-13):
    polys = list(polys)
    n = len(z)
    derivs = [[p.derivative(v) for v in range(p.nvars)] for p in polys]
    z = np.asarray(z, dtype=complex)
    for _ in range(max_iter):
        f = np.array([p.eval_complex(z) for p in polys])
        if np.max(np.abs(f)) < tol:
            break
        J = np.array([[derivs[i][v].eval_complex(z) for v in range(n)]
                      for i in range(len(polys))])
        try:
            if J.shape[0] == J.shape[1]:
                step = np.linalg.solve(J, f)
            else:
                step, *_ = np.linalg.lstsq(J, f, rcond=None)
        except np.linalg.LinAlgError:
            break
        z = z - step
    return z


def solve_lex(F, max_vars=5, residual_tol=1e-10, **budgets):
    """Full complex solution set of a zero-dimensional system with at most
    ``max_vars`` variables: lex triangularization (a cheap ambient-order
    basis converted to the reduced lex basis by exact linear algebra over
    the quotient space), univariate root isolation by companion-matrix
    eigenvalues, back-substitution with residual filtering, and a final
    Newton polish against the input system."""
    F = [f for f in F if f]
    if not F:
        raise InvalidParametersError("no nonzero input polynomials")
    n = F[0].nvars
    if n > max_vars:
        raise ResourceLimitError(f"solve_lex limited to {max_vars} variables",
                                 nvars=n)
    order = MonomialOrder("lex", perm=tuple(range(n)))
    grevlex = MonomialOrder("grevlex", perm=tuple(range(n)))
    reduced = reduce_basis(buchberger(F, grevlex, **budgets))
    gens = reduced.generators
    if len(gens) == 1 and gens[0].is_constant():
        return []  # unit ideal: no solutions
    # raises NotZeroDimensionalError on an infinite staircase
    basis = _fglm_to_lex(reduced).generators

    solutions = []

    def extend(var, env):
        # variables var+1..n-1 are assigned in env; solve for ``var``
        candidates = [g for g in basis
                      if g.variables() <= set(range(var, n))]
        reduced = [g.substitute_partial(env) for g in candidates]
        reduced = [g for g in reduced if g]
        univs = [g for g in reduced if g.variables() <= {var}]
        univs = [g for g in univs
                 if max((m[var] for m in g.terms), default=0) > 0]
        if not univs:
            return
        pick = min(univs, key=lambda g: max(m[var] for m in g.terms))
        coeffs = _univariate_coeffs(pick, var)
        scale = max(abs(c) for c in coeffs)
        roots = np.roots(np.array(coeffs) / scale)
        for root in roots:
            env2 = dict(env)
            env2[var] = complex(root)
            ok = True
            for g in reduced:
                val = g.substitute_partial({var: complex(root)})
                resid = abs(val.constant_term() or 0.0)
                size = max(abs(complex(c)) for c in g.terms.values())
                if resid > 1e-6 * max(size, 1.0):
                    ok = False
                    break
            if not ok:
                continue
            if var == 0:
                solutions.append(np.array([env2[i] for i in range(n)]))
            else:
                extend(var - 1, env2)

    extend(n - 1, {})

    # polish on the original system and filter/deduplicate
    final = []
    for z in solutions:
        z = _newton_polish(F, z)
        resid = max(abs(p.eval_complex(z)) for p in F)
        if resid < residual_tol:
            final.append(z)
    dedup = []
    for z in final:
        if not any(np.max(np.abs(z - w)) < 1e-8 * (1 + np.max(np.abs(z)))
                   for w in dedup):
            dedup.append(z)
    return dedup


# ---------------------------------------------------------------------------
# text format: sum of coeff*x1^e1*... terms, rational num/den, i for the
# imaginary unit; composite complex coefficients are parenthesized.


def _format_coeff(c):
    if isinstance(c, QI):
        re, im = c.real, c.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"({re}{sign}{abs(im)}i)"
    if isinstance(c, complex):
        if c.imag == 0:
            return repr(c.real)
        if c.real == 0:
            return f"{c.imag!r}i"
        sign = "+" if c.imag >= 0 else "-"
        return f"({c.real!r}{sign}{abs(c.imag)!r}i)"
    return str(c)


def format_polynomial(poly, order=GREVLEX):
    if not poly.terms:
        return "0"
    monos = sorted(poly.terms, key=order.key, reverse=True)
    parts = []
    for m in monos:
        c = poly.terms[m]
        factors = [f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}"
                   for i, e in enumerate(m) if e]
        body = "*".join([_format_coeff(c)] + factors)
        parts.append(body)
    return " + ".join(parts)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise InvalidParametersError(
                f"expected {ch!r} at position {self.pos} in polynomial text")
        self.pos += 1

    def number(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise InvalidParametersError(
                f"expected digits at position {self.pos}")
        return int(self.text[start:self.pos])

    def rational(self):
        num = self.number()
        if self.peek() == "/":
            self.take("/")
            den = self.number()
            return QI.from_fractions(f"{num}/{den}")
        return QI(num)

    def simple_coeff(self):
        # [-] rational ['i'] | [-] 'i'
        neg = False
        while self.peek() in "+-":
            if self.peek() == "-":
                neg = not neg
            self.pos += 1
        if self.peek() == "i":
            self.take("i")
            val = QI(0, 1)
        else:
            val = self.rational()
            if self.peek() == "i":
                self.take("i")
                val = val * QI(0, 1)
        return -val if neg else val

    def coeff(self):
        if self.peek() == "(":
            self.take("(")
            val = self.simple_coeff()
            while self.peek() in "+-":
                val = val + self.simple_coeff()
            self.take(")")
            return val
        return self.simple_coeff()

    def term(self, nvars):
        coeff = QI.ONE
        expo = [0] * nvars
        saw_factor = False
        while True:
            ch = self.peek()
            if ch == "x":
                self.take("x")
                idx = self.number() - 1
                if not 0 <= idx < nvars:
                    raise InvalidParametersError(f"variable x{idx + 1} out of range")
                e = 1
                if self.peek() == "^":
                    self.take("^")
                    e = self.number()
                expo[idx] += e
                saw_factor = True
            elif ch == "(":
                coeff = coeff * self.coeff()
                saw_factor = True
            elif ch in "+-0123456789i":
                if ch in "+-" and saw_factor:
                    break  # separator between terms, not a signed factor
                coeff = coeff * self.simple_coeff()
                saw_factor = True
            else:
                break
            if self.peek() == "*":
                self.take("*")
                continue
            break
        if not saw_factor:
            raise InvalidParametersError(
                f"empty term at position {self.pos}")
        return tuple(expo), coeff


def parse_polynomial(text, nvars):
    """Parse the text format back into an exact-coefficient Polynomial."""
    p = _Parser(text)
    terms = []
    sign = QI.ONE
    if p.peek() == "+":
        p.take("+")
    elif p.peek() == "-":
        p.take("-")
        sign = -QI.ONE
    while True:
        mono, coeff = p.term(nvars)
        terms.append((mono, sign * coeff))
        ch = p.peek()
        if ch == "+":
            p.take("+")
            sign = QI.ONE
        elif ch == "-":
            p.take("-")
            sign = -QI.ONE
        elif ch == "":
            break
        else:
            raise InvalidParametersError(
                f"unexpected character {ch!r} at position {p.pos}")
    return Polynomial.from_terms(terms, nvars)
