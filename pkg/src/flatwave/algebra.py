"""Exact polynomial and factored-rational arithmetic over the integers.

Polynomials wrap FLINT's ``fmpz_mpoly`` (arbitrary-precision coefficients,
sparse terms).  Rational functions keep their denominator as a multiset of
primitive linear forms, the shape every wavefunction formula produces, so no
multivariate gcd is ever needed: common denominators are multiset unions and
cancellation is exact division by one linear atom at a time.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce

from flint import fmpz_mpoly, fmpz_mpoly_ctx

# A prime above 2**61 (the largest prime below 2**64).
FIELD_PRIME = 2**64 - 59


class PoleError(ZeroDivisionError):
    """Evaluation at a point where a denominator atom vanishes."""


@dataclass(frozen=True)
class Variable:
    """``X_i`` for vertex ``i`` or ``Y_e`` for edge id ``e``."""

    kind: str
    label: int | str

    @property
    def name(self) -> str:
        return f"X{self.label}" if self.kind == "X" else f"Y[{self.label}]"

    def __str__(self):
        return self.name


class Ring:
    """An ordered tuple of variables and the FLINT context over it."""

    def __init__(self, variables: Sequence[Variable]):
        self.variables = tuple(variables)
        self.index = {v: i for i, v in enumerate(self.variables)}
        if len(self.index) != len(self.variables):
            raise ValueError("repeated variable")
        self.ctx = fmpz_mpoly_ctx.get(tuple(f"v{i}" for i in range(len(self.variables))), "deglex")

    @classmethod
    @lru_cache(maxsize=None)
    def for_graph_ids(cls, n: int, edge_ids: tuple[str, ...]) -> Ring:
        return cls([Variable("X", i) for i in range(1, n + 1)] + [Variable("Y", e) for e in edge_ids])

    @classmethod
    def for_graph(cls, g) -> Ring:
        return cls.for_graph_ids(g.n, g.edge_ids)

    def __len__(self):
        return len(self.variables)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.variables == other.variables

    def __hash__(self):
        return hash(self.variables)

    def __repr__(self):
        return f"Ring({', '.join(v.name for v in self.variables)})"

    def X(self, i: int) -> int:
        return self.index[Variable("X", i)]

    def Y(self, e: str) -> int:
        return self.index[Variable("Y", e)]


def _format_terms(ring: Ring, terms: Iterable[tuple[tuple[int, ...], int]]) -> str:
    pieces = []
    for exps, c in terms:
        factors = []
        for i, k in enumerate(exps):
            if k == 1:
                factors.append(ring.variables[i].name)
            elif k > 1:
                factors.append(f"{ring.variables[i].name}^{k}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces) if pieces else "0"


def _term_order(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Polynomial:
    """Integer polynomial in the variables of a :class:`Ring`.

    Printed with terms in descending graded-lexicographic order, where the
    ring's first variable is the most significant.
    """

    __slots__ = ("ring", "raw")

    def __init__(self, ring: Ring, raw: fmpz_mpoly):
        self.ring = ring
        self.raw = raw

    @classmethod
    def constant(cls, ring: Ring, c: int) -> Polynomial:
        return cls(ring, ring.ctx.constant(c))

    @classmethod
    def variable(cls, ring: Ring, i: int) -> Polynomial:
        return cls(ring, ring.ctx.gens()[i])

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[tuple[int, ...], int]) -> Polynomial:
        return cls(ring, ring.ctx.from_dict({tuple(k): int(c) for k, c in terms.items() if c}))

    def _lift(self, other) -> fmpz_mpoly:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other.raw
        if isinstance(other, LinearForm):
            return other.poly.raw
        if isinstance(other, int):
            return self.ring.ctx.constant(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self.raw - o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, o - self.raw)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else Polynomial(self.ring, self.raw * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(self.ring, -self.raw)

    def __pow__(self, k: int):
        return Polynomial(self.ring, self.raw**k)

    def __eq__(self, other):
        if isinstance(other, (Polynomial, LinearForm, int)):
            o = self._lift(other)
            return self.raw == o
        return NotImplemented

    __hash__ = None

    def __len__(self):
        return len(self.raw)

    def is_zero(self) -> bool:
        return self.raw.is_zero()

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return int(self.raw.total_degree())

    def terms(self) -> dict[tuple[int, ...], int]:
        return {k: int(c) for k, c in self.raw.to_dict().items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms().items(), key=lambda kv: _term_order(kv[0]), reverse=True)

    def content(self) -> int:
        return int(self.raw.content())

    def __str__(self):
        return _format_terms(self.ring, self.sorted_terms())

    def __repr__(self):
        return f"Polynomial({self})"

    def divexact(self, other: Polynomial | LinearForm) -> Polynomial | None:
        """The exact quotient, or ``None`` when ``other`` does not divide."""
        q, r = divmod(self.raw, self._lift(other))
        return Polynomial(self.ring, q) if r.is_zero() else None

    def evaluate(self, values: Sequence) -> Fraction:
        """Exact value at a point given as one int/Fraction per ring variable."""
        fr = [Fraction(v) for v in values]
        if all(v.denominator == 1 for v in fr):
            return Fraction(int(self.raw(*[int(v) for v in fr])))
        q = math.lcm(*(v.denominator for v in fr))
        tctx = fmpz_mpoly_ctx.get(("t",), "deglex")
        (t,) = tctx.gens()
        uni = self.raw.compose(*[int(v * q) * t for v in fr], ctx=tctx)
        return sum((Fraction(int(c), q ** int(k[0])) for k, c in uni.to_dict().items()), Fraction(0))

    def evaluate_mod(self, values: Sequence[int], p: int = FIELD_PRIME) -> int:
        return int(self.raw(*values)) % p

    def substitute(self, images: Sequence[Polynomial], ring: Ring | None = None) -> Polynomial:
        """Replace the i-th variable by ``images[i]`` (all in ``ring``)."""
        ring = ring or self.ring
        return Polynomial(ring, self.raw.compose(*[im.raw for im in images], ctx=ring.ctx))

    def substitute_shift(self, var: int, shift: LinearForm) -> Polynomial:
        return substitute_shift(self, var, shift)

    def rename(self, ring: Ring, mapping: Sequence[int]) -> Polynomial:
        """Move into ``ring``, sending variable ``i`` to ``ring`` variable ``mapping[i]``."""
        gens = ring.ctx.gens()
        if not self.ring.variables:
            return Polynomial(ring, ring.ctx.constant(int(self.raw.to_dict().get((), 0))))
        return Polynomial(ring, self.raw.compose(*[gens[j] for j in mapping], ctx=ring.ctx))


class LinearForm:
    """A homogeneous linear polynomial, stored as its coefficient vector.

    Hashable, so it can serve as a denominator atom.  A single variable is the
    form with one unit coefficient.
    """

    __slots__ = ("ring", "coeffs", "__dict__")

    def __init__(self, ring: Ring, coeffs: Sequence[int]):
        self.ring = ring
        self.coeffs = tuple(int(c) for c in coeffs)
        if len(self.coeffs) != len(ring):
            raise ValueError("coefficient vector does not match the ring")

    @classmethod
    def variable(cls, ring: Ring, i: int) -> LinearForm:
        c = [0] * len(ring)
        c[i] = 1
        return cls(ring, c)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> LinearForm:
        c = [0] * len(p.ring)
        for exps, coef in p.terms().items():
            if sum(exps) != 1:
                raise ValueError(f"{p} is not a linear form")
            c[exps.index(1)] = coef
        return cls(p.ring, c)

    def __eq__(self, other):
        if isinstance(other, LinearForm):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, Polynomial):
            return self.poly == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: LinearForm) -> LinearForm:
        return LinearForm(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: LinearForm) -> LinearForm:
        return LinearForm(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, k: int) -> LinearForm:
        return LinearForm(self.ring, [k * a for a in self.coeffs])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @cached_property
    def poly(self) -> Polynomial:
        exps = [0] * len(self.ring)
        terms = {}
        for i, c in enumerate(self.coeffs):
            if c:
                exps[i] = 1
                terms[tuple(exps)] = c
                exps[i] = 0
        return Polynomial.from_terms(self.ring, terms)

    def normalized(self) -> tuple[int, LinearForm]:
        """``(k, f)`` with ``self == k * f``, ``f`` primitive with positive leading coefficient."""
        g = math.gcd(*self.coeffs)
        if g == 0:
            raise ZeroDivisionError("the zero form is not a valid atom")
        lead = next(c for c in self.coeffs if c)
        if lead < 0:
            g = -g
        if g == 1:
            return 1, self
        return g, LinearForm(self.ring, [c // g for c in self.coeffs])

    def shift(self, var: int, by: LinearForm) -> LinearForm:
        """Substitute variable ``var`` -> ``var + by``."""
        c = self.coeffs[var]
        if not c:
            return self
        return LinearForm(self.ring, [a + c * b for a, b in zip(self.coeffs, by.coeffs)])

    def evaluate(self, values: Sequence) -> Fraction:
        return sum((c * Fraction(v) for c, v in zip(self.coeffs, values) if c), Fraction(0))

    def evaluate_mod(self, values: Sequence[int], p: int = FIELD_PRIME) -> int:
        return sum(c * v for c, v in zip(self.coeffs, values) if c) % p

    def rename(self, ring: Ring, mapping: Sequence[int]) -> LinearForm:
        c = [0] * len(ring)
        for i, a in enumerate(self.coeffs):
            c[mapping[i]] += a
        return LinearForm(ring, c)

    def sort_key(self):
        return tuple(-c for c in self.coeffs)

    def __str__(self):
        return str(self.poly)

    def __repr__(self):
        return f"LinearForm({self})"


def poly_add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def poly_sub(a: Polynomial, b: Polynomial) -> Polynomial:
    return a - b


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def substitute_shift(p: Polynomial, var: int, shift: LinearForm | Polynomial) -> Polynomial:
    """Exact substitution ``x_var -> x_var + shift``."""
    return shift_polynomial(p, {var: shift})


def shift_polynomial(p: Polynomial, shifts: Mapping[int, LinearForm | Polynomial]) -> Polynomial:
    """Simultaneous substitution ``x_v -> x_v + shifts[v]``."""
    if p.total_degree() <= 0:
        return p
    gens = list(p.ring.ctx.gens())
    for var, s in shifts.items():
        gens[var] = gens[var] + (s.poly.raw if isinstance(s, LinearForm) else s.raw)
    return Polynomial(p.ring, p.raw.compose(*gens))


class FactoredRational:
    """``scalar * numerator / prod(atom ** multiplicity)``.

    Atoms are primitive linear forms with positive leading coefficient; any
    content is folded into ``scalar``.  Zero is ``0 / 1`` with scalar 1.
    """

    __slots__ = ("ring", "numerator", "denominator", "scalar")

    def __init__(self, ring: Ring, numerator: Polynomial | int = 1,
                 denominator: Mapping[LinearForm, int] | Iterable[LinearForm] = (),
                 scalar: Fraction | int = 1):
        if isinstance(numerator, int):
            numerator = Polynomial.constant(ring, numerator)
        scalar = Fraction(scalar)
        atoms: Counter = Counter()
        items = denominator.items() if isinstance(denominator, Mapping) else ((a, 1) for a in denominator)
        for a, k in items:
            if k < 0:
                raise ValueError("negative multiplicity")
            if k == 0:
                continue
            c, prim = a.normalized()
            atoms[prim] += k
            scalar /= Fraction(c) ** k
        if numerator.is_zero() or scalar == 0:
            numerator, atoms, scalar = Polynomial.constant(ring, 0), Counter(), Fraction(1)
        self.ring = ring
        self.numerator = numerator
        self.denominator = dict(sorted(atoms.items(), key=lambda kv: kv[0].sort_key()))
        self.scalar = scalar

    @classmethod
    def one(cls, ring: Ring) -> FactoredRational:
        return cls(ring)

    @classmethod
    def zero(cls, ring: Ring) -> FactoredRational:
        return cls(ring, 0)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    @property
    def atom_count(self) -> int:
        return sum(self.denominator.values())

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FactoredRational(self.ring, self.numerator, self.denominator, self.scalar * other)
        if not isinstance(other, FactoredRational):
            return NotImplemented
        atoms = Counter(self.denominator)
        atoms.update(other.denominator)
        return FactoredRational(self.ring, self.numerator * other.numerator, atoms,
                                self.scalar * other.scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return FactoredRational(self.ring, self.numerator, self.denominator, -self.scalar)

    def __add__(self, other: FactoredRational) -> FactoredRational:
        return rational_add(self, other)

    def __sub__(self, other: FactoredRational) -> FactoredRational:
        return rational_add(self, -other)

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return rational_equal(self, other)

    __hash__ = None

    def divide_by(self, atoms: Mapping[LinearForm, int] | Iterable[LinearForm], scalar=1) -> FactoredRational:
        merged = Counter(self.denominator)
        merged.update(atoms if isinstance(atoms, Mapping) else Counter(atoms))
        return FactoredRational(self.ring, self.numerator, merged, self.scalar / Fraction(scalar))

    def reduced(self) -> FactoredRational:
        """Greedily cancel atoms that divide the numerator exactly."""
        num = self.numerator
        atoms = dict(self.denominator)
        for a in list(atoms):
            while atoms[a] and num.total_degree() > 0:
                q = num.divexact(a.poly)
                if q is None:
                    break
                num = q
                atoms[a] -= 1
        content = num.content()
        scalar = self.scalar
        if content > 1:
            num = _divide_content(num, content)
            scalar *= content
        return FactoredRational(self.ring, num, atoms, scalar)

    def shift(self, var: int, by: LinearForm) -> FactoredRational:
        """Substitute ``x_var -> x_var + by`` in numerator and every atom."""
        return self.shift_many({var: by})

    def shift_many(self, shifts: Mapping[int, LinearForm]) -> FactoredRational:
        """Simultaneous substitution ``x_v -> x_v + shifts[v]``."""
        atoms: Counter = Counter()
        for a, k in self.denominator.items():
            moved = a
            for var, by in shifts.items():
                if a.coeffs[var]:
                    moved = moved + by.scale(a.coeffs[var])
            atoms[moved] += k
        return FactoredRational(self.ring, shift_polynomial(self.numerator, shifts), atoms, self.scalar)

    def rename(self, ring: Ring, mapping: Sequence[int]) -> FactoredRational:
        atoms = {a.rename(ring, mapping): k for a, k in self.denominator.items()}
        return FactoredRational(ring, self.numerator.rename(ring, mapping), atoms, self.scalar)

    def evaluate(self, values: Sequence) -> Fraction:
        return eval_rational(self, values)

    def __str__(self):
        return format_rational(self)

    def __repr__(self):
        return f"FactoredRational({self})"


def _divide_content(p: Polynomial, c: int) -> Polynomial:
    q = p.divexact(Polynomial.constant(p.ring, c))
    assert q is not None
    return q


def format_rational(r: FactoredRational) -> str:
    """``[scalar * ](numerator) / (atom) * (atom)^k ...``"""
    num = str(r.numerator)
    if len(r.numerator) > 1:
        num = f"({num})"
    if r.scalar != 1:
        num = f"{r.scalar} * {num}" if num != "1" else str(r.scalar)
    if not r.denominator:
        return num
    dens = []
    for a, k in sorted(r.denominator.items(), key=lambda kv: str(kv[0])):
        dens.append(f"({a})" + (f"^{k}" if k > 1 else ""))
    return f"{num} / " + " * ".join(dens)


def rational_add(a: FactoredRational, b: FactoredRational, reduce: bool = True) -> FactoredRational:
    return rational_sum([a, b], reduce=reduce)


def _atom_order(items, atoms) -> list[LinearForm]:
    n = len(items)

    def spread(a):
        counts = Counter(cof.get(a, 0) for _, _, cof in items)
        return (-max(counts.values()), len(counts))

    return sorted(atoms, key=lambda a: (spread(a) if n > 1 else (0, 0), a.sort_key()))


def horner_sum(ring: Ring, items, order: Sequence[LinearForm], pos: int) -> fmpz_mpoly:
    # sum of coeff * num * prod(cofactor atoms at positions >= pos), Horner in each atom
    if len(items) == 1:
        coeff, num, cof = items[0]
        acc = num.raw * coeff
        for a in order[pos:]:
            for _ in range(cof.get(a, 0)):
                acc = acc * a.poly.raw
        return acc
    if pos == len(order):
        acc = ring.ctx.constant(0)
        for coeff, num, _ in items:
            acc = acc + num.raw * coeff
        return acc
    a = order[pos]
    groups: dict[int, list] = {}
    for it in items:
        groups.setdefault(it[2].get(a, 0), []).append(it)
    top = max(groups)
    ap = a.poly.raw
    acc = None
    for k in range(top, -1, -1):
        if acc is not None:
            acc = acc * ap
        if k in groups:
            part = horner_sum(ring, groups[k], order, pos + 1)
            acc = part if acc is None else acc + part
    return acc


def rational_sum(terms: Sequence[FactoredRational], reduce: bool = True,
                 ring: Ring | None = None) -> FactoredRational:
    """Exact sum over the least common multiset denominator.

    The numerator is assembled atom by atom in Horner form so that summands
    sharing cofactors share the multiplications.  ``ring`` is only needed
    when every summand may be zero.
    """
    if ring is None:
        if not terms:
            raise ValueError("an empty sum needs an explicit ring")
        ring = terms[0].ring
    terms = [t for t in terms if not t.is_zero()]
    if not terms:
        return FactoredRational.zero(ring)
    lcd: Counter = Counter()
    for t in terms:
        if t.ring != ring:
            raise ValueError("summands live in different rings")
        for a, k in t.denominator.items():
            if lcd[a] < k:
                lcd[a] = k
    q = math.lcm(*(t.scalar.denominator for t in terms))
    items = []
    for t in terms:
        cof = {a: k - t.denominator.get(a, 0) for a, k in lcd.items() if k - t.denominator.get(a, 0)}
        items.append((t.scalar.numerator * (q // t.scalar.denominator), t.numerator, cof))
    order = _atom_order(items, list(lcd))
    num = Polynomial(ring, horner_sum(ring, items, order, 0))
    out = FactoredRational(ring, num, lcd, Fraction(1, q))
    return out.reduced() if reduce else out


def _random_point(ring: Ring, rng: random.Random, p: int) -> list[int]:
    return [rng.randrange(p) for _ in ring.variables]


def eval_mod(r: FactoredRational, point: Sequence[int], p: int = FIELD_PRIME) -> int:
    """Value in ``GF(p)``; raises :class:`PoleError` if an atom vanishes there."""
    den = 1
    for a, k in r.denominator.items():
        v = a.evaluate_mod(point, p)
        if v == 0:
            raise PoleError(f"atom {a} vanishes at the sample point")
        den = den * pow(v, k, p) % p
    s = r.scalar
    if s.denominator % p == 0:
        raise PoleError("scalar denominator vanishes mod p")
    num = r.numerator.evaluate_mod(point, p) * (s.numerator % p) % p
    return num * pow(den * s.denominator % p, -1, p) % p


def probably_equal(a: FactoredRational, b: FactoredRational, points: int = 3,
                   seed: int | None = None, p: int = FIELD_PRIME) -> bool:
    """Schwartz-Zippel test at ``points`` independent uniform points of ``GF(p)``.

    A false ``True`` has probability at most ``(d / p) ** points`` where ``d``
    bounds the degree of the cross-multiplied difference.  Points on a pole are
    resampled.
    """
    rng = random.Random(seed)
    done = 0
    while done < points:
        pt = _random_point(a.ring, rng, p)
        try:
            if eval_mod(a, pt, p) != eval_mod(b, pt, p):
                return False
        except PoleError:
            continue
        done += 1
    return True


def _cofactors(a: FactoredRational, b: FactoredRational):
    lcd = Counter(a.denominator) | Counter(b.denominator)
    ca = {x: k - a.denominator.get(x, 0) for x, k in lcd.items() if k > a.denominator.get(x, 0)}
    cb = {x: k - b.denominator.get(x, 0) for x, k in lcd.items() if k > b.denominator.get(x, 0)}
    return ca, cb


def exactly_equal(a: FactoredRational, b: FactoredRational) -> bool:
    """Decide ``a == b`` by cross-multiplying over the common denominator."""
    if a.ring != b.ring:
        raise ValueError("rationals live in different rings")
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    ca, cb = _cofactors(a, b)
    if a.numerator.total_degree() + sum(ca.values()) != b.numerator.total_degree() + sum(cb.values()):
        return False
    if not ca and not cb and len(a.numerator) != len(b.numerator):
        return False
    sa, sb = a.scalar, b.scalar
    left = a.numerator.raw * (sa.numerator * sb.denominator)
    right = b.numerator.raw * (sb.numerator * sa.denominator)
    for x, k in ca.items():
        for _ in range(k):
            left = left * x.poly.raw
    for x, k in cb.items():
        for _ in range(k):
            right = right * x.poly.raw
    return left == right


def rational_equal(a: FactoredRational, b: FactoredRational, precheck: bool = True,
                   seed: int | None = None) -> bool:
    """Exact equality.

    When the cross-multiplication has to expand extra atoms, a cheap
    probabilistic test runs first and can reject without expanding; its
    acceptance is never the verdict.
    """
    ca, cb = _cofactors(a, b)
    if precheck and (ca or cb) and not probably_equal(a, b, seed=seed):
        return False
    return exactly_equal(a, b)


def eval_rational(r: FactoredRational, point: Sequence | Mapping) -> Fraction:
    """Exact value at a rational point (sequence in ring order or Variable map)."""
    if isinstance(point, Mapping):
        point = [point[v] for v in r.ring.variables]
    den = Fraction(1)
    for a, k in r.denominator.items():
        v = a.evaluate(point)
        if v == 0:
            raise PoleError(f"atom {a} vanishes at {list(map(str, point))}")
        den *= v**k
    return r.scalar * r.numerator.evaluate(point) / den


def product(factors: Iterable[FactoredRational], ring: Ring) -> FactoredRational:
    return reduce(lambda x, y: x * y, factors, FactoredRational.one(ring))
