"""Exact scalars and deterministic dense linear algebra.

Three scalar kinds interoperate through the usual arithmetic dunders:

* ``fractions.Fraction`` for the rationals,
* ``FpElt`` for a prime field F_p with p >= 5,
* ``QEElt`` for a quadratic extension F(sqrt(d)) of either.

Field handles (``QQ``, ``PrimeField``, ``QuadExtField``) build constants,
parse/format the JSON scalar strings, and provide square roots.  All linear
algebra is exact and pivots on the *first* nonzero entry, so reduced forms,
kernels and ranks are bit-reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _fraction_sqrt(x):
    """Exact square root of a Fraction, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn = int(n ** 0.5)
    while rn * rn > n:
        rn -= 1
    while (rn + 1) * (rn + 1) <= n:
        rn += 1
    rd = int(d ** 0.5)
    while rd * rd > d:
        rd -= 1
    while (rd + 1) * (rd + 1) <= d:
        rd += 1
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class RationalField:
    """The field Q, backed by fractions.Fraction."""

    characteristic = 0

    def __call__(self, n=0, d=1):
        return Fraction(n, d)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise ValidationError(f"cannot coerce {x!r} into Q")

    def random(self, rng):
        return Fraction(rng.randint(-12, 12), rng.randint(1, 6))

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def is_square(self, x):
        return _fraction_sqrt(self.coerce(x)) is not None

    def sqrt(self, x):
        return _fraction_sqrt(self.coerce(x))

    def quadratic_extension(self, d=None):
        return QuadExtField(self, d)

    def format(self, x):
        x = self.coerce(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def parse(self, s):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"bad rational scalar {s!r}") from e

    def to_json(self):
        return {"kind": "Q"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class FpElt:
    __slots__ = ("p", "v")

    def __init__(self, p, v):
        self.p = p
        self.v = v % p

    def _co(self, other):
        if isinstance(other, FpElt):
            if other.p != self.p:
                raise ValidationError("mixed prime fields")
            return other
        if isinstance(other, int):
            return FpElt(self.p, other)
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ValidationError(f"denominator divisible by {self.p}")
            return FpElt(self.p, other.numerator * pow(other.denominator, -1, self.p))
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FpElt(self.p, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FpElt(self.p, self.v - o.v)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FpElt(self.p, o.v - self.v)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return FpElt(self.p, self.v * o.v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElt(self.p, self.v * pow(o.v, self.p - 2, self.p))

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElt(self.p, o.v * pow(self.v, self.p - 2, self.p))

    def __neg__(self):
        return FpElt(self.p, -self.v)

    def __pow__(self, e):
        if e < 0:
            return (FpElt(self.p, 1) / self) ** (-e)
        return FpElt(self.p, pow(self.v, e, self.p))

    def __eq__(self, other):
        if isinstance(other, FpElt):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash(("Fp", self.p, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.v}m{self.p}"


class PrimeField:
    """F_p for an odd prime p >= 5 (characteristics 2 and 3 are rejected:
    the discriminant and local-expansion formulas divide by 2 and 3)."""

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise ValidationError(f"{p!r} is not prime")
        if p in (2, 3):
            raise ValidationError(f"characteristic {p} is not supported")
        self.p = p
        self.characteristic = p
        self._sqrt_table = None
        self._default_ext = None

    def __call__(self, n=0):
        if isinstance(n, FpElt):
            if n.p != self.p:
                raise ValidationError("mixed prime fields")
            return n
        if isinstance(n, Fraction):
            return FpElt(self.p, 0)._co(n)
        return FpElt(self.p, n)

    def zero(self):
        return FpElt(self.p, 0)

    def one(self):
        return FpElt(self.p, 1)

    def coerce(self, x):
        if isinstance(x, (FpElt, int, Fraction)):
            return self(x)
        raise ValidationError(f"cannot coerce {x!r} into F_{self.p}")

    def elements(self):
        return [FpElt(self.p, v) for v in range(self.p)]

    def random(self, rng):
        return FpElt(self.p, rng.randrange(self.p))

    def random_nonzero(self, rng):
        return FpElt(self.p, rng.randrange(1, self.p))

    def _sqrts(self):
        if self._sqrt_table is None:
            t = {}
            for r in range(self.p):
                t.setdefault(r * r % self.p, r)
            self._sqrt_table = t
        return self._sqrt_table

    def is_square(self, x):
        return self.coerce(x).v in self._sqrts()

    def sqrt(self, x):
        r = self._sqrts().get(self.coerce(x).v)
        return None if r is None else FpElt(self.p, r)

    def smallest_nonresidue(self):
        for v in range(2, self.p):
            if v not in self._sqrts():
                return FpElt(self.p, v)
        raise AssertionError("no quadratic non-residue found")

    def quadratic_extension(self, d=None):
        # cached for d=None: the extension carries a square-root table
        if d is not None:
            return QuadExtField(self, d)
        if self._default_ext is None:
            self._default_ext = QuadExtField(self, None)
        return self._default_ext

    def format(self, x):
        return f"{self.coerce(x).v} mod {self.p}"

    def parse(self, s):
        parts = s.split("mod")
        if len(parts) != 2:
            raise ValidationError(f"bad prime-field scalar {s!r}")
        try:
            v, p = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise ValidationError(f"bad prime-field scalar {s!r}") from e
        if p != self.p:
            raise ValidationError(f"scalar {s!r} is not in F_{self.p}")
        return FpElt(self.p, v)

    def to_json(self):
        return {"kind": "Fp", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class QEElt:
    """a + b*sqrt(d) over a base field; d a fixed non-square of the base."""

    __slots__ = ("fld", "a", "b")

    def __init__(self, fld, a, b):
        self.fld = fld
        self.a = a
        self.b = b

    def _co(self, other):
        if isinstance(other, QEElt):
            if other.fld is not self.fld and other.fld != self.fld:
                raise ValidationError("mixed quadratic extensions")
            return other
        try:
            base = self.fld.base.coerce(other)
        except (ValidationError, TypeError):
            return None
        return QEElt(self.fld, base, self.fld.base.zero())

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QEElt(self.fld, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QEElt(self.fld, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QEElt(self.fld, o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        d = self.fld.d
        return QEElt(self.fld, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def conj(self):
        return QEElt(self.fld, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.fld.d * self.b * self.b

    def inv(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return QEElt(self.fld, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __neg__(self):
        return QEElt(self.fld, -self.a, -self.b)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = self.fld.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(("QE", self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"({self.a!r}+{self.b!r}r)"


class QuadExtField:
    """F(sqrt(d)); by default d is the smallest non-residue of a prime base."""

    def __init__(self, base, d=None):
        self.base = base
        if d is None:
            if not isinstance(base, PrimeField):
                raise ValidationError("default non-residue only for prime bases")
            d = base.smallest_nonresidue()
        d = base.coerce(d)
        if base.is_square(d):
            raise ValidationError("adjoined element must be a non-square")
        self.d = d
        self.characteristic = base.characteristic
        self._sqrt_table = None

    def __call__(self, x=0):
        if isinstance(x, QEElt):
            if x.fld != self:
                raise ValidationError("mixed quadratic extensions")
            return x
        return QEElt(self, self.base.coerce(x), self.base.zero())

    def make(self, a, b):
        return QEElt(self, self.base.coerce(a), self.base.coerce(b))

    def gen(self):
        return QEElt(self, self.base.zero(), self.base.one())

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def coerce(self, x):
        if isinstance(x, QEElt):
            return self(x)
        return self(self.base.coerce(x))

    def elements(self):
        out = []
        for a in self.base.elements():
            for b in self.base.elements():
                out.append(QEElt(self, a, b))
        return out

    def random(self, rng):
        return QEElt(self, self.base.random(rng), self.base.random(rng))

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def _sqrts(self):
        # p^2-entry table; only built for small prime bases.
        if self._sqrt_table is None:
            if not isinstance(self.base, PrimeField):
                raise ValidationError("square-root table needs a finite base")
            t = {}
            for e in self.elements():
                t.setdefault((e * e).key(), e)
            self._sqrt_table = t
        return self._sqrt_table

    def is_square(self, x):
        x = self.coerce(x)
        if isinstance(self.base, PrimeField):
            return x.key() in self._sqrts()
        if not x.b:
            return self.base.is_square(x.a) or self.base.is_square(x.a / self.d)
        return False  # not needed over Q; conservative

    def sqrt(self, x):
        x = self.coerce(x)
        if isinstance(self.base, PrimeField):
            return self._sqrts().get(x.key())
        if not x.b:
            r = self.base.sqrt(x.a)
            if r is not None:
                return self(r)
            r = self.base.sqrt(x.a / self.d)
            if r is not None:
                return QEElt(self, self.base.zero(), r)
        return None

    def format(self, x):
        x = self.coerce(x)
        if isinstance(self.base, PrimeField):
            return f"[{x.a.v},{x.b.v}] mod {self.base.p} adjoin sqrt({self.d.v})"
        return f"[{self.base.format(x.a)},{self.base.format(x.b)}] adjoin sqrt({self.base.format(self.d)})"

    def parse(self, s):
        txt = s.strip()
        if not txt.startswith("["):
            raise ValidationError(f"bad extension scalar {s!r}")
        close = txt.index("]")
        a_s, b_s = txt[1:close].split(",")
        if isinstance(self.base, PrimeField):
            a = self.base.parse(f"{a_s} mod {self.base.p}")
            b = self.base.parse(f"{b_s} mod {self.base.p}")
        else:
            a, b = self.base.parse(a_s), self.base.parse(b_s)
        return QEElt(self, a, b)

    def to_json(self):
        base = self.base.to_json()
        d = self.d.v if isinstance(self.base, PrimeField) else self.base.format(self.d)
        return {"kind": "quad-ext", "base": base, "d": d}

    def __eq__(self, other):
        return isinstance(other, QuadExtField) and other.base == self.base and other.d == self.d

    def __hash__(self):
        return hash(("QuadExt", self.base, repr(self.d)))

    def __repr__(self):
        return f"{self.base!r}(sqrt({self.d!r}))"


def _qe_key(self):
    a, b = self.a, self.b
    ka = a.v if isinstance(a, FpElt) else a
    kb = b.v if isinstance(b, FpElt) else b
    return (ka, kb)


QEElt.key = _qe_key


def field_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("field descriptor must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "Q":
        return QQ
    if kind == "Fp":
        return PrimeField(obj["p"])
    if kind == "quad-ext":
        base = field_from_json(obj["base"])
        return QuadExtField(base, obj.get("d"))
    raise ValidationError(f"unknown field kind {kind!r}")


def scalar_to_json(field, x):
    return field.format(x)


def scalar_from_json(field, s):
    if not isinstance(s, str):
        raise ValidationError(f"scalar must be a string, got {s!r}")
    return field.parse(s)


# ---------------------------------------------------------------------------
# deterministic dense linear algebra (rows = equations unless noted)


def rref(field, rows):
    """Reduced row echelon form.  Returns (rows, pivot_columns).

    Pivot choice is the first row (top to bottom) with a nonzero entry in the
    current column, which makes every downstream basis reproducible.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        sel = None
        for i in range(r, len(m)):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = field.one() / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(field, rows):
    return len(rref(field, rows)[0])


def kernel_basis(field, rows, ncols):
    """Deterministic basis of {x : A x = 0}; rows of A are the equations."""
    red, pivots = rref(field, rows)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r, pc in zip(red, pivots):
            v[pc] = -r[fc]
        basis.append(v)
    return basis


def span_contains(field, basis, vec):
    if not basis:
        return not any(vec)
    red, pivots = rref(field, basis)
    w = list(vec)
    for r, pc in zip(red, pivots):
        if w[pc]:
            f = w[pc]
            w = [a - f * b for a, b in zip(w, r)]
    return not any(w)


def subspace_equal(field, basis1, basis2):
    r1, p1 = rref(field, basis1)
    r2, p2 = rref(field, basis2)
    return p1 == p2 and r1 == r2


def coords_in_basis(field, basis, vec):
    """Coefficients expressing vec in the given (independent) basis, or None."""
    if not basis:
        return [] if not any(vec) else None
    ncols = len(basis[0])
    # Solve B^T c = vec by eliminating on the augmented system.
    rows = [[basis[j][i] for j in range(len(basis))] + [vec[i]] for i in range(ncols)]
    red, pivots = rref(field, rows)
    n = len(basis)
    sol = [field.zero()] * n
    for r, pc in zip(red, pivots):
        if pc == n:
            return None  # inconsistent
        sol[pc] = r[n]
    # verify (guards against underdetermined nonsense; basis is independent)
    for i in range(ncols):
        acc = field.zero()
        for j in range(n):
            acc = acc + sol[j] * basis[j][i]
        if acc != vec[i]:
            return None
    return sol


def sparse_rank(field, rows):
    """Rank of a matrix given as sparse rows ({column: value} dicts).

    Elimination order is deterministic: smallest leading column first, ties
    broken by input order.  Intended for very sparse systems (Cech matrices);
    dense inputs should use rank().
    """
    work = [{c: v for c, v in r.items() if v} for r in rows]
    work = [r for r in work if r]
    rnk = 0
    while work:
        lead = [min(r) for r in work]
        c = min(lead)
        pi = lead.index(c)
        piv = work.pop(pi)
        inv = field.one() / piv[c]
        rnk += 1
        nxt = []
        for r in work:
            if c in r:
                f = r[c] * inv
                for col, v in piv.items():
                    nv = r.get(col, field.zero()) - f * v
                    if nv:
                        r[col] = nv
                    elif col in r:
                        del r[col]
            if r:
                nxt.append(r)
        work = nxt
    return rnk


def mat_mul(A, B):
    if not A or not B:
        return []
    return [[sum_prod(row, col) for col in zip(*B)] for row in A]


def sum_prod(xs, ys):
    it = iter(zip(xs, ys))
    x0, y0 = next(it)
    acc = x0 * y0
    for x, y in it:
        acc = acc + x * y
    return acc
