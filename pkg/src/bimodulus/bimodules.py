"""Direct-image splitting types, stability and deformation numbers.

Two layers live here.

The concrete layer computes cohomology on the doubled-(1,1) member ("the
thickened diagonal"): its Picard group is Z x G_a, a bundle is presented by
pullback data (ku, kv, apic), and cohomology comes from an exact two-chart
Cech complex truncated at a window that is re-run larger and must agree.
Rank-1 torsion-free but non-invertible sheaves are kernels of a surjection
onto the structure sheaf of a divisor D of the reduced locus; their h0 adds
Taylor-vanishing rows to the same kernel computation and h1 follows from the
long exact sequence.

The combinatorial layer encodes the classification tables: a descriptor names
the member type and the discrete invariants, and pure functions return the
splitting type (a, b) of the direct image, the twisted splitting type
(a', b'), the Gieseker stability class, and the deformation-theoretic
dimension counts.  The engine above (plus the reduced-member engine in
linebundles) exists so the tables can be checked against honest cohomology.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ValidationError
from .exactmath import sparse_rank
from .linebundles import LineBundle, is_twisted_v_pullback, is_v_pullback, split_from_cohomology
from .polyring import uv_trim

DESCRIPTOR_KINDS = ("split-pair", "non-reduced", "integral", "reducible", "two-lines")


# ---------------------------------------------------------------------------
# thickened-diagonal Cech cohomology


def _cech_rows(field, k, c, N):
    """Sparse rows of the Cech differential, keyed by output coefficient.

    Unknowns: chart-0 section P + uQ and chart-1 section Pt + vQt, all of
    degree <= N; layout [P | Q | Pt | Qt].  On the overlap (w = 1/z,
    v = u/z^2, transition z^k(1 + c*u/z)):

        plain part of d:  P(z) - z^k Pt(1/z)
        u part of d:      Q(z) - z^(k-2) Qt(1/z) - c z^(k-1) Pt(1/z)

    Returns {('f', e): row} for plain coefficients of z^e and ('u', e) rows.
    """
    one = field.one()
    cc = field.coerce(c)
    n1 = N + 1
    NE = N + abs(k) + 4
    rows = {}
    for e in range(-NE, NE + 1):
        r = {}
        if 0 <= e <= N:
            r[e] = one
        j = k - e
        if 0 <= j <= N:
            r[2 * n1 + j] = r.get(2 * n1 + j, field.zero()) - one
        if r:
            rows[("f", e)] = r
        r = {}
        if 0 <= e <= N:
            r[n1 + e] = one
        j = k - 2 - e
        if 0 <= j <= N:
            r[3 * n1 + j] = r.get(3 * n1 + j, field.zero()) - one
        j = k - 1 - e
        if cc and 0 <= j <= N:
            r[2 * n1 + j] = r.get(2 * n1 + j, field.zero()) - cc
        r = {col: v for col, v in r.items() if v}
        if r:
            rows[("u", e)] = r
    return rows


def _dcond_rows(field, dfin, dinf, N):
    """Taylor-vanishing rows along the divisor D of the reduced locus:
    the plain part P must be divisible by dfin(z), and the first dinf
    coefficients of Pt must vanish (multiplicity of D at infinity)."""
    n1 = N + 1
    rows = []
    dfin = uv_trim([field.coerce(x) for x in dfin]) if dfin else []
    degf = len(dfin) - 1 if dfin else 0
    if dfin and degf > 0:
        # residue of z^i modulo dfin, iteratively
        cur = [field.zero()] * degf
        cur[0] = field.one()
        lead_inv = field.one() / dfin[-1]
        reductions = []
        for _ in range(N + 1):
            reductions.append(list(cur))
            top = cur[-1]
            cur = [field.zero()] + cur[:-1]
            if top:
                f = top * lead_inv
                for j in range(degf):
                    cur[j] = cur[j] - f * dfin[j]
        for j in range(degf):
            row = {}
            for i in range(N + 1):
                if reductions[i][j]:
                    row[i] = reductions[i][j]
            rows.append(row)
    for j in range(int(dinf)):
        rows.append({2 * n1 + j: field.one()})
    return rows


def _nr_counts(field, k, c, N, dcond=None):
    rows = _cech_rows(field, k, c, N)
    ncols = 4 * (N + 1)
    full = list(rows.values())
    rank_full = sparse_rank(field, full)
    if dcond is None:
        h0 = ncols - rank_full
    else:
        extra = _dcond_rows(field, dcond[0], dcond[1], N)
        h0 = ncols - sparse_rank(field, full + extra)
    Nsm = N - (abs(k) + 4)
    if Nsm < 1:
        raise AssertionError("window too small for the outer projection")
    out = [r for (part, e), r in rows.items() if abs(e) > Nsm]
    rank_out = sparse_rank(field, out)
    c1_small = 2 * (2 * Nsm + 1)
    h1 = c1_small - (rank_full - rank_out)
    return h0, h1


def nr_invertible_cohomology(field, k, c, window=None):
    """(h0, h1) of the bundle with transition z^k(1 + c*u/z); the truncated
    computation is repeated with a larger window and must agree."""
    N = window if window is not None else 2 * abs(k) + 8
    a = _nr_counts(field, k, c, N)
    b = _nr_counts(field, k, c, N + 4)
    if a != b:
        raise AssertionError(f"Cech window did not stabilize: {a} vs {b}")
    if a[0] < 0 or a[1] < 0:
        raise AssertionError("negative cohomology dimension")
    if a[0] - a[1] != 2 * k:
        raise AssertionError("Euler characteristic mismatch in the Cech computation")
    return a


class NRSheaf:
    """Rank-1 sheaf on the doubled member: pullback bundle data plus an
    optional co-support divisor D on the reduced locus.

    ku, kv: pullback twists from the two factors; apic: the G_a coordinate
    of the Picard class relative to u-pullbacks.  dfin is a polynomial in
    the affine chart coordinate cutting the finite part of D (low degree
    first), dinf the multiplicity of D at infinity.  D empty <=> invertible.
    """

    __slots__ = ("field", "ku", "kv", "apic", "dfin", "dinf")

    def __init__(self, field, ku, kv, apic=0, dfin=(), dinf=0):
        self.field = field
        self.ku = int(ku)
        self.kv = int(kv)
        self.apic = field.coerce(apic)
        dfin = uv_trim([field.coerce(x) for x in dfin])
        if dfin and len(dfin) == 1:
            dfin = []  # nonzero constant cuts nothing
        self.dfin = dfin
        self.dinf = int(dinf)
        if self.dinf < 0:
            raise ValidationError("negative multiplicity at infinity")

    # Picard coordinates of the underlying bundle
    @property
    def k(self):
        return self.ku + self.kv

    @property
    def c(self):
        # kv + apic; the G_a part is additive and u-pullbacks sit at c = 0
        return self.field.coerce(self.kv) + self.apic

    def pic_coordinate(self):
        """c - k: vanishes exactly on v-pullbacks."""
        return self.c - self.field.coerce(self.k)

    def degd(self):
        return (len(self.dfin) - 1 if self.dfin else 0) + self.dinf

    def is_invertible(self):
        return self.degd() == 0

    def chi(self):
        return 2 * self.k - self.degd()

    def twist_u(self, j):
        return NRSheaf(self.field, self.ku + j, self.kv, self.apic, self.dfin, self.dinf)

    def twist_v(self, j):
        return NRSheaf(self.field, self.ku, self.kv + j, self.apic, self.dfin, self.dinf)

    def swap(self):
        """Exchange the two ruling pullbacks (the involution fixes the
        reduced locus pointwise, so D is unchanged)."""
        return NRSheaf(self.field, self.kv, self.ku, -self.apic, self.dfin, self.dinf)

    def _bundle_cohomology(self):
        return nr_invertible_cohomology(self.field, self.k, self.c)

    def h0(self):
        if self.is_invertible():
            return self._bundle_cohomology()[0]
        N = 2 * (abs(self.ku) + abs(self.kv)) + 8
        dc = (self.dfin, self.dinf)
        a = _nr_counts(self.field, self.k, self.c, N, dcond=dc)[0]
        b = _nr_counts(self.field, self.k, self.c, N + 4, dcond=dc)[0]
        if a != b:
            raise AssertionError("Cech window did not stabilize")
        return a

    def h1(self):
        if self.is_invertible():
            return self._bundle_cohomology()[1]
        h0l, h1l = self._bundle_cohomology()
        h0 = self.h0()
        h1 = h1l + self.degd() - h0l + h0
        if h1 < 0:
            raise AssertionError("negative h1 from the long exact sequence")
        if h0 - h1 != self.chi():
            raise AssertionError("Euler characteristic mismatch")
        return h1

    def __repr__(self):
        return (f"NRSheaf(ku={self.ku}, kv={self.kv}, apic={self.apic!r}, "
                f"degd={self.degd()})")


def nr_split_v(sheaf, window=8):
    """Splitting type of the direct image on the second factor, from the h0
    profile of v-twists, verified across the whole window."""
    chi = sheaf.chi()
    j0 = None
    for j in range(-window, window + 1):
        if sheaf.twist_v(j).h0() > 0:
            j0 = j
            break
    if j0 is None:
        raise ValidationError("splitting type outside the scanned window")
    b = -j0
    a = chi - 2 - b
    if a > b:
        raise AssertionError("splitting detection produced a > b")
    for j in range(-window, window + 1):
        want = max(a + j + 1, 0) + max(b + j + 1, 0)
        got = sheaf.twist_v(j).h0()
        if got != want:
            raise AssertionError(f"twist profile mismatch at j={j}: {got} != {want}")
    return (a, b)


def nr_split_u(sheaf, window=8):
    return nr_split_v(sheaf.swap(), window=window)


# ---------------------------------------------------------------------------
# descriptors


class Descriptor:
    """Discrete invariants of a rank-1 sheaf on an anticanonical member,
    sufficient to evaluate the classification tables."""

    __slots__ = ("kind", "params")

    def __init__(self, kind, **params):
        if kind not in DESCRIPTOR_KINDS:
            raise ValidationError(f"unknown descriptor kind {kind!r}")
        self.kind = kind
        self.params = params
        getattr(self, "_check_" + kind.replace("-", "_"))()

    def _int(self, name):
        v = self.params.get(name)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ValidationError(f"descriptor field {name!r} must be an integer")
        return v

    def _bool(self, name, default=None):
        v = self.params.get(name, default)
        if not isinstance(v, bool):
            raise ValidationError(f"descriptor field {name!r} must be a boolean")
        return v

    def _check_split_pair(self):
        a, b = self._int("a"), self._int("b")
        if a > b:
            raise ValidationError("split pair must be ordered a <= b")
        self._allow({"a", "b"})

    def _check_non_reduced(self):
        chi, degd = self._int("chi"), self._int("degd")
        if degd < 0:
            raise ValidationError("degd must be nonnegative")
        if (chi + degd) % 2:
            raise ValidationError("chi and degd must have equal parity")
        if degd == 0:
            self._bool("v_pullback")
            self._bool("shifted_v_pullback")
            if self.params["v_pullback"] and self.params["shifted_v_pullback"]:
                raise ValidationError("the two pullback flags exclude each other")
            self._allow({"chi", "degd", "v_pullback", "shifted_v_pullback"})
        else:
            self._allow({"chi", "degd"})

    def _check_integral(self):
        chi = self._int("chi")
        inv = self._bool("invertible")
        if inv and chi % 2 == 0:
            self._bool("v_pullback")
            self._allow({"chi", "invertible", "v_pullback"})
        else:
            self._allow({"chi", "invertible"})

    def _check_reducible(self):
        p, q = self._int("p"), self._int("q")
        if p > q:
            raise ValidationError("component degrees must be ordered p <= q")
        self._bool("invertible")
        if self.params["invertible"] and p == q:
            self._bool("v_pullback")
            self._allow({"p", "q", "invertible", "v_pullback"})
        else:
            self._allow({"p", "q", "invertible"})

    def _check_two_lines(self):
        p, q = self._int("p"), self._int("q")
        if p > q:
            raise ValidationError("line degrees must be ordered p <= q")
        self._allow({"p", "q"})

    def _allow(self, names):
        extra = set(self.params) - names
        if extra:
            raise ValidationError(f"unexpected descriptor fields {sorted(extra)}")
        missing = names - set(self.params)
        if missing:
            raise ValidationError(f"missing descriptor fields {sorted(missing)}")

    def chi(self):
        k, p = self.kind, self.params
        if k == "split-pair":
            return p["a"] + p["b"] + 2
        if k == "non-reduced":
            return p["chi"]
        if k == "integral":
            return p["chi"]
        if k == "reducible":
            return p["p"] + p["q"] + (0 if p["invertible"] else 1)
        return p["p"] + p["q"] + 2

    def __eq__(self, other):
        return (
            isinstance(other, Descriptor)
            and self.kind == other.kind
            and self.params == other.params
        )

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"Descriptor({self.kind}, {inner})"


def _sorted_pair(a, b):
    return (a, b) if a <= b else (b, a)


def split_ab(desc):
    """Splitting type (a, b), a <= b, of the direct image on the second
    factor, read off the classification tables."""
    k, p = desc.kind, desc.params
    chi = desc.chi()
    if k == "split-pair":
        return (p["a"], p["b"])
    if k == "non-reduced":
        if p["degd"] == 0:
            half = chi // 2
            return (half - 2, half) if p["v_pullback"] else (half - 1, half - 1)
        return _sorted_pair((chi - p["degd"]) // 2, (chi + p["degd"]) // 2 - 2)
    if k == "integral":
        if p["invertible"]:
            if chi % 2 == 0:
                half = chi // 2
                return (half - 2, half) if p["v_pullback"] else (half - 1, half - 1)
            return ((chi - 3) // 2, (chi - 1) // 2)
        i = chi - 1
        return (i // 2 - 1, i // 2) if i % 2 == 0 else ((i - 1) // 2, (i - 1) // 2)
    if k == "reducible":
        pp, q = p["p"], p["q"]
        if p["invertible"]:
            if q - pp == 0:
                return (pp - 2, pp) if p["v_pullback"] else (pp - 1, pp - 1)
            if q - pp == 1:
                return (pp - 1, pp)
            return (pp, q - 2)
        return (pp - 1, pp) if pp == q else (pp, q - 1)
    return (p["p"], p["q"])


def split_ab_prime(desc, shifted_v_pullback=False):
    """Splitting type (a', b') of the direct image of the twist by the
    (-1,0)-pullback.  The flag states whether that twist is itself a
    v-pullback; kinds that determine it internally reject an explicit True."""
    k, p = desc.kind, desc.params
    chi = desc.chi()
    internal = k in ("split-pair", "non-reduced", "two-lines") or (
        k == "integral" and not (p.get("invertible") and chi % 2 == 0)
    ) or (
        k == "reducible" and not (p.get("invertible") and p["p"] == p["q"])
    )
    if internal and shifted_v_pullback:
        raise ValidationError("twist flag is determined by the descriptor here")
    if shifted_v_pullback and p.get("v_pullback"):
        raise ValidationError("a sheaf cannot be a pullback both ways")
    if k == "split-pair":
        return (p["a"] - 1, p["b"] - 1)
    if k == "non-reduced":
        if p["degd"] == 0:
            half = chi // 2
            if p["shifted_v_pullback"]:
                return (half - 3, half - 1)
            return (half - 2, half - 2)
        return _sorted_pair((chi - p["degd"]) // 2 - 1, (chi + p["degd"]) // 2 - 3)
    if k == "integral":
        if p["invertible"]:
            if chi % 2 == 0:
                half = chi // 2
                return (half - 3, half - 1) if shifted_v_pullback else (half - 2, half - 2)
            return ((chi - 5) // 2, (chi - 3) // 2)
        i = chi - 1
        if i % 2 == 0:
            return (i // 2 - 2, i // 2 - 1)
        return ((i - 1) // 2 - 1, (i - 1) // 2 - 1)
    if k == "reducible":
        pp, q = p["p"], p["q"]
        if p["invertible"]:
            if q == pp:
                return (pp - 3, pp - 1) if shifted_v_pullback else (pp - 2, pp - 2)
            if q - pp == 1:
                return (pp - 2, pp - 1)
            return (pp - 1, q - 3)
        return (pp - 2, pp - 1) if pp == q else (pp - 1, q - 2)
    return (p["p"] - 1, p["q"] - 1)


def stability_classify(desc):
    """Gieseker stability class of the sheaf named by the descriptor."""
    k, p = desc.kind, desc.params
    if k == "split-pair":
        return "StrictlySemistable" if p["a"] == p["b"] else "Unstable"
    if k == "non-reduced":
        d = p["degd"]
        if d <= 1:
            return "Stable"
        return "StrictlySemistable" if d == 2 else "Unstable"
    if k == "integral":
        return "Stable"
    if k == "reducible":
        gap = p["q"] - p["p"]
        if p["invertible"]:
            if gap <= 1:
                return "Stable"
            return "StrictlySemistable" if gap == 2 else "Unstable"
        if gap == 0:
            return "Stable"
        return "StrictlySemistable" if gap == 1 else "Unstable"
    return "StrictlySemistable" if p["p"] == p["q"] else "Unstable"


def hilbert_polynomial(desc):
    """(leading, constant) of P(t) = 8t + chi."""
    return (8, desc.chi())


def reduced_hilbert(leading, chi):
    """Normalize P(t) = leading*t + chi to monic: (1, chi/leading).

    Used both for rank-2 sheaves on the anticanonical member (leading 8)
    and for comparison subsheaves supported on a reduced component
    (leading 4)."""
    if leading <= 0:
        raise ValidationError("the support degree must be positive")
    return (Fraction(1), Fraction(chi, leading))


def gieseker_p(desc):
    """Reduced Hilbert polynomial p(t) = t + chi/8 as (1, Fraction)."""
    return reduced_hilbert(*hilbert_polynomial(desc))


# ---------------------------------------------------------------------------
# descriptors of concrete sheaves


def descriptor_of_line_bundle(L):
    """Descriptor (and the twist flag for the primed table) of an invertible
    sheaf on a reduced member."""
    chi = L.degree_total()
    if L.curve.is_reducible():
        dd = sorted(L.degree_by_component())
        p, q = dd[0], dd[1]
        if p == q:
            vp = is_v_pullback(L)
            tw = is_twisted_v_pullback(L)
            return Descriptor("reducible", p=p, q=q, invertible=True, v_pullback=vp), tw
        return Descriptor("reducible", p=p, q=q, invertible=True), False
    if chi % 2 == 0:
        vp = is_v_pullback(L)
        tw = is_twisted_v_pullback(L)
        return Descriptor("integral", chi=chi, invertible=True, v_pullback=vp), tw
    return Descriptor("integral", chi=chi, invertible=True), False


def descriptor_of_nr_sheaf(sheaf):
    degd = sheaf.degd()
    if degd == 0:
        astar = sheaf.pic_coordinate()
        return Descriptor(
            "non-reduced", chi=sheaf.chi(), degd=0,
            v_pullback=not astar,
            shifted_v_pullback=astar == sheaf.field.coerce(-1),
        )
    return Descriptor("non-reduced", chi=sheaf.chi(), degd=degd)


def split_of_concrete(obj, window=8):
    """Cohomology-computed splitting type of a concrete sheaf (reduced
    invertible or doubled-member)."""
    if isinstance(obj, LineBundle):
        return split_from_cohomology(obj, window=window)
    if isinstance(obj, NRSheaf):
        return nr_split_v(obj, window=window)
    raise ValidationError("splitting is computed for line bundles and doubled-member sheaves")


def split_prime_of_concrete(obj, window=8):
    if isinstance(obj, LineBundle):
        return split_from_cohomology(obj.twist(-1, 0), window=window)
    if isinstance(obj, NRSheaf):
        return nr_split_v(obj.twist_u(-1), window=window)
    raise ValidationError("splitting is computed for line bundles and doubled-member sheaves")


# ---------------------------------------------------------------------------
# deformation numbers


def endo_ext_dims_reduced(curve):
    """(ext0, ext1, ext2) of a rank-1 sheaf against itself on a reduced
    member; the values depend only on the member, through h*(O_W) and
    h*(O(2,2)|_W)."""
    O = LineBundle(curve, 0, 0)
    A = LineBundle(curve, 2, 2)
    return (O.h0(), O.h1() + A.h0(), A.h1())


def endo_ext_dims_nr(field):
    h0o, h1o = nr_invertible_cohomology(field, 0, 0)
    h0a, h1a = nr_invertible_cohomology(field, 4, 2)
    return (h0o, h1o + h0a, h1a)


def hochschild_dims(d):
    """(hh1, hh2, hh3, hh2 - hh1 - hh3) for the degree-d noncommutative
    surface; the alternating sum is 3 for every d."""
    if not isinstance(d, int) or d < 0:
        raise ValidationError("the surface parameter must be a nonnegative integer")
    hh1 = max(d - 1, 0) + 6
    hh2 = max(d - 3, 0) + 9 + max(d - 1, 0)
    hh3 = max(d - 3, 0)
    return (hh1, hh2, hh3, hh2 - hh1 - hh3)


def moduli_dim_check(ext_dims, d=0):
    """Consistency of the two dimension counts: the smooth locus is
    1 - chi(End) = ext1 when (ext0, ext2) = (1, 0), and the quotient
    dimension is that minus the hh1 symmetries, which must equal the
    Hochschild Euler number hh2 - hh1 - hh3."""
    e0, e1, e2 = ext_dims
    chi = e0 - e1 + e2
    smooth = 1 - chi
    hh1, hh2, hh3, _ = hochschild_dims(d)
    out = {
        "ext_dims": list(ext_dims),
        "chi_end": chi,
        "smooth_locus_dim": smooth,
        "first_order_symmetries": hh1,
        "quotient_dim": smooth - hh1,
        "hochschild_euler": hh2 - hh1 - hh3,
    }
    out["consistent"] = (
        smooth == e1 and out["quotient_dim"] == out["hochschild_euler"]
    )
    return out
