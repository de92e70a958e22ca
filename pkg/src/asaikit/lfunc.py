"""Satake-parameter arithmetic: the matrix-level maps sending a Frobenius
datum into the induced, tensor-induced (plus/minus), wedge-square, standard
and similitude representations; reciprocal-characteristic-polynomial Euler
factors; the wedge-square factorization identity; and Dirichlet series
assembly for the diagonal coefficient table.

All arithmetic is exact: integer matrices, Fractions where a similitude
must be divided out, integer Dirichlet coefficients.  Conventions: a split
prime carries a pair (a, b) of 2x2 matrices; an inert prime carries only a,
the Frobenius acting through the nontrivial coset as x + y -> a y + x on
the induced space and x (x) y -> +- a y (x) x on the tensor-induced one.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .exactalg import PolyX

REP_TAGS = ("ind", "asai+", "asai-", "lambda2", "std", "sim", "zeta", "quadratic-char")


# ---------------------------------------------------------------------------
# small exact matrix helpers (tuples of tuples, int or Fraction entries)
# ---------------------------------------------------------------------------


def mat(rows):
    return tuple(tuple(x for x in r) for r in rows)


def eye(n):
    return mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def mmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return mat(
        [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]
    )


def mscale(a, s):
    return mat([[x * s for x in r] for r in a])


def kron(a, b):
    na, nb = len(a), len(b)
    ma, mb = len(a[0]), len(b[0])
    return mat(
        [
            [a[i][j] * b[k][l] for j in range(ma) for l in range(mb)]
            for i in range(na)
            for k in range(nb)
        ]
    )


def blockdiag(a, b):
    na, ma = len(a), len(a[0])
    nb, mb = len(b), len(b[0])
    out = [[0] * (ma + mb) for _ in range(na + nb)]
    for i in range(na):
        for j in range(ma):
            out[i][j] = a[i][j]
    for i in range(nb):
        for j in range(mb):
            out[na + i][ma + j] = b[i][j]
    return mat(out)


def det_exact(a):
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for j in range(n):
        if a[0][j]:
            minor = [r[:j] + r[j + 1 :] for r in a[1:]]
            total += (-1) ** j * a[0][j] * det_exact(minor)
    return total


def swap_flip(sign):
    """The coset action x (x) y -> sign * y (x) x on a 2 (x) 2 space."""
    s = [[0] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            s[j * 2 + i][i * 2 + j] = sign
    return mat(s)


WEDGE4_PAIRS = [(i, j) for i in range(4) for j in range(i + 1, 4)]


def wedge_square(m):
    d = len(m)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    return mat(
        [
            [m[i][k] * m[j][l] - m[i][l] * m[j][k] for (k, l) in pairs]
            for (i, j) in pairs
        ]
    )


def charpoly_reciprocal(m) -> PolyX:
    """det(I - m X) as an exact polynomial (integer if entries are)."""
    d = len(m)
    coeffs = [0] * (d + 1)
    coeffs[0] = 1
    for k in range(1, d + 1):
        s = 0
        for sub in itertools.combinations(range(d), k):
            s += det_exact([[m[i][j] for j in sub] for i in sub])
        coeffs[k] = (-1) ** k * s
    norm = []
    for c in coeffs:
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("non-integral Euler factor coefficient")
            c = int(c)
        norm.append(c)
    return PolyX(norm)


# ---------------------------------------------------------------------------
# Satake parameters and Frobenius matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SatakeParam:
    """A Frobenius conjugacy-class datum at a rational prime p.

    split: a and b are the two 2x2 components; inert: only a is used.
    Matrices must be invertible (exact integers)."""

    p: int
    split: bool
    a: tuple
    b: tuple | None = None

    def __post_init__(self):
        a = mat(self.a)
        object.__setattr__(self, "a", a)
        if det_exact(a) == 0:
            raise ValueError("a must be invertible")
        if self.split:
            if self.b is None:
                raise ValueError("a split parameter needs both matrices")
            b = mat(self.b)
            if det_exact(b) == 0:
                raise ValueError("b must be invertible")
            object.__setattr__(self, "b", b)
        else:
            if self.b is not None:
                raise ValueError("an inert parameter uses only a")

    @property
    def chi_quadratic(self):
        """Local value of the quadratic character: +1 split, -1 inert."""
        return 1 if self.split else -1

    def similitude(self):
        if self.split:
            da, db = det_exact(self.a), det_exact(self.b)
            if da != db:
                raise ValueError("split similitude needs det a = det b")
            return da
        if det_exact(self.a) != 1:
            raise ValueError("inert similitude needs det a = 1")
        return 1


def frobenius_matrix(sp: SatakeParam, tag: str):
    """The image of the Frobenius datum in the chosen representation."""
    if tag not in REP_TAGS:
        raise ValueError(f"unknown representation tag {tag!r}")
    a = sp.a
    if tag == "zeta":
        return mat([[1]])
    if tag == "quadratic-char":
        return mat([[sp.chi_quadratic]])
    if tag == "sim":
        return mat([[sp.similitude()]])
    if sp.split:
        b = sp.b
        if tag == "ind":
            return blockdiag(a, b)
        if tag in ("asai+", "asai-"):
            return kron(a, b)
        if tag == "lambda2":
            return wedge_square(blockdiag(a, b))
        if tag == "std":
            return std_map(blockdiag(a, b))
    else:
        if tag == "ind":
            z = [[0, 0], [0, 0]]
            return mat(
                [list(z[0]) + list(a[0]), list(z[1]) + list(a[1]),
                 [1, 0, 0, 0], [0, 1, 0, 0]]
            )
        if tag == "asai+":
            return mmul(kron(a, eye(2)), swap_flip(1))
        if tag == "asai-":
            return mmul(kron(a, eye(2)), swap_flip(-1))
        if tag == "lambda2":
            return wedge_square(frobenius_matrix(sp, "ind"))
        if tag == "std":
            return std_map(frobenius_matrix(sp, "ind"))
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class EulerFactor:
    """Reciprocal characteristic polynomial det(I - M X) with its tag."""

    poly: PolyX
    tag: str

    def __post_init__(self):
        if self.poly.coeffs[0] != 1:
            raise ValueError("Euler factors have constant coefficient 1")

    def coefficients(self):
        return list(self.poly.coeffs)


def euler_factor(sp: SatakeParam, tag: str) -> EulerFactor:
    return EulerFactor(charpoly_reciprocal(frobenius_matrix(sp, tag)), tag)


# ---------------------------------------------------------------------------
# the wedge-square identity and the standard-representation map
# ---------------------------------------------------------------------------


def verify_lambda2(sp: SatakeParam, chi: int = 1):
    """Exact polynomial identity
        det(I - chi^{-1} Lambda^2(ind) X)
          = (1 - X)(1 - chi_K(p) X) det(I - chi^{-1} asai^- X).

    chi is the local value (+-1) of the twisting character at p; it must
    match the similitude of the parameter for the identity to hold.
    Returns (ok, report); never raises on mismatch.
    """
    if chi not in (1, -1):
        raise ValueError("chi must be a local value +1 or -1")
    lam = mscale(frobenius_matrix(sp, "lambda2"), Fraction(1, chi))
    lhs = charpoly_reciprocal(lam)
    asai = mscale(frobenius_matrix(sp, "asai-"), Fraction(1, chi))
    zeta = PolyX([1, -1])
    quad = PolyX([1, -sp.chi_quadratic])
    rhs = zeta * quad * charpoly_reciprocal(asai)
    ok = lhs == rhs
    report = {
        "p": sp.p,
        "split": sp.split,
        "chi": chi,
        "lhs": list(lhs.coeffs),
        "rhs": list(rhs.coeffs),
        "ok": ok,
    }
    return ok, report


J4 = mat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])

# complement of the invariant wedge line e0^e1 + e2^e3, in lex pair order
_STD_BASIS = mat(
    [
        [0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, -1],
    ]
)
_J_LINE = ((1,), (0,), (0,), (0,), (0,), (1,))


def similitude_of(m):
    """mu with m^T J m = mu J, or None if m is not in the similitude group."""
    mt = mat([[m[j][i] for j in range(4)] for i in range(4)])
    w = mmul(mmul(mt, J4), m)
    mu = None
    for i in range(4):
        for j in range(4):
            if J4[i][j]:
                r = Fraction(w[i][j], J4[i][j])
                if mu is None:
                    mu = r
                elif mu != r:
                    return None
            elif w[i][j]:
                return None
    return mu


def std_map(m):
    """The 5-dim factor of Lambda^2(m) mu^{-1} after splitting the invariant
    line of the symplectic form; requires m in the similitude group of J."""
    mu = similitude_of(m)
    if mu is None or mu == 0:
        raise ValueError("matrix does not preserve J up to similitude")
    w = mscale(wedge_square(m), Fraction(1, mu))
    # full 6x6 change of basis [complement | J-line]
    p6 = mat(
        [
            [_STD_BASIS[i][j] for j in range(5)] + [_J_LINE[i][0]]
            for i in range(6)
        ]
    )
    p6_inv = _invert_fraction(p6)
    conj = mmul(mmul(p6_inv, w), p6)
    for i in range(5):
        if conj[i][5] != 0 or conj[5][i] != 0:
            raise AssertionError("invariant line failed to split off")
    if conj[5][5] != 1:
        raise AssertionError("invariant line eigenvalue is not 1")
    return mat([[conj[i][j] for j in range(5)] for i in range(5)])


def _invert_fraction(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return mat([r[n:] for r in aug])


def verify_std_decomposition(sp: SatakeParam):
    """char poly of std(ind-Frobenius) equals
       (1 - chi_K(p) X) * det(I - asai^+ sim^{-1} chi_K(p) X): the
    standard-representation factorization, exactly."""
    f = frobenius_matrix(sp, "ind")
    s = std_map(f)
    lhs = charpoly_reciprocal(s)
    mu = sp.similitude()
    cq = sp.chi_quadratic
    asai = mscale(frobenius_matrix(sp, "asai+"), Fraction(cq, mu))
    rhs = PolyX([1, -cq]) * charpoly_reciprocal(asai)
    ok = lhs == rhs
    return ok, {"p": sp.p, "split": sp.split, "lhs": list(lhs.coeffs),
                "rhs": list(rhs.coeffs), "ok": ok}


def std_in_so5(m):
    """Check std(m) preserves the induced symmetric form with determinant 1."""
    s = std_map(m)
    gram = _wedge_pairing_gram()
    st = mat([[s[j][i] for j in range(5)] for i in range(5)])
    if mmul(mmul(st, gram), s) != gram:
        return False
    return det_exact(s) == 1


def _wedge_pairing_gram():
    """Gram matrix of (x, y) -> x ^ y / vol on the 5-dim complement."""
    basis = [[_STD_BASIS[i][j] for i in range(6)] for j in range(5)]

    def pair(u, v):
        total = 0
        for i, (a, b) in enumerate(WEDGE4_PAIRS):
            for j, (c, d) in enumerate(WEDGE4_PAIRS):
                if {a, b} & {c, d}:
                    continue
                perm = (a, b, c, d)
                total += u[i] * v[j] * _perm_sign(perm)
        return total

    return mat([[pair(u, v) for v in basis] for u in basis])


def _perm_sign(perm):
    sign = 1
    lst = list(perm)
    for i in range(len(lst)):
        for j in range(i + 1, len(lst)):
            if lst[i] > lst[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# Dirichlet series and coefficient tables
# ---------------------------------------------------------------------------


class CoeffTable:
    """Hecke coefficients indexed by (ideal norm, label); the diagonal
    entries c(m O_K) live at label "(m)" with norm m^2 (class number 1)."""

    def __init__(self, rows, meta=None):
        self.rows = {}
        self.meta = meta or {}
        for norm, label, coeff in rows:
            key = (int(norm), str(label))
            if key in self.rows:
                raise ValueError(f"duplicate coefficient row {key}")
            self.rows[key] = int(coeff)
        self._check_diagonal_multiplicativity()

    def diagonal(self, m) -> int:
        if m == 1:
            return 1
        key = (m * m, f"({m})")
        if key not in self.rows:
            raise KeyError(f"missing diagonal coefficient c({m} O_K)")
        return self.rows[key]

    def has_diagonal(self, m):
        return m == 1 or (m * m, f"({m})") in self.rows

    def _check_diagonal_multiplicativity(self):
        import math

        ms = sorted(
            int(label[1:-1])
            for (norm, label) in self.rows
            if label.startswith("(") and label[1:-1].isdigit()
            and norm == int(label[1:-1]) ** 2
        )
        mset = set(ms)
        for m in ms:
            for n in ms:
                if m < 2 or n < m or math.gcd(m, n) != 1 or m * n not in mset:
                    continue
                if self.diagonal(m) * self.diagonal(n) != self.diagonal(m * n):
                    raise ValueError(
                        f"multiplicativity fails: c({m})c({n}) != c({m*n})"
                    )

    def to_rows(self):
        return sorted((n, l, c) for (n, l), c in self.rows.items())


def ingest_coeffs(source) -> CoeffTable:
    """Parse a coefficient CSV with header norm,label,coefficient."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or [c.strip() for c in lines[0].split(",")] != [
        "norm", "label", "coefficient",
    ]:
        raise ValueError("expected header 'norm,label,coefficient'")
    rows = []
    for ln in csv.reader(lines[1:]):
        if not ln:
            continue
        if len(ln) != 3:
            raise ValueError(f"malformed row {ln!r}")
        norm_s, label, coeff_s = (x.strip() for x in ln)
        if not _is_int(norm_s) or not _is_int(coeff_s):
            raise ValueError(f"non-integer entry in row {ln!r}")
        rows.append((int(norm_s), label, int(coeff_s)))
    return CoeffTable(rows)


def _is_int(s):
    s = s.strip()
    if s.startswith(("-", "+")):
        s = s[1:]
    return s.isdigit()


def asai_dirichlet(tbl: CoeffTable, N: int) -> list[int]:
    """Coefficients (index 1..N) of zeta(2s) * sum_m c(m O_K) m^{-s}."""
    for m in range(1, N + 1):
        if not tbl.has_diagonal(m):
            raise KeyError(f"missing diagonal coefficient c({m} O_K) below N={N}")
    out = [0] * (N + 1)
    for n in range(1, N + 1):
        total = 0
        d = 1
        while d * d <= n:
            if n % (d * d) == 0:
                total += tbl.diagonal(n // (d * d))
            d += 1
        out[n] = total
    return out[1:]


def hecke_power_coefficients(m2, kmax):
    """c(p^k) for k = 0..kmax from a 2x2 matrix via the trace recursion
    s_k = t s_{k-1} - d s_{k-2} (s_k = trace Sym^k)."""
    t = m2[0][0] + m2[1][1]
    d = det_exact(m2)
    s = [1, t]
    for _ in range(2, kmax + 1):
        s.append(t * s[-1] - d * s[-2])
    return s[: kmax + 1]


def synthetic_table(params: dict[int, SatakeParam], N: int) -> CoeffTable:
    """Multiplicative diagonal table c(m O_K), m <= N, built by the Hecke
    recursion at each prime of `params` (all primes <= N must appear)."""
    import math

    coeffs = {1: 1}
    for m in range(2, N + 1):
        p = _least_prime_factor(m)
        if p not in params:
            raise KeyError(f"no Satake parameter for prime {p} <= {N}")
        k = 0
        mm = m
        while mm % p == 0:
            mm //= p
            k += 1
        sp = params[p]
        if sp.split:
            cpk = (hecke_power_coefficients(sp.a, k)[k]
                   * hecke_power_coefficients(sp.b, k)[k])
        else:
            cpk = hecke_power_coefficients(sp.a, k)[k]
        coeffs[m] = cpk * coeffs[mm]
    rows = [(m * m, f"({m})", coeffs[m]) for m in range(2, N + 1)]
    return CoeffTable(rows)


def _least_prime_factor(n):
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def euler_product_coefficients(params: dict[int, SatakeParam], N: int) -> list[int]:
    """Dirichlet coefficients of prod_p det(I - asai^+(Frob_p) p^{-s})^{-1}
    up to N: the local-factor power series assembled multiplicatively."""
    out = [0] * (N + 1)
    out[1] = 1
    local = {}
    for p, sp in params.items():
        if p > N:
            continue
        kmax = 0
        pk = p
        while pk <= N:
            kmax += 1
            pk *= p
        poly = charpoly_reciprocal(frobenius_matrix(sp, "asai+")).coeffs
        inv = _series_inverse(poly, kmax)
        local[p] = inv
    for n in range(2, N + 1):
        c = 1
        nn = n
        while nn > 1:
            p = _least_prime_factor(nn)
            k = 0
            while nn % p == 0:
                nn //= p
                k += 1
            if p not in local:
                raise KeyError(f"no Satake parameter for prime {p} <= {N}")
            c *= local[p][k]
        out[n] = c
    return out[1:]


def _series_inverse(coeffs, kmax):
    """Power-series inverse of a polynomial with constant term 1."""
    inv = [1] + [0] * kmax
    for k in range(1, kmax + 1):
        s = 0
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            s += coeffs[j] * inv[k - j]
        inv[k] = -s
    return inv


# ---------------------------------------------------------------------------
# seeded random parameters for the batteries
# ---------------------------------------------------------------------------


def random_sl2(rng, steps=6):
    m = eye(2)
    for _ in range(steps):
        r = int(rng.integers(-3, 4))
        if int(rng.integers(2)):
            e = mat([[1, r], [0, 1]])
        else:
            e = mat([[1, 0], [r, 1]])
        m = mmul(m, e)
    return m


def random_satake(rng, p=None, split=None, twist=1):
    """A random parameter with the central-character normalization: split
    parameters have det a = det b = twist (+-1); inert ones det a = 1."""
    if p is None:
        p = int(rng.choice([3, 5, 7, 11, 13, 17, 19, 23]))
    if split is None:
        split = bool(rng.integers(2))
    if not split:
        return SatakeParam(p, False, random_sl2(rng))
    a = random_sl2(rng)
    b = random_sl2(rng)
    if twist == -1:
        flip = mat([[1, 0], [0, -1]])
        a = mmul(a, flip)
        b = mmul(b, flip)
    return SatakeParam(p, True, a, b)
