"""Finite groups with a distinguished index-2 subgroup and their matrix
representations over F_q / Z/q^n.

The group is stored by its full multiplication table (fixtures are small),
so every identity below is checked exactly against the table.  The two
canonical extensions of rho (x) rho^c from the index-2 subgroup H to G are
``tensor_induce(rho, +1)`` and ``tensor_induce(rho, -1)``; they differ by
the sign of the action on the nontrivial coset.
"""

from __future__ import annotations

import warnings

import numpy as np

from .exactalg import (
    Mat,
    factor_prime_power,
    kernel_mod,
    row_space_mod,
    solve_mod,
    validate_modulus,
)


class FiniteGroup:
    """A finite group: indexed elements, multiplication table, index-2
    subgroup H, and a chosen coset representative ctilde outside H."""

    def __init__(self, elements, mul, H, ctilde, validate=True):
        self.elements = list(elements)
        self.mul = np.asarray(mul, dtype=np.int64)
        self.mul.flags.writeable = False
        self.n = len(self.elements)
        self.H = tuple(sorted(int(h) for h in H))
        self.H_set = frozenset(self.H)
        self.ctilde = int(ctilde)
        self.one = self._find_identity()
        self.inv = self._find_inverses()
        if validate:
            self.validate()

    # -- construction checks -------------------------------------------------

    def _find_identity(self):
        idx = np.arange(self.n)
        for e in range(self.n):
            if np.array_equal(self.mul[e], idx) and np.array_equal(self.mul[:, e], idx):
                return e
        raise ValueError("multiplication table has no identity")

    def _find_inverses(self):
        inv = np.full(self.n, -1, dtype=np.int64)
        for g in range(self.n):
            js = np.nonzero(self.mul[g] == self.one)[0]
            if js.size != 1 or self.mul[js[0], g] != self.one:
                raise ValueError(f"element {g} has no two-sided inverse")
            inv[g] = js[0]
        inv.flags.writeable = False
        return inv

    def validate(self):
        n = self.n
        if self.mul.shape != (n, n) or self.mul.min() < 0 or self.mul.max() >= n:
            raise ValueError("multiplication table has wrong shape or entries")
        # associativity, chunked to bound memory
        step = max(1, (1 << 21) // (n * n))
        for lo in range(0, n, step):
            hi = min(n, lo + step)
            left = self.mul[self.mul[lo:hi, :], :]
            right = self.mul[lo:hi, :][:, self.mul].reshape(hi - lo, n, n)
            if not np.array_equal(left, right):
                raise ValueError("multiplication table is not associative")
        if 2 * len(self.H) != n:
            raise ValueError("H does not have index 2")
        hs = self.H_set
        if self.one not in hs:
            raise ValueError("H does not contain the identity")
        harr = np.array(self.H)
        prods = self.mul[np.ix_(harr, harr)]
        if not set(np.unique(prods)) <= hs:
            raise ValueError("H is not closed under multiplication")
        if any(int(self.inv[h]) not in hs for h in self.H):
            raise ValueError("H is not closed under inverses")
        if self.ctilde in hs or not (0 <= self.ctilde < n):
            raise ValueError("ctilde must lie outside H")

    # -- basic operations ------------------------------------------------------

    def op(self, g, h):
        return int(self.mul[g, h])

    def inverse(self, g):
        return int(self.inv[g])

    def conj(self, c, g):
        """c g c^{-1}."""
        return int(self.mul[self.mul[c, g], self.inv[c]])

    def conj_ctilde(self, g):
        return self.conj(self.ctilde, g)

    def in_H(self, g):
        return g in self.H_set

    def coset_sign(self, g):
        return 1 if g in self.H_set else -1

    def order_of(self, g):
        k, x = 1, g
        while x != self.one:
            x = self.op(x, g)
            k += 1
        return k

    def closure(self, gens):
        seen = set(gens) | {self.one}
        frontier = list(seen)
        while frontier:
            nxt = []
            for a in frontier:
                for b in gens:
                    c = self.op(a, b)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return seen

    def generators(self, subset=None):
        """Small generating set of the subgroup `subset` (default: G), greedy."""
        pool = sorted(subset) if subset is not None else list(range(self.n))
        target = set(pool)
        gens: list[int] = []
        have = {self.one}
        for g in pool:
            if g not in have:
                gens.append(g)
                have = self.closure(gens)
                if have == target:
                    break
        if have != target:
            raise ValueError("subset is not a subgroup")
        return gens

    def coset_elements(self):
        return [g for g in range(self.n) if g not in self.H_set]


class Rep:
    """A matrix representation of G or of its subgroup H.

    images are stored densely per domain element and are checked against
    the multiplication table exactly on construction.
    """

    def __init__(self, group: FiniteGroup, domain: str, images, mod, validate=True):
        if domain not in ("G", "H"):
            raise ValueError("domain must be 'G' or 'H'")
        validate_modulus(mod)
        self.group = group
        self.domain = domain
        self.mod = int(mod)
        self.domain_elements = (
            np.arange(group.n, dtype=np.int64)
            if domain == "G"
            else np.array(group.H, dtype=np.int64)
        )
        pos = np.full(group.n, -1, dtype=np.int64)
        pos[self.domain_elements] = np.arange(len(self.domain_elements))
        self.pos = pos
        if isinstance(images, dict):
            first = next(iter(images.values()))
            dim = (first.a if isinstance(first, Mat) else np.asarray(first)).shape[0]
            arr = np.zeros((len(self.domain_elements), dim, dim), dtype=np.int64)
            for g, m in images.items():
                arr[pos[g]] = m.a if isinstance(m, Mat) else np.asarray(m)
        else:
            arr = np.asarray(images, dtype=np.int64)
        self.images = np.mod(arr, self.mod)
        self.images.flags.writeable = False
        self.dim = int(self.images.shape[1])
        if validate:
            self.validate()

    def validate(self):
        g = self.group
        dom = self.domain_elements
        if self.images.shape != (len(dom), self.dim, self.dim):
            raise ValueError("bad image array shape")
        if not np.array_equal(self.arr(g.one), np.eye(self.dim, dtype=np.int64)):
            raise ValueError("identity does not map to the identity matrix")
        # full multiplication-table check, chunked
        k = len(dom)
        prod_pos = self.pos[self.group.mul[np.ix_(dom, dom)]]
        if prod_pos.min() < 0:
            raise ValueError("domain is not closed under multiplication")
        step = max(1, (1 << 20) // (k * self.dim * self.dim))
        for lo in range(0, k, step):
            hi = min(k, lo + step)
            lhs = np.einsum(
                "aij,bjk->abik", self.images[lo:hi], self.images, optimize=True
            ) % self.mod
            if not np.array_equal(lhs, self.images[prod_pos[lo:hi]]):
                raise ValueError("images do not respect the multiplication table")

    # -- access ---------------------------------------------------------------

    def at(self, g) -> Mat:
        p = int(self.pos[g])
        if p < 0:
            raise KeyError(f"element {g} not in domain")
        return Mat(self.images[p], self.mod)

    def arr(self, g):
        p = int(self.pos[g])
        if p < 0:
            raise KeyError(f"element {g} not in domain")
        return self.images[p]

    def value(self, g):
        if self.dim != 1:
            raise ValueError("value() is for characters (dim 1)")
        return int(self.arr(g)[0, 0])

    def is_character(self):
        return self.dim == 1

    def __eq__(self, other):
        return (
            isinstance(other, Rep)
            and self.group is other.group
            and self.domain == other.domain
            and self.mod == other.mod
            and np.array_equal(self.images, other.images)
        )

    def __repr__(self):
        return f"Rep(dim={self.dim}, mod={self.mod}, domain={self.domain})"

    # -- derived reps -----------------------------------------------------------

    def restrict_to_H(self) -> "Rep":
        if self.domain == "H":
            return self
        imgs = self.images[self.pos[np.array(self.group.H)]]
        return Rep(self.group, "H", imgs, self.mod, validate=False)

    def twist(self, chi: "Rep") -> "Rep":
        """rho tensor chi for a character chi on the same (or larger) domain."""
        if chi.dim != 1:
            raise ValueError("twist by a character only")
        vals = np.array([chi.value(g) for g in self.domain_elements])
        imgs = (self.images * vals[:, None, None]) % self.mod
        return Rep(self.group, self.domain, imgs, self.mod, validate=False)

    def dual(self) -> "Rep":
        return dual_twist(self, None)

    def tensor(self, other: "Rep") -> "Rep":
        if self.domain != other.domain or self.mod != other.mod:
            raise ValueError("tensor needs matching domain and modulus")
        imgs = np.einsum("aij,akl->aikjl", self.images, other.images).reshape(
            len(self.domain_elements), self.dim * other.dim, self.dim * other.dim
        ) % self.mod
        return Rep(self.group, self.domain, imgs, self.mod, validate=False)

    def det_character(self) -> "Rep":
        vals = np.array(
            [[[Mat(m, self.mod).det()]] for m in self.images], dtype=np.int64
        )
        return Rep(self.group, self.domain, vals, self.mod, validate=False)


def make_character(group: FiniteGroup, domain: str, values, mod) -> Rep:
    """Character from a dict {element: value} or per-domain-element array."""
    if isinstance(values, dict):
        dom = np.arange(group.n) if domain == "G" else np.array(group.H)
        arr = np.array([[[values[int(g)]]] for g in dom], dtype=np.int64)
    else:
        arr = np.asarray(values, dtype=np.int64).reshape(-1, 1, 1)
    return Rep(group, domain, arr, mod)


def trivial_character(group: FiniteGroup, domain: str, mod) -> Rep:
    size = group.n if domain == "G" else len(group.H)
    return Rep(group, domain, np.ones((size, 1, 1), dtype=np.int64), mod, validate=False)


def coset_sign_character(group: FiniteGroup, mod) -> Rep:
    vals = np.array(
        [[[1 if g in group.H_set else mod - 1]] for g in range(group.n)],
        dtype=np.int64,
    )
    return Rep(group, "G", vals, mod, validate=False)


def power_character(chi: Rep, k: int) -> Rep:
    vals = np.array(
        [[[pow(int(m[0, 0]), k, chi.mod)]] for m in chi.images], dtype=np.int64
    )
    return Rep(chi.group, chi.domain, vals, chi.mod, validate=False)


def conjugate_rep(rho: Rep) -> Rep:
    """rho^c(h) = rho(ctilde h ctilde^{-1}), using the group's fixed ctilde."""
    g = rho.group
    if rho.domain == "G":
        warnings.warn("conjugating a representation of the whole group: "
                      "the result is isomorphic to the input", stacklevel=2)
        dom = np.arange(g.n)
    else:
        dom = np.array(g.H)
    imgs = np.stack([rho.arr(g.conj_ctilde(int(x))) for x in dom])
    return Rep(g, rho.domain, imgs, rho.mod, validate=False)


def dual_twist(rho: Rep, psi: Rep | None) -> Rep:
    """g -> psi(g) * (rho(g)^{-1})^T; psi=None gives the plain dual."""
    if psi is not None and psi.mod != rho.mod:
        raise ValueError("modulus mismatch")
    g = rho.group
    imgs = np.empty_like(rho.images)
    for x in rho.domain_elements:
        x = int(x)
        m = rho.arr(g.inverse(x)).T
        if psi is not None:
            m = m * psi.value(x)
        imgs[rho.pos[x]] = np.mod(m, rho.mod)
    return Rep(g, rho.domain, imgs, rho.mod, validate=False)


def induce(rho: Rep) -> Rep:
    """Induction from H to G on V + V with coset representatives {1, ctilde}.

    For h in H the action is block-diagonal (rho(h), rho^c(h)); an element g
    outside H sends x + y to rho(g ctilde^{-1}) y + rho(ctilde g) x.
    """
    if rho.domain != "H":
        raise ValueError("induce expects a representation of H")
    g = rho.group
    d = rho.dim
    cinv = g.inverse(g.ctilde)
    imgs = np.zeros((g.n, 2 * d, 2 * d), dtype=np.int64)
    for x in range(g.n):
        if g.in_H(x):
            imgs[x, :d, :d] = rho.arr(x)
            imgs[x, d:, d:] = rho.arr(g.conj_ctilde(x))
        else:
            imgs[x, :d, d:] = rho.arr(g.op(x, cinv))
            imgs[x, d:, :d] = rho.arr(g.op(g.ctilde, x))
    return Rep(g, "G", imgs, rho.mod)


def swap_matrix(n, mod) -> np.ndarray:
    """The flip x tensor y -> y tensor x on an n^2-dimensional space."""
    s = np.zeros((n * n, n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            s[j * n + i, i * n + j] = 1
    return s % mod


def tensor_induce(rho: Rep, sign: int, ctilde: int | None = None) -> Rep:
    """The two canonical extensions of rho (x) rho^c to G (sign = +1 or -1).

    On H the action is rho(h) (x) rho^c(h); the chosen coset representative
    sends x (x) y to +- y (x) rho(ctilde^2) x.  Consistency with the whole
    multiplication table is validated on construction.
    """
    if rho.domain != "H":
        raise ValueError("tensor induction expects a representation of H")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = rho.group
    q, _ = factor_prime_power(rho.mod)
    if q == 2:
        raise ValueError("odd modulus required")
    ct = g.ctilde if ctilde is None else int(ctilde)
    if g.in_H(ct):
        raise ValueError("ctilde must lie outside H")
    d = rho.dim
    cinv = g.inverse(ct)
    s = swap_matrix(d, rho.mod)
    if sign == -1:
        s = (-s) % rho.mod
    imgs = np.zeros((g.n, d * d, d * d), dtype=np.int64)
    for x in range(g.n):
        if g.in_H(x):
            a = rho.arr(x)
            b = rho.arr(g.conj(ct, x))
            imgs[x] = np.kron(a, b) % rho.mod
        else:
            a = rho.arr(g.op(x, cinv))
            b = rho.arr(g.op(ct, x))
            imgs[x] = (np.kron(a, b) @ s) % rho.mod
    return Rep(g, "G", imgs, rho.mod)  # validate=True: table failure = bug


def transfer_character(chi: Rep) -> Rep:
    """As^+ of a character: chi(g)chi(ctilde g ctilde^{-1}) on H, chi(g^2) off H."""
    if chi.dim != 1 or chi.domain != "H":
        raise ValueError("transfer expects a character of H")
    g = chi.group
    vals = np.zeros((g.n, 1, 1), dtype=np.int64)
    for x in range(g.n):
        if g.in_H(x):
            vals[x, 0, 0] = chi.value(x) * chi.value(g.conj_ctilde(x)) % chi.mod
        else:
            vals[x, 0, 0] = chi.value(g.op(x, x))
    return Rep(g, "G", vals, chi.mod)


def _hom_system(r1: Rep, r2: Rep, gens):
    """Rows of the linear system for {M : M r1(g) = r2(g) M, g in gens}."""
    d1, d2 = r1.dim, r2.dim
    blocks = []
    i1 = np.eye(d1, dtype=np.int64)
    i2 = np.eye(d2, dtype=np.int64)
    for g in gens:
        a = np.kron(i2, r1.arr(g).T) - np.kron(r2.arr(g), i1)
        blocks.append(a)
    return np.vstack(blocks) % r1.mod


def intertwiner_space(r1: Rep, r2: Rep) -> list[Mat]:
    """Basis of {M : M r1(g) = r2(g) M for all g} (maps V1 -> V2)."""
    if r1.group is not r2.group or r1.domain != r2.domain or r1.mod != r2.mod:
        raise ValueError("intertwiners need the same group, domain and modulus")
    g = r1.group
    dom = list(range(g.n)) if r1.domain == "G" else list(g.H)
    gens = g.generators(set(dom)) or [g.one]
    sys = _hom_system(r1, r2, gens)
    q, n = factor_prime_power(r1.mod)
    if n == 1:
        basis = kernel_mod(sys, q)
        return [Mat(v.reshape(r2.dim, r1.dim), r1.mod) for v in basis]
    sol = solve_mod(sys, np.zeros(sys.shape[0], dtype=np.int64), r1.mod)
    out = []
    for v, ann in sol.kernel:
        out.append(Mat(v.reshape(r2.dim, r1.dim), r1.mod))
    return out


def contains_invertible(basis: list[Mat], rng=None, tries=200):
    """Search an invertible element of the span; exhaustive for dim <= 2."""
    if not basis:
        return None
    mod = basis[0].mod
    q, _ = factor_prime_power(mod)
    for b in basis:
        if b.is_invertible():
            return b
    if len(basis) <= 2:
        coeffs_range = range(q)
        if len(basis) == 1:
            return None  # single generator already tested
        for a in coeffs_range:
            for b in coeffs_range:
                if a == 0 and b == 0:
                    continue
                cand = basis[0].scale(a) + basis[1].scale(b)
                if cand.is_invertible():
                    return cand
        return None
    rng = rng or np.random.default_rng(0)
    for _ in range(tries):
        coeffs = rng.integers(0, mod, size=len(basis))
        cand = Mat.zeros(basis[0].rows, basis[0].cols, mod)
        for c, b in zip(coeffs, basis):
            cand = cand + b.scale(int(c))
        if cand.is_invertible():
            return cand
    return None


def is_isomorphic(r1: Rep, r2: Rep, rng=None):
    """(flag, witness): witness an invertible intertwiner when flag is True."""
    if r1.dim != r2.dim:
        return False, None
    basis = intertwiner_space(r1, r2)
    w = contains_invertible(basis, rng=rng)
    return (w is not None), w


def isotypic_lines(rho: Rep, chi: Rep) -> list[np.ndarray]:
    """Basis of {v : rho(g) v = chi(g) v for all g}."""
    if chi.dim != 1:
        raise ValueError("chi must be a character")
    g = rho.group
    dom = list(range(g.n)) if rho.domain == "G" else list(g.H)
    gens = g.generators(set(dom)) or [g.one]
    rows = []
    eye = np.eye(rho.dim, dtype=np.int64)
    for x in gens:
        rows.append((rho.arr(x) - chi.value(x) * eye) % rho.mod)
    sys = np.vstack(rows)
    q, n = factor_prime_power(rho.mod)
    if n > 1:
        sol = solve_mod(sys, np.zeros(sys.shape[0], dtype=np.int64), rho.mod)
        return [v for v, ann in sol.kernel if ann == rho.mod]
    return list(kernel_mod(sys, q))


class PairingClassification:
    """Result of classify_pairing: a symmetry-adapted basis plus the parity
    mu(ctilde) of the similitude character (odd iff -1)."""

    def __init__(self, basis, mu_at_ctilde, mod):
        self.basis = basis  # list of (Mat, 'symmetric' | 'antisymmetric')
        self.mu_at_ctilde = mu_at_ctilde
        self.mod = mod

    @property
    def parity_odd(self):
        return self.mu_at_ctilde == self.mod - 1

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)


def classify_pairing(rho: Rep, mu: Rep) -> PairingClassification:
    """Basis of {B : rho(g)^T B rho(g) = mu(g) B}, tagged by transpose symmetry.

    The solution space is transpose-stable, so it splits into symmetric and
    antisymmetric parts (the modulus is odd); the returned basis is adapted
    to that splitting.
    """
    if mu.dim != 1:
        raise ValueError("mu must be a character")
    g = rho.group
    dom = list(range(g.n)) if rho.domain == "G" else list(g.H)
    gens = g.generators(set(dom)) or [g.one]
    d = rho.dim
    rows = []
    eye = np.eye(d * d, dtype=np.int64)
    for x in gens:
        rt = rho.arr(x).T
        rows.append((np.kron(rt, rt) - mu.value(x) * eye) % rho.mod)
    sys = np.vstack(rows)
    q, n = factor_prime_power(rho.mod)
    if n > 1:
        raise NotImplementedError("pairing classification is over F_q")
    raw = kernel_mod(sys, q)
    inv2 = pow(2, -1, q)
    sym_rows, anti_rows = [], []
    for v in raw:
        b = v.reshape(d, d)
        s = ((b + b.T) * inv2) % q
        a = ((b - b.T) * inv2) % q
        if s.any():
            sym_rows.append(s.reshape(-1))
        if a.any():
            anti_rows.append(a.reshape(-1))
    basis = []
    if sym_rows:
        for v in row_space_mod(np.array(sym_rows), q):
            basis.append((Mat(v.reshape(d, d), rho.mod), "symmetric"))
    if anti_rows:
        for v in row_space_mod(np.array(anti_rows), q):
            basis.append((Mat(v.reshape(d, d), rho.mod), "antisymmetric"))
    if len(basis) != len(raw):
        # mixed-symmetry leftovers cannot occur over an odd modulus
        raise AssertionError("pairing space failed to split by symmetry")
    mu_ct = mu.value(g.ctilde) if mu.domain == "G" else None
    return PairingClassification(basis, mu_ct, rho.mod)
