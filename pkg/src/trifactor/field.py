"""Arithmetic in finite fields GF(p^l).

Field elements are plain ints in [0, p^l): digit i of the int in base p is
the coefficient of x^i in the polynomial basis, so 0 and 1 are the additive
and multiplicative identities and the prime subfield occupies 0..p-1.  All
operations hang off a FiniteField context; elements carry no state of their
own, which keeps the sweep kernels cheap.

The reduction modulus for an extension is not configurable: it is the first
monic irreducible polynomial of degree l in encoding order (non-leading
coefficients read as a base-p integer).  Fixing the modulus this way keeps
element encodings, derived tables and golden outputs reproducible without an
external polynomial table.

Multiplication uses exp/log tables up to order 2^16 and schoolbook
polynomial arithmetic above; the construction cap is 2^20.
"""

from __future__ import annotations

MAX_ORDER = 1 << 20
TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 512


class NotPrimeError(ValueError):
    """Characteristic is not a prime number."""


class DegreeError(ValueError):
    """Extension degree is not a positive integer."""


class TooLargeError(ValueError):
    """Field order exceeds the construction cap."""


class AllZeroCoefficientsError(ValueError):
    """Quadratic solver called with a = b = c = 0."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _distinct_prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _digits(value: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        value, r = divmod(value, p)
        out.append(r)
    return out


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num modulo the monic polynomial den, coefficients mod p."""
    num = num[:]
    dn = len(den) - 1
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            for j in range(dn + 1):
                num[i - dn + j] = (num[i - dn + j] - c * den[j]) % p
    return num[:dn]


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            divisor = _digits(low, p, d) + [1]
            if not any(_poly_rem(poly, divisor, p)):
                return False
    return True


class FiniteField:
    """Context for GF(p^l): modulus, tables, and all element operations."""

    def __init__(self, p: int, l: int):
        if not isinstance(p, int) or not is_prime(p):
            raise NotPrimeError(f"characteristic {p!r} is not prime")
        if not isinstance(l, int) or l < 1:
            raise DegreeError(f"extension degree {l!r} must be >= 1")
        q = p**l
        if q > MAX_ORDER:
            raise TooLargeError(f"order {q} exceeds cap {MAX_ORDER}")
        self.p = p
        self.l = l
        self.q = q
        self.modulus = self._find_modulus()
        self._powers = [p**i for i in range(l)]
        self._mod_mask = None
        if p == 2:
            self._mod_mask = sum(c << i for i, c in enumerate(self.modulus))
        self._exp = None
        self._log = None
        self._neg_table = None
        self._add_table = None
        self._nonresidue = None
        self._as_basis = None
        if q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"FiniteField(p={self.p}, l={self.l})"

    # -- construction internals ------------------------------------------

    def _find_modulus(self) -> tuple[int, ...]:
        p, l = self.p, self.l
        if l == 1:
            return (0, 1)
        for low in range(p**l):
            cand = _digits(low, p, l) + [1]
            if _is_irreducible(cand, p):
                return tuple(cand)
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _raw_mul(self, a: int, b: int) -> int:
        """Product without tables: carryless for p=2, digit schoolbook else."""
        if self.p == 2:
            mask = self._mod_mask
            top = 1 << self.l
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mask
            return r
        p, l = self.p, self.l
        da = _digits(a, p, l)
        db = _digits(b, p, l)
        conv = [0] * (2 * l - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    conv[i + j] += ca * cb
        rem = _poly_rem([c % p for c in conv], list(self.modulus), p)
        out = 0
        for i, c in enumerate(rem):
            out += c * self._powers[i]
        return out

    def _raw_pow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            n >>= 1
        return r

    def _find_generator(self) -> int:
        order = self.q - 1
        checks = [(order // r) for r in _distinct_prime_factors(order)]
        for e in range(1, self.q):
            if all(self._raw_pow(e, n) != 1 for n in checks):
                return e
        raise AssertionError("no multiplicative generator found")  # unreachable

    def _build_tables(self):
        q = self.q
        g = self._find_generator()
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        v = 1
        for i in range(q - 1):
            exp[i] = v
            exp[i + q - 1] = v
            log[v] = i
            v = self._raw_mul(v, g)
        assert v == 1
        self._exp = exp
        self._log = log
        if self.p != 2:
            if self.l == 1:
                self._neg_table = [(-a) % self.p for a in range(q)]
            else:
                self._neg_table = [self._neg_digits(a) for a in range(q)]
                if q <= _ADD_TABLE_LIMIT:
                    self._add_table = [
                        [self._add_digits(a, b) for b in range(q)] for a in range(q)
                    ]

    # -- basic arithmetic --------------------------------------------------

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        for m in self._powers:
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * m
        return out

    def _neg_digits(self, a: int) -> int:
        p = self.p
        out = 0
        for m in self._powers:
            a, ra = divmod(a, p)
            out += ((-ra) % p) * m
        return out

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.l == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self._neg_table is not None:
            return self._neg_table[a]
        if self.l == 1:
            return (-a) % self.p
        return self._neg_digits(a)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._exp is not None:
            return self._exp[self.q - 1 - self._log[a]]
        return self._raw_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        if n < 0:
            a = self.inv(a)
            n = -n
        return self._raw_pow(a, n)

    def frobenius(self, a: int) -> int:
        """The p-power map; its l-fold iterate is the identity."""
        return self.pow(a, self.p)

    # -- trace, squares, quadratics ---------------------------------------

    def trace(self, a: int) -> int:
        """Sum of the Frobenius orbit of a; lands in the prime subfield."""
        s = a
        y = a
        for _ in range(self.l - 1):
            y = self.frobenius(y)
            s = self.add(s, y)
        assert s < self.p, "trace left the prime subfield"
        return s

    def is_square(self, a: int) -> bool:
        """In characteristic 2 every element is a square."""
        if self.p == 2 or a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> int | None:
        """A square root of a, or None.

        Deterministic choice: the root with the smaller encoding.  In
        characteristic 2 the squaring map is bijective, so a^(q/2) is the
        unique root; odd characteristic runs Tonelli-Shanks.
        """
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if self.pow(a, (self.q - 1) // 2) != 1:
            return None
        q1 = self.q - 1
        t, s = q1, 0
        while t % 2 == 0:
            t //= 2
            s += 1
        if s == 1:
            y = self.pow(a, (self.q + 1) // 4)
        else:
            if self._nonresidue is None:
                e = 2
                while self.is_square(e):
                    e += 1
                self._nonresidue = e
            c = self.pow(self._nonresidue, t)
            y = self.pow(a, (t + 1) // 2)
            r = self.pow(a, t)
            m = s
            while r != 1:
                i = 0
                rr = r
                while rr != 1:
                    rr = self.mul(rr, rr)
                    i += 1
                b = self.pow(c, 1 << (m - i - 1))
                y = self.mul(y, b)
                c = self.mul(b, b)
                r = self.mul(r, c)
                m = i
        return min(y, self.neg(y))

    def _artin_schreier_root(self, d: int) -> int | None:
        """One solution t of t^2 + t = d in characteristic 2, or None.

        The map t -> t^2 + t is GF(2)-linear with kernel {0, 1}; solve by
        reducing d against a triangular basis of the image.
        """
        if self._as_basis is None:
            basis: dict[int, tuple[int, int]] = {}
            for j in range(self.l):
                e = 1 << j
                v = self.mul(e, e) ^ e
                pre = e
                while v:
                    piv = v.bit_length() - 1
                    if piv not in basis:
                        basis[piv] = (v, pre)
                        v = 0
                    else:
                        bv, bp = basis[piv]
                        v ^= bv
                        pre ^= bp
            self._as_basis = basis
        r, t = d, 0
        while r:
            piv = r.bit_length() - 1
            if piv not in self._as_basis:
                return None
            bv, bp = self._as_basis[piv]
            r ^= bv
            t ^= bp
        return t

    def solve_quadratic(self, a: int, b: int, c: int) -> set[int]:
        """All distinct roots of a x^2 + b x + c.

        a = 0 degenerates to the linear case; a = b = 0 with c != 0 has no
        roots; all three zero is rejected.
        """
        if a == 0 and b == 0:
            if c == 0:
                raise AllZeroCoefficientsError("a = b = c = 0")
            return set()
        if a == 0:
            return {self.mul(self.neg(c), self.inv(b))}
        if self.p == 2:
            if b == 0:
                return {self.sqrt(self.div(c, a))}
            d = self.div(self.mul(a, c), self.mul(b, b))
            if self.trace(d) != 0:
                return set()
            t0 = self._artin_schreier_root(d)
            scale = self.div(b, a)
            return {self.mul(t0, scale), self.mul(t0 ^ 1, scale)}
        four = 4 % self.p
        disc = self.sub(self.mul(b, b), self.mul(four, self.mul(a, c)))
        y = self.sqrt(disc)
        if y is None:
            return set()
        inv2a = self.inv(self.mul(2 % self.p, a))
        nb = self.neg(b)
        return {self.mul(self.add(nb, y), inv2a), self.mul(self.sub(nb, y), inv2a)}

    # -- encodings ----------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector, lowest degree first."""
        return tuple(_digits(a, self.p, self.l))

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) > self.l:
            raise ValueError(f"too many coefficients for degree {self.l}")
        out = 0
        for i, ci in enumerate(cs):
            if not 0 <= ci < self.p:
                raise ValueError(f"coefficient {ci} out of range [0, {self.p})")
            out += ci * self._powers[i]
        return out

    def element_str(self, a: int) -> str:
        return ",".join(str(ci) for ci in self.coeffs(a))

    def parse_element(self, text: str) -> int:
        return self.from_coeffs(int(part) for part in text.split(","))

    def describe(self) -> dict:
        return {"p": self.p, "l": self.l, "modulus": list(self.modulus)}


_FIELD_CACHE: dict[tuple[int, int], FiniteField] = {}


def field(p: int, l: int = 1) -> FiniteField:
    """Shared, cached field context (contexts are immutable)."""
    key = (p, l)
    ctx = _FIELD_CACHE.get(key)
    if ctx is None:
        ctx = FiniteField(p, l)
        _FIELD_CACHE[key] = ctx
    return ctx
