"""Exact coefficient rings.

The central ring is R = Z[s, t] / (s^4 + 1, t^4 + 1), a free Z-module of
rank 16 on the monomials s^i t^j with 0 <= i, j < 4.  Reduction uses
s^4 = -1 and t^4 = -1, so both s and t are units with s^-1 = -s^3.

Specialization targets are anything containing an eighth root of -1:
Z[zeta_8], the Gaussian integers (for fourth roots), F_p for p = 2 or
p = 1 mod 8, and F_{p^2} for the remaining odd primes, where t^4 + 1
splits into irreducible quadratics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional


class RingMismatchError(TypeError):
    """Mixed operands from different rings (or different field parameters)."""


class EighthRootError(ValueError):
    """The requested element is not an eighth root of -1 in the target ring."""


def _reduce_exp(e: int) -> "tuple[int, int]":
    """Exponent mod 4 together with the sign from q^4 = -1."""
    sign = -1 if (e // 4) % 2 else 1
    return e % 4, sign


@dataclass(frozen=True)
class CycloBivariate:
    """Element of R = Z[s, t] / (s^4 + 1, t^4 + 1) as a 4x4 integer array."""

    coeffs: tuple  # 4 rows (s-exponent) of 4 ints (t-exponent)

    @staticmethod
    def from_array(rows) -> "CycloBivariate":
        t = tuple(tuple(int(v) for v in row) for row in rows)
        if len(t) != 4 or any(len(row) != 4 for row in t):
            raise ValueError("expected a 4x4 coefficient array")
        return CycloBivariate(t)

    @staticmethod
    def zero() -> "CycloBivariate":
        return CycloBivariate(((0,) * 4,) * 4)

    @staticmethod
    def one() -> "CycloBivariate":
        return CycloBivariate.monomial(0, 0, 1)

    @staticmethod
    def from_int(n: int) -> "CycloBivariate":
        return CycloBivariate.monomial(0, 0, n)

    @staticmethod
    def monomial(i: int, j: int, c: int = 1) -> "CycloBivariate":
        i, si = _reduce_exp(i % 8)
        j, sj = _reduce_exp(j % 8)
        rows = [[0] * 4 for _ in range(4)]
        rows[i][j] = si * sj * c
        return CycloBivariate(tuple(tuple(row) for row in rows))

    def __add__(self, other: "CycloBivariate") -> "CycloBivariate":
        if not isinstance(other, CycloBivariate):
            raise RingMismatchError("expected a CycloBivariate operand")
        return CycloBivariate(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.coeffs, other.coeffs)
            )
        )

    def __neg__(self) -> "CycloBivariate":
        return CycloBivariate(tuple(tuple(-v for v in row) for row in self.coeffs))

    def __sub__(self, other: "CycloBivariate") -> "CycloBivariate":
        return self + (-other)

    def __mul__(self, other: "CycloBivariate") -> "CycloBivariate":
        if not isinstance(other, CycloBivariate):
            raise RingMismatchError("expected a CycloBivariate operand")
        acc = [[0] * 4 for _ in range(4)]
        for i1 in range(4):
            row1 = self.coeffs[i1]
            for j1 in range(4):
                c1 = row1[j1]
                if not c1:
                    continue
                for i2 in range(4):
                    row2 = other.coeffs[i2]
                    i, si = _reduce_exp(i1 + i2)
                    for j2 in range(4):
                        c2 = row2[j2]
                        if not c2:
                            continue
                        j, sj = _reduce_exp(j1 + j2)
                        acc[i][j] += si * sj * c1 * c2
        return CycloBivariate(tuple(tuple(row) for row in acc))

    def scale(self, n: int) -> "CycloBivariate":
        return CycloBivariate(tuple(tuple(n * v for v in row) for row in self.coeffs))

    def __pow__(self, e: int) -> "CycloBivariate":
        if e < 0:
            inv = self.inverse_of_unit()
            return inv ** (-e)
        result = CycloBivariate.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse_of_unit(self) -> "CycloBivariate":
        """Inverse when some power of the element is 1 (roots of unity and their negatives)."""
        power = self
        for _ in range(16):
            if power * self == CycloBivariate.one():
                return power
            power = power * self
        raise ValueError("element is not a root of unity in R")

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.coeffs for v in row)

    def conj(self) -> "CycloBivariate":
        """The ring automorphism s -> s^-1 = -s^3, t -> t^-1 = -t^3."""
        acc = [[0] * 4 for _ in range(4)]
        for i in range(4):
            ii, si = _reduce_exp((3 * i) % 8)
            si *= -1 if i % 2 else 1
            for j in range(4):
                c = self.coeffs[i][j]
                if not c:
                    continue
                jj, sj = _reduce_exp((3 * j) % 8)
                sj *= -1 if j % 2 else 1
                acc[ii][jj] += si * sj * c
        return CycloBivariate(tuple(tuple(row) for row in acc))

    def to_json(self) -> dict:
        return {"st": [list(row) for row in self.coeffs]}

    @staticmethod
    def from_json(obj: dict) -> "CycloBivariate":
        return CycloBivariate.from_array(obj["st"])

    def __str__(self) -> str:
        parts = []
        for i in range(4):
            for j in range(4):
                c = self.coeffs[i][j]
                if not c:
                    continue
                mono = "*".join(
                    ([] if i == 0 else [f"s^{i}" if i > 1 else "s"])
                    + ([] if j == 0 else [f"t^{j}" if j > 1 else "t"])
                )
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


S_GEN = CycloBivariate.monomial(1, 0)
T_GEN = CycloBivariate.monomial(0, 1)


def cyclo_monomial(sign: int, i: int, j: int) -> CycloBivariate:
    return CycloBivariate.monomial(i, j, sign)


@dataclass(frozen=True)
class Zeta8:
    """Element of Z[zeta_8] = Z[q] / (q^4 + 1) as a length-4 integer array."""

    coeffs: tuple  # (c0, c1, c2, c3)

    @staticmethod
    def from_array(vals) -> "Zeta8":
        t = tuple(int(v) for v in vals)
        if len(t) != 4:
            raise ValueError("expected 4 coefficients")
        return Zeta8(t)

    @staticmethod
    def zero() -> "Zeta8":
        return Zeta8((0, 0, 0, 0))

    @staticmethod
    def one() -> "Zeta8":
        return Zeta8((1, 0, 0, 0))

    @staticmethod
    def from_int(n: int) -> "Zeta8":
        return Zeta8((n, 0, 0, 0))

    @staticmethod
    def gen_power(e: int) -> "Zeta8":
        i, sign = _reduce_exp(e % 8)
        vals = [0, 0, 0, 0]
        vals[i] = sign
        return Zeta8(tuple(vals))

    def __add__(self, other: "Zeta8") -> "Zeta8":
        if not isinstance(other, Zeta8):
            raise RingMismatchError("expected a Zeta8 operand")
        return Zeta8(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Zeta8":
        return Zeta8(tuple(-v for v in self.coeffs))

    def __sub__(self, other: "Zeta8") -> "Zeta8":
        return self + (-other)

    def __mul__(self, other: "Zeta8") -> "Zeta8":
        if not isinstance(other, Zeta8):
            raise RingMismatchError("expected a Zeta8 operand")
        acc = [0, 0, 0, 0]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                k, sign = _reduce_exp(i + j)
                acc[k] += sign * a * b
        return Zeta8(tuple(acc))

    def __pow__(self, e: int) -> "Zeta8":
        if e < 0:
            raise ValueError("negative powers are not defined in Z[zeta_8]")
        result = Zeta8.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coeffs)

    def to_json(self) -> dict:
        return {"zeta8": list(self.coeffs)}

    @staticmethod
    def from_json(obj: dict) -> "Zeta8":
        return Zeta8.from_array(obj["zeta8"])


ZETA8 = Zeta8.gen_power(1)


@dataclass(frozen=True)
class GaussianInt:
    """Gaussian integer a + b*iota with iota^2 = -1; carries character values."""

    re: int
    im: int

    @staticmethod
    def zero() -> "GaussianInt":
        return GaussianInt(0, 0)

    @staticmethod
    def one() -> "GaussianInt":
        return GaussianInt(1, 0)

    @staticmethod
    def from_int(n: int) -> "GaussianInt":
        return GaussianInt(n, 0)

    @staticmethod
    def iota_power(e: int) -> "GaussianInt":
        return GaussianInt(*((1, 0), (0, 1), (-1, 0), (0, -1))[e % 4])

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        if not isinstance(other, GaussianInt):
            raise RingMismatchError("expected a GaussianInt operand")
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        return self + (-other)

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        if not isinstance(other, GaussianInt):
            raise RingMismatchError("expected a GaussianInt operand")
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, e: int) -> "GaussianInt":
        if e < 0:
            raise ValueError("negative powers are not defined in Z[iota]")
        result = GaussianInt.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_json(self) -> list:
        return [self.re, self.im]

    @staticmethod
    def from_json(obj) -> "GaussianInt":
        return GaussianInt(int(obj[0]), int(obj[1]))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        imtxt = "i" if self.im == 1 else ("-i" if self.im == -1 else f"{self.im}*i")
        if self.re == 0:
            return imtxt
        return f"{self.re}{imtxt}" if imtxt.startswith("-") else f"{self.re}+{imtxt}"


IOTA = GaussianInt(0, 1)


@dataclass(frozen=True)
class PrimeField:
    """Element of F_p, stored as the least nonnegative residue."""

    p: int
    val: int

    @staticmethod
    def make(p: int, v: int) -> "PrimeField":
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        return PrimeField(p, v % p)

    def _check(self, other: "PrimeField") -> None:
        if not isinstance(other, PrimeField) or other.p != self.p:
            raise RingMismatchError("operands lie in different prime fields")

    def __add__(self, other: "PrimeField") -> "PrimeField":
        self._check(other)
        return PrimeField(self.p, (self.val + other.val) % self.p)

    def __neg__(self) -> "PrimeField":
        return PrimeField(self.p, (-self.val) % self.p)

    def __sub__(self, other: "PrimeField") -> "PrimeField":
        self._check(other)
        return PrimeField(self.p, (self.val - other.val) % self.p)

    def __mul__(self, other: "PrimeField") -> "PrimeField":
        self._check(other)
        return PrimeField(self.p, (self.val * other.val) % self.p)

    def __pow__(self, e: int) -> "PrimeField":
        return PrimeField(self.p, pow(self.val, e, self.p))

    def is_zero(self) -> bool:
        return self.val == 0

    def to_json(self) -> dict:
        return {"p": self.p, "deg": 1, "val": [self.val]}


@dataclass(frozen=True)
class QuadExtField:
    """Element c0 + c1*q of F_{p^2} = F_p[q] / (q^2 + b*q + c)."""

    p: int
    modulus: tuple  # (b, c) for q^2 + b q + c
    c0: int
    c1: int

    def _check(self, other: "QuadExtField") -> None:
        if (
            not isinstance(other, QuadExtField)
            or other.p != self.p
            or other.modulus != self.modulus
        ):
            raise RingMismatchError("operands lie in different quadratic extensions")

    def __add__(self, other: "QuadExtField") -> "QuadExtField":
        self._check(other)
        return QuadExtField(
            self.p, self.modulus, (self.c0 + other.c0) % self.p, (self.c1 + other.c1) % self.p
        )

    def __neg__(self) -> "QuadExtField":
        return QuadExtField(self.p, self.modulus, (-self.c0) % self.p, (-self.c1) % self.p)

    def __sub__(self, other: "QuadExtField") -> "QuadExtField":
        self._check(other)
        return self + (-other)

    def __mul__(self, other: "QuadExtField") -> "QuadExtField":
        self._check(other)
        b, c = self.modulus
        # (c0 + c1 q)(d0 + d1 q) with q^2 = -b q - c
        d0, d1 = other.c0, other.c1
        q2 = self.c1 * d1
        return QuadExtField(
            self.p,
            self.modulus,
            (self.c0 * d0 - q2 * c) % self.p,
            (self.c0 * d1 + self.c1 * d0 - q2 * b) % self.p,
        )

    def __pow__(self, e: int) -> "QuadExtField":
        if e < 0:
            # elements form a field; invert via the p^2 - 2 power
            return self ** ((self.p * self.p - 2) * (-e))
        result = QuadExtField(self.p, self.modulus, 1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def to_json(self) -> dict:
        return {"p": self.p, "deg": 2, "val": [self.c0, self.c1]}


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for sp in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks); raises if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


@dataclass(frozen=True)
class FieldDesc:
    """Description of the specialization field chosen for a prime."""

    p: int
    deg: int
    modulus: Optional[tuple] = None  # (b, c) for deg 2

    @property
    def order(self) -> int:
        return self.p**self.deg

    @property
    def name(self) -> str:
        return f"F{self.order}"

    def from_int(self, n: int):
        if self.deg == 1:
            return PrimeField(self.p, n % self.p)
        return QuadExtField(self.p, self.modulus, n % self.p, 0)

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)


@lru_cache(maxsize=None)
def find_eighth_root(p: int) -> "tuple[FieldDesc, object]":
    """Smallest field among F_p, F_{p^2} with an eighth root of -1, and one such root.

    p = 2 gives (F_2, 1).  For p = 1 mod 8 the root already lies in F_p and
    the smallest nonnegative one is returned.  Otherwise q^4 + 1 splits into
    two irreducible quadratics over F_p; the lexicographically smallest
    factor q^2 + b*q + c defines F_{p^2} and the class of q is the root.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return FieldDesc(2, 1), PrimeField(2, 1)
    m = p % 8
    if m == 1:
        i = sqrt_mod(p - 1, p)
        roots = []
        for r2 in (i, p - i):
            r = sqrt_mod(r2, p)
            roots.extend((r, p - r))
        root = min(roots)
        return FieldDesc(p, 1), PrimeField(p, root)
    if m == 5:
        i = sqrt_mod(p - 1, p)
        factors = [(0, i), (0, p - i)]  # q^4 + 1 = (q^2 + i)(q^2 - i)
    elif m == 3:
        w = sqrt_mod(p - 2, p)  # w^2 = -2
        factors = [(w, p - 1), (p - w, p - 1)]  # (q^2 + w q - 1)(q^2 - w q - 1)
    else:  # m == 7
        w = sqrt_mod(2, p)
        factors = [(w, 1), (p - w, 1)]  # (q^2 + w q + 1)(q^2 - w q + 1)
    modulus = min(factors)
    desc = FieldDesc(p, 2, modulus)
    return desc, QuadExtField(p, modulus, 0, 1)


def specialize_R(x: CycloBivariate, sigma, tau):
    """Ring homomorphism R -> K sending s -> sigma, t -> tau.

    Both images must satisfy v^4 = -1 in the target; the zero and one of
    the target are inferred from the images themselves.
    """
    one = sigma**0
    zero = one - one
    for v in (sigma, tau):
        if v**4 + one != zero:
            raise EighthRootError("image is not an eighth root of -1")
    spow = [one, sigma, sigma**2, sigma**3]
    tpow = [one, tau, tau**2, tau**3]
    acc = zero
    for i in range(4):
        for j in range(4):
            c = x.coeffs[i][j]
            if c:
                acc = acc + _int_scale(spow[i] * tpow[j], c)
    return acc


def _int_scale(v, c: int):
    """c * v by binary doubling, for any additive group element v."""
    zero = v - v
    if c < 0:
        v, c = -v, -c
    acc = zero
    while c:
        if c & 1:
            acc = acc + v
        v = v + v
        c >>= 1
    return acc


def gaussian_image(g: GaussianInt, i_image):
    """Map a Gaussian integer into a ring with a chosen square root of -1."""
    one = i_image**0
    return _int_scale(one, g.re) + _int_scale(i_image, g.im)


def gaussian_to_cyclo(g: GaussianInt) -> CycloBivariate:
    """Embed Z[iota] into R via iota -> s^2."""
    return gaussian_image(g, CycloBivariate.monomial(2, 0))
