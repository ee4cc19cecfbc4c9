"""Finite fields F_{p^D} with deterministic moduli, Frobenius, and subfield tests.

Fields are constructed with the lexicographically minimal monic irreducible
modulus (coefficient sequences compared from the constant term upward), so
repeated construction is reproducible across runs and machines.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    # modulus is monic, little-endian, degree D = len(modulus)-1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + ai * bj) % p
    d = len(modulus) - 1
    for k in range(len(res) - 1, d - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(d):
                res[k - d + j] = (res[k - d + j] - c * modulus[j]) % p
    del res[d:]
    return res


def _poly_powmod(a: list[int], e: int, modulus: list[int], p: int) -> list[int]:
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, modulus, p)
        base = _poly_mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        b_monic = [(c * inv) % p for c in b]
        r = list(a)
        while len(r) >= len(b_monic) and _poly_trim(r):
            if len(r) < len(b_monic):
                break
            c = r[-1]
            shift = len(r) - len(b_monic)
            for j, m in enumerate(b_monic):
                r[shift + j] = (r[shift + j] - c * m) % p
            _poly_trim(r)
        a, b = b, r
    return a


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(modulus: list[int], p: int) -> bool:
    d = len(modulus) - 1
    x = [0, 1]
    # x^(p^d) == x, and gcd(x^(p^(d/r)) - x, f) = 1 for prime r | d
    lhs = _poly_powmod(x, p ** d, modulus, p)
    while len(lhs) < 2:
        lhs.append(0)
    lhs[1] = (lhs[1] - 1) % p
    if _poly_trim(lhs):
        return False
    for r in _prime_factors(d):
        xe = _poly_powmod(x, p ** (d // r), modulus, p)
        diff = list(xe)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, modulus, p)
        if len(g) != 1:
            return False
    return True


class FqField:
    """The field F_{p^deg} = F_p[x]/(modulus)."""

    _cache: dict[tuple[int, int], "FqField"] = {}

    def __init__(self, p: int, deg: int, modulus: tuple[int, ...]):
        self.p = p
        self.deg = deg
        self.modulus = modulus  # little-endian, monic, length deg+1
        self.order = p ** deg
        self._embed_cache: dict[int, "FqElem"] = {}

    @classmethod
    def make(cls, p: int, deg: int) -> "FqField":
        """Deterministic field with the lex-minimal monic irreducible modulus."""
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if deg < 1:
            raise ValueError("degree must be >= 1")
        key = (p, deg)
        if key in cls._cache:
            return cls._cache[key]
        if deg == 1:
            fld = cls(p, 1, (0, 1))  # x: the empty-modulus convention for prime fields
            cls._cache[key] = fld
            return fld
        for lower in itertools.product(range(p), repeat=deg):
            modulus = list(lower) + [1]
            if _is_irreducible(modulus, p):
                fld = cls(p, deg, tuple(modulus))
                cls._cache[key] = fld
                return fld
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def elem(self, coeffs) -> "FqElem":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        c = [x % self.p for x in coeffs]
        if len(c) > self.deg:
            raise ValueError("coefficient sequence too long")
        c += [0] * (self.deg - len(c))
        return FqElem(self, tuple(c))

    @property
    def zero(self) -> "FqElem":
        return self.elem([])

    @property
    def one(self) -> "FqElem":
        return self.elem([1])

    @property
    def gen(self) -> "FqElem":
        if self.deg == 1:
            return self.one
        return self.elem([0, 1])

    def from_index(self, i: int) -> "FqElem":
        """The i-th element in lex order (constant coefficient varies slowest)."""
        digits = []
        for _ in range(self.deg):
            digits.append(i % self.p)
            i //= self.p
        digits.reverse()  # digits = (c_0, ..., c_{deg-1}), constant term most significant
        return self.elem(digits)

    def elements(self) -> Iterator["FqElem"]:
        for lower in itertools.product(range(self.p), repeat=self.deg):
            yield self.elem(list(lower))

    def embedding_root(self, d: int) -> "FqElem":
        """Lex-minimal root in self of the degree-d deterministic modulus.

        This root defines the embedding F_{p^d} -> F_{p^deg}.
        """
        if self.deg % d != 0:
            raise ValueError(f"{d} does not divide {self.deg}")
        if d in self._embed_cache:
            return self._embed_cache[d]
        sub = FqField.make(self.p, d)
        best = None
        for a in self.elements():
            acc = self.zero
            for c in reversed(sub.modulus):
                acc = acc * a + self.elem([c])
            if acc.is_zero():
                best = a
                break  # elements() iterates in lex order, first hit is minimal
        assert best is not None
        self._embed_cache[d] = best
        return best

    def embed(self, a: "FqElem") -> "FqElem":
        """Embed an element of a smaller deterministic field into self."""
        if a.field is self:
            return a
        root = self.embedding_root(a.field.deg)
        acc = self.zero
        for c in reversed(a.coeffs):
            acc = acc * root + self.elem([c])
        return acc

    def parse(self, s: str) -> "FqElem":
        """Parse 'g^2+g+1' style element text."""
        s = s.replace(" ", "").replace("-", "+-")
        coeffs = [0] * self.deg
        for term in s.split("+"):
            if not term:
                continue
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "g" not in term:
                c, e = int(term), 0
            else:
                head, _, tail = term.partition("g")
                c = int(head.rstrip("*")) if head else 1
                e = int(tail[1:]) if tail.startswith("^") else 1
            if e >= self.deg:
                raise ValueError(f"exponent {e} too large for degree {self.deg}")
            coeffs[e] = (coeffs[e] + (-c if neg else c)) % self.p
        return self.elem(coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FqField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"F_{self.p}^{self.deg}"


class FqElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FqField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "FqElem") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __add__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        p = self.field.p
        return FqElem(self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FqElem":
        p = self.field.p
        return FqElem(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other: "FqElem") -> "FqElem":
        self._check(other)
        fld = self.field
        prod = _poly_mulmod(list(self.coeffs), list(other.coeffs), list(fld.modulus), fld.p)
        prod += [0] * (fld.deg - len(prod))
        return FqElem(fld, tuple(prod))

    def __pow__(self, e: int) -> "FqElem":
        fld = self.field
        if self.is_zero():
            if e == 0:
                return fld.one
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return fld.zero
        e %= fld.order - 1
        out = _poly_powmod(list(self.coeffs), e, list(fld.modulus), fld.p)
        out += [0] * (fld.deg - len(out))
        return FqElem(fld, tuple(out))

    def inverse(self) -> "FqElem":
        return self ** (self.field.order - 2)

    def __truediv__(self, other: "FqElem") -> "FqElem":
        return self * other.inverse()

    def frobenius(self, k: int = 1, base_degree: int = 1) -> "FqElem":
        """a -> a^(q^k) with q = p^base_degree; fixes the degree-base_degree subfield."""
        if self.field.deg % base_degree != 0:
            raise ValueError("base_degree does not divide the field degree")
        return self ** (self.field.p ** (base_degree * k))

    def in_subfield(self, d: int) -> bool:
        """True iff a^(p^d) = a, i.e. a lies in the degree-d subfield."""
        if self.field.deg % d != 0:
            raise ValueError(f"{d} does not divide {self.field.deg}")
        return self.frobenius(1, d) == self

    def lex_index(self) -> int:
        """Position in the lex element order; used for deterministic choices."""
        # constant term is most significant
        i = 0
        for c in self.coeffs:
            i = i * self.field.p + c
        return i

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FqElem)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.modulus, self.coeffs))

    def __repr__(self) -> str:
        return self.render()

    def render(self) -> str:
        if self.is_zero():
            return "0"
        if self.field.deg == 1:
            return str(self.coeffs[0])
        parts = []
        for e in range(self.field.deg - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            if e == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}g" if e == 1 else f"{head}g^{e}")
        return "+".join(parts)
