"""Finite fields F_p and F_{p^s} in a fixed polynomial basis.

A field is described once (characteristic, extension degree, modulus) and
elements are immutable coordinate vectors in the basis 1, u, ..., u^(s-1),
where u is the residue class of the modulus variable.  Display prefers the
power notation "u^k" / "-u^k" whenever the field is small enough to carry a
power table of u; everything else falls back to comma-separated coordinates.

Odd characteristic only.
"""

from __future__ import annotations

import itertools

from .exactq import is_prime


class FieldConstructionError(ValueError):
    """Bad (p, s, modulus) data at field construction."""


class UnsupportedCharacteristicError(FieldConstructionError):
    """Characteristic 2 is outside the supported family."""


class FieldParseError(ValueError):
    """Malformed element text; carries the offending position."""

    def __init__(self, text: str, pos: int, why: str):
        super().__init__(f"cannot parse {text!r} at position {pos}: {why}")
        self.text = text
        self.pos = pos


# ---------------------------------------------------------------------------
# small helpers on coefficient lists over F_p (low degree first), used only
# for modulus validation; the public polynomial type lives in fpoly
# ---------------------------------------------------------------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymulmod(a, b, f, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _polyrem(out, f, p)


def _polyrem(a, f, p):
    a = list(a)
    dn, df = len(a) - 1, len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for i in range(dn, df - 1, -1):
        c = a[i] % p
        if c:
            c = c * inv_lead % p
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df])


def _polygcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _polyrem(a, b, p)
    return a


def _powmod_x(e: int, f, p):
    """x^e mod f by square and multiply on coefficient lists."""
    result = [1]
    base = _polyrem([0, 1], f, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, f, p)
        base = _polymulmod(base, base, f, p)
        e >>= 1
    return result


def _is_irreducible(f: list[int], p: int) -> bool:
    s = len(f) - 1
    if s < 1:
        return False
    if s == 1:
        return True
    # x^(p^s) = x mod f, and x^(p^(s/l)) - x coprime to f for prime l | s
    xq = _powmod_x(p**s, f, p)
    if _trim(list(xq)) != [0, 1]:
        return False
    for ell in _prime_divisors(s):
        g = _powmod_x(p ** (s // ell), f, p)
        g = g + [0] * (2 - len(g))
        g[1] = (g[1] - 1) % p
        if len(_polygcd(_trim(g), f, p)) > 1:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
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


# ---------------------------------------------------------------------------
# field descriptor and elements
# ---------------------------------------------------------------------------

_POWER_TABLE_BOUND = 1 << 16

_field_cache: dict[tuple, "FieldDesc"] = {}


def make_field(p: int, s: int, modulus=None) -> "FieldDesc":
    """Build (or fetch the cached) descriptor for F_{p^s}.

    The modulus is a low-to-high coefficient sequence of a monic irreducible
    of degree s over F_p.  When omitted, the lexicographically least monic
    irreducible (coordinates compared low-degree-first) is selected, which
    for s = 1 is the polynomial X itself.
    """
    if p == 2:
        raise UnsupportedCharacteristicError("characteristic 2 is not supported")
    if not is_prime(p):
        raise FieldConstructionError(f"{p} is not prime")
    if s < 1:
        raise FieldConstructionError("extension degree must be positive")
    if modulus is None:
        modulus = _default_modulus(p, s)
    mod = tuple(int(c) % p for c in modulus)
    if len(mod) != s + 1:
        raise FieldConstructionError(
            f"modulus degree {len(mod) - 1} does not match extension degree {s}"
        )
    if mod[-1] != 1:
        raise FieldConstructionError("modulus must be monic")
    key = (p, s, mod)
    cached = _field_cache.get(key)
    if cached is not None:
        return cached
    if not _is_irreducible(list(mod), p):
        raise FieldConstructionError(f"modulus {list(mod)} is reducible over F_{p}")
    field = FieldDesc(p, s, mod)
    _field_cache[key] = field
    return field


def _default_modulus(p: int, s: int) -> list[int]:
    if s == 1:
        return [0, 1]
    for tail in itertools.product(range(p), repeat=s):
        if tail[0] == 0:
            continue  # divisible by X
        cand = list(tail) + [1]
        if any(_polyeval(cand, a, p) == 0 for a in range(p)):
            continue  # has a root in F_p
        if _is_irreducible(cand, p):
            return cand
    raise FieldConstructionError(f"no irreducible of degree {s} over F_{p}")


def _polyeval(c, a, p):
    acc = 0
    for coef in reversed(c):
        acc = (acc * a + coef) % p
    return acc


class FieldDesc:
    """Immutable descriptor of F_{p^s}; also the element factory."""

    def __init__(self, p: int, s: int, modulus: tuple[int, ...]):
        self.p = p
        self.s = s
        self.modulus = modulus
        self.order = p**s
        # u^j written in the basis, for j up to 2s-2 (enough to reduce any
        # product of two basis vectors)
        self._upow_reduction = self._build_reduction()
        self.zero = FieldElement(self, (0,) * s)
        self.one = FieldElement(self, (1,) + (0,) * (s - 1))
        self._log_table = None
        if s > 1 and self.order <= _POWER_TABLE_BOUND:
            self._log_table = self._build_log_table()

    def _build_reduction(self):
        p, s = self.p, self.s
        rows = []
        cur = [0] * s
        cur[0] = 1
        for _ in range(2 * s - 1):
            rows.append(tuple(cur))
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for j in range(s):
                    cur[j] = (cur[j] - carry * self.modulus[j]) % p
        return rows

    def _build_log_table(self):
        table = {}
        x = self.one
        u = self.u
        for k in range(self.order - 1):
            if x.coeffs in table:
                break
            table[x.coeffs] = k
            x = x * u
        return table

    @property
    def u(self) -> "FieldElement":
        """Residue class of the modulus variable (s >= 2), or 1 when s = 1."""
        if self.s == 1:
            return self.one
        return FieldElement(self, (0, 1) + (0,) * (self.s - 2))

    def el(self, coeffs) -> "FieldElement":
        c = tuple(int(x) % self.p for x in coeffs)
        if len(c) != self.s:
            raise ValueError(f"expected {self.s} coordinates, got {len(c)}")
        return FieldElement(self, c)

    def from_int(self, n: int) -> "FieldElement":
        return FieldElement(self, (n % self.p,) + (0,) * (self.s - 1))

    def elements(self):
        for tail in itertools.product(range(self.p), repeat=self.s):
            yield FieldElement(self, tail)

    def nonzero_elements(self):
        for x in self.elements():
            if not x.is_zero():
                yield x

    def __repr__(self):
        return f"FieldDesc(p={self.p}, s={self.s}, modulus={list(self.modulus)})"

    def __str__(self):
        return f"F_{self.order}"


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldDesc, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError("elements of different fields cannot be combined")

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        self._check(other)
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        p, s = f.p, f.s
        if s == 1:
            return FieldElement(f, (self.coeffs[0] * other.coeffs[0] % p,))
        raw = [0] * (2 * s - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    raw[i + j] = (raw[i + j] + a * b) % p
        out = [0] * s
        for j, c in enumerate(raw):
            if c:
                row = f._upow_reduction[j]
                for t in range(s):
                    out[t] = (out[t] + c * row[t]) % p
        return FieldElement(f, tuple(out))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field is self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __repr__(self):
        return f"<{format_element(self)} in {self.field}>"

    def __str__(self):
        return format_element(self)


# ---------------------------------------------------------------------------
# Frobenius maps
# ---------------------------------------------------------------------------


def frobenius(x: FieldElement, t: int) -> FieldElement:
    """x^(p^t), by repeated p-th powering."""
    if t < 1:
        raise ValueError("Frobenius exponent must be positive")
    p = x.field.p
    for _ in range(t % x.field.s):
        x = x**p
    return x


def frobenius_inverse(x: FieldElement, t: int) -> FieldElement:
    """The unique y with frobenius(y, t) = x."""
    s = x.field.s
    j = (-t) % s
    if j == 0:
        return x
    return frobenius(x, j)


def degree_over_prime(x: FieldElement) -> int:
    """Degree of the minimal polynomial of x over F_p."""
    p, s = x.field.p, x.field.s
    y = x
    for d in range(1, s + 1):
        y = y**p
        if y == x:
            return d
    raise AssertionError("Frobenius orbit did not close within s steps")


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------


def format_element(x: FieldElement) -> str:
    f = x.field
    if f.s == 1:
        c = x.coeffs[0]
        return str(c - f.p if c > f.p // 2 else c)
    if x.is_zero():
        return "0"
    table = f._log_table
    if table is not None:
        k_pos = table.get(x.coeffs)
        k_neg = table.get((-x).coeffs)
        if k_pos is not None and (k_neg is None or k_pos <= k_neg):
            return _power_text(k_pos, positive=True)
        if k_neg is not None:
            return _power_text(k_neg, positive=False)
    return ",".join(str(c) for c in x.coeffs)


def _power_text(k: int, positive: bool) -> str:
    sign = "" if positive else "-"
    if k == 0:
        return sign + "1"
    if k == 1:
        return sign + "u"
    return f"{sign}u^{k}"


def parse_element(field: FieldDesc, text: str) -> FieldElement:
    raw = text
    t = text.strip()
    if not t:
        raise FieldParseError(raw, 0, "empty")
    if "," in t:
        parts = t.split(",")
        if len(parts) != field.s:
            raise FieldParseError(raw, 0, f"expected {field.s} coordinates")
        coords = []
        pos = 0
        for part in parts:
            try:
                coords.append(int(part.strip()))
            except ValueError:
                raise FieldParseError(raw, pos, f"bad coordinate {part.strip()!r}") from None
            pos += len(part) + 1
        return field.el(coords)
    sign = 1
    body = t
    if body.startswith(("-", "+")):
        if body[0] == "-":
            sign = -1
        body = body[1:].strip()
        if not body:
            raise FieldParseError(raw, len(raw), "dangling sign")
    if body.startswith("u"):
        if field.s == 1:
            raise FieldParseError(raw, t.find("u"), "no generator in a prime field")
        rest = body[1:]
        if rest == "":
            k = 1
        elif rest.startswith("^"):
            try:
                k = int(rest[1:])
            except ValueError:
                raise FieldParseError(raw, t.find("^") + 1, "bad exponent") from None
            if k < 0:
                raise FieldParseError(raw, t.find("^") + 1, "negative exponent")
        else:
            raise FieldParseError(raw, t.find("u") + 1, "expected '^' after generator")
        val = field.u**k
        return -val if sign < 0 else val
    try:
        n = int(body)
    except ValueError:
        raise FieldParseError(raw, 0, "not an integer, power, or vector") from None
    val = field.from_int(n)
    return -val if sign < 0 else val


# ---------------------------------------------------------------------------
# the worked-example field over 27 elements
# ---------------------------------------------------------------------------


def f27_preset() -> FieldDesc:
    """F_27 presented by the modulus X^3 + X^2 - X + 1 (so u^13 = -1)."""
    return make_field(3, 3, [1, -1, 1, 1])
