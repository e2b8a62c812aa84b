"""Exact GF(q) arithmetic and the classical two-transitive groups.

Field elements are integers 0..q-1 encoding polynomial coefficient
vectors in base p (little-endian: element sum c_i x^i is the integer
sum c_i p^i), so 0 and 1 are always the additive and multiplicative
identities.  The modulus is the first monic irreducible of degree k in
that encoding order, making every construction reproducible.

Group constructors enumerate their elements outright (desk scale), then
wrap them with a small generator set whose closure is verified to
reproduce the enumeration exactly.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import (ConsistencyError, PreconditionError, SizeGuardError,
                     StructuralError)
from .permgroup import (DEFAULT_MAX_ELEMENTS, PermutationGroup,
                        group_from_elements)

FIELD_SIZE_CAP = 2**16

#: Construction guard for the affine planar groups, per their q^2-point
#: degree and q^3 (q^2 - 1)-scale orders.
PLANAR_GROUP_Q_CAP = 16
PSL_Q_CAP = 32


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _digits(n: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        n, r = divmod(n, base)
        out.append(r)
    return out


def _poly_rem(num, den, p):
    """Remainder of num modulo monic den; little-endian coefficient lists."""
    deg_d = len(den) - 1
    num = [c % p for c in num]
    if len(num) < deg_d:
        num += [0] * (deg_d - len(num))
    for top in range(len(num) - 1, deg_d - 1, -1):
        c = num[top]
        if c:
            shift = top - deg_d
            for i in range(deg_d + 1):
                num[shift + i] = (num[shift + i] - c * den[i]) % p
    return num[:deg_d]


def _is_irreducible(poly, p):
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for enc in range(p**d):
            div = _digits(enc, p, d) + [1]
            if not any(_poly_rem(poly, div, p)):
                return False
    return True


class FiniteField:
    """GF(p^k) with integer-encoded elements and exact operations."""

    __slots__ = ("p", "k", "q", "modulus", "_mul_table", "_inv_table")

    def __init__(self, p, k, modulus):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self._mul_table = None
        self._inv_table = None
        if self.q <= 256:
            q = self.q
            table = [0] * (q * q)
            for a in range(q):
                for b in range(a, q):
                    v = self._mul_raw(a, b)
                    table[a * q + b] = v
                    table[b * q + a] = v
            self._mul_table = table
            inv = [0] * q
            for a in range(1, q):
                inv[a] = self._pow_raw(a, q - 2)
            self._inv_table = inv

    def __repr__(self):
        return f"FiniteField(p={self.p}, k={self.k})"

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(_digits(a, self.p, self.k))

    def element(self, coeffs) -> int:
        total = 0
        for c in reversed(list(coeffs)):
            total = total * self.p + (c % self.p)
        return total

    def elements(self):
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        total, mult = 0, 1
        for _ in range(self.k):
            total += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return total

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        total, mult = 0, 1
        for _ in range(self.k):
            total += ((-a) % p) * mult
            a //= p
            mult *= p
        return total

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_raw(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        p, k = self.p, self.k
        da, db = _digits(a, p, k), _digits(b, p, k)
        conv = [0] * (2 * k - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    conv[i + j] = (conv[i + j] + ca * cb) % p
        return self.element(_poly_rem(conv, list(self.modulus), p))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a * self.q + b]
        return self._mul_raw(a, b)

    def _pow_raw(self, a: int, n: int) -> int:
        result = 1
        base = a
        while n:
            if n & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            n >>= 1
        return result

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise PreconditionError("zero is not invertible")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self._pow_raw(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def format_element(self, a: int) -> str:
        """Reports use the coefficient vector for non-prime fields."""
        if self.k == 1:
            return str(a)
        return "(" + ",".join(str(c) for c in self.coeffs(a)) + ")"


def _verify_field(field: FiniteField):
    q = field.q
    if q > 64:
        return
    for a in range(1, q):
        if field.mul(a, field.inv(a)) != 1:
            raise ConsistencyError(f"inverse failure at element {a}")
    sample = range(q) if q <= 16 else range(0, q, max(1, q // 16))
    for a in sample:
        for b in sample:
            for c in sample:
                lhs = field.mul(field.mul(a, b), c)
                if lhs != field.mul(a, field.mul(b, c)):
                    raise ConsistencyError("multiplication not associative")
                if field.mul(a, field.add(b, c)) != field.add(
                        field.mul(a, b), field.mul(a, c)):
                    raise ConsistencyError("distributivity failure")


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FiniteField:
    """GF(p^k) with the first monic irreducible modulus of degree k.

    Deterministic across runs: moduli are scanned in integer-encoding
    order of their non-leading coefficients.
    """
    if not _is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if k < 1:
        raise PreconditionError("extension degree must be positive")
    if p**k > FIELD_SIZE_CAP:
        raise SizeGuardError(f"field size {p**k} exceeds cap {FIELD_SIZE_CAP}")
    modulus = None
    for enc in range(p**k):
        cand = _digits(enc, p, k) + [1]
        if _is_irreducible(cand, p):
            modulus = cand
            break
    if modulus is None:
        raise ConsistencyError(f"no irreducible of degree {k} over GF({p})")
    field = FiniteField(p, k, modulus)
    _verify_field(field)
    return field


def field_from_order(q: int) -> FiniteField:
    """GF(q) for a prime power q."""
    if q < 2:
        raise PreconditionError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise PreconditionError(f"{q} is not a prime power")
    return make_field(p, k)


def point_index(field: FiniteField, x: int, y: int) -> int:
    """Index of the plane point (x, y) in 0..q^2-1."""
    return x * field.q + y


def _det2(field, a, b, c, d):
    return field.sub(field.mul(a, d), field.mul(b, c))


def _matrices(field, want_det):
    """All 2x2 matrices whose determinant satisfies the predicate."""
    q = field.q
    out = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if want_det(_det2(field, a, b, c, d)):
                        out.append((a, b, c, d))
    return out


def _linear_image(field, mat):
    """Point-index image array of the linear map given by mat."""
    q = field.q
    a, b, c, d = mat
    out = [0] * (q * q)
    for x in range(q):
        ax = field.mul(a, x)
        cx = field.mul(c, x)
        for y in range(q):
            u = field.add(ax, field.mul(b, y))
            v = field.add(cx, field.mul(d, y))
            out[x * q + y] = u * q + v
    return out


def _translation_tables(field):
    """trans[t][pidx] = index of the point translated by t."""
    q = field.q
    tables = []
    for tx in range(q):
        for ty in range(q):
            table = [0] * (q * q)
            for x in range(q):
                xs = field.add(x, tx) * q
                for y in range(q):
                    table[x * q + y] = xs + field.add(y, ty)
            tables.append(tuple(table))
    return tables


def _affine_group(q, want_det, expected_order, max_elements):
    field = field_from_order(q)
    if q > PLANAR_GROUP_Q_CAP:
        raise SizeGuardError(
            f"planar affine groups are guarded to q <= {PLANAR_GROUP_Q_CAP}")
    if expected_order > max_elements:
        raise SizeGuardError(
            f"group of order {expected_order} exceeds cap {max_elements}")
    mats = _matrices(field, want_det)
    trans = _translation_tables(field)
    elements = set()
    for mat in mats:
        lin = _linear_image(field, mat)
        for table in trans:
            elements.add(tuple(table[i] for i in lin))
    if len(elements) != expected_order:
        raise ConsistencyError(
            f"enumerated {len(elements)} affine maps, expected {expected_order}")
    ident = (1, 0, 0, 1)
    ident_lin = _linear_image(field, ident)
    seeds = []
    for i in range(field.k):
        u = field.p**i
        seeds.append(tuple(trans[point_index(field, u, 0)][j] for j in ident_lin))
        seeds.append(tuple(trans[0][j] for j in _linear_image(field, (1, u, 0, 1))))
        seeds.append(tuple(trans[0][j] for j in _linear_image(field, (1, 0, u, 1))))
        seeds.append(tuple(trans[point_index(field, 0, u)][j] for j in ident_lin))
    if want_det(0) is False and any(want_det(d) for d in range(2, field.q)):
        # a non-unimodular generator for the general linear case
        gamma = _primitive_element(field)
        seeds.append(tuple(trans[0][j]
                           for j in _linear_image(field, (gamma, 0, 0, 1))))
    return group_from_elements(q * q, elements, seeds)


def asl2_group(q: int, max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """The affine maps v -> Av + t on GF(q)^2 with det A = 1.

    Order q^3 (q^2 - 1); two-transitive on the q^2 plane points.
    """
    expected = q**3 * (q * q - 1)
    return _affine_group(q, lambda d: d == 1, expected, max_elements)


def agl2_group(q: int, max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """All invertible affine maps on GF(q)^2."""
    expected = q * q * (q * q - 1) * (q * q - q)
    return _affine_group(q, lambda d: d != 0, expected, max_elements)


def _primitive_element(field: FiniteField) -> int:
    q = field.q
    for g in range(2, q):
        e, order = g, 1
        while e != 1:
            e = field.mul(e, g)
            order += 1
        if order == q - 1:
            return g
    if q == 2:
        return 1
    raise ConsistencyError("no primitive element found")


def agl1_group(q: int, max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """The maps x -> a x + b with a != 0 on GF(q); order q(q-1)."""
    field = field_from_order(q)
    expected = q * (q - 1)
    if expected > max_elements:
        raise SizeGuardError(f"group of order {expected} exceeds cap")
    elements = set()
    for a in range(1, q):
        row = [field.mul(a, x) for x in range(q)]
        for b in range(q):
            elements.add(tuple(field.add(v, b) for v in row))
    if len(elements) != expected:
        raise ConsistencyError("affine line enumeration has the wrong size")
    seeds = [tuple(field.add(x, field.p**i) for x in range(q))
             for i in range(field.k)]
    if q > 2:
        gamma = _primitive_element(field)
        seeds.append(tuple(field.mul(gamma, x) for x in range(q)))
    return group_from_elements(q, elements, seeds)


def psl2_group(q: int, max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """PSL(2, q) acting on the projective line (q + 1 points).

    Points 0..q-1 are the affine values, point q is infinity.  Order
    q (q^2 - 1) / gcd(2, q - 1).
    """
    if q > PSL_Q_CAP:
        raise SizeGuardError(f"psl2 construction is guarded to q <= {PSL_Q_CAP}")
    field = field_from_order(q)
    expected = q * (q * q - 1) // (2 if q % 2 else 1)
    if expected > max_elements:
        raise SizeGuardError(f"group of order {expected} exceeds cap")
    infinity = q

    def moebius_perm(mat):
        a, b, c, d = mat
        images = []
        for x in range(q):
            den = field.add(field.mul(c, x), d)
            num = field.add(field.mul(a, x), b)
            images.append(field.div(num, den) if den else infinity)
        images.append(field.div(a, c) if c else infinity)
        return tuple(images)

    elements = {moebius_perm(mat)
                for mat in _matrices(field, lambda d: d == 1)}
    if len(elements) != expected:
        raise ConsistencyError(
            f"projective enumeration gave {len(elements)}, expected {expected}")
    seeds = [moebius_perm((1, field.p**i, 0, 1)) for i in range(field.k)]
    seeds.append(moebius_perm((0, field.neg(1), 1, 0)))
    return group_from_elements(q + 1, elements, seeds)


def group_from_spec(spec: str, max_elements=DEFAULT_MAX_ELEMENTS) -> PermutationGroup:
    """CLI group specifiers: asl2:q, agl1:q, agl2:q, psl2:q, file:<path>."""
    if ":" not in spec:
        raise StructuralError(f"bad group spec {spec!r}; expected name:arg")
    name, arg = spec.split(":", 1)
    if name == "file":
        from .permgroup import close, generators_from_text
        try:
            with open(arg, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise StructuralError(f"cannot read generator file {arg!r}: {exc}")
        return close(generators_from_text(text), max_elements=max_elements)
    builders = {"asl2": asl2_group, "agl1": agl1_group,
                "agl2": agl2_group, "psl2": psl2_group}
    if name not in builders:
        raise StructuralError(f"unknown group family {name!r}")
    try:
        q = int(arg)
    except ValueError as exc:
        raise StructuralError(f"bad field order {arg!r}") from exc
    return builders[name](q, max_elements=max_elements)
