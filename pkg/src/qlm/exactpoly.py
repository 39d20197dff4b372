"""Exact sparse multivariate polynomial arithmetic over the rationals.

Coefficients are `fractions.Fraction` throughout; every identity this
package checks is exact, so floating point never appears.  A polynomial
carries an explicit, ordered tuple of variable names, and arithmetic
between polynomials over different variable lists is an error rather
than an implicit union (`substitute` is the one operation that builds a
union list, and it does so explicitly).

Terms are stored sparsely as a dict from exponent tuples to nonzero
coefficients.  The canonical term order is graded lexicographic over
the declared variable order (higher total degree first, ties broken by
the exponent of the earliest variable), descending; printing and
relation normalisation both use it.

Exponents are machine integers; total degrees in this package stay
below ~12, far from any overflow concern.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction

Scalar = Union[int, Fraction]


class StructuralError(ValueError):
    """Shape mismatch: variable lists, unbound variables, non-closed paths."""


class DomainError(ValueError):
    """Input outside an operation's mathematical domain."""


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def grlex_key(exponents: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sort key for graded-lex order; larger key = larger monomial."""
    return (sum(exponents), exponents)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    Do not mutate ``terms`` after construction; all operations return
    new instances, and instances may be shared freely across threads.
    """

    __slots__ = ("variables", "terms", "_hash")

    variables: tuple[str, ...]
    terms: dict[tuple[int, ...], Fraction]

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[tuple[int, ...], Scalar] | Iterable[tuple[tuple[int, ...], Scalar]] = (),
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise StructuralError(f"duplicate variable names in {variables}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        canon: dict[tuple[int, ...], Fraction] = {}
        nvars = len(variables)
        for exp, coeff in items:
            exp = tuple(exp)
            if len(exp) != nvars:
                raise StructuralError(
                    f"exponent vector {exp} has length {len(exp)}, expected {nvars}"
                )
            if any(e < 0 for e in exp):
                raise DomainError(f"negative exponent in {exp}")
            c = canon.get(exp, _ZERO_FRACTION) + _as_fraction(coeff)
            if c:
                canon[exp] = c
            elif exp in canon:
                del canon[exp]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", canon)
        object.__setattr__(self, "_hash", None)

    # construction helpers -------------------------------------------------

    @classmethod
    def _make(cls, variables: tuple[str, ...], terms: dict[tuple[int, ...], Fraction]) -> "Polynomial":
        # internal fast path: caller guarantees canonical terms
        self = object.__new__(cls)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls._make(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], value: Scalar) -> "Polynomial":
        variables = tuple(variables)
        c = _as_fraction(value)
        if not c:
            return cls._make(variables, {})
        return cls._make(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise StructuralError(f"{name!r} is not among variables {variables}")
        exp = tuple(1 if v == name else 0 for v in variables)
        return cls._make(variables, {exp: Fraction(1)})

    @classmethod
    def symbols(cls, *names: str) -> tuple["Polynomial", ...]:
        """Variable polynomials x_1, ..., x_n over the shared list (x_1, ..., x_n)."""
        return tuple(cls.variable(names, n) for n in names)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Polynomial is immutable")

    # basic queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        """Maximal total degree; the zero polynomial has degree 0 by convention."""
        return max((sum(e) for e in self.terms), default=0)

    def min_degree(self) -> int:
        if not self.terms:
            raise DomainError("zero polynomial has no minimal degree")
        return min(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in canonical (graded-lex descending) order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], Fraction]:
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        exp = max(self.terms, key=grlex_key)
        return exp, self.terms[exp]

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponents), _ZERO_FRACTION)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self.terms), default=0)

    def used_variables(self) -> tuple[str, ...]:
        """Variables that occur with a positive exponent, in declared order."""
        used = [False] * len(self.variables)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise StructuralError(f"{name!r} is not among variables {self.variables}") from None

    def _check_compatible(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise StructuralError(
                f"variable lists differ: {self.variables} vs {other.variables}"
            )

    def _coerce(self, other: "Polynomial | Scalar") -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return other
        return Polynomial.constant(self.variables, other)

    # arithmetic ------------------------------------------------------------

    def __add__(self, other: "Polynomial | Scalar") -> "Polynomial":
        other = self._coerce(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp)
            s = c if s is None else s + c
            if s:
                out[exp] = s
            elif exp in out:
                del out[exp]
        return Polynomial._make(self.variables, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._make(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "Polynomial | Scalar") -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: "Polynomial | Scalar") -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = _as_fraction(other)
            if not c:
                return Polynomial.zero(self.variables)
            return Polynomial._make(self.variables, {e: k * c for e, k in self.terms.items()})
        self._check_compatible(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple[int, ...], Fraction] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                s = get(exp)
                s = ca * cb if s is None else s + ca * cb
                if s:
                    out[exp] = s
                elif exp in out:
                    del out[exp]
        return Polynomial._make(self.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "Polynomial":
        c = _as_fraction(scalar)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError(f"polynomial power must be a nonnegative integer, got {exponent!r}")
        result = Polynomial.constant(self.variables, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # evaluation and composition ---------------------------------------------

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at a point binding every variable in the list.

        Extra bindings are ignored, which lets one sample dictionary
        serve a whole family of polynomials over the same list.
        """
        values: list[Scalar] = []
        for v in self.variables:
            if v not in point:
                raise StructuralError(f"unbound variable {v!r}")
            values.append(point[v])
        if not self.terms:
            return Fraction(0)
        max_exp = [0] * len(self.variables)
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e > max_exp[i]:
                    max_exp[i] = e
        powers: list[list[Scalar]] = []
        for val, m in zip(values, max_exp):
            row: list[Scalar] = [1]
            acc: Scalar = 1
            for _ in range(m):
                acc = acc * val
                row.append(acc)
            powers.append(row)
        total: Scalar = 0
        for exp, coeff in self.terms.items():
            t: Scalar = coeff
            for i, e in enumerate(exp):
                if e:
                    t = t * powers[i][e]
            total += t
        return _as_fraction(total)

    def substitute(self, bindings: Mapping[str, "Polynomial | Scalar"]) -> "Polynomial":
        """Compose with the given bindings, exactly.

        Every bound name must occur in this polynomial's variable list;
        unbound variables pass through unchanged.  The result lives over
        the union list: this polynomial's variables (in order, bound ones
        retained) followed by new variables introduced by binding values,
        in order of first appearance.
        """
        unknown = [k for k in bindings if k not in self.variables]
        if unknown:
            raise StructuralError(f"bound variables {unknown} do not occur in {self.variables}")
        coerced: dict[str, Polynomial] = {}
        for k, val in bindings.items():
            if isinstance(val, Polynomial):
                coerced[k] = val
            else:
                coerced[k] = Polynomial.constant((), val)

        result_vars = list(self.variables)
        seen = set(result_vars)
        for v in self.variables:
            b = coerced.get(v)
            if b is None:
                continue
            for nv in b.variables:
                if nv not in seen:
                    seen.add(nv)
                    result_vars.append(nv)
        rvars = tuple(result_vars)
        if not self.terms:
            return Polynomial.zero(rvars)

        # value of each of our variables as a polynomial over rvars
        images: list[Polynomial] = []
        for v in self.variables:
            b = coerced.get(v)
            if b is None:
                images.append(Polynomial.variable(rvars, v))
            else:
                images.append(b.with_variables(rvars))
        return _expand_composition(self, images, rvars)

    def derivative(self, name: str) -> "Polynomial":
        """Formal partial derivative with respect to one variable."""
        i = self._index(name)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in self.terms.items():
            e = exp[i]
            if not e:
                continue
            new = exp[:i] + (e - 1,) + exp[i + 1:]
            c = out.get(new, _ZERO_FRACTION) + coeff * e
            if c:
                out[new] = c
            elif new in out:
                del out[new]
        return Polynomial._make(self.variables, out)

    def lowest_degree_part(self) -> "Polynomial":
        """Sum of all terms of minimal total degree (a homogeneous polynomial)."""
        if not self.terms:
            raise DomainError("the zero polynomial has no lowest-degree part")
        d = min(sum(e) for e in self.terms)
        return Polynomial._make(
            self.variables, {e: c for e, c in self.terms.items() if sum(e) == d}
        )

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._make(
            self.variables, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    # variable-list surgery ---------------------------------------------------

    def with_variables(self, new_variables: Sequence[str]) -> "Polynomial":
        """Re-express over a different list containing every used variable."""
        new_variables = tuple(new_variables)
        if new_variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(new_variables)}
        if len(pos) != len(new_variables):
            raise StructuralError(f"duplicate variable names in {new_variables}")
        index_map: list[int | None] = []
        for v in self.variables:
            index_map.append(pos.get(v))
        n = len(new_variables)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, coeff in self.terms.items():
            new = [0] * n
            for i, e in enumerate(exp):
                if not e:
                    continue
                j = index_map[i]
                if j is None:
                    raise StructuralError(
                        f"variable {self.variables[i]!r} is used but absent from {new_variables}"
                    )
                new[j] = e
            out[tuple(new)] = coeff
        return Polynomial._make(new_variables, out)

    def rename_variables(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Bijectively rename variables, keeping their order."""
        new_vars = tuple(mapping.get(v, v) for v in self.variables)
        if len(set(new_vars)) != len(new_vars):
            raise StructuralError(f"renaming is not injective: {new_vars}")
        return Polynomial._make(new_vars, dict(self.terms))

    # printing -----------------------------------------------------------------

    def monomial_str(self, exponents: tuple[int, ...]) -> str:
        parts = [
            v if e == 1 else f"{v}^{e}"
            for v, e in zip(self.variables, exponents)
            if e
        ]
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for exp, coeff in self.sorted_terms():
            mono = self.monomial_str(exp)
            mag = abs(coeff)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{_frac_str(mag)}*{mono}"
            else:
                body = _frac_str(mag)
            if not pieces:
                pieces.append(f"-{body}" if coeff < 0 else body)
            else:
                pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


_ZERO_FRACTION = Fraction(0)


def _frac_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# composition engine
#
# Substitution expands sums of products of binding powers.  Exponent vectors
# are packed into single integers (a fixed bit field per variable) so that
# multiplying monomials is one integer addition, and the monomials of the
# outer polynomial are walked as a prefix tree so shared partial products
# are computed once.  Variables are processed in order of decreasing binding
# size, which keeps the large bindings at shallow tree depth.
# ---------------------------------------------------------------------------


def _pack_poly(p: Polynomial, bits: int) -> dict[int, Fraction]:
    shifts = [bits * i for i in range(len(p.variables))]
    out: dict[int, Fraction] = {}
    for exp, coeff in p.terms.items():
        key = 0
        for e, s in zip(exp, shifts):
            if e:
                key += e << s
        out[key] = coeff
    return out


def _unpack_terms(packed: Mapping[int, Fraction], nvars: int, bits: int) -> dict[tuple[int, ...], Fraction]:
    mask = (1 << bits) - 1
    out: dict[tuple[int, ...], Fraction] = {}
    for key, coeff in packed.items():
        exp = []
        k = key
        for _ in range(nvars):
            exp.append(k & mask)
            k >>= bits
        out[tuple(exp)] = coeff
    return out


def _packed_mul(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    if len(a) > len(b):
        a, b = b, a
    out: dict[int, Fraction] = {}
    get = out.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            s = get(k)
            s = ca * cb if s is None else s + ca * cb
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def _expand_composition(
    outer: Polynomial, images: list[Polynomial], rvars: tuple[str, ...]
) -> Polynomial:
    # bit width: enough for the largest single exponent the expansion can reach
    bound = 1
    img_degrees = [max(1, img.total_degree()) for img in images]
    for exp in outer.terms:
        d = sum(e * img_degrees[i] for i, e in enumerate(exp))
        bound = max(bound, d)
    bits = bound.bit_length() + 1
    nvars = len(rvars)

    # visit outer variables with the biggest bindings first
    order = sorted(range(len(images)), key=lambda i: (-len(images[i].terms), i))
    packed_images = {i: _pack_poly(images[i], bits) for i in order}
    power_cache: dict[int, list[dict[int, Fraction]]] = {
        i: [{0: Fraction(1)}, packed_images[i]] for i in order
    }

    def image_power(i: int, e: int) -> dict[int, Fraction]:
        cache = power_cache[i]
        while len(cache) <= e:
            cache.append(_packed_mul(cache[-1], cache[1]))
        return cache[e]

    reordered = sorted(
        (tuple(exp[i] for i in order), coeff) for exp, coeff in outer.terms.items()
    )
    acc: dict[int, Fraction] = {}
    stack: list[dict[int, Fraction]] = [{0: Fraction(1)}]
    prev: tuple[int, ...] | None = None
    n = len(order)
    for exp, coeff in reordered:
        if prev is None:
            shared = 0
        else:
            shared = 0
            while shared < n and exp[shared] == prev[shared]:
                shared += 1
        del stack[shared + 1:]
        for depth in range(shared, n):
            e = exp[depth]
            top = stack[-1]
            stack.append(_packed_mul(top, image_power(order[depth], e)) if e else top)
        prev = exp
        for k, c in stack[-1].items():
            s = acc.get(k)
            s = coeff * c if s is None else s + coeff * c
            if s:
                acc[k] = s
            elif k in acc:
                del acc[k]
    return Polynomial._make(rvars, _unpack_terms(acc, nvars, bits))


# ---------------------------------------------------------------------------
# matrices with polynomial entries
# ---------------------------------------------------------------------------


class PolyMatrix:
    """Square matrix of polynomials over one shared variable list."""

    __slots__ = ("entries",)

    entries: tuple[tuple[Polynomial, ...], ...]

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise StructuralError("matrix entries must form a nonempty square array")
        variables = rows[0][0].variables
        for row in rows:
            for entry in row:
                if entry.variables != variables:
                    raise StructuralError("matrix entries must share one variable list")
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("PolyMatrix is immutable")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.entries[0][0].variables

    @classmethod
    def identity(cls, variables: Sequence[str], n: int) -> "PolyMatrix":
        one = Polynomial.constant(variables, 1)
        zero = Polynomial.zero(variables)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def _check(self, other: "PolyMatrix") -> None:
        if self.size != other.size:
            raise StructuralError(f"matrix sizes differ: {self.size} vs {other.size}")
        if self.variables != other.variables:
            raise StructuralError("matrices must share one variable list")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ]
        )

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        n = self.size
        cols = list(zip(*other.entries))
        return PolyMatrix(
            [
                [_dot(self.entries[i], cols[j]) for j in range(n)]
                for i in range(n)
            ]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def scale(self, scalar: Polynomial | Scalar) -> "PolyMatrix":
        return PolyMatrix([[e * scalar for e in row] for row in self.entries])

    def trace(self) -> Polynomial:
        t = Polynomial.zero(self.variables)
        for i in range(self.size):
            t = t + self.entries[i][i]
        return t

    def traceless(self) -> "PolyMatrix":
        """Subtract (trace/n) times the identity."""
        shift = self.trace() / self.size
        rows = [list(row) for row in self.entries]
        for i in range(self.size):
            rows[i][i] = rows[i][i] - shift
        return PolyMatrix(rows)

    def det(self) -> Polynomial:
        n = self.size
        e = self.entries
        if n == 1:
            return e[0][0]
        if n == 2:
            return e[0][0] * e[1][1] - e[0][1] * e[1][0]
        if n == 3:
            return (
                e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
                - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
                + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
            )
        raise DomainError(f"determinant implemented for sizes 1..3, got {n}")

    def __repr__(self) -> str:
        rows = "; ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self.entries)
        return f"PolyMatrix({rows})"


def _dot(row: Sequence[Polynomial], col: Sequence[Polynomial]) -> Polynomial:
    acc = Polynomial.zero(row[0].variables)
    for a, b in zip(row, col):
        acc = acc + a * b
    return acc


def content_normalized(p: Polynomial) -> Polynomial:
    """Divide by the rational content; the graded-lex leading coefficient becomes +/-1 times primitive.

    The result has integer coprime coefficients and the same sign pattern
    as the input (no sign normalisation here).
    """
    if not p.terms:
        return p
    from math import gcd

    num = 0
    den = 1
    for c in p.terms.values():
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    content = Fraction(num, den)
    return p / content
