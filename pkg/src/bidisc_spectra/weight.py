"""Bivariate polynomial weights.

A weight is a finite map ``(i, j) -> c`` for the monomial ``z1**i z2**j``.
Rotations of the bidisc send polynomials to polynomials, so cocycles along
rotation pairs are expanded exactly; anything involving a parabolic or
hyperbolic factor is only ever evaluated pointwise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from . import kernels
from .errors import ExponentTooLarge, WeightSyntaxError, ZeroPolynomial, ZeroWeight

MAX_EXPONENT = 64

Coeffs = Dict[Tuple[int, int], complex]


class WeightPoly:
    """Immutable bivariate polynomial with complex coefficients."""

    __slots__ = ("_coeffs", "_array", "deg1", "deg2")

    def __init__(self, coeffs: Mapping[Tuple[int, int], complex]):
        clean = {}
        for (i, j), c in coeffs.items():
            c = complex(c)
            if i < 0 or j < 0:
                raise ValueError("exponents must be nonnegative")
            if c != 0:
                clean[(int(i), int(j))] = c
        self._coeffs = dict(sorted(clean.items()))
        self.deg1 = max((i for i, _ in self._coeffs), default=0)
        self.deg2 = max((j for _, j in self._coeffs), default=0)
        self._array = None

    @classmethod
    def constant(cls, c) -> "WeightPoly":
        return cls({(0, 0): c})

    @classmethod
    def from_array(cls, arr, drop_below: float = 0.0) -> "WeightPoly":
        arr = np.asarray(arr, dtype=np.complex128)
        cutoff = drop_below * (np.abs(arr).max() if arr.size else 0.0)
        return cls({(i, j): arr[i, j] for i, j in zip(*np.nonzero(np.abs(arr) > cutoff))})

    @property
    def coeffs(self) -> Coeffs:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    @property
    def array(self) -> np.ndarray:
        if self._array is None:
            a = np.zeros((self.deg1 + 1, self.deg2 + 1), dtype=np.complex128)
            for (i, j), c in self._coeffs.items():
                a[i, j] = c
            a.setflags(write=False)
            self._array = a
        return self._array

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        return isinstance(other, WeightPoly) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        return f"WeightPoly({self._coeffs!r})"

    def __call__(self, z1, z2):
        w, _, _ = kernels.poly_eval_grad(self.array, z1, z2)
        if np.ndim(w) == 0:
            return complex(w)
        return w

    def eval_grad(self, z1, z2):
        return kernels.poly_eval_grad(self.array, z1, z2)

    def __add__(self, other):
        out = dict(self._coeffs)
        for k, c in _as_poly(other).items():
            out[k] = out.get(k, 0) + c
        return WeightPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return WeightPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        out: Coeffs = {}
        for (i, j), c in self._coeffs.items():
            for (k, l), d in other.items():
                key = (i + k, j + l)
                out[key] = out.get(key, 0) + c * d
        return WeightPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WeightPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def transpose(self) -> "WeightPoly":
        """w(z2, z1)."""
        return WeightPoly({(j, i): c for (i, j), c in self._coeffs.items()})

    def rotate(self, a1: complex, a2: complex) -> "WeightPoly":
        """w(a1 z1, a2 z2)."""
        return WeightPoly({(i, j): c * a1**i * a2**j for (i, j), c in self._coeffs.items()})

    def lipschitz_constants(self):
        """(D1, D2, D11, D12, D22): coefficient bounds on the partials over the closed bidisc."""
        D = [0.0] * 5
        for (i, j), c in self._coeffs.items():
            m = abs(c)
            D[0] += m * i
            D[1] += m * j
            D[2] += m * i * (i - 1)
            D[3] += m * i * j
            D[4] += m * j * (j - 1)
        return tuple(D)

    @property
    def lipschitz(self) -> float:
        """L = sum |c_ij| (i + j)."""
        return sum(abs(c) * (i + j) for (i, j), c in self._coeffs.items())

    @property
    def coefficient_norm(self) -> float:
        return sum(abs(c) for c in self._coeffs.values())


def _as_poly(x) -> WeightPoly:
    if isinstance(x, WeightPoly):
        return x
    return WeightPoly.constant(x)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)(?P<imag>i(?![A-Za-z0-9_]))?|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None:
                raise WeightSyntaxError(pos, "number, z1, z2, i, operator or parenthesis", text)
            start = m.start(m.lastgroup if m.lastgroup != "imag" else "num")
            if m.group("num") is not None:
                start = m.start("num")
                kind = "imag" if m.group("imag") else "num"
                self.tokens.append((kind, m.group("num"), start))
            elif m.group("name") is not None:
                start = m.start("name")
                name = m.group("name")
                if name not in ("z1", "z2", "i"):
                    raise WeightSyntaxError(start, "z1, z2 or i", text)
                self.tokens.append(("name", name, start))
            else:
                start = m.start("op")
                self.tokens.append(("op", m.group("op"), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> WeightPoly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise WeightSyntaxError(pos, "operator or end of input", self.text)
        return p

    def expr(self):
        p = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            _, op, _ = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise WeightSyntaxError(pos, "nonnegative integer exponent", self.text)
            n = int(val)
            if n > MAX_EXPONENT:
                raise ExponentTooLarge(f"exponent {n} at position {pos} exceeds {MAX_EXPONENT}")
            return base**n
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return WeightPoly.constant(float(val))
        if kind == "imag":
            return WeightPoly.constant(1j * float(val))
        if kind == "name":
            if val == "i":
                return WeightPoly.constant(1j)
            return WeightPoly({(1, 0): 1} if val == "z1" else {(0, 1): 1})
        if (kind, val) == ("op", "("):
            p = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise WeightSyntaxError(p2, "')'", self.text)
            return p
        raise WeightSyntaxError(pos, "operand", self.text)


def parse_weight(text: str) -> WeightPoly:
    """Parse a weight expression such as ``"2 + z1*z2"`` or ``"(z1 + i)^2"``."""
    return _Parser(text).parse()


def format_weight(w: WeightPoly) -> str:
    def num(c):
        if c.imag == 0:
            return repr(c.real)
        if c.real == 0:
            return f"{c.imag!r}i"
        return f"({c.real!r}+{c.imag!r}i)"

    terms = []
    for (i, j), c in w.items():
        parts = [num(c)]
        if i:
            parts.append("z1" if i == 1 else f"z1^{i}")
        if j:
            parts.append("z2" if j == 1 else f"z2^{j}")
        terms.append("*".join(parts))
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# evaluation and cocycles


def eval(w: WeightPoly, z1, z2):
    return w(z1, z2)


def eval_naive(w: WeightPoly, z1: complex, z2: complex) -> complex:
    return sum(c * z1**i * z2**j for (i, j), c in w.items())


def _as_pair(phi):
    if hasattr(phi, "apply"):
        return phi
    return _DiagonalPair(*phi)


class _DiagonalPair:
    def __init__(self, f, g):
        self.f, self.g = f, g

    def apply(self, z1, z2):
        return self.f(z1), self.g(z2)


def cocycle(w, phi, n: int, point) -> complex:
    """w_n(point) = prod_{k<n} w(Phi^k(point)).

    ``phi`` is a pair of maps acting coordinatewise or any object with an
    ``apply(z1, z2)`` method.
    """
    if n < 1:
        raise ValueError("n must be positive")
    Phi = _as_pair(phi)
    z1, z2 = point
    out = 1.0 + 0j
    for _ in range(n):
        out *= w(z1, z2)
        z1, z2 = Phi.apply(z1, z2)
    return complex(out)


def rotation_cocycle(w: WeightPoly, a1: complex, a2: complex, n: int) -> WeightPoly:
    """Exact expansion of w_n for Phi(z) = (a1 z1, a2 z2)."""
    out = w
    for k in range(1, n):
        out = out * w.rotate(a1**k, a2**k)
    scale = max((abs(c) for _, c in out.items()), default=0.0)
    eps = 1e-13 * scale
    clean = {}
    for k, c in out.items():
        re, im = (c.real if abs(c.real) > eps else 0.0), (c.imag if abs(c.imag) > eps else 0.0)
        if re or im:
            clean[k] = complex(re, im)
    return WeightPoly(clean)


@dataclass(frozen=True)
class FactoredWeight:
    s: int
    t: int
    w_tilde: WeightPoly

    @property
    def hypothesis(self) -> bool:
        return (0, 0) in self.w_tilde.coeffs

    def reconstruct(self) -> WeightPoly:
        return WeightPoly({(i + self.s, j + self.t): c for (i, j), c in self.w_tilde.items()})


def factor_monomial(w: WeightPoly) -> FactoredWeight:
    if w.is_zero():
        raise ZeroWeight("weight is identically zero")
    s = min(i for i, _ in w.coeffs)
    t = min(j for _, j in w.coeffs)
    return FactoredWeight(s, t, WeightPoly({(i - s, j - t): c for (i, j), c in w.items()}))


def restrict(w: WeightPoly, axis: str, value: complex) -> Polynomial:
    """Substitute ``value`` for ``axis`` ('z1' or 'z2'); result in the other variable."""
    if axis not in ("z1", "z2"):
        raise ValueError("axis must be 'z1' or 'z2'")
    deg = w.deg2 if axis == "z1" else w.deg1
    c = np.zeros(deg + 1, dtype=np.complex128)
    for (i, j), a in w.items():
        if axis == "z1":
            c[j] += a * value**i
        else:
            c[i] += a * value**j
    return Polynomial(c)


def univariate_to_weight(p: Polynomial, axis: str = "z1") -> WeightPoly:
    if axis == "z1":
        return WeightPoly({(k, 0): c for k, c in enumerate(p.coef)})
    return WeightPoly({(0, k): c for k, c in enumerate(p.coef)})


def _trimmed(p: Polynomial) -> np.ndarray:
    c = np.asarray(p.coef, dtype=np.complex128)
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ZeroPolynomial("polynomial is identically zero")
    return c[: nz[-1] + 1]


def mahler_measure(p) -> float:
    """|leading coefficient| * prod max(1, |root|)."""
    if isinstance(p, (int, float, complex)):
        p = Polynomial([p])
    c = _trimmed(p)
    lead = abs(c[-1])
    if len(c) == 1:
        return float(lead)
    roots = Polynomial(c).roots()
    return float(lead * np.prod(np.maximum(1.0, np.abs(roots))))


def mahler_quadrature(p, nodes: int = 2**14) -> float:
    """exp of the circle average of log|p|, trapezoid rule on shifted nodes."""
    if isinstance(p, (int, float, complex)):
        p = Polynomial([p])
    c = _trimmed(p)
    theta = 2 * np.pi * (np.arange(nodes) + 0.5 + 0.123456789) / nodes
    vals = np.abs(Polynomial(c)(np.exp(1j * theta)))
    with np.errstate(divide="ignore"):
        return float(np.exp(np.mean(np.log(vals))))


def log_integral_is_finite(w: WeightPoly, zeta: complex) -> bool:
    """Whether int log|w(e^{it}, zeta)| dt > -inf; false only for an identically zero slice."""
    c = restrict(w, "z2", zeta).coef
    scale = max(w.coefficient_norm, 1e-300)
    return bool(np.any(np.abs(c) > 1e-13 * scale))
