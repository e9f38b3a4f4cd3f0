"""Sparse multivariate polynomials and monic matrix pencils.

A ``Polynomial`` maps exponent tuples to complex coefficients.  It knows
how many variables it lives in, and optionally their names (used only
for printing).  Terms are kept in graded lexicographic order when
printed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionError,
    HomogeneityError,
    PolynomialSyntaxError,
    SizeCapError,
    SymmetryError,
    UnknownVariableError,
)

ZERO_THRESHOLD = 1e-300
MAX_VARS = 64
MAX_PENCIL_SIZE = 8


def _default_names(n):
    return tuple(f"x{i + 1}" for i in range(n))


class Polynomial:
    __slots__ = ("nvars", "terms", "names")

    def __init__(self, terms=None, nvars=None, names=None):
        terms = dict(terms or {})
        if nvars is None:
            if names is not None:
                nvars = len(names)
            elif terms:
                nvars = len(next(iter(terms)))
            else:
                raise DimensionError("cannot infer the number of variables")
        if nvars > MAX_VARS:
            raise DimensionError(f"at most {MAX_VARS} variables are supported")
        self.nvars = nvars
        self.names = tuple(names) if names is not None else None
        if self.names is not None and len(self.names) != nvars:
            raise DimensionError("names do not match the number of variables")
        clean = {}
        for exp, c in terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or min(exp, default=0) < 0:
                raise DimensionError(f"bad exponent vector {exp}")
            c = complex(c)
            if abs(c) > ZERO_THRESHOLD:
                clean[exp] = c
        self.terms = clean

    # construction helpers

    @classmethod
    def constant(cls, c, nvars, names=None):
        return cls({(0,) * nvars: c}, nvars, names)

    @classmethod
    def variable(cls, i, nvars, names=None):
        exp = [0] * nvars
        exp[i] = 1
        return cls({tuple(exp): 1.0}, nvars, names)

    @classmethod
    def linear_form(cls, coeffs, const=0.0, names=None):
        """``const + sum(coeffs[i] * x_i)``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(terms, n, names)

    def with_names(self, names):
        return Polynomial(self.terms, self.nvars, names)

    @property
    def var_names(self):
        return self.names or _default_names(self.nvars)

    # basic queries

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), 0j)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def is_zero(self):
        return not self.terms

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def is_real(self, tol=0.0):
        return all(abs(c.imag) <= tol * (1 + abs(c.real)) for c in self.terms.values())

    def max_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self):
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))

    def univariate_coeffs(self):
        """Dense coefficients, leading first (univariate only)."""
        if self.nvars != 1:
            raise DimensionError("not a univariate polynomial")
        d = max(self.degree(), 0)
        c = np.zeros(d + 1, dtype=complex)
        for (e,), v in self.terms.items():
            c[d - e] = v
        return c

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise DimensionError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0j) + c
        return Polynomial(terms, self.nvars, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()}, self.nvars, self.names)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            c = complex(other)
            return Polynomial({e: c * v for e, v in self.terms.items()}, self.nvars, self.names)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0j) + c1 * c2
        return Polynomial(terms, self.nvars, self.names)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * (1 / complex(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Polynomial.constant(1, self.nvars, self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Polynomial.constant(other, self.nvars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __call__(self, *point):
        if len(point) == 1 and np.ndim(point[0]) == 1:
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise DimensionError(f"expected {self.nvars} values, got {len(point)}")
        total = 0j
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total += term
        return total

    def __repr__(self):
        return f"Polynomial({formatPolynomial(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return formatPolynomial(self)

    def allclose(self, other, tol):
        diff = self - other
        return diff.max_coeff() <= tol

    def real_part(self):
        return Polynomial({e: c.real for e, c in self.terms.items()}, self.nvars, self.names)

    def derivative(self, i):
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return Polynomial(terms, self.nvars, self.names)

    def scale_variables(self, factors):
        """Substitute ``x_i -> factors[i] * x_i``."""
        terms = {}
        for e, c in self.terms.items():
            v = c
            for f, k in zip(factors, e):
                v *= f ** k
            terms[e] = v
        return Polynomial(terms, self.nvars, self.names)

    # json

    def to_json(self):
        return {
            "vars": list(self.var_names),
            "terms": [
                {"exp": list(e), "re": c.real, "im": c.imag} for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        names = obj["vars"]
        terms = {}
        for t in obj["terms"]:
            e = tuple(t["exp"])
            terms[e] = terms.get(e, 0j) + complex(t.get("re", 0.0), t.get("im", 0.0))
        return cls(terms, len(names), names)


def _drop(exp, i):
    return exp[:i] + exp[i + 1:]


def restrict(f: Polynomial, i: int, value) -> Polynomial:
    """Substitute ``x_i = value``; the result lives in the other variables."""
    if not 0 <= i < f.nvars:
        raise DimensionError(f"variable index {i} out of range")
    terms = {}
    for e, c in f.terms.items():
        k = _drop(e, i)
        terms[k] = terms.get(k, 0j) + c * (value ** e[i] if e[i] else 1)
    names = _drop(f.names, i) if f.names else None
    return Polynomial(terms, f.nvars - 1, names)


def dehomogenize(f: Polynomial, i: int = 0) -> Polynomial:
    if not f.is_homogeneous():
        raise HomogeneityError("polynomial is not homogeneous")
    return restrict(f, i, 1.0)


def homogenize(f: Polynomial, i: int = 0, degree=None, name=None) -> Polynomial:
    """Insert a new variable at position ``i`` making ``f`` homogeneous."""
    d = f.degree() if degree is None else degree
    terms = {e[:i] + (d - sum(e),) + e[i:]: c for e, c in f.terms.items()}
    names = None
    if f.names is not None:
        names = f.names[:i] + (name or "x0",) + f.names[i:]
    return Polynomial(terms, f.nvars + 1, names)


# --- text form -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>[jJ](?![A-Za-z_0-9]))?"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*^()])"
    r")"
)


def _natural_key(name):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("num") is not None:
            val = float(m.group("num"))
            tokens.append(("num", complex(0, val) if m.group("imag") else val, start))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, names):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = tuple(names)
        self.index = {n: k for k, n in enumerate(self.names)}
        self.n = len(self.names)

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise PolynomialSyntaxError(f"unexpected token {val!r}", pos)
        return p

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        p = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                t = self.term()
                p = p + t if val == "+" else p - t
            else:
                return p

    def term(self):
        p = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            elif kind in ("num", "ident") or (kind == "op" and val == "("):
                p = p * self.factor()
            else:
                return p

    def factor(self):
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            kind, e, pos = self.take()
            if kind != "num" or isinstance(e, complex) or e != int(e) or e < 0:
                raise PolynomialSyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(e)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Polynomial.constant(val, self.n, self.names)
        if kind == "ident":
            if val not in self.index:
                raise UnknownVariableError(f"unknown variable {val!r}", pos)
            return Polynomial.variable(self.index[val], self.n, self.names)
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val, pos = self.take()
            if not (kind == "op" and val == ")"):
                raise PolynomialSyntaxError("expected ')'", pos)
            return p
        raise PolynomialSyntaxError(
            "unexpected end of input" if kind == "end" else f"unexpected token {val!r}", pos
        )


def parsePolynomial(text: str, names: Sequence[str] | None = None) -> Polynomial:
    """Parse text such as ``"x^2 + 2*x*y - 3.5y + 1"``.

    Without ``names`` the variables are the identifiers found in ``text``
    in natural sort order (``x_2`` before ``x_10``).
    """
    if names is None:
        found = {val for kind, val, _ in _tokenize(text) if kind == "ident"}
        names = sorted(found, key=_natural_key)
    p = _Parser(text, names).parse()
    return p.with_names(tuple(names))


def _format_number(c: complex):
    if c.imag == 0:
        x = c.real
        if x == int(x) and abs(x) < 1e16:
            return str(int(x))
        return repr(x)
    im = repr(c.imag)
    return f"({c.real!r}{im if im.startswith('-') else '+' + im}j)"


def _format_monomial(exp, names):
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def formatPolynomial(p: Polynomial, names=None, digits=None) -> str:
    """Canonical text form; ``digits`` switches to rounded display."""
    names = names or p.var_names
    if p.is_zero():
        return "0"
    out = []
    for exp, c in p.sorted_terms():
        mono = _format_monomial(exp, names)
        negative = c.imag == 0 and c.real < 0
        if negative:
            c = -c
        num = _format_number(c) if digits is None else _fmt_scalar(c, digits)
        if mono and num == "1":
            body = mono
        elif mono:
            body = f"{num}*{mono}"
        else:
            body = num
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


# --- pencils -----------------------------------------------------------------


@dataclass
class MonicPencil:
    """``I + sum_i x_i A_i`` with symmetric (or Hermitian) ``A_i``.

    ``names`` label the affine variables; ``hom_name`` is the variable
    multiplying the identity in the homogeneous view.
    """

    matrices: list
    hermitian: bool = False
    names: tuple | None = None
    hom_name: str = "x0"
    check_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        mats = []
        for A in self.matrices:
            A = np.array(A, dtype=complex if self.hermitian else float)
            if A.ndim != 2 or A.shape[0] != A.shape[1]:
                raise DimensionError("pencil coefficients must be square")
            if np.abs(A - A.conj().T).max(initial=0.0) > self.check_tol * (1 + np.abs(A).max(initial=0.0)):
                raise SymmetryError("pencil coefficient is not symmetric/Hermitian")
            A = (A + A.conj().T) / 2
            mats.append(A)
        if len({A.shape for A in mats}) > 1:
            raise DimensionError("pencil coefficients differ in size")
        self.matrices = mats
        if self.names is not None:
            self.names = tuple(self.names)

    @property
    def size(self):
        return self.matrices[0].shape[0] if self.matrices else 0

    @property
    def nvars(self):
        return len(self.matrices)

    @property
    def var_names(self):
        return self.names or _default_names(self.nvars)

    def entry_forms(self):
        """Each entry of the homogeneous pencil as (identity, coeff vector)."""
        d = self.size
        M = np.stack(self.matrices, axis=-1) if self.matrices else np.zeros((d, d, 0))
        return np.eye(d), M

    def to_json(self):
        return {
            "size": self.size,
            "hermitian": self.hermitian,
            "vars": [self.hom_name, *self.var_names],
            "matrices": [
                {"re": A.real.tolist(), "im": A.imag.tolist()} if self.hermitian else A.tolist()
                for A in self.matrices
            ],
        }

    @classmethod
    def from_json(cls, obj):
        herm = bool(obj.get("hermitian", False))
        mats = []
        for m in obj["matrices"]:
            if isinstance(m, dict):
                mats.append(np.asarray(m["re"], float) + 1j * np.asarray(m["im"], float))
            else:
                mats.append(np.asarray(m, float))
        names = obj.get("vars")
        hom, rest = (names[0], names[1:]) if names else ("x0", None)
        p = cls(mats, hermitian=herm, names=rest, hom_name=hom, check_tol=1e-8)
        if "size" in obj and obj["size"] != p.size:
            raise DimensionError(f"declared size {obj['size']} does not match matrices")
        return p

    def format(self, digits=6, homogeneous=True):
        """Matrix of linear forms, one line per row."""
        d = self.size
        names = self.var_names
        cells = []
        for i in range(d):
            row = []
            for j in range(d):
                row.append(_format_linear_entry(
                    1.0 if i == j else 0.0,
                    [A[i, j] for A in self.matrices],
                    names, self.hom_name if homogeneous else None, digits,
                ))
            cells.append(row)
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("| " + " ".join(c.ljust(width) for c in row) + " |" for row in cells)

    def __str__(self):
        return self.format()


def _fmt_scalar(c, digits):
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.{digits}g}"
    return f"({c.real:.{digits}g}{c.imag:+.{digits}g}i)"


def _format_linear_entry(const, coeffs, names, hom_name, digits):
    parts = []
    if const:
        parts.append(hom_name if hom_name else "1")
    for c, name in zip(coeffs, names):
        c = complex(c)
        if c == 0:
            continue
        if c.imag == 0:
            s = _fmt_scalar(abs(c.real), digits)
            sign = "-" if c.real < 0 else "+"
            body = name if s == "1" else f"{s}{name}"
        else:
            sign, body = "+", f"{_fmt_scalar(c, digits)}{name}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign}{body}")
    if not parts:
        return "0"
    return "".join(parts)


def _linear_entry_poly(i, j, pencil, homogeneous):
    coeffs = [A[i, j] for A in pencil.matrices]
    if homogeneous:
        return Polynomial.linear_form([1.0 if i == j else 0.0, *coeffs])
    return Polynomial.linear_form(coeffs, const=1.0 if i == j else 0.0)


def determinant(entries, one):
    """Cofactor expansion with memoization on column subsets.

    ``entries[i][j]`` may be numbers or ``Polynomial`` values; ``one`` is
    the multiplicative identity of the ring.
    """
    d = len(entries)
    memo = {0: one}

    def minor(cols):
        # rows d - popcount(cols) .. d-1 against the columns in ``cols``
        if cols in memo:
            return memo[cols]
        r = d - bin(cols).count("1")
        total = None
        sign = 1
        for j in range(d):
            if cols >> j & 1:
                a = entries[r][j]
                if not (isinstance(a, (int, float, complex)) and a == 0) and not (
                    isinstance(a, Polynomial) and a.is_zero()
                ):
                    term = a * minor(cols & ~(1 << j))
                    term = term if sign > 0 else -term
                    total = term if total is None else total + term
                sign = -sign
        if total is None:
            total = one * 0
        memo[cols] = total
        return total

    return minor((1 << d) - 1)


def pencilDeterminant(pencil: MonicPencil, homogeneous=False) -> Polynomial:
    """``det(I + sum x_i A_i)`` expanded exactly into a Polynomial.

    With ``homogeneous=True`` the result is ``det(x0 I + sum x_i A_i)`` in
    ``nvars + 1`` variables, ``x0`` first.
    """
    d = pencil.size
    if d > MAX_PENCIL_SIZE:
        raise SizeCapError(f"symbolic determinant is limited to size {MAX_PENCIL_SIZE}")
    n = pencil.nvars + (1 if homogeneous else 0)
    entries = [[_linear_entry_poly(i, j, pencil, homogeneous) for j in range(d)] for i in range(d)]
    det = determinant(entries, Polynomial.constant(1.0, n))
    names = pencil.var_names
    names = (pencil.hom_name, *names) if homogeneous else names
    return det.with_names(names)


def pencilMatches(f: Polynomial, pencil: MonicPencil, tol=1e-5):
    """Compare ``f`` with the pencil's determinant coefficientwise.

    ``f`` may be affine (one variable per coefficient matrix) or
    homogeneous with the identity variable first.  Returns
    ``(ok, residual)`` where ``residual = max|f - det| / (1 + max|f|)``.
    """
    if f.nvars == pencil.nvars:
        det = pencilDeterminant(pencil)
    elif f.nvars == pencil.nvars + 1:
        det = pencilDeterminant(pencil, homogeneous=True)
    else:
        raise DimensionError(
            f"polynomial has {f.nvars} variables, pencil has {pencil.nvars} matrices"
        )
    residual = (f - det).max_coeff() / (1 + f.max_coeff())
    return residual <= tol, float(residual)


def pencil_value(pencil: MonicPencil, point: Iterable[float]):
    """Numeric matrix ``I + sum x_i A_i`` at a point."""
    point = list(point)
    M = np.eye(pencil.size, dtype=complex)
    for x, A in zip(point, pencil.matrices):
        M = M + x * A
    return M
