"""Exact polynomial Weyl symbols with hbar kept as a formal (graded) variable.

A PolySymbol stores complex coefficients keyed by (x_degree, p_degree,
hbar_degree). The star product of two polynomials is evaluated through the
finite Bopp expansion, which terminates, so algebraic identities (the
canonical bracket, the cubic bracket anomaly, Jacobi, Leibniz) hold at the
coefficient level rather than at sampled hbar values.
"""
from __future__ import annotations

from math import comb, factorial

import numpy as np

MAX_XP_DEGREE = 64
PRUNE_BELOW = 1e-300


class DegreeOverflowError(ValueError):
    pass


class PolySymbol:
    """Bivariate polynomial symbol; terms: {(x_deg, p_deg, hbar_deg): coeff}."""

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in terms.items():
                self._accumulate(key, c)
        self._check_degree()

    # -- construction helpers -------------------------------------------------
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0, 0): 1.0})

    @classmethod
    def x(cls):
        return cls({(1, 0, 0): 1.0})

    @classmethod
    def p(cls):
        return cls({(0, 1, 0): 1.0})

    @classmethod
    def monomial(cls, x_deg, p_deg, coeff=1.0, hbar_deg=0):
        return cls({(x_deg, p_deg, hbar_deg): coeff})

    # -- internals -------------------------------------------------------------
    def _accumulate(self, key, c):
        c = complex(c) + self.terms.get(key, 0.0)
        if abs(c) <= PRUNE_BELOW:
            self.terms.pop(key, None)
        else:
            self.terms[key] = c

    def _check_degree(self):
        for (a, b, _h) in self.terms:
            if a + b > MAX_XP_DEGREE:
                raise DegreeOverflowError(
                    f"total (x,p) degree {a + b} exceeds {MAX_XP_DEGREE}")

    # -- algebra ----------------------------------------------------------------
    def __add__(self, other):
        out = PolySymbol(dict(self.terms))
        for key, c in other.terms.items():
            out._accumulate(key, c)
        return out

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, PolySymbol):
            out = PolySymbol()
            for (a1, b1, h1), c1 in self.terms.items():
                for (a2, b2, h2), c2 in other.terms.items():
                    out._accumulate((a1 + a2, b1 + b2, h1 + h2), c1 * c2)
            out._check_degree()
            return out
        out = PolySymbol()
        for key, c in self.terms.items():
            out._accumulate(key, c * complex(other))
        return out

    __rmul__ = __mul__

    def conj(self):
        """Complex conjugate with hbar treated as real."""
        return PolySymbol({k: c.conjugate() for k, c in self.terms.items()})

    def hbar_shifted(self, shift):
        """Multiply by hbar**shift (shift may be negative if divisible)."""
        out = {}
        for (a, b, h), c in self.terms.items():
            if h + shift < 0:
                raise ValueError("negative hbar degree after shift")
            out[(a, b, h + shift)] = c
        return PolySymbol(out)

    def div_ihbar(self):
        """Divide by (i hbar): lowers every hbar degree by one."""
        return self.hbar_shifted(-1) * (-1j)

    def deriv(self, wrt):
        """Partial derivative, wrt = 'x' or 'p'."""
        out = PolySymbol()
        for (a, b, h), c in self.terms.items():
            if wrt == "x" and a > 0:
                out._accumulate((a - 1, b, h), a * c)
            elif wrt == "p" and b > 0:
                out._accumulate((a, b - 1, h), b * c)
        return out

    def degree(self):
        return max((a + b for (a, b, _h) in self.terms), default=0)

    def coefficient(self, x_deg, p_deg, hbar_deg=0):
        return self.terms.get((x_deg, p_deg, hbar_deg), 0.0)

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def eval(self, x, p, hbar=1.0):
        """Numeric evaluation; broadcasts over array arguments."""
        out = np.zeros(np.broadcast(np.asarray(x), np.asarray(p)).shape, dtype=complex)
        for (a, b, h), c in self.terms.items():
            out = out + c * np.asarray(x)**a * np.asarray(p)**b * hbar**h
        return out

    def __eq__(self, other):
        return isinstance(other, PolySymbol) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "PolySymbol(0)"
        bits = []
        for (a, b, h), c in sorted(self.terms.items()):
            pows = "*".join(f"{s}^{d}" if d > 1 else s
                            for s, d in (("x", a), ("p", b), ("hbar", h)) if d)
            bits.append(f"({c:g})*{pows}" if pows else f"({c:g})")
        return "PolySymbol(" + " + ".join(bits) + ")"


def allclose(A: PolySymbol, B: PolySymbol, rtol=1e-12) -> bool:
    """Coefficient-wise comparison relative to the largest coefficient."""
    scale = max(A.max_abs_coeff(), B.max_abs_coeff(), 1e-300)
    keys = set(A.terms) | set(B.terms)
    return all(abs(A.terms.get(k, 0.0) - B.terms.get(k, 0.0)) <= rtol * scale for k in keys)


def poly_star(A: PolySymbol, B: PolySymbol, hbar=None) -> PolySymbol:
    """Star product through the terminating Bopp expansion.

    With hbar=None the result keeps hbar as a graded formal variable;
    a numeric hbar substitutes it into the coefficients.
    """
    order = min(A.degree(), B.degree())
    out = PolySymbol()
    # cache iterated derivatives
    dA = {(0, 0): A}
    dB = {(0, 0): B}
    for k in range(order + 1):
        for j in range(k + 1):
            ax, ap = k - j, j           # d_x^(k-j) d_p^j A
            bx, bp = j, k - j           # d_x^j d_p^(k-j) B
            if (ax, ap) not in dA:
                src = dA[(ax - 1, ap)] if ax else dA[(ax, ap - 1)]
                dA[(ax, ap)] = src.deriv("x" if ax else "p")
            if (bx, bp) not in dB:
                src = dB[(bx - 1, bp)] if bx else dB[(bx, bp - 1)]
                dB[(bx, bp)] = src.deriv("x" if bx else "p")
            coef = (0.5j)**k / factorial(k) * ((-1)**j * comb(k, j))
            term = (dA[(ax, ap)] * dB[(bx, bp)]) * coef
            out = out + term.hbar_shifted(k)
    if hbar is not None:
        collapsed = PolySymbol()
        for (a, b, h), c in out.terms.items():
            collapsed._accumulate((a, b, 0), c * hbar**h)
        out = collapsed
    return out


def poly_moyal_bracket(A: PolySymbol, B: PolySymbol) -> PolySymbol:
    """A*B - B*A, exact; the result is odd in hbar."""
    return poly_star(A, B) - poly_star(B, A)


def poly_poisson_bracket(A: PolySymbol, B: PolySymbol) -> PolySymbol:
    return A.deriv("x") * B.deriv("p") - A.deriv("p") * B.deriv("x")
