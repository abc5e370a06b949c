"""Band-limited helpers shared by the transforms and the grid backends:
periodic refinement, spectral differentiation, and exact differentiation
of fields that are low-degree bivariate polynomials.
"""
from __future__ import annotations

import numpy as np

# total degree up to which a sampled field is recognized as a polynomial
POLY_DETECT_DEGREE = 8
POLY_DETECT_RTOL = 1e-10


def trig_refine(values, axis=0):
    """Double the sampling rate along `axis` of a periodic sample set.

    Standard zero-padding of the centered spectrum; the Nyquist coefficient
    is split evenly between +N/2 and -N/2 so real input stays real.
    """
    f = np.moveaxis(np.asarray(values, dtype=complex), axis, 0)
    m = f.shape[0]
    h = m // 2
    F = np.fft.fft(f, axis=0)
    G = np.zeros((2 * m,) + f.shape[1:], dtype=complex)
    G[:h] = F[:h]
    G[h] = 0.5 * F[h]
    G[2 * m - h] = 0.5 * F[h]
    G[2 * m - h + 1:] = F[h + 1:]
    return np.moveaxis(np.fft.ifft(G, axis=0) * 2.0, 0, axis)


def spectral_derivative(values, length, axis, order=1):
    """order-th derivative along a periodic axis of physical extent `length`."""
    n = values.shape[axis]
    k = 2j * np.pi * np.fft.fftfreq(n, d=length / n)
    mult = k**order
    if order % 2 == 1:
        # odd derivative of the (real) Nyquist mode vanishes on the lattice
        mult = mult.copy()
        mult[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    return np.fft.ifft(np.fft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)


class PolyRep:
    """Exact bivariate polynomial representation of a sampled field."""

    def __init__(self, coeffs):
        # coeffs[(ax, ap)] -> complex coefficient of x^ax p^ap
        self.coeffs = coeffs

    def derivative(self, wrt, times=1):
        c = dict(self.coeffs)
        for _ in range(times):
            out = {}
            for (ax, ap), v in c.items():
                if wrt == 0 and ax > 0:
                    out[(ax - 1, ap)] = out.get((ax - 1, ap), 0.0) + ax * v
                elif wrt == 1 and ap > 0:
                    out[(ax, ap - 1)] = out.get((ax, ap - 1), 0.0) + ap * v
            c = out
        return PolyRep(c)

    def sample(self, X, Pm):
        out = np.zeros(np.broadcast(X, Pm).shape, dtype=complex)
        for (ax, ap), v in self.coeffs.items():
            out = out + v * (X**ax) * (Pm**ap)
        return out


def detect_polynomial(values, X, Pm, degree=POLY_DETECT_DEGREE, rtol=POLY_DETECT_RTOL):
    """Least-squares fit by monomials of total degree <= degree.

    Returns a PolyRep when the fit reproduces the samples to rtol * sup|values|
    (which it does exactly, up to conditioning, for sampled polynomials),
    otherwise None.
    """
    scale = np.abs(values).max()
    if scale == 0.0:
        return PolyRep({})
    sx = max(np.abs(X).max(), 1.0)
    sp = max(np.abs(Pm).max(), 1.0)
    xs = (X / sx) * np.ones_like(Pm)
    ps = (Pm / sp) * np.ones_like(X)
    step = max(1, xs.size // 8192)
    xf, pf, vf = xs.ravel()[::step], ps.ravel()[::step], values.ravel()[::step]
    cols, expo = [], []
    for tot in range(degree + 1):
        for ax in range(tot + 1):
            cols.append(xf**ax * pf**(tot - ax))
            expo.append((ax, tot - ax))
    M = np.stack(cols, axis=1)
    coef, *_ = np.linalg.lstsq(M, vf, rcond=None)
    if np.abs(M @ coef - vf).max() > rtol * scale:
        return None
    # verify on the full grid before trusting the representation
    rep = PolyRep({(ax, ap): c / (sx**ax * sp**ap)
                   for (ax, ap), c in zip(expo, coef) if c != 0.0})
    if np.abs(rep.sample(X, Pm) - values).max() > 10 * rtol * scale:
        return None
    return rep
