"""Vectorized adaptive Simpson quadrature and fixed Gauss-Legendre rules."""

from __future__ import annotations

import numpy as np

from .errors import QuadratureFailure

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 40

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _simpson(fa, fm, fb, width):
    width = width.reshape(width.shape + (1,) * (fa.ndim - 1))
    return width / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f, a, b, tol=DEFAULT_TOL, max_depth=DEFAULT_MAX_DEPTH,
                     initial_panels=4, return_panels=False):
    """Integrate ``f`` over each interval ``[a[i], b[i]]``.

    ``f`` must accept a 1-d array of abscissae of length N and return an
    array of shape ``(N,)`` or ``(N, m)``; in the second case the m
    integrands share the panels and a panel is accepted only when every
    component has converged.  All panels at one refinement level are evaluated in a single
    call.  A panel is accepted when the two-half estimate differs from the
    whole-panel estimate by at most ``15 * tol_panel``; the accepted value
    carries the Richardson correction.  Each interval receives tolerance
    ``tol`` split in proportion to panel width.

    With ``return_panels`` the accepted panels of interval 0 are returned
    too, as sorted arrays ``(lo, hi, value)``.
    """
    scalar = np.ndim(a) == 0 and np.ndim(b) == 0
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    n = a.shape[0]

    k = initial_panels
    frac = np.linspace(0.0, 1.0, k + 1)
    edges = a[:, None] + (b - a)[:, None] * frac
    edges[:, 0] = a
    edges[:, -1] = b
    lo = edges[:, :-1].ravel()
    hi = edges[:, 1:].ravel()
    owner = np.repeat(np.arange(n), k)
    ptol = np.repeat(np.abs(tol) / k * np.ones(n), k)
    mid = 0.5 * (lo + hi)
    fv = np.asarray(f(np.concatenate([lo, mid, hi])), dtype=float)
    flo, fmid, fhi = np.split(fv, 3)
    whole = _simpson(flo, fmid, fhi, hi - lo)
    result = np.zeros((n,) + fv.shape[1:])
    extra = (1,) * (fv.ndim - 1)

    kept = [[], [], []]
    for depth in range(max_depth + 1):
        if lo.size == 0:
            break
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        fv = np.asarray(f(np.concatenate([lm, rm])), dtype=float)
        flm, frm = np.split(fv, 2)
        left = _simpson(flo, flm, fmid, mid - lo)
        right = _simpson(fmid, frm, fhi, hi - mid)
        err = left + right - whole
        if not np.all(np.isfinite(err)):
            raise QuadratureFailure("integrand is not finite on the interval")
        done = np.abs(err) <= 15.0 * ptol.reshape(ptol.shape + extra)
        if done.ndim > 1:
            done = np.all(done.reshape(done.shape[0], -1), axis=1)
        if depth == max_depth and not np.all(done):
            raise QuadratureFailure(f"adaptive Simpson exceeded depth {max_depth}")
        val = left + right + err / 15.0
        np.add.at(result, owner[done], val[done])
        if return_panels:
            sel = done & (owner == 0)
            kept[0].append(lo[sel])
            kept[1].append(hi[sel])
            kept[2].append(val[sel])
        todo = ~done
        # split each unfinished panel into its two halves
        lo, mid, hi = (np.concatenate([lo[todo], mid[todo]]),
                       np.concatenate([lm[todo], rm[todo]]),
                       np.concatenate([mid[todo], hi[todo]]))
        flo, fmid, fhi = (np.concatenate([flo[todo], fmid[todo]]),
                          np.concatenate([flm[todo], frm[todo]]),
                          np.concatenate([fmid[todo], fhi[todo]]))
        whole = np.concatenate([left[todo], right[todo]])
        owner = np.concatenate([owner[todo], owner[todo]])
        ptol = np.concatenate([ptol[todo], ptol[todo]]) / 2.0

    out = result[0] if scalar else result
    if return_panels:
        plo = np.concatenate(kept[0])
        order = np.argsort(plo)
        return out, (plo[order], np.concatenate(kept[1])[order], np.concatenate(kept[2])[order])
    return out


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def fixed_gauss(f, a, b, n: int = 10):
    """n-point Gauss-Legendre rule on each ``[a, b]`` (arrays broadcast)."""
    x, w = gauss_legendre(n)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    centre = 0.5 * (b + a)
    pts = centre[..., None] + half[..., None] * x
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * np.sum(vals * w, axis=-1)


def cumulative_integral(f, nodes, tol=DEFAULT_TOL, max_depth=DEFAULT_MAX_DEPTH):
    """``[0, int_{x0}^{x1} f, int_{x0}^{x2} f, ...]`` for sorted ``nodes``.

    ``tol`` is shared between the pieces in proportion to their width.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.size < 2:
        return np.zeros_like(nodes)
    width = np.diff(nodes)
    total = nodes[-1] - nodes[0]
    ptol = tol * width / total if total > 0 else np.full_like(width, tol)
    pieces = adaptive_simpson(f, nodes[:-1], nodes[1:], tol=ptol, max_depth=max_depth)
    return np.concatenate([np.zeros((1,) + pieces.shape[1:]), np.cumsum(pieces, axis=0)])
