"""Scalar root bracketing and golden-section search used across the package."""

import math

REL_TOL = 1e-12
MAX_ITER = 200

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


class BracketError(RuntimeError):
    pass


def expand_upper(pred, start=1.0, max_doublings=MAX_ITER):
    """Smallest ``start * 2**j`` (j >= 0) at which ``pred`` becomes true."""
    x = start
    for _ in range(max_doublings):
        if pred(x):
            return x
        x *= 2.0
    raise BracketError(f"predicate never satisfied below {x:g}")


def bisect_increasing(g, target, lo=0.0, hi=None, rel_tol=REL_TOL, max_iter=MAX_ITER):
    """Solve ``g(t) = target`` for nondecreasing ``g`` on ``[lo, inf)``.

    When ``hi`` is not given the bracket is grown through 1, 2, 4, ...
    until ``g(hi) >= target``.  Returns ``(t, iterations, width)``.
    """
    if hi is None:
        start = max(1.0, 2.0 * lo)
        hi = expand_upper(lambda t: g(t) >= target, start=start)
        if hi > start:
            lo = hi / 2.0
    it = 0
    while it < max_iter:
        if hi - lo <= rel_tol * max(abs(hi), 1e-300):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it, hi - lo


def golden_section_min(f, a, b, tol=1e-12, max_iter=MAX_ITER):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x), iterations)`` where ``x`` is the best probe seen.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    it = 0
    while h > tol * max(1.0, abs(a) + abs(b)) and it < max_iter:
        if yc < yd:
            b, d, yd = d, c, yc
            h = b - a
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = b - a
            d = a + INV_PHI * h
            yd = f(d)
        it += 1
    return (c, yc, it) if yc < yd else (d, yd, it)
