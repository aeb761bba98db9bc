"""Modified Bessel functions I0, I1, K0, K1 (double precision).

Thin validating wrappers over the selected kernel backend. Relative accuracy
is ~1e-15 on [1e-8, 600]; arguments beyond 600 raise OverflowError (the
secular-equation solvers never need them, and plain I would overflow soon
after). Exponentially scaled variants live on the kernel backend and are
used internally by the radial solvers; they are not part of this surface.
"""

from .backend import kernels as _k

_RANGE_MAX = 600.0


def _check(x: float, positive: bool) -> float:
    x = float(x)
    if x != x:
        raise ValueError("bessel argument is NaN")
    if positive:
        if x <= 0.0:
            raise ValueError(f"K requires x > 0, got {x}")
    elif x < 0.0:
        raise ValueError(f"I requires x >= 0, got {x}")
    if x > _RANGE_MAX:
        raise OverflowError(f"bessel argument {x} beyond supported range {_RANGE_MAX}")
    return x


def bessel_i0(x: float) -> float:
    return _k.i0(_check(x, positive=False))


def bessel_i1(x: float) -> float:
    return _k.i1(_check(x, positive=False))


def bessel_k0(x: float) -> float:
    return _k.k0(_check(x, positive=True))


def bessel_k1(x: float) -> float:
    return _k.k1(_check(x, positive=True))
