"""Standard operator monotone functions and the scalar matrix-mean machinery.

A standard operator monotone function f satisfies operator monotonicity
(checked here through a sampled scalar surrogate plus 2x2 spot checks in the
test suite), the symmetry f(x) = x f(1/x), and f(1) = 1.  Every coherence
measure in this package is parametrized by one such f; the associated mean is
m_f(x, y) = y f(x/y) with the boundary value m_f(x, 0) = x f(0).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .linops import ValidationError

# fixed logarithmic sampling grid used for all scalar validation checks
GRID = 2.0 ** np.arange(-20, 21)

SYMMETRY_TOL = 1e-10
NORMALIZATION_TOL = 1e-12
MONOTONE_TOL = 1e-12


class ScalarFunction:
    """A named positive function on [0, inf) with its value at 0 attached.

    f(0) is stored analytically rather than taken by limit because it enters
    means and skew-information prefactors exactly.
    """

    __slots__ = ("name", "f0", "_fn")

    def __init__(self, name: str, fn, f0: float):
        self.name = name
        self._fn = fn
        self.f0 = float(f0)

    def __call__(self, x):
        return self._fn(np.asarray(x, dtype=float))

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class MonotoneFunction(ScalarFunction):
    """ScalarFunction validated as standard: symmetric, normalized, and
    nondecreasing on the sampling grid."""

    def __init__(self, name: str, fn, f0: float):
        super().__init__(name, fn, f0)
        self._validate()

    def _validate(self):
        one = float(self(1.0))
        if abs(one - 1.0) > NORMALIZATION_TOL:
            raise ValidationError(f"{self.name}: f(1) = {one!r}, must equal 1")
        vals = self(GRID)
        sym = GRID * self(1.0 / GRID)
        bad = np.abs(vals - sym) > SYMMETRY_TOL * np.maximum(1.0, vals)
        if np.any(bad):
            x = GRID[bad][0]
            raise ValidationError(
                f"{self.name}: symmetry f(x) = x f(1/x) fails at x={x!r} "
                f"({float(self(x))!r} vs {float(x * self(1.0 / x))!r})"
            )
        drops = np.diff(vals) < -MONOTONE_TOL * np.maximum(1.0, vals[:-1])
        if np.any(drops):
            k = int(np.argmax(drops))
            raise ValidationError(
                f"{self.name}: not nondecreasing between x={GRID[k]!r} and x={GRID[k + 1]!r}"
            )
        if self.f0 < 0:
            raise ValidationError(f"{self.name}: f(0) = {self.f0!r} is negative")


@lru_cache(maxsize=None)
def sld() -> MonotoneFunction:
    """f(x) = (1+x)/2, the arithmetic mean; f(0) = 1/2."""
    return MonotoneFunction("sld", lambda x: (1.0 + x) / 2.0, 0.5)


@lru_cache(maxsize=None)
def wy() -> MonotoneFunction:
    """f(x) = ((sqrt(x)+1)/2)^2; f(0) = 1/4."""
    return MonotoneFunction("wy", lambda x: ((np.sqrt(x) + 1.0) / 2.0) ** 2, 0.25)


def _wyd_eval(alpha: float):
    a1 = (alpha - 1.0) / 2.0
    a2 = (alpha - 1.0) * (alpha - 2.0) / 6.0
    a3 = (alpha - 1.0) * (alpha - 2.0) * (alpha - 3.0) / 24.0
    beta = 1.0 - alpha
    b1 = (beta - 1.0) / 2.0
    b2 = (beta - 1.0) * (beta - 2.0) / 6.0
    b3 = (beta - 1.0) * (beta - 2.0) * (beta - 3.0) / 24.0
    # coefficients of g(t) = [(x^a-1)/(a t)] * [(x^b-1)/(b t)], t = x-1
    c1 = a1 + b1
    c2 = a2 + a1 * b1 + b2
    c3 = a3 + a2 * b1 + a1 * b2 + b3
    # 1/g to third order; relative truncation error O(t^4) < 1e-16 for |t| < 1e-4
    d1, d2, d3 = -c1, c1 * c1 - c2, -c1 ** 3 + 2.0 * c1 * c2 - c3

    def fn(x):
        x = np.asarray(x, dtype=float)
        t = x - 1.0
        near = np.abs(t) < 1e-4
        ts = np.where(near, t, 0.0)
        series = 1.0 + ts * (d1 + ts * (d2 + ts * d3))
        xf = np.where(near, 2.0, x)  # dummy argument keeps the direct branch finite
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = (
                alpha * beta * (xf - 1.0) ** 2
                / ((xf ** alpha - 1.0) * (xf ** beta - 1.0))
            )
        return np.where(near, series, direct)

    return fn


def wyd(alpha: float) -> MonotoneFunction:
    """Interpolating family f(x) = a(1-a)(x-1)^2 / ((x^a-1)(x^(1-a)-1)).

    Defined for 0 < alpha < 1; alpha = 1/2 coincides with ``wy``.  The
    removable singularity at x = 1 is handled by a short Taylor expansion.
    """
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"wyd alpha must lie in (0, 1), got {alpha!r}")
    return MonotoneFunction(f"wyd:{alpha:g}", _wyd_eval(alpha), alpha * (1.0 - alpha))


def registry() -> list[MonotoneFunction]:
    """The built-in standard functions."""
    return [sld(), wy()]


def by_name(name: str) -> MonotoneFunction:
    """Resolve 'sld', 'wy', or 'wyd:<alpha>' to a validated function."""
    token = name.strip().lower()
    if token == "sld":
        return sld()
    if token == "wy":
        return wy()
    if token.startswith("wyd:"):
        try:
            alpha = float(token.split(":", 1)[1])
        except ValueError as exc:
            raise ValidationError(f"bad wyd parameter in {name!r}") from exc
        return wyd(alpha)
    raise ValidationError(f"unknown monotone function {name!r}")


def from_table(name: str, xs, fs, f0: float) -> MonotoneFunction:
    """Tabulated user function, interpolated log-linearly in x.

    The table must cover the validation grid; the result is rejected unless
    it passes the same symmetry/normalization/monotonicity checks as the
    built-ins.
    """
    xs = np.asarray(xs, dtype=float)
    fs = np.asarray(fs, dtype=float)
    if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
        raise ValidationError("from_table needs matching 1-d abscissae and values")
    if np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        raise ValidationError("table abscissae must be positive and increasing")
    if xs[0] > GRID[0] or xs[-1] < GRID[-1]:
        raise ValidationError(
            f"table must cover [{GRID[0]!r}, {GRID[-1]!r}] to be validated"
        )
    lx, lf = np.log(xs), np.log(fs)

    def fn(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x, dtype=float)
        pos = x > 0
        out[pos] = np.exp(np.interp(np.log(x[pos]), lx, lf))
        out[~pos] = f0
        return out

    return MonotoneFunction(name, fn, f0)


# ---------------------------------------------------------------------------
# means


def m_f(f: ScalarFunction, x: float, y: float) -> float:
    """Matrix-mean scalar m_f(x, y) = y f(x/y) with boundary rules
    m_f(x, 0) = x f(0) and m_f(0, 0) = 0."""
    if x < 0 or y < 0:
        raise ValidationError(f"m_f arguments must be nonnegative, got ({x!r}, {y!r})")
    if y == 0.0:
        return x * f.f0
    return float(y * f(x / y))


def mean_matrix(f: ScalarFunction, p, q=None) -> np.ndarray:
    """Matrix M[i, j] = m_f(p[i], q[j]) with the same boundary rules."""
    p = np.asarray(p, dtype=float)
    q = p if q is None else np.asarray(q, dtype=float)
    x = p[:, None]
    y = q[None, :]
    safe_y = np.where(y > 0, y, 1.0)
    vals = safe_y * f(x / safe_y)
    return np.where(y > 0, vals, x * f.f0)


def f_tilde(f: ScalarFunction) -> ScalarFunction:
    """Transform f~(x) = (x+1)/2 - (x-1)^2/2 * f(0)/f(x); f~(1) = 1, f~(0) = 0."""
    f0 = f.f0

    def fn(x):
        x = np.asarray(x, dtype=float)
        return (x + 1.0) / 2.0 - (x - 1.0) ** 2 / 2.0 * (f0 / f(x))

    return ScalarFunction(f"tilde({f.name})", fn, 0.0)


def satisfies_mean_dominance(f: ScalarFunction) -> bool:
    """Check (x+1)/2 + f~(x) >= 2 f(x) on the sampling grid.

    This is the condition under which the strengthened U-product uncertainty
    relation applies.  It holds with equality for ``wy`` and fails for
    ``sld``.
    """
    ft = f_tilde(f)
    lhs = (GRID + 1.0) / 2.0 + ft(GRID)
    rhs = 2.0 * f(GRID)
    return bool(np.all(lhs >= rhs - 1e-10))
