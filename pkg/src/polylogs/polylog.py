"""The fundamental solution Lambda(x) of the polylogarithm system and its
single-valued combinations.

Row 0 of Lambda holds (1, Li_1, ..., Li_n); row j >= 1 holds
(2 pi i)^j log^(k-j) x / (k-j)! in column k.  The rows are horizontal for
the connection  d Lambda = Lambda omega  whose only nonzero entries are
omega[0][1] = dz/(1-z) and omega[j][j+1] = dz/z for 1 <= j < n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any

import mpmath
from mpmath import mp

from .errors import ArgumentError, DomainError, SingularityError
from .numerics import (
    INF,
    LogConnection,
    PrecisionConfig,
    is_infinite,
    polylog_row_series,
    resolve,
    to_complex,
    transport_rows,
)
from .paths import HALF, Path, PathSegment, compose, exact_point, route_to

__all__ = [
    "BranchState",
    "connection_form",
    "principal_lambda",
    "continue_branch",
    "branch_at",
    "li_value",
    "d1",
    "d2",
    "d3",
    "lambda_closed_form_rows",
    "branch_value",
    "polylog_row",
    "base_state",
    "d2_from_row",
    "d3_from_row",
    "INF",
]


@lru_cache(maxsize=None)
def connection_form(n: int) -> LogConnection:
    """omega for order n as a logarithmic connection on (n+1)-dimensional rows."""
    if n < 1:
        raise ArgumentError(f"order n must be >= 1, got {n}")
    data = {Fraction(0): {(j, j + 1): 1 for j in range(1, n)}, Fraction(1): {(0, 1): -1}}
    return LogConnection.from_dict(n + 1, data)


def _freeze(rows) -> tuple[tuple[mpmath.mpc, ...], ...]:
    return tuple(tuple(to_complex(v) for v in r) for r in rows)


@dataclass(frozen=True)
class BranchState:
    """A point with the value of Lambda continued from 1/2 along ``history``."""

    n: int
    point: Any
    history: Path
    rows: tuple[tuple[mpmath.mpc, ...], ...] = field(repr=False)

    @property
    def matrix(self) -> mpmath.matrix:
        return mpmath.matrix([list(r) for r in self.rows])

    def diagonal_residual(self) -> mpmath.mpf:
        tpi = mpmath.mpc(0, 2 * mpmath.pi)
        return max(abs(self.rows[j][j] - tpi ** j) for j in range(self.n + 1))

    def log_value(self) -> mpmath.mpc:
        """The branch of log x carried by row 1."""
        if self.n < 2:
            raise ArgumentError("log x is read from entry (1, 2); needs n >= 2")
        return self.rows[1][2] / mpmath.mpc(0, 2 * mpmath.pi)


def lambda_closed_form_rows(x: Any, n: int, log_x: Any) -> list[list[mpmath.mpc]]:
    """Rows 1..n of Lambda for a given determination of log x."""
    tpi = mpmath.mpc(0, 2 * mpmath.pi)
    lg = to_complex(log_x)
    powers = [mpmath.mpc(1)]
    for m in range(1, n + 1):
        powers.append(powers[-1] * lg / m)
    out = []
    for j in range(1, n + 1):
        scale = tpi ** j
        out.append([mpmath.mpc(0)] * j + [scale * powers[k - j] for k in range(j, n + 1)])
    return out


def _in_principal_disk(x: mpmath.mpc) -> bool:
    return abs(x - mpmath.mpf(1) / 2) < mpmath.mpf(1) / 2


def _row0_principal(x: Any, n: int, prec: PrecisionConfig) -> list[mpmath.mpc]:
    """(1, Li_1(x), ..., Li_n(x)) on the principal branch; x in the disk |x - 1/2| < 1/2."""
    xv = to_complex(x)
    if abs(xv) <= mpmath.mpf(3) / 4:
        return polylog_row_series(n, xv, prec)
    # hop in from a point of modulus < 3/4 inside the disk
    xe = exact_point(x)
    if isinstance(xe, Fraction):
        x0: Any = (HALF + xe) / 2
    elif isinstance(xe, tuple):
        x0 = ((HALF + xe[0]) / 2, xe[1] / 2)
    else:
        x0 = (mpmath.mpf(1) / 2 + xv) / 2
    start = polylog_row_series(n, x0, prec)
    seg = Path((PathSegment.line(x0, xe),), x0)
    return transport_rows(connection_form(n), seg, [start], prec)[0]


def principal_lambda(x: Any, n: int, prec: PrecisionConfig | None = None) -> BranchState:
    """Lambda(x) on the principal branch, for x in the open disk |x - 1/2| < 1/2."""
    prec = resolve(prec)
    if n < 1:
        raise ArgumentError(f"order n must be >= 1, got {n}")
    with prec.workprec():
        xv = to_complex(x)
        if not _in_principal_disk(xv):
            raise DomainError(f"principal branch is defined on |x - 1/2| < 1/2, got x = {xv}")
        xe = exact_point(x)
        row0 = _row0_principal(xe, n, prec)
        rows = [row0] + lambda_closed_form_rows(xv, n, mpmath.log(xv))
        return BranchState(n, xe, route_to(xe), _freeze(rows))


@lru_cache(maxsize=64)
def _lambda_half(n: int, prec: PrecisionConfig) -> BranchState:
    return principal_lambda(HALF, n, prec)


def base_state(n: int, prec: PrecisionConfig | None = None) -> BranchState:
    """Lambda(1/2), cached per (n, precision)."""
    return _lambda_half(n, resolve(prec))


def continue_branch(state: BranchState, path: Path, prec: PrecisionConfig | None = None, *,
                    rows: Any = None) -> BranchState:
    """Analytically continue ``state`` along ``path`` (which must start at state.point).

    ``rows`` restricts the transport to a subset of row indices; the other
    rows are dropped from the result (useful when only Li values are needed).
    """
    prec = resolve(prec)
    with prec.workprec():
        here = to_complex(state.point)
        if abs(path.start_point() - here) > mpmath.mpf(2) ** (-(mp.prec - 16)) * max(1, abs(here)):
            raise DomainError(f"path starts at {path.start_point()}, branch is at {here}")
        chosen = state.rows if rows is None else tuple(state.rows[i] for i in rows)
        new_rows = transport_rows(connection_form(state.n), path, chosen, prec)
        end = path.segments[-1].end if path.segments and path.segments[-1].kind == "line" else path.end_point()
        history = compose(state.history, path) if state.history.segments or path.segments else path
        return BranchState(state.n, end, history, _freeze(new_rows))


def branch_at(x: Any, n: int, path: Path | None = None, prec: PrecisionConfig | None = None) -> BranchState:
    """Lambda at ``x`` continued from 1/2 along ``path`` (default: the straight route with detours)."""
    prec = resolve(prec)
    with prec.workprec():
        if path is None:
            path = route_to(x)
        return continue_branch(base_state(n, prec), path, prec)


def li_value(state: BranchState, k: int) -> mpmath.mpc:
    """Li_k on the branch recorded by ``state`` (entry (0, k) of Lambda)."""
    if not 1 <= k <= state.n:
        raise IndexError(f"k must satisfy 1 <= k <= {state.n}, got {k}")
    return state.rows[0][k]


# ---------------------------------------------------------------------------
# single-valued functions


def polylog_row(x: Any, n: int, prec: PrecisionConfig | None = None, path: Path | None = None) -> list[mpmath.mpc]:
    """(1, Li_1(x), ..., Li_n(x)) on the branch reached along ``path`` from 1/2.

    Without a path, the principal series is used for |x| <= 3/4 and the
    straight route with detours otherwise.
    """
    prec = resolve(prec)
    with prec.workprec():
        xe = exact_point(x)
        xv = to_complex(xe)
        if path is None:
            if xv == 0:
                return [mpmath.mpc(1)] + [mpmath.mpc(0)] * n
            if abs(xv) <= mpmath.mpf(3) / 4:
                return polylog_row_series(n, xv, prec)
            path = route_to(xe)
        start = base_state(n, prec).rows[0]
        return transport_rows(connection_form(n), path, [start], prec)[0]


def _check_finite_point(x: Any) -> Any:
    if is_infinite(x):
        return INF
    return exact_point(x)


def d1(x: Any, prec: PrecisionConfig | None = None) -> mpmath.mpf:
    """log |x|."""
    prec = resolve(prec)
    with prec.workprec():
        xv = to_complex(exact_point(x))
        if xv == 0:
            raise DomainError("log |x| is singular at 0")
        return +mpmath.log(abs(xv))


def d2_from_row(x: Any, row: Any) -> mpmath.mpf:
    """Bloch-Wigner value from any branch of (1, Li_1, Li_2)."""
    lx = mpmath.log(abs(to_complex(x)))
    return row[2].imag - lx * row[1].imag


def d3_from_row(x: Any, row: Any) -> mpmath.mpf:
    lx = mpmath.log(abs(to_complex(x)))
    return (row[3] - lx * row[2] + lx * lx * row[1] / 3).real


def _is_exact_singular(xv: mpmath.mpc) -> bool:
    return xv == 0 or xv == 1


def d2(x: Any, prec: PrecisionConfig | None = None, path: Path | None = None) -> mpmath.mpf:
    """Bloch-Wigner dilogarithm Im Li_2(x) + log|x| arg(1 - x), extended by 0 at 0, 1, infinity."""
    prec = resolve(prec)
    x = _check_finite_point(x)
    if x is INF:
        return mpmath.mpf(0)
    with prec.workprec():
        xv = to_complex(x)
        if _is_exact_singular(xv):
            return mpmath.mpf(0)
        row = polylog_row(x, 2, prec, path)
        return +d2_from_row(xv, row)


def _limit_offset(prec: PrecisionConfig) -> Fraction:
    return Fraction(1, 10 ** -(-prec.internal_bits // 8))


def d3(x: Any, prec: PrecisionConfig | None = None, path: Path | None = None) -> mpmath.mpf:
    """Single-valued trilogarithm Re(Li_3 - log|x| Li_2 + log^2|x| Li_1 / 3).

    The values at 0 and infinity are 0; at 1 the function is evaluated at
    1 - t0 with t0 = 10^(-ceil(bits/8)), the distance to the limit being
    O(t0 log t0).
    """
    prec = resolve(prec)
    x = _check_finite_point(x)
    if x is INF:
        return mpmath.mpf(0)
    with prec.workprec():
        xv = to_complex(x)
        if xv == 0:
            return mpmath.mpf(0)
        if xv == 1:
            x = 1 - _limit_offset(prec)
            xv = to_complex(x)
        row = polylog_row(x, 3, prec, path)
        return +d3_from_row(xv, row)


def branch_value(x: Any, k: int, path: Path | None = None, prec: PrecisionConfig | None = None) -> mpmath.mpc:
    """Li_k(x) continued from 1/2 along ``path`` (default: principal determination)."""
    if k < 1:
        raise ArgumentError(f"k must be >= 1, got {k}")
    prec = resolve(prec)
    with prec.workprec():
        xe = exact_point(x)
        if path is None and to_complex(xe) == 1:
            raise SingularityError("Li_k at 1 is a boundary value; use the limit-MHS routines")
        return polylog_row(xe, k, prec, path)[k]
