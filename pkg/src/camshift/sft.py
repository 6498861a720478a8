"""Shift-of-finite-type arithmetic on nonnegative integer matrices.

Covers the periodic-point census (Mobius inversion of trace powers, with a
direct enumeration oracle), the Perron eigenvalue with certified two-sided
bounds, and the feasibility check for embedding a discrete tower over the
full 2-shift: a strict entropy inequality plus a periodic-count comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    EnumerationTooLarge,
    InvalidParameter,
    NoConvergence,
    ReducibleMatrix,
)

_ENUM_CAP = 5_000_000


@dataclass(frozen=True)
class SftMatrix:
    """Square nonnegative integer matrix presenting an edge shift."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise InvalidParameter("matrix must be square and nonempty")
        if any(x < 0 for row in rows for x in row):
            raise InvalidParameter("matrix entries must be nonnegative integers")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)


def _as_matrix(A) -> SftMatrix:
    return A if isinstance(A, SftMatrix) else SftMatrix(tuple(map(tuple, A)))


def _matmul(X, Y):
    n = len(X)
    return tuple(
        tuple(sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _matpow(rows, e):
    n = len(rows)
    result = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    base = rows
    while e:
        if e & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        e >>= 1
    return result


def _trace(rows) -> int:
    return sum(rows[i][i] for i in range(len(rows)))


def trace_power(A, n: int) -> int:
    """Exact trace of A^n (number of closed edge walks of length n)."""
    if n < 1:
        raise InvalidParameter("n must be >= 1")
    return _trace(_matpow(_as_matrix(A).rows, n))


def mobius(n: int) -> int:
    if n < 1:
        raise InvalidParameter("mobius needs n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def divisors(n: int):
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def tr_n(A, n: int) -> int:
    """Count of points of least period n: sum over d|n of mu(n/d) * tr(A^d)."""
    A = _as_matrix(A)
    return sum(mobius(n // d) * trace_power(A, d) for d in divisors(n))


def census(A, n_max: int) -> dict:
    """Map n -> least-period-n point count for 1 <= n <= n_max."""
    return {n: tr_n(A, n) for n in range(1, n_max + 1)}


def brute_periodic_points(A, n: int, cap: int = _ENUM_CAP) -> int:
    """Direct enumeration oracle for :func:`tr_n`.

    Enumerates closed edge sequences of length n (entries > 1 act as
    parallel edges, so each step also picks an edge label) and keeps those
    whose least cyclic period is exactly n.
    """
    A = _as_matrix(A)
    if A.dim > 6 or n > 12:
        raise EnumerationTooLarge("enumeration bound is dimension <= 6, n <= 12")
    total_walks = trace_power(A, n)
    if total_walks > cap:
        raise EnumerationTooLarge(f"{total_walks} closed walks exceed the enumeration cap {cap}")
    rows = A.rows
    dim = A.dim
    proper = [d for d in divisors(n) if d < n]
    count = 0
    # a step is (target vertex, edge label); the walk starts at `start`
    def extend(vertex, steps):
        nonlocal count
        if len(steps) == n:
            if vertex != start:
                return
            for d in proper:
                if all(steps[i] == steps[i % d] for i in range(n)):
                    return
            count += 1
            return
        for nxt in range(dim):
            for label in range(rows[vertex][nxt]):
                steps.append((nxt, label))
                extend(nxt, steps)
                steps.pop()

    for start in range(dim):
        extend(start, [])
    return count


def is_irreducible(A) -> bool:
    """True when the underlying digraph is strongly connected."""
    A = _as_matrix(A)
    n = A.dim
    if n == 1:
        return A.rows[0][0] > 0 or True  # a single vertex is trivially its own class
    adj = [[j for j in range(n) if A.rows[i][j] > 0] for i in range(n)]
    radj = [[j for j in range(n) if A.rows[j][i] > 0] for i in range(n)]

    def reach(graph):
        seen = {0}
        stack = [0]
        while stack:
            for j in graph[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return seen

    return len(reach(adj)) == n and len(reach(radj)) == n


def is_primitive(A, limit: int | None = None) -> bool:
    """True when some power of A is entrywise positive (Wielandt bound)."""
    A = _as_matrix(A)
    n = A.dim
    limit = limit if limit is not None else (n - 1) ** 2 + 1
    power = A.rows
    for _ in range(limit):
        if all(x > 0 for row in power for x in row):
            return True
        power = _matmul(power, A.rows)
    return all(x > 0 for row in power for x in row)


@dataclass(frozen=True)
class PerronResult:
    value: float
    lower: float           # certified lower bound (min Collatz-Wielandt ratio)
    upper: float           # certified upper bound (max ratio)
    residual: float        # ||Av - value*v||_inf with ||v||_inf = 1
    iterations: int
    primitive: bool


def perron_eigenvalue(A, tolerance: float = 1e-10, max_iterations: int = 200_000) -> PerronResult:
    """Dominant eigenvalue of an irreducible nonnegative matrix.

    Power iteration runs on A + I (same Perron vector, immune to
    periodicity); the returned lower/upper bounds are the Collatz-Wielandt
    ratios min_i (Av)_i/v_i and max_i (Av)_i/v_i of the final positive
    iterate, which bracket the true eigenvalue.
    """
    A = _as_matrix(A)
    if tolerance <= 0:
        raise InvalidParameter("tolerance must be positive")
    if not is_irreducible(A):
        raise ReducibleMatrix("matrix is not irreducible")
    n = A.dim
    rows = A.rows
    v = [1.0] * n
    previous = None
    for iteration in range(1, max_iterations + 1):
        w = [sum(rows[i][j] * v[j] for j in range(n)) + v[i] for i in range(n)]
        top = max(w)
        v = [x / top for x in w]
        ratios = [
            (sum(rows[i][j] * v[j] for j in range(n)) + v[i]) / v[i] for i in range(n)
        ]
        lower, upper = min(ratios) - 1.0, max(ratios) - 1.0
        quotient = top - 1.0
        close = previous is not None and abs(quotient - previous) < tolerance
        if close and upper - lower < tolerance:
            value = (lower + upper) / 2.0
            residual = max(
                abs(sum(rows[i][j] * v[j] for j in range(n)) - value * v[i]) for i in range(n)
            )
            return PerronResult(
                value=value,
                lower=lower,
                upper=upper,
                residual=residual,
                iterations=iteration,
                primitive=is_primitive(A),
            )
        previous = quotient
    raise NoConvergence(f"power iteration did not converge in {max_iterations} iterations")


@dataclass
class FeasibilityReport:
    """Embedding feasibility of the height-m tower over the full 2-shift."""

    height: int
    n_max: int
    entropy_lhs: float               # log(2)/m
    entropy_interval: tuple          # certified (log lower, log upper) for log(Perron)
    entropy_status: str              # "pass" | "fail" | "inconclusive"
    periodic_rows: list = field(default_factory=list)  # (n, tower count, target count, ok)
    feasible: bool = False


def tower_census(m: int, n: int) -> int:
    """Least-period-n count for the height-m tower over the full 2-shift."""
    if n % m != 0:
        return 0
    return m * tr_n([[2]], n // m)


def embedding_feasibility(
    A,
    tower_height: int,
    n_max: int,
    tolerance: float = 1e-12,
) -> FeasibilityReport:
    """Check the two embedding hypotheses for the height-m tower.

    (1) strict entropy gap: log(2)/m < log(Perron eigenvalue), decided
    against the certified eigenvalue interval (overlap -> "inconclusive",
    never a pass); (2) least-period counts of the tower do not exceed the
    target's for every n <= n_max.
    """
    A = _as_matrix(A)
    m = tower_height
    if m < 1:
        raise InvalidParameter("tower height must be >= 1")
    if n_max < m:
        raise InvalidParameter("n_max must be at least the tower height")
    perron = perron_eigenvalue(A, tolerance=tolerance)
    lhs = math.log(2.0) / m
    if perron.lower <= 0:
        raise ReducibleMatrix("Perron lower bound is not positive")
    low, high = math.log(perron.lower), math.log(perron.upper)
    if lhs < low:
        status = "pass"
    elif lhs >= high:
        status = "fail"
    else:
        status = "inconclusive"
    rows = []
    all_ok = True
    for n in range(1, n_max + 1):
        tower = tower_census(m, n)
        target = tr_n(A, n)
        ok = tower <= target
        all_ok = all_ok and ok
        rows.append((n, tower, target, ok))
    return FeasibilityReport(
        height=m,
        n_max=n_max,
        entropy_lhs=lhs,
        entropy_interval=(low, high),
        entropy_status=status,
        periodic_rows=rows,
        feasible=(status == "pass") and all_ok,
    )


def smallest_feasible_height(A, n_max: int, cap: int = 64) -> int | None:
    """Smallest tower height m <= cap whose report is feasible, else None."""
    for m in range(1, cap + 1):
        if embedding_feasibility(A, m, max(n_max, m)).feasible:
            return m
    return None
