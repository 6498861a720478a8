"""d-dimensional cube-word hierarchy: self-concatenation and postcards.

The d-dimensional levels mirror the one-dimensional ones.  Level 2 words
are n-cubes: two constant cubes plus the density cubes that deviate from a
constant in the single cell (3, ..., 3).  From level k >= 2, periodic words
are (2n+1)-fold self-concatenations and the density words are postcards:
the (2n+1)^d-block self-concatenation of the base with the other 2k
level-k words stamped along the first axis at blocks 3, 5, 7, ... in block
row 3 of every other axis.  All level-(k+1) words therefore share one cube
domain; the displayed periodic/postcard forms only make sense together
with that equal-domain convention.

Counting here is materialization-only under a cell budget; the compressed
form (base + patches) is kept for layout queries and cell evaluation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .budgets import Budgets
from .cam1d import (
    CertificateReport,
    CertRow,
    FrequencySequence,
    PairCheck,
    SubwordReport,
    _row,
    _unverifiable,
    default_frequency_sequence,
    level_names,
)
from .errors import (
    BudgetExceeded,
    InvalidParameter,
    MalformedFamily,
    OutOfBuiltRange,
    SearchBudgetExceeded,
    ShapeMismatch,
    StampCountTooLarge,
)

__all__ = [
    "ArrayWord",
    "PatchworkExpr",
    "PeriodLattice",
    "ZdFamily",
    "self_concat",
    "postcard",
    "postcard_cell",
    "count_occurrences_d",
    "period_lattice",
    "build_level_d",
    "certify_candidate_d",
    "certify_level_d",
    "choose_parameter_d",
    "build_family_d",
    "verify_distinct_subwords_d",
    "transitive_config_window",
    "measure_report_d",
]

ArrayWord = np.ndarray  # d-dimensional uint8 array over {0, 1}


def make_cube(dim: int, side: int, fill: int = 0) -> ArrayWord:
    return np.full((side,) * dim, fill, dtype=np.uint8)


def _check_word(w) -> ArrayWord:
    arr = np.asarray(w, dtype=np.uint8)
    if arr.ndim < 1:
        raise ShapeMismatch("array words must have at least one axis")
    if not np.isin(arr, (0, 1)).all():
        raise InvalidParameter("array word cells must be 0 or 1")
    return arr


def _check_cube(w) -> ArrayWord:
    arr = _check_word(w)
    if len(set(arr.shape)) != 1:
        raise ShapeMismatch(f"expected a cube, got shape {arr.shape}")
    return arr


def self_concat(w, extents, max_cells: int | None = None):
    """Periodic extension of a cube to ``extents`` blocks per axis.

    Returns the explicit array when it fits in ``max_cells``, otherwise a
    :class:`PatchworkExpr` with no patches.
    """
    arr = _check_cube(w)
    d = arr.ndim
    if isinstance(extents, int):
        extents = (extents,) * d
    extents = tuple(int(e) for e in extents)
    if len(extents) != d or any(e < 1 for e in extents):
        raise InvalidParameter(f"extents must be {d} positive integers")
    cells = arr.size * int(np.prod([float(e) for e in extents]))
    if max_cells is not None and cells > max_cells:
        return PatchworkExpr(base=arr, extents=extents, patches=())
    return np.tile(arr, extents)


def postcard_cell(stamps, base, e: int, coords) -> int:
    """Direct two-case evaluation of the postcard at 1-based ``coords``.

    Case 1: coordinates inside the m-th stamp block (first axis blocks
    2m+1, block row 3 elsewhere) read the stamp; Case 2: everything else
    reads the periodic extension of the base.
    """
    base = _check_cube(base)
    n = base.shape[0]
    d = base.ndim
    for m, stamp in enumerate(stamps, start=1):
        if (
            2 * m * n + 1 <= coords[0] <= (2 * m + 1) * n
            and all(2 * n + 1 <= x <= 3 * n for x in coords[1:])
        ):
            rel = (coords[0] - 2 * m * n,) + tuple(x - 2 * n for x in coords[1:])
            return int(stamp[tuple(r - 1 for r in rel)])
    return int(base[tuple(((x - 1) % n) for x in coords)])


@dataclass(frozen=True)
class PatchworkExpr:
    """Compressed cube word: a periodic base overwritten by block-aligned stamps."""

    base: ArrayWord
    extents: tuple  # blocks per axis
    patches: tuple  # ((block_anchor per axis, 0-based), stamp array)

    @property
    def dim(self) -> int:
        return self.base.ndim

    @property
    def side(self) -> tuple:
        n = self.base.shape[0]
        return tuple(e * n for e in self.extents)

    @property
    def cells(self) -> int:
        return int(np.prod([float(s) for s in self.side]))

    def cell(self, coords) -> int:
        """Value at 1-based coordinates."""
        n = self.base.shape[0]
        if len(coords) != self.dim:
            raise ShapeMismatch("coordinate arity mismatch")
        if any(not (1 <= x <= s) for x, s in zip(coords, self.side)):
            raise OutOfBuiltRange(f"coordinates {coords} outside {self.side}")
        block = tuple((x - 1) // n for x in coords)
        for anchor, stamp in self.patches:
            if block == tuple(anchor):
                rel = tuple((x - 1) % n for x in coords)
                return int(stamp[rel])
        return int(self.base[tuple((x - 1) % n for x in coords)])

    def to_array(self, max_cells: int | None = None) -> ArrayWord:
        if max_cells is not None and self.cells > max_cells:
            raise BudgetExceeded(f"{self.cells} cells exceed the cell budget {max_cells}")
        out = np.tile(self.base, self.extents)
        n = self.base.shape[0]
        for anchor, stamp in self.patches:
            slices = tuple(slice(a * n, (a + 1) * n) for a in anchor)
            out[slices] = stamp
        return out


def postcard(stamps, base, e: int, require_margin: bool = False) -> PatchworkExpr:
    """Postcard layout: (2e+1)^d blocks of ``base`` with ``stamps`` stamped in.

    Stamp m occupies first-axis block 2m+1 and block row 3 on every other
    axis (1-based blocks).  Placement needs e >= k; the level hierarchy
    additionally demands the margin e >= 2k+4 (``require_margin``) so the
    stamps stay clear of the far edge.
    """
    base = _check_cube(base)
    stamps = [np.asarray(s, dtype=np.uint8) for s in stamps]
    k = len(stamps)
    if e < k:
        raise StampCountTooLarge(f"{k} stamps need e >= {k} first-axis blocks, got e = {e}")
    if require_margin and e < 2 * k + 4:
        raise StampCountTooLarge(f"postcard margin needs e >= 2k+4 = {2 * k + 4}, got e = {e}")
    for s in stamps:
        if s.shape != base.shape:
            raise ShapeMismatch("stamps must have the same cube shape as the base")
    d = base.ndim
    patches = tuple(
        ((2 * m,) + (2,) * (d - 1), stamp) for m, stamp in enumerate(stamps, start=1)
    )
    return PatchworkExpr(base=base, extents=(2 * e + 1,) * d, patches=patches)


def count_occurrences_d(pattern, text, max_cells: int | None = None) -> int:
    """Exact count of axis-aligned placements of ``pattern`` inside ``text``."""
    pattern = _check_word(pattern)
    text = _check_word(text)
    if pattern.ndim != text.ndim:
        raise ShapeMismatch("pattern and text dimension mismatch")
    if any(p > t for p, t in zip(pattern.shape, text.shape)):
        raise ShapeMismatch("pattern does not fit inside text")
    if max_cells is not None and text.size > max_cells:
        raise BudgetExceeded(f"text of {text.size} cells exceeds the cell budget {max_cells}")
    windows = np.lib.stride_tricks.sliding_window_view(text, pattern.shape)
    lead = windows.shape[0]
    per_lead = int(np.prod(windows.shape[1:]))
    chunk = max(1, 30_000_000 // max(per_lead, 1))
    total = 0
    for i in range(0, lead, chunk):
        eq = windows[i : i + chunk] == pattern
        total += int(eq.reshape(-1, pattern.size).all(axis=1).sum())
    return total


@dataclass(frozen=True)
class PeriodLattice:
    """Translation symmetries of the infinite periodic extension of a cube."""

    modulus: int
    dim: int
    residues: tuple        # all residue vectors in {0..n-1}^d fixing the extension
    generators: tuple      # greedy generating set of the residue group
    index: int             # index of the full symmetry lattice in the integer grid

    def contains(self, vector) -> bool:
        return tuple(x % self.modulus for x in vector) in set(self.residues)


def period_lattice(w, max_residues: int = 1_000_000) -> PeriodLattice:
    """All residues v with w-extended(x + v) = w-extended(x), plus their index.

    The symmetry lattice is residues + (n Z)^d; its index in the grid is
    n^d divided by the residue count.
    """
    arr = _check_cube(w)
    n = arr.shape[0]
    d = arr.ndim
    if n**d > max_residues:
        raise BudgetExceeded(f"{n**d} residues exceed the enumeration cap")
    residues = []
    for v in product(range(n), repeat=d):
        if np.array_equal(np.roll(arr, v, axis=tuple(range(d))), arr):
            residues.append(v)
    index = n**d // len(residues)

    def close(points):
        points = set(points)
        frontier = list(points)
        while frontier:
            p = frontier.pop()
            for q in list(points):
                s = tuple((a + b) % n for a, b in zip(p, q))
                if s not in points:
                    points.add(s)
                    frontier.append(s)
        return points

    generators = []
    span = {(0,) * d}
    for v in residues:
        if v not in span:
            generators.append(v)
            span = close(span | {v})
    return PeriodLattice(
        modulus=n, dim=d, residues=tuple(residues), generators=tuple(generators), index=index
    )


# -- the level hierarchy -----------------------------------------------------


@dataclass
class ZdWord:
    name: str
    side: int
    array: ArrayWord | None          # None when over the cell budget
    patchwork: PatchworkExpr | None  # layout form, kept for a/b words

    @property
    def cells_available(self) -> bool:
        return self.array is not None


class ZdFamily:
    """Levels of equal-shape cube words with parameters and certificates."""

    def __init__(
        self,
        dim: int,
        eps: FrequencySequence | None = None,
        budgets: Budgets | None = None,
    ):
        if dim < 1:
            raise InvalidParameter("dimension must be >= 1")
        self.dim = dim
        self.budgets = budgets or Budgets()
        self.eps = eps or default_frequency_sequence(dim)
        if self.eps.dim != dim:
            raise InvalidParameter("frequency sequence dimension mismatch")
        zero = ZdWord("w1_1", 1, make_cube(dim, 1, 0), None)
        one = ZdWord("w2_1", 1, make_cube(dim, 1, 1), None)
        self.levels: list[dict] = [{"w1_1": zero, "w2_1": one}]
        self.params: list[int] = []
        self.certificates: list[CertificateReport] = []

    @property
    def top_level(self) -> int:
        return len(self.levels)

    def names(self, k: int) -> list[str]:
        self._check_level(k)
        return level_names(k)

    def word(self, k: int, name: str) -> ZdWord:
        self._check_level(k)
        return self.levels[k - 1][name]

    def side(self, k: int) -> int:
        self._check_level(k)
        return next(iter(self.levels[k - 1].values())).side

    def volume(self, k: int) -> int:
        return self.side(k) ** self.dim

    def _check_level(self, k: int):
        if k < 1 or k > self.top_level:
            raise OutOfBuiltRange(f"level {k} not built (levels 1..{self.top_level})")

    def is_certified(self) -> bool:
        return len(self.certificates) == self.top_level - 1 and all(
            c.passed for c in self.certificates
        )


def excluded_a_d(m: int) -> str:
    """a-side skip at level m; the d-dimensional density words are mostly 0."""
    return "w1_1" if m == 1 else f"a{m}"


def excluded_b_d(m: int) -> str:
    return "w2_1" if m == 1 else f"b{m}"


def _level_words_d(family: ZdFamily, n: int) -> dict:
    """Candidate words of level top+1 at parameter n (structure only)."""
    if n <= 1:
        raise InvalidParameter("level parameter must be > 1")
    d = family.dim
    k = family.top_level
    cell_cap = family.budgets.cells

    def wrap(name, obj):
        if isinstance(obj, PatchworkExpr):
            side = obj.side[0]
            arr = obj.to_array() if obj.cells <= cell_cap else None
            return ZdWord(name, side, arr, obj)
        return ZdWord(name, obj.shape[0], obj, None)

    if k == 1:
        if n < 3:
            raise InvalidParameter("level-2 parameter must be >= 3 to place the deviant cell")
        center = (2,) * d  # cell (3, ..., 3), 0-based
        a2 = make_cube(d, n, 0)
        a2[center] = 1
        b2 = make_cube(d, n, 1)
        b2[center] = 0
        return {
            "w1_2": wrap("w1_2", make_cube(d, n, 0)),
            "w2_2": wrap("w2_2", make_cube(d, n, 1)),
            "a2": wrap("a2", a2),
            "b2": wrap("b2", b2),
        }

    prev = family.levels[k - 1]
    base_a, base_b = prev[f"a{k}"], prev[f"b{k}"]
    if base_a.array is None or base_b.array is None:
        raise BudgetExceeded(f"level-{k} density words exceed the cell budget")
    extent = 2 * n + 1
    words = {}
    for i in range(1, 2 * k - 1):
        src = prev[f"w{i}_{k}"]
        if src.array is None:
            raise BudgetExceeded(f"level-{k} word w{i}_{k} exceeds the cell budget")
        words[f"w{i}_{k + 1}"] = wrap(
            f"w{i}_{k + 1}", self_concat(src.array, extent, max_cells=cell_cap)
        )
    words[f"w{2 * k - 1}_{k + 1}"] = wrap(
        f"w{2 * k - 1}_{k + 1}", self_concat(base_a.array, extent, max_cells=cell_cap)
    )
    words[f"w{2 * k}_{k + 1}"] = wrap(
        f"w{2 * k}_{k + 1}", self_concat(base_b.array, extent, max_cells=cell_cap)
    )
    stamps = [prev[f"w{i}_{k}"].array for i in range(1, 2 * k - 1)]
    stamps += [base_a.array, base_b.array]
    words[f"a{k + 1}"] = wrap(f"a{k + 1}", postcard(stamps, base_a.array, n, require_margin=True))
    words[f"b{k + 1}"] = wrap(f"b{k + 1}", postcard(stamps, base_b.array, n, require_margin=True))
    return words


def build_level_d(family: ZdFamily, n_next: int) -> ZdFamily:
    """Append level top+1 at the given parameter; no inequality checking."""
    words = _level_words_d(family, n_next)
    family.levels.append(words)
    family.params.append(n_next)
    return family


def _doubled(word: ZdWord, cell_cap: int) -> ArrayWord | None:
    if word.array is None:
        return None
    if 2**word.array.ndim * word.array.size > cell_cap:
        return None
    return np.tile(word.array, (2,) * word.array.ndim)


def certify_candidate_d(family: ZdFamily, n: int) -> CertificateReport:
    """Exact certification of the candidate next level at parameter n.

    Rows: the postcard fit precondition; for every m <= top and inherited
    word u the frequency of u in the doubled density word below
    (eps_m + ... + eps_k) / (|u| (2|u|-1)^d) with |u| the cell count
    (the printed denominator; the side-length variant is reported as an
    informational row); the period-index length-ratio bound; and the
    deviant-symbol densities below the eps prefix sum.
    """
    d = family.dim
    k = family.top_level
    new_level = k + 1
    report = CertificateReport(level=new_level, param=n)
    stamp_count = 1 if k == 1 else 2 * k
    fit_rhs = 2 * stamp_count + 4
    for m in range(1, new_level + 1):
        report.rows.append(_row(f"eps-tail[N={m}]", family.eps.tail(m), family.eps.tail_bound(m)))
    fit_row = _row(f"stamp-fit[k={stamp_count}]", Fraction(fit_rhs), Fraction(n + 1))
    fit_row.note = "layout precondition n >= 2k+4 (pass iff 2k+4 < n+1)"
    report.rows.append(fit_row)
    if n < max(fit_rhs, 3):
        return report  # cannot even place stamps; frequency rows are moot

    words = _level_words_d(family, n)
    a_next, b_next = words[f"a{new_level}"], words[f"b{new_level}"]
    cell_cap = family.budgets.cells
    doubles = {"a": _doubled(a_next, cell_cap), "b": _doubled(b_next, cell_cap)}
    vol_next = a_next.side**d

    for m in range(1, k + 1):
        bound = family.eps.partial(m, k)
        for side in ("a", "b"):
            skip = excluded_a_d(m) if side == "a" else excluded_b_d(m)
            doubled = doubles[side]
            for name in level_names(m):
                if name == skip:
                    continue
                ident = f"{side}-freq[m={m},u={name}]"
                u = family.word(m, name)
                if doubled is None or u.array is None:
                    report.rows.append(
                        _unverifiable(ident, "unverifiable at budget: cell budget exceeded")
                    )
                    continue
                count = count_occurrences_d(u.array, doubled, max_cells=cell_cap)
                volume = u.array.size
                lhs = Fraction(count, 2**d * vol_next)
                rhs = bound / (volume * (2 * volume - 1) ** d)
                report.rows.append(_row(ident, lhs, rhs))
                side_len = u.side
                info = CertRow(
                    ident=f"{side}-freq-sidelen[m={m},u={name}]",
                    lhs=lhs,
                    rhs=bound / (volume * (2 * side_len - 1) ** d),
                    status="info",
                    note="informational variant with geometric overlap count",
                )
                report.rows.append(info)

    if k >= 2:
        base = family.word(k, f"a{k}")
        ident = "period-gap"
        if base.array is None:
            report.rows.append(
                _unverifiable(ident, "unverifiable at budget: cell budget exceeded")
            )
        else:
            p_k = period_lattice(base.array).index
            vol_k = family.volume(k)
            lhs = Fraction(vol_k, vol_next)
            rhs = Fraction(1, (4 * k - 2) * p_k) - Fraction(1, 3**k * vol_k)
            report.rows.append(_row(ident, lhs, rhs))

    prefix = family.eps.partial(1, k)
    for ident, word, symbol in (("a-density[1]", a_next, 1), ("b-density[0]", b_next, 0)):
        if word.array is None:
            report.rows.append(
                _unverifiable(ident, "unverifiable at budget: cell budget exceeded")
            )
            continue
        count = int((word.array == symbol).sum())
        report.rows.append(_row(ident, Fraction(count, vol_next), prefix))
    return report


def certify_level_d(family: ZdFamily, k: int | None = None) -> CertificateReport:
    """Re-run the certifier for a built level (default: the top level)."""
    k = family.top_level if k is None else k
    if k < 2 or k > family.top_level:
        raise OutOfBuiltRange(f"no built level {k} to certify")
    saved = family.levels
    family.levels = saved[: k - 1]
    try:
        return certify_candidate_d(family, family.params[k - 2])
    finally:
        family.levels = saved


def choose_parameter_d(family: ZdFamily, cap: int | None = None) -> int:
    """Smallest n > 1 whose candidate next level passes certification."""
    if not family.is_certified():
        raise InvalidParameter("family must be certified through its top level")
    cap = cap or family.budgets.search_cap

    def passes(n: int) -> bool:
        report = certify_candidate_d(family, n)
        if report.unverifiable_rows and not report.failed_rows:
            raise BudgetExceeded(
                f"certification of level {report.level} undecidable at the cell budget"
            )
        return report.passed

    if passes(2):
        best = 2
    else:
        lo, hi = 2, 4
        while not passes(hi):
            lo = hi
            hi *= 2
            if hi > cap:
                raise SearchBudgetExceeded(f"no passing parameter found up to cap {cap}")
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if passes(mid):
                hi = mid
            else:
                lo = mid
        best = hi
        while best > 2 and passes(best - 1):
            best -= 1
    return best


def build_family_d(
    dim: int,
    levels: int,
    eps: FrequencySequence | None = None,
    budgets: Budgets | None = None,
    params: list[int] | None = None,
) -> ZdFamily:
    """Build and certify a d-dimensional family through the requested level."""
    if levels < 2:
        raise InvalidParameter("a family needs at least 2 levels")
    family = ZdFamily(dim=dim, eps=eps, budgets=budgets)
    for index in range(levels - 1):
        n = params[index] if params is not None else choose_parameter_d(family)
        report = certify_candidate_d(family, n)
        build_level_d(family, n)
        family.certificates.append(report)
    return family


def verify_distinct_subwords_d(
    family: ZdFamily, k: int, budget: int | None = None, jobs: int = 1
) -> SubwordReport:
    """Scan ordered distinct level-k pairs (u, v) for u inside the doubled v."""
    budget = budget if budget is not None else family.budgets.cells
    names = family.names(k)
    arrays = {name: family.word(k, name).array for name in names}
    d = family.dim
    scannable = all(a is not None for a in arrays.values()) and (
        2**d * family.volume(k) <= budget
    )
    tasks = [(u, v) for v in names for u in names if u != v]
    if not scannable:
        return SubwordReport(
            level=k,
            pairs=[PairCheck(u, v, "certified-by-inequalities", None) for u, v in tasks],
        )
    doubles = {name: np.tile(arr, (2,) * d) for name, arr in arrays.items()}

    def scan(pair):
        u_name, v_name = pair
        count = count_occurrences_d(arrays[u_name], doubles[v_name], max_cells=budget)
        return PairCheck(u_name, v_name, "verified", count)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(scan, tasks))
    else:
        pairs = [scan(t) for t in tasks]
    return SubwordReport(level=k, pairs=pairs)


def transitive_config_window(family: ZdFamily, starts, sides) -> ArrayWord:
    """Restriction of the transitive configuration to a rectangle.

    The configuration restricted to the cube (1-S .. S)^d, S the top side,
    equals the doubled top density word; coordinates recenter at the origin.
    """
    if family.top_level < 2:
        raise OutOfBuiltRange("family has no built level >= 2")
    d = family.dim
    starts = tuple(int(x) for x in starts)
    sides = tuple(int(x) for x in sides)
    if len(starts) != d or len(sides) != d or any(s < 1 for s in sides):
        raise InvalidParameter("rectangle must have d starts and d positive sides")
    top = family.top_level
    span = family.side(top)
    for lo, size in zip(starts, sides):
        if lo <= -span or lo + size - 1 > span:
            raise OutOfBuiltRange(
                f"rectangle [{lo}, {lo + size - 1}] outside built range ({-span}, {span}]"
            )
    cells = int(np.prod([float(s) for s in sides]))
    if cells > family.budgets.cells:
        raise BudgetExceeded("rectangle exceeds the cell budget")
    word = family.word(top, f"a{top}")
    out = np.empty(sides, dtype=np.uint8)
    for offset in np.ndindex(*sides):
        coords = tuple(lo + o for lo, o in zip(starts, offset))
        base_index = tuple((c + span - 1) % span for c in coords)
        if word.array is not None:
            out[offset] = word.array[base_index]
        elif word.patchwork is not None:
            out[offset] = word.patchwork.cell(tuple(i + 1 for i in base_index))
        else:
            raise BudgetExceeded("top density word is not materializable")
    return out


@dataclass
class MeasureRowD:
    level: int
    a_one: Fraction       # frequency of symbol 1 in the a-side word
    b_zero: Fraction      # frequency of symbol 0 in the b-side word
    origin_zero_a: Fraction
    origin_zero_b: Fraction
    gap: Fraction
    eps_bound: Fraction
    a_one_below_bound: bool
    b_zero_below_bound: bool
    gap_above_third: bool


def measure_report_d(family: ZdFamily, k_max: int | None = None) -> list:
    """Deviant-symbol frequencies per level plus the origin-cylinder gap."""
    k_max = family.top_level if k_max is None else min(k_max, family.top_level)
    rows = []
    third = Fraction(1, 3)
    for k in range(2, k_max + 1):
        a_word = family.word(k, f"a{k}")
        b_word = family.word(k, f"b{k}")
        if a_word.array is None or b_word.array is None:
            raise BudgetExceeded(f"level-{k} words exceed the cell budget")
        vol = family.volume(k)
        a_one = Fraction(int(a_word.array.sum()), vol)
        b_zero = Fraction(int((b_word.array == 0).sum()), vol)
        origin_a = Fraction(int((a_word.array == 0).sum()), vol)
        origin_b = Fraction(int((b_word.array == 0).sum()), vol)
        gap = abs(origin_a - origin_b)
        bound = family.eps.partial(1, k - 1)
        rows.append(
            MeasureRowD(
                level=k,
                a_one=a_one,
                b_zero=b_zero,
                origin_zero_a=origin_a,
                origin_zero_b=origin_b,
                gap=gap,
                eps_bound=bound,
                a_one_below_bound=a_one < bound,
                b_zero_below_bound=b_zero < bound,
                gap_above_third=gap > third,
            )
        )
    return rows


# -- serialization -----------------------------------------------------------


def array_to_obj(arr: ArrayWord) -> dict:
    return {
        "dim": arr.ndim,
        "sides": list(arr.shape),
        "data": "".join("1" if x else "0" for x in arr.reshape(-1)),
    }


def array_from_obj(obj) -> ArrayWord:
    sides = tuple(int(s) for s in obj["sides"])
    data = np.frombuffer(obj["data"].encode("ascii"), dtype=np.uint8) - ord("0")
    if data.size != int(np.prod(sides)):
        raise MalformedFamily("array data length mismatch")
    return data.reshape(sides).astype(np.uint8)


def patchwork_to_obj(p: PatchworkExpr) -> dict:
    return {
        "base": array_to_obj(p.base),
        "extents": list(p.extents),
        "patches": [
            {"block_anchor": list(anchor), "stamp": array_to_obj(stamp)}
            for anchor, stamp in p.patches
        ],
    }


def patchwork_from_obj(obj) -> PatchworkExpr:
    return PatchworkExpr(
        base=array_from_obj(obj["base"]),
        extents=tuple(int(e) for e in obj["extents"]),
        patches=tuple(
            (tuple(int(a) for a in patch["block_anchor"]), array_from_obj(patch["stamp"]))
            for patch in obj["patches"]
        ),
    )


def family_to_obj_d(family: ZdFamily) -> dict:
    from .cam1d import report_to_obj

    levels = []
    for k in range(1, family.top_level + 1):
        words = {}
        for name in family.names(k):
            word = family.word(k, name)
            entry: dict = {"side": word.side}
            if word.patchwork is not None:
                entry["patchwork"] = patchwork_to_obj(word.patchwork)
            elif word.array is not None:
                entry["array"] = array_to_obj(word.array)
            words[name] = entry
        levels.append({"level": k, "words": words})
    return {
        "dim": family.dim,
        "K": family.top_level,
        "eps_scheme": family.eps.scheme,
        "params": [str(n) for n in family.params],
        "levels": levels,
        "certificates": [report_to_obj(r) for r in family.certificates],
    }


def family_from_obj_d(obj, budgets: Budgets | None = None) -> ZdFamily:
    from .cam1d import report_from_obj

    try:
        dim = int(obj["dim"])
        if dim < 1:
            raise MalformedFamily("bad dimension")
        params = [int(p) for p in obj["params"]]
        family = ZdFamily(
            dim=dim, eps=FrequencySequence(dim=dim, scheme=obj["eps_scheme"]), budgets=budgets
        )
        for n in params:
            build_level_d(family, n)
        family.certificates = [report_from_obj(c) for c in obj["certificates"]]
        if len(family.certificates) != int(obj["K"]) - 1:
            raise MalformedFamily("certificate count does not match K")
        rebuilt = family_to_obj_d(family)
        if rebuilt["levels"] != obj["levels"]:
            raise MalformedFamily("serialized words do not match their parameters")
        return family
    except MalformedFamily:
        raise
    except (KeyError, TypeError, ValueError, InvalidParameter) as exc:
        raise MalformedFamily(f"malformed family file: {exc}") from exc
