"""One-dimensional level hierarchy with exact-rational certificates.

Level 1 holds the two single-symbol words.  Level 2 introduces a density
parameter n: two constant words of length n+1 plus the density words
0*1^n and 0^n*1.  From level k >= 2, the step to level k+1 repeats every
level-k word E = (2k+1)n + 2k times to make the periodic words, and builds
the density words by interleaving runs a_k^n (resp. b_k^n) with the other
level-k words, so all level-(k+1) words share one length.

Each parameter is chosen as the smallest integer for which the certifier
passes: every inherited word u of level m must occur in the doubled density
word with frequency below (eps_m + ... + eps_k) / (|u| (2|u|-1)), the
length ratio |a_k|/|a_{k+1}| must clear a bound driven by the minimal
period of a_k a_k, and the single-symbol densities stay below the running
eps prefix sum.  All inequality arithmetic is exact (Fraction); floats
appear nowhere in certification.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import slp
from .budgets import Budgets
from .errors import (
    BudgetExceeded,
    InvalidParameter,
    MalformedFamily,
    MisalignedWindow,
    OutOfBuiltRange,
    SearchBudgetExceeded,
)

EPS_SCHEME = "half-geometric4"


@dataclass(frozen=True)
class FrequencySequence:
    """Summable per-level weights eps_k with closed-form geometric tails.

    The default scheme is eps_k = (1/2) * 3^-(dim-1) * 4^-k, whose tail
    sum_{n>=N} eps_n = (2/3) * 3^-(dim-1) * 4^-N is strictly below
    3^-(dim+N-1) for every N >= 1.
    """

    dim: int
    scheme: str = EPS_SCHEME

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParameter("dimension must be >= 1")
        if self.scheme != EPS_SCHEME:
            raise InvalidParameter(f"unknown frequency scheme {self.scheme!r}")

    def value(self, k: int) -> Fraction:
        if k < 1:
            raise InvalidParameter("frequency index must be >= 1")
        return Fraction(1, 2) * Fraction(1, 3 ** (self.dim - 1)) * Fraction(1, 4**k)

    def tail(self, start: int) -> Fraction:
        """Exact value of sum_{n >= start} eps_n."""
        return Fraction(2, 3) * Fraction(1, 3 ** (self.dim - 1)) * Fraction(1, 4**start)

    def tail_bound(self, start: int) -> Fraction:
        return Fraction(1, 3 ** (self.dim + start - 1))

    def tail_ok(self, start: int) -> bool:
        return self.tail(start) < self.tail_bound(start)

    def partial(self, lo: int, hi: int) -> Fraction:
        return sum((self.value(j) for j in range(lo, hi + 1)), Fraction(0))


def default_frequency_sequence(dim: int) -> FrequencySequence:
    return FrequencySequence(dim=dim)


@dataclass
class CertRow:
    ident: str
    lhs: Fraction | None
    rhs: Fraction | None
    status: str  # "pass" | "fail" | "unverifiable" | "info"
    note: str = ""

    @property
    def margin(self) -> Fraction | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs


def _row(ident: str, lhs: Fraction, rhs: Fraction) -> CertRow:
    return CertRow(ident=ident, lhs=lhs, rhs=rhs, status="pass" if lhs < rhs else "fail")


def _unverifiable(ident: str, note: str) -> CertRow:
    return CertRow(ident=ident, lhs=None, rhs=None, status="unverifiable", note=note)


@dataclass
class CertificateReport:
    level: int
    param: int
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.rows if r.status != "info")

    @property
    def failed_rows(self) -> list:
        return [r for r in self.rows if r.status == "fail"]

    @property
    def unverifiable_rows(self) -> list:
        return [r for r in self.rows if r.status == "unverifiable"]


def level_names(k: int) -> list[str]:
    """Canonical word names of level k: periodic words first, then a, b."""
    if k == 1:
        return ["w1_1", "w2_1"]
    return [f"w{i}_{k}" for i in range(1, 2 * k - 1)] + [f"a{k}", f"b{k}"]


def excluded_a(m: int) -> str:
    """Word skipped on the a-side at level m (the one a-words are made of)."""
    return "w2_1" if m == 1 else f"a{m}"


def excluded_b(m: int) -> str:
    return "w1_1" if m == 1 else f"b{m}"


class LevelFamily:
    """A built hierarchy: levels of words, parameters, and certificates."""

    def __init__(
        self,
        eps: FrequencySequence | None = None,
        budgets: Budgets | None = None,
    ):
        self.dim = 1
        self.budgets = budgets or Budgets()
        self.eps = eps or default_frequency_sequence(1)
        if self.eps.dim != 1:
            raise InvalidParameter("one-dimensional family needs a dim=1 frequency sequence")
        self.builder = slp.SlpBuilder(
            window=self.budgets.window,
            materialize_cap=self.budgets.symbols,
            snippet_cap=self.budgets.snippet_cap,
        )
        self.levels = [
            {"w1_1": self.builder.atom("0"), "w2_1": self.builder.atom("1")}
        ]
        self.params: list[int] = []
        self.certificates: list[CertificateReport] = []
        self._strings: dict = {("w1_1", 1): "0", ("w2_1", 1): "1"}
        self._periods: dict = {}

    # -- accessors ------------------------------------------------------

    @property
    def top_level(self) -> int:
        return len(self.levels)

    def names(self, k: int) -> list[str]:
        self._check_level(k)
        return level_names(k)

    def word(self, k: int, name: str) -> slp.SlpExpr:
        self._check_level(k)
        return self.levels[k - 1][name]

    def a(self, k: int) -> slp.SlpExpr:
        return self.word(k, f"a{k}") if k >= 2 else self.word(1, "w2_1")

    def b(self, k: int) -> slp.SlpExpr:
        return self.word(k, f"b{k}") if k >= 2 else self.word(1, "w1_1")

    def word_length(self, k: int) -> int:
        self._check_level(k)
        return next(iter(self.levels[k - 1].values())).length

    def _check_level(self, k: int):
        if k < 1 or k > self.top_level:
            raise OutOfBuiltRange(f"level {k} not built (levels 1..{self.top_level})")

    def string(self, k: int, name: str) -> str | None:
        """Materialized word, or None when it exceeds the symbol budget."""
        key = (name, k)
        if key in self._strings:
            return self._strings[key]
        expr = self.word(k, name)
        if expr.length > self.budgets.symbols:
            return None
        text = slp.materialize(expr, cap=self.budgets.symbols)
        self._strings[key] = text
        return text

    def period(self, k: int) -> int | None:
        """Minimal period of a_k a_k, or None when over the symbol budget."""
        if k in self._periods:
            return self._periods[k]
        a_k = self.a(k)
        if 2 * a_k.length > self.budgets.symbols:
            return None
        text = self.string(k, f"a{k}" if k >= 2 else "w2_1")
        if text is None:
            return None
        p = slp.minimal_period(text + text)
        self._periods[k] = p
        return p

    def is_certified(self) -> bool:
        return len(self.certificates) == self.top_level - 1 and all(
            c.passed for c in self.certificates
        )


# -- building -------------------------------------------------------------


def _level_words(family: LevelFamily, n: int) -> dict:
    """Candidate words of level top+1 at parameter n (no checking here)."""
    if n <= 1:
        raise InvalidParameter("level parameter must be > 1")
    k = family.top_level
    b = family.builder
    if k == 1:
        zero, one = b.atom("0"), b.atom("1")
        return {
            "w1_2": b.power(zero, n + 1),
            "w2_2": b.power(one, n + 1),
            "a2": b.concat([(zero, 1), (one, n)]),
            "b2": b.concat([(zero, n), (one, 1)]),
        }
    exponent = (2 * k + 1) * n + 2 * k
    prev = family.levels[k - 1]
    a_k, b_k = prev[f"a{k}"], prev[f"b{k}"]
    words = {}
    for i in range(1, 2 * k - 1):
        words[f"w{i}_{k + 1}"] = b.power(prev[f"w{i}_{k}"], exponent)
    words[f"w{2 * k - 1}_{k + 1}"] = b.power(a_k, exponent)
    words[f"w{2 * k}_{k + 1}"] = b.power(b_k, exponent)

    def density(base):
        parts = []
        for i in range(1, 2 * k - 1):
            parts += [(base, n), (prev[f"w{i}_{k}"], 1)]
        parts += [(base, n), (a_k, 1), (base, n), (b_k, 1), (base, n)]
        return b.concat(parts)

    words[f"a{k + 1}"] = density(a_k)
    words[f"b{k + 1}"] = density(b_k)
    return words


def build_level(family: LevelFamily, n_next: int) -> LevelFamily:
    """Append level top+1 at the given parameter; no inequality checking."""
    words = _level_words(family, n_next)
    family.levels.append(words)
    family.params.append(n_next)
    return family


def _certify_words(family: LevelFamily, words: dict, n: int) -> CertificateReport:
    """Exact-rational certification of candidate words for level top+1."""
    k = family.top_level
    new_level = k + 1
    builder = family.builder
    a_next = words[f"a{new_level}"]
    b_next = words[f"b{new_level}"]
    len_next = a_next.length
    doubled = {
        "a": builder.concat([(a_next, 2)]),
        "b": builder.concat([(b_next, 2)]),
    }
    report = CertificateReport(level=new_level, param=n)

    # closed-form tail bounds of the weight scheme, up to the new level
    for m in range(1, new_level + 1):
        report.rows.append(_row(f"eps-tail[N={m}]", family.eps.tail(m), family.eps.tail_bound(m)))

    for m in range(1, k + 1):
        bound = family.eps.partial(m, k)
        for side in ("a", "b"):
            skip = excluded_a(m) if side == "a" else excluded_b(m)
            for name in level_names(m):
                if name == skip:
                    continue
                ident = f"{side}-freq[m={m},u={name}]"
                u = family.string(m, name)
                if u is None:
                    report.rows.append(
                        _unverifiable(ident, "unverifiable at budget: word exceeds symbol budget")
                    )
                    continue
                if not builder.widen_window(len(u) + 1):
                    report.rows.append(
                        _unverifiable(
                            ident,
                            f"unverifiable at budget: pattern length {len(u)} "
                            f"exceeds window cap {builder.snippet_cap}",
                        )
                    )
                    continue
                count = builder.count_occurrences(u, doubled[side])
                lhs = Fraction(count, 2 * len_next)
                rhs = bound / (len(u) * (2 * len(u) - 1))
                report.rows.append(_row(ident, lhs, rhs))

    if k >= 2:
        p_k = family.period(k)
        if p_k is None:
            report.rows.append(
                _unverifiable("period-gap", "unverifiable at budget: a_k a_k exceeds symbol budget")
            )
        else:
            a_k_len = family.word_length(k)
            lhs = Fraction(a_k_len, len_next)
            rhs = Fraction(1, (4 * k - 2) * p_k) - Fraction(1, 3**k * a_k_len)
            report.rows.append(_row("period-gap", lhs, rhs))

    prefix = family.eps.partial(1, k)
    report.rows.append(
        _row("a-density[0]", Fraction(builder.count_occurrences("0", a_next), len_next), prefix)
    )
    report.rows.append(
        _row("b-density[1]", Fraction(builder.count_occurrences("1", b_next), len_next), prefix)
    )
    return report


def certify_level(family: LevelFamily, k: int | None = None) -> CertificateReport:
    """Re-run the certifier for a built level (default: the top level)."""
    k = family.top_level if k is None else k
    if k < 2 or k > family.top_level:
        raise OutOfBuiltRange(f"no built level {k} to certify")
    # temporarily view the family as if level k were the candidate
    saved = family.levels
    family.levels = saved[: k - 1]
    try:
        return _certify_words(family, saved[k - 1], family.params[k - 2])
    finally:
        family.levels = saved


def certify_candidate(family: LevelFamily, n: int, at_level: int | None = None) -> CertificateReport:
    """Certify a candidate level at parameter n without building it.

    ``at_level`` defaults to top+1; passing a built level's number re-runs
    the certifier as if that level were the candidate (used to probe the
    pass boundary of already-chosen parameters).
    """
    target = family.top_level + 1 if at_level is None else at_level
    if target < 2 or target > family.top_level + 1:
        raise OutOfBuiltRange(f"cannot certify candidate level {target}")
    saved = family.levels
    family.levels = saved[: target - 1]
    try:
        return _certify_words(family, _level_words(family, n), n)
    finally:
        family.levels = saved


def choose_parameter(family: LevelFamily, cap: int | None = None) -> int:
    """Smallest n > 1 whose candidate level passes certification.

    Doubles until a passing n is found, bisects down to the boundary, then
    confirms fail at n-1 (walking down if the pass region is unexpectedly
    non-monotone).
    """
    if not family.is_certified():
        raise InvalidParameter("family must be certified through its top level")
    cap = cap or family.budgets.search_cap

    def passes(n: int) -> bool:
        report = certify_candidate(family, n)
        if report.unverifiable_rows and not report.failed_rows:
            notes = "; ".join(r.note for r in report.unverifiable_rows[:2])
            raise BudgetExceeded(
                f"certification of level {report.level} undecidable at budget: {notes}"
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


def build_family(
    levels: int,
    eps: FrequencySequence | None = None,
    budgets: Budgets | None = None,
    params: list[int] | None = None,
) -> LevelFamily:
    """Build and certify a family through the requested level.

    When ``params`` is given those parameters are used verbatim (certification
    still runs and is recorded); otherwise each parameter is auto-chosen.
    """
    if levels < 2:
        raise InvalidParameter("a family needs at least 2 levels")
    family = LevelFamily(eps=eps, budgets=budgets)
    for index in range(levels - 1):
        if params is not None:
            n = params[index]
        else:
            n = choose_parameter(family)
        report = certify_candidate(family, n)
        build_level(family, n)
        family.certificates.append(report)
    return family


# -- distinct-subword checks ------------------------------------------------


@dataclass
class PairCheck:
    u: str
    v: str
    status: str  # "verified" | "certified-by-inequalities"
    count: int | None


@dataclass
class SubwordReport:
    level: int
    pairs: list

    @property
    def verified(self) -> list:
        return [p for p in self.pairs if p.status == "verified"]

    @property
    def deferred(self) -> list:
        return [p for p in self.pairs if p.status == "certified-by-inequalities"]

    @property
    def violations(self) -> list:
        return [p for p in self.pairs if p.count not in (None, 0)]


def verify_distinct_subwords(
    family: LevelFamily, k: int, budget: int | None = None, jobs: int = 1
) -> SubwordReport:
    """Scan every ordered pair of distinct level-k words u, v for u inside vv.

    Pairs whose materialization exceeds the budget are reported as
    certified-by-inequalities, never silently dropped.  Scans are
    independent; ``jobs`` > 1 runs them in a thread pool with canonical
    output order either way.
    """
    budget = budget if budget is not None else family.budgets.symbols
    names = family.names(k)
    word_len = family.word_length(k)
    scannable = 2 * word_len <= budget
    strings = {name: family.string(k, name) for name in names} if scannable else {}
    scannable = scannable and all(s is not None for s in strings.values())
    tasks = [(u, v) for v in names for u in names if u != v]
    if not scannable:
        return SubwordReport(
            level=k,
            pairs=[PairCheck(u, v, "certified-by-inequalities", None) for u, v in tasks],
        )
    doubles = {name: strings[name] + strings[name] for name in names}

    def scan(pair):
        u_name, v_name = pair
        count = slp.count_occurrences_naive(strings[u_name], doubles[v_name])
        return PairCheck(u_name, v_name, "verified", count)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(scan, tasks))
    else:
        pairs = [scan(t) for t in tasks]
    return SubwordReport(level=k, pairs=pairs)


# -- the transitive point --------------------------------------------------


def transitive_point_window(family: LevelFamily, start: int, size: int) -> str:
    """Symbols x_start ... x_(start+size-1) of the transitive point.

    Coordinates follow the central convention x_1..x_|a_K| =
    x_(1-|a_K|)..x_0 = a_K, so the window must lie inside (-|a_K|, |a_K|].
    """
    if family.top_level < 2:
        raise OutOfBuiltRange("family has no built level >= 2")
    if size < 0:
        raise InvalidParameter("window length must be nonnegative")
    top = family.top_level
    span = family.word_length(top)
    if start <= -span or start + size > span + 1:
        raise OutOfBuiltRange(
            f"window [{start}, {start + size}) outside built range ({-span}, {span}]"
        )
    doubled = family.builder.concat([(family.a(top), 2)])
    return slp.window(doubled, start + span - 1, size, cap=family.budgets.symbols)


PAIR_FORMS = ("equal", "a-w", "w-a", "b-w", "w-b", "ab", "ba")


def classify_pair(left: str, right: str, k: int) -> str:
    """Classify two adjacent level-k block names; 'violation' if disallowed."""
    if left == right:
        return "equal"
    a_name, b_name = f"a{k}", f"b{k}"

    def is_w(name):
        return name.startswith("w")

    if left == a_name and is_w(right):
        return "a-w"
    if is_w(left) and right == a_name:
        return "w-a"
    if left == b_name and is_w(right):
        return "b-w"
    if is_w(left) and right == b_name:
        return "w-b"
    if left == a_name and right == b_name:
        return "ab"
    if left == b_name and right == a_name:
        return "ba"
    return "violation"


@dataclass
class StructureParse:
    level: int
    start: int
    blocks: list
    pair_kinds: list
    violations: list


def parse_structure(family: LevelFamily, k: int, start: int, num_blocks: int) -> StructureParse:
    """Parse an aligned window of the transitive point into level-k blocks.

    The window must start at a coordinate congruent to 1 modulo the level-k
    word length; every block is identified as a level-k word and every
    adjacent pair classified (equal, density-word next to periodic word, or
    one of the two mixed density junctions).
    """
    word_len = family.word_length(k)
    if (start - 1) % word_len != 0:
        raise MisalignedWindow(f"window start {start} is not 1 mod {word_len}")
    if num_blocks < 1:
        raise InvalidParameter("need at least one block")
    strings = {}
    for name in family.names(k):
        text = family.string(k, name)
        if text is None:
            raise BudgetExceeded(f"level-{k} words exceed the symbol budget")
        strings[text] = name
    window_text = transitive_point_window(family, start, num_blocks * word_len)
    blocks = []
    violations = []
    for i in range(num_blocks):
        segment = window_text[i * word_len : (i + 1) * word_len]
        name = strings.get(segment)
        if name is None:
            violations.append(("block", i, "not a level-%d word" % k))
            name = "?"
        blocks.append(name)
    pair_kinds = []
    for i in range(num_blocks - 1):
        kind = classify_pair(blocks[i], blocks[i + 1], k)
        if kind == "violation":
            violations.append(("pair", i, f"{blocks[i]}|{blocks[i + 1]}"))
        pair_kinds.append(kind)
    return StructureParse(
        level=k, start=start, blocks=blocks, pair_kinds=pair_kinds, violations=violations
    )


# -- empirical measures ------------------------------------------------------


def empirical_measure(family: LevelFamily, k: int, side: str, cylinder: str) -> Fraction:
    """Exact shift-average frequency of a cylinder word along the level-k orbit
    segment of the transitive point (side "a") or its mirror (side "b").

    Averages over the 2|a_k| shifts m in (-|a_k|, |a_k|]; windows reaching
    past the central doubled word continue canonically into the next copy
    of the base word.
    """
    if side not in ("a", "b"):
        raise InvalidParameter("side must be 'a' or 'b'")
    if not cylinder:
        raise InvalidParameter("cylinder word must be nonempty")
    if k < 2 or k > family.top_level:
        raise OutOfBuiltRange(f"level {k} not built")
    base = family.a(k) if side == "a" else family.b(k)
    span = base.length
    size = len(cylinder)
    if size > span:
        raise BudgetExceeded("cylinder longer than the orbit segment's base word")
    if size > family.budgets.symbols:
        raise BudgetExceeded("cylinder exceeds the symbol budget")
    builder = family.builder
    if not builder.widen_window(size + 1):
        raise BudgetExceeded("cylinder exceeds the counting window cap")
    doubled = builder.concat([(base, 2)])
    inner = builder.count_occurrences(cylinder, doubled)
    prefix_hit = 1 if slp.window(doubled, 0, size) == cylinder else 0
    tail = slp.window(doubled, 2 * span - (size - 1), size - 1) if size > 1 else ""
    continuation = slp.window(base, 0, size)
    edge = slp.count_occurrences_naive(cylinder, tail + continuation)
    return Fraction(inner - prefix_hit + edge, 2 * span)


@dataclass
class MeasureRow:
    level: int
    a_zero: Fraction
    a_one: Fraction
    b_zero: Fraction
    b_one: Fraction
    gap: Fraction
    eps_prefix: Fraction
    a_zero_below_third: bool
    b_one_below_third: bool
    gap_above_third: bool


def measure_report(family: LevelFamily, k_max: int | None = None) -> list:
    """Single-symbol empirical frequencies and separation flags per level."""
    k_max = family.top_level if k_max is None else min(k_max, family.top_level)
    third = Fraction(1, 3)
    rows = []
    for k in range(2, k_max + 1):
        a0 = empirical_measure(family, k, "a", "0")
        a1 = empirical_measure(family, k, "a", "1")
        b0 = empirical_measure(family, k, "b", "0")
        b1 = empirical_measure(family, k, "b", "1")
        gap = abs(a0 - b0)
        rows.append(
            MeasureRow(
                level=k,
                a_zero=a0,
                a_one=a1,
                b_zero=b0,
                b_one=b1,
                gap=gap,
                eps_prefix=family.eps.partial(1, k),
                a_zero_below_third=a0 < third,
                b_one_below_third=b1 < third,
                gap_above_third=gap > third,
            )
        )
    return rows


# -- complexity ---------------------------------------------------------------


def distinct_factor_counts(text: str, n_max: int) -> list[int]:
    """Number of distinct length-n factors of ``text`` for n = 1..n_max.

    Built on a suffix automaton: a state with link length l and length h
    contributes one distinct factor for every n in (l, h].
    """
    sa_len = [0]
    sa_link = [-1]
    sa_next = [{}]
    last = 0
    for ch in text:
        cur = len(sa_len)
        sa_len.append(sa_len[last] + 1)
        sa_link.append(-1)
        sa_next.append({})
        p = last
        while p != -1 and ch not in sa_next[p]:
            sa_next[p][ch] = cur
            p = sa_link[p]
        if p == -1:
            sa_link[cur] = 0
        else:
            q = sa_next[p][ch]
            if sa_len[p] + 1 == sa_len[q]:
                sa_link[cur] = q
            else:
                clone = len(sa_len)
                sa_len.append(sa_len[p] + 1)
                sa_link.append(sa_link[q])
                sa_next.append(dict(sa_next[q]))
                while p != -1 and sa_next[p].get(ch) == q:
                    sa_next[p][ch] = clone
                    p = sa_link[p]
                sa_link[q] = clone
                sa_link[cur] = clone
        last = cur
    diff = [0] * (n_max + 2)
    for v in range(1, len(sa_len)):
        lo = sa_len[sa_link[v]] + 1
        hi = min(sa_len[v], n_max)
        if lo <= hi:
            diff[lo] += 1
            diff[hi + 1] -= 1
    counts = []
    acc = 0
    for n in range(1, n_max + 1):
        acc += diff[n]
        counts.append(acc)
    return counts


@dataclass
class ComplexityProfile:
    window_length: int
    counts: list  # counts[i] = p(i+1); lower bounds for the full system


def complexity_profile(family: LevelFamily, n_max: int, window_length: int) -> ComplexityProfile:
    """Distinct-factor counts of a window of x centered at the origin."""
    if window_length > family.budgets.symbols:
        raise BudgetExceeded("window exceeds the symbol budget")
    if n_max < 1 or n_max > window_length:
        raise InvalidParameter("n_max must be in 1..window_length")
    start = 1 - window_length // 2
    text = transitive_point_window(family, start, window_length)
    return ComplexityProfile(
        window_length=window_length, counts=distinct_factor_counts(text, n_max)
    )


# -- serialization -------------------------------------------------------------


def _fraction_obj(x: Fraction | None):
    if x is None:
        return None
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _fraction_from(obj) -> Fraction | None:
    if obj is None:
        return None
    return Fraction(int(obj["num"]), int(obj["den"]))


def report_to_obj(report: CertificateReport) -> dict:
    return {
        "level": report.level,
        "param": str(report.param),
        "rows": [
            {
                "id": r.ident,
                "lhs": _fraction_obj(r.lhs),
                "rhs": _fraction_obj(r.rhs),
                "margin": _fraction_obj(r.margin),
                "status": r.status,
                "note": r.note,
            }
            for r in report.rows
        ],
    }


def report_from_obj(obj) -> CertificateReport:
    report = CertificateReport(level=int(obj["level"]), param=int(obj["param"]))
    for row in obj["rows"]:
        report.rows.append(
            CertRow(
                ident=row["id"],
                lhs=_fraction_from(row["lhs"]),
                rhs=_fraction_from(row["rhs"]),
                status=row["status"],
                note=row.get("note", ""),
            )
        )
    return report


def family_to_obj(family: LevelFamily) -> dict:
    roots = []
    for k in range(1, family.top_level + 1):
        roots.extend(family.word(k, name) for name in family.names(k))
    order, ids = slp.collect_nodes(roots)
    levels = []
    for k in range(1, family.top_level + 1):
        levels.append(
            {
                "level": k,
                "words": {name: ids[family.word(k, name).uid] for name in family.names(k)},
            }
        )
    return {
        "dim": 1,
        "K": family.top_level,
        "eps_scheme": family.eps.scheme,
        "params": [str(n) for n in family.params],
        "levels": levels,
        "slp": {"nodes": slp.nodes_to_obj(order, ids)},
        "certificates": [report_to_obj(r) for r in family.certificates],
    }


def family_from_obj(obj, budgets: Budgets | None = None) -> LevelFamily:
    """Rebuild a family from its file form, re-validating the structure.

    The words are reconstructed from the parameters and the serialized node
    table must match the reconstruction exactly.
    """
    try:
        if int(obj["dim"]) != 1:
            raise MalformedFamily("not a one-dimensional family file")
        levels = int(obj["K"])
        params = [int(p) for p in obj["params"]]
        scheme = obj["eps_scheme"]
        if len(params) != levels - 1:
            raise MalformedFamily("parameter count does not match K")
        family = LevelFamily(
            eps=FrequencySequence(dim=1, scheme=scheme), budgets=budgets
        )
        for n in params:
            build_level(family, n)
        family.certificates = [report_from_obj(c) for c in obj["certificates"]]
        if len(family.certificates) != levels - 1:
            raise MalformedFamily("certificate count does not match K")
        rebuilt = family_to_obj(family)
        if rebuilt["slp"] != obj["slp"] or rebuilt["levels"] != obj["levels"]:
            raise MalformedFamily("serialized words do not match their parameters")
        return family
    except MalformedFamily:
        raise
    except (KeyError, TypeError, ValueError, InvalidParameter) as exc:
        raise MalformedFamily(f"malformed family file: {exc}") from exc
