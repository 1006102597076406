"""Counting V4 and C4 fields and comparing the counts with predictions.

V4 fields are counted two ways: through *-strongly carefree triples
(g1, g2, g3) in a region of R^3, and by listing fields directly and testing
their discriminant and shape.  C4 fields of fixed A are counted by listing
(B, C, D) and compared with the summatory function F_{Sigma_A, U}.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from . import fano_lattice as fl
from . import numtheory as nt
from . import quartic_c4 as c4
from . import quartic_v4 as v4

# residues of (g1, g2, g3) mod 4 for each wild/tame case
RESIDUE_CLASSES = {
    "I": {(1, 3, 2), (3, 1, 2)},
    "II": {(1, 1, 2), (3, 3, 2), (1, 1, 3), (3, 3, 1)},
    "III": {(1, 1, 1), (3, 3, 3)},
}
DISC_EXPONENT = {"I": 6, "II": 4, "III": 0}
SCALE_SQ = {"I": 1, "II": 4, "III": 1}  # s^2
CASES_FOR_CLASS = {"wild": ("I", "II"), "tame": ("III",)}
SIGN_PATTERNS = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))


def exact(x) -> Fraction:
    """Exact rational for ints, Fractions, rational strings and floats."""
    if isinstance(x, str):
        return fl.parse_rational(x)
    return Fraction(x)


@dataclass(frozen=True)
class Window:
    family: str
    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r1", exact(self.r1))
        object.__setattr__(self, "r2", exact(self.r2))
        fl.window_measure(self.family, float(self.r1), float(self.r2))

    def measure(self) -> float:
        return fl.window_measure(self.family, float(self.r1), float(self.r2))

    def contains(self, s: v4.V4Shape) -> bool:
        if s.family != self.family:
            return False
        lo, hi = self.r1**2, self.r2**2
        if self.family == "oC":
            return lo <= s.x2 <= s.y2 < hi
        return lo <= s.x2 < s.y2 < hi


@dataclass(frozen=True)
class RegionParams:
    """|g1 g2 g3| < N and r1 <= |g3/g1| <= |g3/g2| < r2, with N stored as N^2."""

    n_sq: Fraction
    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        for name in ("n_sq", "r1", "r2"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.n_sq <= 0 or not 0 < self.r1 < self.r2:
            raise ValueError("need N > 0 and 0 < r1 < r2")

    @classmethod
    def from_n(cls, n, r1, r2) -> "RegionParams":
        return cls(exact(n) ** 2, r1, r2)

    @property
    def n(self) -> float:
        return math.sqrt(self.n_sq)


# -- carefree enumeration ---------------------------------------------------


def _a3_limit(p: RegionParams) -> int:
    # A1 >= A2 > A3/r2 forces A3^3 < N r2^2
    a3 = 0
    while Fraction(a3 + 1) ** 6 < p.n_sq * p.r2**4:
        a3 += 1
    return a3


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _count_block(args) -> tuple:
    p, case, a3_values, collect = args
    classes = RESIDUE_CLASSES[case]
    a3_max = max(a3_values, default=0)
    sf = nt.squarefree_mask(max(_floor(a3_max / p.r1), a3_max, 2))
    count = 0
    real = 0
    triples = []
    for a3 in a3_values:
        if not sf[a3]:
            continue
        lo = _floor(a3 / p.r2) + 1  # A2 > A3/r2
        for a1 in range(lo, _floor(a3 / p.r1) + 1):
            if (a1 * lo * a3) ** 2 >= p.n_sq:
                break
            if not sf[a1] or math.gcd(a1, a3) != 1:
                continue
            for a2 in range(lo, a1 + 1):
                if (a1 * a2 * a3) ** 2 >= p.n_sq:
                    break
                if not sf[a2] or math.gcd(a2, a1) != 1 or math.gcd(a2, a3) != 1:
                    continue
                for s1, s2, s3 in SIGN_PATTERNS:
                    g = (s1 * a1, s2 * a2, s3 * a3)
                    if (g[0] % 4, g[1] % 4, g[2] % 4) not in classes:
                        continue
                    if len(set(g)) != 3:
                        continue
                    if a1 == a2 == 1 and g[1] * g[2] < 0:
                        continue  # the other ordering of a tied case-I field
                    count += 1
                    real += s1 + s2 + s3 == 3
                    if collect:
                        triples.append(g)
    return count, real, triples


def enumerate_carefree(p: RegionParams, case: str, workers: int = 1, collect: bool = False, blocks: int = 8):
    """Count *-strongly carefree triples of the given case in the region.

    Returns (count, totally_real_count, triples); triples is empty unless
    ``collect`` is set.  Work is split over disjoint blocks of |g3|.
    """
    if case not in RESIDUE_CLASSES:
        raise ValueError(f"unknown case {case!r}")
    a3s = list(range(1, _a3_limit(p) + 1))
    chunks = [a3s[k::blocks] for k in range(blocks)]
    jobs = [(p, case, chunk, collect) for chunk in chunks if chunk]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_block, jobs))
    else:
        parts = [_count_block(job) for job in jobs]
    triples = sorted(t for part in parts for t in part[2])
    return sum(part[0] for part in parts), sum(part[1] for part in parts), triples


def region_for(case: str, x, window: Window) -> RegionParams:
    s2 = SCALE_SQ[case]
    return RegionParams(exact(x) / 2 ** DISC_EXPONENT[case], window.r1**2 / s2, window.r2**2 / s2)


def delta2_density(case: str) -> Fraction:
    """Share of sign-valid classes in ({+-} x Z/4)^3 that belong to the case."""
    total = hits = 0
    for signs in SIGN_PATTERNS:
        for res in np.ndindex(4, 4, 4):
            total += 1
            g = tuple((s * r) % 4 for s, r in zip(signs, res))
            hits += g in RESIDUE_CLASSES[case]
    return Fraction(hits, total)


# -- region volume ---------------------------------------------------------


def region_volume(p: RegionParams) -> float:
    return 4 * p.n / 3 * (math.log(p.r2) - math.log(p.r1)) ** 2


def _box(p: RegionParams) -> tuple:
    n, r1, r2 = p.n, float(p.r1), float(p.r2)
    b1 = (n * r2 / r1**2) ** (1 / 3)
    b2 = min(b1, (n / r1) ** (1 / 3))
    b3 = (n * r2**2) ** (1 / 3)
    return b1, b2, b3


def monte_carlo_volume(p: RegionParams, samples: int = 10**6, seed: int = 0) -> float:
    """Monte Carlo volume of the region (all eight octants)."""
    rng = np.random.default_rng(seed)
    b = _box(p)
    pts = rng.random((samples, 3)) * np.array(b)
    g1, g2, g3 = pts.T
    r1, r2 = float(p.r1), float(p.r2)
    inside = (g1 * g2 * g3 < p.n) & (r1 * g1 <= g3) & (g2 <= g1) & (g3 < r2 * g2)
    return 8 * b[0] * b[1] * b[2] * inside.mean()


def lattice_point_count(p: RegionParams) -> int:
    """Exact number of nonzero integer points of the region (all octants)."""
    octant = 0
    for a3 in range(1, _a3_limit(p) + 1):
        lo = _floor(a3 / p.r2) + 1
        for a1 in range(lo, _floor(a3 / p.r1) + 1):
            # largest a2 with (a1 a2 a3)^2 < N^2
            m = a1 * a3
            hi = math.isqrt(_floor(p.n_sq / (m * m)))
            while (m * hi) ** 2 >= p.n_sq:
                hi -= 1
            hi = min(hi, a1)
            if hi < lo:
                if (a1 * lo * a3) ** 2 >= p.n_sq:
                    break
                continue
            octant += hi - lo + 1
    return 8 * octant


@dataclass
class LatticeCheck:
    n: float
    r1: float
    r2: float
    volume: float
    points: int
    error: float
    error_over_n23: float


def lattice_count_check(p: RegionParams) -> LatticeCheck:
    vol = region_volume(p)
    pts = lattice_point_count(p)
    err = abs(pts - vol)
    return LatticeCheck(p.n, float(p.r1), float(p.r2), vol, pts, err, err / p.n ** (2 / 3))


# -- reports -----------------------------------------------------------------


@dataclass
class CensusRow:
    x: int
    count: int
    predicted: float
    ratio: float
    extra: dict = field(default_factory=dict)


@dataclass
class CensusReport:
    experiment: str
    config: dict
    rows: list = field(default_factory=list)

    def errors(self) -> list:
        return [abs(r.ratio - 1) for r in self.rows]

    def strictly_improving(self) -> bool:
        e = self.errors()
        return all(b < a for a, b in zip(e, e[1:]))

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "rows": [_jsonable(asdict(r)) for r in self.rows],
            "strictly_improving": self.strictly_improving(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "X", "count", "predicted", "ratio"])
        for r in self.rows:
            w.writerow([self.experiment, r.x, r.count, f"{r.predicted:.6f}", f"{r.ratio:.6f}"])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


# -- V4 census ---------------------------------------------------------------


def direct_v4_count(x: int, window: Window, cls: str) -> tuple:
    """Fields with |disc| < x, of the class, with shape in the window."""
    total = real = 0
    for f in v4.iter_fields(x, strict=True):
        if f.wild != (cls == "wild"):
            continue
        if window.contains(v4.shape(f)):
            total += 1
            real += f.totally_real
    return total, real


def v4_census(x: int, window: Window, cls: str, direct: bool = True, workers: int = 1) -> CensusRow:
    """Count fields with |disc| < x and shape in the window.

    The carefree count is always computed; with ``direct`` the fields are
    also listed one by one and the two counts must agree.
    """
    if cls not in CASES_FOR_CLASS:
        raise ValueError(f"unknown class {cls!r}")
    if (cls == "wild") != (window.family == "oC"):
        raise ValueError("wild fields use oC windows and tame fields use oI windows")
    by_case = {}
    total = real = 0
    for case in CASES_FOR_CLASS[cls]:
        n, r, _ = enumerate_carefree(region_for(case, x, window), case, workers=workers)
        by_case[case] = n
        total += n
        real += r
    extra = {"carefree_by_case": by_case, "totally_real": real, "totally_imaginary_or_mixed": total - real}
    if direct:
        d_total, d_real = direct_v4_count(x, window, cls)
        if (d_total, d_real) != (total, real):
            raise AssertionError(f"dual-path mismatch at X={x}: carefree {total}/{real}, direct {d_total}/{d_real}")
        extra["direct"] = d_total
    const = nt.euler_constant(cls).value
    predicted = const * window.measure() * math.sqrt(x)
    return CensusRow(x, total, predicted, total / predicted, extra)


# -- C4 census ---------------------------------------------------------------

C4_CASES = ("I", "II", "III", "nr")
_C4_SCALE = {"I": 11, "II": 6, "III": 4, "nr": 0}  # |disc| = 2^k A^2 n^3
STATED_K = {"I": 14, "II": 9, "III": 10, "nr": 6}
CORRECTED_K = {"I": 11, "II": 9, "III": 10, "nr": 6}


def c4_u(a: int, case: str) -> frozenset:
    if case in ("I", "II"):
        return nt.ALL_U
    one = (a % 4 == 3) if case == "III" else (a % 4 == 1)
    return frozenset({1}) if one else frozenset({5})


def _check_a(a: int, sign: int | None = None) -> None:
    if a % 2 == 0 or not nt.is_squarefree(a):
        raise ValueError(f"A = {a} must be odd and squarefree")
    if sign is not None and sign != (1 if a > 0 else -1):
        raise ValueError("sign must match the sign of A")


def c4_y(a: int, case: str, x: int) -> int:
    """Largest n with 2^k A^2 n^3 <= x for the case's k."""
    c = 2 ** _C4_SCALE[case] * a * a
    n = max(int((x / c) ** (1 / 3)) - 2, 0)
    while c * (n + 1) ** 3 <= x:
        n += 1
    return n


def direct_c4_count(a: int, case: str, x: int) -> int:
    _check_a(a)
    e = {"I": 8, "II": 6, "III": 4, "nr": 0}[case]
    count = 0
    d = 2
    while 2**e * a * a * d**3 <= x:
        if (d % 2 == 0) == (case == "I") and math.gcd(a, d) == 1 and nt.is_squarefree(d):
            for b, c in nt.two_square_reps(d):
                tag = c4.classify(a, b, c, d)
                if tag == case or (case == "nr" and tag in ("IV", "V")):
                    count += 1
        d += 1
    return count


def c4_identity(a: int, case: str, x: int) -> dict:
    """F-based counts: the exact identity and the plain half-F expression."""
    u = c4_u(a, case)
    y = c4_y(a, case, x)
    big = nt.big_f(y, nt.SigmaSet.for_a(a), u)
    if case == "I":
        exact_value = Fraction(big)
    else:
        exact_value = Fraction(big - (1 in u and y >= 1), 2)
    return {"Y": y, "U": sorted(u), "F": big, "exact": exact_value, "half_F": Fraction(big, 2)}


def c4_main_term(a: int, case: str, x: float, k: dict = STATED_K, tol: float = 1e-8) -> float:
    const = nt.euler_constant("sigma", a, tol=tol).value
    return const * x ** (1 / 3) / (2 ** k[case] * a * a) ** (1 / 3)


def c4_census(a: int, case: str, x: int, sign: int | None = None) -> CensusRow:
    if case not in C4_CASES:
        raise ValueError(f"unknown case {case!r}")
    _check_a(a, sign)
    count = direct_c4_count(a, case, x)
    ident = c4_identity(a, case, x)
    predicted = c4_main_term(a, case, x)
    extra = dict(ident)
    extra["exact_matches"] = count == ident["exact"]
    extra["half_F_matches"] = count == ident["half_F"]
    extra["corrected_predicted"] = c4_main_term(a, case, x, CORRECTED_K)
    return CensusRow(x, count, predicted, count / predicted, extra)


# -- convergence ------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    """Either ("v4", cls, window) or ("c4", case, A)."""

    kind: str
    label: str
    params: tuple

    @classmethod
    def v4(cls, klass: str, window: Window) -> "Experiment":
        return cls("v4", f"v4-{klass}-{window.family}({float(window.r1):g},{float(window.r2):g})", (klass, window))

    @classmethod
    def c4(cls, case: str, a: int) -> "Experiment":
        return cls("c4", f"c4-{case}-A{a}", (case, a))

    def run(self, x: int, direct: bool = False, workers: int = 1) -> CensusRow:
        if self.kind == "v4":
            klass, window = self.params
            return v4_census(x, window, klass, direct=direct, workers=workers)
        case, a = self.params
        return c4_census(a, case, x)


def convergence_report(exp: Experiment, checkpoints, direct: bool = False, workers: int = 1) -> CensusReport:
    checkpoints = list(checkpoints)
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be strictly increasing")
    config = {"kind": exp.kind, "label": exp.label, "checkpoints": checkpoints}
    if exp.kind == "v4":
        klass, window = exp.params
        config.update({"class": klass, "family": window.family, "R1": str(window.r1), "R2": str(window.r2)})
    else:
        config.update({"case": exp.params[0], "A": exp.params[1]})
    report = CensusReport(exp.label, config)
    for x in checkpoints:
        report.rows.append(exp.run(x, direct=direct, workers=workers))
    return report
