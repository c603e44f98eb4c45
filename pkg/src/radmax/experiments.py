"""Scenario runner: reproducible experiments written as CSV tables plus a JSON summary.

A scenario is one JSON object::

    {"name": "cantor-sharpness", "kind": "sharpness",
     "set": "dilated:base={cantor:depth={depth}},k=-3..3",
     "params": {"d": 3, "p": [1.1, 1.5]},
     "grids": {"ladder": [3, 4, 5, 6, 7, 8, 9, 10, 11, 12]},
     "output": "out/", "seed": 0}

Every default is written back into the summary, so an output directory
describes itself.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import conditions, dyadic, majorants, spherical
from .dyadic import DilationSet
from .lorentz import LorentzParams, SimpleFunction, lorentz_norm
from .profiles import constant, power
from .parsing import DescriptorError, parse_delta_grid, parse_profile, parse_r_grid, parse_set
from .quadrature import BACKEND, QuadratureSpec
from .reports import ConditionReport, fmt, jsonable

KINDS = ("kernel-validate", "conditions", "equivalences", "sharpness", "domination", "lower-bound")

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2


class ScenarioError(ValueError):
    """Unusable configuration (exit status 1)."""


class InvariantFailure(AssertionError):
    """An experiment's invariant was violated (exit status 2)."""


# ----------------------------------------------------------------------------
# scenario
# ----------------------------------------------------------------------------

DEFAULT_PARAMS: dict[str, dict[str, Any]] = {
    "kernel-validate": {"d": [2, 3], "n_pairs": 100, "ratio": [0.1, 10.0], "tol": 1e-8},
    "conditions": {"d": 3, "p": 1.1, "q": 1.1, "q_critical": 3.0},
    "equivalences": {"d": 3, "p": 1.1, "q": 2.0, "p_tent": 1.5, "q_tent": 3.0, "max_form_ratio": 32.0,
                     "stability": 0.2},
    "sharpness": {"d": 3, "p": [1.1, 1.5], "q": None, "min_slope": 0.2, "max_slope": 0.05},
    "domination": {"d": 3, "p": 1.2, "profiles": ["indicator:on=[1;2]"], "stability": 0.1},
    "lower-bound": {"d": 3, "n_pairs": 200, "stability": 0.1},
}

DEFAULT_GRIDS: dict[str, dict[str, Any]] = {
    "kernel-validate": {},
    "conditions": {"delta": "2^-2..2^-12", "n_max": 12, "max_len": 16},
    "equivalences": {"n_max": 24, "n_range": 32},
    "sharpness": {"ladder": list(range(3, 13))},
    "domination": {"r": "geo:0.25..8:256", "t_levels": 5},
    "lower-bound": {"t_levels": 4, "n": [3, 8]},
}


@dataclass
class Scenario:
    name: str
    kind: str
    set: str | list[str] | None = None
    params: dict[str, Any] = field(default_factory=dict)
    grids: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ScenarioError(f"unknown experiment kind {self.kind!r} (choose from {', '.join(KINDS)})")
        self.params = {**DEFAULT_PARAMS[self.kind], **(self.params or {})}
        self.grids = {**DEFAULT_GRIDS[self.kind], **(self.grids or {})}

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("a scenario is a JSON object")
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
        if "kind" not in data:
            raise ScenarioError("scenario needs a 'kind'")
        data = dict(data)
        data.setdefault("name", data["kind"])
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "Scenario":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)

    def sets(self) -> list[str]:
        if self.set is None:
            return []
        return [self.set] if isinstance(self.set, str) else list(self.set)


@dataclass
class RunResult:
    scenario: Scenario
    tables: dict[str, list[list]]
    summary: dict[str, Any]
    status: int = EXIT_OK
    failures: list[str] = field(default_factory=list)

    def csv_text(self, name: str) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.tables[name]:
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()

    def summary_json(self) -> str:
        body = {"scenario": asdict(self.scenario), "backend": BACKEND, "status": self.status,
                "failures": self.failures, **self.summary}
        return json.dumps(jsonable(body), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name in self.tables:
            paths.append(_atomic_write(out / f"{self.scenario.name}_{name}.csv", self.csv_text(name)))
        paths.append(_atomic_write(out / f"{self.scenario.name}_summary.json", self.summary_json()))
        return paths


def _atomic_write(path: Path, text: str) -> Path:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)
    return path


def workers() -> int:
    """Worker cap from ``RADMAX_THREADS`` (default 1)."""
    raw = os.environ.get("RADMAX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ScenarioError(f"RADMAX_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def _map(fn: Callable, items: Iterable) -> list:
    """Ordered map over independent cells, concurrent up to :func:`workers`."""
    items = list(items)
    n = workers()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _as_list(x) -> list:
    return list(x) if isinstance(x, (list, tuple)) else [x]


# ----------------------------------------------------------------------------
# sharpness
# ----------------------------------------------------------------------------

def shell_masses(E: DilationSet, k: int, n_max: int, lam: float) -> list[float]:
    """``μ_lam(D_n^k)`` for ``0 <= n <= n_max`` (cached on the set)."""
    cache = E.__dict__.setdefault("_shell_mass_cache", {})
    key = (k, lam)
    have = cache.get(key, [])
    for n in range(len(have), n_max + 1):
        have.append(dyadic.shell_mu(E, k, n, lam))
    cache[key] = have
    return have[:n_max + 1]


def witness_simple_function(E: DilationSet, p: float, d: int, j: int, n_max: int) -> SimpleFunction:
    """Cellwise lower bound for ``𝓜_E f_j`` with ``f_j`` the block witness at scale ``2^j``.

    On ``D_n^k`` the maximal function is at least the cellwise lower-bound factor; the
    cells with ``3 <= n <= n_max`` assemble a simple function.
    """
    f = spherical.witness_block(p, d, j)
    pairs = []
    for k in E.nonempty_blocks():
        if k <= j:
            continue
        masses = shell_masses(E, k, n_max, d)
        for n in range(max(3, k - j + 1), n_max + 1):
            if masses[n] > 0:
                lb = spherical.lemma27_lower_bound(f, k, n, d)
                if lb > 0:
                    pairs.append((lb, masses[n]))
    return SimpleFunction.from_pairs(pairs)


def witness_functional(E: DilationSet, p: float, q: float, d: int, j_range=None,
                       n_max: int = 16) -> tuple[float, dict[int, float]]:
    """``sup_j ‖lower bound of 𝓜_E f_j‖_{L^{p,q}} / ‖f_j‖_p`` over ``j_range``."""
    j0, j1 = j_range if j_range is not None else conditions._default_j_range(E, n_max)
    params = LorentzParams(p, q, lam=d, d=d)
    per_j = {}
    for j in range(j0, j1 + 1):
        sf = witness_simple_function(E, p, d, j, n_max)
        norm_f = spherical.witness_block(p, d, j).lp_norm(p, d)
        per_j[j] = lorentz_norm(sf, params, "distribution") / norm_f if len(sf) else 0.0
    return max(per_j.values(), default=0.0), per_j


@dataclass
class SharpnessScan:
    p: float
    q: float
    d: int
    ladder: list[int]
    condition: ConditionReport
    witness: ConditionReport

    @property
    def co_moving(self) -> bool:
        return self.condition.bounded == self.witness.bounded

    def rows(self):
        for m, c, w in zip(self.ladder, self.condition.values, self.witness.values):
            yield m, c, w


LATTICE_OFFSET = 2


def sharpness_scan(E, d: int, p: float, q: float | None = None, j_range=None,
                   resolution_ladder: Sequence[int] | None = None) -> SharpnessScan:
    """Subcritical condition value and the witness lower-bound functional along a resolution ladder.

    ``E`` is either a fixed set, in which case the rungs are truncation
    depths ``n <= M``, or a callable ``M -> set`` (for example a Cantor
    iterate of depth ``M``); then the rung is the set's resolution and both
    functionals are truncated there, since the finite set stops modelling its
    target below that scale.

    A set of positive measure has no shells off its closure, so at rung ``M``
    it is replaced by its points on the ``2^{k-M+2}`` grid: the first shells
    of that sample fall at depths ``M-1`` and ``M``, inside the truncation.
    """
    q = p if q is None else q
    if resolution_ladder is None:
        if callable(E):
            raise ValueError("a set family needs an explicit ladder")
        top = E.resolution if E.resolution is not None else 12
        resolution_ladder = list(range(3, top + 1))
    rungs, cond, wit = [], [], []
    for m in resolution_ladder:
        Em = E(m) if callable(E) else E
        M = Em.resolution if callable(E) and Em.resolution is not None else m
        M = max(M, 3)
        if Em.has_genuine_mass:
            Em = dyadic.lattice_sample(Em, M - LATTICE_OFFSET, resolution=M)
        rungs.append(M)
        cond.append(conditions.strong_subcritical_value(Em, p, q, d, j_range, n_max=M)[0])
        wit.append(witness_functional(Em, p, q, d, j_range, n_max=M)[0])
    params = {"p": p, "q": q, "d": d, "j_range": j_range}
    # both sides are truncated sums: fit the tail half so that convergence is not read as growth
    tail = max(1, len(rungs) // 2)
    c = ConditionReport("strong-subcritical", params, rungs, cond, ladder_name="resolution", fit_from=tail)
    w = ConditionReport("witness-lower-bound", params, rungs, wit, ladder_name="resolution", fit_from=tail)
    return SharpnessScan(p, q, d, rungs, c, w)


def _set_family(template: str) -> Callable[[int], DilationSet]:
    if "{depth}" not in template:
        base = parse_set(template)
        return lambda m: base
    return lambda m: parse_set(template.replace("{depth}", str(m)))


def _run_sharpness(sc: Scenario) -> RunResult:
    if not sc.sets():
        raise ScenarioError("sharpness needs a set (use {depth} for a resolution family)")
    d = int(sc.params["d"])
    ladder = [int(x) for x in _as_list(sc.grids["ladder"])]
    rows = [["set", "p", "q", "resolution", "condition", "witness"]]
    out, failures = {}, []
    for desc in sc.sets():
        fam = _set_family(desc)
        family = fam if "{depth}" in desc else fam(0)
        for p in _as_list(sc.params["p"]):
            p = float(p)
            scan = sharpness_scan(family, d, p, sc.params.get("q"), None, ladder)
            for m, c, w in scan.rows():
                rows.append([desc, p, scan.q, m, c, w])
            key = f"{desc}|p={p}"
            out[key] = {"condition": scan.condition.to_dict(), "witness": scan.witness.to_dict(),
                        "co_moving": scan.co_moving}
            if not scan.co_moving:
                failures.append(f"{key}: condition {scan.condition.verdict} vs witness {scan.witness.verdict}")
    return RunResult(sc, {"scan": rows}, {"scans": out}, EXIT_INVARIANT if failures else EXIT_OK, failures)


# ----------------------------------------------------------------------------
# kernel validation
# ----------------------------------------------------------------------------

def kernel_validation(d: int, n_pairs: int = 100, ratio=(0.1, 10.0), seed: int = 0,
                      quad: QuadratureSpec = spherical.DEFAULT_QUAD) -> list[tuple[float, float, float]]:
    """``(r, t, |A_t 1 - 1|)`` on log-uniform pairs with ``t / r`` in ``ratio``."""
    rng = np.random.default_rng(seed)
    one = constant(1.0)
    out = []
    lr = rng.uniform(math.log(0.1), math.log(10.0), n_pairs)
    lq = rng.uniform(math.log(ratio[0]), math.log(ratio[1]), n_pairs)
    for a, b in zip(lr, lq):
        r = math.exp(a)
        t = r * math.exp(b)
        out.append((r, t, abs(spherical.spherical_mean(one, r, t, d, quad) - 1.0)))
    return out


def _run_kernel(sc: Scenario) -> RunResult:
    tol = float(sc.params["tol"])
    rows = [["d", "r", "t", "abs_error"]]
    summary, failures = {}, []
    for d in _as_list(sc.params["d"]):
        d = int(d)
        res = kernel_validation(d, int(sc.params["n_pairs"]), tuple(sc.params["ratio"]), sc.seed)
        rows.extend([d, r, t, e] for r, t, e in res)
        worst = max(e for *_, e in res)
        summary[f"d={d}"] = {"max_abs_error": worst, "ok": worst <= tol}
        if worst > tol:
            failures.append(f"d={d}: max |A_t 1 - 1| = {worst:.3g} > {tol:g}")
    return RunResult(sc, {"kernel": rows}, {"normalization": summary},
                     EXIT_INVARIANT if failures else EXIT_OK, failures)


# ----------------------------------------------------------------------------
# conditions
# ----------------------------------------------------------------------------

def condition_reports(E: DilationSet, d: int, p: float, q: float, q_critical: float, deltas,
                      n_max: int, max_len: int) -> list[ConditionReport]:
    reps = []
    if 1 <= p < d / (d - 1):
        reps.append(conditions.check_weak_type_subcritical(E, p, d, deltas))
        if p <= q:
            reps.append(conditions.check_strong_type_subcritical(E, p, q, d, n_max=n_max))
    if d >= 3:
        reps.append(conditions.check_critical_weak(E, d, deltas))
        if q_critical > d / (d - 1):
            reps.append(conditions.check_critical_strong_q(E, d, q_critical, deltas))
        reps.append(conditions.carleson_sup(E, d, max_len))
    return reps


def _run_conditions(sc: Scenario) -> RunResult:
    if not sc.sets():
        raise ScenarioError("conditions needs at least one set")
    d, p, q = int(sc.params["d"]), float(sc.params["p"]), float(sc.params["q"])
    deltas = parse_delta_grid(sc.grids["delta"])
    rows = [["set", "functional", "ladder", "rung", "value", "below_resolution"]]
    out = {}
    for desc in sc.sets():
        E = parse_set(desc)
        reps = condition_reports(E, d, p, q, float(sc.params["q_critical"]), deltas,
                                 int(sc.grids["n_max"]), int(sc.grids["max_len"]))
        for rep in reps:
            flags = rep.flags or [False] * len(rep.values)
            rows.extend([desc, rep.functional, rep.ladder_name, x, v, int(fl)]
                        for x, v, fl in zip(rep.ladder, rep.values, flags))
        out[desc] = {rep.functional: {"sup": rep.sup, "slope": rep.slope, "verdict": rep.verdict}
                     for rep in reps}
    return RunResult(sc, {"conditions": rows}, {"reports": out})


# ----------------------------------------------------------------------------
# equivalences
# ----------------------------------------------------------------------------

@dataclass
class EquivalenceStudy:
    """Paired functionals for one set along their truncation ladders.

    ``forms`` holds the covering, neighborhood and shell forms of the
    subcritical condition; ``lemma24`` and ``lemma25`` the (left, right)
    tent functionals. Factors are right / left at half and full range.
    """

    forms: dict[str, ConditionReport]
    form_ratios: dict[str, float]
    lemma24: tuple[ConditionReport, ConditionReport]
    lemma25: tuple[ConditionReport, ConditionReport]
    tent_norm_q_eq_p: float
    shell_integral_root: float

    @staticmethod
    def _factors(pair) -> tuple[float, float]:
        left, right = pair
        n = len(left.values)
        return tuple(conditions._ratio(right.values[i], left.values[i]) for i in (n // 2 - 1, n - 1))

    @property
    def factors24(self) -> tuple[float, float]:
        return self._factors(self.lemma24)

    @property
    def factors25(self) -> tuple[float, float]:
        return self._factors(self.lemma25)

    def verdicts(self) -> dict[str, list[bool]]:
        return {"forms": [r.bounded for r in self.forms.values()],
                "lemma24": [r.bounded for r in self.lemma24], "lemma25": [r.bounded for r in self.lemma25]}

    @property
    def agree(self) -> bool:
        return all(len(set(v)) == 1 for v in self.verdicts().values())


def equivalence_study(E: DilationSet, d: int = 3, p: float = 1.1, q: float = 2.0, p_tent: float = 1.5,
                      q_tent: float = 3.0, n_max: int = 24, n_range: int = 32) -> EquivalenceStudy:
    """Forms at ``(p, q)`` up to depth ``n_max``; tent functionals at ``(p_tent, q_tent)``, ``λ = d``,
    up to range ``n_range``. Form ratios are read at the last rung inside the set's resolution."""
    forms = conditions.form_reports(E, p, q, d, n_max)
    first = next(iter(forms.values()))
    keep = [i for i, fl in enumerate(first.flags) if not fl] or [len(first.values) - 1]
    at = keep[-1]
    ratios = conditions.form_ratios([r.values[at] for r in forms.values()])
    l24 = conditions.lemma24_reports(E, p_tent, q_tent, d, n_range)
    l25 = conditions.lemma25_reports(E, p_tent, d, n_range)
    cor = conditions.corollary26_sup(E, p_tent, p_tent, d, n_range).sup
    return EquivalenceStudy(forms, ratios, l24, l25, cor, (p_tent * l25[1].sup) ** (1.0 / p_tent))


def _run_equivalences(sc: Scenario) -> RunResult:
    if not sc.sets():
        raise ScenarioError("equivalences needs at least one set")
    kw = {k: sc.params[k] for k in ("p", "q", "p_tent", "q_tent")}
    d, nm, nr = int(sc.params["d"]), int(sc.grids["n_max"]), int(sc.grids["n_range"])
    max_form_ratio = float(sc.params["max_form_ratio"])
    stability = float(sc.params["stability"])
    rows = [["set", "entropy", "neighborhood", "shell", "l24_left", "l24_right", "l25_left", "l25_right",
             "tent_norm_q_eq_p", "agree"]]
    out, failures = {}, []
    for desc in sc.sets():
        E = parse_set(desc)
        try:
            st = equivalence_study(E, d, n_max=nm, n_range=nr, **{k: float(v) for k, v in kw.items()})
        except conditions.IdentityViolation as exc:
            failures.append(f"{desc}: {exc}")
            continue
        rows.append([desc, *(r.sup for r in st.forms.values()), st.lemma24[0].sup, st.lemma24[1].sup,
                     st.lemma25[0].sup, st.lemma25[1].sup, st.tent_norm_q_eq_p, int(st.agree)])
        out[desc] = {"verdicts": st.verdicts(), "form_ratios": st.form_ratios, "factors24": st.factors24,
                     "factors25": st.factors25}
        if not st.agree:
            failures.append(f"{desc}: verdicts disagree {st.verdicts()}")
        if any(not (1 / max_form_ratio <= r <= max_form_ratio) for r in st.form_ratios.values()):
            failures.append(f"{desc}: form ratios {st.form_ratios}")
        for name, (a, b) in (("lemma24", st.factors24), ("lemma25", st.factors25)):
            if not (a > 0 and abs(b - a) <= stability * a) and not (a == b == 1.0):
                failures.append(f"{desc}: {name} factor {a:.4g} -> {b:.4g} under range doubling")
        a, b = st.tent_norm_q_eq_p, st.shell_integral_root
        if abs(a - b) > 1e-12 * max(abs(b), 1e-300):
            failures.append(f"{desc}: tent norm {a!r} != shell root {b!r}")
    return RunResult(sc, {"equivalences": rows}, {"sets": out}, EXIT_INVARIANT if failures else EXIT_OK,
                     failures)


# ----------------------------------------------------------------------------
# domination and the lower bound
# ----------------------------------------------------------------------------

def domination_stability(f, E: DilationSet, d: int, p: float, r_grid, t_levels: int) -> dict[str, float]:
    """Sup ratio on the grid and after doubling both the r-grid and the t-resolution."""
    r_grid = np.asarray(r_grid, dtype=float)
    fine = np.geomspace(r_grid[0], r_grid[-1], 2 * len(r_grid))
    a = majorants.domination_check(f, E, d, p, r_grid, t_levels)
    b = majorants.domination_check(f, E, d, p, fine, t_levels + 1)
    sa, sb = a.sup_ratio, b.sup_ratio
    change = abs(sb - sa) / sa if sa > 0 else (0.0 if sb == 0 else math.inf)
    return {"sup_ratio": sa, "sup_ratio_refined": sb, "relative_change": change,
            "counterexamples": len(a.counterexamples) + len(b.counterexamples)}


def _run_domination(sc: Scenario) -> RunResult:
    if not sc.sets():
        raise ScenarioError("domination needs at least one set")
    d, p = int(sc.params["d"]), float(sc.params["p"])
    tol = float(sc.params["stability"])
    r_grid = parse_r_grid(sc.grids["r"])
    t_levels = int(sc.grids["t_levels"])
    cells = [(s, f) for s in sc.sets() for f in _as_list(sc.params["profiles"])]

    def one(cell):
        s, f = cell
        return domination_stability(parse_profile(f), parse_set(s), d, p, r_grid, t_levels)

    res = _map(one, cells)
    rows = [["set", "profile", "sup_ratio", "sup_ratio_refined", "relative_change"]]
    failures = []
    for (s, f), r in zip(cells, res):
        rows.append([s, f, r["sup_ratio"], r["sup_ratio_refined"], r["relative_change"]])
        if not math.isfinite(r["sup_ratio"]) or r["relative_change"] > tol or r["counterexamples"]:
            failures.append(f"{s} / {f}: {r}")
    return RunResult(sc, {"domination": rows}, {"cells": [{"set": s, "profile": f, **r} for (s, f), r in
                                                          zip(cells, res)]},
                     EXIT_INVARIANT if failures else EXIT_OK, failures)


def random_lower_bound_pairs(E: DilationSet, n_pairs: int, n_lo: int, n_hi: int, seed: int):
    """Random ``(k, n, profile)`` with ``D_n^k`` nonempty and the lower-bound integral positive."""
    rng = random.Random(seed)
    blocks = E.nonempty_blocks()
    out, tries = [], 0
    while len(out) < n_pairs and tries < 50 * n_pairs:
        tries += 1
        k = rng.choice(blocks)
        n = rng.randint(max(3, n_lo), n_hi)
        if dyadic.shell_measure(E, k, n) == 0:
            continue
        lo, hi = 2.0 ** (k - n + 2), 2.0 ** k
        a = lo * (hi / lo) ** rng.uniform(0.0, 0.8)
        b = a * 2.0 ** rng.uniform(0.3, 3.0)
        beta = rng.choice([0.0, -0.5, -1.0, -2.0, 1.0])
        out.append((k, n, power(beta, (a, b), rng.uniform(0.5, 2.0))))
    return out


def lower_bound_table(E: DilationSet, pairs, d: int, t_levels: int) -> list[tuple[int, int, str, float, float]]:
    """``(k, n, profile, ratio, ratio at doubled t-resolution)`` per pair."""
    def one(pair):
        k, n, f = pair
        a = spherical.lower_bound_ratio(f, E, k, n, d, t_levels=t_levels)
        b = spherical.lower_bound_ratio(f, E, k, n, d, t_levels=t_levels + 1)
        return k, n, repr(f.pieces[0]), a, b
    return _map(one, pairs)


def _run_lower_bound(sc: Scenario) -> RunResult:
    if not sc.sets():
        raise ScenarioError("lower-bound needs at least one set")
    d = int(sc.params["d"])
    n_lo, n_hi = (int(x) for x in sc.grids["n"])
    tol = float(sc.params["stability"])
    rows = [["set", "k", "n", "profile", "ratio", "ratio_refined"]]
    summary, failures = {}, []
    for desc in sc.sets():
        E = parse_set(desc)
        pairs = random_lower_bound_pairs(E, int(sc.params["n_pairs"]), n_lo, n_hi, sc.seed)
        tab = lower_bound_table(E, pairs, d, int(sc.grids["t_levels"]))
        rows.extend([desc, *r] for r in tab)
        a = min(r[3] for r in tab) if tab else math.nan
        b = min(r[4] for r in tab) if tab else math.nan
        change = abs(b - a) / a if a > 0 else math.inf
        summary[desc] = {"min_ratio": a, "min_ratio_refined": b, "relative_change": change, "pairs": len(tab)}
        if not (a > 0 and change <= tol):
            failures.append(f"{desc}: {summary[desc]}")
    return RunResult(sc, {"lower_bound": rows}, {"sets": summary}, EXIT_INVARIANT if failures else EXIT_OK,
                     failures)


# ----------------------------------------------------------------------------
# dispatch
# ----------------------------------------------------------------------------

_RUNNERS = {
    "kernel-validate": _run_kernel,
    "conditions": _run_conditions,
    "equivalences": _run_equivalences,
    "sharpness": _run_sharpness,
    "domination": _run_domination,
    "lower-bound": _run_lower_bound,
}


def run(config) -> RunResult:
    """Run a scenario (a :class:`Scenario`, a dict or a path to a JSON file)."""
    if isinstance(config, Scenario):
        sc = config
    elif isinstance(config, dict):
        sc = Scenario.from_dict(config)
    else:
        sc = Scenario.from_file(config)
    try:
        res = _RUNNERS[sc.kind](sc)
    except DescriptorError as exc:
        raise ScenarioError(str(exc)) from exc
    if sc.output:
        res.write(sc.output)
    return res
