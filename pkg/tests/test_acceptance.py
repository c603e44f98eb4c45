"""Acceptance suite: one test per criterion, each recording PASS/FAIL in ``ACCEPTANCE``.

Run directly (``python3 tests/test_acceptance.py``) for a plain PASS/FAIL listing.
"""
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE, random_dyadic_set, random_point_set  # noqa: E402

from radmax import conditions, dyadic, experiments, lorentz, majorants, profiles, spherical  # noqa: E402
from radmax.conditions import Tent  # noqa: E402
from radmax.lorentz import LorentzParams, SimpleFunction  # noqa: E402
from radmax.parsing import parse_profile, parse_r_grid, parse_set  # noqa: E402
from radmax.quadrature import QuadratureSpec  # noqa: E402


def record(num: int, ok: bool, detail: str):
    ACCEPTANCE[num] = (bool(ok), detail)
    assert ok, f"criterion {num}: {detail}"


# ----------------------------------------------------------------------------
# 1-2: kernel
# ----------------------------------------------------------------------------

def test_criterion_01_kernel_normalization():
    t0 = time.perf_counter()
    worst = 0.0
    for d in (2, 3):
        rows = experiments.kernel_validation(d, 100, (0.1, 10.0), seed=1, quad=QuadratureSpec(tol=1e-10))
        assert len(rows) == 100
        worst = max(worst, max(e for *_, e in rows))
    dt = time.perf_counter() - t0
    record(1, worst <= 1e-8 and dt < 10, f"max |A_t 1 - 1| = {worst:.2e}, {dt:.2f} s")


def test_criterion_02_closed_form_d3():
    rng = np.random.default_rng(2)
    worst = 0.0
    for m in range(4):
        f = profiles.power(float(m), (0.5, 3.0))
        for _ in range(50):
            r = float(np.exp(rng.uniform(np.log(0.2), np.log(5.0))))
            t = r * float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
            exact = spherical.spherical_mean_closed_form_d3(f, r, t)
            num = spherical.spherical_mean(f, r, t, 3, QuadratureSpec(tol=1e-13))
            if exact == 0:
                worst = max(worst, abs(num))
            else:
                worst = max(worst, abs(num - exact) / abs(exact))
    record(2, worst <= 1e-10, f"max relative error {worst:.2e} over 200 (m, r, t)")


# ----------------------------------------------------------------------------
# 3-6: exact dyadic and Lorentz identities
# ----------------------------------------------------------------------------

def _random_simple(rng: random.Random) -> SimpleFunction:
    n = rng.randint(1, 8)
    levels = sorted((math.exp(rng.uniform(-4, 4)) for _ in range(n)), reverse=True)
    levels = [a for i, a in enumerate(levels) if i == 0 or a < levels[i - 1]]
    masses = [math.exp(rng.uniform(-5, 5)) for _ in levels]
    return SimpleFunction(tuple(levels), tuple(masses))


def test_criterion_03_lorentz_forms():
    rng = random.Random(3)
    worst_eq, worst_dy, count = 0.0, 1.0, 0
    for _ in range(500):
        f = _random_simple(rng)
        for p in (1.1, 1.5, 2.0, 3.0):
            for q in (1.0, p, 2 * p, 7.0):
                par = LorentzParams(p, q, lam=3.0)
                a = lorentz.lorentz_norm(f, par, "rearranged")
                b = lorentz.lorentz_norm(f, par, "distribution")
                c = lorentz.lorentz_norm(f, par, "dyadic")
                worst_eq = max(worst_eq, abs(a - b) / a)
                worst_dy = max(worst_dy, c / a, a / c)
                count += 1
    ok = worst_eq <= 1e-12 and worst_dy <= 2.0
    record(3, ok, f"{count} norms: max rel diff {worst_eq:.1e}, dyadic factor {worst_dy:.3f}")


def _dyadic_interval(rng: random.Random, lo_k: int, hi_k: int, j: int) -> tuple[Fraction, Fraction]:
    """Random ``I`` with endpoints on ``2^{j-2} Z``, inside ``[2^lo_k, 2^hi_k]`` and ``|I| >= 2^j``."""
    h = dyadic.pow2(j - 2)
    lo_i = math.ceil(dyadic.pow2(lo_k) / h)
    hi_i = math.floor(dyadic.pow2(hi_k) / h)
    a = rng.randint(lo_i, hi_i - 4)
    b = rng.randint(a + 4, hi_i)
    return a * h, b * h


def test_criterion_04_binary_cover_sandwiches():
    rng = random.Random(4)
    violations, checks = [], 0
    for trial in range(1000):
        E = random_dyadic_set(rng)
        j = rng.randint(-7, 1)
        N = dyadic.entropy_number(E, dyadic.pow2(j)).value
        Nb = dyadic.binary_entropy(E, j).value
        checks += 1
        if not N <= Nb <= 3 * N:
            violations.append((trial, "cover", N, Nb))
        I = _dyadic_interval(rng, -2, 3, j)
        inside = dyadic.restrict(E, I)
        if not inside:
            continue
        NI = dyadic.entropy_number(inside, dyadic.pow2(j)).value
        W = dyadic.neighborhood_in(E, I, dyadic.pow2(j + 1))
        checks += 1
        if not dyadic.pow2(j - 2) * NI <= W <= dyadic.pow2(j + 3) * NI:
            violations.append((trial, "measure", NI, W))
    record(4, not violations, f"{checks} exact checks on 1000 sets, {len(violations)} violations")


def test_criterion_05_shell_telescoping():
    rng = random.Random(5)
    worst, bad = 0.0, 0
    for _ in range(200):
        k, M = rng.randint(-3, 3), rng.randint(4, 10)
        E = random_point_set(rng, k, M)
        n = rng.randint(0, M)
        P = len(E.points)
        top = M + max(0, math.ceil(math.log2(P)))
        total = sum(dyadic.union_length(dyadic.shell_components(E, k, m)) for m in range(n, top + 1))
        gap = abs(total - dyadic.neighborhood_measure(E, k, n))
        tol = 2 * dyadic.pow2(k - M)
        worst = max(worst, float(gap / tol))
        bad += gap > tol
    record(5, bad == 0, f"200 point sets, worst gap {worst:.3f} of the tolerance 2*2^(k-M)")


def test_criterion_06_beta_integral_identity():
    rng = random.Random(6)
    worst, tents = 0.0, 0
    for _ in range(100):
        E = random_dyadic_set(rng, blocks=(-3, 3))
        p = rng.choice([1.1, 1.25, 1.5, 2.0, 3.0])
        lam = rng.choice([2.0, 3.0, 2.5])
        for _ in range(5):
            L = rng.randint(1, 8)
            tent = Tent(rng.randint(-3 - L + 1, 3), L)
            a, b = conditions.tent_identity_sides(E, tent, p, lam)
            tents += 1
            if a == b == 0:
                continue
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    record(6, worst <= 1e-12, f"{tents} tents on 100 sets: max relative gap {worst:.1e}")


# ----------------------------------------------------------------------------
# 7: entropy exponent
# ----------------------------------------------------------------------------

def test_criterion_07_kappa_estimator():
    target = math.log(2) / math.log(3)
    cantor = parse_set("dilated:base={cantor:depth=12},k=-2..2")
    k_c = dyadic.kappa_estimate(cantor, conditions.dyadic_deltas(2, 19)).kappa_hat
    lac = parse_set("lacunary:ratio=1/2,k=-20..0")
    k_l = dyadic.kappa_estimate(lac, conditions.dyadic_deltas(2, 30)).kappa_hat
    full = parse_set("dilated:base={explicit:[1;2]},k=-2..2")
    k_f = dyadic.kappa_estimate(full, conditions.dyadic_deltas(2, 19)).kappa_hat
    ok = abs(k_c - target) <= 0.05 and k_l <= 0.05 and k_f >= 0.95
    record(7, ok, f"cantor {k_c:.4f} (target {target:.4f}), lacunary {k_l:.4f}, intervals {k_f:.4f}")


# ----------------------------------------------------------------------------
# 8-9: equivalent functionals
# ----------------------------------------------------------------------------

NULL_FAMILY = {
    "empty": "empty",
    "point": "explicit:1",
    "lac2": "lacunary:ratio=1/2,k=-12..12",
    "lac4": "lacunary:ratio=1/4,k=-6..6",
    "conv": "dilated:base={convergent:i=1..20},k=-4..4",
    "cantor5": "dilated:base={cantor:depth=8,remove=3/5},k=-4..4",
    "cantor3": "dilated:base={cantor:depth=10},k=-4..4",
    "cantor4": "dilated:base={cantor:depth=10,remove=1/2},k=-4..4",
    "rand": "dilated:base={random:n=12,M=24,seed=3},k=-4..4",
    "cantorblk": "cantor:depth=12,block=[1;16]",
    "lacc": "lacunary:ratio=1/2,k=-8..-1 | dilated:base={cantor:depth=11},k=0..3",
    "union": "lacunary:ratio=1/2,k=-8..8 | convergent:i=1..20,block=3",
}

CRITICAL_FAMILY = {
    **{k: v for k, v in NULL_FAMILY.items() if k not in ("cantor4", "lacc")},
    "intervals": "dilated:base={explicit:[1;2]},k=-4..4",
    "mixed": "lacunary:ratio=1/2,k=-8..-1 | dilated:base={explicit:[1;3/2]},k=0..3",
}


def _stable(a: float, b: float, tol: float = 0.2) -> bool:
    return a == b == 1.0 or (a > 0 and abs(b - a) <= tol * a)


def test_criterion_08_equivalences():
    assert len(NULL_FAMILY) == 12
    problems, worst_form, factors = [], 1.0, []
    for name, desc in NULL_FAMILY.items():
        st = experiments.equivalence_study(parse_set(desc))
        if not st.agree:
            problems.append(f"{name}: verdicts {st.verdicts()}")
        for r in st.form_ratios.values():
            worst_form = max(worst_form, r, 1 / r if r > 0 else math.inf)
        for label, (a, b) in (("tent-lp", st.factors24), ("tent-nbhd", st.factors25)):
            factors.append(b)
            if not _stable(a, b):
                problems.append(f"{name}: factor {label} {a:.4g} -> {b:.4g}")
    ok = not problems and worst_form <= 32
    detail = f"12 sets, max form ratio {worst_form:.2f}, max tent factor {max(factors):.3f}"
    record(8, ok, detail + ("" if ok else f"; {problems}"))


def test_criterion_09_critical_consistency():
    d, pd = 3, 1.5
    deltas = conditions.dyadic_deltas(2, 22)
    disagree, worst, tents = [], 0.0, 0
    for name, desc in CRITICAL_FAMILY.items():
        E = parse_set(desc)
        cw = conditions.check_critical_weak(E, d, deltas)
        co = conditions.corollary26_sup(E, pd, math.inf, d, max_len=32)
        if cw.bounded != co.bounded:
            disagree.append(f"{name}: weak {cw.verdict}, tent {co.verdict}")
        w = conditions.block_window(E)
        if w is None:
            continue
        for tent in conditions.interval_lattice(w, 6):
            a = conditions.corollary26_norm(E, pd, pd, d, tent)
            b = conditions.tent_identity_sides(E, tent, pd, d)[1] ** (1 / pd)
            tents += 1
            if a or b:
                worst = max(worst, abs(a - b) / b)
    ok = not disagree and worst <= 1e-12
    record(9, ok, f"{len(CRITICAL_FAMILY)} sets agree: {not disagree}; q=p match over {tents} tents, "
                  f"max rel gap {worst:.1e}" + ("" if not disagree else f"; {disagree}"))


# ----------------------------------------------------------------------------
# 10-12: sharpness, lower bound, domination
# ----------------------------------------------------------------------------

def test_criterion_10_sharpness_split():
    t0 = time.perf_counter()
    family = experiments._set_family("dilated:base={cantor:depth={depth}},k=-3..3")
    ladder = list(range(3, 13))
    lo = experiments.sharpness_scan(family, 3, 1.1, None, None, ladder)
    hi = experiments.sharpness_scan(family, 3, 1.5, None, None, ladder)
    dt = time.perf_counter() - t0
    s = (lo.condition.slope, lo.witness.slope, hi.condition.slope, hi.witness.slope)
    ok = (min(s[0], s[1]) >= 0.2 and s[0] * s[1] > 0 and max(s[2], s[3]) <= 0.05 and dt < 300)
    record(10, ok, f"p=1.1 slopes {s[0]:.3f}/{s[1]:.3f}; p=1.5 slopes {s[2]:.3f}/{s[3]:.3f}; {dt:.1f} s")


LOWER_BOUND_SETS = ["dilated:base={explicit:[1;5/4]},k=-2..2", "dilated:base={cantor:depth=2},k=-2..2",
                    "dilated:base={cantor:depth=6},k=-2..2", "lacunary:ratio=1/2,k=-4..4"]


def test_criterion_11_lower_bound():
    rows = []
    for i, desc in enumerate(LOWER_BOUND_SETS):
        E = parse_set(desc)
        pairs = experiments.random_lower_bound_pairs(E, 50, 3, 8, seed=11 + i)
        rows += experiments.lower_bound_table(E, pairs, 3, t_levels=4)
    a, b = min(r[3] for r in rows), min(r[4] for r in rows)
    change = abs(b - a) / a if a > 0 else math.inf
    ok = len(rows) == 200 and a > 0 and change <= 0.10
    record(11, ok, f"{len(rows)} pairs: min ratio {a:.4f} -> {b:.4f} (change {change:.1%})")


DOMINATION_SETS = ["lacunary:ratio=1/2,k=-4..4", "dilated:base={cantor:depth=4},k=-3..3",
                   "dilated:base={explicit:[1;5/4]},k=-3..3"]
DOMINATION_PROFILES = ["indicator:on=[1;2]", "ball:R=1", "power:beta=-1,on=[1/2;4]"]


@pytest.mark.parametrize("d,p", [(3, 1.2), (2, 1.5)])
def test_criterion_12_domination(d, p):
    grid = parse_r_grid("geo:0.25..8:256")
    assert len(grid) == 256
    worst, bad = 0.0, []
    for s in DOMINATION_SETS:
        for f in DOMINATION_PROFILES:
            r = experiments.domination_stability(parse_profile(f), parse_set(s), d, p, grid, 5)
            if not (math.isfinite(r["sup_ratio"]) and r["counterexamples"] == 0 and r["relative_change"] <= 0.10):
                bad.append((s, f, r))
            worst = max(worst, r["relative_change"])
    prev = ACCEPTANCE.get(12, (True, ""))
    detail = f"d={d}: 9 pairs, max change {worst:.1%}"
    ok = not bad and prev[0]
    ACCEPTANCE[12] = (ok, f"{prev[1]}; {detail}".lstrip("; "))
    assert not bad, bad


# ----------------------------------------------------------------------------
# 13: monotonicity
# ----------------------------------------------------------------------------

def _nested_pair(rng: random.Random, M: int = 5):
    """``F ⊂ E`` with every endpoint on the ``2^{k-M}`` lattice of its block."""
    E = random_dyadic_set(rng, blocks=(-1, 1), M=M, max_comps=4)
    sub = []
    for a, b in E.components:
        if rng.random() < 0.4:
            continue
        if a == b:
            sub.append((a, b))
            continue
        h = dyadic.pow2(dyadic.floor_log2(a) - M)
        n = int((b - a) / h)
        i = rng.randint(0, n)
        j = rng.randint(i, n)
        sub.append((a + i * h, a + j * h))
    F = dyadic.from_components(dyadic._merge(sub), resolution=M)
    assert F.issubset(E)
    return F, E


def _mono_violations(rng: random.Random, n_pairs: int) -> tuple[int, int]:
    M = 5
    deltas = conditions.dyadic_deltas(2, M)
    rs = [0.3, 0.7, 1.1, 1.9, 2.6, 3.7]
    f_small = profiles.indicator(0.5, 2.0)
    f_big = profiles.step([0.25, 0.5, 2.0, 3.0], [0.5, 1.5, 0.7])
    checks, bad = 0, 0

    def check(lo, hi):
        nonlocal checks, bad
        checks += 1
        if not lo <= hi * (1 + 1e-12) + 1e-300:
            bad += 1

    for _ in range(n_pairs):
        F, E = _nested_pair(rng, M)
        for r in rs:
            for d in (2, 3):
                check(spherical.maximal_function(f_small, F, r, d, t_levels=M),
                      spherical.maximal_function(f_small, E, r, d, t_levels=M))
                check(spherical.maximal_function(f_small, E, r, d, t_levels=M),
                      spherical.maximal_function(f_big, E, r, d, t_levels=M))
            g_s, g_b = majorants.g_transform(f_small, 1.2, 3), majorants.g_transform(f_big, 1.2, 3)
            check(majorants.op_frakM(g_s, F, r, 1.2, 3, t_levels=M), majorants.op_frakM(g_s, E, r, 1.2, 3, t_levels=M))
            check(majorants.op_frakM(g_s, E, r, 1.2, 3, t_levels=M), majorants.op_frakM(g_b, E, r, 1.2, 3, t_levels=M))
            for v in ("plain", "tilde", "zero"):
                check(majorants.op_2d_frakM(v, g_s, F, r, 1.5, t_levels=M),
                      majorants.op_2d_frakM(v, g_s, E, r, 1.5, t_levels=M))
            for i in (1, 2, 3, 4):
                check(majorants.op_2d_singular(i, f_small, F, r, t_levels=M),
                      majorants.op_2d_singular(i, f_small, E, r, t_levels=M))
                check(majorants.op_2d_singular(i, f_small, E, r, t_levels=M),
                      majorants.op_2d_singular(i, f_big, E, r, t_levels=M))
            check(majorants.op_R1_near(f_small, r, 3), majorants.op_R1_near(f_big, r, 3))
            check(majorants.op_R2_far(f_small, r), majorants.op_R2_far(f_big, r))
            check(majorants.op_R1_near(f_small, r, 3, restrict_to_E=F, t_levels=M),
                  majorants.op_R1_near(f_small, r, 3, restrict_to_E=E, t_levels=M))
            check(majorants.op_R2_far(f_small, r, restrict_to_E=F, t_levels=M),
                  majorants.op_R2_far(f_small, r, restrict_to_E=E, t_levels=M))
            for ell in (0, 2):
                check(majorants.op_frakM_ell(g_s, E, r, ell, 1.2, 3), majorants.op_frakM_ell(g_b, E, r, ell, 1.2, 3))
            check(majorants.op_frakN(g_s, E, r, 1.2, 3.0), majorants.op_frakN(g_b, E, r, 1.2, 3.0))
        for dl in deltas:
            check(conditions.weak_subcritical_value(F, 1.2, 3, dl), conditions.weak_subcritical_value(E, 1.2, 3, dl))
            check(conditions.critical_weak_value(F, 3, dl), conditions.critical_weak_value(E, 3, dl))
            check(conditions.critical_window_value(F, 3, 2.0, dl)[0], conditions.critical_window_value(E, 3, 2.0, dl)[0])
            check(dyadic.kappa_value(F, dl), dyadic.kappa_value(E, dl))
        check(conditions.strong_subcritical_value(F, 1.2, 2.0, 3, (-4, 1), 6)[0],
              conditions.strong_subcritical_value(E, 1.2, 2.0, 3, (-4, 1), 6)[0])
        for L in (1, 2, 3):
            for a in range(-1 - L + 1, 2):
                check(conditions.carleson_functional(F, 3, Tent(a, L)), conditions.carleson_functional(E, 3, Tent(a, L)))
        fF = conditions.lemma23_forms(F, 1.2, 2.0, 3, (-4, 1), 6)
        fE = conditions.lemma23_forms(E, 1.2, 2.0, 3, (-4, 1), 6)
        check(fF.entropy, fE.entropy)
        check(fF.neighborhood, fE.neighborhood)
        check(conditions.lemma24_left(F, 1.5, 3.0, 3, 4), conditions.lemma24_left(E, 1.5, 3.0, 3, 4))
        check(conditions.lemma25_compare(F, 1.5, 3, 4)[0], conditions.lemma25_compare(E, 1.5, 3, 4)[0])
    return checks, bad


def test_criterion_13_monotonicity():
    checks, bad = _mono_violations(random.Random(13), 40)
    record(13, bad == 0, f"{checks} comparisons on 40 nested pairs, {bad} violations")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for fn in tests:
        try:
            if fn is test_criterion_12_domination:
                for d, p in ((3, 1.2), (2, 1.5)):
                    fn(d, p)
            else:
                fn()
        except AssertionError:
            pass
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    sys.exit(0 if all(ok for ok, _ in ACCEPTANCE.values()) and len(ACCEPTANCE) == 13 else 1)
