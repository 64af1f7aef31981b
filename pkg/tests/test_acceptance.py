"""End-to-end acceptance gate.

Each test covers one acceptance criterion, prints exactly one visible
``ACCEPTANCE CRITERION n [PASS|FAIL]`` line, and then asserts.  The seven
criteria together certify:

1. exact rational closed forms of the order-zero torus constants,
2. the lattice-to-torus correspondence identities at near machine precision,
3. zero falsifications of the torus inequalities on randomized batches,
4. bracket containment of the box sharp-constant estimates,
5. reproduction of the exactly-known 1-D box values and the 1-D floor,
6. the d-power growth rates of the validated two-sided bounds,
7. the crude operator-norm caps on the lattice quadratic forms.
"""

from __future__ import annotations

import contextlib
import io
import json
import time
from fractions import Fraction

import numpy as np

from lattice_hardy import cli, constants, correspondence, estimator, lattice_ops


def _announce(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"ACCEPTANCE CRITERION {number} "
              f"[{'PASS' if ok else 'FAIL'}] {detail}", flush=True)


# -- 1: closed-form consistency -----------------------------------------------


def test_criterion_1_closed_forms(capsys):
    t0 = time.perf_counter()
    bad = []
    for d in range(3, 201):
        want = Fraction(d * (d - 2) ** 2, 3 * d * d + 8 * d + 4)
        if constants.weighted_hardy_constant_exact(0, d) != want:
            bad.append(("hardy", d))
    for d in range(8, 201):
        want = Fraction(d * d, 3 * d + 20)
        if constants.weighted_hardy_rellich_constant_exact(0, d) != want:
            bad.append(("hardy-rellich", d))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1.0
    _announce(capsys, 1, ok,
              f"closed forms exact over d = 3..200 and d = 8..200 "
              f"({elapsed:.2f}s)")
    assert not bad, bad[:5]
    assert elapsed < 1.0


# -- 2: correspondence identities ---------------------------------------------


def test_criterion_2_correspondence_identities(capsys):
    t0 = time.perf_counter()
    tol = 1e-10
    worst = 0.0
    bad = []
    checked = 0
    for d in (1, 2, 3, 4):
        for k in (0, 1, 2):
            for i in range(50):
                seed = 20000 + 1000 * d + 100 * k + i
                u = correspondence.random_lattice_function(
                    d, 2, seed, complex_valued=(i % 7 == 3))
                for kind_name in ("hardy", "rellich"):
                    ck = correspondence.CorrespondenceKind(kind_name, k)
                    for rep in (correspondence.verify_identity_lhs_rhs(u, ck),
                                correspondence.verify_identity_forms(u, ck)):
                        checked += 1
                        worst = max(worst, rep.rel_err)
                        if rep.rel_err >= tol:
                            bad.append((rep.name, kind_name, d, k, seed,
                                        rep.rel_err))
    elapsed = time.perf_counter() - t0
    ok = not bad and worst < tol and elapsed < 30.0
    _announce(capsys, 2, ok,
              f"{checked} identity checks, worst rel err {worst:.2e} "
              f"(tol {tol:.0e}, {elapsed:.1f}s)")
    assert not bad, bad[:5]
    assert worst < tol
    assert elapsed < 30.0


# -- 3: torus inequality verification -----------------------------------------

# (label, verify-torus argv tail).  The k = -1 weighted-gradient family
# needs d > 4, so its smallest admissible dimensions are 5 and 6; higher-
# dimensional batches use support radius 1 (the CLI default for d > 4) to
# keep coefficient counts workable.
_TORUS_BATCHES = (
    ("hardy k=0 d=3",
     ["--theorem", "hardy", "--dim", "3", "--k", "0", "--seed", "101"]),
    ("hardy k=0 d=4",
     ["--theorem", "hardy", "--dim", "4", "--k", "0", "--seed", "102"]),
    ("hardy k=-1 d=5",
     ["--theorem", "hardy", "--dim", "5", "--k", "-1", "--seed", "103"]),
    ("hardy k=-1 d=6",
     ["--theorem", "hardy", "--dim", "6", "--k", "-1", "--seed", "104"]),
    ("hardy-rellich k=0 d=8",
     ["--theorem", "hr", "--dim", "8", "--k", "0", "--seed", "105"]),
    ("rellich k=0 d=5",
     ["--theorem", "rellich", "--dim", "5", "--k", "0", "--seed", "106"]),
    ("rellich k=0 d=6",
     ["--theorem", "rellich", "--dim", "6", "--k", "0", "--seed", "107"]),
    ("two-param alpha=0 d=6",
     ["--theorem", "two-param", "--dim", "6", "--alpha", "0",
      "--seed", "108"]),
    ("higher m=1 laplacian d=5",
     ["--theorem", "higher", "--dim", "5", "--m", "1", "--k", "0",
      "--which", "laplacian", "--seed", "109"]),
    ("higher m=1 gradient d=7",
     ["--theorem", "higher", "--dim", "7", "--m", "1", "--k", "0",
      "--which", "gradient", "--seed", "110"]),
)


def test_criterion_3_torus_verification_batches(capsys):
    t0 = time.perf_counter()
    batch = 100
    bad = []
    total = 0
    for label, tail in _TORUS_BATCHES:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(["verify-torus", "--batch", str(batch), *tail])
        if code != 0:
            bad.append((label, "exit", code))
            continue
        payload = json.loads(buf.getvalue())
        total += len(payload["reports"])
        if payload["failures"] != 0 or not payload["all_hold"]:
            bad.append((label, "failures", payload["failures"]))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300.0
    _announce(capsys, 3, ok,
              f"{total} verifications over {len(_TORUS_BATCHES)} "
              f"configurations, zero falsifications ({elapsed:.0f}s)")
    assert not bad, bad
    assert total == batch * len(_TORUS_BATCHES)
    assert elapsed < 300.0


# -- 4: bracket containment ---------------------------------------------------


def test_criterion_4_bracket_containment(capsys):
    t0 = time.perf_counter()
    cases = ([(0, d, 4, "hardy") for d in (3, 4, 5, 6)]
             + [(1, d, 3, "rellich") for d in (5, 6)])
    bad = []
    for k, d, radius, kind in cases:
        res = estimator.estimate_sharp_constant(k, d, radius, kind, tol=1e-8)
        bracket = constants.discrete_bound_bracket(k, d, kind)
        if not bracket.contains(res.value, rel_tol=1e-8):
            bad.append((kind, k, d, radius, bracket.lower, res.value,
                        bracket.upper))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300.0
    _announce(capsys, 4, ok,
              f"{len(cases)} box estimates inside their validated brackets "
              f"({elapsed:.0f}s)")
    assert not bad, bad
    assert elapsed < 300.0


# -- 5: hand values and the 1-D floor -----------------------------------------


def test_criterion_5_hand_values_and_floor(capsys):
    t0 = time.perf_counter()
    problems = []
    hardy_1 = estimator.estimate_sharp_constant(0, 1, 1, "hardy",
                                                tol=1e-12).value
    if abs(hardy_1 - 2.0) > 1e-10:
        problems.append(("hardy(0,1,R=1)", hardy_1))
    rellich_1 = estimator.estimate_sharp_constant(1, 1, 1, "rellich",
                                                  tol=1e-12).value
    if abs(rellich_1 - 5.0) > 1e-10:
        problems.append(("rellich(1,1,R=1)", rellich_1))

    radii = [2 ** e for e in range(10)]          # 1, 2, 4, ..., 512
    floor = [estimator.estimate_sharp_constant(0, 1, r, "hardy").value
             for r in radii]
    for r, v in zip(radii, floor):
        if not v >= 0.25:
            problems.append((f"floor at R={r}", v))
    for (r0, v0), (r1, v1) in zip(zip(radii, floor), zip(radii[1:],
                                                         floor[1:])):
        if v1 > v0 * (1.0 + 1e-7):
            problems.append((f"monotonicity R={r0}->{r1}", v0, v1))
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 30.0
    _announce(capsys, 5, ok,
              f"1-D values {hardy_1:.12f} and {rellich_1:.12f}; floor "
              f"min {min(floor):.6f} over R <= 512, non-increasing "
              f"({elapsed:.1f}s)")
    assert not problems, problems
    assert elapsed < 30.0


# -- 6: asymptotic slopes ------------------------------------------------------


def _corrected_log_slope(ds, values) -> float:
    """Slope s of log f = s log d + b + c/d, absorbing the O(1/d)
    finite-dimension correction that a plain log-log fit over a finite
    dyadic window would fold into the slope."""
    d_arr = np.asarray(ds, dtype=float)
    design = np.column_stack(
        [np.log(d_arr), np.ones_like(d_arr), 1.0 / d_arr])
    coef, *_ = np.linalg.lstsq(design, np.log(np.asarray(values, float)),
                               rcond=None)
    return float(coef[0])


def test_criterion_6_asymptotic_slopes(capsys):
    t0 = time.perf_counter()
    ds = [2 ** e for e in range(6, 13)]
    bad = []
    slopes = []
    for kind in ("hardy", "rellich"):
        for k in (0, 1, 2):
            target = 2 * k + 1 if kind == "hardy" else 2 * k
            if kind == "rellich" and k == 0:
                # order-zero composition: the empty product, identically 1
                lowers = [constants.higher_order_constants(0, 0, d)[0]
                          for d in ds]
                uppers = [1.0] * len(ds)
            else:
                brackets = [constants.discrete_bound_bracket(k, d, kind)
                            for d in ds]
                lowers = [b.lower for b in brackets]
                uppers = [b.upper for b in brackets]
            s_low = _corrected_log_slope(ds, lowers)
            slopes.append(s_low)
            if abs(s_low - target) > 0.05:
                bad.append((kind, k, "lower", s_low, target))
            s_up, _, r2_up = estimator.fit_log_slope(list(zip(ds, uppers)))
            if abs(s_up - target) > 1e-9 or r2_up < 1.0 - 1e-9:
                bad.append((kind, k, "upper", s_up, target, r2_up))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5.0
    _announce(capsys, 6, ok,
              "lower-bound slopes "
              + ", ".join(f"{s:+.3f}" for s in slopes)
              + f" vs targets +1/+3/+5/+0/+2/+4 within 0.05; upper slopes "
                f"exact ({elapsed:.2f}s)")
    assert not bad, bad
    assert elapsed < 5.0


# -- 7: operator-norm caps ----------------------------------------------------


def test_criterion_7_operator_norm_caps(capsys):
    t0 = time.perf_counter()
    slack = 1e-12
    bad = []
    checked = 0
    for d in (2, 3, 4):
        for k in (1, 2):
            for i in range(200):
                seed = 70000 + 1000 * d + 500 * k + i
                u = correspondence.random_lattice_function(
                    d, 2, seed, zero_origin=False,
                    complex_valued=(i % 5 == 2))
                mass = lattice_ops.sum_sq(u)
                rel_cap = 4.0 ** (2 * k) * float(d) ** (2 * k) * mass
                dir_cap = (4.0 ** (2 * k + 1) * float(d) ** (2 * k + 1)
                           * mass)
                rel_val = lattice_ops.rellich_form(u, k)
                dir_val = lattice_ops.dirichlet_form(u, k)
                checked += 1
                if rel_val > rel_cap * (1.0 + slack):
                    bad.append(("rellich", d, k, seed, rel_val, rel_cap))
                if dir_val > dir_cap * (1.0 + slack):
                    bad.append(("dirichlet", d, k, seed, dir_val, dir_cap))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10.0
    _announce(capsys, 7, ok,
              f"{checked} random functions obey both operator-norm caps "
              f"({elapsed:.1f}s)")
    assert not bad, bad[:5]
    assert elapsed < 10.0
