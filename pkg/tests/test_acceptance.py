"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import random
import subprocess
import sys
from fractions import Fraction as F

import pytest

from nwvoa import brst, cli, hvir, nw, relaxed, screening
from nwvoa.exact import fstr, frac_part
from nwvoa.lattice import mode_apply, nw_frame, weight_of
from nwvoa.reports import render_report

RESULTS = {}


def report(n, ok, detail):
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


@pytest.fixture(scope="module")
def fr():
    return nw_frame()


@pytest.fixture(scope="module")
def reals(fr):
    return nw.inverse_qhr_map(fr), nw.wakimoto_map(fr)


def test_c01_embedding_certificate(reals):
    reps = [nw.verify_embedding(r, mode_bound=2) for r in reals]
    checks = sum(r.checks for r in reps)
    report(1, all(r.passed for r in reps), f"embedding checks at mode bound 2: {checks}, "
           f"failures {sum(len(r.failures) for r in reps)}")


def test_c02_sugawara_image(fr, reals):
    got, want = nw.sugawara_state(reals[0]), nw.expected_sugawara(fr)
    report(2, got == want, f"Sugawara image has {len(got.terms)} terms, difference {len((got - want).terms)}")


def test_c03_image_coincidence(reals):
    a, b = reals
    same = [g for g in nw.GENERATORS if a[g] == b[g]]
    report(3, len(same) == 4, f"identical images for {','.join(same)}")


def test_c04_qhr_structure(fr, reals):
    cx = brst.brst_complex(fr, reals[1])
    sq = brst.d0_square_check(4, 1, (-2, 2), cx)
    st = brst.reduced_structure_check(3, cx)
    eu = brst.euler_profile(4)
    ok = all(r["pass"] for r in sq) and all(c["pass"] for c in st) and all(r["pass"] for r in eu)
    report(4, ok, f"d0^2 on {sum(r['states'] for r in sq)} states; "
           f"{sum(c['pass'] for c in st)}/{len(st)} structure checks; "
           f"Euler {[r['euler'] for r in eu]} vs {[r['character'] for r in eu]}")


def test_c05_kernel_is_pbw(fr):
    rows = screening.kernel_profile_matches(3, 3, fr)
    g = fr.vec({"alpha": -1, "beta": -1})
    img = screening.screen(fr.exp(g))
    sign = fr.cocycle(fr.vec("alpha"), fr.intern(g))
    wit = bool(img) and img == fr.exp(fr.vec({"beta": -1})) * sign
    report(5, all(r["pass"] for r in rows) and wit,
           f"{sum(r['pass'] for r in rows)}/{len(rows)} bidegrees match PBW; "
           f"S e^(-alpha-beta) = {sign} e^(-beta)")


def test_c06_hvir_singular_vectors():
    bad = []
    for x in range(-3, 5):
        if x == 1:
            continue
        p = abs(x - 1)
        for y in (F(0), F(2, 3)):
            if any(hvir.singular_space(x, y, d) for d in range(1, p)) or len(hvir.singular_space(x, y, p)) != 1:
                bad.append(f"singular x={x}")
            if hvir.hvir_character(x, y, 6).q_coeffs() != hvir.verma_quotient_dims(x, y, 6):
                bad.append(f"character x={x}")
    for x, y in ((1, 5), (F(1, 2), 1)):
        if hvir.hvir_character(x, y, 6).q_coeffs() != hvir.verma_quotient_dims(x, y, 6):
            bad.append(f"character x={x}")
    report(6, not bad, "; ".join(bad) or "singular degrees |x-1| and characters to q^6 agree")


def _sample(rng):
    return F(rng.randint(-9, 9), rng.randint(1, 6))


def test_c07_relaxed_actions(fr, reals):
    real = reals[0]
    rng = random.Random(20240617)
    bad, n = [], 0
    for _ in range(20):
        x, y, lam = _sample(rng), _sample(rng), _sample(rng)
        if x == 1:
            y = F(0)
        for i in range(-3, 4):
            z = relaxed.top_vector(fr, x, y, lam, i)
            for g in nw.GENERATORS:
                shift, c = relaxed.top_action(g, i, x, y, lam)
                n += 1
                if relaxed.realized_top_action(real, g, x, y, lam, i) != relaxed.top_vector(fr, x, y, lam, i + shift) * c:
                    bad.append(f"{g}(0) Z_{i} at {fstr(x)},{fstr(y)},{fstr(lam)}")
            fe = mode_apply(real["F"], 0, mode_apply(real["E"], 0, z))
            ij = mode_apply(real["I"], 0, mode_apply(real["J"], 0, z))
            if fe + ij != z * relaxed.omega_eigen(x, y):
                bad.append(f"Omega at {fstr(x)},{fstr(y)}")
            for r in range(-2, 4):
                zr = relaxed.top_vector(fr, x, y, lam, i, r)
                if weight_of(zr) != relaxed.sug_weight(x, y, r, lam + i):
                    bad.append(f"weight r={r}")
    graded = [r for r in range(-2, 4) if relaxed.bounded_below(r)]
    ok = not bad and graded == [1]
    report(7, ok, "; ".join(bad[:3]) or f"{n} top actions, weights and Casimir agree; graded only for r in {graded}")


def test_c08_classification_boundary(fr, reals):
    real = reals[0]
    bad = []
    xs = [F(x) for x in range(-2, 5)] + [F(1, 2)]
    for x in xs:
        for y in (F(0), F(1), F(2), F(1, 2), F(-3, 4)):
            for lam in (F(0), F(1, 3), F(1, 2), F(-1), F(5, 4)):
                want = (x != 1 and frac_part(lam - y / (x - 1)) == 0) or (x == 1 and y == 0)
                if relaxed.is_reducible(x, y, lam) != want:
                    bad.append(f"classify {fstr(x)},{fstr(y)},{fstr(lam)}")
                if x == 1:
                    continue
                j = y / (x - 1) - lam
                for i in range(-4, 5):
                    zero = not relaxed.realized_top_action(real, "F", x, y, lam, i)
                    if zero != (j == i):
                        bad.append(f"F(0)Z_{i} at {fstr(x)},{fstr(y)},{fstr(lam)}")
    report(8, not bad, "; ".join(bad[:3]) or f"{len(xs) * 25} parameter points agree with the reducibility rule")


def test_c09_infinite_chain(fr, reals):
    real = reals[0]
    bad, n = [], 0
    for lam in (F(0), F(1, 3)):
        spec = relaxed.RelaxedModuleSpec(1, 0, 1, lam)
        for i in range(-2, 3):
            zi, zn = spec.top(fr, i), spec.top(fr, i + 1)
            if not relaxed.contains(real, spec, zi, zn, 0) or relaxed.contains(real, spec, zn, zi, 0):
                bad.append(f"top inclusion at i={i}")
            js = [spec.layer_charge(i), spec.layer_charge(i + 1)]
            big = relaxed.submodule_growth(real, spec, zi, 2, js)
            small = relaxed.submodule_growth(real, spec, zn, 2, js)
            n += len(big)
            if any(small[k] > big[k] for k in big) or small == big:
                bad.append(f"growth at i={i}")
    report(9, not bad, "; ".join(bad) or f"<Z_i> strictly contains <Z_i+1> for i=-2..2 ({n} bidegrees)")


LOG_SPECS = [screening.LogModuleSpec(3, 2, 0), screening.LogModuleSpec(0, 0, 0), screening.LogModuleSpec(-1, 2, 0),
             screening.LogModuleSpec(1, 0, 0), screening.LogModuleSpec(1, 0, F(1, 3))]


def test_c10_logarithmic_rank_two(fr, reals):
    out, ok = [], True
    for spec in LOG_SPECS:
        cert = screening.rank_two_certificate(spec, depth=3, window=1, frame=fr, real=reals[0])
        nil_somewhere = any(r["nilpotent_rank"] > 0 for r in cert.records)
        sq_zero = all(c["pass"] for r in cert.records for c in r["checks"] if c["name"] == "nilpotent_square_zero")
        good = cert.passed and nil_somewhere and sq_zero and cert.nu not in (None, 0)
        ok = ok and good
        tag = ",".join(spec.as_dict()[k] for k in ("x", "y", "lambda"))
        out.append(f"({tag}) nu={fstr(cert.nu) if cert.nu is not None else '?'}")
    report(10, ok, "rank two, non-split: " + " ".join(out))


def _full_report():
    recs = cli.run_records(cli.SuiteConfig("all"))
    return render_report(recs)


def test_c11_determinism():
    first = _full_report()
    res = subprocess.run([sys.executable, "-m", "nwvoa", "--suite", "all"], capture_output=True, text=True)
    second = res.stdout
    ok = res.returncode == 0 and second == first + "\n"
    report(11, ok, f"full-suite report {len(first)} bytes, identical across an in-process and a fresh run")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
