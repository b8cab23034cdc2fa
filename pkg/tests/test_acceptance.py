"""Acceptance gate: every headline criterion at its stated tolerance.

Each criterion test prints one PASS/FAIL line.  The checks themselves live
in frontallab.verification (shared with the CLI `verify` command); a
criterion passes only if every one of its rows passes.
"""
from frontallab.verification import run_suite

_CACHE: dict[str, list] = {}


def rows_for(suite: str):
    if suite not in _CACHE:
        _CACHE[suite] = run_suite(suite)
    return _CACHE[suite]


def assert_criterion(number: int, title: str, rows):
    failed = [r for r in rows if not r.passed]
    status = "FAIL" if failed else "PASS"
    print(f"ACCEPTANCE {number:2d} [{status}] {title} ({len(rows)} checks)")
    for r in failed:
        print(f"    failed: {r.check_id}: computed {r.computed!r}, expected {r.expected!r} "
              f"(tol {r.tolerance!r}) {r.note}")
    assert not failed, f"criterion {number}: {[r.check_id for r in failed]}"
    assert rows, f"criterion {number} has no checks"


def pick(rows, *prefixes):
    out = [r for r in rows if any(r.check_id.startswith(p) for p in prefixes)]
    assert out, f"no rows matched {prefixes}"
    return out


def test_criterion_01_degree5_invariants():
    rows = pick(rows_for("paper-52"), "52.invariants", "52.kappa_t-d1", "52.kappa_nu-d1")
    assert_criterion(1, "degree-5 example invariants and their derivatives", rows)


def test_criterion_02_degree5_curvatures():
    rows = pick(rows_for("paper-52"), "52.kappa1", "52.kappa2", "52.gauss", "52.mean")
    assert_criterion(2, "degree-5 example principal curvatures, K, H", rows)


def test_criterion_03_focal_curvatures_two_ways():
    rows = pick(rows_for("paper-52"), "52.focal")
    assert_criterion(3, "focal curvatures: fundamental forms vs closed forms", rows)


def test_criterion_04_helicoid_formulas():
    rows = pick(rows_for("helicoid"), "helicoid.kappa", "helicoid.KC1.", "helicoid.HC1.",
                "helicoid.C1-position", "helicoid.C1-symmetry")
    assert_criterion(4, "helicoid principal/focal curvature formulas and fold symmetry", rows)


def test_criterion_05_congruence_factorization():
    rows = pick(rows_for("identities"), "identities.congruence")
    assert_criterion(5, "normal-congruence Jacobian factorization", rows)


def test_criterion_06_structural_identities():
    rows = pick(
        rows_for("identities"),
        "identities.frontal",
        "identities.weingarten",
        "identities.rodrigues",
        "identities.focal-orth",
        "identities.dCj-identity",
        "identities.lambda",
    )
    assert_criterion(6, "structural identities on 41x41 grids", rows)


def test_criterion_07_psi_classification():
    rows = rows_for("germs")
    assert_criterion(7, "front / k-non-front / pure-frontal classification of the germs", rows)


def test_criterion_08_transverse_curvature_derivative():
    rows = pick(rows_for("paper-52"), "52.dkappa1-dv")
    assert_criterion(8, "transverse principal-curvature derivative identity", rows)


def test_criterion_09_classifier_suite():
    rows = rows_for("classifiers")
    assert_criterion(9, "synthesized ruled-surface classifier suite", rows)


def test_criterion_10_focal_singular_traces():
    rows = rows_for("traces")
    assert_criterion(10, "focal singular traces and kind tags", rows)


def test_criterion_11_ccr_consistency():
    rows = rows_for("ccr")
    assert_criterion(11, "cuspidal-cross-cap inequality vs direct slope test", rows)


def test_criterion_12_pure_propagation_helicoid():
    rows = pick(rows_for("helicoid"), "helicoid.pure-propagation", "helicoid.SC1-axis",
                "helicoid.psiC1", "helicoid.KC1-bounded", "helicoid.HC1-bounded")
    assert_criterion(12, "pure-frontal propagation to the helicoid focal sheet", rows)


def test_criterion_13_jet_engine():
    rows = rows_for("jets")
    assert_criterion(13, "jet partials vs finite differences; deflate/mul round trip", rows)
