"""Acceptance criteria, one test each, exact arithmetic throughout.

Every test records ``(ok, detail)`` in ``RESULTS``; conftest prints one
PASS/FAIL line per criterion at the end of the run.
"""

import json
import time

from diagcat.bialgebra import comultiplication
from diagcat.cli import main
from diagcat.diagram import validate_graded
from diagcat.endo import base_change, coaction, coalgebra, end_algebra, restrict
from diagcat.fixtures import (corpus, fixture_document, localization_corpus, odd_sign_fixtures, random_fixture,
                              sqrt2_torsor_fixture)
from diagcat.linalg import Matrix
from diagcat.localization import localization_report
from diagcat.periods import period_space, psi
from diagcat.rigidity import (is_isometry, isometry_inverse, monoid_is_group, sample_isometries,
                              sample_monoids)
from diagcat.simplicial import (SimplicialComplex, boundary, cech_total_complex,
                                cohomology_dims, filtration_complex, random_complex,
                                random_cover, simplex)
from diagcat.torsor import (check_torsor, gl_group, gr_group, group_at, groups_up_to,
                            matrix_torsor_check, torsor_of_group)

from strategies import oracle_hom_dim

RESULTS: dict = {}

RANDOM_SEEDS = range(200)


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    assert ok, detail


def graded_fixtures():
    out = [(name, D, P, T, D.sorted_vertices(), D.sorted_vertices())
           for name, D, P, T, _ in localization_corpus()]
    for name, D, P, T, _ in odd_sign_fixtures():
        small = [v for v in D.sorted_vertices() if len(v) <= 1]
        out.append((f"odd:{name}", D, P, T, small, D.sorted_vertices()))
    return out


def test_criterion_1_psi_isomorphism():
    start = time.perf_counter()
    cases = [(f"seed {s}", *random_fixture(s)) for s in RANDOM_SEEDS]
    cases += [(name, D, T1, T2) for name, D, T1, T2 in corpus()]
    bad = []
    for name, D, T1, T2 in cases:
        F = D.sorted_vertices()
        r = psi(D, T1, T2, F)
        if not (r.bijective and r.dim_period == r.dim_hom):
            bad.append(name)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record("1", ok, f"{len(cases)} fixtures, {len(bad)} failures, {elapsed:.1f} s"
           + (f", first failure {bad[0]}" if bad else ""))


def test_criterion_1_oracle_cross_check():
    # the Hom side once more, against an unrelated sympy nullity; sympy is
    # slow on the larger systems, so a sample of the suite is enough here
    seeds = RANDOM_SEEDS[:40]
    bad = []
    for s in seeds:
        D, T1, T2 = random_fixture(s)
        F = D.sorted_vertices()
        if psi(D, T1, T2, F).dim_hom != oracle_hom_dim(D, T1, T2, F):
            bad.append(s)
    record("1b", not bad, f"dim Hom matches sympy on {len(seeds) - len(bad)}"
           f"/{len(seeds)} random fixtures")


def test_criterion_2_end_coalgebra_laws():
    bad = []
    checked = 0
    for s in RANDOM_SEEDS:
        D, T, _ = random_fixture(s)
        F = D.sorted_vertices()
        E = end_algebra(D, T, F)
        elems = E.elements()
        ok = E.satisfies_constraints(D, T, T) and E.is_associative()
        basis = [tuple(int(k == i) for k in range(E.dim)) for i in range(E.dim)]
        for i in range(E.dim):
            for j in range(E.dim):
                # structure constants reproduce the composite exactly
                prod = {p: elems[i][p] @ elems[j][p] for p in F}
                ok = ok and E.combine(E.multiply(basis[i], basis[j])) == prod
        ok = ok and E.combine(E.unit) == {p: Matrix.identity(T.dims[p]) for p in F}
        C = coalgebra(D, T, F)
        ok = ok and C.is_coassociative() and C.is_counital()
        for p in F:
            rho = coaction(D, T, F, p)
            ok = ok and rho.is_counital(C) and rho.is_coassociative(C)
        # restriction along a chain of subsets
        F1, F2 = F[: len(F) // 2], F[: (len(F) + 1) // 2 + 1]
        for small, big in ((F1, F2), (F2, F), (F1, F)):
            R = restrict(D, T, small, big)
            ok = ok and R.is_algebra_morphism() and R.is_coalgebra_morphism()
        checked += 1
        if not ok:
            bad.append(s)
    record("2", not bad, f"{checked} random fixtures, {len(bad)} failures")


def test_criterion_3_bialgebra_laws():
    bad, odd_nontrivial = [], []
    fixtures = graded_fixtures()
    for name, D, P, T, F, F_big in fixtures:
        r = comultiplication(D, P, T, F, F_big)
        ok = (r.well_defined and r.cocommutative and r.coassociative is True
              and r.counital is True)
        if not ok:
            bad.append(name)
        if name.startswith("odd:") and any(D.grade(v) for v in F):
            # the sign matters: dropping it breaks the graded axioms
            odd_nontrivial.append(name)
            if validate_graded(D, P, _unsigned(D, P, T), total=False).ok:
                bad.append(f"{name} (sign-free variant still valid)")
    ok = not bad and len(odd_nontrivial) >= 3
    record("3", ok, f"{len(fixtures)} graded fixtures, {len(odd_nontrivial)} with odd vertices, "
           f"failures: {bad or 'none'}")


def _unsigned(D, P, T):
    mats = dict(T.mats)
    for (f, g), e in P.alpha.items():
        if D.grade(f) and D.grade(g):
            mats[e] = -mats[e]
    return type(T)(dict(T.dims), mats, dict(T.tau))


def test_criterion_4_base_change():
    fields = {"Q(i)": (1, 0, 1), "Q(sqrt2)": (-2, 0, 1)}
    cases = [(f"seed {s}", *random_fixture(s, max_vertices=4, max_edges=6, max_dim=3)[:2])
             for s in range(60)]
    cases += [(name, D, T1) for name, D, T1, _ in corpus()]
    bad = []
    for name, D, T in cases:
        for label, m in fields.items():
            r = base_change(D, T, D.sorted_vertices(), m)
            if not r.ok:
                bad.append(f"{name} over {label}")
    record("4", not bad and len(cases) >= 50,
           f"{len(cases)} fixtures over {len(fields)} fields, failures: {bad or 'none'}")


def test_criterion_5_torsor_suite():
    groups = groups_up_to(8)
    bad = []
    for G in groups:
        X = torsor_of_group(G)
        if not check_torsor(X).ok:
            bad.append(f"{G.name}: torsor axioms")
        for e in range(X.n):
            Ge, r = group_at(X, e)
            if not r.ok or (e == G.identity and Ge.mul != G.mul):
                bad.append(f"{G.name}: group at {e}")
        for side in (gl_group, gr_group):
            Q, r = side(X)
            if not (r.ok and Q.group.order == X.n and r.details["simply_transitive"]
                    and r.details["i_e_iso"]):
                bad.append(f"{G.name}: {side.__name__}")
    matrix_cases = [("sqrt2-torsor", *sqrt2_torsor_fixture())]
    matrix_cases += [(name, D, T1, T2, None) for name, D, T1, T2 in corpus()]
    inconclusive, triples = [], []
    for name, D, T1, T2, m in matrix_cases:
        r = matrix_torsor_check(D, T1, T2, D.sorted_vertices(), samples=100, minpoly=m)
        if r.details.get("inconclusive"):
            # Hom has no invertible point to sample from
            inconclusive.append(name)
            continue
        triples.append(r.details["triples"])
        if not r.ok or r.details["triples"] < 100:
            bad.append(f"matrix torsor {name}")
    record("5", not bad, f"{len(groups)} groups of order <= 8, {len(triples)} matrix fixtures "
           f"with >= {min(triples)} triples each, no invertible point: "
           f"{', '.join(inconclusive) or 'none'}, failures: {bad or 'none'}")


def test_criterion_6_rigidity():
    grams = {"I2": Matrix.identity(2), "J": Matrix([[0, 1], [-1, 0]]),
             "diag(1,2)": Matrix([[1, 0], [0, 2]])}
    bad, samples = [], 0
    I = Matrix.identity(2)
    for name, A in grams.items():
        for X in sample_isometries(A, count=50, seed=7):
            samples += 1
            Y = isometry_inverse(A, X)
            if not (is_isometry(A, X) and Y @ X == I and X @ Y == I):
                bad.append(name)
    monoids = sample_monoids(24)
    for M in monoids:
        r = monoid_is_group(M)
        if not r.ok:
            bad.append(f"monoid of order {len(M)}")
    record("6", not bad and samples >= 150,
           f"{samples} sampled isometries, {len(monoids)} monoids, failures: {bad or 'none'}")


def test_criterion_7_simplicial_mirror(capsys):
    SC = SimplicialComplex
    named = {"interval": simplex(1), "boundary-triangle": boundary(2), "triangle": simplex(2),
             "boundary-tetrahedron": boundary(3)}
    cases = list(named.items()) + [(f"random {s}", random_complex(s)) for s in range(25)]
    bad = []
    for name, X in cases:
        want = cohomology_dims(X)
        F = filtration_complex(X)
        C = cech_total_complex(X, random_cover(X, 3, parts=2))
        if any(F.betti(i) != want.get(i, 0) for i in F.degrees):
            bad.append(f"{name} filtration")
        if any(C.betti(i) != want.get(i, 0) for i in C.degrees):
            bad.append(f"{name} cech")
    arcs = [SC.from_maximal([(0, 1), (1, 2)]), SC.from_maximal([(0, 2)])]
    h1 = cech_total_complex(boundary(2), arcs).betti(1)
    # the same check through the command line
    import tempfile
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(fixture_document("complex-circle"), fh)
    start = time.perf_counter()
    code = main(["cech", fh.name])
    elapsed = time.perf_counter() - start
    out = json.loads(capsys.readouterr().out)
    cli_ok = code == 0 and out["cech"]["1"] == 1 and elapsed < 10
    ok = not bad and h1 == 1 and cli_ok
    record("7", ok, f"{len(cases)} complexes, circle H^1 rank {h1}, cli exit {code} in "
           f"{elapsed:.2f} s, failures: {bad or 'none'}")


def test_criterion_8_localization():
    bad, runs = [], 0
    for name, D, P, T, f0 in localization_corpus():
        for N in (1, 2, 3):
            runs += 1
            r = localization_report(D, P, T, f0, N)
            if not (r.ok and r.details["twists_invertible"] and all(r.details["transitions"])):
                bad.append(f"{name} N={N}")
    record("8", not bad, f"{runs} localized fixtures, failures: {bad or 'none'}")


def test_criterion_9_equal_representations():
    cases = [(name, D, T1) for name, D, T1, _ in corpus()]
    cases += [(name, D, T2) for name, D, _, T2 in corpus()]
    cases += [(f"seed {s}", *random_fixture(s)[:2]) for s in RANDOM_SEEDS]
    cases += [(name, D, T) for name, D, P, T, *_ in graded_fixtures()]
    bad = []
    for name, D, T in cases:
        F = D.sorted_vertices()
        if name.startswith("odd:"):
            F = [v for v in F if len(v) <= 1]
        if period_space(D, T, T, F).dim != coalgebra(D, T, F).dim:
            bad.append(name)
    record("9", not bad, f"{len(cases)} fixtures, failures: {bad or 'none'}")
