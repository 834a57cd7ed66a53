"""Claim verification, crossover search, table and audit tests.

Oracles: mpmath (dps 30) roots of the mid-constant envelope equations
for the crossover anchors, a sympy prime sieve for the theta step value
at the 1427 boundary, and frozen first-run scan outputs for the
regression pins.  Derivation one-liners sit next to each literal.
"""

import json
import math
from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pntverify.bounds import CLAIM_IDS, registry
from pntverify.config import IntegrityError, PntError, RangeGuardError
from pntverify.verify import (
    ClaimSpec,
    _ceil_to_resolution,
    audit_constants,
    crossover_to_dict,
    find_crossover,
    make_claim,
    report_json,
    report_to_dict,
    verify,
    verify_piecewise_table,
    violations_csv,
)

# mpmath dps 30 roots of dev(x) = rhs(x) with the constants pinned to
# their enclosure midpoints (findroot on the step left-limit branch)
MOI_ROOTS = {
    "moi_1": 43.0980329078002,
    "moi_2": 24.3026242111442,
    "moi_3": 23.7072238244018,
    "moi_4": 24.1869575135688,
}

# frozen first-run outputs of find_crossover with the default window;
# the boundary sits within one constant-enclosure width of the root
CROSSOVERS = {
    "moi_1": (43.09793661422522, 43.1),
    "moi_2": (24.302398679459117, 24.4),
    "moi_3": (23.707224823131106, 23.8),
    "moi_4": (24.1869582948253, 24.2),
}

# frozen threshold-run facts on [threshold, 1e6]
THRESHOLD_RUNS = {
    "moi_1": (157428, 0.9998319191003772, 43.1),
    "moi_2": (157444, 0.984550756073436, 24.4),
    "moi_3": (157444, 0.9860467239404818, 23.8),
    "moi_4": (157444, 0.9977428753177725, 24.2),
}

# sum of log p over primes <= 1423 (sympy primerange, 225 primes)
THETA_1423 = 1352.8227495279002

# right endpoint, printed ceiling, frozen certified sup (midpoint)
TABLE_SUPS = [
    (63.468, 0.75553, 0.7555235051696813),
    (151.106, 0.87158, 0.8715777621681733),
    (394.532, 0.94032, 0.9403127766070576),
    (1100.338, 0.97471, 0.9747030530948010),
    (3220.622, 0.99000, 0.9899931481311733),
    (9768.054, 0.99625, 0.9962415309032066),
    (30369.582, 0.99865, 0.9986410495734100),
    (30456.276, 0.99865, 0.9986445423962084),
]

AUDIT_NAMES = (
    "zero_sum_block_negative",
    "consolidation_ratio_under_ceiling",
    "threshold_sign_change",
    "threshold_sign_change_theta",
    "loglog_coefficient_turning_point",
    "collapsed_quadratic_coefficients",
    "truncation_height_floor",
    "loglog_1e19_truncation",
    "midrange_constant_consolidation",
    "tail_companion_factor",
    "sufficient_condition_margin",
    "upper_branch_dominates_printed_chain",
    "midrange_branch_dominates_chain",
)

REPORT_KEYS = ("claim", "bound_id", "verified_range", "points_checked",
               "violations", "inconclusive", "last_failure", "crossover",
               "margins", "wall_time_ms")


class TestClaimConstruction:
    def test_every_claim_id_builds(self):
        reg = registry()
        for cid in CLAIM_IDS:
            lo = reg[cid].validity_from
            claim = make_claim(cid, lo, lo * 2.0)
            assert claim.bound_id == cid
            assert claim.claimed_from == lo
            assert claim.check_range == (lo, lo * 2.0)

    def test_lhs_kind_strings(self):
        kinds = {
            "thm1": "|psi - x|",
            "thm2_psi": "|psi - x|",
            "schoenfeld_a": "|psi - x|",
            "schoenfeld_b": "|psi - x|",
            "schoenfeld_c": "|psi - x|",
            "buthe_psi": "|psi - x|",
            "thm2_theta": "|theta - x|",
            "buthe_theta": "|theta - x|",
            "moi_1": "|sum log p/p - log x - E|",
            "moi_2": "|sum 1/p - loglog x - B|",
            "moi_3": "|e^C log x prod - 1|",
            "moi_4": "|e^-C/(log x prod) - 1|",
        }
        for cid, want in kinds.items():
            assert make_claim(cid, 1e3, 1e4).lhs_kind == want

    def test_unknown_and_auxiliary_ids_rejected(self):
        with pytest.raises(PntError):
            make_claim("nope", 2.0, 10.0)
        with pytest.raises(PntError):
            make_claim("rcal", 1e19, 1e20)
        with pytest.raises(PntError):
            make_claim("nt_envelope", 10.0, 100.0)

    def test_empty_range_rejected_at_verify(self):
        with pytest.raises(PntError):
            verify(make_claim("thm2_psi", 10.0, 5.0))

    def test_validity_ceiling_enforced(self):
        with pytest.raises(RangeGuardError):
            verify(make_claim("buthe_psi", 100.0, 2e19))

    def test_desk_ceiling_enforced(self):
        with pytest.raises(RangeGuardError):
            verify(make_claim("thm2_psi", 2.0, 1e11))
        with pytest.raises(RangeGuardError):
            find_crossover("buthe_psi", search_range=(100.0, 2e19))

    def test_kind_mismatch_rejected(self):
        bad = ClaimSpec(bound_id="thm2_psi", lhs_kind="|theta - x|",
                        claimed_from=101.0, check_range=(101.0, 1e4))
        with pytest.raises(PntError):
            verify(bad)


class TestCeilToResolution:
    def test_moi_boundaries_round_to_printed_grid(self):
        assert _ceil_to_resolution(24.302398679459117, 0.1, True) == 24.4
        assert _ceil_to_resolution(43.09793661422522, 0.1, True) == 43.1
        assert _ceil_to_resolution(23.707224823131106, 0.1, True) == 23.8

    def test_on_grid_bumps_only_when_attained(self):
        assert _ceil_to_resolution(24.4, 0.1, True) == 24.5
        assert _ceil_to_resolution(24.4, 0.1, False) == 24.4

    def test_near_integer_boundary(self):
        assert _ceil_to_resolution(100.99999999999999, 0.5, True) == 101.0
        assert _ceil_to_resolution(1426.9999999999998, 0.1, False) == 1427.0

    @given(st.floats(min_value=2.0, max_value=1e6),
           st.sampled_from([0.001, 0.01, 0.05, 0.1, 0.5, 1.0]))
    @settings(max_examples=300, deadline=None)
    def test_result_is_grid_ceiling(self, lf, res):
        out = _ceil_to_resolution(lf, res, False)
        assert out >= lf
        assert out - lf <= res * (1.0 + 1e-9)
        # the product has at most 14 significant decimal digits, so the
        # shortest float repr round-trips and the remainder test is exact
        assert Decimal(repr(out)) % Decimal(str(res)) == 0


class TestCrossover:
    @pytest.mark.parametrize("cid", sorted(CROSSOVERS))
    def test_mertens_thresholds(self, cid):
        lf, thr = CROSSOVERS[cid]
        c = find_crossover(cid)
        assert c.bound_id == cid
        assert not c.no_failure
        # the boundary root moves at the last-ulp level between kernel
        # backends; the rounded threshold is exact either way
        assert c.last_failure_x == pytest.approx(lf, abs=1e-9)
        assert c.rounded_threshold == thr
        assert c.resolution == 0.1
        # independent anchor: the boundary lives within one constant
        # enclosure width of the mid-constant root
        assert abs(lf - MOI_ROOTS[cid]) < 5e-4

    def test_small_window_reproduces_thresholds(self):
        c2 = find_crossover("moi_2", search_range=(2.0, 1e3))
        c3 = find_crossover("moi_3", search_range=(2.0, 1e3))
        assert c2.rounded_threshold == 24.4
        assert c3.rounded_threshold == 23.8
        # the bracket walk differs between windows at the 1e-9 level
        assert c2.last_failure_x == pytest.approx(CROSSOVERS["moi_2"][0],
                                                  abs=1e-6)
        assert c3.last_failure_x == pytest.approx(CROSSOVERS["moi_3"][0],
                                                  abs=1e-6)

    def test_refinement_never_raises_threshold(self):
        lf = CROSSOVERS["moi_2"][0]
        prev = math.inf
        for res in (0.8, 0.4, 0.2, 0.1, 0.05, 0.025):
            thr = find_crossover("moi_2", resolution=res).rounded_threshold
            assert lf <= thr <= lf + res
            assert thr <= prev
            prev = thr

    def test_finest_grid_value(self):
        c = find_crossover("moi_2", resolution=0.001)
        assert c.rounded_threshold == 24.303

    def test_no_failure_marker(self):
        c = find_crossover("buthe_psi", search_range=(100.0, 200.0))
        assert c.no_failure
        assert c.last_failure_x is None
        assert c.rounded_threshold is None
        assert c.margin == 0.2638112794547679

    def test_resolution_floor(self):
        with pytest.raises(PntError):
            find_crossover("moi_2", resolution=5e-4)


class TestVerifyReports:
    def test_mertens_claims_certify_from_printed_thresholds(self):
        for cid, (pts, maxr, thr) in THRESHOLD_RUNS.items():
            r = verify(make_claim(cid, thr, 1e6))
            assert r.certified, cid
            assert not r.violations and not r.inconclusive
            assert r.last_failure is None
            assert r.points_checked == pts
            assert r.max_ratio == pytest.approx(maxr, rel=1e-12)
            assert r.argmax_x == thr
            assert r.verified_range == (thr, 1e6)

    def test_psi_deviation_from_two(self):
        r = verify(make_claim("thm2_psi", 2.0, 1e6))
        assert r.certified
        assert len(r.violations) == 37
        assert r.last_failure == 100.99999999999999
        assert r.points_checked == 157468
        assert r.verified_range == (101.0, 1e6)
        xs = [v.x for v in r.violations]
        assert xs == sorted(xs)
        assert all(x < 101.0 for x in xs)
        # every recorded violation is separated at interval precision
        assert all(v.lhs.lo > v.rhs.hi for v in r.violations)

    def test_theta_deviation_from_two(self):
        r = verify(make_claim("thm2_theta", 2.0, 1e5))
        assert r.certified
        assert len(r.violations) == 363
        assert r.last_failure == 2656.9999999999995
        assert r.verified_range == (2657.0, 1e5)
        assert all(v.x < 2657.0 for v in r.violations)

    def test_certified_needs_threshold_inside_window(self):
        inside = verify(make_claim("thm2_psi", 2.0, 150.0))
        assert inside.certified
        assert len(inside.violations) == 37
        assert inside.last_failure == 100.99999999999999
        assert inside.verified_range == (101.0, 150.0)
        # a window that ends below the claimed threshold certifies nothing
        below = verify(make_claim("thm2_psi", 2.0, 50.0))
        assert not below.certified
        assert below.last_failure == 46.99999999999999
        assert below.verified_range == (47.0, 50.0)

    def test_thread_count_does_not_change_report(self):
        a = report_json(verify(make_claim("thm2_theta", 2.0, 1e4), threads=1))
        b = report_json(verify(make_claim("thm2_theta", 2.0, 1e4), threads=2))
        assert a == b

    def test_verified_range_stays_inside_request(self):
        for cid, lo, hi in (("moi_4", 24.2, 1e4), ("buthe_psi", 11.0, 1e4),
                            ("thm2_theta", 2.0, 1e4)):
            r = verify(make_claim(cid, lo, hi))
            assert lo <= r.verified_range[0] <= r.verified_range[1] <= hi


class TestThetaEnvelopeThreshold:
    """The 1.95 sqrt(x) theta envelope fails between 1426.47 and 1427.

    theta is flat on [1423, 1427) while x - theta(x) climbs to 74.177 at
    the left limit of 1427, above 1.95 sqrt(1427) = 73.663.  The printed
    1423 threshold only holds at integer arguments; the verifier reports
    the real-variable boundary at 1427.
    """

    def test_violation_in_first_gap(self):
        r = verify(make_claim("buthe_theta", 1423.0, 1e6))
        assert not r.certified
        assert len(r.violations) == 1
        v = r.violations[0]
        assert v.x == np.nextafter(1427.0, -math.inf)
        dev = v.x - THETA_1423
        assert v.lhs.lo <= dev <= v.lhs.hi
        assert v.rhs.lo <= 1.95 * math.sqrt(v.x) <= v.rhs.hi
        assert v.lhs.lo > v.rhs.hi
        assert r.last_failure == v.x
        assert r.verified_range == (1427.0, 1e6)
        assert r.max_ratio == pytest.approx(1.0069876247521519, rel=1e-12)
        assert r.argmax_x == 1427.0

    def test_exact_crossing_location(self):
        # root of x - theta(1423) = 1.95 sqrt(x): violations start at
        # 1426.4716 and the whole window lies inside one prime gap
        root = 1426.4716354237424
        assert root - 1.95 * math.sqrt(root) == pytest.approx(THETA_1423,
                                                              abs=1e-9)
        before = 1426.47
        assert before - THETA_1423 < 1.95 * math.sqrt(before)

    def test_envelope_certifies_from_1427(self):
        r = verify(make_claim("buthe_theta", 1427.0, 1e6))
        assert r.certified
        assert not r.violations and not r.inconclusive
        assert r.max_ratio == pytest.approx(0.9934464315826228, rel=1e-12)
        assert r.argmax_x == 19373.0

    def test_crossover_lands_on_sound_threshold(self):
        c = find_crossover("buthe_theta", search_range=(1300.0, 2000.0))
        assert not c.no_failure
        assert c.last_failure_x == np.nextafter(1427.0, -math.inf)
        assert c.rounded_threshold == 1427.0


class TestPiecewiseTable:
    def test_all_rows_pass(self):
        rows = verify_piecewise_table()
        assert len(rows) == len(TABLE_SUPS)
        for row, (right, printed, sup) in zip(rows, TABLE_SUPS):
            assert row.L_hi == right
            assert row.claimed == printed
            assert row.monotone and row.passes
            assert row.computed_sup.hi <= printed
            assert row.computed_sup.lo == pytest.approx(sup, rel=1e-12)
            # the printed ceilings carry three to five decimals; every
            # certified sup sits within one grid cell below its ceiling
            assert row.computed_sup.hi > printed - 1e-3

    def test_rows_chain_and_theta_flag(self):
        rows = verify_piecewise_table()
        for a, b in zip(rows, rows[1:]):
            assert a.L_hi == b.L_lo
        assert [row.theta for row in rows] == [False] * 7 + [True]

    def test_grid_density_does_not_flip_verdicts(self):
        coarse = verify_piecewise_table(grid=64)
        fine = verify_piecewise_table(grid=512)
        assert [r.passes for r in coarse] == [r.passes for r in fine]


class TestAuditConstants:
    def test_names_and_verdicts(self):
        checks = audit_constants()
        assert tuple(c.name for c in checks) == AUDIT_NAMES
        for c in checks:
            assert c.passed, c.name
            assert isinstance(c.margin, float)
            assert c.margin > 0.0, c.name
            assert c.detail

    def test_spot_margins(self):
        by_name = {c.name: c.margin for c in audit_constants()}
        assert by_name["zero_sum_block_negative"] == pytest.approx(
            16.24495359207318, rel=1e-9)
        assert by_name["consolidation_ratio_under_ceiling"] == pytest.approx(
            7.73380926855749e-4, rel=1e-6)
        assert by_name["sufficient_condition_margin"] == pytest.approx(
            6.030076185444112, rel=1e-9)
        assert by_name["truncation_height_floor"] == pytest.approx(
            0.1385202407836914, rel=1e-6)
        # the two sign-change margins are interval widths at the bracket
        # integers, tiny but certainly positive
        assert 0.0 < by_name["threshold_sign_change"] < 1e-8
        assert 0.0 < by_name["threshold_sign_change_theta"] < 1e-8


class TestSerialization:
    def test_report_schema(self):
        r = verify(make_claim("thm2_psi", 2.0, 1e4))
        d = report_to_dict(r)
        assert tuple(d) == REPORT_KEYS
        assert tuple(d["claim"]) == ("bound_id", "lhs_kind", "claimed_from",
                                     "check_range", "certified")
        assert tuple(d["margins"]) == ("max_ratio", "argmax_x")
        assert d["wall_time_ms"] is None
        for entry in d["violations"]:
            assert tuple(entry) == ("x", "lhs_lo", "lhs_hi", "rhs_lo",
                                    "rhs_hi")
        assert d["bound_id"] == "thm2_psi"
        assert d["claim"]["certified"] is True

    def test_json_byte_determinism(self):
        a = report_json(verify(make_claim("moi_2", 24.4, 1e4)))
        b = report_json(verify(make_claim("moi_2", 24.4, 1e4)))
        assert a == b
        assert a.endswith("\n")
        parsed = json.loads(a)
        assert parsed["claim"]["certified"] is True

    def test_timings_flag(self):
        r = verify(make_claim("moi_3", 23.8, 1e4))
        d = report_to_dict(r, include_timings=True)
        assert isinstance(d["wall_time_ms"], float)
        assert d["wall_time_ms"] >= 0.0

    def test_crossover_embedding(self):
        c = find_crossover("moi_4")
        d = report_to_dict(verify(make_claim("moi_4", 24.2, 1e4)),
                           crossover=c)
        assert tuple(d["crossover"]) == ("bound_id", "last_failure_x",
                                         "rounded_threshold", "resolution",
                                         "no_failure", "margin")
        assert d["crossover"] == crossover_to_dict(c)
        assert d["crossover"]["rounded_threshold"] == 24.2

    def test_csv_round_trip(self):
        r = verify(make_claim("thm2_psi", 2.0, 1e6))
        text = violations_csv(r)
        lines = text.splitlines()
        assert lines[0] == "bound_id,x,lhs_lo,lhs_hi,rhs_lo,rhs_hi"
        assert len(lines) == 1 + len(r.violations)
        first = lines[1].split(",")
        assert first[0] == "thm2_psi"
        assert float(first[1]) == r.violations[0].x
        assert float(first[2]) == r.violations[0].lhs.lo
        # repr floats round-trip exactly
        for line, v in zip(lines[1:], r.violations):
            assert line.split(",")[1] == repr(v.x)

    def test_csv_empty_when_certified_clean(self):
        r = verify(make_claim("buthe_psi", 11.0, 1e4))
        assert violations_csv(r) == "bound_id,x,lhs_lo,lhs_hi,rhs_lo,rhs_hi\n"
