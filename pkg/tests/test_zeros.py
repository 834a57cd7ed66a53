"""Zero-table ingestion and truncated zero sums vs independent oracles.

Frozen reference values below come from tools/oracle_zeros.py (mpmath
summation over the bundled table at 30 to 40 digits, plus closed-form
integrals), computed without touching package code.
"""

import bisect
import cmath
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pntverify import bounds, zeros
from pntverify.chebyshev import psi1_at
from pntverify.config import (
    IntegrityError,
    PntError,
    RangeGuardError,
    ZeroFileError,
)

FIRST_ZERO = 14.13472514173
LAST_ZERO = 74920.82749899421
TABLE_COUNT = 100000

# 2 * sum of 1/gamma over the full table; strictly below the published
# full-height value 16.2106480369 because the table stops at 1e5 zeros.
S1_BOTH_FULL = 13.98769605028125379862
OMEGA1 = 16.2106480369

S2_PARTIAL_1000 = 0.00188720736247630319
S2_TAIL = 4.76872702813420952e-5
SKEWES_RHS_1000 = 0.00219880679663828322
S2_PARTIAL_14 = 0.0461658586348080898
SKEWES_RHS_14 = 0.0600027170158808223

XRHO_X4_H100 = 0.04285680215156884061875907

PSI1_EXPL_X1000P5 = 498354.9694633695906836
PSI1_TAIL_X1000P5 = 1.50913503913572005

NT_GRID_POINTS = 111924
NT_MAX_RATIO = 0.64227194108327
LEHMAN_INV_LHS = 6.923100275186
LEHMAN_INV_RHS = 7.713150576851


def make_file(tmp_path, text, name="z.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestIngest:
    def test_bundled_table(self, zero_table):
        t = zero_table
        assert t.count == TABLE_COUNT
        assert t.gammas.shape == (TABLE_COUNT,)
        assert t.max_height == LAST_ZERO
        assert t.input_precision == 1e-8  # declared in the file header
        assert 14.13 < t.gammas[0] < 14.14
        assert t.gammas[0] == FIRST_ZERO
        assert np.all(np.diff(t.gammas) > 0)

    def test_two_line_file(self, tmp_path):
        p = make_file(tmp_path, "14.134725142\n21.022039639\n")
        t = zeros.ingest(p)
        assert t.count == 2
        assert t.max_height == 21.022039639
        assert t.input_precision == 5e-10

    def test_header_precision_and_override(self, tmp_path):
        p = make_file(tmp_path, "# precision 2e-9\n14.1\n15.2\n")
        assert zeros.ingest(p).input_precision == 2e-9
        assert zeros.ingest(p, input_precision=1e-7).input_precision == 1e-7

    def test_comments_and_blanks_skipped(self, tmp_path):
        p = make_file(tmp_path, "# a comment\n\n14.1\n# mid comment\n15.0\n\n")
        assert zeros.ingest(p).count == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ZeroFileError, match="not found"):
            zeros.ingest(tmp_path / "absent.txt")

    def test_empty_file(self, tmp_path):
        with pytest.raises(ZeroFileError, match="no ordinates"):
            zeros.ingest(make_file(tmp_path, ""))

    def test_comments_only_file(self, tmp_path):
        with pytest.raises(ZeroFileError, match="no ordinates"):
            zeros.ingest(make_file(tmp_path, "# precision 1e-9\n# nothing else\n"))

    def test_descending_pair(self, tmp_path):
        p = make_file(tmp_path, "15.0\n14.0\n")
        with pytest.raises(IntegrityError, match=r":2:.*not ascending"):
            zeros.ingest(p)

    def test_repeated_ordinate(self, tmp_path):
        with pytest.raises(IntegrityError, match="not ascending"):
            zeros.ingest(make_file(tmp_path, "14.1\n14.1\n"))

    def test_non_positive_ordinate(self, tmp_path):
        with pytest.raises(IntegrityError, match=r":1:.*non-positive"):
            zeros.ingest(make_file(tmp_path, "-3.0\n14.1\n"))

    def test_malformed_line_reports_number(self, tmp_path):
        p = make_file(tmp_path, "14.1\nfourteen\n")
        with pytest.raises(ZeroFileError, match=r":2:.*malformed"):
            zeros.ingest(p)

    def test_nan_line_rejected(self, tmp_path):
        with pytest.raises(ZeroFileError, match="non-finite"):
            zeros.ingest(make_file(tmp_path, "14.1\nnan\n"))

    def test_bad_precision_header(self, tmp_path):
        with pytest.raises(ZeroFileError, match="precision"):
            zeros.ingest(make_file(tmp_path, "# precision lots\n14.1\n"))
        with pytest.raises(ZeroFileError, match="positive"):
            zeros.ingest(make_file(tmp_path, "# precision -1e-9\n14.1\n"))


class TestTableType:
    def test_from_gammas_basic(self):
        t = zeros.ZeroTable.from_gammas([14.2, 15.0, 99.5])
        assert t.count == 3
        assert t.max_height == 99.5

    def test_rejects_empty(self):
        with pytest.raises(IntegrityError):
            zeros.ZeroTable.from_gammas([])

    def test_rejects_2d(self):
        with pytest.raises(IntegrityError):
            zeros.ZeroTable.from_gammas([[1.0, 2.0]])

    def test_rejects_nonfinite(self):
        with pytest.raises(IntegrityError):
            zeros.ZeroTable.from_gammas([14.0, math.inf])

    def test_rejects_descending(self):
        with pytest.raises(IntegrityError):
            zeros.ZeroTable.from_gammas([15.0, 14.0])

    def test_rejects_nonpositive(self):
        with pytest.raises(IntegrityError):
            zeros.ZeroTable.from_gammas([0.0, 14.0])

    def test_rejects_bad_precision(self):
        with pytest.raises(PntError):
            zeros.ZeroTable.from_gammas([14.0], input_precision=0.0)

    def test_gammas_read_only(self):
        t = zeros.ZeroTable.from_gammas([14.2, 15.0])
        with pytest.raises(ValueError):
            t.gammas[0] = 1.0


class TestCache:
    def test_roundtrip_bit_exact(self, tmp_path):
        t = zeros.ZeroTable.from_gammas([14.134725142, 21.022039639, 25.010857580])
        p = tmp_path / "z.ztbl"
        zeros.write_cache(t, p)
        back = zeros.read_cache(p, input_precision=3e-9)
        assert np.array_equal(back.gammas, t.gammas)
        assert back.count == 3
        assert back.input_precision == 3e-9

    def test_real_table_roundtrip(self, zero_table, tmp_path):
        p = tmp_path / "big.ztbl"
        zeros.write_cache(zero_table, p)
        back = zeros.read_cache(p)
        assert np.array_equal(back.gammas, zero_table.gammas)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "z.ztbl"
        p.write_bytes(b"NOPE" + bytes(16))
        with pytest.raises(ZeroFileError, match="not a ZTBL"):
            zeros.read_cache(p)

    def test_bad_version(self, tmp_path):
        p = tmp_path / "z.ztbl"
        p.write_bytes(struct.pack("<4sBQ", b"ZTBL", 9, 1) + struct.pack("<d", 14.1))
        with pytest.raises(ZeroFileError, match="version 9"):
            zeros.read_cache(p)

    def test_truncated_header(self, tmp_path):
        p = tmp_path / "z.ztbl"
        p.write_bytes(b"ZT")
        with pytest.raises(ZeroFileError, match="truncated"):
            zeros.read_cache(p)

    def test_payload_length_mismatch(self, tmp_path):
        p = tmp_path / "z.ztbl"
        p.write_bytes(struct.pack("<4sBQ", b"ZTBL", 1, 5) + struct.pack("<d", 14.1))
        with pytest.raises(ZeroFileError, match="length mismatch"):
            zeros.read_cache(p)

    def test_corrupt_payload_order_caught(self, tmp_path):
        p = tmp_path / "z.ztbl"
        payload = struct.pack("<2d", 15.0, 14.0)
        p.write_bytes(struct.pack("<4sBQ", b"ZTBL", 1, 2) + payload)
        with pytest.raises(IntegrityError):
            zeros.read_cache(p)

    def test_load_table_sniffs_format(self, tmp_path):
        text = make_file(tmp_path, "14.1\n15.2\n")
        t1 = zeros.load_table(text)
        cache = tmp_path / "z.ztbl"
        zeros.write_cache(t1, cache)
        t2 = zeros.load_table(cache, input_precision=7e-9)
        assert np.array_equal(t1.gammas, t2.gammas)
        assert t2.input_precision == 7e-9


class TestCountBelow:
    def test_below_first_zero(self, zero_table):
        assert zeros.count_below(zero_table, 14.0) == 0

    def test_n_100(self, zero_table):
        assert zeros.count_below(zero_table, 100.0) == 29

    def test_n_1000(self, zero_table):
        assert zeros.count_below(zero_table, 1000.0) == 649

    def test_at_max_height(self, zero_table):
        assert zeros.count_below(zero_table, zero_table.max_height) == TABLE_COUNT

    def test_exact_ordinate_included(self, zero_table):
        for k in (1, 29, 50000):
            g = float(zero_table.gammas[k - 1])
            assert zeros.count_below(zero_table, g) == k

    def test_beyond_table(self, zero_table):
        with pytest.raises(RangeGuardError):
            zeros.count_below(zero_table, zero_table.max_height + 1.0)

    @given(
        st.lists(
            st.floats(min_value=0.125, max_value=1e6),
            min_size=1,
            max_size=40,
            unique=True,
        ),
        st.floats(min_value=0.0, max_value=1e6),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_bisect(self, vals, frac):
        vals = sorted(vals)
        t = zeros.ZeroTable.from_gammas(vals)
        T = min(frac, t.max_height)
        assert zeros.count_below(t, T) == bisect.bisect_right(vals, T)


class TestSumInvGamma:
    def test_below_first_zero_is_empty(self, zero_table):
        r = zeros.sum_inv_gamma(zero_table, 14.0)
        assert r.value == 0.0
        assert r.term_count == 0
        assert r.err_bound == 0.0

    def test_full_table_vs_oracle(self, zero_table):
        r = zeros.sum_inv_gamma(zero_table, zero_table.max_height, both_signs=True)
        assert r.term_count == TABLE_COUNT
        assert abs(r.value - S1_BOTH_FULL) < 5e-9
        assert abs(r.value - S1_BOTH_FULL) <= r.err_bound

    def test_partial_sum_stays_below_omega1(self, zero_table):
        r = zeros.sum_inv_gamma(zero_table, zero_table.max_height, both_signs=True)
        assert r.value + r.err_bound < OMEGA1

    def test_both_signs_doubles_exactly(self, zero_table):
        one = zeros.sum_inv_gamma(zero_table, 5000.0)
        two = zeros.sum_inv_gamma(zero_table, 5000.0, both_signs=True)
        assert two.value == 2.0 * one.value
        assert two.err_bound == 2.0 * one.err_bound
        assert two.term_count == one.term_count

    def test_monotone_in_height(self, zero_table):
        heights = [20.0, 100.0, 1000.0, 30000.0, zero_table.max_height]
        vals = [zeros.sum_inv_gamma(zero_table, T).value for T in heights]
        assert vals == sorted(vals)
        assert vals[0] > 0.0

    def test_beyond_table(self, zero_table):
        with pytest.raises(RangeGuardError):
            zeros.sum_inv_gamma(zero_table, 1e7)

    @given(st.floats(min_value=14.2, max_value=74920.0))
    @settings(max_examples=25, deadline=None)
    def test_prefix_plus_rest_is_total(self, zero_table, T):
        total = zeros.sum_inv_gamma(zero_table, zero_table.max_height)
        head = zeros.sum_inv_gamma(zero_table, T)
        gam = zero_table.gammas
        rest = float(np.sum(1.0 / gam[gam > T]))
        assert abs(head.value + rest - total.value) < 1e-9


class TestSumInvGammaSqTail:
    def test_partial_at_1000_vs_oracle(self, zero_table):
        r = zeros.sum_inv_gamma_sq_tail(zero_table, 1000.0)
        assert abs(r.value - S2_PARTIAL_1000) < 1e-15
        assert abs(r.tail_bound - S2_TAIL) < 1e-18
        assert r.term_count == TABLE_COUNT - 649 - 1

    def test_skewes_inequality_at_1000(self, zero_table):
        r = zeros.sum_inv_gamma_sq_tail(zero_table, 1000.0)
        assert r.value + r.err_bound + r.tail_bound < SKEWES_RHS_1000
        assert abs(math.log(1000.0) / (1000.0 * math.pi) - SKEWES_RHS_1000) < 1e-15

    def test_consistency_at_14(self, zero_table):
        r = zeros.sum_inv_gamma_sq_tail(zero_table, 14.0)
        # both kernel backends land within a few ulps of the oracle
        assert abs(r.value - S2_PARTIAL_14) < 1e-14
        rhs = math.log(14.0) / (14.0 * math.pi)
        assert abs(rhs - SKEWES_RHS_14) < 1e-15
        assert r.value + r.err_bound + r.tail_bound < rhs

    def test_at_max_height_tail_only(self, zero_table):
        r = zeros.sum_inv_gamma_sq_tail(zero_table, zero_table.max_height)
        assert r.value == 0.0
        assert r.term_count == 0
        assert r.tail_bound == S2_TAIL or abs(r.tail_bound - S2_TAIL) < 1e-18

    def test_beyond_table_allowed(self, zero_table):
        r = zeros.sum_inv_gamma_sq_tail(zero_table, 1e8)
        assert r.value == 0.0
        assert r.tail_bound > 0.0

    def test_below_one_rejected(self, zero_table):
        with pytest.raises(PntError):
            zeros.sum_inv_gamma_sq_tail(zero_table, 0.5)


def naive_xrho(gammas, x, height):
    acc = 0.0
    for g in gammas:
        if g > height:
            break
        rho = complex(0.5, float(g))
        acc += (x**rho / rho).real
    return 2.0 * acc


class TestSumXrhoOverRho:
    def test_x4_height100_vs_oracle(self, zero_table):
        r = zeros.sum_xrho_over_rho(zero_table, 4.0, 100.0)
        assert r.term_count == 29
        assert abs(r.value - XRHO_X4_H100) < 1e-10

    def test_matches_naive_summation(self, zero_table):
        r = zeros.sum_xrho_over_rho(zero_table, 9.5, 500.0)
        naive = naive_xrho(zero_table.gammas, 9.5, 500.0)
        assert abs(r.value - naive) < 1e-9

    def test_height_below_first_zero(self, zero_table):
        r = zeros.sum_xrho_over_rho(zero_table, 100.0, 10.0)
        assert r.value == 0.0
        assert r.term_count == 0

    def test_small_x_rejected(self, zero_table):
        with pytest.raises(PntError):
            zeros.sum_xrho_over_rho(zero_table, 1.5, 100.0)

    def test_beyond_table(self, zero_table):
        with pytest.raises(RangeGuardError):
            zeros.sum_xrho_over_rho(zero_table, 4.0, 1e7)

    def test_err_bound_accounts_for_precision(self, zero_table):
        r = zeros.sum_xrho_over_rho(zero_table, 1e6, 1000.0)
        floor = 2.0 * r.term_count * math.sqrt(1e6) * 1e-8 * math.log(1e6)
        assert r.err_bound >= floor

    @given(
        st.floats(min_value=2.0, max_value=1e6),
        st.floats(min_value=10.0, max_value=300.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_random_points_match_naive(self, zero_table, x, height):
        r = zeros.sum_xrho_over_rho(zero_table, x, height)
        naive = naive_xrho(zero_table.gammas, x, height)
        assert abs(r.value - naive) < 1e-6
        # term-wise triangle bound
        gam = zero_table.gammas[: r.term_count]
        cap = 2.0 * math.sqrt(x) * float(np.sum(1.0 / gam)) if r.term_count else 0.0
        assert abs(r.value) <= cap + r.err_bound + 1e-12


class TestExplicitPsi1:
    def test_x1000p5_vs_oracle(self, zero_table):
        r = zeros.explicit_psi1(zero_table, 1000.5, zero_table.max_height)
        assert r.term_count == TABLE_COUNT
        assert abs(r.value - PSI1_EXPL_X1000P5) < 1e-6
        assert abs(r.truncation_tail - PSI1_TAIL_X1000P5) < 1e-12

    def test_residual_in_epsilon_window(self, zero_table):
        r = zeros.explicit_psi1(zero_table, 1000.5, zero_table.max_height)
        resid = psi1_at(1000.5).psi1 - r.value
        assert abs(resid) <= r.truncation_tail + 2.069
        assert 1.545 - r.truncation_tail < resid < 2.069 + r.truncation_tail

    def test_small_x_containment(self, zero_table):
        r = zeros.explicit_psi1(zero_table, 2.5, zero_table.max_height)
        resid = psi1_at(2.5).psi1 - r.value
        assert 1.545 - r.truncation_tail < resid < 2.069 + r.truncation_tail

    def test_empty_sum_branch(self, zero_table):
        x = 2.5
        r = zeros.explicit_psi1(zero_table, x, 10.0)
        assert r.term_count == 0
        assert r.value == 0.5 * x * x - x * math.log(2.0 * math.pi)
        resid = psi1_at(x).psi1 - r.value
        assert abs(resid) <= r.truncation_tail + 2.069

    def test_integer_x_rejected(self, zero_table):
        with pytest.raises(PntError, match="integer"):
            zeros.explicit_psi1(zero_table, 1000.0, 100.0)

    def test_tiny_x_rejected(self, zero_table):
        with pytest.raises(PntError):
            zeros.explicit_psi1(zero_table, 0.5, 100.0)

    def test_low_height_rejected(self, zero_table):
        with pytest.raises(PntError):
            zeros.explicit_psi1(zero_table, 2.5, 1.0)

    def test_beyond_table(self, zero_table):
        with pytest.raises(RangeGuardError):
            zeros.explicit_psi1(zero_table, 2.5, 1e7)


class TestDataChecks:
    def test_nt_envelope_clean(self, zero_table):
        rep = zeros.check_nt_envelope(zero_table)
        assert rep.points_checked == NT_GRID_POINTS
        assert rep.violations == 0
        assert rep.max_ratio < 1.0
        assert abs(rep.max_ratio - NT_MAX_RATIO) < 1e-9
        assert abs(rep.argmax_height - 8.0 * math.pi) < 1e-9

    def test_envelope_formula_matches_bounds_module(self, zero_table):
        grid = zeros._nt_grid(zero_table)[:: len(zeros._nt_grid(zero_table)) // 23]
        from pntverify.logdomain import LogPoint

        two_pi = 2.0 * math.pi
        for T in grid:
            T = float(T)
            main_vec = T / two_pi * (math.log(T / two_pi) - 1.0) + 0.875
            assert abs(main_vec - bounds.nt_main_term(T)) < 1e-12
            env_vec = min(
                0.28 * math.log(T),
                0.1038 * math.log(T) + 0.2573 * math.log(math.log(T)) + 9.3675,
            )
            assert abs(env_vec - bounds.nt_envelope(LogPoint.from_x(T))) < 1e-12

    def test_nt_upper_clean(self, zero_table):
        rep = zeros.check_nt_upper(zero_table)
        assert rep.points_checked == TABLE_COUNT
        assert rep.violations == 0
        assert rep.max_ratio < 1.0

    def test_lehman_inv(self, zero_table):
        chk = zeros.lehman_check(zero_table, "inv")
        assert chk.holds
        assert abs(chk.lhs - LEHMAN_INV_LHS) < 1e-9
        assert abs(chk.rhs - LEHMAN_INV_RHS) < 1e-9

    def test_lehman_one_trivial(self, zero_table):
        chk = zeros.lehman_check(zero_table, "one")
        assert chk.holds
        assert math.isinf(chk.rhs)
        # everything above 2 pi e except the first zero
        assert chk.lhs == TABLE_COUNT - 1

    def test_lehman_guards(self, zero_table):
        with pytest.raises(PntError):
            zeros.lehman_check(zero_table, "inv", U=10.0)
        with pytest.raises(RangeGuardError):
            zeros.lehman_check(zero_table, "inv", V=1e7)
        with pytest.raises(PntError):
            zeros.lehman_check(zero_table, "inv", V=17.0)
        with pytest.raises(PntError):
            zeros.lehman_check(zero_table, "sqrt")

    def test_lehman_custom_range(self, zero_table):
        chk = zeros.lehman_check(zero_table, "inv", V=1000.0)
        assert chk.holds
        assert 0.0 < chk.lhs < chk.rhs
