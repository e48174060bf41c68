import pytest

from zsdiam.core import Finite, InfinityResidues, ProblemSpec, Residues
from zsdiam.formulas import (
    atlas,
    atlas_csv,
    atlas_markdown,
    closed_form,
    coprime_wide_claim,
)


def k2(s, r):
    return closed_form(ProblemSpec(s, r, Finite(2)))


def k3(s, r):
    return closed_form(ProblemSpec(s, r, Finite(3)))


def z(s, r):
    return closed_form(ProblemSpec(s, r, Residues()))


def zinf(s, r):
    return closed_form(ProblemSpec(s, r, InfinityResidues()))


class TestClosedFormTwoColors:
    def test_diagonal(self):
        res = k2(3, 3)
        assert (res.value, res.case_label) == (12, "s = r")

    def test_narrow(self):
        assert k2(3, 4).value == 13

    def test_wide(self):
        assert k2(3, 5).value == 14

    def test_acceptance_values(self):
        expected = {
            (2, 2): 7,
            (2, 3): 8,
            (3, 3): 12,
            (3, 4): 13,
            (3, 5): 14,
            (4, 4): 17,
            (4, 6): 19,
        }
        for (s, r), value in expected.items():
            assert k2(s, r).value == value, (s, r)

    def test_branch_seams(self):
        for s in range(2, 9):
            # narrow branch evaluated at r = s equals the diagonal value
            assert 4 * s + s - 3 == 5 * s - 3
            if 2 * s - 2 > s:
                assert k2(s, 2 * s - 2).value == 6 * s - 5
            assert k2(s, 2 * s - 1).value == 6 * s - 4


class TestClosedFormResidues:
    def test_gcd_branch(self):
        res = z(4, 6)
        assert res.value == 4 * 4 + max(6, 4 + 2 - 1) - 3 == 19

    def test_inner_max_binds(self):
        # (8,10): g=2, h=4, s+h-1 = 11 > r, so the inner max binds
        res = z(8, 10)
        assert res.value == 4 * 8 + max(10, 8 + 4 - 1) - 3 == 40
        assert res.value == 5 * 8 + 4 - 4  # same as the tight-case form 5s+h-4

    def test_coprime_mid_not_applicable(self):
        # gcd(5,4) = 1: the mid case is only established for gcd > 1
        res = z(4, 5)
        assert res.applicable is False
        assert "gcd" in res.reason or "coprime" in res.reason

    def test_diagonal_any_s(self):
        assert z(2, 2).value == 7
        assert z(3, 3).value == 12

    def test_wide_small_s(self):
        assert z(2, 4).value == 10

    def test_coprime_wide_claim(self):
        res = coprime_wide_claim(ProblemSpec(3, 7, Residues()))
        assert res.applicable and res.value == 14
        assert "conflict" in res.case_label
        res2 = coprime_wide_claim(ProblemSpec(4, 6, Residues()))
        assert not res2.applicable
        res3 = coprime_wide_claim(ProblemSpec(3, 5, Residues()))
        assert res3.applicable and res3.value == 14
        assert "conflict" not in res3.case_label  # r = 2s-1: both claims agree


class TestClosedFormThreeColors:
    def test_small_r(self):
        res = k3(3, 3)
        assert res.value == 20

    def test_wide(self):
        assert k3(3, 7).value == 3 * 3 + 3 * 7 - 4 == 26

    def test_diagonal_small(self):
        assert k3(2, 2).value == 11

    def test_gap_not_applicable(self):
        res = k3(2, 3)
        assert res.applicable is False
        assert res.value is None

    def test_mid_branches(self):
        assert k3(4, 6).value == 4 * 4 + 3 * 6 - 4  # floor((5*4-1)/3)-1 = 5 < 6 <= 6
        assert k3(4, 7).value == 6 * 4 + 2 * 7 - 6  # 2s-2 < 7 <= 3s-3
        assert k3(4, 5).value == 9 * 4 - 7  # 5 <= floor(19/3)-1 = 5


class TestClosedFormInfinity:
    def test_diagonal(self):
        res = zinf(3, 3)
        assert res.value == 20  # h = 1 so the correction vanishes

    def test_diagonal_small(self):
        assert zinf(2, 2).value == 11

    def test_small_r_with_correction(self):
        # s=4, r=5: h = 4, floor(19/3)-1 = 5 so r <= 5: 9s-7+h-1 = 32
        assert zinf(4, 5).value == 9 * 4 - 7 + 4 - 1 == 32

    def test_mid(self):
        # s=4, r=6: mid branch: 3s+2r-3+min(3s-3, s+r-1+h-1) with h=2
        assert zinf(4, 6).value == 12 + 12 - 3 + min(9, 4 + 6 - 1 + 1) == 30

    def test_wide(self):
        assert zinf(2, 4).value == 3 * 2 + 3 * 4 - 4 == 14

    def test_unsupported_palette(self):
        res = closed_form(ProblemSpec(3, 3, Finite(5)))
        assert res.applicable is False


class TestFormulaInvariants:
    def test_applicable_values_cover_both_sets(self):
        for s in range(2, 9):
            for r in range(s, 9):
                for mode in (Finite(2), Finite(3), Residues(), InfinityResidues()):
                    res = closed_form(ProblemSpec(s, r, mode))
                    if res.applicable:
                        assert res.value >= s + r, (s, r, mode)

    def test_inapplicable_has_reason(self):
        res = z(5, 8)  # gcd(8,5) = 1, mid case
        assert res.applicable is False
        assert res.reason


class TestAtlas:
    def test_row_values(self):
        rows = atlas([3], range(3, 8), [Finite(2)])
        assert [row.value for row in rows] == [12, 13, 14, 16, 18]

    def test_single_point_matches_closed_form(self):
        rows = atlas([4], [6], [Residues()])
        assert rows[0].value == closed_form(ProblemSpec(4, 6, Residues())).value

    def test_ordering(self):
        rows = atlas([3, 2], [4, 3], [Finite(2), Finite(3)])
        keys = [(row.s, row.r, row.mode) for row in rows]
        assert keys == sorted(keys, key=lambda k: (k[0], k[1]))

    def test_invalid_points_marked(self):
        rows = atlas([3], [2], [Finite(2)])
        assert rows[0].value is None

    def test_formats_agree(self):
        rows = atlas(range(3, 5), range(3, 7), [Finite(2), Residues()])
        md = atlas_markdown(rows)
        csv_text = atlas_csv(rows)
        md_values = [
            line.split("|")[4].strip()
            for line in md.strip().splitlines()[2:]
        ]
        csv_values = [line.split(",")[3] for line in csv_text.strip().splitlines()[1:]]
        assert md_values == csv_values

    def test_empty_ranges_rejected(self):
        with pytest.raises(ValueError):
            atlas([], [3], [Finite(2)])


def test_precondition_enforced():
    with pytest.raises(ValueError):
        ProblemSpec(4, 3, Finite(2))
