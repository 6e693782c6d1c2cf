"""Zeta series, recurrence detection, g*f decomposition and the classifier.

Independent oracles implemented here: power series of p/q by long division,
exp of a series by summing L^k / k!, and per-iterate valuation stripping.
"""

import random
from fractions import Fraction

import pytest

from reidzeta.arith import IntMat, padic_abs
from reidzeta.engine import abelian_r, r_sequence
from reidzeta.errors import NoRecurrenceFound, NotApplicable
from reidzeta.groups import (
    EndoPair,
    NilpotentFactor,
    NilpotentGroupData,
    SArithAbelianGroup,
)
from reidzeta.spectra import ExternalEigenData, ExternalEigenPair, eigen_profile
from reidzeta.arith import PadicVal
from reidzeta.zeta import (
    RationalForm,
    ZetaSeries,
    classify_dichotomy,
    detect_linear_recurrence,
    gf_decomposition,
    product_form_r_values,
    product_form_zeta_series,
    rational_form_series,
    recover_r_sequence,
    zeta_coefficients,
    zstar_series,
)

from conftest import commuting_rational_pair

Z1 = SArithAbelianGroup(1)
Z2 = SArithAbelianGroup(2)
Z_1_3 = SArithAbelianGroup(1, (3,))


def scalar_pair(a, b) -> EndoPair:
    return EndoPair(IntMat.from_rows([[a]]), IntMat.from_rows([[b]]))


SHEAR = EndoPair(
    IntMat.from_rows([[1, 1], [0, 1]]), IntMat.from_rows([[1, 0], [1, 1]])
)


# -- oracles ---------------------------------------------------------------------

def series_of_quotient(num, den, nterms):
    """Long-division power series of num/den (integer coefficient lists)."""
    out = []
    for m in range(nterms + 1):
        total = Fraction(num[m] if m < len(num) else 0)
        for j in range(1, min(m, len(den) - 1) + 1):
            total -= den[j] * out[m - j]
        out.append(total / den[0])
    return out


def exp_series_oracle(log_coeffs, nterms):
    """exp of a series with zero constant term, via sum of powers / k!."""
    log_coeffs = list(log_coeffs) + [Fraction(0)] * (nterms + 1 - len(log_coeffs))
    result = [Fraction(0)] * (nterms + 1)
    result[0] = Fraction(1)
    term = [Fraction(0)] * (nterms + 1)
    term[0] = Fraction(1)
    for k in range(1, nterms + 1):
        nxt = [Fraction(0)] * (nterms + 1)
        for i, x in enumerate(term):
            if x == 0:
                continue
            for j in range(nterms + 1 - i):
                nxt[i + j] += x * log_coeffs[j]
        term = [x / k for x in nxt]
        result = [a + b for a, b in zip(result, term)]
    return result


def strip3(n):
    while n % 3 == 0:
        n //= 3
    return n


# -- zeta_coefficients ---------------------------------------------------------------

def test_constant_r_gives_geometric_series():
    series = zeta_coefficients([1] * 8)
    assert all(a == 1 for a in series.coefficients)


def test_cyclic_r_matches_rational_function():
    r_vals = [3**n - 1 for n in range(1, 11)]
    series = zeta_coefficients(r_vals)
    expected = series_of_quotient([1, -1], [1, -3], 10)
    assert list(series.coefficients) == expected
    assert list(series.coefficients[:5]) == [1, 2, 6, 18, 54]


def test_squares_r_matches_exp_of_s_over_one_minus_s_squared():
    r_vals = [n * n for n in range(1, 13)]
    series = zeta_coefficients(r_vals)
    # log Z = sum n s^n = s / (1-s)^2
    log_coeffs = [Fraction(n) for n in range(13)]
    assert list(series.coefficients) == exp_series_oracle(log_coeffs, 12)
    assert list(series.coefficients[:5]) == [
        1,
        1,
        Fraction(5, 2),
        Fraction(31, 6),
        Fraction(241, 24),
    ]


def test_exp_log_roundtrip_random():
    rng = random.Random(101)
    for _ in range(100):
        r_vals = [rng.randint(1, 50) for _ in range(rng.randint(1, 12))]
        assert recover_r_sequence(zeta_coefficients(r_vals)) == r_vals


def test_zeta_series_rejects_bad_constant():
    with pytest.raises(ValueError):
        ZetaSeries((Fraction(2),))


# -- zstar ------------------------------------------------------------------------

def test_zstar_prefixes_zero():
    assert zstar_series([2, 8, 26]) == (0, 2, 8, 26)


def test_zstar_squares():
    assert zstar_series([n * n for n in range(1, 5)]) == (0, 1, 4, 9, 16)


def test_zstar_empty():
    assert zstar_series([]) == (0,)


# -- detect_linear_recurrence ---------------------------------------------------------

def test_recurrence_cyclic_family():
    fit = detect_linear_recurrence([3**n - 1 for n in range(1, 21)], 5)
    assert fit.order == 2
    assert fit.zstar_form == RationalForm((0, 2), (1, -4, 3))  # 2s / (1-s)(1-3s)


def test_recurrence_squares():
    fit = detect_linear_recurrence([n * n for n in range(1, 21)], 5)
    assert fit.order == 3
    assert fit.zstar_form.denominator == (1, -3, 3, -1)  # (1-s)^3
    assert fit.zstar_form.numerator == (0, 1, 1)  # s(1+s)


def test_recurrence_not_found_for_boundary_sequence():
    r_vals = [strip3(2**n - 1) for n in range(1, 41)]
    with pytest.raises(NoRecurrenceFound):
        detect_linear_recurrence(r_vals, 12)


def test_recurrence_requires_enough_terms():
    with pytest.raises(ValueError):
        detect_linear_recurrence([1, 2, 3], 4)


def test_recurrence_never_overfits_accepted_sequences():
    rng = random.Random(102)
    accepted = 0
    for _ in range(60):
        kind = rng.random()
        if kind < 0.4:
            base = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
            r_vals = [
                sum(b * (k + 1) ** j for j, b in enumerate(base))
                for k in range(24)
            ]
        elif kind < 0.8:
            w = rng.randint(2, 5)
            r_vals = [w**n + rng.randint(0, 1) * n for n in range(1, 25)]
        else:
            r_vals = [rng.randint(1, 9) for _ in range(24)]
        try:
            fit = detect_linear_recurrence(r_vals, 8)
        except NoRecurrenceFound:
            continue
        accepted += 1
        expanded = rational_form_series(fit.zstar_form, len(r_vals))
        assert list(expanded) == [0] + [Fraction(v) for v in r_vals]
    assert accepted >= 10


# -- gf decomposition ----------------------------------------------------------------

def test_gf_inverted_three_pair():
    profile = eigen_profile(Z_1_3, scalar_pair(6, 3))
    decomp = gf_decomposition(profile, Z_1_3, range(1, 11))
    for n, (g, f) in enumerate(decomp, start=1):
        assert g == 2**n - 1
        assert f == padic_abs(2**n - 1, 3)
    assert decomp[5] == (Fraction(63), Fraction(1, 9))  # n = 6, product 7


def test_gf_cyclic_pair_trivial_f():
    profile = eigen_profile(Z1, scalar_pair(3, 1))
    for n, (g, f) in enumerate(gf_decomposition(profile, Z1, range(1, 8)), start=1):
        assert g == 3**n - 1 and f == 1


def test_gf_inverted_two_equal_units():
    # On Z[1/2] with (3, 1): both are 2-adic units with equal valuation, so
    # the p = 2 slot lands in f: f(n) = |3^n - 1|_2 and g(n) = 3^n - 1.
    # Direct valuation check for n <= 10; g*f matches the class count.
    group = SArithAbelianGroup(1, (2,))
    profile = eigen_profile(group, scalar_pair(3, 1))
    decomp = gf_decomposition(profile, group, range(1, 11))
    for n, (g, f) in enumerate(decomp, start=1):
        assert g == 3**n - 1
        assert f == padic_abs(3**n - 1, 2)
        assert g * f == int(abelian_r(group, scalar_pair(3, 1), n))


def test_gf_product_recovers_r_on_random_eligible_pairs():
    rng = random.Random(103)
    done = 0
    while done < 100:
        s = tuple(sorted(rng.sample([2, 3, 5], rng.randint(0, 2))))
        group, pair, diag = commuting_rational_pair(rng, rng.randint(1, 3), s)
        if any(abs(x) == abs(y) for x, y in diag):
            continue
        profile = eigen_profile(group, pair)
        decomp = gf_decomposition(profile, group, range(1, 6))
        for n, (g, f) in enumerate(decomp, start=1):
            assert g * f == int(abelian_r(group, pair, n))
        done += 1


def test_gf_refuses_untame_profile():
    profile = eigen_profile(Z1, scalar_pair(2, 2))
    with pytest.raises(NotApplicable):
        gf_decomposition(profile, Z1, range(1, 3))


# -- classifier -------------------------------------------------------------------

def test_classify_cyclic_rational_with_exact_form():
    verdict = classify_dichotomy((Z1, scalar_pair(3, 1)))
    assert verdict.tag == "Rational"
    assert verdict.rational_form == RationalForm((1, -1), (1, -3))
    assert verdict.product_form == ((Fraction(3), 1), (Fraction(1), -1))
    assert not verdict.conditional


def test_classify_inverted_three_natural_boundary():
    verdict = classify_dichotomy((Z_1_3, scalar_pair(6, 3)))
    assert verdict.tag == "NaturalBoundary"
    assert verdict.witness == (3, 1, 1)


def test_classify_shear_not_applicable():
    verdict = classify_dichotomy((Z2, SHEAR))
    assert verdict.tag == "NotApplicable"
    assert "non-commuting" in verdict.reason


def test_classify_untame_not_applicable():
    verdict = classify_dichotomy((Z1, scalar_pair(3, -3)))
    assert verdict.tag == "NotApplicable"
    assert "not tame" in verdict.reason


def test_classify_irrational_not_applicable():
    pair = EndoPair(IntMat.from_rows([[0, 1], [2, 0]]), IntMat.identity(2))
    verdict = classify_dichotomy((Z2, pair))
    assert verdict.tag == "NotApplicable"
    assert "external" in verdict.reason


def test_classify_inverted_two_units_natural_boundary():
    verdict = classify_dichotomy((SArithAbelianGroup(1, (2,)), scalar_pair(3, 1)))
    assert verdict.tag == "NaturalBoundary"
    assert verdict.witness == (2, 1, 1)


def test_classify_nilpotent_factors():
    data = NilpotentGroupData(
        (
            NilpotentFactor(Z1, scalar_pair(2, 1)),
            NilpotentFactor(Z1, scalar_pair(3, 1)),
            NilpotentFactor(Z1, scalar_pair(6, 1)),
        )
    )
    verdict = classify_dichotomy(data)
    assert verdict.tag == "Rational"
    expanded = product_form_zeta_series(verdict.product_form, 12)
    r_vals = [(2**n - 1) * (3**n - 1) * (6**n - 1) for n in range(1, 13)]
    assert list(zeta_coefficients(r_vals).coefficients) == list(expanded)


def test_classify_nilpotent_boundary_witness_names_factor():
    data = NilpotentGroupData(
        (
            NilpotentFactor(Z1, scalar_pair(2, 1)),
            NilpotentFactor(Z_1_3, scalar_pair(6, 3)),
        )
    )
    verdict = classify_dichotomy(data)
    assert verdict.tag == "NaturalBoundary"
    assert verdict.witness == (3, 2, 1)


def test_rational_verdicts_reexpand_to_zeta_coefficients():
    rng = random.Random(104)
    done = 0
    while done < 40:
        s = tuple(sorted(rng.sample([2, 3, 5], rng.randint(0, 2))))
        group, pair, diag = commuting_rational_pair(rng, rng.randint(1, 2), s)
        if any(x == 0 or y == 0 for x, y in diag):
            continue
        verdict = classify_dichotomy((group, pair))
        if verdict.tag != "Rational":
            continue
        done += 1
        nterms = 2 * len(verdict.product_form) + 5
        r_vals = r_sequence((group, pair), nterms)
        assert product_form_r_values(verdict.product_form, nterms) == r_vals
        assert list(product_form_zeta_series(verdict.product_form, nterms)) == list(
            zeta_coefficients(r_vals).coefficients
        )
        assert list(rational_form_series(verdict.rational_form, nterms)) == list(
            zeta_coefficients(r_vals).coefficients
        )
        assert list(rational_form_series(verdict.zstar_form, nterms)) == [0] + r_vals


def test_rational_verdict_dominant_term():
    rng = random.Random(105)
    done = 0
    while done < 40:
        s = tuple(sorted(rng.sample([2, 3, 5], rng.randint(0, 2))))
        group, pair, diag = commuting_rational_pair(rng, rng.randint(1, 3), s)
        verdict = classify_dichotomy((group, pair))
        if verdict.tag != "Rational":
            continue
        done += 1
        profile = eigen_profile(group, pair)
        expected = Fraction(1)
        for p in group.inverted_primes:
            for i in range(1, len(profile.pairs) + 1):
                ep = profile.pairs[i - 1]
                v_xi, v_eta = profile.valuations[(p, i)]
                if v_xi != v_eta:
                    expected *= (
                        max(padic_abs(ep.xi, p), padic_abs(ep.eta, p))
                        ** ep.multiplicity
                    )
        for ep in profile.pairs:
            expected *= max(abs(ep.xi), abs(ep.eta)) ** ep.multiplicity
        dominant = max(abs(w) for w, _ in verdict.product_form)
        assert dominant == expected
        assert sum(1 for w, _ in verdict.product_form if abs(w) == dominant) == 1


# -- external eigendata ----------------------------------------------------------------

def _external_for_6_3():
    return ExternalEigenData(
        pairs=(
            ExternalEigenPair(
                abs2_xi=Fraction(36),
                abs2_eta=Fraction(9),
                multiplicity=1,
                valuations={3: (PadicVal(1), PadicVal(1))},
            ),
        ),
        witness_primes=(3,),
        assert_triangularisable=True,
    )


def test_classify_external_boundary_is_conditional():
    verdict = classify_dichotomy(
        (Z_1_3, scalar_pair(6, 3)), external=_external_for_6_3()
    )
    assert verdict.tag == "NaturalBoundary"
    assert verdict.conditional
    assert verdict.witness == (3, 1, 1)


def test_classify_external_rational_with_recurrence_presentation():
    external = ExternalEigenData(
        pairs=(
            ExternalEigenPair(
                abs2_xi=Fraction(9),
                abs2_eta=Fraction(1),
                multiplicity=1,
                valuations={3: (PadicVal(1), PadicVal(0))},
            ),
        ),
        witness_primes=(3,),
        assert_triangularisable=True,
    )
    verdict = classify_dichotomy(
        (Z_1_3, scalar_pair(3, 1)), external=external, terms=24, max_order=6
    )
    assert verdict.tag == "Rational" and verdict.conditional
    # R_n = |3^n - 1| * |3^n - 1|_3 = 3^n - 1 here (3^n - 1 is prime to 3)
    assert verdict.zstar_form == RationalForm((0, 2), (1, -4, 3))


def test_classify_external_requires_assertion():
    external = ExternalEigenData(
        pairs=(
            ExternalEigenPair(Fraction(36), Fraction(9), 1, {}),
        ),
        witness_primes=(3,),
        assert_triangularisable=False,
    )
    verdict = classify_dichotomy((Z_1_3, scalar_pair(6, 3)), external=external)
    assert verdict.tag == "NotApplicable"
    assert verdict.conditional
