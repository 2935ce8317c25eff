"""
Tests for SODs, t-stabilities and admissible filtrations: validation, the
bijections between the three views, refinement and the mutations rho, sigma.
"""

import pytest

from src.core_lattice import type_a
from src.errors import CapacityError, InvalidInputError
from src.exceptional import enumerate_full_exceptional_sequences, parse_sequence
from src.objects import Interval, parse_intervals
from src.sod_tstab import (
    LEFT,
    RIGHT,
    chi,
    chi_inv,
    enumerate_all_sods,
    eta,
    eta_inv,
    finer_map,
    finest_certificate_failure,
    finest_sods,
    first_non_exceptional_block,
    is_finer,
    is_finest_exhaustive,
    is_finest_sufficient,
    left_chain,
    make_filtration,
    parse_sod,
    parse_tstability,
    refine_locally,
    refine_to_finest,
    rho,
    rho_tstability,
    sigma,
    xi,
    xi_inv,
)
from src.typea_engine import thick_closure, whole_category


def subcat(n, text):
    return thick_closure(parse_intervals(n, text), n)


def finest(n):
    return [chi(seq) for seq in enumerate_full_exceptional_sequences(type_a(n))]


def a3_finest():
    return finest(3)


def test_a2_finest_sods():
    names = {s.name() for s in enumerate_all_sods(type_a(2), finest_only=True)}
    assert names == {"(S1|S2)", "(S2|P1)", "(P1|S1)"}


def test_a3_finest_sods_match_golden_list(a3_finest):
    names = {s.name() for s in enumerate_all_sods(type_a(3), finest_only=True)}
    assert names == {"(" + "|".join(row) + ")" for row in a3_finest}
    assert len(names) == 16


def test_all_sods_a2():
    # every nontrivial SOD of A_2 already has rank one blocks
    assert len(enumerate_all_sods(type_a(2))) == 3


def test_all_sods_a3_contain_coarse_ones():
    sods = enumerate_all_sods(type_a(3))
    assert parse_sod(3, "(S1|S2,S3)") in sods
    assert any(len(s) == 2 for s in sods)
    assert all(len(s) >= 2 for s in sods)
    assert len({s.blocks for s in sods}) == len(sods)


def test_sod_axioms():
    with pytest.raises(InvalidInputError) as e:
        parse_sod(2, "(S2|S1)")
    assert e.value.axiom == "semiorthogonality"
    with pytest.raises(InvalidInputError) as e:
        parse_sod(3, "(S1|S2)")
    assert e.value.axiom == "generation"
    with pytest.raises(InvalidInputError) as e:
        parse_sod(2, "(S1|S1,S2)")
    assert e.value.axiom in ("semiorthogonality", "distinct blocks")


def test_tstability_parsing_and_phases():
    t = parse_tstability(3, "(P1|S2|I2)")
    assert list(t.phases) == [1, 2, 3]
    assert t.tau_phi(2) == 2
    assert t.piece_of(Interval(2, 2)) == 2
    assert t.piece_of(Interval(3, 3)) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eta_round_trip(n):
    for s in finest(n):
        t = eta_inv(s)
        assert eta(t) == s
        assert t.pieces == s.blocks


def test_xi_a2():
    f = xi(parse_sod(2, "(S1|S2)"))
    assert f.chain == (subcat(2, "S2"), whole_category(2))
    assert f.term(0).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_xi_round_trip(n):
    for s in finest(n) + [s for s in enumerate_all_sods(type_a(n)) if len(s) < n]:
        f = xi(s)
        assert len(f) == len(s)
        assert xi_inv(f) == s


def test_left_chain():
    f = left_chain(xi(parse_sod(2, "(S1|S2)")))
    assert f.side == LEFT
    assert f.chain == (subcat(2, "S1"), whole_category(2))


def test_filtration_validation():
    with pytest.raises(InvalidInputError):
        make_filtration(2, [subcat(2, "S1")])
    with pytest.raises(InvalidInputError):
        make_filtration(2, [whole_category(2), whole_category(2)])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chi_and_inverse(n):
    for seq in enumerate_full_exceptional_sequences(type_a(n)):
        s = chi(seq)
        assert chi_inv(s) == seq
        assert chi(chi_inv(s)) == s


def test_chi_inverse_rejects_coarse_sods():
    coarse = parse_sod(3, "(S1|S2,S3)")
    assert first_non_exceptional_block(coarse) == 2
    assert chi_inv(coarse) is None


def test_chi_of_partial_sequence():
    s = chi(parse_sequence(3, "(S1,S3)"))
    assert s.ambient() == subcat(3, "S1,S3")


def test_finer():
    fine = parse_sod(3, "(S1|S2|S3)")
    coarse = parse_sod(3, "(S1|S2,S3)")
    assert finer_map(fine, coarse) == (1, 2, 2)
    assert is_finer(fine, coarse)
    assert is_finer(fine, fine)
    assert not is_finer(coarse, fine)
    assert not is_finer(parse_sod(3, "(P1|S1|S2)"), coarse)


def test_finer_capacity(monkeypatch):
    monkeypatch.setenv("SODLAB_MAX_FINER_BLOCKS", "2")
    with pytest.raises(CapacityError):
        finer_map(parse_sod(3, "(S1|S2|S3)"), parse_sod(3, "(S1|S2,S3)"))


def test_finest_tests():
    fine = parse_sod(3, "(P1|S2|I2)")
    coarse = parse_sod(3, "(S1|S2,S3)")
    assert is_finest_sufficient(fine)
    assert is_finest_exhaustive(fine)
    assert not is_finest_sufficient(coarse)
    assert finest_certificate_failure(coarse) is not None
    assert not is_finest_exhaustive(coarse)


@pytest.mark.parametrize("n", [2, 3])
def test_sufficient_finest_test_implies_exhaustive(n):
    sods = enumerate_all_sods(type_a(n))
    certified = [s for s in sods if is_finest_sufficient(s)]
    assert len(certified) == len(enumerate_all_sods(type_a(n), finest_only=True))
    for s in certified:
        assert is_finest_exhaustive(s)


def test_finest_sods_of_subcategory():
    assert len(finest_sods(subcat(3, "S2,S3"))) == 3
    assert len(finest_sods(subcat(3, "P1"))) == 1


def test_refine_to_finest():
    coarse = parse_sod(3, "(S1|S2,S3)")
    refined = refine_to_finest(coarse)
    assert len(refined) == 3
    assert is_finer(refined, coarse)
    assert refined.blocks[0] == subcat(3, "S1")
    assert refine_to_finest(refined) == refined


def test_refine_locally():
    t = parse_tstability(3, "(S1|S2,S3)")
    local = parse_tstability(3, "(S2|S3)", ambient=subcat(3, "S2,S3"))
    refined = refine_locally(t, 2, local)
    assert refined == parse_tstability(3, "(S1|S2|S3)")
    with pytest.raises(InvalidInputError):
        refine_locally(t, 3, local)


def test_rho_a2():
    assert rho(parse_sod(2, "(S1|S2)"), 1).name() == "(P1|S1)"
    assert rho(parse_sod(2, "(P1|S1)"), 1).name() == "(S2|P1)"
    assert rho(parse_sod(2, "(S2|P1)"), 1).name() == "(S1|S2)"


def test_rho_directions_are_inverse():
    for s in a3_finest():
        for i in (1, 2):
            assert rho(rho(s, i, RIGHT), i, LEFT) == s
            assert rho(rho(s, i, LEFT), i, RIGHT) == s


def test_rho_on_coarse_sod():
    s = parse_sod(3, "(S1|S2,S3)")
    mutated = rho(s, 1)
    assert mutated.blocks[1] == subcat(3, "S1")
    assert rho(mutated, 1, LEFT) == s


def test_rho_tstability_matches_sod():
    for s in a3_finest():
        assert eta(rho_tstability(eta_inv(s), 1)) == rho(s, 1)


def test_sigma_a2():
    f = xi(parse_sod(2, "(S1|S2)"))
    assert f.chain[0] == subcat(2, "S2")
    assert sigma(f, 1, RIGHT).chain[0] == subcat(2, "S1")


def test_xi_intertwines_rho_and_sigma():
    n = 3
    for s in a3_finest():
        for i in range(1, n):
            assert xi(rho(s, i, RIGHT)) == sigma(xi(s), n - i, RIGHT)
            assert xi(rho(s, i, LEFT)) == sigma(xi(s), n - i, LEFT)


def test_sigma_directions_are_inverse():
    for s in a3_finest():
        f = xi(s)
        for j in (1, 2):
            assert sigma(sigma(f, j, RIGHT), j, LEFT) == f


def test_mutation_index_checks():
    s = parse_sod(2, "(S1|S2)")
    with pytest.raises(InvalidInputError):
        rho(s, 2)
    with pytest.raises(InvalidInputError):
        rho(s, 1, "sideways")
    with pytest.raises(InvalidInputError):
        sigma(left_chain(xi(s)), 1)
