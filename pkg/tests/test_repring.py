import itertools
from fractions import Fraction

import pytest

from eulercalc import fingroup as fg
from eulercalc import repring as rr
from eulercalc.degrees import RODegree


def hom_count_oracle(G, p):
    """Independent oracle: count all functions G -> Z/p that are homomorphisms."""
    count = 0
    for values in itertools.product(range(p), repeat=G.order):
        if values[G.identity] != 0:
            continue
        if all((values[G.mul(a, b)] - values[a] - values[b]) % p == 0
               for a in range(G.order) for b in range(G.order)):
            count += 1
    return count


def test_irr1_examples():
    assert list(rr.irr1(rr.standard_table("C2"))) == ["1", "sgn"]
    assert list(rr.irr1(rr.standard_table("C3"))) == ["1"]
    assert len(rr.irr1(rr.standard_table("C2xC2"))) == 4
    # oracle cross-check: |Irr1(G)| = |Hom(G, Z/2)|
    for name in ("C2", "C3", "C4", "C2xC2", "S3"):
        t = rr.standard_table(name)
        assert len(rr.irr1(t)) == hom_count_oracle(t.group, 2), name


def test_irr1_group_structure():
    for name in ("C2", "C4", "C2xC2", "S3"):
        chars = rr.irr1(rr.standard_table(name))
        for a in chars:
            for b in chars:
                assert chars.product(a, b) in set(chars)


def test_tilde_irr1_examples():
    # frozen from the hom-counting oracle below
    assert len(rr.tilde_irr1(rr.standard_table("C3"), 3)) == 3
    assert list(rr.tilde_irr1(rr.standard_table("C2"), 3)) == ["1"]
    assert list(rr.tilde_irr1(rr.standard_table("S3"), 3)) == ["1"]
    for name, p in (("C3", 3), ("C2", 3), ("S3", 3), ("C4", 3), ("C2xC2", 3)):
        t = rr.standard_table(name)
        assert len(rr.tilde_irr1(t, p)) == hom_count_oracle(t.group, p), (name, p)
    chars = rr.tilde_irr1(rr.standard_table("C3"), 3)
    for a in chars:
        for b in chars:
            assert chars.product(a, b) in set(chars)


def test_tilde_irr1_requires_complex_table():
    t = rr.standard_table("C2")
    stripped = rr.CharacterTable(
        group=t.group, class_reps=t.class_reps, class_sizes=t.class_sizes,
        real_irreducibles=t.real_irreducibles, complex_irreducibles=(),
        cyclotomic_order=1)
    with pytest.raises(rr.TableError):
        rr.tilde_irr1(stripped, 3)


def test_orthogonality_validation_catches_corruption():
    import json
    from eulercalc._data import data_dir
    spec = json.loads((data_dir() / "tables" / "C4.json").read_text())
    spec["real_irreducibles"][1]["values"] = [1, -1, 1, 1]
    with pytest.raises(rr.TableError):
        rr.load_table(spec, rr.standard_group("C4"))


def subgroup_sites(name):
    t = rr.standard_table(name)
    for sub in fg.subgroups_up_to_conjugacy(t.group):
        yield t, sub, rr.resolve_subgroup_site(t, sub, rr.standard_tables())


def test_restriction_sends_regular_to_index_many_regulars():
    for name in ("C2", "C3", "C4", "C2xC2", "S3"):
        t = rr.standard_table(name)
        rho = rr.regular_degree(t)
        for _, sub, site in subgroup_sites(name):
            got = rr.restrict_deg(t, sub, site.table, rho, iso=site.embed)
            index = t.group.order // sub.order
            assert got == index * rr.regular_degree(site.table), (name, sub.members)


def test_restriction_is_additive():
    t = rr.standard_table("S3")
    tC2 = rr.standard_table("C2")
    sub = fg.Subgroup(t.group, (0, 1))
    V = RODegree({"std": 1, "sgn": 2})
    W = RODegree({"1": 1, "std": -1})
    lhs = rr.restrict_deg(t, sub, tC2, V + W)
    rhs = rr.restrict_deg(t, sub, tC2, V) + rr.restrict_deg(t, sub, tC2, W)
    assert lhs == rhs


def test_restrict_examples():
    tC4, tC2, tC1, tS3, tC3 = map(rr.standard_table, ("C4", "C2", "C1", "S3", "C3"))
    sub = fg.Subgroup(tC4.group, (0, 2))
    assert rr.restrict_deg(tC4, sub, tC2, rr.regular_degree(tC4)) \
        == 2 * rr.regular_degree(tC2)
    sub_e = fg.Subgroup(tS3.group, (0,))
    assert rr.restrict_deg(tS3, sub_e, tC1, 3 * rr.regular_degree(tS3)) \
        == RODegree.integer(18)
    c3 = fg.Subgroup(tS3.group, (0, 3, 4))
    assert rr.restrict_deg(tS3, c3, tC3, RODegree({"sgn": 1})) == RODegree.integer(1)


def test_fixed_deg_dimension_oracle():
    # dim(V^K) = (1/|K|) sum over K of chi_V, exactly
    for name in ("C2", "C4", "S3", "C2xC2"):
        t = rr.standard_table(name)
        V = 2 * rr.regular_degree(t) + RODegree({t.real_irreducibles[-1].label: 1})
        chi = t.character_of(V)
        for _, sub, _site in subgroup_sites(name):
            wsite = rr.resolve_weyl_site(t, sub, rr.standard_tables())
            got = rr.fixed_deg(t, sub, wsite.table, V)
            avg = sum(chi[k] for k in sub.members) / Fraction(sub.order)
            assert avg.denominator == 1
            assert got.total_dim(wsite.table.irrep_dims()) == avg, (name, sub.members)


def test_fixed_deg_examples():
    tC4, tC2, tC1 = map(rr.standard_table, ("C4", "C2", "C1"))
    sub = fg.Subgroup(tC4.group, (0, 2))
    assert rr.fixed_deg(tC4, sub, tC2, rr.regular_degree(tC4)) == rr.regular_degree(tC2)
    c2full = fg.Subgroup(tC2.group, (0, 1))
    assert rr.fixed_deg(tC2, c2full, tC1, RODegree({"sgn": 1})) == RODegree.zero()


def test_fixed_regular_is_index_of_normalizer_many_regulars():
    # the fixed-point degree of k*rho_G is k*|G:N(K)|*rho_W(K)
    for name in ("C2", "C3", "C4", "C2xC2", "S3"):
        t = rr.standard_table(name)
        for k in (1, 2):
            for _, sub, _site in subgroup_sites(name):
                wsite = rr.resolve_weyl_site(t, sub, rr.standard_tables())
                got = rr.fixed_deg(t, sub, wsite.table, k * rr.regular_degree(t))
                index = t.group.order // wsite.normalizer.order
                assert got == k * index * rr.regular_degree(wsite.table), (name, sub.members)


def test_epsilon_and_fold_tables():
    expected_eps = {
        ("C1", 3): 2, ("C2", 3): 1, ("C3", 3): 2, ("C4", 3): 1,
        ("C2xC2", 3): 1, ("S3", 3): 1,
        ("C1", 5): 4, ("C2", 5): 2, ("C3", 5): 4,
    }
    for (name, p), want in expected_eps.items():
        assert rr.epsilon(rr.standard_group(name), p) == want
    for name in ("C1", "C2", "C3", "C4", "C2xC2", "S3"):
        G = rr.standard_group(name)
        assert rr.epsilon(G, 2) == 1
        assert rr.orientability_fold(G, 2) == 1
        for p in (3, 5):
            assert rr.orientability_fold(G, p) == (1 if G.order % 2 == 0 else 2)


def test_euler_degree():
    tC2, tC3 = rr.standard_table("C2"), rr.standard_table("C3")
    assert rr.euler_degree(tC2, 2) == rr.regular_degree(tC2)
    assert rr.euler_degree(tC2, 3) == 2 * rr.regular_degree(tC2)
    assert rr.euler_degree(tC3, 3) == 4 * rr.regular_degree(tC3)
    for name in ("C2", "C3", "S3"):
        t = rr.standard_table(name)
        for p in (3, 5):
            fold = rr.orientability_fold(t.group, p)
            assert rr.euler_degree(t, p) == fold * (p - 1) * rr.regular_degree(t)
            assert rr.euler_degree(t, p) == \
                2 * rr.epsilon(t.group, p) * rr.regular_degree(t)


def test_ro_subring_member():
    t = rr.standard_table("C2")
    rho = rr.regular_degree(t)
    assert rr.ro_subring_member(rho, RODegree({"sgn": -3, "1": 7}))
    assert not rr.ro_subring_member(RODegree.integer(1), RODegree({"sgn": 1}))
    assert rr.ro_subring_member(RODegree({"sgn": 1}), RODegree({"sgn": 1}))
    with pytest.raises(rr.TableError):
        rr.ro_subring_member(RODegree({"sgn": -1}), rho)


def test_fixed_components_examples():
    tC2, tC3 = rr.standard_table("C2"), rr.standard_table("C3")
    assert len(rr.fixed_components(tC2, rr.regular_degree(tC2), "projective")) == 2
    assert len(rr.fixed_components(tC3, rr.regular_degree(tC3), "projective")) == 1
    eps = rr.epsilon(tC3.group, 3)
    rhoC = rr.complex_regular_degree(tC3)
    assert len(rr.fixed_components(tC3, eps * rhoC, "lens", 3)) == 3
    with pytest.raises(rr.TableError):
        rr.fixed_components(tC3, rhoC, "lens", 2)


def test_h0_dimension():
    assert rr.h0_dimension(2, False) == 2
    assert rr.h0_dimension(2, True) == 3
    assert rr.h0_dimension(1, False) == 1
