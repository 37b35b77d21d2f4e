import itertools
import json

import pytest

from eulercalc import fingroup as fg


def brute_force_subgroups(G):
    """Independent oracle: subset closure check over all subsets (tiny groups)."""
    out = []
    for r in range(1, G.order + 1):
        for combo in itertools.combinations(range(G.order), r):
            s = set(combo)
            if G.identity not in s:
                continue
            if all(G.mul(a, b) in s and G.inv(a) in s for a in s for b in s):
                out.append(tuple(sorted(s)))
    return sorted(out)


def test_s3_subgroups_against_brute_force():
    S3 = fg.FiniteGroup.symmetric(3)
    oracle = brute_force_subgroups(S3)
    # frozen from the oracle: 1 trivial, 3 transposition copies, 1 C3, S3
    assert sorted(len(s) for s in oracle) == [1, 2, 2, 2, 3, 6]
    got = {s.members for s in fg.all_subgroups(S3)}
    assert got == set(oracle)
    reps = fg.subgroups_up_to_conjugacy(S3)
    assert [s.order for s in reps] == [1, 2, 3, 6]


def test_prime_order_and_cyclic_lattice():
    C2 = fg.FiniteGroup.cyclic(2)
    assert [s.order for s in fg.subgroups_up_to_conjugacy(C2)] == [1, 2]
    C4 = fg.FiniteGroup.cyclic(4)
    assert [s.order for s in fg.subgroups_up_to_conjugacy(C4)] == [1, 2, 4]


def test_conjugacy_representatives_are_lex_least():
    S3 = fg.FiniteGroup.symmetric(3)
    reps = fg.subgroups_up_to_conjugacy(S3)
    two = [s for s in reps if s.order == 2]
    assert len(two) == 1
    orbit = []
    for g in range(S3.order):
        orbit.append(tuple(sorted(S3.conj(g, x) for x in two[0].members)))
    assert two[0].members == min(orbit)


def test_size_bound_rejected():
    with pytest.raises(fg.SizeError):
        fg.all_subgroups(fg.FiniteGroup.symmetric(5))


def test_weyl_groups():
    C4 = fg.FiniteGroup.cyclic(4)
    K = fg.Subgroup(C4, (0, 2))
    assert fg.weyl(C4, K).order == 2          # abelian: W = G/K
    S3 = fg.FiniteGroup.symmetric(3)
    k2 = [s for s in fg.subgroups_up_to_conjugacy(S3) if s.order == 2][0]
    # oracle: brute-force normalizer
    norm = [g for g in range(S3.order)
            if {S3.conj(g, x) for x in k2.members} == set(k2.members)]
    assert len(norm) == 2                      # frozen: N(C2) = C2 in S3
    assert fg.weyl(S3, k2).order == 1
    triv = fg.Subgroup(S3, (S3.identity,))
    W = fg.weyl(S3, triv)
    assert W.order == S3.order
    assert fg.find_isomorphism(W, S3) is not None


def test_weyl_order_formula_everywhere():
    for G in (fg.FiniteGroup.cyclic(4), fg.FiniteGroup.symmetric(3),
              fg.FiniteGroup.direct_product(fg.FiniteGroup.cyclic(2),
                                            fg.FiniteGroup.cyclic(2))):
        for K in fg.subgroups_up_to_conjugacy(G):
            N = fg.normalizer(G, K)
            assert fg.weyl(G, K).order * K.order == N.order


def test_wreath_embedding_2_2():
    emb = fg.wreath_embedding(2, 2)
    assert emb.source.order == 8               # 2^2 * 2
    assert emb.target.order == 24
    assert emb.is_injective()
    assert emb.is_homomorphism()


@pytest.mark.parametrize("m,n", [(1, 3), (3, 1), (1, 2), (2, 1)])
def test_wreath_identity_cases(m, n):
    emb = fg.wreath_embedding(m, n)
    k = max(m, n)
    import math
    assert emb.source.order == math.factorial(m) ** n * math.factorial(n)
    assert emb.source.order == math.factorial(k)
    assert emb.is_injective() and emb.is_homomorphism()
    # the image is all of the target symmetric group
    assert len(set(emb.images)) == emb.target.order


def test_wreath_size_bound():
    with pytest.raises(fg.SizeError):
        fg.wreath_embedding(3, 3)


def test_cyclic_embedding_and_sign():
    for p in (2, 3, 5):
        emb = fg.cyclic_embedding(p)
        assert emb.is_homomorphism() and emb.is_injective()
        sgn = fg.sign_hom(p)
        comp = sgn.compose(emb)
        gen_image = comp.images[1]
        # oracle: the sign of a p-cycle is (-1)^(p-1)
        expected = 0 if (p - 1) % 2 == 0 else 1
        assert gen_image == expected
        in_kernel = all(x == 0 for x in comp.images)
        assert in_kernel == (p % 2 == 1)


def test_all_produced_homs_are_homomorphisms():
    homs = [fg.wreath_embedding(2, 2), fg.cyclic_embedding(3), fg.cyclic_embedding(5),
            fg.sign_hom(3), fg.sign_hom(4)]
    for h in homs:
        assert h.source.order <= 64
        assert h.is_homomorphism()


def test_group_loader_roundtrip(tmp_path):
    S3 = fg.FiniteGroup.symmetric(3)
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({
        "name": "S3", "order": 6,
        "mul_table": [[S3.mul(a, b) for b in range(6)] for a in range(6)],
    }))
    G = fg.load_group(str(path))
    assert G.order == 6 and not G.is_abelian()


def test_group_loader_perm_generators():
    G = fg.load_group({"name": "S3gen", "degree": 3,
                       "perm_generators": [[[0, 1]], [[0, 1, 2]]]})
    assert G.order == 6
    assert fg.find_isomorphism(G, fg.FiniteGroup.symmetric(3)) is not None


def test_group_loader_diagnostics(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "X",\n  "order": }')
    with pytest.raises(fg.GroupError) as err:
        fg.load_group(str(path))
    assert "line 2" in str(err.value)
    with pytest.raises(fg.GroupError):
        fg.load_group({"name": "broken", "order": 3,
                       "mul_table": [[0, 1], [1, 0]]})


def test_bad_table_rejected():
    # a latin square that is not associative
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(fg.GroupError):
        fg.FiniteGroup("loop5", mul_table=table)


def test_isomorphism_search():
    C4 = fg.FiniteGroup.cyclic(4)
    V4 = fg.FiniteGroup.direct_product(fg.FiniteGroup.cyclic(2),
                                       fg.FiniteGroup.cyclic(2))
    assert fg.find_isomorphism(C4, V4) is None
    iso = fg.find_isomorphism(V4, V4)
    assert iso is not None and iso.is_homomorphism() and iso.is_injective()
