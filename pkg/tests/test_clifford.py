import itertools
import random
from fractions import Fraction as F

import pytest

from grassdex.binquad import (IsoSubspace, SigmaSet, enumerate_isotropic,
                              spread)
from grassdex.clifford import (GeneratorSet, OrbitCapExceeded, PauliOp,
                               StabilizerLift, build_design,
                               clifford_generators, eigenspaces,
                               h2_action_coeffs, h2_action_coeffs_from_system,
                               h2_code_matrix, orbit, sigma_pair,
                               tensor_coeffs, tensor_coeffs_from_system,
                               verify_tt)
from grassdex.exactalg import QuadExt, RatMatrix, rref
from grassdex.grassmann import (Subspace, principal_power_sums,
                                verify_design)


def test_pauli_composition_and_square():
    rng = random.Random(3)
    for _ in range(30):
        k = rng.choice([2, 3])
        g = PauliOp(k, rng.randrange(1 << k), rng.randrange(1 << k),
                    rng.choice([1, -1]))
        h = PauliOp(k, rng.randrange(1 << k), rng.randrange(1 << k),
                    rng.choice([1, -1]))
        assert (g * h).matrix() == g.matrix() @ h.matrix()
    g = PauliOp(2, 0b01, 0b01)
    assert (g * g) == PauliOp(2, 0, 0, -1)  # q(v) = 1: squares to -I


def test_pauli_matrices_signed_permutation_orthogonal():
    for k in (1, 2, 3):
        for _ in range(5):
            rng = random.Random(k)
            g = PauliOp(k, rng.randrange(1 << k), rng.randrange(1 << k))
            m = g.matrix()
            assert m @ m.transpose() == RatMatrix.identity(1 << k)
            for j in range(1 << k):
                col = [m[i, j] for i in range(1 << k)]
                assert sorted(map(abs, col)) == [0] * ((1 << k) - 1) + [1]


def test_stabilizer_lift_requires_commuting_isotropic():
    with pytest.raises(ValueError):
        StabilizerLift(IsoSubspace(2, [0b0001, 0b0110]))  # B = 1 on the pair
    lift = StabilizerLift(IsoSubspace(2, [0b0001, 0b0010]))
    # The section is a homomorphism: lift(c1) lift(c2) = lift(c1 xor c2).
    for c1 in range(4):
        for c2 in range(4):
            assert lift.lift(c1) * lift.lift(c2) == lift.lift(c1 ^ c2)


def test_eigenspaces_k1_swap():
    s = IsoSubspace(1, [0b01])
    eigs = eigenspaces(s)
    assert eigs.n == 2 and eigs.m == 1
    assert set(eigs.points) == {Subspace.line([1, 1]), Subspace.line([1, -1])}


def test_eigenspaces_k2_sign_patterns():
    s = IsoSubspace(2, [0b0001, 0b0010])
    eigs = eigenspaces(s)
    expect = {Subspace.line([1, 1, 1, 1]), Subspace.line([1, -1, 1, -1]),
              Subspace.line([1, 1, -1, -1]), Subspace.line([1, -1, -1, 1])}
    assert set(eigs.points) == expect


@pytest.mark.parametrize("k,words", [
    (2, [0b0001]), (2, [0b0001, 0b0010]), (3, [0b000011, 0b000100]),
    (3, [0b001010]),
])
def test_eigenspace_completeness_orthogonality(k, words):
    s = IsoSubspace(k, words)
    eigs = eigenspaces(s).points
    n = 1 << k
    assert len(eigs) == 1 << s.w
    total = RatMatrix.zeros(n, n)
    for e in eigs:
        assert e.m == 1 << (k - s.w)
        total = total + e.projector()
    assert total == RatMatrix.identity(n)
    for a, b in itertools.combinations(eigs, 2):
        assert a.projector() @ b.projector() == RatMatrix.zeros(n, n)
        assert principal_power_sums(a, b, 1)[0] == 0


def test_sigma_pair_examples():
    s = IsoSubspace(2, [0b0001, 0b0010])
    assert sigma_pair(s, 1, s, 1) == 1       # p = p', sigma = 2^s = 1
    assert sigma_pair(s, 0, s, 1) == 0       # same S, different characters
    t = IsoSubspace(2, [0b0100, 0b1000])
    vals = {sigma_pair(s, c1, t, c2) for c1 in range(4) for c2 in range(4)}
    assert vals == {F(1, 4)}                 # s = 0, disjoint: 2^-k


def test_sigma_pair_matches_trace_path():
    for sigma_set in (enumerate_isotropic(2, 1), enumerate_isotropic(2, 2),
                      spread(2, 2)):
        bd = build_design(sigma_set)
        pts = bd.config.points
        for i, (mi, ci) in enumerate(bd.labels):
            for j, (mj, cj) in enumerate(bd.labels):
                fast = sigma_pair(sigma_set.members[mi], ci,
                                  sigma_set.members[mj], cj)
                trace = principal_power_sums(pts[i], pts[j], 1)[0]
                assert fast == trace


def test_build_design_counts():
    bd = build_design(enumerate_isotropic(2, 1))
    assert len(bd.config) == 18 and bd.collisions == 0
    assert bd.config.m == 2 and bd.config.n == 4
    bd33 = build_design(enumerate_isotropic(3, 3))
    assert len(bd33.config) == 240 and bd33.collisions == 0
    assert bd33.config.m == 1


def test_verify_tt_full_sets():
    rep = verify_tt(enumerate_isotropic(2, 1), tmax=3)
    assert all(rep.stats[t].is_design and rep.stats[t].paths_agree
               for t in (1, 2, 3))
    rep22 = verify_tt(enumerate_isotropic(2, 2), tmax=2)
    assert rep22.stats[1].is_design  # always a 2-design
    assert rep22.stats[1].paths_agree and rep22.stats[2].paths_agree


def test_verify_tt_spread_is_4_design():
    rep = verify_tt(spread(2, 2), tmax=2)
    assert rep.stats[1].is_design and rep.stats[2].is_design
    single = SigmaSet(2, 2, (enumerate_isotropic(2, 2).members[0],))
    rep1 = verify_tt(single, tmax=2)
    assert rep1.stats[1].is_design and not rep1.stats[2].is_design
    assert rep1.stats[2].paths_agree


def test_verify_tt_matches_iso_design_check():
    # The 2t verdict on the eigenspace configuration coincides with the
    # intersection-average equality of the underlying set at t - 1.
    import random
    from grassdex.binquad import check_iso_design
    rng = random.Random(41)
    members = list(enumerate_isotropic(2, 2).members)
    for _ in range(8):
        subset = tuple(rng.sample(members, rng.randint(1, len(members))))
        sigma_set = SigmaSet(2, 2, subset)
        rep = verify_tt(sigma_set, tmax=3)
        for t in (2, 3):
            iso = check_iso_design(sigma_set, t - 1)
            assert rep.stats[t].is_design == iso.passes


def test_generators_orthogonal_and_flags():
    for k in (1, 2, 3):
        gs = clifford_generators(k)
        n = 1 << k
        for g in gs:
            assert g.matrix @ g.matrix.transpose() == RatMatrix.identity(n)
        h = next(g for g in gs if g.name == "h_first")
        assert not h.in_gk
        assert any(isinstance(x, QuadExt) for row in h.matrix.entries for x in row)
        if k >= 2:
            h2 = next(g for g in gs if g.name == "h2_first")
            assert h2.in_gk
            nonzero = [x for row in h2.matrix.entries for x in row if x != 0]
            assert all(abs(x) == F(1, 2) for x in nonzero)


def test_generator_diag_pair_example():
    gs = clifford_generators(2)
    dp = next(g for g in gs if g.name == "diag_pair_01")
    assert dp.matrix == RatMatrix.diagonal([1, 1, 1, -1])


def test_orbit_fixed_seed():
    gs = clifford_generators(2)
    perm_only = GeneratorSet(2, tuple(
        g for g in gs if g.name.startswith(("translate", "swap", "cycle",
                                            "transvect"))))
    assert len(orbit(perm_only, Subspace.line([1, 1, 1, 1]), cap=5)) == 1


def test_orbit_k2_minimal_lines():
    from grassdex.lattice import barnes_wall, minimal_sections
    gs = clifford_generators(2)
    o = orbit(gs, Subspace.line([1, 0, 0, 0]), cap=50)
    assert len(o) == 12
    minlines = set(minimal_sections(barnes_wall(2), 1).sections)
    assert set(o.points) == minlines
    assert verify_design(o, tmax=2).is_design(2)


def test_orbit_k3_minimal_lines_6_design():
    gs = clifford_generators(3)
    o = orbit(gs, Subspace.line([1, 1, 0, 0, 0, 0, 0, 0]), cap=120)
    assert len(o) == 120
    assert verify_design(o, tmax=3).is_design(3)


def test_orbit_cap():
    gs = clifford_generators(2)
    with pytest.raises(OrbitCapExceeded):
        orbit(gs, Subspace.line([1, 0, 0, 0]), cap=3)


def test_coeff_closed_forms_match_system():
    for k in (2, 3, 4):
        for r in range(5):
            assert h2_action_coeffs(k, r) == h2_action_coeffs_from_system(k, r)
            assert (h2_action_coeffs(k, r)[0] == 1) == (r in (0, k))


def test_tensor_coeffs_examples():
    assert tensor_coeffs(3, 6, 1)[0] == F(-1, 14)
    assert tensor_coeffs(2, 6, 1)[0] == 1      # r = 2 = k
    assert tensor_coeffs(3, 8, 4)[0] == 1      # r = 0
    assert tensor_coeffs(3, 8, 4) == tensor_coeffs_from_system(3, 8, 4)
    with pytest.raises(ValueError):
        tensor_coeffs(3, 10, 1)
    with pytest.raises(ValueError):
        tensor_coeffs(3, 6, 5)


def extract_distinguished_vector(codes, fixed):
    """The fixed vector normalized to 1 on the length-stabilizing base code
    and 0 on every self-dual coordinate (None if not in the fixed space)."""
    sd = [i for i, c in enumerate(codes) if c.is_self_dual]
    one_idx = next(i for i, c in enumerate(codes) if c.dim == 1)
    rows = [[fixed[i, j] for j in range(fixed.cols)] for i in range(fixed.rows)]
    sys_rows = [[r[one_idx] for r in rows]] + [[r[j] for r in rows] for j in sd]
    rhs = [F(1)] + [F(0)] * len(sd)
    aug = RatMatrix([sys_rows[i] + [rhs[i]] for i in range(len(sys_rows))])
    red, piv, rk = rref(aug)
    if any(p == fixed.rows for p in piv):
        return None
    x = [F(0)] * fixed.rows
    for i, p in enumerate(piv):
        x[p] = red[i, aug.cols - 1]
    return [sum(x[i] * rows[i][j] for i in range(fixed.rows))
            for j in range(fixed.cols)]


def brute_force_code_count(d, max_dim):
    """Oracle: all subspace codes containing the all-ones word inside their
    dual, by exhaustive span enumeration."""
    ones = (1 << d) - 1
    even = [v for v in range(1, 1 << d) if v.bit_count() % 2 == 0]
    seen = {((ones,),)}
    found = {(ones,)}
    frontier = [(ones,)]
    for _ in range(max_dim - 1):
        nxt = []
        for gens in frontier:
            words = set()
            span = {0}
            for g in gens:
                span |= {s ^ g for s in span}
            for v in even:
                if v in span:
                    continue
                if any((v & w).bit_count() % 2 for w in span):
                    continue
                from grassdex.exactalg import bit_rref
                canon, _ = bit_rref(list(gens) + [v], d)
                if canon not in found:
                    found.add(canon)
                    nxt.append(canon)
        frontier = nxt
    return found


def test_code_enumeration_counts():
    codes6, _, _ = h2_code_matrix(3, 6)
    assert len(codes6) == 31
    oracle = brute_force_code_count(6, 3)
    assert {c.generators for c in codes6} == oracle
    dims = [c.dim for c in codes6]
    assert dims == sorted(dims)


def test_code_matrix_upper_triangular_with_a1_diagonal():
    codes, mat, _ = h2_code_matrix(2, 6)
    for i in range(len(codes)):
        for j in range(i):
            assert mat[i, j] == 0
        assert mat[i, i] == h2_action_coeffs(2, 3 - codes[i].dim)[0]


@pytest.mark.parametrize("d,expected_sd", [(2, 1), (4, 3), (6, 15)])
def test_fixed_space_k3_small_degrees(d, expected_sd):
    codes, _, fixed = h2_code_matrix(3, d)
    sd = {i for i, c in enumerate(codes) if c.is_self_dual}
    assert len(sd) == expected_sd
    assert fixed.rows == expected_sd
    for i in range(fixed.rows):
        for j in range(fixed.cols):
            if fixed[i, j] != 0:
                assert j in sd


def test_fixed_space_extra_invariants():
    codes, _, fixed = h2_code_matrix(2, 6)
    sd = [i for i, c in enumerate(codes) if c.is_self_dual]
    assert fixed.rows == len(sd) + 1
    v = extract_distinguished_vector(codes, fixed)
    dim2 = [i for i, c in enumerate(codes) if c.dim == 2 and not c.is_self_dual]
    assert all(v[j] == F(-1, 12) for j in dim2)

    codes8, _, fixed8 = h2_code_matrix(3, 8)
    sd8 = [i for i, c in enumerate(codes8) if c.is_self_dual]
    assert len(sd8) == 135
    assert fixed8.rows == len(sd8) + 1
    v8 = extract_distinguished_vector(codes8, fixed8)
    for dim, coeff in ((2, F(-1, 40)), (3, F(1, 480))):
        idx = [i for i, c in enumerate(codes8)
               if c.dim == dim and not c.is_self_dual]
        assert all(v8[j] == coeff for j in idx)
    assert all(v8[j] == 0 for j in sd8)


def test_code_matrix_unsupported_combination():
    with pytest.raises(ValueError):
        h2_code_matrix(2, 8)  # dim-4 expansions leave the spanning basis
