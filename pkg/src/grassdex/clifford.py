"""Signed-permutation operators indexed by F_2^k x F_2^k, joint-eigenspace
configurations attached to isotropic subspaces, the fast sigma evaluation,
generators of the orthogonal normalizer group and its rational index-2
subgroup, and the code-basis fixed-space machinery.

Operators act on R^n, n = 2^k, with the orthonormal basis (e_u) indexed by
u in F_2^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .binquad import IsoSubspace, SigmaSet
from .exactalg import QuadExt, RatMatrix, Rational, bit_rref, rat_str
from .grassmann import Configuration, Subspace, pair_stats
from .zonal import constant_c


@dataclass(frozen=True)
class PauliOp:
    """sign * X(a)Y(b) acting on e_u as sign * (-1)^(b.u) e_(u+a).

    Composition: X(a)Y(b) X(a')Y(b') = (-1)^(b.a') X(a+a')Y(b+b'), and
    (X(a)Y(b))^2 = (-1)^(a.b) I.
    """

    k: int
    a: int
    b: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.k != other.k:
            raise ValueError("mismatched k")
        phase = -1 if (self.b & other.a).bit_count() & 1 else 1
        return PauliOp(self.k, self.a ^ other.a, self.b ^ other.b,
                       self.sign * other.sign * phase)

    def apply_index(self, u: int) -> Tuple[int, int]:
        """(image index, scalar) of e_u."""
        s = -self.sign if (self.b & u).bit_count() & 1 else self.sign
        return u ^ self.a, s

    def matrix(self) -> RatMatrix:
        n = 1 << self.k
        rows = [[Fraction(0)] * n for _ in range(n)]
        for u in range(n):
            v, s = self.apply_index(u)
            rows[v][u] = Fraction(s)
        return RatMatrix(rows)

    @classmethod
    def from_vector(cls, k: int, v: int, sign: int = 1) -> "PauliOp":
        mask = (1 << k) - 1
        return cls(k, v & mask, v >> k, sign)

    def vector(self) -> int:
        return self.a | (self.b << self.k)


class StabilizerLift:
    """Lift of a totally isotropic subspace into the operator group.

    Each canonical basis row lifts with sign +1; arbitrary elements lift as
    ordered products of the basis lifts.  Isotropy makes the lifts commute
    and square to +I, so the section is a group homomorphism.
    """

    def __init__(self, s: IsoSubspace):
        self.s = s
        self.k = s.k
        self.basis_lifts = [PauliOp.from_vector(s.k, v) for v in s.words]
        for i, g in enumerate(self.basis_lifts):
            if (g.a & g.b).bit_count() & 1:
                raise ValueError("basis vector is not isotropic")
            for h in self.basis_lifts[i + 1:]:
                comm = ((g.b & h.a).bit_count() + (g.a & h.b).bit_count()) & 1
                if comm:
                    raise ValueError("lifts must commute (B must vanish on S)")
        self._cache: Dict[int, PauliOp] = {}

    def lift(self, coeffs: int) -> PauliOp:
        """Group element for the span member with the given coefficient bits."""
        got = self._cache.get(coeffs)
        if got is None:
            got = PauliOp(self.k, 0, 0, 1)
            c = coeffs
            i = 0
            while c:
                if c & 1:
                    got = got * self.basis_lifts[i]
                c >>= 1
                i += 1
            self._cache[coeffs] = got
        return got

    def lift_vector(self, v: int) -> PauliOp:
        coeffs = self.s.coords(v)
        if coeffs is None:
            raise ValueError("vector is not in the subspace")
        return self.lift(coeffs)


_LIFT_CACHE: Dict[IsoSubspace, StabilizerLift] = {}


def stabilizer_lift(s: IsoSubspace) -> StabilizerLift:
    got = _LIFT_CACHE.get(s)
    if got is None:
        got = StabilizerLift(s)
        _LIFT_CACHE[s] = got
    return got


def eigenspaces(s: IsoSubspace) -> Configuration:
    """The joint eigenspace decomposition induced by an isotropic subspace.

    For S of dimension w = k - s there are 2^w characters; each projector
    2^-w sum_v chi(v) g_v has rank 2^s and the images are pairwise
    orthogonal and complete.  Point order follows the character index.
    """
    lift = stabilizer_lift(s)
    k = s.k
    w = s.w
    n = 1 << k
    dim_expected = 1 << (k - w)
    ops = [lift.lift(c) for c in range(1 << w)]
    out = []
    for chi in range(1 << w):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for c, g in enumerate(ops):
            coef = -1 if (chi & c).bit_count() & 1 else 1
            for u in range(n):
                v, sgn = g.apply_index(u)
                rows[v][u] += Fraction(coef * sgn, 1 << w)
        sub = Subspace.span(n, rows)
        if sub.m != dim_expected:
            raise AssertionError("eigenspace has unexpected dimension")
        out.append(sub)
    return Configuration(n, out)


@dataclass
class BuildResult:
    """The eigenspace configuration of a Sigma set, with labels."""

    sigma: SigmaSet
    config: Configuration
    labels: List[Tuple[int, int]]   # (member index, character index)
    collisions: int

    @property
    def s_param(self) -> int:
        return self.sigma.k - self.sigma.w


def build_design(sigma: SigmaSet) -> BuildResult:
    """Multiset union of the eigenspace families over all members."""
    points: List[Subspace] = []
    labels: List[Tuple[int, int]] = []
    for idx, s in enumerate(sigma.members):
        for chi, sub in enumerate(eigenspaces(s).points):
            points.append(sub)
            labels.append((idx, chi))
    config = Configuration(1 << sigma.k, points)
    collisions = len(points) - len(set(points))
    return BuildResult(sigma, config, labels, collisions)


def _agreement_data(s: IsoSubspace, t: IsoSubspace):
    """Per-pair data for the fast sigma path.

    Returns (u, constraints) where u = k - dim(S meet T) and constraints are
    triples (cs, ct, beta): characters chi, chi' agree on the intersection
    iff for every triple, parity(chi & cs) + parity(chi' & ct) == beta.
    """
    inter = [v for v in _span_cached(s) if t.contains(v)]
    basis, _ = bit_rref(inter, 2 * s.k)
    u = s.k - len(basis)
    ls, lt = stabilizer_lift(s), stabilizer_lift(t)
    constraints = []
    for v in basis:
        cs = s.coords(v)
        ct = t.coords(v)
        sign_s = ls.lift(cs).sign
        sign_t = lt.lift(ct).sign
        beta = 0 if sign_s == sign_t else 1
        constraints.append((cs, ct, beta))
    return u, constraints


_SPAN_CACHE: Dict[IsoSubspace, List[int]] = {}


def _span_cached(s: IsoSubspace) -> List[int]:
    got = _SPAN_CACHE.get(s)
    if got is None:
        from .exactalg import bit_span
        got = [v for v in bit_span(s.words) if v]
        _SPAN_CACHE[s] = got
    return got


def sigma_pair(s: IsoSubspace, chi: int, t: IsoSubspace, chi2: int) -> Rational:
    """sigma between eigenspace points without touching their bases.

    Equals 2^(2s - u) when the signed characters agree on the intersection
    (u = k - dim(S meet T)) and 0 otherwise; the diagonal p = p' comes out
    as 2^s automatically.
    """
    if s.k != t.k:
        raise ValueError("mismatched k")
    u, constraints = _agreement_data(s, t)
    for cs, ct, beta in constraints:
        par = ((chi & cs).bit_count() + (chi2 & ct).bit_count()) & 1
        if par != beta:
            return Fraction(0)
    sp = s.k - s.w
    return Fraction(2) ** (2 * sp - u)


@dataclass(frozen=True)
class TTStat:
    average_fast: Rational
    average_trace: Rational
    reduction_rhs: Rational
    expected_c: Rational
    is_design: bool
    paths_agree: bool


@dataclass
class TTReport:
    k: int
    w: int
    s_param: int
    sigma_size: int
    config_size: int
    collisions: int
    stats: Dict[int, TTStat]

    def to_json_dict(self):
        return {
            "k": self.k, "w": self.w, "s": self.s_param,
            "sigma_size": self.sigma_size, "config_size": self.config_size,
            "collisions": self.collisions,
            "t": {str(t): {"average_fast": rat_str(st.average_fast),
                           "average_trace": rat_str(st.average_trace),
                           "reduction_rhs": rat_str(st.reduction_rhs),
                           "c": rat_str(st.expected_c),
                           "is_design": st.is_design,
                           "paths_agree": st.paths_agree}
                  for t, st in self.stats.items()},
        }


def verify_tt(sigma: SigmaSet, tmax: int = 3, workers: int = 1,
              build: Optional[BuildResult] = None) -> TTReport:
    """Verify design strength of the eigenspace configuration three ways.

    For each t <= tmax the sigma^t pair average is computed by the fast
    character path and by the trace path on the explicit subspaces; both are
    compared exactly, checked against the reduction identity
    2^((2s-k)t) * average(|S meet S'|^(t-1)), and judged against the
    invariant constant.
    """
    if not 1 <= tmax <= 3:
        raise ValueError("tmax must be between 1 and 3")
    if build is None:
        build = build_design(sigma)
    k, w = sigma.k, sigma.w
    sp = k - w
    nchars = 1 << w
    members = sigma.members
    nm = len(members)

    # Fast path: per member pair, count agreeing character pairs.
    sums_fast = {t: Fraction(0) for t in range(1, tmax + 1)}
    inter_sums = {t: 0 for t in range(0, tmax)}
    for i in range(nm):
        for j in range(i, nm):
            u, constraints = _agreement_data(members[i], members[j])
            agree = 0
            for chi in range(nchars):
                for chi2 in range(nchars):
                    ok = True
                    for cs, ct, beta in constraints:
                        par = ((chi & cs).bit_count() + (chi2 & ct).bit_count()) & 1
                        if par != beta:
                            ok = False
                            break
                    if ok:
                        agree += 1
            mult = 1 if i == j else 2
            sig = Fraction(2) ** (2 * sp - u)
            isize = 1 << (k - u)
            for t in range(1, tmax + 1):
                sums_fast[t] += mult * agree * sig ** t
            for t in range(0, tmax):
                inter_sums[t] += mult * isize ** t

    npts = Fraction(len(build.config)) ** 2
    nsig = Fraction(nm) ** 2
    stats = pair_stats(build.config.points, tmax=tmax, workers=workers)
    report: Dict[int, TTStat] = {}
    for t in range(1, tmax + 1):
        fast = sums_fast[t] / npts
        trace = stats.sigma_pow[t] / npts
        rhs = Fraction(2) ** ((2 * sp - k) * t) * Fraction(inter_sums[t - 1]) / nsig
        c = constant_c(1 << sp, 1 << k, t)
        report[t] = TTStat(fast, trace, rhs, c,
                           is_design=(fast == c),
                           paths_agree=(fast == trace == rhs))
    return TTReport(k=k, w=w, s_param=sp, sigma_size=nm,
                    config_size=len(build.config), collisions=build.collisions,
                    stats=report)


# -- generators of the operator normalizer group ----------------------------


@dataclass(frozen=True)
class CliffordGenerator:
    name: str
    matrix: RatMatrix
    rational: bool
    in_gk: bool


@dataclass
class GeneratorSet:
    k: int
    elements: Tuple[CliffordGenerator, ...]

    def rational_generators(self) -> List[RatMatrix]:
        return [g.matrix for g in self.elements if g.in_gk]

    def __iter__(self):
        return iter(self.elements)


def _kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    rows = []
    for i in range(a.rows):
        for ib in range(b.rows):
            row = []
            for j in range(a.cols):
                for jb in range(b.cols):
                    row.append(a[i, j] * b[ib, jb])
            rows.append(row)
    return RatMatrix(rows)


def _perm_matrix(k: int, phi) -> RatMatrix:
    n = 1 << k
    rows = [[Fraction(0)] * n for _ in range(n)]
    for u in range(n):
        rows[phi(u)][u] = Fraction(1)
    return RatMatrix(rows)


def _diag_matrix(k: int, q) -> RatMatrix:
    n = 1 << k
    return RatMatrix.diagonal([Fraction(-1) if q(u) else Fraction(1)
                               for u in range(n)])


def clifford_generators(k: int) -> GeneratorSet:
    """Exact generator matrices: diagonal sign maps for quadratic forms,
    affine index permutations, the irrational tensor-factor rotation H and
    its rational two-factor variant H2.

    Every generator is orthogonal, exactly; the `in_gk` flag marks the
    rational subgroup (everything except H).
    """
    if not 1 <= k <= 4:
        raise ValueError("desk scale is k <= 4")
    gens: List[CliffordGenerator] = []
    n = 1 << k
    gens.append(CliffordGenerator(
        "neg_identity", RatMatrix.identity(n).scale(Fraction(-1)), True, True))
    for i in range(k):
        gens.append(CliffordGenerator(
            f"diag_linear_{i}", _diag_matrix(k, lambda u, i=i: (u >> i) & 1),
            True, True))
    for i in range(k):
        for j in range(i + 1, k):
            gens.append(CliffordGenerator(
                f"diag_pair_{i}{j}",
                _diag_matrix(k, lambda u, i=i, j=j: ((u >> i) & (u >> j)) & 1),
                True, True))
    for i in range(k):
        gens.append(CliffordGenerator(
            f"translate_{i}", _perm_matrix(k, lambda u, i=i: u ^ (1 << i)),
            True, True))
    if k >= 2:
        gens.append(CliffordGenerator(
            "swap_01", _perm_matrix(k, lambda u: _swap_bits(u, 0, 1)), True, True))
        gens.append(CliffordGenerator(
            "cycle", _perm_matrix(k, lambda u: _cycle_bits(u, k)), True, True))
        gens.append(CliffordGenerator(
            "transvect_01", _perm_matrix(k, lambda u: u ^ ((u & 1) << 1)),
            True, True))
    half = Fraction(1, 2)
    # h = (1/sqrt 2) [[1, 1], [1, -1]]; sqrt(2)/2 entries live in Q(sqrt 2).
    h_exact = RatMatrix([[QuadExt(0, half), QuadExt(0, half)],
                         [QuadExt(0, half), QuadExt(0, -half)]])
    eye_rest = RatMatrix.identity(1 << (k - 1))
    gens.append(CliffordGenerator("h_first", _kron(h_exact, eye_rest), False, False))
    if k >= 2:
        # h tensor h is rational: (1/2) times a sign matrix.
        sgn = RatMatrix([[1, 1, 1, 1],
                         [1, -1, 1, -1],
                         [1, 1, -1, -1],
                         [1, -1, -1, 1]]).scale(half)
        h2 = _kron(sgn, RatMatrix.identity(1 << (k - 2)))
        gens.append(CliffordGenerator("h2_first", h2, True, True))
    return GeneratorSet(k, tuple(gens))


def _swap_bits(u: int, i: int, j: int) -> int:
    bi = (u >> i) & 1
    bj = (u >> j) & 1
    if bi != bj:
        u ^= (1 << i) | (1 << j)
    return u


def _cycle_bits(u: int, k: int) -> int:
    return ((u << 1) | (u >> (k - 1))) & ((1 << k) - 1)


class OrbitCapExceeded(Exception):
    pass


def orbit(gens: GeneratorSet, seed: Subspace, cap: int = 10_000) -> Configuration:
    """Closure of the seed under the rational generators, deduplicated by
    canonical form.  Raises OrbitCapExceeded beyond `cap` points."""
    mats = []
    for g in gens:
        if not g.in_gk:
            continue
        if any(isinstance(x, QuadExt) for row in g.matrix.entries for x in row):
            raise ValueError("orbit engine requires rational generators")
        mats.append(g.matrix.transpose())
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for sub in frontier:
            for mt in mats:
                img = Subspace(sub.n, sub.basis @ mt)
                if img not in seen:
                    seen.add(img)
                    if len(seen) > cap:
                        raise OrbitCapExceeded(f"orbit exceeds cap {cap}")
                    nxt.append(img)
        frontier = nxt
    points = sorted(seen, key=lambda s: s.basis.to_json())
    return Configuration(seed.n, points)


# -- code-basis coefficients and fixed spaces -------------------------------


def h2_action_coeffs(k: int, r: int) -> Tuple[Rational, Rational, Rational]:
    """Closed-form (a1, a2, a4) for the averaged H2 action, parameters
    (k, r); a1 = 1 exactly when r = 0 or r = k."""
    F = Fraction
    if k < 2 or r < 0:
        raise ValueError("need k >= 2 (two tensor factors) and r >= 0")
    p2r = F(2) ** (2 * r)
    n2 = p2r - 1
    n2m = p2r / 4 - 1
    denom = (F(2) ** k - 1) * (F(2) ** (k - 1) - 1)
    a1 = (1 + 2 * n2 * n2m / denom - 3 * n2 / (F(2) ** k - 1)) / p2r
    a2 = 3 / (p2r * (F(2) ** k - 1)) * (1 - n2m / (F(2) ** (k - 1) - 1))
    a4 = 3 / (p2r * denom)
    return a1, a2, a4


def h2_action_coeffs_from_system(k: int, r: int) -> Tuple[Rational, Rational, Rational]:
    """Solve the three scalar-product equations for (a1, a2, a4) exactly.

    Must agree with the closed forms identically; a singular system is
    flagged (not expected for valid inputs).
    """
    F = Fraction
    p2r = F(2) ** (2 * r)
    n2 = p2r - 1
    n2m = p2r / 4 - 1
    n4 = n2 * n2m / 3
    twok = F(2) ** k
    rows = [
        [F(1), n2, n4],
        [F(1), twok + n2 - 1, n2m * twok + n4 - n2m],
        [F(1), 3 * twok + n2 - 3,
         F(4) ** k + (3 * n2m - 3) * twok + n4 - 3 * n2m + 2],
    ]
    rhs = [1 / p2r, 4 / p2r, 16 / p2r]
    mat = RatMatrix(rows)
    from .exactalg import det as _det, solve_linear
    if _det(mat) == 0:
        raise ValueError("singular coefficient system")
    a1, a2, a4 = solve_linear(mat, rhs)
    return a1, a2, a4


def tensor_coeffs(k: int, d: int, dim_c: int) -> Tuple[Rational, Rational, Rational]:
    """(a1, a2, a4) for a code of length d and dimension dim_c; r = d/2 - dim_c."""
    _validate_code_params(k, d, dim_c)
    return h2_action_coeffs(k, d // 2 - dim_c)


def tensor_coeffs_from_system(k: int, d: int, dim_c: int) -> Tuple[Rational, Rational, Rational]:
    _validate_code_params(k, d, dim_c)
    return h2_action_coeffs_from_system(k, d // 2 - dim_c)


def _validate_code_params(k: int, d: int, dim_c: int):
    if d % 2 != 0 or d < 2 or d > 8:
        raise ValueError("d must be even with 2 <= d <= 8")
    if not 1 <= dim_c <= k + 1:
        raise ValueError("need 1 <= dim_c <= k+1")
    if dim_c > d // 2:
        raise ValueError("self-orthogonal codes need dim <= d/2")


@dataclass(frozen=True)
class CodeInfo:
    """A binary code containing the all-ones word inside its dual."""

    length: int
    dim: int
    generators: Tuple[int, ...]
    words: frozenset

    @property
    def is_self_dual(self) -> bool:
        return 2 * self.dim == self.length


def _enumerate_codes(d: int, max_dim: int) -> List[CodeInfo]:
    """All codes 1 <= C <= C-perp of length d with dim <= max_dim, by
    exhaustive RREF extension, ordered by increasing dimension."""
    ones = (1 << d) - 1
    base = CodeInfo(d, 1, (ones,), frozenset((0, ones)))
    by_dim: List[List[CodeInfo]] = [[base]]
    seen = {base.generators}
    for dim in range(2, max_dim + 1):
        level: List[CodeInfo] = []
        for code in by_dim[-1]:
            for v in range(1, ones):
                if v in code.words:
                    continue
                if v.bit_count() & 1:
                    continue
                if any((v & w).bit_count() & 1 for w in code.generators):
                    continue
                words, _ = bit_rref(list(code.generators) + [v], d)
                key = tuple(words)
                if key in seen:
                    continue
                seen.add(key)
                full = frozenset(x ^ y for x in code.words for y in (0, v))
                level.append(CodeInfo(d, dim, key, full))
        if not level:
            break
        by_dim.append(sorted(level, key=lambda c: c.generators))
    out: List[CodeInfo] = []
    for level in by_dim:
        out.extend(sorted(level, key=lambda c: c.generators))
    return out


def h2_code_matrix(k: int, d: int):
    """The averaged-H2 action on the code basis and its exact fixed space.

    Returns (codes, matrix, fixed) with codes ordered by increasing
    dimension, matrix upper triangular with a1 diagonal entries, and fixed a
    RatMatrix whose rows are coefficient vectors of the fixed space.
    """
    if d % 2 != 0 or d < 2 or d > 8:
        raise ValueError("d must be even with 2 <= d <= 8")
    if k > 3:
        raise ValueError("desk scale is k <= 3")
    if d // 2 > k + 1:
        raise ValueError(f"unsupported: index-4 extensions leave the basis "
                         f"(need d/2 <= k+1, got d={d}, k={k})")
    codes = _enumerate_codes(d, min(k + 1, d // 2))
    ncodes = len(codes)
    coeffs = {dim: h2_action_coeffs(k, d // 2 - dim)
              for dim in sorted({c.dim for c in codes})}
    mat = [[Fraction(0)] * ncodes for _ in range(ncodes)]
    for i, ci in enumerate(codes):
        a1, a2, a4 = coeffs[ci.dim]
        mat[i][i] = a1
        for j in range(i + 1, ncodes):
            cj = codes[j]
            if cj.dim == ci.dim + 1 and ci.words <= cj.words:
                mat[i][j] = a2
            elif cj.dim == ci.dim + 2 and ci.words <= cj.words:
                mat[i][j] = a4
    matrix = RatMatrix(mat)
    fixed = _triangular_fixed_space(mat)
    return codes, matrix, fixed


def _triangular_fixed_space(mat) -> RatMatrix:
    """Kernel of (M^T - I) for upper-triangular M, by forward substitution.

    Coordinates are processed in increasing index order; indices with unit
    diagonal spawn free parameters, other coordinates are determined, and
    inconsistent rows eliminate parameters.
    """
    n = len(mat)
    exprs: List[Dict[int, Fraction]] = []
    nparams = 0
    for j in range(n):
        s: Dict[int, Fraction] = {}
        for i in range(j):
            mij = mat[i][j]
            if mij:
                for p, c in exprs[i].items():
                    s[p] = s.get(p, Fraction(0)) + mij * c
        s = {p: c for p, c in s.items() if c}
        if mat[j][j] != 1:
            f = 1 / (1 - mat[j][j])
            exprs.append({p: c * f for p, c in s.items()})
            continue
        if s:
            # Constraint s == 0: eliminate the highest-index free parameter.
            pivot = max(s)
            pc = s.pop(pivot)
            repl = {p: -c / pc for p, c in s.items()}
            for e in exprs:
                if pivot in e:
                    c0 = e.pop(pivot)
                    for p, c in repl.items():
                        e[p] = e.get(p, Fraction(0)) + c0 * c
            for e in exprs:
                for p in [p for p, c in e.items() if not c]:
                    del e[p]
        exprs.append({nparams: Fraction(1)})
        nparams += 1
    live = sorted({p for e in exprs for p in e})
    basis = []
    for p in live:
        basis.append([e.get(p, Fraction(0)) for e in exprs])
    if not basis:
        return RatMatrix.zeros(0, n)
    from .exactalg import rref as _rref
    r, _, rk = _rref(RatMatrix(basis))
    return RatMatrix([r.row(i) for i in range(rk)])
