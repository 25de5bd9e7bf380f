"""Subspaces of R^n as exact objects, configurations, and the two
design-verification criteria (zonal-sum vanishing and sigma^t pair averages).

Principal-angle data is never extracted eigenvalue by eigenvalue; only power
sums enter, via traces of small integer matrices, so every verdict stays in Q.
For subspaces p, q with integer bases B_p, B_q and Gram matrices G_p, G_q:

    tr((pi_p pi_q)^t) = tr(W^t) / (det G_p * det G_q)^t,
    W = adj(G_p) * (B_p B_q^T) * adj(G_q) * (B_q B_p^T)

which the pair engine below evaluates in pure integer arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .exactalg import (RatMatrix, Rational, _det_bareiss_int, primitive_int_row,
                       rat_str, rref)
from .zonal import (Partition, ZonalPolynomial, constant_c, jacobi_p,
                    supported_partitions)


class Subspace:
    """An m-dimensional subspace of R^n, held as its canonical RREF basis.

    Canonical form makes equality exact and hashing safe, so configurations
    can deduplicate without any inner-product normalization.
    """

    __slots__ = ("n", "m", "basis", "_intdata")

    def __init__(self, n: int, rows, *, allow_dependent: bool = False):
        mat = rows if isinstance(rows, RatMatrix) else RatMatrix(rows)
        if mat.cols != n:
            raise ValueError(f"rows have {mat.cols} columns, ambient is {n}")
        r, piv, rk = rref(mat)
        if not allow_dependent and rk != mat.rows:
            raise ValueError("basis rows are linearly dependent")
        if rk == 0:
            raise ValueError("subspace must have positive dimension")
        self.n = n
        self.m = rk
        self.basis = RatMatrix([r.row(i) for i in range(rk)])
        self._intdata = None

    @classmethod
    def span(cls, n: int, rows) -> "Subspace":
        return cls(n, rows, allow_dependent=True)

    @classmethod
    def line(cls, vector) -> "Subspace":
        return cls(len(tuple(vector)), [list(vector)])

    def int_data(self):
        """(left rows, right rows, adjugate of Gram, det Gram), all integer.

        The pair engine forms cross matrices as left_i @ right_j^T; for
        ambient subspaces both factors are the primitive integer basis.
        """
        if self._intdata is None:
            rows = [primitive_int_row(self.basis.row(i)) for i in range(self.m)]
            self._intdata = _intdata_from_rows(rows)
        return self._intdata

    def projector(self) -> RatMatrix:
        """Orthogonal projector onto the subspace (symmetric idempotent)."""
        _, b, adj, d = self.int_data()
        n = self.n
        m = self.m
        # B^T adj(G) B / det(G)
        out = [[Fraction(0)] * n for _ in range(n)]
        for a in range(m):
            for c in range(m):
                coef = adj[a][c]
                if coef == 0:
                    continue
                ra, rc = b[a], b[c]
                for i in range(n):
                    if ra[i] == 0:
                        continue
                    w = coef * ra[i]
                    row = out[i]
                    for j in range(n):
                        if rc[j] != 0:
                            row[j] += Fraction(w * rc[j], d)
        return RatMatrix(out)

    def transform(self, q: RatMatrix) -> "Subspace":
        """Image under the linear map with matrix q (vectors as rows * q^T)."""
        return Subspace(self.n, self.basis @ q.transpose())

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __repr__(self):
        return f"Subspace(n={self.n}, m={self.m}, basis={self.basis!r})"

    def to_json(self):
        return self.basis.to_json()


def _intdata_from_rows(rows: Sequence[Tuple[int, ...]]):
    m = len(rows)
    rows = tuple(tuple(r) for r in rows)
    gram = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(m)]
            for i in range(m)]
    return rows, rows, _int_adjugate(gram), _int_det(gram)


def intdata_from_coords(coords: Sequence[Tuple[int, ...]], gram_int) -> tuple:
    """Pair-engine data for subspaces given in lattice coordinates.

    `coords` are integer coordinate rows, `gram_int` the (scaled) integer
    Gram matrix of the ambient basis; sigma values are scale invariant, so
    any positive integer multiple of the true Gram works.
    """
    m = len(coords)
    n = len(gram_int)
    coords = tuple(tuple(r) for r in coords)
    gy = tuple(tuple(sum(coords[i][a] * gram_int[a][b] for a in range(n)
                         if coords[i][a]) for b in range(n)) for i in range(m))
    g = [[sum(gy[i][b] * coords[j][b] for b in range(n) if coords[j][b])
          for j in range(m)] for i in range(m)]
    return gy, coords, _int_adjugate(g), _int_det(g)


def _int_det(mat) -> int:
    return _det_bareiss_int([list(r) for r in mat])


def _int_adjugate(mat) -> tuple:
    m = len(mat)
    if m == 1:
        return ((1,),)
    if m == 2:
        return ((mat[1][1], -mat[0][1]), (-mat[1][0], mat[0][0]))
    adj = []
    for i in range(m):
        row = []
        for j in range(m):
            minor = [[mat[r][c] for c in range(m) if c != i]
                     for r in range(m) if r != j]
            v = _int_det(minor)
            row.append(v if (i + j) % 2 == 0 else -v)
        adj.append(tuple(row))
    return tuple(adj)


def _mul_int(a, b):
    """Product of small integer matrices given as tuples of row tuples."""
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(ra, cb)) for cb in bt) for ra in a)


def _pair_w(data_i, data_j):
    """(tr W, tr W^2, denominator) for an unordered pair of subspaces."""
    li, _, adji, di = data_i
    _, rj, adjj, dj = data_j
    m = len(li)
    if m == 1:
        c = sum(a * b for a, b in zip(li[0], rj[0]))
        w = c * c
        return w, w * w, di * dj
    c = tuple(tuple(sum(a * b for a, b in zip(ra, rb)) for rb in rj) for ra in li)
    t = _mul_int(_mul_int(adji, c), adjj)
    # W = t @ C^T
    w = tuple(tuple(sum(t[a][k] * c[b][k] for k in range(m)) for b in range(m))
              for a in range(m))
    trw = sum(w[a][a] for a in range(m))
    trw2 = sum(w[a][b] * w[b][a] for a in range(m) for b in range(m))
    return trw, trw2, di * dj


@dataclass
class PairStats:
    """Exact sums over all ordered point pairs of a configuration."""

    size: int
    m: int
    sigma_pow: Dict[int, Rational]   # t -> sum of sigma^t, t = 1..3
    power2: Rational                 # sum of second power sums sum(y_i^2)


def _accumulate_chunk(data, start, stride):
    buckets: Dict[int, list] = {}
    n = len(data)
    for i in range(start, n, stride):
        di = data[i]
        for j in range(i + 1, n):
            trw, trw2, den = _pair_w(di, data[j])
            acc = buckets.get(den)
            if acc is None:
                acc = [0, 0, 0, 0]
                buckets[den] = acc
            acc[0] += trw
            acc[1] += trw * trw
            acc[2] += trw * trw * trw
            acc[3] += trw2
    return buckets


def _merge_buckets(dst, src):
    for k, v in src.items():
        if k in dst:
            d = dst[k]
            for i in range(4):
                d[i] += v[i]
        else:
            dst[k] = list(v)
    return dst


def pair_stats(points: Sequence, tmax: int = 3, workers: int = 1) -> PairStats:
    """Sigma-power and power-sum totals over all ordered pairs.

    `points` may be Subspace instances or raw int-data tuples.  Exact; the
    reduction order is irrelevant, so worker count never changes the result.
    """
    data = [p.int_data() if isinstance(p, Subspace) else p for p in points]
    n = len(data)
    m = len(data[0][0])
    if workers > 1 and n >= 64:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as ex:
            futs = [ex.submit(_accumulate_chunk, data, s, workers)
                    for s in range(workers)]
            buckets: Dict[int, list] = {}
            for f in futs:
                _merge_buckets(buckets, f.result())
    else:
        buckets = _accumulate_chunk(data, 0, 1)
    sums = {t: Fraction(0) for t in (1, 2, 3)}
    p2 = Fraction(0)
    for den, acc in buckets.items():
        sums[1] += Fraction(2 * acc[0], den)
        sums[2] += Fraction(2 * acc[1], den * den)
        sums[3] += Fraction(2 * acc[2], den * den * den)
        p2 += Fraction(2 * acc[3], den * den)
    # Diagonal pairs: every principal cosine is 1.
    for t in (1, 2, 3):
        sums[t] += n * Fraction(m) ** t
    p2 += n * Fraction(m)
    return PairStats(size=n, m=m, sigma_pow=sums, power2=p2)


class Configuration:
    """Finite multiset of equal-dimension subspaces of R^n."""

    def __init__(self, n: int, points: Sequence[Subspace]):
        points = list(points)
        if not points:
            raise ValueError("configuration must be nonempty")
        m = points[0].m
        for p in points:
            if p.n != n or p.m != m:
                raise ValueError("all points must share (m, n)")
        self.n = n
        self.m = m
        self.points = points

    @classmethod
    def from_lines(cls, n: int, vectors) -> "Configuration":
        return cls(n, [Subspace.line(v) for v in vectors])

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def multiplicities(self) -> Dict[Subspace, int]:
        out: Dict[Subspace, int] = {}
        for p in self.points:
            out[p] = out.get(p, 0) + 1
        return out

    def deduplicated(self) -> "Configuration":
        return Configuration(self.n, list(self.multiplicities().keys()))

    def to_json_dict(self):
        return {"n": self.n, "m": self.m,
                "points": [p.to_json() for p in self.points]}

    @classmethod
    def from_json_dict(cls, data) -> "Configuration":
        n = int(data["n"])
        m = int(data["m"])
        points = [Subspace(n, RatMatrix.from_json(rows)) for rows in data["points"]]
        cfg = cls(n, points)
        if cfg.m != m:
            raise ValueError(f"declared m={m} but points have dimension {cfg.m}")
        return cfg


def projector(p: Subspace) -> RatMatrix:
    return p.projector()


def principal_power_sums(p: Subspace, q: Subspace, tmax: int) -> List[Rational]:
    """[sum_i y_i^t for t = 1..tmax], y_i the squared principal cosines."""
    if (p.n, p.m) != (q.n, q.m):
        raise ValueError("subspaces must share (m, n)")
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    li, _, adji, di = p.int_data()
    _, rj, adjj, dj = q.int_data()
    m = p.m
    c = tuple(tuple(sum(a * b for a, b in zip(ra, rb)) for rb in rj) for ra in li)
    t_ = _mul_int(_mul_int(adji, c), adjj)
    w = tuple(tuple(sum(t_[a][k] * c[b][k] for k in range(m)) for b in range(m))
              for a in range(m))
    den = di * dj
    out = []
    wp = w
    for t in range(1, tmax + 1):
        tr = sum(wp[a][a] for a in range(m))
        out.append(Fraction(tr, den ** t))
        if t < tmax:
            wp = _mul_int(wp, w)
    return out


def sigma(p: Subspace, q: Subspace) -> Rational:
    """Sum of squared principal cosines between p and q."""
    return principal_power_sums(p, q, 1)[0]


def eval_zonal(mu: Partition, p: Subspace, q: Subspace) -> Rational:
    """Exact zonal polynomial value at the principal-cosine data of (p, q)."""
    if mu.degree > 2:
        raise ValueError("only partitions of degree <= 2 are supported")
    poly = jacobi_p(mu, p.m, p.n)
    if mu.degree == 0:
        return Fraction(1)
    s = principal_power_sums(p, q, 2)
    return poly.evaluate_power_sums(s[0], s[1])


@dataclass(frozen=True)
class TDesignStat:
    average: Rational
    expected: Rational
    is_design: bool


@dataclass
class DesignReport:
    """Per-t sigma^t averages against their invariant values, plus the
    corroborating zonal pair sums (each must be >= 0, and exactly 0 at
    certified strengths)."""

    n: int
    m: int
    size: int
    tmax: int
    t_stats: Dict[int, TDesignStat]
    zonal_sums: Dict[str, Rational]

    def is_design(self, t: int) -> bool:
        return self.t_stats[t].is_design

    def strength(self) -> int:
        """Largest certified t (0 if none)."""
        best = 0
        for t in sorted(self.t_stats):
            if self.t_stats[t].is_design:
                best = t
        return best

    def to_json_dict(self):
        return {
            "n": self.n, "m": self.m, "size": self.size, "tmax": self.tmax,
            "t": {str(t): {"average": rat_str(s.average),
                           "c": rat_str(s.expected),
                           "is_design": s.is_design}
                  for t, s in self.t_stats.items()},
            "zonal_sums": {k: rat_str(v) for k, v in self.zonal_sums.items()},
        }


def _zonal_sum_from_stats(poly: ZonalPolynomial, stats: PairStats) -> Rational:
    n2 = Fraction(stats.size) ** 2
    s1 = stats.sigma_pow[1]
    s1sq = stats.sigma_pow[2]
    q2 = stats.power2
    e2 = (s1sq - q2) / 2
    t = dict(poly.coeffs)
    val = t.get("const", Fraction(0)) * n2 + t.get("p1", Fraction(0)) * s1 \
        + t.get("p2", Fraction(0)) * q2 + t.get("e2", Fraction(0)) * e2
    return val / poly.beta


def verify_design(config: Configuration, tmax: int = 3, workers: int = 1) -> DesignReport:
    """Certify 2t-design status for each t <= tmax by exact pair averages.

    Equality at t forces equality at every t' < t (the sigma^t expansions
    have positive coefficients); this monotonicity is asserted as a
    consistency check, as is nonnegativity of every zonal sum.
    """
    if not 1 <= tmax <= 3:
        raise ValueError("tmax must be between 1 and 3")
    n, m = config.n, config.m
    if 2 * m > n:
        raise ValueError("design criteria require m <= n/2")
    stats = pair_stats(config.points, tmax=tmax, workers=workers)
    size2 = Fraction(len(config)) ** 2
    t_stats = {}
    for t in range(1, tmax + 1):
        avg = stats.sigma_pow[t] / size2
        exp = constant_c(m, n, t)
        t_stats[t] = TDesignStat(avg, exp, avg == exp)
    zsums = {}
    for mu in supported_partitions(m, tmax=min(tmax, 2)):
        val = _zonal_sum_from_stats(jacobi_p(mu, m, n), stats)
        assert val >= 0, f"zonal positivity violated for {mu}"
        zsums[str(mu)] = val
    for t in range(2, tmax + 1):
        if t_stats[t].is_design:
            assert t_stats[t - 1].is_design, "design strengths must be monotone"
    for mu in supported_partitions(m, tmax=min(tmax, 2)):
        t = Partition(*mu.parts).degree
        if t <= tmax and t_stats[t].is_design:
            assert zsums[str(mu)] == 0, "zonal sum must vanish at certified strength"
    return DesignReport(n=n, m=m, size=len(config), tmax=tmax,
                        t_stats=t_stats, zonal_sums=zsums)


def zonal_positivity(config: Configuration, mu: Partition) -> Rational:
    """The exact double zonal sum over the configuration (always >= 0)."""
    if mu.degree > 2:
        raise ValueError("only partitions of degree <= 2 are supported")
    if mu.degree == 0:
        return Fraction(len(config)) ** 2
    stats = pair_stats(config.points, tmax=2)
    return _zonal_sum_from_stats(jacobi_p(mu, config.m, config.n), stats)


def average_sigma_power(config: Configuration, t: int, workers: int = 1) -> Rational:
    """Exact pair average of sigma^t for arbitrary t >= 1.

    For t > 3 this walks pairs individually (used for refutations beyond the
    supported certificate range, e.g. the spherical m = 1 case).
    """
    if t <= 3:
        stats = pair_stats(config.points, tmax=t, workers=workers)
        return stats.sigma_pow[t] / Fraction(len(config)) ** 2
    data = [p.int_data() for p in config.points]
    total = Fraction(0)
    npts = len(data)
    for i in range(npts):
        total += Fraction(config.m) ** t
        for j in range(i + 1, npts):
            trw, _, den = _pair_w(data[i], data[j])
            total += 2 * Fraction(trw ** t, den ** t)
    return total / Fraction(npts) ** 2


def default_workers() -> int:
    env = os.environ.get("GRASSDEX_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)
