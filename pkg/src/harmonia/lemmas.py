"""Brute-force oracles for the Diophantine lemmas behind the tuple bounds.

Each check takes one fully explicit instance, evaluates the lemma hypotheses
and conclusion in exact arithmetic, and reports both.  The grid scanners
enumerate every instance inside small parameter boxes and confirm that no
instance satisfies the hypotheses while violating the conclusion.

The two sum-form lemmas (CLI names hb1 and hb2) share their shape: k summands
b_i/a_i, each damped by a subset of R factors derived from a nondecreasing
sequence m_1 <= ... <= m_R, with the hypothesis pair "full sum on one side of
1, sum without the last factor on the other side".  hb1 uses factors
(1 - 1/m_j) and bounds a * prod(m_j); hb2 uses the reciprocal factors and
bounds a * prod(m_j - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, prod
from typing import Callable, Iterator, Sequence

from harmonia.arith import factorize, sigma_of
from harmonia.bounds import tower
from harmonia.classify import is_anarchy, is_harmonious

DEFAULT_BUDGET = 10**8


class BudgetExceeded(ValueError):
    """Instance enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class DiophantineInstance:
    """One explicit instance: k classes, R factor slots, coefficients a, b.

    partition[j] is the 0-based class that factor slot j+1 belongs to; empty
    classes are allowed.
    """

    k: int
    R: int
    m: tuple[int, ...]
    partition: tuple[int, ...]
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or self.R < 1:
            raise ValueError("need k >= 1 and R >= 1")
        if len(self.m) != self.R or len(self.partition) != self.R:
            raise ValueError("m and partition must have length R")
        if len(self.a) != self.k or len(self.b) != self.k:
            raise ValueError("a and b must have length k")
        if any(m < 2 for m in self.m):
            raise ValueError("need m_j >= 2")
        if any(x > y for x, y in zip(self.m, self.m[1:])):
            raise ValueError("m must be nondecreasing")
        if any(c < 0 or c >= self.k for c in self.partition):
            raise ValueError("partition entries must be class indices below k")
        if any(x < 1 for x in self.a) or any(x < 1 for x in self.b):
            raise ValueError("coefficients must be >= 1")


@dataclass
class LemmaVerdict:
    """hypotheses_hold and, when they do, whether the conclusion held too."""

    hypotheses_hold: bool
    conclusion_holds: bool | None
    witnesses: dict[str, Fraction | int] = field(default_factory=dict)
    reason: str | None = None
    remark_holds: bool | None = None

    @property
    def counterexample(self) -> bool:
        return self.hypotheses_hold and self.conclusion_holds is False


def _sum_with_factors(
    inst_m: Sequence[int],
    partition: Sequence[int],
    a: Sequence[int],
    b: Sequence[int],
    upto: int,
    reciprocal: bool,
) -> tuple[int, int]:
    """Exact (num, den) of sum_i (b_i/a_i) * prod of factors for slots <= upto.

    Direct factors are (m_j - 1)/m_j, reciprocal ones m_j/(m_j - 1).
    """
    k = len(a)
    t_num = list(b)
    t_den = list(a)
    for j in range(upto):
        i = partition[j]
        if reciprocal:
            t_num[i] *= inst_m[j]
            t_den[i] *= inst_m[j] - 1
        else:
            t_num[i] *= inst_m[j] - 1
            t_den[i] *= inst_m[j]
    num, den = 0, 1
    for i in range(k):
        num = num * t_den[i] + t_num[i] * den
        den *= t_den[i]
    return num, den


def check_hb1(inst: DiophantineInstance) -> LemmaVerdict:
    """Sum-form lemma, direct factors.

    Hypotheses: a_i >= b_i, full damped sum <= 1, sum without the last slot
    > 1.  Conclusion: a * prod(m_j) <= tower(R, a + 1) with a = prod(a_i).
    """
    if any(x < y for x, y in zip(inst.a, inst.b)):
        return LemmaVerdict(False, None, reason="requires a_i >= b_i for every class")
    fn, fd = _sum_with_factors(inst.m, inst.partition, inst.a, inst.b, inst.R, False)
    pn, pd = _sum_with_factors(inst.m, inst.partition, inst.a, inst.b, inst.R - 1, False)
    hyp = fn <= fd and pn > pd
    a = prod(inst.a)
    lhs = a * prod(inst.m)
    rhs = tower(inst.R, a + 1)
    return LemmaVerdict(
        hypotheses_hold=hyp,
        conclusion_holds=(lhs <= rhs) if hyp else None,
        witnesses={
            "sum_full": Fraction(fn, fd),
            "sum_partial": Fraction(pn, pd),
            "lhs": lhs,
            "rhs": rhs,
        },
    )


def check_hb2(inst: DiophantineInstance) -> LemmaVerdict:
    """Sum-form lemma, reciprocal factors.

    Hypotheses: full boosted sum >= 1, sum without the last slot < 1.
    Conclusion: a * prod(m_j - 1) <= tower(R, a).  The verdict also records
    whether a_i > b_i held for every class (the hypotheses force it).
    """
    fn, fd = _sum_with_factors(inst.m, inst.partition, inst.a, inst.b, inst.R, True)
    pn, pd = _sum_with_factors(inst.m, inst.partition, inst.a, inst.b, inst.R - 1, True)
    hyp = fn >= fd and pn < pd
    a = prod(inst.a)
    lhs = a * prod(m - 1 for m in inst.m)
    rhs = tower(inst.R, a)
    return LemmaVerdict(
        hypotheses_hold=hyp,
        conclusion_holds=(lhs <= rhs) if hyp else None,
        witnesses={
            "sum_full": Fraction(fn, fd),
            "sum_partial": Fraction(pn, pd),
            "lhs": lhs,
            "rhs": rhs,
        },
        remark_holds=all(x > y for x, y in zip(inst.a, inst.b)),
    )


def check_cook(x: Sequence[Fraction | int], y: Sequence[Fraction | int]) -> LemmaVerdict:
    """Majorized-sequence product comparison.

    Hypothesis: prefix products of x never exceed those of y.  Conclusions:
    prod(1 - 1/x_i) <= prod(1 - 1/y_i), prod(1 + 1/x_i) >= prod(1 + 1/y_i),
    and equality in either happens only for identical sequences.
    """
    xs = [Fraction(v) for v in x]
    ys = [Fraction(v) for v in y]
    if len(xs) != len(ys) or not xs:
        raise ValueError("need two sequences of equal positive length")
    for seq in (xs, ys):
        if any(v <= 1 for v in seq):
            raise ValueError("entries must be > 1")
        if any(u > v for u, v in zip(seq, seq[1:])):
            raise ValueError("sequences must be nondecreasing")
    hyp = True
    px = py = Fraction(1)
    for u, v in zip(xs, ys):
        px *= u
        py *= v
        if px > py:
            hyp = False
            break
    minus_x = prod((1 - 1 / v for v in xs), start=Fraction(1))
    minus_y = prod((1 - 1 / v for v in ys), start=Fraction(1))
    plus_x = prod((1 + 1 / v for v in xs), start=Fraction(1))
    plus_y = prod((1 + 1 / v for v in ys), start=Fraction(1))
    concl = None
    if hyp:
        equal_ok = (minus_x != minus_y and plus_x != plus_y) or xs == ys
        concl = minus_x <= minus_y and plus_x >= plus_y and equal_ok
    return LemmaVerdict(
        hypotheses_hold=hyp,
        conclusion_holds=concl,
        witnesses={
            "minus_x": minus_x,
            "minus_y": minus_y,
            "plus_x": plus_x,
            "plus_y": plus_y,
        },
    )


def check_pre_cook(
    x1: Fraction | int, x2: Fraction | int, alpha: Fraction
) -> LemmaVerdict:
    """Two-point spreading: replacing (x1, x2) by (x1*alpha, x2/alpha) with
    0 < alpha < 1 strictly lowers the (1 - 1/.) product and strictly raises
    the (1 + 1/.) product."""
    x1 = Fraction(x1)
    x2 = Fraction(x2)
    alpha = Fraction(alpha)
    if not 0 < x1 <= x2:
        raise ValueError("need 0 < x1 <= x2")
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    minus_orig = (1 - 1 / x1) * (1 - 1 / x2)
    minus_spread = (1 - 1 / (x1 * alpha)) * (1 - 1 / (x2 / alpha))
    plus_orig = (1 + 1 / x1) * (1 + 1 / x2)
    plus_spread = (1 + 1 / (x1 * alpha)) * (1 + 1 / (x2 / alpha))
    return LemmaVerdict(
        hypotheses_hold=True,
        conclusion_holds=minus_orig > minus_spread and plus_orig < plus_spread,
        witnesses={
            "minus_orig": minus_orig,
            "minus_spread": minus_spread,
            "plus_orig": plus_orig,
            "plus_spread": plus_spread,
        },
    )


def _unitary_divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        q = p**e
        out += [d * q for d in out]
    return sorted(out)


def check_divisibility(
    members: Sequence[int],
    unitary_parts: Sequence[int],
    prime_set: Sequence[int],
) -> LemmaVerdict:
    """For an anarchy harmonious tuple split as M_i = U_i * V_i with U_i a
    unitary divisor and prod(U_i) > 1, the damped sum over the V_i never
    lands exactly on 1."""
    if len(unitary_parts) != len(members):
        raise ValueError("one unitary part per member")
    if not is_harmonious(members)[0] or not is_anarchy(members):
        raise ValueError("members must form an anarchy harmonious tuple")
    u_product = 1
    for m, u in zip(members, unitary_parts):
        if u < 1 or m % u != 0 or gcd(u, m // u) != 1:
            raise ValueError(f"{u} is not a unitary divisor of {m}")
        u_product *= u
    if u_product <= 1:
        raise ValueError("need prod(U_i) > 1")
    u_primes = {p for p, _ in factorize(u_product)}
    if not set(prime_set) <= u_primes:
        raise ValueError("prime_set must consist of primes of prod(U_i)")
    total = Fraction(0)
    for m, u in zip(members, unitary_parts):
        v = m // u
        term = Fraction(v, sigma_of(factorize(v)))
        for p in prime_set:
            if u % p == 0:
                term *= Fraction(p - 1, p)
        total += term
    return LemmaVerdict(
        hypotheses_hold=True,
        conclusion_holds=total != 1,
        witnesses={"sum": total},
    )


# --- exhaustive enumeration -------------------------------------------------


def instance_count(k: int, R: int, m_max: int, coef_max: int) -> int:
    """Closed-form size of the (k, R) instance stratum."""
    m_choices = comb(m_max - 2 + R, R)  # nondecreasing length-R over {2..m_max}
    return k**R * m_choices * coef_max ** (2 * k)


def _nondecreasing(length: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _nondecreasing(length - 1, first, hi):
            yield (first, *rest)


def _tuples(length: int, lo: int, hi: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _tuples(length - 1, lo, hi):
            yield (first, *rest)


def _raw_instances(
    k: int, R: int, m_max: int, coef_max: int
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """(partition, m, a, b) tuples in lexicographic order, no validation."""
    partitions = list(_tuples(R, 0, k - 1))
    m_seqs = list(_nondecreasing(R, 2, m_max))
    coefs = list(_tuples(k, 1, coef_max))
    for partition in partitions:
        for m in m_seqs:
            for a in coefs:
                for b in coefs:
                    yield partition, m, a, b


def enumerate_instances(
    k: int,
    R: int,
    m_max: int,
    coef_max: int,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[DiophantineInstance]:
    """Every instance of the exact (k, R) stratum, lexicographic, validated."""
    if m_max < 2 or coef_max < 1:
        raise ValueError("need m_max >= 2 and coef_max >= 1")
    estimate = instance_count(k, R, m_max, coef_max)
    if estimate > budget:
        raise BudgetExceeded(
            f"stratum (k={k}, R={R}, m_max={m_max}, coef_max={coef_max}) has "
            f"{estimate} instances, over the budget of {budget}"
        )
    for partition, m, a, b in _raw_instances(k, R, m_max, coef_max):
        yield DiophantineInstance(k=k, R=R, m=m, partition=partition, a=a, b=b)


@dataclass
class GridReport:
    """Outcome of an exhaustive scan over a parameter box."""

    lemma: str
    limits: dict[str, int]
    instances: int
    hypotheses_held: int
    counterexamples: list
    conclusion_equalities: int = 0
    remark_violations: int = 0

    @property
    def clean(self) -> bool:
        return not self.counterexamples and self.remark_violations == 0


def scan_hb_grid(
    lemma: str,
    k_max: int,
    R_max: int,
    m_max: int,
    coef_max: int,
    *,
    budget: int = DEFAULT_BUDGET,
    witness_sink: Callable[[dict], None] | None = None,
) -> GridReport:
    """Exhaustive scan of one sum-form lemma over all strata k <= k_max,
    R <= R_max.  Uses the same exact integer arithmetic as the per-instance
    checks, inlined to keep millions of instances affordable."""
    if lemma not in ("hb1", "hb2"):
        raise ValueError(f"unknown sum-form lemma {lemma!r}")
    reciprocal = lemma == "hb2"
    total = 0
    for k in range(1, k_max + 1):
        for R in range(1, R_max + 1):
            total += instance_count(k, R, m_max, coef_max)
    if total > budget:
        raise BudgetExceeded(f"grid holds {total} instances, over budget {budget}")

    seen = 0
    held = 0
    equalities = 0
    remark_bad = 0
    bad: list = []
    for k in range(1, k_max + 1):
        for R in range(1, R_max + 1):
            for partition, m, a, b in _raw_instances(k, R, m_max, coef_max):
                seen += 1
                if not reciprocal and any(x < y for x, y in zip(a, b)):
                    continue
                fn, fd = _sum_with_factors(m, partition, a, b, R, reciprocal)
                if reciprocal:
                    if fn < fd:
                        continue
                    pn, pd = _sum_with_factors(m, partition, a, b, R - 1, reciprocal)
                    if pn >= pd:
                        continue
                else:
                    if fn > fd:
                        continue
                    pn, pd = _sum_with_factors(m, partition, a, b, R - 1, reciprocal)
                    if pn <= pd:
                        continue
                held += 1
                a_prod = prod(a)
                if reciprocal:
                    lhs = a_prod * prod(v - 1 for v in m)
                    rhs = tower(R, a_prod)
                    if not all(x > y for x, y in zip(a, b)):
                        remark_bad += 1
                else:
                    lhs = a_prod * prod(m)
                    rhs = tower(R, a_prod + 1)
                if lhs == rhs:
                    equalities += 1
                if lhs > rhs:
                    bad.append(DiophantineInstance(k, R, m, partition, a, b))
                if witness_sink is not None:
                    witness_sink(
                        {
                            "k": k,
                            "R": R,
                            "m": list(m),
                            "partition": list(partition),
                            "a": list(a),
                            "b": list(b),
                            "lhs": lhs,
                            "rhs": rhs,
                        }
                    )
    return GridReport(
        lemma=lemma,
        limits={"k_max": k_max, "R_max": R_max, "m_max": m_max, "coef_max": coef_max},
        instances=seen,
        hypotheses_held=held,
        counterexamples=bad,
        conclusion_equalities=equalities,
        remark_violations=remark_bad,
    )


def rational_grid(value_max: int, den_max: int) -> list[Fraction]:
    """All reduced rationals in (1, value_max] with denominator <= den_max."""
    vals = {
        Fraction(n, d)
        for d in range(1, den_max + 1)
        for n in range(d + 1, value_max * d + 1)
    }
    return sorted(v for v in vals if v > 1)


def scan_cook_grid(k_max: int, value_max: int = 6, den_max: int = 4) -> GridReport:
    """All pairs of nondecreasing sequences (length <= k_max) over the
    rational grid; vectorized over int64 cross products.

    Bounds: values <= value_max <= 6 with den <= 4 keep every numerator and
    denominator product below 24^3, so the int64 cross multiplications stay
    far from overflow.
    """
    import numpy as np

    # every factor of any product below is at most (value_max + 1) * den_max
    # in absolute value, and cross multiplication pairs two k-fold products
    per_factor = (value_max + 1) * den_max
    if per_factor ** (2 * k_max) >= 1 << 62:
        raise ValueError("grid values too large for the int64 fast path")
    values = rational_grid(value_max, den_max)
    nums = [v.numerator for v in values]
    dens = [v.denominator for v in values]

    seen = 0
    held = 0
    equalities = 0
    bad: list = []
    for k in range(1, k_max + 1):
        seqs = list(_nondecreasing(k, 0, len(values) - 1))
        S = len(seqs)
        pref_n = np.empty((S, k), dtype=np.int64)
        pref_d = np.empty((S, k), dtype=np.int64)
        minus_n = np.empty(S, dtype=np.int64)
        minus_d = np.empty(S, dtype=np.int64)
        plus_n = np.empty(S, dtype=np.int64)
        plus_d = np.empty(S, dtype=np.int64)
        for s, seq in enumerate(seqs):
            pn = pd = 1
            mn = md = 1
            ln = ld = 1
            for pos, vi in enumerate(seq):
                pn *= nums[vi]
                pd *= dens[vi]
                pref_n[s, pos] = pn
                pref_d[s, pos] = pd
                mn *= nums[vi] - dens[vi]
                md *= nums[vi]
                ln *= nums[vi] + dens[vi]
                ld *= nums[vi]
            minus_n[s] = mn
            minus_d[s] = md
            plus_n[s] = ln
            plus_d[s] = ld

        seen += S * S
        for sx in range(S):
            # hypothesis: every prefix product of x is <= that of y
            ok = np.ones(S, dtype=bool)
            for pos in range(k):
                ok &= pref_n[sx, pos] * pref_d[:, pos] <= pref_n[:, pos] * pref_d[sx, pos]
            idx = np.nonzero(ok)[0]
            held += len(idx)
            # conclusions, cross-multiplied
            m_lhs = minus_n[sx] * minus_d[idx]
            m_rhs = minus_n[idx] * minus_d[sx]
            p_lhs = plus_n[sx] * plus_d[idx]
            p_rhs = plus_n[idx] * plus_d[sx]
            minus_le = m_lhs <= m_rhs
            plus_ge = p_lhs >= p_rhs
            eq_somewhere = (m_lhs == m_rhs) | (p_lhs == p_rhs)
            identical = idx == sx
            equalities += int(np.count_nonzero(eq_somewhere & identical))
            violation = ~minus_le | ~plus_ge | (eq_somewhere & ~identical)
            for sy in idx[np.nonzero(violation)[0]]:
                bad.append(
                    (
                        tuple(values[i] for i in seqs[sx]),
                        tuple(values[i] for i in seqs[int(sy)]),
                    )
                )
    return GridReport(
        lemma="cook",
        limits={"k_max": k_max, "value_max": value_max, "den_max": den_max},
        instances=seen,
        hypotheses_held=held,
        counterexamples=bad,
        conclusion_equalities=equalities,
    )


def scan_pre_cook_grid(
    values: Sequence[Fraction] | None = None,
    alphas: Sequence[Fraction] | None = None,
) -> GridReport:
    """Strict spreading inequalities over a small rational box."""
    if values is None:
        values = [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
    if alphas is None:
        alphas = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    seen = 0
    bad: list = []
    for i, x1 in enumerate(values):
        for x2 in values[i:]:
            for alpha in alphas:
                seen += 1
                verdict = check_pre_cook(x1, x2, alpha)
                if verdict.counterexample:
                    bad.append((x1, x2, alpha))
    return GridReport(
        lemma="precook",
        limits={"values": len(values), "alphas": len(alphas)},
        instances=seen,
        hypotheses_held=seen,
        counterexamples=bad,
    )


def scan_divisibility_grid(members: Sequence[int]) -> GridReport:
    """Every unitary split of every member times every subset of the primes
    of the removed part."""
    from itertools import product as iproduct

    unit_lists = [_unitary_divisors(m) for m in members]
    seen = 0
    bad: list = []
    for parts in iproduct(*unit_lists):
        u_product = prod(parts)
        if u_product <= 1:
            continue
        u_primes = sorted(p for p, _ in factorize(u_product))
        for mask in range(1 << len(u_primes)):
            subset = [p for i, p in enumerate(u_primes) if mask >> i & 1]
            seen += 1
            verdict = check_divisibility(members, parts, subset)
            if verdict.counterexample:
                bad.append((parts, tuple(subset)))
    return GridReport(
        lemma="div",
        limits={"members": len(members)},
        instances=seen,
        hypotheses_held=seen,
        counterexamples=bad,
    )
