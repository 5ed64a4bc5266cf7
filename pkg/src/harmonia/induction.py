"""Constructive decomposition engine for anarchy harmonious tuples.

Each member is split as M_i = U_i * V_i with coprime halves: V_i is the part
already settled, U_i is still pending, and a carry set S of primes of the
pending parts keeps damping factors (1 - 1/p) alive between steps.  A step
runs two greedy phases on the exact sum of the damped settled ratios:

  phase 1 (damping)    while the sum exceeds 1, multiply in (1 - 1/p) for
                       the smallest pending primes outside S; the chosen
                       primes form T;
  phase 2 (absorbing)  the damped sum sits below 1; for p in S union T with
                       p^e exactly dividing the pending part, trade the
                       damping factor for the true ratio p^e/sigma(p^e) by
                       multiplying with (1 - 1/p^(e+1))^(-1), smallest
                       p^(e+1) first, until the sum first reaches 1.  The
                       absorbed primes P' move p^e from U_i into V_i.

Every step emits a certificate whose inequalities are verified in exact
arithmetic, and the two greedy phases are cross-checked against the
sum-form lemma oracles.  Landing exactly on 1 with pending parts left is
impossible for anarchy harmonious tuples, so it is reported as an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from harmonia.arith import factorize, merge_factorizations, sigma_of
from harmonia.bounds import main_bound, render_big, tower
from harmonia.classify import is_anarchy, is_harmonious
from harmonia.lemmas import DiophantineInstance, check_hb1, check_hb2

# F_{2K}(2) at 12 distinct primes is a 2^24-bit number; past that the
# certificates would stop being materializable
MAX_DISTINCT_PRIMES = 12

# materialize tower bounds for display only up to this many bits
MATERIALIZE_BITS = 1 << 25


class DivisibilityViolation(ArithmeticError):
    """A damped ratio sum landed exactly on 1 with pending parts left."""


class InvariantViolation(RuntimeError):
    """A greedy phase or a certificate check contradicted the engine's
    guarantees; signals corrupt input or an implementation bug."""


def _primes_of(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def _tower_holds(value: int, r: int, x: int) -> bool:
    """Exact test value <= tower(r, x) that never materializes more than
    roughly value-sized integers."""
    if value < 0:
        raise ValueError("value must be nonnegative")
    if r == 0:
        return value <= x - 1
    if x == 1:
        return value <= 0
    h = x
    for _ in range(r - 1):
        if h > value:
            # h only grows from here, and tower = h'(h'-1) >= h' >= h
            return True
        h = h * h
    return value <= h * h - h


def _materialized_tower(r: int, x: int) -> int | None:
    if x.bit_length() * (1 << r) > MATERIALIZE_BITS:
        return None
    return tower(r, x)


@dataclass(frozen=True)
class DecompositionState:
    """Snapshot between steps: members, pending/settled halves, carry set."""

    members: tuple[int, ...]
    pending: tuple[int, ...]
    settled: tuple[int, ...]
    carry: frozenset[int]
    step: int

    def __post_init__(self) -> None:
        k = len(self.members)
        if not (len(self.pending) == len(self.settled) == k) or k == 0:
            raise ValueError("members, pending, settled must have equal length")
        for m, u, v in zip(self.members, self.pending, self.settled):
            if u < 1 or v < 1 or u * v != m:
                raise ValueError(f"{u} * {v} does not decompose {m}")
            if gcd(u, v) != 1:
                raise ValueError(f"pending {u} and settled {v} share a factor")
        for i, u in enumerate(self.pending):
            for u2 in self.pending[i + 1 :]:
                if gcd(u, u2) != 1:
                    raise ValueError("pending parts must be pairwise coprime")
        pending_primes = set()
        for u in self.pending:
            pending_primes.update(_primes_of(u))
        if not self.carry <= pending_primes:
            raise ValueError("carry primes must divide some pending part")

    @property
    def done(self) -> bool:
        return all(u == 1 for u in self.pending)


def initial_state(members: tuple[int, ...]) -> DecompositionState:
    return DecompositionState(
        members=tuple(members),
        pending=tuple(members),
        settled=(1,) * len(members),
        carry=frozenset(),
        step=0,
    )


@dataclass
class StepCertificate:
    """One verified step: the greedy choices and the exact inequalities."""

    step: int
    damping: tuple[int, ...]
    absorbed: tuple[tuple[int, int], ...]
    carry_before: tuple[int, ...]
    carry_after: tuple[int, ...]
    v: int
    w: int
    entry_sum: Fraction
    phase1_sums: tuple[Fraction, ...]
    phase2_sums: tuple[Fraction, ...]
    lhs: int
    bound: int | None
    improved_bound: int | None
    structure_ok: bool
    bound_holds: bool
    improved_holds: bool | None

    @property
    def damped_sum(self) -> Fraction:
        return self.phase1_sums[-1] if self.phase1_sums else self.entry_sum

    @property
    def exit_sum(self) -> Fraction:
        return self.phase2_sums[-1]

    @property
    def all_hold(self) -> bool:
        ok = self.structure_ok and self.bound_holds
        if self.improved_holds is not None:
            ok = ok and self.improved_holds
        return ok

    def to_json_dict(self) -> dict:
        return {
            "step": self.step,
            "damping": list(self.damping),
            "absorbed": [[p, e] for p, e in self.absorbed],
            "carry_after": list(self.carry_after),
            "v": self.v,
            "w": self.w,
            "entry_sum": str(self.entry_sum),
            "damped_sum": str(self.damped_sum),
            "exit_sum": str(self.exit_sum),
            "lhs": render_big(self.lhs),
            "bound": render_big(self.bound),
            "improved_bound": render_big(self.improved_bound),
            "structure_ok": self.structure_ok,
            "bound_holds": self.bound_holds,
            "improved_holds": self.improved_holds,
        }


def induction_step(
    state: DecompositionState,
) -> tuple[DecompositionState, StepCertificate]:
    """Run both greedy phases once and certify the outcome.

    Requires pending parts with prod > 1; the members are trusted to be
    anarchy harmonious (run_induction validates that once).
    """
    if state.done:
        raise ValueError("nothing pending; the decomposition is complete")
    members = state.members
    k = len(members)

    owner: dict[int, int] = {}
    exponent: dict[int, int] = {}
    for i, u in enumerate(state.pending):
        for p, e in factorize(u):
            owner[p] = i
            exponent[p] = e

    sigma_settled = [sigma_of(factorize(v)) for v in state.settled]
    terms = []
    for i in range(k):
        term = Fraction(state.settled[i], sigma_settled[i])
        for p in state.carry:
            if owner[p] == i:
                term *= Fraction(p - 1, p)
        terms.append(term)
    entry_sum = sum(terms)

    if entry_sum == 1:
        raise DivisibilityViolation(
            f"damped sum is exactly 1 at step {state.step}; "
            "the input cannot be an anarchy harmonious tuple"
        )

    # phase 1: damp with the smallest new pending primes until the sum
    # first drops below 1
    damping: list[int] = []
    phase1_sums: list[Fraction] = []
    running = entry_sum
    if running > 1:
        for p in sorted(set(owner) - state.carry):
            i = owner[p]
            terms[i] *= Fraction(p - 1, p)
            damping.append(p)
            running = sum(terms)
            phase1_sums.append(running)
            if running <= 1:
                break
        if running > 1:
            raise InvariantViolation(
                f"damping exhausted above 1 at step {state.step} "
                f"(sum {running}); input is not harmonious"
            )
        if running == 1:
            raise DivisibilityViolation(
                f"damped sum landed exactly on 1 at step {state.step}; "
                "the input cannot be an anarchy harmonious tuple"
            )

    # phase 2: absorb full prime powers for carried or damped primes,
    # smallest p^(e+1) first, until the sum first reaches 1
    active = state.carry | set(damping)
    candidates = sorted((p ** (exponent[p] + 1), p) for p in active)
    absorbed: list[tuple[int, int]] = []
    phase2_sums: list[Fraction] = []
    for modulus, p in candidates:
        i = owner[p]
        terms[i] *= Fraction(modulus, modulus - 1)
        absorbed.append((p, exponent[p]))
        running = sum(terms)
        phase2_sums.append(running)
        if running >= 1:
            break
    else:
        raise InvariantViolation(
            f"absorption exhausted below 1 at step {state.step}"
        )

    absorbed_primes = {p for p, _ in absorbed}
    carry_after = frozenset(active - absorbed_primes)
    new_pending = list(state.pending)
    new_settled = list(state.settled)
    for p, e in absorbed:
        i = owner[p]
        q = p**e
        new_pending[i] //= q
        new_settled[i] *= q
    new_state = DecompositionState(
        members=members,
        pending=tuple(new_pending),
        settled=tuple(new_settled),
        carry=carry_after,
        step=state.step + 1,
    )

    exit_sum = phase2_sums[-1]
    if exit_sum == 1 and not new_state.done:
        raise DivisibilityViolation(
            f"absorption landed exactly on 1 at step {state.step} with "
            "pending parts left; the input cannot be anarchy harmonious"
        )
    if new_state.done and exit_sum != 1:
        raise InvariantViolation(
            f"decomposition finished with ratio sum {exit_sum}, not 1; "
            "input is not harmonious"
        )

    v = len(absorbed)
    w = len(damping)
    entry_scale = prod(sigma_settled) * prod(state.carry)
    lhs = (
        prod(sigma_of(factorize(x)) for x in new_settled)
        * prod(carry_after)
        * prod(p * (p - 1) for p, _ in absorbed)
    )
    bound_holds = _tower_holds(lhs, v + w, entry_scale + 1)
    improved_holds = _tower_holds(lhs, v, entry_scale) if w == 0 else None
    structure_ok = (
        v >= 1
        and not (set(damping) & state.carry)
        and absorbed_primes <= active
        and carry_after == active - absorbed_primes
        and w == v + len(carry_after) - len(state.carry)
    )

    certificate = StepCertificate(
        step=state.step + 1,
        damping=tuple(damping),
        absorbed=tuple(absorbed),
        carry_before=tuple(sorted(state.carry)),
        carry_after=tuple(sorted(carry_after)),
        v=v,
        w=w,
        entry_sum=entry_sum,
        phase1_sums=tuple(phase1_sums),
        phase2_sums=tuple(phase2_sums),
        lhs=lhs,
        bound=_materialized_tower(v + w, entry_scale + 1),
        improved_bound=_materialized_tower(v, entry_scale) if w == 0 else None,
        structure_ok=structure_ok,
        bound_holds=bound_holds,
        improved_holds=improved_holds,
    )
    if not certificate.all_hold:
        raise InvariantViolation(
            f"certificate inequalities failed at step {state.step + 1}"
        )
    _cross_check_step(state, sigma_settled, owner, exponent, certificate)
    return new_state, certificate


def _cross_check_step(
    state: DecompositionState,
    sigma_settled: list[int],
    owner: dict[int, int],
    exponent: dict[int, int],
    cert: StepCertificate,
) -> None:
    """Feed both greedy phases back through the lemma oracles."""
    k = len(state.members)

    def coefficients(primes: frozenset[int] | set[int]) -> tuple[list[int], list[int]]:
        a = []
        b = []
        for i in range(k):
            ai = sigma_settled[i]
            bi = state.settled[i]
            for p in primes:
                if owner[p] == i:
                    ai *= p
                    bi *= p - 1
            a.append(ai)
            b.append(bi)
        return a, b

    if cert.w >= 1:
        a, b = coefficients(state.carry)
        inst = DiophantineInstance(
            k=k,
            R=cert.w,
            m=cert.damping,
            partition=tuple(owner[p] for p in cert.damping),
            a=tuple(a),
            b=tuple(b),
        )
        verdict = check_hb1(inst)
        if not (verdict.hypotheses_hold and verdict.conclusion_holds):
            raise InvariantViolation(
                f"damping phase of step {cert.step} failed the sum-form "
                f"lemma cross-check: {verdict}"
            )

    active = state.carry | set(cert.damping)
    a, b = coefficients(active)
    moduli = tuple(p ** (e + 1) for p, e in cert.absorbed)
    inst = DiophantineInstance(
        k=k,
        R=cert.v,
        m=moduli,
        partition=tuple(owner[p] for p, _ in cert.absorbed),
        a=tuple(a),
        b=tuple(b),
    )
    verdict = check_hb2(inst)
    if not (verdict.hypotheses_hold and verdict.conclusion_holds):
        raise InvariantViolation(
            f"absorbing phase of step {cert.step} failed the sum-form "
            f"lemma cross-check: {verdict}"
        )


@dataclass
class InductionTrace:
    """Full run: states, certificates, and the aggregate inequality."""

    members: tuple[int, ...]
    states: tuple[DecompositionState, ...]
    steps: tuple[StepCertificate, ...]
    primes: tuple[int, ...]
    distinct_primes: int
    sum_v: int
    sum_w: int
    final_lhs: int
    final_rhs_bits: int
    final_holds: bool
    chain_holds: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.final_holds
            and self.chain_holds
            and all(cert.all_hold for cert in self.steps)
        )

    def to_json_dict(self) -> dict:
        return {
            "members": list(self.members),
            "distinct_primes": self.distinct_primes,
            "steps": [cert.to_json_dict() for cert in self.steps],
            "primes": list(self.primes),
            "sum_v": self.sum_v,
            "sum_w": self.sum_w,
            "final": {
                "lhs": render_big(self.final_lhs),
                "rhs_bits": self.final_rhs_bits,
                "holds": self.final_holds,
                "chain_holds": self.chain_holds,
            },
        }


def _validated_members(members) -> tuple[int, ...]:
    members = tuple(sorted(int(m) for m in members))
    if len(members) < 1 or any(m < 1 for m in members):
        raise ValueError("members must be positive integers")
    harmonious, total = is_harmonious(members)
    if not harmonious:
        raise ValueError(f"not a harmonious tuple: ratio sum is {total}")
    if len(set(members)) != len(members) or not is_anarchy(members):
        raise ValueError("not an anarchy tuple: a cross gcd exceeds 1")
    merged = merge_factorizations(*(factorize(m) for m in members))
    if len(merged) == 0:
        raise ValueError("trivial tuple with no prime factors")
    if len(merged) > MAX_DISTINCT_PRIMES:
        raise ValueError(
            f"product has {len(merged)} distinct primes; "
            f"certificates are limited to {MAX_DISTINCT_PRIMES}"
        )
    return members


def run_induction(members) -> InductionTrace:
    """Decompose an anarchy harmonious tuple step by step, verifying every
    certificate and the accumulated aggregate inequality."""
    members = _validated_members(members)
    merged = merge_factorizations(*(factorize(m) for m in members))
    K = len(merged)

    state = initial_state(members)
    states = [state]
    certs: list[StepCertificate] = []
    while not state.done:
        if state.step >= K:
            raise InvariantViolation(f"trace exceeded {K} steps")
        prev_settled = state.settled
        state, cert = induction_step(state)
        states.append(state)
        certs.append(cert)
        for old, new in zip(prev_settled, state.settled):
            if new % old != 0 or gcd(old, new // old) != 1:
                raise InvariantViolation("settled parts must grow by coprime factors")

    # accounting: every prime is damped exactly once and absorbed exactly once
    all_absorbed = sorted(p for cert in certs for p, _ in cert.absorbed)
    expected_primes = [p for p, _ in merged]
    if all_absorbed != expected_primes:
        raise InvariantViolation("absorbed primes do not cover the product")
    sum_v = sum(cert.v for cert in certs)
    sum_w = sum(cert.w for cert in certs)
    if sum_v != K or sum_v + sum_w != 2 * K:
        raise InvariantViolation("step counts do not add up to 2K")

    # accumulated chain: after step s the settled/carry scale times all
    # absorbed psi factors stays below the tower of 2 with the spent slots
    chain_holds = True
    acc_psi = 1
    spent = 0
    for cert, after in zip(certs, states[1:]):
        acc_psi *= prod(p * (p - 1) for p, _ in cert.absorbed)
        spent += cert.v + cert.w
        acc_lhs = (
            prod(sigma_of(factorize(x)) for x in after.settled)
            * prod(after.carry)
            * acc_psi
        )
        if not _tower_holds(acc_lhs, spent, 2):
            chain_holds = False

    pi = prod(p for p, _ in merged)
    phi = prod(p - 1 for p, _ in merged)
    sigma_product = prod(sigma_of(factorize(m)) for m in members)
    final_lhs = sigma_product * phi * pi
    final_holds = _tower_holds(final_lhs, 2 * K, 2)

    return InductionTrace(
        members=members,
        states=tuple(states),
        steps=tuple(certs),
        primes=tuple(expected_primes),
        distinct_primes=K,
        sum_v=sum_v,
        sum_w=sum_w,
        final_lhs=final_lhs,
        final_rhs_bits=1 << (2 * K),
        final_holds=final_holds,
        chain_holds=chain_holds,
    )


@dataclass
class KernelReport:
    """Aggregate bound with the tower based at the radical of the product."""

    members: tuple[int, ...]
    primes: tuple[int, ...]
    distinct_primes: int
    radical: int
    phi: int
    sigma_product: int
    lhs: int
    rhs: int
    holds: bool

    def to_json_dict(self) -> dict:
        return {
            "members": list(self.members),
            "primes": list(self.primes),
            "distinct_primes": self.distinct_primes,
            "radical": self.radical,
            "phi": self.phi,
            "sigma_product": render_big(self.sigma_product),
            "lhs": render_big(self.lhs),
            "rhs": render_big(self.rhs),
            "holds": self.holds,
        }


def chen_tang_check(members) -> KernelReport:
    """Check sigma(prod M) * Phi(P) * Pi(P) <= tower(K, Pi(P)) exactly."""
    members = _validated_members(members)
    merged = merge_factorizations(*(factorize(m) for m in members))
    K = len(merged)
    pi = prod(p for p, _ in merged)
    phi = prod(p - 1 for p, _ in merged)
    sigma_product = prod(sigma_of(factorize(m)) for m in members)
    lhs = sigma_product * phi * pi
    rhs = tower(K, pi)
    return KernelReport(
        members=members,
        primes=tuple(p for p, _ in merged),
        distinct_primes=K,
        radical=pi,
        phi=phi,
        sigma_product=sigma_product,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
    )


@dataclass
class TheoremReport:
    """Concrete replay of the case split behind the product bound."""

    members: tuple[int, ...]
    distinct_primes: int
    radical: int
    branch: str
    branch_inequality_holds: bool
    combined_holds: bool
    identity_holds: bool
    product: int
    product_below_main_bound: bool
    trace: InductionTrace | None
    kernel: KernelReport | None

    @property
    def all_hold(self) -> bool:
        return (
            self.branch_inequality_holds
            and self.combined_holds
            and self.identity_holds
            and self.product_below_main_bound
        )

    def to_json_dict(self) -> dict:
        return {
            "members": list(self.members),
            "distinct_primes": self.distinct_primes,
            "radical": self.radical,
            "branch": self.branch,
            "branch_inequality_holds": self.branch_inequality_holds,
            "combined_holds": self.combined_holds,
            "identity_holds": self.identity_holds,
            "product": render_big(self.product),
            "product_below_main_bound": self.product_below_main_bound,
            "trace": self.trace.to_json_dict() if self.trace else None,
            "kernel": self.kernel.to_json_dict() if self.kernel else None,
        }


def theorem_trace(members) -> TheoremReport:
    """Case split on the radical: large radicals go through the step chain,
    small ones through the radical-based tower; both land on the same
    combined bound, which is then checked against the product bound."""
    members = _validated_members(members)
    merged = merge_factorizations(*(factorize(m) for m in members))
    K = len(merged)
    pi = prod(p for p, _ in merged)
    phi = prod(p - 1 for p, _ in merged)
    sigma_product = prod(sigma_of(factorize(m)) for m in members)
    product = prod(members)

    threshold = 1 << (1 << K)  # 2^(2^K)
    big_tower = tower(2 * K, 2)
    scale = 1 << (2 * (1 << K))  # 2^(2*2^K)

    trace = None
    kernel = None
    if pi > threshold:
        branch = "induction"
        trace = run_induction(members)
        branch_ok = trace.final_holds
    else:
        branch = "chen_tang"
        kernel = chen_tang_check(members)
        branch_ok = kernel.holds and tower(K, pi) * scale <= big_tower * pi * pi

    combined = sigma_product * phi * scale <= big_tower * pi

    # sigma(prod M) * Phi(P) / Pi(P) == prod(M) * prod(1 - 1/p^(e+1)),
    # cross-multiplied to integers on both sides
    lhs_num = sigma_product * phi
    lhs_den = pi
    rhs_num = product
    rhs_den = 1
    for p, e in merged:
        q = p ** (e + 1)
        rhs_num *= q - 1
        rhs_den *= q
    identity = lhs_num * rhs_den == rhs_num * lhs_den

    return TheoremReport(
        members=members,
        distinct_primes=K,
        radical=pi,
        branch=branch,
        branch_inequality_holds=branch_ok,
        combined_holds=combined,
        identity_holds=identity,
        product=product,
        product_below_main_bound=product < main_bound(K),
        trace=trace,
        kernel=kernel,
    )
