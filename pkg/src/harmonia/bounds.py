"""Explicit upper bounds on tuple products, verified exactly.

Two bound families are checked against found tuples:

  main bound   product < ceil(z * 2^(4^K - 2*2^K)) for anarchy harmonious
               tuples, K the number of distinct primes of the product, z a
               certified dyadic upper bound of pi^2/6;
  k^-k bound   product <= (2^(2^L) - 2^(2^(L-1))) / k^k, with L the prime
               multiplicity count of the product for harmonious tuples and
               the sum of distinct-prime counts for unitary harmonious ones.

Comparisons stay in exact integer arithmetic; when an exponent is too large
to materialize, a bit-length argument decides the inequality and the rare
indeterminate boundary is reported as unverifiable instead of guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from harmonia.classify import TupleRecord

# ceil(zeta(2) * 2^64): certified dyadic upper bound of pi^2/6 = 1.6449340668...
# frozen as a literal; tests re-derive it from an integer Machin bracketing of pi
ZETA2_NUM = 30343677749275472433
ZETA2_SHIFT = 64

TOWER_CAP = 64
MAIN_CAP = 16
BORHO_CAP = 32
# exact boundary comparisons are attempted only below this many bits
_EXACT_BITS = 1 << 25


def tower(r: int, x: int | Fraction) -> int | Fraction:
    """x**(2**r) - x**(2**(r-1)); for r = 0 it degenerates to x - 1.

    Strictly increasing in x on x >= 1 for every r.
    """
    if not 0 <= r <= TOWER_CAP:
        raise ValueError(f"tower index must be in [0, {TOWER_CAP}], got {r}")
    if x < 1:
        raise ValueError(f"tower argument must be >= 1, got {x}")
    if r == 0:
        return x - 1
    half = x ** (1 << (r - 1))
    return half * half - half


def main_bound(K: int) -> int:
    """ceil of the dyadic pi^2/6 upper bound times 2^(4^K - 2*2^K)."""
    if not 1 <= K <= MAIN_CAP:
        raise ValueError(f"main bound needs 1 <= K <= {MAIN_CAP}, got {K}")
    exponent = main_bound_log2(K)
    if exponent >= ZETA2_SHIFT:
        # exact: the dyadic constant times a power of two is an integer
        return ZETA2_NUM << (exponent - ZETA2_SHIFT)
    shift = ZETA2_SHIFT - exponent
    return (ZETA2_NUM + (1 << shift) - 1) >> shift


def main_bound_log2(K: int) -> int:
    """The exponent 4^K - 2*2^K; integer log2 surrogate for the main bound."""
    if K < 1:
        raise ValueError(f"need K >= 1, got {K}")
    return 4**K - 2 * 2**K


def borho_bound(k: int, L: int) -> Fraction:
    """(2^(2^L) - 2^(2^(L-1))) / k^k as an exact rational (tower(L, 2) / k^k).

    Heavy near the cap: the numerator has 2^L bits.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if not 0 <= L <= BORHO_CAP:
        raise ValueError(f"k^-k bound needs 0 <= L <= {BORHO_CAP}, got {L}")
    return Fraction(tower(L, 2), k**k)


def _decide_main(product: int, K: int) -> tuple[bool | None, bool]:
    """Is product < main_bound(K)?  Returns (verdict, hit_cap).

    Works for any K >= 1 without materializing the bound: a product below
    2^E is under the bound and one at or above 2^(E+1) is over it; only the
    single boundary octave needs the exact dyadic comparison.
    """
    exponent = main_bound_log2(K)
    if exponent <= 64:
        return product < main_bound(K), False
    bl = product.bit_length()
    if bl <= exponent:
        return True, False
    if bl > exponent + 1:
        return False, False
    if exponent <= _EXACT_BITS:
        # exponent > 64 here, so the bound is the exact integer ZETA2_NUM << (exponent - 64)
        return product < (ZETA2_NUM << (exponent - ZETA2_SHIFT)), False
    return None, True


def _decide_borho(product: int, k: int, L: int) -> tuple[bool | None, bool]:
    """Is product <= tower(L, 2) / k^k?  Returns (verdict, hit_cap)."""
    scaled = product * k**k
    if L == 0:
        return scaled <= 1, False
    bits = 1 << L  # bit length of tower(L, 2)
    bl = scaled.bit_length()
    if bl < bits:
        return True, False
    if bl > bits:
        return False, False
    if bits <= _EXACT_BITS:
        return scaled <= tower(L, 2), False
    return None, True


@dataclass
class BoundReport:
    """Outcome of every applicable bound check for one tuple."""

    members: tuple[int, ...]
    K: int
    L_omega: int
    L_star: int
    product: int
    main_applies: bool
    main_holds: bool | None
    main_bound_log2: int | None
    main_bound: int | None
    borho_holds: bool | None
    borho_star_holds: bool | None
    unverifiable_cap: bool

    @property
    def all_applicable_hold(self) -> bool:
        checks = [self.main_holds if self.main_applies else None,
                  self.borho_holds, self.borho_star_holds]
        return all(c is not False for c in checks)

    def to_json_dict(self) -> dict:
        return {
            "members": list(self.members),
            "K": self.K,
            "L": self.L_omega,
            "L_star": self.L_star,
            "product": render_big(self.product),
            "main_applies": self.main_applies,
            "main_holds": self.main_holds,
            "main_bound_log2": self.main_bound_log2,
            "main_bound": render_big(self.main_bound),
            "borho_holds": self.borho_holds,
            "borho_star_holds": self.borho_star_holds,
            "unverifiable_cap": self.unverifiable_cap,
        }


def render_big(x: int | None):
    # decimal strings up to 256 bits, size-only beyond; keeps JSON diffable
    # without ever emitting hundred-megabyte digit strings
    if x is None:
        return None
    if x.bit_length() <= 256:
        return str(x)
    return {"bits": x.bit_length()}


def verify_bounds(record: TupleRecord) -> BoundReport:
    """Check every bound whose hypothesis the record satisfies.

    The main bound applies to anarchy harmonious tuples (K >= 1, which only
    excludes the degenerate all-ones tuple); the k^-k bound applies to
    harmonious tuples via L_omega and to unitary harmonious tuples via
    L_star.  Flags are None when the hypothesis does not hold.
    """
    k = len(record.members)
    product = record.product
    cap_hit = False

    main_applies = bool(
        record.flags["anarchy"] and record.flags["harmonious"] and record.K >= 1
    )
    main_holds = None
    log2 = None
    bound_value = None
    if main_applies:
        log2 = main_bound_log2(record.K)
        main_holds, hit = _decide_main(product, record.K)
        cap_hit |= hit
        if record.K <= MAIN_CAP and log2 <= _EXACT_BITS:
            bound_value = main_bound(record.K)

    borho_holds = None
    if record.flags["harmonious"]:
        borho_holds, hit = _decide_borho(product, k, record.L_omega)
        cap_hit |= hit

    borho_star_holds = None
    if record.flags["unitary_harmonious"]:
        borho_star_holds, hit = _decide_borho(product, k, record.L_star)
        cap_hit |= hit

    return BoundReport(
        members=record.members,
        K=record.K,
        L_omega=record.L_omega,
        L_star=record.L_star,
        product=product,
        main_applies=main_applies,
        main_holds=main_holds,
        main_bound_log2=log2,
        main_bound=bound_value,
        borho_holds=borho_holds,
        borho_star_holds=borho_star_holds,
        unverifiable_cap=cap_hit,
    )
