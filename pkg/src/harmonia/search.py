"""Bounded searches for harmonious, unitary harmonious, and amicable tuples.

Pair strategy: every n <= bound is keyed by its reduced ratio n/sigma(n).
A pair (M, N) has ratio sum exactly 1 precisely when the reduced complement
(sigma(M) - M)/sigma(M) equals N's key, so one sieve pass plus a key join
replaces the quadratic double loop.  Reduced fractions are packed into
int64 codes (numerator shifted past the denominator width, validated to
fit) and joined either fully in memory (sorted array plus binary search)
or, above the in-memory limit, through code-sorted run files merged range
bucket by range bucket.

Amicable pairs use the aliquot shortcut instead: the only possible partner
of M is s(M) = sigma(M) - M, so a pair exists exactly when
sigma(s(M)) == sigma(M).

Every candidate a join produces is re-validated through classify, which
rebuilds sigma from a fresh factorization, so sieve or join defects cannot
leak into results; a candidate that fails re-validation raises instead of
being dropped.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt
from typing import Callable, Sequence

import numpy as np

from .arith import DEFAULT_SEGMENT_LENGTH, primes_upto, sieve_tables
from .classify import TupleRecord, classify

KINDS = ("harmonious", "unitary_harmonious", "amicable")
FILTER_NAMES = ("coprime", "anarchy")
_FILTER_FLAG = {"coprime": "pairwise_coprime", "anarchy": "anarchy"}

DEFAULT_IN_MEMORY_LIMIT = 10**7
TRIPLE_BOUND_CAP = 10**5
# per-bucket working-set target for the file-backed merge join
_BUCKET_TARGET_BYTES = 64 << 20

Progress = Callable[[str], None]


class CheckpointMismatch(RuntimeError):
    """Checkpoint on disk does not belong to the requested configuration."""


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one bounded pair/triple search.

    allow_equal_members=None picks the kind's convention: equal members are
    allowed for (unitary) harmonious tuples, where M = N forces sigma = 2M
    and the perfect numbers appear on the diagonal, and disallowed for
    amicable tuples, whose members are distinct by definition.
    """

    bound: int
    kind: str = "harmonious"
    k: int = 2
    filters: frozenset = frozenset()
    allow_equal_members: bool | None = None
    segment_length: int = DEFAULT_SEGMENT_LENGTH
    in_memory_limit: int = DEFAULT_IN_MEMORY_LIMIT
    checkpoint_path: str | None = None
    workdir: str | None = None
    threads: int = 0

    def __post_init__(self):
        if self.bound < 2:
            raise ValueError(f"bound must be >= 2, got {self.bound}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.k not in (2, 3):
            raise ValueError(f"k must be 2 or 3, got {self.k}")
        object.__setattr__(self, "filters", frozenset(self.filters))
        bad = self.filters - set(FILTER_NAMES)
        if bad:
            raise ValueError(f"unknown filters {sorted(bad)}; known: {FILTER_NAMES}")
        if self.segment_length < 1 << 10:
            raise ValueError(f"segment_length must be >= 1024, got {self.segment_length}")
        if self.in_memory_limit < 1:
            raise ValueError("in_memory_limit must be positive")
        if self.threads < 0:
            raise ValueError("threads must be >= 0 (0 = auto)")

    @property
    def equal_allowed(self) -> bool:
        if self.allow_equal_members is not None:
            return self.allow_equal_members
        return self.kind != "amicable"

    def digest(self) -> str:
        """Hex digest over every field that influences the result set or the
        layout of persisted run files.  Thread count and paths are excluded:
        they must never change results."""
        payload = {
            "bound": self.bound,
            "kind": self.kind,
            "k": self.k,
            "filters": sorted(self.filters),
            "allow_equal": self.equal_allowed,
            "segment_length": self.segment_length,
            "in_memory_limit": self.in_memory_limit,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True)
class Checkpoint:
    config_digest: str
    last_segment: int
    partial_digest: str


# --- checkpoint plumbing ----------------------------------------------------
#
# A checkpoint is only useful when partial work survives the process, so a
# configured checkpoint_path forces the file-backed pipeline and the run
# files live beside the checkpoint in <checkpoint_path>.runs/.  The file
# records the sha256 of every completed segment's run files; resuming
# re-hashes them, and any disagreement (foreign config, missing file,
# altered bytes) refuses rather than risking a silently different result.


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _partial_digest(rows: list) -> str:
    return hashlib.sha256(json.dumps(rows, sort_keys=True).encode()).hexdigest()


def load_checkpoint(path: str) -> tuple[Checkpoint, list] | None:
    """(checkpoint, per-segment file-digest rows), or None when absent."""
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            raw = json.load(fh)
        ck = Checkpoint(
            config_digest=raw["config_digest"],
            last_segment=int(raw["last_segment"]),
            partial_digest=raw["partial_digest"],
        )
        rows = raw["runs"]
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise CheckpointMismatch(f"unreadable checkpoint {path}: {exc}") from exc
    if _partial_digest(rows) != ck.partial_digest or len(rows) != ck.last_segment + 1:
        raise CheckpointMismatch(f"checkpoint {path} is internally inconsistent")
    return ck, rows


def _save_checkpoint(path: str, config_digest: str, rows: list) -> None:
    payload = {
        "config_digest": config_digest,
        "last_segment": len(rows) - 1,
        "partial_digest": _partial_digest(rows),
        "runs": rows,
    }
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- shared numeric helpers -------------------------------------------------


def _sigma_cap(bound: int) -> int:
    """Strict upper bound for sigma(n) (hence also sigma*(n)) over n <= bound.

    Robin's unconditional estimate: sigma(n)/n < e^gamma lnln n + 0.6483/lnln n
    for n >= 3.  The leading constant is rounded up and the result padded 2%,
    so float evaluation cannot undercut the true maximum.
    """
    if bound < 16:
        return 12 * bound + 12
    ll = math.log(math.log(bound))
    ratio = 1.7811 * ll + 0.6483 / ll
    return int(bound * ratio * 1.02) + 16


def _code_shift(bound: int, sigma_max: int) -> int:
    """Bit offset separating numerator from denominator in packed key codes."""
    shift = int(sigma_max).bit_length()
    if int(bound).bit_length() + shift > 63:
        raise ValueError(
            f"ratio keys for bound {bound} (sigma up to {sigma_max}) "
            "do not fit in int64 codes"
        )
    return shift


def _segments(bound: int, segment_length: int) -> list[tuple[int, int]]:
    """Inclusive segments covering [1, bound]."""
    return [
        (lo, min(lo + segment_length - 1, bound))
        for lo in range(1, bound + 1, segment_length)
    ]


def _threads(requested: int) -> int:
    return requested if requested > 0 else (os.cpu_count() or 1)


def _segment_sigma(lo: int, hi: int, primes: np.ndarray, star: bool) -> np.ndarray:
    t = sieve_tables(lo, hi, star=star, primes=primes)
    return t.sigma_star if star else t.sigma


def _sigma_full(
    bound: int, segment_length: int, star: bool, threads: int, progress: Progress | None
) -> np.ndarray:
    """sigma (or sigma*) of every n in [1, bound] as one array."""
    segs = _segments(bound, segment_length)
    primes = primes_upto(isqrt(bound))
    if len(segs) == 1:
        return _segment_sigma(1, bound, primes, star)
    parts: list[np.ndarray] = []
    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        futures = [pool.submit(_segment_sigma, lo, hi, primes, star) for lo, hi in segs]
        for i, fut in enumerate(futures):
            parts.append(fut.result())
            if progress:
                progress(f"sieved segment {i + 1}/{len(segs)}")
    return np.concatenate(parts)


def _expand_matches(
    hay_values: np.ndarray, lo: np.ndarray, hi: np.ndarray, owners: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """One (owner, hay_value) row per hit between searchsorted bounds."""
    counts = hi - lo
    src = np.nonzero(counts)[0]
    if not src.size:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    lens = counts[src]
    total = int(lens.sum())
    offsets = np.repeat(np.cumsum(lens) - lens, lens)
    pos = np.arange(total, dtype=np.int64) - offsets + np.repeat(lo[src], lens)
    return np.repeat(owners[src], lens), hay_values[pos]


def _ratio_keys(n: np.ndarray, s: np.ndarray, shift: int) -> np.ndarray:
    """Packed code of the reduced ratio n/s for each entry."""
    g = np.gcd(n, s)
    return ((n // g) << shift) | (s // g)


def _complement_keys(
    n: np.ndarray, s: np.ndarray, shift: int, partner_cap: int
) -> tuple[np.ndarray, np.ndarray]:
    """(codes, owners) of reduced (s-n)/s; entries whose reduced numerator
    cannot be any partner's reduced numerator (0, or above partner_cap) are
    dropped since no key can ever match them."""
    num = s - n
    g = np.gcd(num, s)
    qn = num // g
    qd = s // g
    keep = (qn >= 1) & (qn <= partner_cap)
    return (qn[keep] << shift) | qd[keep], n[keep]


# --- in-memory candidate generation ----------------------------------------


def _ratio_candidates_memory(
    bound: int, sigma: np.ndarray, equal_allowed: bool
) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, bound + 1, dtype=np.int64)
    shift = _code_shift(bound, int(sigma.max()))
    code = _ratio_keys(n, sigma, shift)
    order = np.argsort(code, kind="stable")
    sorted_code = code[order]
    sorted_n = n[order]
    ccode, owners = _complement_keys(n, sigma, shift, bound)
    lo = np.searchsorted(sorted_code, ccode, side="left")
    hi = np.searchsorted(sorted_code, ccode, side="right")
    m_col, n_col = _expand_matches(sorted_n, lo, hi, owners)
    keep = (n_col >= m_col) if equal_allowed else (n_col > m_col)
    return m_col[keep], n_col[keep]


def _amicable_candidates_memory(
    bound: int, sigma: np.ndarray, equal_allowed: bool
) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(1, bound + 1, dtype=np.int64)
    partner = sigma - n
    floor = n if equal_allowed else n + 1
    ok = (partner >= floor) & (partner <= bound)
    m_side = n[ok]
    p_side = partner[ok]
    match = sigma[p_side - 1] == sigma[ok]
    return m_side[match], p_side[match]


# --- file-backed candidate generation ---------------------------------------
#
# Pass 1 writes one or two run files per segment (int64 rows, sorted by the
# leading row), pass 2 merges them.  Ratio kinds write (code, n) key runs
# and (code, m) complement runs; the merge walks code-range buckets sized
# to _BUCKET_TARGET_BYTES so memory stays flat.  Amicable writes
# (partner, sigma_m, m) query runs and resolves them by re-sieving each
# segment and comparing sigma at the partner.


def _write_run(path: str, rows: tuple[np.ndarray, ...], sort_row: int = 0) -> str:
    arr = np.stack(rows)
    order = np.argsort(arr[sort_row], kind="stable")
    np.save(path, arr[:, order])
    return _sha256_file(path)


def _ratio_segment_runs(
    lo: int,
    hi: int,
    bound: int,
    shift: int,
    primes: np.ndarray,
    star: bool,
    keys_path: str,
    comps_path: str,
) -> dict:
    sigma = _segment_sigma(lo, hi, primes, star)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    code = _ratio_keys(n, sigma, shift)
    keys_sha = _write_run(keys_path, (code, n))
    ccode, owners = _complement_keys(n, sigma, shift, bound)
    comps_sha = _write_run(comps_path, (ccode, owners))
    return {"keys": keys_sha, "comps": comps_sha}


def _amicable_segment_run(
    lo: int,
    hi: int,
    bound: int,
    equal_allowed: bool,
    primes: np.ndarray,
    queries_path: str,
) -> dict:
    sigma = _segment_sigma(lo, hi, primes, star=False)
    n = np.arange(lo, hi + 1, dtype=np.int64)
    partner = sigma - n
    floor = n if equal_allowed else n + 1
    ok = (partner >= floor) & (partner <= bound)
    sha = _write_run(queries_path, (partner[ok], sigma[ok], n[ok]))
    return {"queries": sha}


def _run_paths(rundir: str, index: int, names: Sequence[str]) -> dict[str, str]:
    return {name: os.path.join(rundir, f"{name}-{index:06d}.npy") for name in names}


def _pass1(
    config: SearchConfig,
    segs: list[tuple[int, int]],
    rundir: str,
    checkpoint_path: str | None,
    progress: Progress | None,
) -> list[dict[str, str]]:
    """Produce every segment's run files, resuming from a checkpoint when one
    is present; returns per-segment {name: path} maps."""
    digest = config.digest()
    star = config.kind == "unitary_harmonious"
    names = ("queries",) if config.kind == "amicable" else ("keys", "comps")
    primes = primes_upto(isqrt(config.bound))
    if config.kind == "amicable":
        shift = 0
    else:
        shift = _code_shift(config.bound, _sigma_cap(config.bound))

    rows: list[dict] = []
    if checkpoint_path:
        loaded = load_checkpoint(checkpoint_path)
        if loaded is not None:
            ck, rows = loaded
            if ck.config_digest != digest:
                raise CheckpointMismatch(
                    f"checkpoint {checkpoint_path} belongs to config "
                    f"{ck.config_digest[:12]}, not {digest[:12]}"
                )
            if len(rows) > len(segs):
                raise CheckpointMismatch(
                    f"checkpoint {checkpoint_path} records more segments than the run has"
                )
            for i, row in enumerate(rows):
                paths = _run_paths(rundir, i, names)
                for name in names:
                    if name not in row or not os.path.exists(paths[name]):
                        raise CheckpointMismatch(
                            f"run file {paths[name]} from checkpoint is missing"
                        )
                    if _sha256_file(paths[name]) != row[name]:
                        raise CheckpointMismatch(
                            f"run file {paths[name]} does not match its checkpoint digest"
                        )
            if progress and rows:
                progress(f"resumed after segment {len(rows)}/{len(segs)}")

    def work(i: int) -> dict:
        lo, hi = segs[i]
        paths = _run_paths(rundir, i, names)
        if config.kind == "amicable":
            return _amicable_segment_run(
                lo, hi, config.bound, config.equal_allowed, primes, paths["queries"]
            )
        return _ratio_segment_runs(
            lo, hi, config.bound, shift, primes, star, paths["keys"], paths["comps"]
        )

    with ThreadPoolExecutor(max_workers=_threads(config.threads)) as pool:
        futures = {i: pool.submit(work, i) for i in range(len(rows), len(segs))}
        for i in sorted(futures):
            rows.append(futures[i].result())
            if checkpoint_path:
                _save_checkpoint(checkpoint_path, digest, rows)
            if progress:
                progress(f"segment {i + 1}/{len(segs)} written")
    return [_run_paths(rundir, i, names) for i in range(len(segs))]


def _bucket_edges(bound: int, shift: int, total_keys: int) -> list[int]:
    """Code-range boundaries splitting the join into flat-memory buckets."""
    want = max(1, (total_keys * 16) // _BUCKET_TARGET_BYTES)
    buckets = 1 << min(12, max(0, want - 1).bit_length())
    return [((i * (bound + 1)) // buckets) << shift for i in range(buckets + 1)]


def _bucket_slice(path: str, lo_edge: int, hi_edge: int | None) -> np.ndarray:
    arr = np.load(path, mmap_mode="r")
    codes = arr[0]
    a = int(np.searchsorted(codes, lo_edge, side="left")) if lo_edge else 0
    b = (
        int(np.searchsorted(codes, hi_edge, side="left"))
        if hi_edge is not None
        else arr.shape[1]
    )
    return np.asarray(arr[:, a:b])


def _merge_join(
    run_paths: list[dict[str, str]],
    bound: int,
    shift: int,
    equal_allowed: bool,
    progress: Progress | None,
) -> tuple[np.ndarray, np.ndarray]:
    total = sum(np.load(p["keys"], mmap_mode="r").shape[1] for p in run_paths)
    edges = _bucket_edges(bound, shift, total)
    m_parts: list[np.ndarray] = []
    n_parts: list[np.ndarray] = []
    for b in range(len(edges) - 1):
        lo_edge = edges[b]
        hi_edge = edges[b + 1] if b + 1 < len(edges) - 1 else None
        keys = [_bucket_slice(p["keys"], lo_edge, hi_edge) for p in run_paths]
        karr = np.concatenate(keys, axis=1)
        if karr.shape[1]:
            order = np.argsort(karr[0], kind="stable")
            karr = karr[:, order]
        comps = [_bucket_slice(p["comps"], lo_edge, hi_edge) for p in run_paths]
        carr = np.concatenate(comps, axis=1)
        if not karr.shape[1] or not carr.shape[1]:
            continue
        lo = np.searchsorted(karr[0], carr[0], side="left")
        hi = np.searchsorted(karr[0], carr[0], side="right")
        m_col, n_col = _expand_matches(karr[1], lo, hi, carr[1])
        keep = (n_col >= m_col) if equal_allowed else (n_col > m_col)
        m_parts.append(m_col[keep])
        n_parts.append(n_col[keep])
        if progress:
            progress(f"joined bucket {b + 1}/{len(edges) - 1}")
    if not m_parts:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(m_parts), np.concatenate(n_parts)


def _resolve_amicable_queries(
    run_paths: list[dict[str, str]],
    segs: list[tuple[int, int]],
    bound: int,
    threads: int,
    progress: Progress | None,
) -> tuple[np.ndarray, np.ndarray]:
    primes = primes_upto(isqrt(bound))

    def work(seg: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = seg
        sigma = _segment_sigma(lo, hi, primes, star=False)
        m_hits: list[np.ndarray] = []
        n_hits: list[np.ndarray] = []
        for paths in run_paths:
            arr = np.load(paths["queries"], mmap_mode="r")
            partners = arr[0]
            a = int(np.searchsorted(partners, lo, side="left"))
            b = int(np.searchsorted(partners, hi, side="right"))
            if a == b:
                continue
            sl = np.asarray(arr[:, a:b])
            hit = sigma[sl[0] - lo] == sl[1]
            m_hits.append(sl[2][hit])
            n_hits.append(sl[0][hit])
        if not m_hits:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        return np.concatenate(m_hits), np.concatenate(n_hits)

    m_parts: list[np.ndarray] = []
    n_parts: list[np.ndarray] = []
    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        futures = [pool.submit(work, seg) for seg in segs]
        for i, fut in enumerate(futures):
            m_col, n_col = fut.result()
            m_parts.append(m_col)
            n_parts.append(n_col)
            if progress:
                progress(f"resolved segment {i + 1}/{len(segs)}")
    return np.concatenate(m_parts), np.concatenate(n_parts)


# --- record emission ---------------------------------------------------------


def _emit_records(
    pairs: Sequence[tuple[int, ...]], kind_flag: str, filters: frozenset
) -> list[TupleRecord]:
    """Classify candidates, insist the searched class really holds, apply
    filters.  Candidates are exact by construction, so a re-validation
    failure is an internal defect and raises."""
    records = []
    for members in pairs:
        record = classify(members)
        if not record.flags[kind_flag]:
            raise ArithmeticError(
                f"candidate {members} failed exact {kind_flag} re-validation; "
                "the sieve or the join is defective"
            )
        if all(record.flags[_FILTER_FLAG[f]] for f in filters):
            records.append(record)
    return records


def _candidate_pairs(m_col: np.ndarray, n_col: np.ndarray) -> list[tuple[int, int]]:
    return sorted({(int(m), int(n)) for m, n in zip(m_col.tolist(), n_col.tolist())})


# --- public searches ----------------------------------------------------------


def search_pairs(
    config: SearchConfig, *, progress: Progress | None = None
) -> list[TupleRecord]:
    """All pairs (M <= N <= bound) of the configured kind, sorted ascending.

    Runs in memory up to config.in_memory_limit keys; above that, or whenever
    a checkpoint_path is set (partial work can only be resumed from disk),
    switches to sorted run files plus a bucketed merge join.  Results are
    identical across segment lengths, thread counts, and the two regimes.
    """
    if config.k != 2:
        raise ValueError(f"search_pairs needs k=2, got k={config.k}")
    file_backed = config.bound > config.in_memory_limit or config.checkpoint_path
    if not file_backed:
        sigma = _sigma_full(
            config.bound,
            config.segment_length,
            config.kind == "unitary_harmonious",
            config.threads,
            progress,
        )
        if config.kind == "amicable":
            m_col, n_col = _amicable_candidates_memory(
                config.bound, sigma, config.equal_allowed
            )
        else:
            m_col, n_col = _ratio_candidates_memory(
                config.bound, sigma, config.equal_allowed
            )
    else:
        segs = _segments(config.bound, config.segment_length)
        tmp = None
        if config.workdir:
            rundir = config.workdir
            os.makedirs(rundir, exist_ok=True)
        elif config.checkpoint_path:
            rundir = config.checkpoint_path + ".runs"
            os.makedirs(rundir, exist_ok=True)
        else:
            tmp = tempfile.TemporaryDirectory(prefix="harmonia-runs-")
            rundir = tmp.name
        try:
            run_paths = _pass1(config, segs, rundir, config.checkpoint_path, progress)
            if config.kind == "amicable":
                m_col, n_col = _resolve_amicable_queries(
                    run_paths, segs, config.bound, config.threads, progress
                )
            else:
                shift = _code_shift(config.bound, _sigma_cap(config.bound))
                m_col, n_col = _merge_join(
                    run_paths, config.bound, shift, config.equal_allowed, progress
                )
        finally:
            if tmp is not None:
                tmp.cleanup()
    return _emit_records(_candidate_pairs(m_col, n_col), config.kind, config.filters)


def search_anarchy_pairs(
    m_bound: int,
    n_bound: int,
    *,
    segment_length: int = DEFAULT_SEGMENT_LENGTH,
    threads: int = 0,
    progress: Progress | None = None,
) -> list[TupleRecord]:
    """Harmonious pairs with M <= m_bound, M <= N <= n_bound passing the
    anarchy test.

    The small side's complement keys form the haystack; one streaming sweep
    over [1, n_bound] probes every n's ratio key against it, so the large
    bound never needs an index of its own.
    """
    if not 2 <= m_bound <= n_bound:
        raise ValueError(f"need 2 <= m_bound <= n_bound, got ({m_bound}, {n_bound})")
    shift = _code_shift(n_bound, _sigma_cap(n_bound))
    small_sigma = _sigma_full(m_bound, segment_length, False, threads, None)
    small_n = np.arange(1, m_bound + 1, dtype=np.int64)
    ccode, owners = _complement_keys(small_n, small_sigma, shift, n_bound)
    corder = np.argsort(ccode, kind="stable")
    ccode = ccode[corder]
    owners = owners[corder]

    segs = _segments(n_bound, segment_length)
    primes = primes_upto(isqrt(n_bound))

    def work(seg: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
        lo_n, hi_n = seg
        sigma = _segment_sigma(lo_n, hi_n, primes, star=False)
        n = np.arange(lo_n, hi_n + 1, dtype=np.int64)
        code = _ratio_keys(n, sigma, shift)
        lo = np.searchsorted(ccode, code, side="left")
        hi = np.searchsorted(ccode, code, side="right")
        n_col, m_col = _expand_matches(owners, lo, hi, n)
        keep = n_col >= m_col
        return m_col[keep], n_col[keep]

    m_parts: list[np.ndarray] = []
    n_parts: list[np.ndarray] = []
    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        futures = [pool.submit(work, seg) for seg in segs]
        for i, fut in enumerate(futures):
            m_col, n_col = fut.result()
            m_parts.append(m_col)
            n_parts.append(n_col)
            if progress:
                progress(f"swept segment {i + 1}/{len(segs)}")
    pairs = _candidate_pairs(np.concatenate(m_parts), np.concatenate(n_parts))
    return _emit_records(pairs, "harmonious", frozenset({"anarchy"}))


# --- triples -------------------------------------------------------------------


def _ratio_triples(config: SearchConfig, progress: Progress | None) -> list[tuple]:
    bound = config.bound
    star = config.kind == "unitary_harmonious"
    sigma = _sigma_full(bound, config.segment_length, star, config.threads, None)
    n = np.arange(1, bound + 1, dtype=np.int64)
    g = np.gcd(n, sigma)
    rn = n // g
    rd = sigma // g
    sigma_max = int(sigma.max())
    if sigma_max * sigma_max >= 1 << 62:
        raise ValueError(f"sigma values up to {sigma_max} overflow the triple search")
    shift = _code_shift(bound, sigma_max)
    code = (rn << shift) | rd
    order = np.argsort(code, kind="stable")
    sorted_code = code[order]
    sorted_n = n[order]
    equal = config.equal_allowed

    found: list[tuple[int, int, int]] = []
    for m1 in range(1, bound + 1):
        i1 = m1 - 1
        # residual 1 - r1 = (rd - rn)/rd shares rd's reduction, so it is
        # already in lowest terms
        res_num = int(rd[i1]) - int(rn[i1])
        res_den = int(rd[i1])
        if res_num <= 0:
            continue
        start = i1 if equal else i1 + 1
        if start >= bound:
            continue
        tn = res_num * rd[start:] - res_den * rn[start:]
        live = np.nonzero(tn > 0)[0]
        if not live.size:
            continue
        tn = tn[live]
        td = res_den * rd[start:][live]
        m2 = n[start:][live]
        gg = np.gcd(tn, td)
        tn //= gg
        td //= gg
        fit = (tn <= bound) & (td <= sigma_max)
        if not fit.any():
            continue
        target = (tn[fit] << shift) | td[fit]
        m2 = m2[fit]
        lo = np.searchsorted(sorted_code, target, side="left")
        hi = np.searchsorted(sorted_code, target, side="right")
        m2_col, m3_col = _expand_matches(sorted_n, lo, hi, m2)
        keep = (m3_col >= m2_col) if equal else (m3_col > m2_col)
        for b, c in zip(m2_col[keep].tolist(), m3_col[keep].tolist()):
            found.append((m1, b, c))
        if progress and m1 % 8192 == 0:
            progress(f"first member {m1}/{bound}")
    return found


def _amicable_triples(config: SearchConfig) -> list[tuple]:
    bound = config.bound
    sigma = _sigma_full(bound, config.segment_length, False, config.threads, None)
    order = np.argsort(sigma, kind="stable")
    values = sigma[order]
    cuts = np.nonzero(np.diff(values))[0] + 1
    starts = np.concatenate(([0], cuts))
    stops = np.concatenate((cuts, [len(values)]))
    equal = config.equal_allowed

    found: list[tuple[int, int, int]] = []
    for a, b in zip(starts.tolist(), stops.tolist()):
        if b - a < (1 if equal else 3):
            continue
        total = int(values[a])
        # stable argsort keeps index order, so members are already ascending
        members = (order[a:b] + 1).tolist()
        present = set(members)
        for i, m1 in enumerate(members):
            for j in range(i if equal else i + 1, len(members)):
                m2 = members[j]
                m3 = total - m1 - m2
                if m3 < (m2 if equal else m2 + 1):
                    break
                if m3 in present:
                    found.append((m1, m2, m3))
    return found


def search_triples(
    config: SearchConfig, *, progress: Progress | None = None
) -> list[TupleRecord]:
    """All sorted triples (M1 <= M2 <= M3 <= bound) of the configured kind.

    Ratio kinds run meet-in-the-middle: with all reduced ratios code-sorted,
    each (M1, M2) prefix binary-searches the exact residual 1 - r1 - r2.
    That is quadratic, so the bound is capped at TRIPLE_BOUND_CAP.  Amicable
    triples instead group members by sigma and close each pair inside its
    class with a membership probe.
    """
    if config.k != 3:
        raise ValueError(f"search_triples needs k=3, got k={config.k}")
    if config.bound > TRIPLE_BOUND_CAP:
        raise ValueError(
            f"triple search is quadratic and capped at bound {TRIPLE_BOUND_CAP}; "
            f"got {config.bound}"
        )
    if config.kind == "amicable":
        found = _amicable_triples(config)
    else:
        found = _ratio_triples(config, progress)
    return _emit_records(sorted(found), config.kind, config.filters)


# --- count table ----------------------------------------------------------------


@dataclass(frozen=True)
class CountRow:
    bound: int
    harmonious: int
    coprime_harmonious: int


def count_table(
    bounds: Sequence[int],
    *,
    segment_length: int = DEFAULT_SEGMENT_LENGTH,
    in_memory_limit: int = DEFAULT_IN_MEMORY_LIMIT,
    threads: int = 0,
    progress: Progress | None = None,
) -> tuple[CountRow, ...]:
    """Harmonious-pair counts (all, and pairwise-coprime) at each bound.

    One search at the largest bound supplies every row: a pair (M, N) counts
    toward bound b exactly when N <= b.
    """
    ladder = [int(b) for b in bounds]
    if not ladder:
        raise ValueError("need at least one bound")
    if ladder[0] < 2:
        raise ValueError(f"bounds must be >= 2, got {ladder[0]}")
    if any(b >= c for b, c in zip(ladder, ladder[1:])):
        raise ValueError(f"bounds must be strictly ascending, got {ladder}")
    config = SearchConfig(
        bound=ladder[-1],
        kind="harmonious",
        segment_length=segment_length,
        in_memory_limit=in_memory_limit,
        threads=threads,
    )
    records = search_pairs(config, progress=progress)
    rows = []
    for b in ladder:
        hits = [r for r in records if r.members[-1] <= b]
        rows.append(
            CountRow(
                bound=b,
                harmonious=len(hits),
                coprime_harmonious=sum(1 for r in hits if r.flags["pairwise_coprime"]),
            )
        )
    return tuple(rows)
