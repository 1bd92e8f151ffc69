"""Membership in N_p, classification, and the minimal-element sweep."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .gfpoly import GFpPoly, common_root_locus
from .gfq import OracleBoundError, count_consecutive_dpowers, enum_bound, make_field
from .numth import mult_order, prime_divisors

ENGINE_VERSION = "1"
METHODS = ("auto", "gcd", "field")
BLOCK_SIZE = 1024


class CacheVersionError(RuntimeError):
    pass


@dataclass(frozen=True)
class MembershipVerdict:
    p: int
    n: int
    member: bool
    method: str  # gcd | field | closure | trivial-shortcut
    witness_count: int | None
    k: int
    q: int
    d: int
    n_reduced: int
    classification: str  # trivial | nontrivial | non-member

    def to_dict(self) -> dict:
        return asdict(self)


def p_part_reduce(p: int, n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    while n % p == 0:
        n //= p
    return n


def is_trivial_member(p: int, n: int) -> bool:
    """True iff p^k - 1 divides n for some k >= 2."""
    pk = p * p
    while pk - 1 <= n:
        if n % (pk - 1) == 0:
            return True
        pk *= p
    return False


def _classify(p: int, n_red: int, member: bool) -> str:
    if not member:
        return "non-member"
    return "trivial" if is_trivial_member(p, n_red) else "nontrivial"


def witness_count_field(p: int, n: int) -> int:
    """M: the xi in GF(p^k) with xi + l a nonzero (q-1)/n-th power for all l."""
    k = mult_order(p, n)
    spec = make_field(p, k)
    return count_consecutive_dpowers(spec, (spec.q - 1) // n, p)[0]


def is_member(p: int, n: int, method: str = "auto") -> MembershipVerdict:
    if n < 1:
        raise ValueError("n must be >= 1")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    nr = p_part_reduce(p, n)
    k = mult_order(p, nr)
    q = p**k
    d = (q - 1) // nr

    def verdict(member, how, count):
        return MembershipVerdict(p, n, member, how, count, k, q, d, nr,
                                 _classify(p, nr, member))

    if nr == 1:
        return verdict(False, "trivial-shortcut", 0)
    if method == "auto" and is_trivial_member(p, nr):
        return verdict(True, "trivial-shortcut", None)
    if method == "field":
        if q > enum_bound():
            raise OracleBoundError(
                f"field method needs GF({p}^{k}), q = {q} exceeds bound {enum_bound()}")
        count = witness_count_field(p, nr)
        return verdict(count > 0, "field", count)
    count = common_root_locus(p, nr).degree
    return verdict(count > 0, "gcd", count)


def witnesses(p: int, n: int) -> tuple[GFpPoly, int]:
    g = common_root_locus(p, n)
    return g, g.degree


def is_minimal(p: int, n: int) -> bool:
    """Member with no member proper divisor.

    Membership is closed under multiples, so only the maximal proper
    divisors n / ell need checking.
    """
    if not is_member(p, n).member:
        return False
    return not any(is_member(p, n // ell).member for ell in prime_divisors(n))


def factor_form(p: int, n: int) -> str:
    """n as (p^k - 1)/c with k the order of p mod n, e.g. '(2^9-1)/7'."""
    k = mult_order(p, n)
    c = (p**k - 1) // n
    return f"{p}^{k}-1" if c == 1 else f"({p}^{k}-1)/{c}"


# -- cache --------------------------------------------------------------------


class VerdictCache:
    """Append-only JSON-lines store of decided (p, n) pairs."""

    FIELDS = ("p", "n", "member", "witness_count", "method", "engine_version")

    def __init__(self, path):
        self.path = Path(path)
        self.records: dict[tuple[int, int], dict] = {}
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    if rec.get("engine_version") != ENGINE_VERSION:
                        raise CacheVersionError(
                            f"{self.path}:{lineno}: engine version "
                            f"{rec.get('engine_version')!r} != {ENGINE_VERSION!r}")
                    self.records[(rec["p"], rec["n"])] = rec

    def get(self, p: int, n: int):
        return self.records.get((p, n))

    def put(self, p: int, n: int, member: bool, witness_count, method: str) -> None:
        if (p, n) in self.records:
            return
        rec = {"p": p, "n": n, "member": member, "witness_count": witness_count,
               "method": method, "engine_version": ENGINE_VERSION}
        self.records[(p, n)] = rec
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


# -- minimal-element sweep ----------------------------------------------------


@dataclass(frozen=True)
class MinimalRow:
    n: int
    form: str
    classification: str
    witness_count: int | None


def _decide_block(p: int, ns: list[int]) -> list[tuple[int, bool, int]]:
    out = []
    for n in ns:
        v = is_member(p, n, "gcd")
        out.append((n, v.member, v.witness_count))
    return out


def _divisible(n: int, gens: list[int]) -> bool:
    return any(n % g == 0 for g in gens)


def iter_minimal_elements(p: int, bound: int, workers: int = 1, cache: VerdictCache | None = None,
                          block_size: int = BLOCK_SIZE):
    """Yield the minimal members n <= bound in ascending order.

    Candidates are the n coprime to p; a candidate divisible by an earlier
    minimal member is a non-minimal member and is skipped.  Blocks of
    candidates are decided (possibly in parallel) and committed strictly in
    ascending order, re-applying the skip rule at commit time.
    """
    found: list[int] = []
    candidates = (n for n in range(2, bound + 1) if n % p)

    def blocks():
        block = []
        for n in candidates:
            block.append(n)
            if len(block) == block_size:
                yield block
                block = []
        if block:
            yield block

    def commit(results):
        for n, member, count in results:
            if _divisible(n, found):
                continue
            if cache is not None:
                cache.put(p, n, member, count, "gcd")
            if member:
                found.append(n)
                yield MinimalRow(n, factor_form(p, n), _classify(p, n, True), count)

    def todo(block):
        # drop what the skip rule or the cache already settles
        cached, fresh = [], []
        for n in block:
            if _divisible(n, found):
                continue
            rec = cache.get(p, n) if cache is not None else None
            if rec is not None:
                cached.append((n, rec["member"], rec["witness_count"]))
            else:
                fresh.append(n)
        return cached, fresh

    if workers <= 1:
        for block in blocks():
            cached, fresh = todo(block)
            results = sorted(cached + _decide_block(p, fresh))
            yield from commit(results)
        return

    with ProcessPoolExecutor(max_workers=workers) as pool:
        pending = []
        it = blocks()
        window = 2 * workers

        def submit():
            block = next(it, None)
            if block is None:
                return False
            cached, fresh = todo(block)
            # split so every worker gets a share of the block
            step = max(1, -(-len(fresh) // workers))
            futs = [pool.submit(_decide_block, p, fresh[i:i + step])
                    for i in range(0, len(fresh), step)]
            pending.append((cached, futs))
            return True

        while len(pending) < window and submit():
            pass
        while pending:
            cached, futs = pending.pop(0)
            results = list(cached)
            for f in futs:
                results += f.result()
            yield from commit(sorted(results))
            submit()


def minimal_elements(p: int, bound: int, workers: int = 1, cache=None) -> list[MinimalRow]:
    if bound < 2:
        return []
    if isinstance(cache, (str, os.PathLike)):
        cache = VerdictCache(cache)
    return list(iter_minimal_elements(p, bound, workers, cache))
