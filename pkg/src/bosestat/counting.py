"""Exact partition statistics, Hartley entropy and the Erdős estimate.

Counts are Python integers throughout; nothing here is ever rounded.
``p(M, N)`` denotes the number of partitions of ``M`` into exactly ``N``
positive parts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError


def _check_int(name: str, value: int, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return value


def _parts_at_most(total: int, largest: int) -> int:
    """Partitions of ``total`` into parts no larger than ``largest``."""
    if total < 0:
        return 0
    q = [1] + [0] * total
    for part in range(1, min(largest, total) + 1):
        for m in range(part, total + 1):
            q[m] += q[m - part]
    return q[total]


def count_exact(M: int, N: int) -> int:
    """``p(M, N)``: multisets of ``N`` positive integers summing to ``M``.

    Uses ``p(M, N) = q(M - N, N)`` where ``q(m, n)`` counts partitions of
    ``m`` into parts ``<= n``; unrolled, this is the recurrence
    ``p(M, N) = p(M-1, N-1) + p(M-N, N)``.  ``p(0, 0) = 1``.
    """
    M = _check_int("M", M, 0)
    N = _check_int("N", N, 0)
    if M == 0 and N == 0:
        return 1
    if N == 0 or N > M:
        raise DomainError(f"need 1 <= N <= M, got M={M}, N={N}")
    return _parts_at_most(M - N, N)


def count_at_most(M: int, N: int) -> int:
    """Partitions of ``M`` into at most ``N`` parts (zeros allowed as padding).

    Constant in ``N`` once ``N >= M``, where it equals ``p(M)``.
    """
    M = _check_int("M", M, 0)
    N = _check_int("N", N, 1)
    # conjugation: at most N parts <-> parts no larger than N
    return _parts_at_most(M, N)


def count_compositions(M: int, N: int) -> int:
    """Ordered decompositions of ``M`` into ``N`` positive summands."""
    M = _check_int("M", M, 1)
    N = _check_int("N", N, 1)
    if N > M:
        raise DomainError(f"need 1 <= N <= M, got M={M}, N={N}")
    return math.comb(M - 1, N - 1)


def partition_number(M: int) -> int:
    """Unrestricted ``p(M)``."""
    M = _check_int("M", M, 0)
    return _parts_at_most(M, M)


def hartley_entropy(count: int) -> float:
    """``log2(count)`` for an exact positive integer of any size."""
    count = _check_int("count", count, 1)
    shift = max(0, count.bit_length() - 64)
    return math.log2(count >> shift) + shift


@dataclass(frozen=True)
class PartitionTable:
    """``p(M, N)`` for one ``M`` and every ``N = 1..M``.

    ``counts[N - 1]`` holds ``p(M, N)``.
    """

    M: int
    counts: tuple[int, ...]

    def __getitem__(self, N: int) -> int:
        if not 1 <= N <= self.M:
            raise DomainError(f"N must lie in 1..{self.M}, got {N}")
        return self.counts[N - 1]

    @cached_property
    def total(self) -> int:
        return sum(self.counts)

    @cached_property
    def argmax(self) -> list[int]:
        best = max(self.counts)
        return [n for n, c in enumerate(self.counts, 1) if c == best]

    def rows(self) -> list[tuple[int, int]]:
        return list(enumerate(self.counts, 1))


def partition_table(M: int) -> PartitionTable:
    """Build the full row ``p(M, 1..M)`` in ``O(M^2)`` big-integer additions.

    One array ``q`` is swept over part sizes ``n = 1, 2, ...``; after pass
    ``n`` it holds ``q(m, n)`` and ``p(M, n) = q(M - n, n)`` is read off.
    The in-place update ``q[m] += q[m - n]`` is sequential with stride ``n``,
    so it runs in blocks of length ``n`` on object arrays.
    """
    M = _check_int("M", M, 1)
    q = np.zeros(M + 1, dtype=object)
    q[:] = 0
    q[0] = 1
    counts = []
    for n in range(1, M + 1):
        top = M - n  # later passes only read indices <= M - n
        start = n
        while start <= top:
            stop = min(start + n, top + 1)
            q[start:stop] += q[start - n:stop - n]
            start = stop
        counts.append(int(q[top]))
    return PartitionTable(M, tuple(counts))


def find_Nc(M: int) -> tuple[int, int, list[int]]:
    """Smallest ``N`` maximising ``p(M, N)``, the maximum, and every maximiser."""
    table = partition_table(M)
    ties = table.argmax
    return ties[0], table[ties[0]], ties


ERDOS_BETA = math.pi * math.sqrt(2.0 / 3.0)


def erdos_alpha(beta: float = ERDOS_BETA, tol: float = 1e-15) -> float:
    """Root of ``beta/2 = exp(-alpha beta / 2)`` by Newton's method.

    The closed form is ``-(2/beta) ln(beta/2)``; Newton is kept so the
    defining equation, not the rearrangement, is what gets solved.
    """
    alpha = 0.0
    for _ in range(100):
        g = math.exp(-alpha * beta / 2.0) - beta / 2.0
        dg = -beta / 2.0 * math.exp(-alpha * beta / 2.0)
        step = g / dg
        alpha -= step
        if abs(step) < tol:
            return alpha
    return alpha


def erdos_estimate(M: int) -> tuple[float, float, float]:
    """Leading-order location of the maximum of ``p(M, N)``.

    ``N_hat = sqrt(M) ln(M) / beta + alpha sqrt(M)`` with
    ``beta = pi sqrt(2/3)``.  Returns ``(N_hat, beta, alpha)``.
    """
    M = _check_int("M", M, 2)
    beta = ERDOS_BETA
    alpha = erdos_alpha(beta)
    root = math.sqrt(M)
    return root * math.log(M) / beta + alpha * root, beta, alpha


def petersburg_net(stake: float, m: int) -> tuple[float, float]:
    """Net result of the doubling-by-``e`` roulette strategy.

    The player stakes ``l, e l, ..., e^(m-1) l`` and loses, then wins
    ``e^m l``.  Returns ``(net, net / (e^m l))``; the ratio tends to
    ``(e - 2)/(e - 1)``.
    """
    m = _check_int("m", m, 1)
    stake = float(stake)
    if not (math.isfinite(stake) and stake > 0.0):
        raise DomainError(f"stake must be positive, got {stake}")
    if m > 700:
        raise OverflowError(f"e^{m} overflows double precision")
    win = math.exp(m) * stake
    lost = stake * math.expm1(m) / math.expm1(1.0)
    net = win - lost
    return net, net / win
