"""Nörlund means, their inverse, and the Toeplitz kernel between two methods.

All routines are exact forward substitutions / convolutions over Fractions.
Sequences are plain tuples indexed ``0..M``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .weights import WeightSequence

RealSequence = tuple  # tuple[Fraction, ...], index 0..M
KernelSequence = tuple


class HorizonMismatch(ValueError):
    pass


def _same_length(*seqs: Sequence) -> int:
    lengths = {len(s) for s in seqs}
    if len(lengths) != 1:
        raise HorizonMismatch(f"horizon mismatch: lengths {sorted(lengths)}")
    return lengths.pop()


def _dot_reversed(a: Sequence, b: Sequence, n: int) -> Fraction:
    """Σ_{j=0}^{n} a_{n-j} b_j."""
    return sum((a[n - j] * b[j] for j in range(n + 1)), Fraction(0))


def convolve(a: Sequence, b: Sequence) -> RealSequence:
    n = _same_length(a, b)
    return tuple(_dot_reversed(a, b, m) for m in range(n))


def norlund_mean(p: WeightSequence, r: Sequence) -> RealSequence:
    """``(N^p r)_m = (p_0 r_m + ... + p_m r_0) / P_m``."""
    n = _same_length(p.values, r)
    r = [Fraction(x) for x in r]
    return tuple(_dot_reversed(p.values, r, m) / p.partial_sums[m] for m in range(n))


def invert_mean(p: WeightSequence, s: Sequence) -> RealSequence:
    """The unique ``r`` with ``norlund_mean(p, r) == s``."""
    n = _same_length(p.values, s)
    pv = p.values
    r: list[Fraction] = []
    for m in range(n):
        acc = p.partial_sums[m] * Fraction(s[m])
        for j in range(m):
            acc -= pv[m - j] * r[j]
        r.append(acc / pv[0])
    return tuple(r)


def common_denominator(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Integers ``a`` and ``D`` with ``values[i] == a[i] / D``."""
    d = lcm(*(Fraction(v).denominator for v in values)) if values else 1
    return [Fraction(v).numerator * (d // Fraction(v).denominator) for v in values], d


def solve_kernel(p: WeightSequence, q: WeightSequence) -> KernelSequence:
    """Solve ``q_n = k_0 p_n + ... + k_n p_0`` for ``k`` by forward substitution.

    Runs in integers: with ``p = a/Dp``, ``q = b/Dq`` and
    ``k_n = (Dp/Dq) c_n / a_0**(n+1)`` the recurrence becomes
    ``c_n = b_n a_0**n - sum_{j<n} c_j a_{n-j} a_0**(n-1-j)``.
    """
    n = _same_length(p.values, q.values)
    a, dp = common_denominator(p.values)
    b, dq = common_denominator(q.values)
    a0 = a[0]
    pw = [1]
    for _ in range(n):
        pw.append(pw[-1] * a0)
    c: list[int] = []
    for m in range(n):
        acc = b[m] * pw[m]
        for j in range(m):
            if a[m - j]:
                acc -= c[j] * a[m - j] * pw[m - 1 - j]
        c.append(acc)
    return tuple(Fraction(dp * c[m], dq * pw[m + 1]) for m in range(n))
