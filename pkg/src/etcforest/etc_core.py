"""Effort-To-Compress (ETC) via Non-sequential Recursive Pair Substitution.

Two routes compute the same quantity:

* :func:`etc` steps through NSRPS in plain Python and records a trace of
  every substitution. Use it when the intermediate sequences matter.
* :func:`etc_value` runs a compiled kernel and returns only the count. The
  tree builder calls it thousands of times per node.

Pair-selection policy (shared by both routes): pairs are counted greedily
left to right without overlap; the most frequent pair wins and ties go to the
pair whose first adjacent occurrence comes earliest. The fresh symbol is one
more than the largest id seen so far in the run.
"""
from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

with warnings.catch_warnings():
    # numba probes scipy on import; a numpy/scipy version mismatch only warns
    warnings.filterwarnings("ignore", message="A NumPy version", category=UserWarning)
    import numba

from .errors import DomainError

__all__ = [
    "PairCount",
    "NsrpsStep",
    "NsrpsTrace",
    "count_pairs",
    "nsrps_step",
    "is_homogeneous",
    "etc",
    "etc_value",
]


@dataclass(frozen=True)
class PairCount:
    pair: tuple[int, int]
    count: int
    first_position: int


@dataclass(frozen=True)
class NsrpsStep:
    pair: tuple[int, int]
    replacement: int
    length_after: int


@dataclass(frozen=True)
class NsrpsTrace:
    """Substitutions performed while compressing one sequence.

    ``sequences`` holds the input followed by the sequence after each step,
    so ``len(sequences) == total_steps + 1``.
    """

    steps: tuple[NsrpsStep, ...] = ()
    sequences: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    @property
    def total_steps(self) -> int:
        return len(self.steps)


def _as_symbols(seq: Sequence[int]) -> tuple[int, ...]:
    symbols = tuple(int(s) for s in seq)
    if any(s < 0 for s in symbols):
        raise DomainError("symbol ids must be non-negative integers")
    return symbols


def is_homogeneous(seq: Sequence[int]) -> bool:
    """True when every symbol is identical (vacuously true for length <= 1)."""
    return len(set(seq)) <= 1


def _greedy_count(symbols: Sequence[int], pair: tuple[int, int]) -> int:
    a, b = pair
    n = 0
    i = 0
    while i < len(symbols) - 1:
        if symbols[i] == a and symbols[i + 1] == b:
            n += 1
            i += 2
        else:
            i += 1
    return n


def count_pairs(seq: Sequence[int]) -> list[PairCount]:
    """Count every distinct adjacent pair, in order of first occurrence.

    Counts are greedy left-to-right non-overlapping, so ``0,0,0`` holds the
    pair ``(0, 0)`` once. Sequences shorter than two give an empty table.
    """
    symbols = _as_symbols(seq)
    first: dict[tuple[int, int], int] = {}
    for i in range(len(symbols) - 1):
        first.setdefault((symbols[i], symbols[i + 1]), i)
    return [PairCount(p, _greedy_count(symbols, p), pos) for p, pos in first.items()]


def _select_pair(table: list[PairCount]) -> tuple[int, int]:
    best = min(table, key=lambda pc: (-pc.count, pc.first_position, pc.pair))
    return best.pair


def _substitute(symbols: Sequence[int], pair: tuple[int, int], new: int) -> tuple[int, ...]:
    a, b = pair
    out = []
    i = 0
    while i < len(symbols):
        if i < len(symbols) - 1 and symbols[i] == a and symbols[i + 1] == b:
            out.append(new)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def nsrps_step(seq: Sequence[int], next_symbol: int | None = None):
    """Apply one pair substitution.

    Parameters
    ----------
    seq : sequence of int
        Non-homogeneous sequence of length >= 2.
    next_symbol : int, optional
        Id for the replacement symbol. Defaults to ``max(seq) + 1``; pass the
        running counter when stepping through a longer NSRPS run.

    Returns
    -------
    new_seq : tuple of int
    pair : tuple of (int, int)
    """
    symbols = _as_symbols(seq)
    if len(symbols) < 2 or is_homogeneous(symbols):
        raise DomainError("step on terminal sequence")
    if next_symbol is None:
        next_symbol = max(symbols) + 1
    pair = _select_pair(count_pairs(symbols))
    return _substitute(symbols, pair, next_symbol), pair


def etc(seq: Sequence[int]) -> tuple[int, NsrpsTrace]:
    """ETC of ``seq`` together with the full substitution trace.

    Examples
    --------
    >>> value, trace = etc([0, 0, 0, 1, 1])
    >>> value
    4
    >>> [s.length_after for s in trace.steps]
    [4, 3, 2, 1]
    """
    symbols = _as_symbols(seq)
    history = [symbols]
    steps = []
    next_symbol = max(symbols, default=-1) + 1
    while not is_homogeneous(symbols):
        symbols, pair = nsrps_step(symbols, next_symbol)
        steps.append(NsrpsStep(pair, next_symbol, len(symbols)))
        history.append(symbols)
        next_symbol += 1
    return len(steps), NsrpsTrace(tuple(steps), tuple(history))


# ---------------------------------------------------------------------------
# compiled route
# ---------------------------------------------------------------------------

# Dense pair tables are used while (alphabet + length)**2 stays below this;
# longer sequences fall back to the sort-based kernel.
_DENSE_LIMIT = 1 << 22


@numba.njit(cache=True, nogil=True)
def _etc_dense(seq, counts, firsts, touched):
    # seq holds dense ids 0..k-1 and is overwritten. counts/firsts are zeroed
    # M*M tables with M >= k + len(seq); they are left zeroed on return.
    n = seq.shape[0]
    if n < 2:
        return 0
    m = 0
    for i in range(n):
        if seq[i] > m:
            m = seq[i]
    width = m + n + 1
    next_sym = m + 1
    length = n
    steps = 0
    while True:
        homog = True
        for i in range(1, length):
            if seq[i] != seq[0]:
                homog = False
                break
        if homog:
            return steps
        n_touched = 0
        last_taken = -2
        for i in range(length - 1):
            a = seq[i]
            b = seq[i + 1]
            key = a * width + b
            if firsts[key] == 0:
                firsts[key] = i + 1
                touched[n_touched] = key
                n_touched += 1
            if a != b:
                counts[key] += 1
            elif last_taken != i - 1 or seq[i - 1] != a:
                counts[key] += 1
                last_taken = i
        best_key = touched[0]
        best_count = counts[best_key]
        for t in range(1, n_touched):
            key = touched[t]
            if counts[key] > best_count:
                best_count = counts[key]
                best_key = key
        for t in range(n_touched):
            counts[touched[t]] = 0
            firsts[touched[t]] = 0
        pa = best_key // width
        pb = best_key % width
        w = 0
        i = 0
        while i < length:
            if i < length - 1 and seq[i] == pa and seq[i + 1] == pb:
                seq[w] = next_sym
                i += 2
            else:
                seq[w] = seq[i]
                i += 1
            w += 1
        length = w
        next_sym += 1
        steps += 1


@numba.njit(cache=True, nogil=True)
def _etc_sorted(seq):
    n = seq.shape[0]
    if n < 2:
        return 0
    m = 0
    for i in range(n):
        if seq[i] > m:
            m = seq[i]
    width = np.int64(m + n + 1)
    next_sym = m + 1
    length = n
    steps = 0
    keys = np.empty(n, dtype=np.int64)
    taken = np.empty(n, dtype=np.int64)
    while True:
        homog = True
        for i in range(1, length):
            if seq[i] != seq[0]:
                homog = False
                break
        if homog:
            return steps
        last_taken = -2
        for i in range(length - 1):
            a = seq[i]
            b = seq[i + 1]
            keys[i] = a * width + b
            if a != b:
                taken[i] = 1
            elif last_taken != i - 1 or seq[i - 1] != a:
                taken[i] = 1
                last_taken = i
            else:
                taken[i] = 0
        order = np.argsort(keys[: length - 1], kind="mergesort")
        best_key = -1
        best_count = -1
        best_first = length
        j = 0
        while j < length - 1:
            key = keys[order[j]]
            first = order[j]
            c = 0
            while j < length - 1 and keys[order[j]] == key:
                c += taken[order[j]]
                j += 1
            if c > best_count or (c == best_count and first < best_first):
                best_count = c
                best_key = key
                best_first = first
        pa = best_key // width
        pb = best_key % width
        w = 0
        i = 0
        while i < length:
            if i < length - 1 and seq[i] == pa and seq[i + 1] == pb:
                seq[w] = next_sym
                i += 2
            else:
                seq[w] = seq[i]
                i += 1
            w += 1
        length = w
        next_sym += 1
        steps += 1


class _Workspace(threading.local):
    def __init__(self):
        self.size = 0
        self.counts = np.zeros(0, dtype=np.int64)
        self.firsts = np.zeros(0, dtype=np.int64)

    def tables(self, width):
        need = width * width
        if need > self.size:
            self.size = max(need, 2 * self.size)
            self.counts = np.zeros(self.size, dtype=np.int64)
            self.firsts = np.zeros(self.size, dtype=np.int64)
        return self.counts, self.firsts


_workspace = _Workspace()


def _dense_ids(seq) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.int64).ravel()
    if arr.size and arr.min() < 0:
        raise DomainError("symbol ids must be non-negative integers")
    # relabelling by first appearance leaves ETC unchanged
    _, first_idx, inverse = np.unique(arr, return_index=True, return_inverse=True)
    rank = np.empty(first_idx.size, dtype=np.int64)
    rank[np.argsort(first_idx, kind="stable")] = np.arange(first_idx.size)
    return rank[inverse]


def etc_kernel_inputs(labels: np.ndarray, n_classes: int):
    """Workspace tables sized for label sequences drawn from ``n_classes`` ids."""
    width = n_classes + len(labels) + 1
    counts, firsts = _workspace.tables(width)
    return counts, firsts, np.empty(max(len(labels), 1), dtype=np.int64)


def etc_value(seq, method: str = "auto") -> int:
    """ETC of ``seq`` using the compiled kernel (no trace).

    ``method`` selects ``"dense"`` pair tables, the ``"sorted"`` fallback, or
    ``"auto"`` to pick by size.
    """
    ids = _dense_ids(seq)
    n = ids.size
    if n < 2:
        return 0
    width = int(ids.max()) + n + 1
    if method == "auto":
        method = "dense" if width * width <= _DENSE_LIMIT else "sorted"
    if method == "dense":
        counts, firsts = _workspace.tables(width)
        return int(_etc_dense(ids, counts, firsts, np.empty(n, dtype=np.int64)))
    if method == "sorted":
        return int(_etc_sorted(ids))
    raise ValueError(f"unknown method {method!r}")
