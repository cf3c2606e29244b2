"""Prefix-doubling suffix ranking with numpy.

Only prefixes up to a fixed horizon matter to callers, so doubling stops
once the compared prefix length reaches ``horizon``.  Suffixes that agree on
that many symbols keep a common rank.  Every intermediate rank array is
kept: ``levels[t]`` ranks suffixes by their first ``2**t`` symbols, which
makes longest-common-prefix queries a binary lifting over the levels.
"""

from __future__ import annotations

import numpy as np


class SuffixRanks:
    def __init__(self, text: np.ndarray, horizon: int):
        text = np.asarray(text)
        n = len(text)
        self.n = n
        _, rank = np.unique(text, return_inverse=True)
        rank = rank.astype(np.int64)
        levels = [rank]
        order = np.argsort(rank, kind="stable")
        span = 1
        while span < horizon and n > 1:
            shifted = np.full(n, -1, dtype=np.int64)
            shifted[: n - span] = rank[span:]
            # ranks are < n, so the pair packs into one int64 sort key
            key = rank * (n + 1) + (shifted + 1)
            order = np.argsort(key)
            sk = key[order]
            step = np.empty(n, dtype=np.int64)
            step[0] = 0
            step[1:] = sk[1:] != sk[:-1]
            new_rank = np.empty(n, dtype=np.int64)
            new_rank[order] = np.cumsum(step)
            rank = new_rank
            levels.append(rank)
            span *= 2
            if rank[order[-1]] == n - 1:
                break
        self.order = order
        self.levels = levels

    def lcp(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Common prefix length of suffixes ``i`` and ``j`` (elementwise),
        exact up to ``2 ** len(levels) - 1``."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        acc = np.zeros(len(i), dtype=np.int64)
        n = self.n
        for t in range(len(self.levels) - 1, -1, -1):
            level = self.levels[t]
            ii, jj = i + acc, j + acc
            ok = (ii < n) & (jj < n)
            same = np.zeros(len(i), dtype=bool)
            same[ok] = level[ii[ok]] == level[jj[ok]]
            acc += same.astype(np.int64) << t
        return acc
