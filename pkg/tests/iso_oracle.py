"""Brute-force graph oracles.

These are deliberately naive reference implementations used to cross-check
the hashing engine: exhaustive permutation search for isomorphism, a
canonical form obtained by minimizing over all node permutations, and a
plain color-refinement equivalence check that shares no code with the
production hash path.

Graphs are (n, edges) pairs: nodes are 0..n-1, edges a set of directed
(u, v) pairs, no self loops. Node labels, when present, are a dict
node -> string.
"""

import itertools
from collections import Counter


def permuted(edges, perm):
    return frozenset((perm[u], perm[v]) for u, v in edges)


def are_isomorphic(n1, edges1, n2, edges2, labels1=None, labels2=None):
    """Exhaustive search over all node bijections."""
    if n1 != n2 or len(edges1) != len(edges2):
        return False
    e2 = frozenset(edges2)
    for perm in itertools.permutations(range(n1)):
        if labels1 is not None:
            if any(labels1[v] != labels2[perm[v]] for v in range(n1)):
                continue
        if permuted(edges1, perm) == e2:
            return True
    return False


def canonical_form(n, edges):
    """Lexicographically smallest edge set over all node permutations."""
    best = None
    for perm in itertools.permutations(range(n)):
        cand = tuple(sorted((perm[u], perm[v]) for u, v in edges))
        if best is None or cand < best:
            best = cand
    return (n, best)


def is_weakly_connected(n, edges):
    if n <= 1:
        return True
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def color_refinement_equivalent(n1, edges1, n2, edges2, labels1=None, labels2=None):
    """True when 1-WL (color refinement with in/out multisets) cannot
    separate the two graphs.

    Runs joint refinement on the disjoint union using integer colors and
    dictionary renaming only -- no hashing -- so it is an independent check
    on the production digest path. Compares each graph's color multiset at
    every round, including the initial one, until the joint partition
    stabilizes.
    """
    n = n1 + n2
    edges = list(edges1) + [(u + n1, v + n1) for u, v in edges2]
    preds = {v: [] for v in range(n)}
    succs = {v: [] for v in range(n)}
    for u, v in edges:
        succs[u].append(v)
        preds[v].append(u)

    if labels1 is None:
        colors = {v: 0 for v in range(n)}
    else:
        palette = {}
        colors = {}
        for v in range(n):
            lab = labels1[v] if v < n1 else labels2[v - n1]
            colors[v] = palette.setdefault(lab, len(palette))

    def split_multisets():
        m1 = Counter(colors[v] for v in range(n1))
        m2 = Counter(colors[v] for v in range(n1, n))
        return m1, m2

    m1, m2 = split_multisets()
    if m1 != m2:
        return False

    num_colors = len(set(colors.values()))
    while True:
        signatures = {}
        new_colors = {}
        for v in range(n):
            sig = (
                colors[v],
                tuple(sorted(colors[u] for u in preds[v])),
                tuple(sorted(colors[w] for w in succs[v])),
            )
            new_colors[v] = signatures.setdefault(sig, len(signatures))
        colors = new_colors
        m1, m2 = split_multisets()
        if m1 != m2:
            return False
        if len(signatures) == num_colors:
            return True
        num_colors = len(signatures)


def enumerate_canonical_digraphs(max_nodes, connected_only=True):
    """All directed graphs with 1..max_nodes nodes, one representative per
    isomorphism class, via brute-force canonicalization.

    For n = 5 the naive per-graph minimum over 120 permutations is too slow
    in pure Python, so the same exhaustive minimization is vectorized with
    numpy over 20-bit adjacency masks. Still brute force: every permutation
    of every labeled graph is considered.
    """
    import numpy as np

    reps = []
    for n in range(1, max_nodes + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        nbits = len(pairs)
        bit_of = {p: k for k, p in enumerate(pairs)}

        count = 1 << nbits
        masks = np.arange(count, dtype=np.uint32)
        canon = masks.copy()
        half = nbits // 2
        lo_mask = (1 << half) - 1 if half else 0
        lo = masks & lo_mask
        hi = masks >> half
        for perm in itertools.permutations(range(n)):
            # bit k moves to position of the permuted pair
            dest = [bit_of[(perm[i], perm[j])] for (i, j) in pairs]
            t_lo = np.zeros(1 << half, dtype=np.uint32)
            for m in range(1 << half):
                out = 0
                for k in range(half):
                    if m >> k & 1:
                        out |= 1 << dest[k]
                t_lo[m] = out
            t_hi = np.zeros(1 << (nbits - half), dtype=np.uint32)
            for m in range(1 << (nbits - half)):
                out = 0
                for k in range(nbits - half):
                    if m >> k & 1:
                        out |= 1 << dest[half + k]
                t_hi[m] = out
            np.minimum(canon, t_lo[lo] | t_hi[hi], out=canon)

        for mask in np.nonzero(canon == masks)[0]:
            edges = frozenset(pairs[k] for k in range(nbits) if mask >> k & 1)
            if connected_only and not is_weakly_connected(n, edges):
                continue
            reps.append((n, edges))
    return reps
