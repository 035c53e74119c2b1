"""Maximal-rank orbit types as gluings of pantalons.

A maximal-rank type is a cubic graph whose legs are the punctures and the
labelled boundary circles.  Pruning the trees hanging off it leaves

* genus 0: a single tree, rooted at a leg;
* genus 1: a cycle carrying a cyclic word of rooted trees;
* genus g >= 2: a cubic core with 2g-2 vertices and 3g-3 edges, every core
  edge carrying a (possibly empty) word of rooted trees.

Types are generated orderly: for a core, a tuple of words (one per edge, as
integer ids in a fixed global order) is emitted only when it is the
lexicographic minimum over the edge automorphism group of the core.

Trees: a leg is ``(0, 0)`` for a puncture and ``(0, k)`` for label k, an inner
vertex is ``(1, left, right)`` with ``left <= right``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
from numba import njit

from .orbit_types import Node, OrbitType, _canon
from .surface_model import SurfaceSignature

PUNCTURE_LEG = (0, 0)


# ---------------------------------------------------------------------------
# trees and words over leaf sets (p punctures, sorted label tuple)


def subsets(ls):
    p, L = ls
    for p1 in range(p + 1):
        for k in range(len(L) + 1):
            for L1 in itertools.combinations(L, k):
                yield (p1, L1), (p - p1, tuple(x for x in L if x not in L1))


@lru_cache(maxsize=None)
def trees(ls) -> tuple:
    """Rooted binary trees (up to isomorphism) with exactly the given leaves."""
    p, L = ls
    n = p + len(L)
    if n == 0:
        return ()
    if n == 1:
        return (PUNCTURE_LEG,) if p else ((0, L[0]),)
    out = set()
    for a, b in subsets(ls):
        if a[0] + len(a[1]) == 0 or b[0] + len(b[1]) == 0 or a > b:
            continue
        for t1 in trees(a):
            for t2 in trees(b):
                out.add((1, min(t1, t2), max(t1, t2)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def words(ls) -> tuple:
    """Sequences of trees whose leaves are exactly ls (empty allowed)."""
    p, L = ls
    if p + len(L) == 0:
        return ((),)
    out = []
    for a, b in subsets(ls):
        if a[0] + len(a[1]) == 0:
            continue
        for t in trees(a):
            for w in words(b):
                out.append((t,) + w)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# graph assembly


class _Builder:
    def __init__(self):
        self.nodes = []  # [genus, punctures, labels]
        self.edges = []

    def node(self) -> int:
        self.nodes.append([0, 0, []])
        return len(self.nodes) - 1

    def leg(self, v: int, leaf) -> None:
        if leaf[1] == 0:
            self.nodes[v][1] += 1
        else:
            self.nodes[v][2].append(leaf[1])

    def hang(self, tree, v: int) -> None:
        if tree[0] == 0:
            self.leg(v, tree)
            return
        y = self.node()
        self.edges.append((v, y))
        self.hang(tree[1], y)
        self.hang(tree[2], y)

    def word(self, w, u: int, v: int) -> None:
        prev = u
        for tree in w:
            x = self.node()
            self.edges.append((prev, x))
            self.hang(tree, x)
            prev = x
        self.edges.append((prev, v))

    def build(self, sig: SurfaceSignature) -> OrbitType:
        nodes = tuple(Node(g, p, tuple(sorted(L))) for g, p, L in self.nodes)
        return OrbitType(nodes, tuple(self.edges), sig)


def _word_stats(w) -> tuple:
    """(nodes, extra edges, all nodes pantalons) for a word hung on one core edge."""
    b = _Builder()
    u, v = b.node(), b.node()
    b.word(w, u, v)
    deg = [0] * len(b.nodes)
    for x, y in b.edges:
        deg[x] += 1
        deg[y] += 1
    pant = all(g == 0 and p + len(L) + deg[i] == 3
               for i, (g, p, L) in enumerate(b.nodes) if i > 1)
    return len(b.nodes) - 2, len(b.edges) - 1, pant


# ---------------------------------------------------------------------------
# cores


@lru_cache(maxsize=None)
def cubic_cores(g: int) -> tuple:
    """Connected cubic multigraphs (loops allowed) with 2g-2 vertices."""
    V, E = 2 * g - 2, 3 * g - 3
    blank = tuple((0,) for _ in range(V))
    level = {(): ()}
    for _ in range(E):
        nxt = {}
        for edges in level.values():
            deg = [0] * V
            for u, v in edges:
                deg[u] += 1
                deg[v] += 1
            for u in range(V):
                for v in range(u, V):
                    if u == v and deg[u] > 1:
                        continue
                    if u != v and (deg[u] > 2 or deg[v] > 2):
                        continue
                    ne = tuple(sorted(edges + ((u, v),)))
                    nodes, code, _ = _canon(blank, ne)
                    nxt.setdefault(code, ne)
        level = nxt
    out = []
    for code in sorted(level):
        edges = level[code]
        parent = list(range(V))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for u, v in edges:
            parent[find(u)] = find(v)
        if len({find(x) for x in range(V)}) == 1:
            out.append(code)
    return tuple(out)


def edge_automorphisms(V: int, edges) -> list:
    """Automorphisms of a multigraph as maps edge -> (image edge, reversed)."""
    E = len(edges)
    target = {}
    for i, (u, v) in enumerate(edges):
        target.setdefault((min(u, v), max(u, v)), []).append(i)
    out = set()
    for perm in itertools.permutations(range(V)):
        groups = {}
        ok = True
        for i, (u, v) in enumerate(edges):
            a, b = perm[u], perm[v]
            key = (min(a, b), max(a, b))
            if key not in target:
                ok = False
                break
            groups.setdefault(key, []).append(i)
        if not ok or any(len(groups[k]) != len(target[k]) for k in groups):
            continue
        choices = []
        for key in sorted(groups):
            src, dst = groups[key], target[key]
            opts = []
            for p in itertools.permutations(dst):
                flips = []
                for i, j in zip(src, p):
                    u, v = edges[i]
                    if u == v:
                        flips.append((False, True))
                    else:
                        flips.append(((perm[u], perm[v]) != tuple(edges[j]),))
                for fl in itertools.product(*flips):
                    opts.append(tuple(zip(src, p, fl)))
            choices.append(opts)
        for combo in itertools.product(*choices):
            mp = [None] * E
            for grp in combo:
                for i, j, f in grp:
                    mp[i] = (j, f)
            out.add(tuple(mp))
    return sorted(out)


# ---------------------------------------------------------------------------
# word tables for the scan kernel


class WordTable:
    """All words over sub-leafsets of (m, 1..q), with integer ids in sorted order."""

    def __init__(self, m: int, q: int):
        self.m, self.q = m, q
        labels = tuple(range(1, q + 1))
        allw = set()
        parts = {}
        for p in range(m + 1):
            for mask in range(1 << q):
                L = tuple(k for k in labels if mask >> (k - 1) & 1)
                ws = words((p, L))
                parts[p * (1 << q) + mask] = ws
                allw.update(ws)
        self.order = sorted(allw)
        ids = {w: i for i, w in enumerate(self.order)}
        self.rev = np.array([ids[w[::-1]] for w in self.order], dtype=np.int64)
        n_parts = (m + 1) << q
        ptr = [0]
        flat = []
        for k in range(n_parts):
            flat.extend(sorted(ids[w] for w in parts[k]))
            ptr.append(len(flat))
        self.ptr = np.array(ptr, dtype=np.int64)
        self.flat = np.array(flat, dtype=np.int64)
        stats = [_word_stats(w) for w in self.order]
        self.nodes = np.array([s[0] for s in stats], dtype=np.int64)
        self.extra = np.array([s[1] for s in stats], dtype=np.int64)
        self.pant = np.array([s[2] for s in stats], dtype=np.bool_)


@lru_cache(maxsize=8)
def word_table(m: int, q: int) -> WordTable:
    return WordTable(m, q)


def _aut_arrays(edges, V: int):
    """Inverse automorphism maps: position j of the image takes edge src[a, j]."""
    auts = edge_automorphisms(V, edges)
    E = len(edges)
    src = np.zeros((len(auts), E), dtype=np.int64)
    flip = np.zeros((len(auts), E), dtype=np.bool_)
    for a, mp in enumerate(auts):
        for e, (j, f) in enumerate(mp):
            src[a, j] = e
            flip[a, j] = f
    avail = np.zeros((len(auts), E), dtype=np.int64)
    for a in range(len(auts)):
        for k in range(E):
            J = 0
            while J < E and src[a, J] <= k:
                J += 1
            avail[a, k] = J
    return src, flip, avail


@njit(cache=True)
def _prefix_ok(ws, k, src, flip, avail, rev):
    for a in range(src.shape[0]):
        J = avail[a, k]
        for j in range(J):
            x = ws[src[a, j]]
            if flip[a, j]:
                x = rev[x]
            if x != ws[j]:
                if x < ws[j]:
                    return False
                break
    return True


@njit(cache=True)
def _scan(E, m, q, ptr, flat, rev, src, flip, avail, wnodes, wextra, wpant,
          base_nodes, base_edges, out, emit):
    """Orderly scan of word tuples for one core.

    Returns (types, min nodes, max nodes, min edges, max edges, non-pantalon types).
    When ``emit`` is set, the word tuples are written to ``out``.
    """
    full = (1 << q) - 1
    nq = 1 << q
    ws = np.zeros(E, dtype=np.int64)
    rem_p = np.zeros(E + 1, dtype=np.int64)
    rem_m = np.zeros(E + 1, dtype=np.int64)
    cur_p = np.zeros(E, dtype=np.int64)
    cur_m = np.zeros(E, dtype=np.int64)
    pos = np.zeros(E, dtype=np.int64)
    end = np.zeros(E, dtype=np.int64)
    started = np.zeros(E, dtype=np.bool_)
    count = 0
    nmin = 1 << 40
    nmax = -1
    emin = 1 << 40
    emax = -1
    nonpant = 0
    rem_p[0] = m
    rem_m[0] = full
    k = 0
    started[0] = False
    while k >= 0:
        # advance level k to its next word
        found = False
        last = k == E - 1
        while True:
            if started[k] and pos[k] + 1 < end[k]:
                pos[k] += 1
                found = True
                break
            # move to next part
            if not started[k]:
                started[k] = True
                if last:
                    cur_p[k] = rem_p[k]
                    cur_m[k] = rem_m[k]
                else:
                    cur_p[k] = 0
                    cur_m[k] = rem_m[k]
            else:
                if last:
                    break
                if cur_m[k] == 0:
                    if cur_p[k] == rem_p[k]:
                        break
                    cur_p[k] += 1
                    cur_m[k] = rem_m[k]
                else:
                    cur_m[k] = (cur_m[k] - 1) & rem_m[k]
            part = cur_p[k] * nq + cur_m[k]
            if ptr[part + 1] > ptr[part]:
                pos[k] = ptr[part]
                end[k] = ptr[part + 1]
                found = True
                break
        if not found:
            started[k] = False
            k -= 1
            continue
        ws[k] = flat[pos[k]]
        if not _prefix_ok(ws, k, src, flip, avail, rev):
            continue
        if last:
            nodes = base_nodes
            edges = base_edges
            pant = True
            for e in range(E):
                nodes += wnodes[ws[e]]
                edges += wextra[ws[e]]
                pant = pant and wpant[ws[e]]
            if emit:
                for e in range(E):
                    out[count, e] = ws[e]
            count += 1
            nmin = min(nmin, nodes)
            nmax = max(nmax, nodes)
            emin = min(emin, edges)
            emax = max(emax, edges)
            if not pant:
                nonpant += 1
        else:
            rem_p[k + 1] = rem_p[k] - cur_p[k]
            rem_m[k + 1] = rem_m[k] & ~cur_m[k]
            k += 1
            started[k] = False
    return count, nmin, nmax, emin, emax, nonpant


# ---------------------------------------------------------------------------
# public entry points


def _rooted_types(sig: SurfaceSignature):
    g, m, q = sig.genus, sig.punctures, sig.boundary
    if g == 0:
        if m + q < 4:
            return
        root = (0, 1) if q else PUNCTURE_LEG
        rest = (m if q else m - 1, tuple(range(2, q + 1)) if q else ())
        seen = set()
        for tree in trees(rest):
            b = _Builder()
            y = b.node()
            b.leg(y, root)
            b.hang(tree[1], y)
            b.hang(tree[2], y)
            ot = b.build(sig)
            if not q:
                # rooting at an unlabelled leg is not unique
                code = _canon([x.key() for x in ot.nodes], ot.edges)[:2]
                if code in seen:
                    continue
                seen.add(code)
            yield ot
    elif g == 1:
        if m + q == 0:
            b = _Builder()
            x = b.node()
            b.edges.append((x, x))
            yield b.build(sig)
            return
        seen = set()
        for w in words((m, tuple(range(1, q + 1)))):
            if not w:
                continue
            n = len(w)
            key = min(min(w[s:] + w[:s], tuple(reversed(w[s:] + w[:s]))) for s in range(n))
            if key != w:
                continue
            b = _Builder()
            xs = [b.node() for _ in range(n)]
            for i, tree in enumerate(w):
                b.hang(tree, xs[i])
                b.edges.append((xs[i], xs[(i + 1) % n]))
            yield b.build(sig)


def _core_types(sig: SurfaceSignature):
    g, m, q = sig.genus, sig.punctures, sig.boundary
    T = word_table(m, q)
    V, E = 2 * g - 2, 3 * g - 3
    for core in cubic_cores(g):
        src, flip, avail = _aut_arrays(core, V)
        args = (E, m, q, T.ptr, T.flat, T.rev, src, flip, avail, T.nodes, T.extra, T.pant, V, E)
        n = _scan(*args, np.zeros((1, E), dtype=np.int64), False)[0]
        out = np.zeros((max(n, 1), E), dtype=np.int64)
        _scan(*args, out, True)
        for row in out[:n]:
            b = _Builder()
            for _ in range(V):
                b.node()
            for e, (u, v) in enumerate(core):
                b.word(T.order[row[e]], u, v)
            yield b.build(sig)


def maximal_types(sig: SurfaceSignature):
    """All maximal-rank orbit types as OrbitType values (one per orbit)."""
    if sig.genus >= 2:
        yield from _core_types(sig)
    else:
        yield from _rooted_types(sig)


def scan_maximal(sig: SurfaceSignature) -> dict:
    """Count maximal-rank types without materializing them.

    Reports the type count together with the observed ranges of node and
    edge counts and the number of types having a non-pantalon node.
    """
    g, m, q = sig.genus, sig.punctures, sig.boundary
    if g < 2:
        stats = {"types": 0, "nodes": set(), "edges": set(), "non_pantalon": 0}
        for ot in maximal_types(sig):
            stats["types"] += 1
            stats["nodes"].add(len(ot.nodes))
            stats["edges"].add(ot.r)
            if not all(ot.node_data(v)[0] == 0 and ot.node_data(v)[1] + ot.node_data(v)[2] == 3
                       for v in range(len(ot.nodes))):
                stats["non_pantalon"] += 1
        return stats
    T = word_table(m, q)
    V, E = 2 * g - 2, 3 * g - 3
    stats = {"types": 0, "nodes": set(), "edges": set(), "non_pantalon": 0}
    dummy = np.zeros((1, E), dtype=np.int64)
    for core in cubic_cores(g):
        src, flip, avail = _aut_arrays(core, V)
        n, nmin, nmax, emin, emax, bad = _scan(E, m, q, T.ptr, T.flat, T.rev, src, flip, avail,
                                               T.nodes, T.extra, T.pant, V, E, dummy, False)
        if n:
            stats["nodes"].update({int(nmin), int(nmax)})
            stats["edges"].update({int(emin), int(emax)})
        stats["types"] += int(n)
        stats["non_pantalon"] += int(bad)
    return stats
