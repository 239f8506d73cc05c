"""Hot loops for orbit enumeration and the lattice solver.

Two interchangeable backends: numba ``@njit`` kernels and pure numpy.
``TSDE_BACKEND=numpy`` forces the fallback; otherwise numba is used when it
imports.
"""
from __future__ import annotations

import itertools
import os
from functools import lru_cache

import numpy as np

try:  # pragma: no cover - exercised through BACKEND
    import numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def backend():
    want = os.environ.get("TSDE_BACKEND", "numba").lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"TSDE_BACKEND must be numba or numpy, got {want!r}")
    if want == "numba" and not _HAVE_NUMBA:
        return "numpy"
    return want


def njit(*args, **kw):
    """``numba.njit`` when available, identity otherwise."""
    if _HAVE_NUMBA:
        return numba.njit(*args, **kw)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


@lru_cache(maxsize=16)
def perm_tables(k):
    """Permutations of ``range(k)`` in lexicographic order, composition and conjugation tables."""
    P = np.array(list(itertools.permutations(range(k))), dtype=np.int64).reshape(-1, k)
    n = len(P)
    index = {tuple(p): i for i, p in enumerate(P.tolist())}
    inv = np.argsort(P, axis=1)
    # conj[g, h] = index of g h g^-1
    conj = np.empty((n, n), dtype=np.int64)
    for g in range(n):
        for h in range(n):
            conj[g, h] = index[tuple(P[g][P[h][inv[g]]].tolist())]
    return P, conj


# -- orbit enumeration -----------------------------------------------------------

def orbits_numpy(conj, m):
    """Orbits of ``m``-tuples of group elements under simultaneous conjugation.

    Tuples are coded mixed-radix, first entry most significant, so the least
    code of an orbit is its lexicographically least member.  Returns
    ``(rep_codes, stabiliser_sizes)`` sorted by code.
    """
    n = conj.shape[0]
    N = n ** m
    codes = np.arange(N, dtype=np.int64)
    digits = np.empty((m, N), dtype=np.int64)
    rest = codes.copy()
    for c in range(m - 1, -1, -1):
        digits[c] = rest % n
        rest //= n
    best = np.full(N, N, dtype=np.int64)
    stab = np.zeros(N, dtype=np.int64)
    for g in range(n):
        img = np.zeros(N, dtype=np.int64)
        for c in range(m):
            img = img * n + conj[g][digits[c]]
        stab += img == codes
        np.minimum(best, img, out=best)
    reps = np.nonzero(best == codes)[0]
    return reps, stab[reps]


@njit(cache=True)
def _orbits_numba(conj, m):
    n = conj.shape[0]
    N = n ** m
    seen = np.zeros(N, dtype=np.bool_)
    reps = np.empty(N, dtype=np.int64)
    stabs = np.empty(N, dtype=np.int64)
    digits = np.empty(m, dtype=np.int64)
    nrep = 0
    for code in range(N):
        if seen[code]:
            continue
        rest = code
        for c in range(m - 1, -1, -1):
            digits[c] = rest % n
            rest //= n
        st = 0
        for g in range(n):
            img = 0
            for c in range(m):
                img = img * n + conj[g, digits[c]]
            seen[img] = True
            if img == code:
                st += 1
        reps[nrep] = code
        stabs[nrep] = st
        nrep += 1
    return reps[:nrep], stabs[:nrep]


def orbits(conj, m, which=None):
    which = which or backend()
    if m == 0:
        return np.zeros(1, dtype=np.int64), np.array([conj.shape[0]], dtype=np.int64)
    if which == "numba":
        return _orbits_numba(conj, m)
    return orbits_numpy(conj, m)


def decode(code, n, m):
    out = []
    for _ in range(m):
        out.append(code % n)
        code //= n
    return out[::-1]


# -- melonic two-point sweep -----------------------------------------------------

@njit(cache=True)
def _sweep_numba(G, E, lam, damping, mom):
    """One damped Jacobi sweep of the melonic two-point map on the full box."""
    L = G.shape[0]
    out = np.empty_like(G)
    for i in range(L):
        x1 = mom[i]
        tad = 0.0
        for j in range(L):
            for l in range(L):
                tad += G[i, j, l]
        for j in range(L):
            for l in range(L):
                acc = 0.0
                g = G[i, j, l]
                for q in range(L):
                    d = x1 * x1 - mom[q] * mom[q]
                    if d != 0:
                        acc += (g - G[q, j, l]) / d
                new = (1.0 + 2.0 * lam * acc) / (E[i, j, l] + 2.0 * lam * tad)
                out[i, j, l] = (1.0 - damping) * g + damping * new
    return out


def melonic_map_numpy(G, E, lam, mom):
    """Right-hand side of the melonic two-point fixed-point map (no damping)."""
    x2 = mom.astype(float) ** 2
    d = x2[:, None] - x2[None, :]                       # (x1, q)
    with np.errstate(divide="ignore"):
        w = np.where(d != 0, 1.0 / np.where(d != 0, d, 1.0), 0.0)
    tad = G.sum(axis=(1, 2))
    acc = w.sum(axis=1)[:, None, None] * G - np.einsum("iq,qjl->ijl", w, G)
    return (1.0 + 2.0 * lam * acc) / (E + 2.0 * lam * tad[:, None, None])


def sweep(G, E, lam, damping, mom, which=None):
    which = which or backend()
    if which == "numba":
        return _sweep_numba(G, E, float(lam), float(damping), mom.astype(np.float64))
    return (1.0 - damping) * G + damping * melonic_map_numpy(G, E, lam, mom)
