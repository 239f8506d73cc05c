"""Fixed-point solver for the single-vertex quartic model on a momentum box.

Momenta live in ``[-N, N]^3``.  A field of order ``2k`` is stored as a dense
array with ``3k`` axes ``(x^1_1, x^1_2, x^1_3, x^2_1, ...)``, index ``v + N``
for momentum ``v``.  Entries outside ``F_{3,k}`` (some colour row with a
repeated momentum) are NaN for ``k >= 2``.

The melonic 2-point map is iterated with a damped Jacobi sweep (numba or
numpy, see :mod:`tsde._kernels`).  The tower ``k >= 2`` is linear in the
unknown once the lower orders are known and is iterated the same way.
:func:`evaluate_exact_rhs` evaluates the untruncated equation term by term
from the symbolic generator, so it shares no code with the iteration.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .sde_generator import SIMPLE, X_graph, sde_equation
from .symbolic import labelled_rep

__all__ = ["ModelParams", "LatticeField", "ConvergenceError", "MissingFieldError",
           "solve_melonic_2pt", "solve_melonic_tower", "first_order_2pt",
           "melonic_residual", "tower_residual", "evaluate_exact_rhs", "exact_residual",
           "field_key", "in_F"]

log = logging.getLogger(__name__)

# the largest dense tower array we are willing to allocate
MAX_CELLS = 5_000_000


class ConvergenceError(RuntimeError):
    def __init__(self, msg, residual, log_):
        super().__init__(msg)
        self.residual = residual
        self.log = log_


class MissingFieldError(KeyError):
    pass


@dataclass(frozen=True)
class ModelParams:
    m2: float = 1.0
    lam: float = 0.01
    N: int = 3
    tol: float = 1e-10
    max_iter: int = 10_000
    damping: float = 0.5

    def __post_init__(self):
        if not self.m2 > 0:
            raise ValueError("m2 must be positive")
        if self.N < 1:
            raise ValueError("cutoff N must be >= 1")
        if not 0 < self.damping <= 1:
            raise ValueError("damping must lie in (0, 1]")
        if not self.tol > 0 or self.max_iter < 1:
            raise ValueError("tol must be positive and max_iter >= 1")

    @property
    def L(self):
        return 2 * self.N + 1

    @property
    def mom(self):
        return np.arange(-self.N, self.N + 1)

    def E(self):
        x2 = self.mom.astype(float) ** 2
        return self.m2 + x2[:, None, None] + x2[None, :, None] + x2[None, None, :]


@dataclass
class LatticeField:
    """Values of ``G^{(2k)}`` on the box; ``k`` is the number of black vertices."""
    k: int
    N: int
    values: np.ndarray
    symmetry_reduced: bool = False
    iterations: int = 0
    residual: float = 0.0
    log: list = field(default_factory=list)

    def __call__(self, *X):
        X = np.asarray(X, dtype=int).reshape(self.k, 3)
        if np.abs(X).max() > self.N:
            raise ValueError(f"momentum outside the box [-{self.N}, {self.N}]")
        if self.k > 1 and not in_F(X):
            raise ValueError(f"{X.tolist()} is not in F_(3,{self.k}): a colour row repeats")
        return float(self.values[tuple((X + self.N).ravel())])

    def table(self):
        """``{tuple: value}`` over the defined entries, in lexicographic order."""
        out = {}
        for idx in zip(*np.nonzero(~np.isnan(self.values))):
            key = tuple(int(i) - self.N for i in idx)
            out[key] = float(self.values[idx])
        return out


def in_F(X):
    X = np.asarray(X).reshape(-1, 3)
    return all(len(set(X[:, c].tolist())) == len(X) for c in range(3))


def _inv_diff(mom):
    """``W[i, j] = 1 / (x_i^2 - x_j^2)``, zero where the squares agree."""
    x2 = mom.astype(float) ** 2
    d = x2[:, None] - x2[None, :]
    return np.where(d != 0, 1.0 / np.where(d != 0, d, 1.0), 0.0)


# -- two-point function ----------------------------------------------------------------

def solve_melonic_2pt(p: ModelParams, which=None):
    """Damped iteration of the closed melonic 2-point equation, started at 1/E.

    Returns ``(field, log)`` where ``log`` holds the undamped residual
    ``max |map(G) - G|`` of every iterate.
    """
    E = p.E()
    mom = p.mom
    G = 1.0 / E
    hist = []
    for it in range(1, p.max_iter + 1):
        new = _kernels.sweep(G, E, p.lam, p.damping, mom, which)
        res = float(np.abs(new - G).max()) / p.damping
        hist.append(res)
        G = new
        if not np.isfinite(res):
            break
        if res < p.tol:
            fld = LatticeField(1, p.N, G, iterations=it, log=hist)
            fld.residual = melonic_residual(fld, p)
            _check_2pt(fld, p)
            log.info("melonic 2-point: %d iterations, residual %.3g", it, fld.residual)
            return fld, hist
    raise ConvergenceError(f"no convergence after {len(hist)} iterations "
                           f"(residual {hist[-1]:.3g})", hist[-1], hist)


def _check_2pt(fld, p):
    G = fld.values
    for ax in range(3):
        if not np.array_equal(G, np.flip(G, ax)):
            raise AssertionError(f"sign-flip symmetry broken along colour {ax + 1}")
    T = G.sum(axis=(1, 2))
    if p.lam >= 0 and not (1 + 2 * p.lam * T[:, None, None] / p.E() > 0).all():
        raise AssertionError("dressing factor is not positive")


def melonic_residual(fld, p: ModelParams):
    """Re-evaluate the closed 2-point equation point by point, ``max |LHS - RHS|``."""
    G = fld.values if isinstance(fld, LatticeField) else fld
    mom, N = p.mom, p.N
    worst = 0.0
    for i, j, l in itertools.product(range(p.L), repeat=3):
        x = mom[[i, j, l]]
        E = p.m2 + float(x @ x)
        tad = float(np.sum(G[i]))
        acc = 0.0
        for q in mom:
            if q * q != x[0] * x[0]:
                acc += (G[i, j, l] - G[q + N, j, l]) / (x[0] ** 2 - q * q)
        lhs = (E + 2 * p.lam * tad) * G[i, j, l]
        worst = max(worst, abs(lhs - 1 - 2 * p.lam * acc))
    return worst


def first_order_2pt(p: ModelParams):
    """``dG/dlambda`` at ``lambda = 0`` in exact rational arithmetic.

    With ``G0 = 1/E``: ``G1 = -2 (sum_{q,r} G0(x1,q,r) + sum_q' G0(q,x2,x3)) / E^2``,
    the primed sum skipping ``q^2 = x1^2``.
    """
    m2 = Fraction(p.m2).limit_denominator(10**12)
    mom = range(-p.N, p.N + 1)
    E = lambda a, b, c: m2 + a * a + b * b + c * c
    out = np.empty((p.L,) * 3)
    tad = {a: sum(1 / E(a, b, c) for b in mom for c in mom) for a in mom}
    for a, b, c in itertools.product(mom, repeat=3):
        ex = sum((1 / E(q, b, c) for q in mom if q * q != a * a), Fraction(0))
        out[a + p.N, b + p.N, c + p.N] = float(-2 * (tad[a] + ex) / E(a, b, c) ** 2)
    return out


# -- the melonic tower -----------------------------------------------------------------

@lru_cache(maxsize=16)
def _F_index(k, N):
    L = 2 * N + 1
    rows = np.array(list(itertools.permutations(range(L), k)), dtype=np.int64)  # (P, k)
    a, b, c = np.meshgrid(*(np.arange(len(rows)),) * 3, indexing="ij")
    idx = np.stack([rows[a.ravel()], rows[b.ravel()], rows[c.ravel()]], axis=-1)  # (n, k, 3)
    return idx.reshape(len(idx), 3 * k)


def _lookup(fld, cols):
    return fld.values[tuple(cols.T)]


def solve_melonic_tower(p: ModelParams, k_max, g2=None, which=None):
    """Melonic 2k-point functions for ``k = 1..k_max``; index ``k - 1`` in the result."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if g2 is None:
        g2, _ = solve_melonic_2pt(p, which)
    fields = [g2]
    for k in range(2, k_max + 1):
        fields.append(_solve_order(p, k, fields))
    return fields


def _tower_static(p, k, fields):
    """Per-tuple constants: prefactor, dressing, source and the q-shift table."""
    L, N = p.L, p.N
    if L ** (3 * k) > MAX_CELLS:
        raise ValueError(f"k={k} at N={N} needs {L ** (3 * k)} cells (limit {MAX_CELLS})")
    idx = _F_index(k, N)
    mom = p.mom.astype(float)
    W = _inv_diff(p.mom)
    x11 = idx[:, 0]
    s = mom[[x11, idx[:, 3 * k - 2], idx[:, 3 * k - 1]]]
    c = 2 * p.lam / (p.m2 + (s ** 2).sum(axis=0))
    tad = fields[0].values.sum(axis=(1, 2))[x11]
    src = np.zeros(len(idx))
    for rho in range(2, k + 1):
        lo = fields[rho - 2]
        head = idx[:, : 3 * (rho - 1)]
        moved = head.copy()
        moved[:, 0] = idx[:, 3 * (rho - 1)]
        num = _lookup(lo, head) - _lookup(lo, moved)
        rest = _lookup(fields[k - rho], idx[:, 3 * (rho - 1):])
        src += W[x11, idx[:, 3 * (rho - 1)]] * num * rest
    # q-shifts of x^1_1 that stay inside F_{3,k}
    shape = (L,) * (3 * k)
    others = idx[:, 3::3]
    shifts = []
    for q in range(L):
        w = W[x11, q] * ~(others == q).any(axis=1)
        moved = idx.copy()
        moved[:, 0] = q
        shifts.append((w, np.ravel_multi_index(tuple(moved.T), shape)))
    flat = np.ravel_multi_index(tuple(idx.T), shape)
    return idx, flat, c, tad, src, shifts


def _apply(g, full, flat, c, tad, src, shifts):
    full[flat] = g
    acc = np.zeros_like(g)
    for w, where in shifts:
        acc += w * (g - full[where])
    return c * (src + acc) / (1 + c * tad)


def _solve_order(p, k, fields):
    idx, flat, c, tad, src, shifts = _tower_static(p, k, fields)
    full = np.zeros(p.L ** (3 * k))
    g = np.zeros(len(idx))
    hist = []
    for it in range(1, p.max_iter + 1):
        new = _apply(g, full, flat, c, tad, src, shifts)
        res = float(np.abs(new - g).max()) if len(g) else 0.0
        hist.append(res)
        g = (1 - p.damping) * g + p.damping * new
        if not np.isfinite(res):
            break
        if res < p.tol:
            vals = np.full(p.L ** (3 * k), np.nan)
            vals[flat] = g
            fld = LatticeField(k, p.N, vals.reshape((p.L,) * (3 * k)), iterations=it, log=hist)
            fld.residual = tower_residual(fld, p, fields)
            _check_tower(fld)
            log.info("melonic %d-point: %d iterations, residual %.3g", 2 * k, it, fld.residual)
            return fld
    raise ConvergenceError(f"order {2 * k}: no convergence after {len(hist)} iterations",
                           hist[-1], hist)


def _check_tower(fld):
    G = np.nan_to_num(fld.values, nan=np.inf)
    for c in range(3):
        if not np.array_equal(G, np.flip(G, [3 * i + c for i in range(fld.k)])):
            raise AssertionError(f"order {2 * fld.k}: sign-flip symmetry broken in colour {c + 1}")


def tower_residual(fld, p, lower):
    """``max |G - map(G)|`` of the order-k tower equation over ``F_{3,k}``."""
    idx, flat, c, tad, src, shifts = _tower_static(p, fld.k, lower[: fld.k - 1] + [fld])
    g = fld.values.reshape(-1)[flat]
    full = np.zeros(p.L ** (3 * fld.k))
    return float(np.abs(_apply(g, full, flat, c, tad, src, shifts) - g).max())


# -- exact right-hand side ---------------------------------------------------------------

def field_key(g):
    """Key under which :func:`evaluate_exact_rhs` expects the function of graph ``g``."""
    return labelled_rep(g)[1]


@lru_cache(maxsize=16)
def _equation(k):
    return sde_equation(SIMPLE, X_graph(k))


def _as_array(v):
    return v.values if isinstance(v, LatticeField) else v


def _eval_term(t, fields, X, p, off_domain):
    """Numerical value of one symbolic term; each dummy gets its own broadcast axis."""
    N, L = p.N, p.L
    dums = t.dummies()
    axis = {d: i for i, d in enumerate(dums)}
    nd = len(dums)
    grid = lambda d: np.arange(-N, N + 1).reshape([L if i == axis[d] else 1 for i in range(nd)])

    def val(a):
        if a[0] == "x":
            return np.asarray(X[a[2] - 1][a[1] - 1])
        if a[0] == "q":
            return grid(a)
        raise ValueError(f"unexpected atom {a!r}")

    out = np.full((1,) * nd, float(t.coeff) * p.lam ** t.lambda_pow)
    # a dummy inside a difference quotient ranges over values keeping the shifted
    # tuple in F_{3,k}: it may not hit another entry of its colour row
    for d in {a for pr in t.props if pr[0] == "Ediff" for a in pr[1:] if a[0] == "q"}:
        taken = [x[d[1] - 1] for x in X]
        out = out * ~np.isin(grid(d), taken)
    for pr in t.props:
        if pr[0] == "Einv":
            out = out / (p.m2 + sum(val(a) ** 2 for a in pr[1]))
        else:
            d = (val(pr[1]) ** 2 - val(pr[2]) ** 2).astype(float)
            out = out * np.where(d != 0, 1.0 / np.where(d != 0, d, 1.0), 0.0)
    for text, args in t.factors:
        if text not in fields:
            raise MissingFieldError(text)
        arr = _as_array(fields[text])
        if np.isscalar(arr):
            out = out * arr
            continue
        ix = tuple(val(a) + N for v in args for a in v)
        got = arr[ix]
        if np.isnan(got).any():
            if off_domain == "error":
                raise ValueError(f"{text} evaluated outside its domain")
            got = np.nan_to_num(got, nan=0.0)
        out = out * got
    return float(np.sum(out))


def evaluate_exact_rhs(p: ModelParams, fields, X, off_domain="zero"):
    """Right-hand side of the untruncated equation for ``G^{(2k)}`` at ``X``.

    ``fields`` maps :func:`field_key` texts to arrays, :class:`LatticeField`
    objects or scalars (0 for a dropped function).  Every function the
    equation mentions must be present.  ``off_domain="zero"`` reads NaN
    entries (tuples outside a field's domain) as 0.
    """
    X = [tuple(int(v) for v in x) for x in np.asarray(X).reshape(-1, 3)]
    eq = _equation(len(X))
    return sum(_eval_term(t, fields, X, p, off_domain) for t in eq.rhs)


def exact_residual(p: ModelParams, fields, X, off_domain="zero"):
    """``(1 + dressing) G(X) - RHS`` for the untruncated equation."""
    X = [tuple(int(v) for v in x) for x in np.asarray(X).reshape(-1, 3)]
    eq = _equation(len(X))
    lhs = _eval_term(type(eq.rhs[0])(Fraction(1), 0, (), (eq.lhs,)), fields, X, p, off_domain)
    dress = sum(_eval_term(t, fields, X, p, off_domain) for t in eq.dressing)
    return (1 + dress) * lhs - evaluate_exact_rhs(p, fields, X, off_domain)


def required_fields(k):
    """Keys of every function entering the equation for ``G^{(2k)}``."""
    eq = _equation(k)
    keys = {eq.lhs[0]}
    for t in list(eq.rhs) + list(eq.dressing):
        keys.update(text for text, _ in t.factors)
    return sorted(keys)
