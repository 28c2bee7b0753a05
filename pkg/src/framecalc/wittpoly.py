"""Universal polynomials for truncated p-typical Witt vectors.

The addition, multiplication, negation and Frobenius polynomials are produced
once over the integers by inverting the ghost map, with exact division by
p^n at every stage (integrality is the classical Witt construction).  The
symbolic identities w_n(S(X,Y)) = w_n(X) + w_n(Y) etc. serve as the single
correctness oracle; evaluation in characteristic p reduces the integer
coefficients mod p first.
"""

from __future__ import annotations

from functools import lru_cache

import sympy


def _xs(n):
    return [sympy.Symbol(f"X{i}") for i in range(n + 1)]


def _ys(n):
    return [sympy.Symbol(f"Y{i}") for i in range(n + 1)]


def ghost(p, comps, n):
    """w_n = sum_{i<=n} p^i * comps_i^(p^(n-i))."""
    return sum(p ** i * comps[i] ** (p ** (n - i)) for i in range(n + 1))


def _invert_ghost(p, n, target, known):
    """Solve ghost(p, known + [S_n], n) == target for S_n, with exact division."""
    partial = sum(p ** i * known[i] ** (p ** (n - i)) for i in range(n))
    num = sympy.expand(target - partial)
    quo = sympy.Poly(num, *sorted(num.free_symbols, key=str)) if num.free_symbols else None
    if quo is None:
        val = sympy.Integer(num) / p ** n
        assert val == int(val)
        return sympy.Integer(val)
    coeffs = quo.terms()
    out = 0
    for monom, c in coeffs:
        q, r = divmod(int(c), p ** n)
        assert r == 0, "ghost inversion produced a non-integral coefficient"
        out += q * sympy.prod(g ** e for g, e in zip(quo.gens, monom))
    return sympy.expand(out)


@lru_cache(maxsize=None)
def sum_polys(p, n):
    """S_0..S_n with w_k(S) = w_k(X) + w_k(Y)."""
    X, Y = _xs(n), _ys(n)
    polys = []
    for k in range(n + 1):
        target = ghost(p, X, k) + ghost(p, Y, k)
        polys.append(_invert_ghost(p, k, target, polys))
    return tuple(polys)


@lru_cache(maxsize=None)
def prod_polys(p, n):
    """P_0..P_n with w_k(P) = w_k(X) * w_k(Y)."""
    X, Y = _xs(n), _ys(n)
    polys = []
    for k in range(n + 1):
        target = sympy.expand(ghost(p, X, k) * ghost(p, Y, k))
        polys.append(_invert_ghost(p, k, target, polys))
    return tuple(polys)


@lru_cache(maxsize=None)
def neg_polys(p, n):
    """N_0..N_n with w_k(N) = -w_k(X)."""
    X = _xs(n)
    polys = []
    for k in range(n + 1):
        polys.append(_invert_ghost(p, k, -ghost(p, X, k), polys))
    return tuple(polys)


@lru_cache(maxsize=None)
def frob_polys(p, n):
    """F_0..F_n in X_0..X_{n+1} with w_k(F(X)) = w_{k+1}(X)."""
    X = _xs(n + 1)
    polys = []
    for k in range(n + 1):
        polys.append(_invert_ghost(p, k, ghost(p, X, k + 1), polys))
    return tuple(polys)


def verify_ghost_identities(p, n):
    """The build-time oracle: symbolic ghost identities over the integers."""
    X, Y = _xs(n + 1), _ys(n + 1)
    S, P, N, F = sum_polys(p, n), prod_polys(p, n), neg_polys(p, n), frob_polys(p, n)
    for k in range(n + 1):
        if sympy.expand(ghost(p, S, k) - ghost(p, X, k) - ghost(p, Y, k)) != 0:
            return False
        if sympy.expand(ghost(p, P, k) - ghost(p, X, k) * ghost(p, Y, k)) != 0:
            return False
        if sympy.expand(ghost(p, N, k) + ghost(p, X, k)) != 0:
            return False
        if sympy.expand(ghost(p, F, k) - ghost(p, X, k + 1)) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Evaluation form: coefficients reduced mod p, terms as exponent vectors
# ---------------------------------------------------------------------------

def _to_terms(expr, gens, p):
    """[(coeff mod p, exponent tuple)] with zero coefficients dropped."""
    expr = sympy.expand(expr)
    poly = sympy.Poly(expr, *gens)
    out = []
    for monom, c in poly.terms():
        c = int(c) % p
        if c:
            out.append((c, tuple(monom)))
    return tuple(out)


@lru_cache(maxsize=None)
def eval_terms(p, op, n):
    """Mod-p term lists for op in {'sum','prod','neg','frob'} at index n.

    Variable order is X_0..X_k[, Y_0..Y_k] where k = n for sum/prod/neg and
    k = n + 1 for frob.
    """
    if op == "sum":
        expr, gens = sum_polys(p, n)[n], _xs(n) + _ys(n)
    elif op == "prod":
        expr, gens = prod_polys(p, n)[n], _xs(n) + _ys(n)
    elif op == "neg":
        expr, gens = neg_polys(p, n)[n], _xs(n)
    elif op == "frob":
        expr, gens = frob_polys(p, n)[n], _xs(n + 1)
    else:
        raise ValueError(op)
    return _to_terms(expr, gens, p)


def eval_poly(terms, args, ring):
    """Evaluate a mod-p term list at ring elements, memoizing powers."""
    powers = [{0: ring.one()} for _ in args]
    total = ring.zero()
    for c, monom in terms:
        term = ring.from_int(c)
        for i, e in enumerate(monom):
            if e:
                cache = powers[i]
                if e not in cache:
                    cache[e] = args[i] ** e
                term = term * cache[e]
        total = total + term
    return total
