"""
Multiplication through the commutative presentation, independent of the
length recursion in `hecke.mul_im`.

Elements are stored as  sum  theta_x * f(z) * T_w  with w in the finite Weyl
group.  Products only use

* the finite Hecke algebra of W (quadratic relation with the finite length),
* the cross-relation correction series for moving T_s past theta_x,
* freeness of x -> theta_x.

Together with the basis conversion `bern_to_im` this gives a second route to
products of basis elements, used as the oracle for `mul_im`.  Only specs with
trivial R-group are supported here.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .numkernel import Cyclo, LaurentPoly
from .hecke import (
    HeckeElement, HeckeError, HeckeSpec, _blz_correction, mul_im, theta,
)

__all__ = ["BernElement", "bern_basis", "mul_bernstein", "bern_to_im", "im_key_to_bern"]


class BernElement:
    """sum theta_x f(z) T_w, keys (x, finite Weyl index)."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: HeckeSpec, terms: Mapping[tuple[tuple[int, ...], int], LaurentPoly]):
        if len(spec.rgroup) != 1:
            raise HeckeError("commutative-presentation route needs a trivial R-group")
        self.spec = spec
        self.terms = {k: p for k, p in terms.items() if not p.is_zero()}

    def __add__(self, other: "BernElement") -> "BernElement":
        out = dict(self.terms)
        for k, p in other.terms.items():
            s = out.get(k)
            s = p if s is None else s + p
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return BernElement(self.spec, out)

    def scale(self, c) -> "BernElement":
        if isinstance(c, (int, Fraction, Cyclo)):
            c = LaurentPoly.constant(self.spec.zvars, c)
        return BernElement(self.spec, {k: p * c for k, p in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, BernElement):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))


def bern_basis(spec: HeckeSpec, x: tuple[int, ...], wi: int) -> BernElement:
    return BernElement(spec, {(tuple(x), wi): LaurentPoly.constant(spec.zvars, 1)})


def _finite_append_s(spec: HeckeSpec, terms: dict, simple_pos: int) -> dict:
    """Right multiplication by T_s on (x, w)-terms, finite quadratic rule."""
    group = spec.weyl
    out: dict[tuple[tuple[int, ...], int], LaurentPoly] = {}

    def add(key, poly):
        cur = out.get(key)
        cur = poly if cur is None else cur + poly
        if cur.is_zero():
            out.pop(key, None)
        else:
            out[key] = cur

    deform = spec.gen_deform[simple_pos]
    for (x, ui), p in terms.items():
        us = group.right_mult[ui][simple_pos]
        if len(group.words[us]) > len(group.words[ui]):
            add((x, us), p)
        else:
            add((x, us), p)
            add((x, ui), p * deform)
    return out


def _move_through(spec: HeckeSpec, wi: int, y: tuple[int, ...]
                  ) -> dict[tuple[tuple[int, ...], int], LaurentPoly]:
    """T_w theta_y as a Bernstein-normal-form dict (memoized per spec)."""
    memo = getattr(spec, "_bern_move_memo", None)
    if memo is None:
        memo = {}
        spec._bern_move_memo = memo
    got = memo.get((wi, y))
    if got is not None:
        return got
    result = _move_through_raw(spec, wi, y)
    memo[(wi, y)] = result
    return result


def _move_through_raw(spec: HeckeSpec, wi: int, y: tuple[int, ...]
                      ) -> dict[tuple[tuple[int, ...], int], LaurentPoly]:
    group = spec.weyl
    word = group.words[wi]
    if not word:
        return {(y, 0): LaurentPoly.constant(spec.zvars, 1)}
    s = word[-1]
    w1 = 0
    for letter in word[:-1]:
        w1 = group.right_mult[w1][letter]
    root_idx = spec.datum.simples[s]
    sy = spec.datum.reflect(root_idx, y)
    out: dict[tuple[tuple[int, ...], int], LaurentPoly] = {}
    # T_s theta_y = theta_{s y} T_s + correction (a theta-span element)
    for key, p in _finite_append_s(spec, _move_through(spec, w1, sy), s).items():
        cur = out.get(key)
        cur = p if cur is None else cur + p
        out[key] = cur
    for z, c in _blz_correction(spec, y, s).items():
        for (zz, ui), p in _move_through(spec, w1, z).items():
            key = (zz, ui)
            cur = out.get(key)
            add = p * c
            cur = add if cur is None else cur + add
            if cur.is_zero():
                out.pop(key, None)
            else:
                out[key] = cur
    return {k: v for k, v in out.items() if not v.is_zero()}


def mul_bernstein(spec: HeckeSpec, a: BernElement, b: BernElement) -> BernElement:
    """Product computed entirely inside the commutative presentation."""
    out: dict[tuple[tuple[int, ...], int], LaurentPoly] = {}
    for (x, wi), p in a.terms.items():
        for (y, vi), q in b.terms.items():
            moved = _move_through(spec, wi, y)
            for (z, ui), c in moved.items():
                base = {(tuple(pp + qq for pp, qq in zip(x, z)), ui): p * q * c}
                for letter in spec.weyl.words[vi]:
                    base = _finite_append_s(spec, base, letter)
                for key, poly in base.items():
                    cur = out.get(key)
                    cur = poly if cur is None else cur + poly
                    if cur.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = cur
    return BernElement(spec, out)


def bern_to_im(spec: HeckeSpec, e: BernElement) -> HeckeElement:
    """Evaluate sum theta_x f T_w inside the length-presentation algebra."""
    memo = getattr(spec, "_bern_basis_memo", None)
    if memo is None:
        memo = {}
        spec._bern_basis_memo = memo
    total = spec.zero()
    for (x, wi), p in e.terms.items():
        part = memo.get((x, wi))
        if part is None:
            part = mul_im(spec, theta(spec, x), spec.basis(None, wi))
            memo[(x, wi)] = part
        total = total + part.scale(p)
    return total


def im_key_to_bern(spec: HeckeSpec, x: tuple[int, ...], wi: int) -> BernElement:
    """A convenient Bernstein-side element matching theta_x T_w (not N_{t_x w})."""
    return bern_basis(spec, x, wi)


def oracle_pair_check(spec: HeckeSpec, x: tuple[int, ...], wi: int,
                      y: tuple[int, ...], vi: int) -> bool:
    """Compare the two multiplication routes on (theta_x T_w) (theta_y T_v).

    y must be dominant.  Both sides are multiplied on the left by a single
    dominant translation theta_D = N_{t_D} chosen so every translation in
    sight becomes dominant; this clears all inverses, so the comparison uses
    only basis products.  Multiplying by an invertible element preserves
    equality, so this is equivalent to comparing the images directly.
    """
    datum = spec.datum
    if not datum.is_dominant(y):
        raise HeckeError("the right translation must be dominant")
    prod = mul_bernstein(spec, bern_basis(spec, x, wi), bern_basis(spec, y, vi))
    # dominant shift covering x and every translation of the product
    two_rho = [0] * datum.rank
    for i in spec.weyl.positive_indices:
        two_rho = [a + b for a, b in zip(two_rho, datum.roots[i])]
    need = 0
    for z in [x] + [k[0] for k in prod.terms]:
        for i in datum.simples:
            v = datum.pairing(tuple(z), datum.coroots[i])
            if v < 0:
                need = max(need, (-v + 1) // 2)
    shift = tuple(need * b for b in two_rho)
    # left side: theta_D im(prod) with every translation shifted to dominant
    lhs = spec.zero()
    for (z, ui), p in prod.terms.items():
        moved = tuple(a + b for a, b in zip(shift, z))
        term = mul_im(spec, spec.basis(moved, 0), spec.basis(None, ui))
        lhs = lhs + term.scale(p)
    # right side: (N_{t_{D+x}} N_w) (N_{t_y} N_v)
    dx = tuple(a + b for a, b in zip(shift, x))
    left_half = mul_im(spec, spec.basis(dx, 0), spec.basis(None, wi))
    right_half = mul_im(spec, spec.basis(tuple(y), 0), spec.basis(None, vi))
    rhs = mul_im(spec, left_half, right_half)
    return lhs == rhs
