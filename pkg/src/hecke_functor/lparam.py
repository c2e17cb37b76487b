"""
Unramified toy parameters for products of type-A groups and tori.

A parameter stores one exact eigenvalue list per factor (the Frobenius
image in the dual torus); inertia and the SL_2 part are trivial throughout.
For an SL-type factor the list matters only up to a scalar and the stored
representative is normalized to q-exponent sum zero and angle sum zero
modulo one.

The component group of a parameter is computed factor by factor inside
SL_n(C).  For GL- and PGL-type factors the relevant fixed-list stabilizer is
a product of blocks intersected with the determinant-one hyperplane, which
is connected, so the contribution is trivial.  For an SL-type factor with a
multiplicity-free list the components correspond to the pairs (w, lambda)
with w(list) = lambda * (list) coordinatewise; the group law is checked by
multiplying canonical determinant-one monomial representatives.  The
characters tau(g) are obtained by pairing g with the commutator cocycle
c_h(Fr) = h phi(Fr) h^-1 phi(Fr)^-1, a root of unity scalar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .finrep import FiniteGroup, RepOrChar, irreducibles
from .numkernel import Cyclo, cyclo_root_of_unity
from .weyl import Eig

__all__ = [
    "GroupTag", "ToyParameter", "ComponentGroupResult", "LParamError",
    "component_group", "tau_character", "relevant_enhancements",
    "parameter_to_json", "parameter_from_json",
]


class LParamError(ValueError):
    pass


FACTOR_KINDS = ("GL", "SL", "PGL", "T")


@dataclass(frozen=True)
class GroupTag:
    """A finite product of GL_n / SL_n / PGL_n factors and split tori,
    with one central character exponent per factor (the inner-twist label:
    the character zeta -> zeta^k of mu_n; 0 on the split form and tori)."""

    factors: tuple[tuple[str, int], ...]
    zeta: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple((str(k), int(n)) for k, n in self.factors)
        object.__setattr__(self, "factors", factors)
        for kind, n in factors:
            if kind not in FACTOR_KINDS:
                raise LParamError(f"unknown factor kind {kind!r}")
            if n < 1 and kind != "T":
                raise LParamError("factor size must be positive")
            if kind == "T" and n < 0:
                raise LParamError("torus rank must be nonnegative")
        zeta = tuple(self.zeta) if self.zeta else (0,) * len(factors)
        if len(zeta) != len(factors):
            raise LParamError("zeta must carry one exponent per factor")
        object.__setattr__(self, "zeta", tuple(int(z) for z in zeta))

    @staticmethod
    def single(kind: str, n: int, zeta: int = 0) -> "GroupTag":
        return GroupTag(((kind, n),), (zeta,))

    def center_order(self, factor: int) -> int:
        kind, n = self.factors[factor]
        return 1 if kind == "T" else n


@dataclass(frozen=True)
class ToyParameter:
    """Frobenius eigenvalue lists, one per factor; inertia and SL_2 trivial."""

    factors: tuple[tuple[Eig, ...], ...]

    unramified = True
    sl2_trivial = True

    def __post_init__(self):
        object.__setattr__(self, "factors",
                           tuple(tuple(e) for e in self.factors))

    @staticmethod
    def make(tag: GroupTag, lists: Sequence[Sequence[Eig]]) -> "ToyParameter":
        if len(lists) != len(tag.factors):
            raise LParamError("one eigenvalue list per factor required")
        out = []
        for (kind, n), eigs in zip(tag.factors, lists):
            eigs = tuple(eigs)
            expected = n if kind != "T" else n
            if len(eigs) != expected:
                raise LParamError(f"factor of size {n} needs {expected} eigenvalues")
            if kind == "SL":
                eigs = _normalize_projective(eigs)
            if kind == "PGL":
                total_q = sum(e.q_exp for e in eigs)
                total_a = sum(e.angle for e in eigs) % 1
                if total_q != 0 or total_a != 0:
                    raise LParamError(
                        "a PGL-type list must have determinant one on the nose")
            out.append(eigs)
        return ToyParameter(tuple(out))

    @staticmethod
    def principal_cycle(tag: GroupTag) -> "ToyParameter":
        """The (1, zeta_n, ..., zeta_n^(n-1)) parameter for a single factor."""
        (kind, n), = tag.factors
        return ToyParameter.make(tag, [[Eig.root_of_unity(k, n) for k in range(n)]])


def _normalize_projective(eigs: tuple[Eig, ...]) -> tuple[Eig, ...]:
    """Distinguished representative of the list modulo scalars.

    The q-mean is subtracted outright; for the angles, every shift by
    mean + j/n makes the angle sum vanish modulo one, and the wraparound
    makes these genuinely different tuples, so the lexicographically least
    one is kept as the canonical representative.
    """
    n = len(eigs)
    mean_q = sum(e.q_exp for e in eigs) / n
    mean_a = sum(e.angle for e in eigs) / n
    candidates = []
    for j in range(n):
        shift = mean_a + Fraction(j, n)
        cand = tuple(Eig(e.q_exp - mean_q, e.angle - shift) for e in eigs)
        candidates.append(cand)
    return min(candidates, key=lambda c: tuple((e.q_exp, e.angle) for e in c))


def _is_multiplicity_free(eigs: tuple[Eig, ...]) -> bool:
    return len(set(eigs)) == len(eigs)


# ---------------------------------------------------------------------------
# component groups


@dataclass(frozen=True)
class FactorComponents:
    """Components of the lifted centralizer for one factor: pairs (w, lambda).

    w is a permutation tuple acting by (w . list)_i = list_{w^-1(i)}, lambda
    the matching scalar; trivial factors store just the identity pair.
    """
    kind: str
    n: int
    pairs: tuple[tuple[tuple[int, ...], Eig], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)


class ComponentGroupResult:
    """The component group with its markings.

    * `group`: the finite group of components (a FiniteGroup);
    * marked subgroups: "Z_phi" (image of the center of the product of
      SL_n(C)'s) and "S_phi_lift" (components meeting the on-the-nose
      stabilizer, i.e. the image of the component group of a GL-lift);
    * `pair_data[i]` gives the per-factor (w, lambda) pairs of element i.
    """

    def __init__(self, tag: GroupTag, phi: ToyParameter,
                 factor_components: list[FactorComponents]):
        self.tag = tag
        self.phi = phi
        self.factors = factor_components
        sizes = [fc.size for fc in factor_components]
        elements = list(itertools.product(*[range(s) for s in sizes]))
        index = {e: i for i, e in enumerate(elements)}
        self.elements = elements

        def mul(a, b):
            out = []
            for fa, fb, fc in zip(a, b, factor_components):
                wa, la = fc.pairs[fa]
                wb, lb = fc.pairs[fb]
                wc = tuple(wa[wb[i]] for i in range(len(wa)))
                out.append(next(k for k, (w, _) in enumerate(fc.pairs) if w == wc))
            return tuple(out)

        table = [[index[mul(a, b)] for b in elements] for a in elements]
        self.group = FiniteGroup(table)
        # center image: scalar matrices sit in the identity component
        self.group.mark_subgroup("Z_phi", {self.group.identity})
        lift = []
        for i, e in enumerate(elements):
            if all(fc.pairs[fi][1].is_one() for fi, fc in zip(e, factor_components)):
                lift.append(i)
        self.group.mark_subgroup("S_phi_lift", lift)

    @property
    def order(self) -> int:
        return self.group.order

    def pair_data(self, element: int):
        return tuple(fc.pairs[fi] for fi, fc in
                     zip(self.elements[element], self.factors))

    def quotient_order(self) -> int:
        return self.group.order // len(self.group.marked_subgroups["S_phi_lift"])

    def is_cyclic(self) -> bool:
        return any(self.group.element_order(i) == self.group.order
                   for i in range(self.group.order))

    def representative_matrix(self, element: int, factor: int):
        """Canonical determinant-one monomial representative over Cyclo.

        Per factor the generator of the cyclic component group gets one fixed
        monomial matrix; other components use its powers, so canonical
        representatives commute on the nose.
        """
        fc = self.factors[factor]
        if fc.kind != "SL" or fc.size == 1:
            n = max(fc.n, 1)
            return _identity_matrix(n)
        gen = _cyclic_generator_index(fc)
        base = _monomial_matrix(fc.pairs[gen][0])
        # element's factor component = gen^a for some a
        target = self.elements[element][factor]
        power = 0
        cur = next(k for k, (w, _) in enumerate(fc.pairs)
                   if w == tuple(range(fc.n)))
        mat = _identity_matrix(fc.n)
        while cur != target:
            mat = _mat_mul_cyclo(mat, base)
            wc = tuple(fc.pairs[cur][0][fc.pairs[gen][0][i]] for i in range(fc.n))
            cur = next(k for k, (w, _) in enumerate(fc.pairs) if w == wc)
            power += 1
            if power > fc.size:
                raise LParamError("internal: component group is not cyclic")
        return mat


def _identity_matrix(n: int):
    return tuple(tuple(Cyclo.rational(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def _monomial_matrix(w: tuple[int, ...]):
    """P_w with a sign fix in the first column so the determinant is one."""
    n = len(w)
    sign = _perm_sign(w)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if w[j] == i:
                v = Cyclo.rational(sign if j == 0 else 1)
            else:
                v = Cyclo.rational(0)
            row.append(v)
        rows.append(tuple(row))
    return tuple(rows)


def _perm_sign(w: Sequence[int]) -> int:
    s = 1
    for i in range(len(w)):
        for j in range(i + 1, len(w)):
            if w[i] > w[j]:
                s = -s
    return s


def _mat_mul_cyclo(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)),
                           Cyclo.rational(0)) for j in range(n))
                 for i in range(n))


def _cyclic_generator_index(fc: FactorComponents) -> int:
    """Index of a generating pair of the cyclic pair group."""
    m = fc.size
    for k, (w, lam) in enumerate(fc.pairs):
        # order of the permutation w
        order, cur = 1, w
        ident = tuple(range(fc.n))
        while cur != ident:
            cur = tuple(w[cur[i]] for i in range(fc.n))
            order += 1
        if order == m:
            return k
    raise LParamError("internal: multiplicity-free component group must be cyclic")


def _sl_factor_components(eigs: tuple[Eig, ...]) -> FactorComponents:
    n = len(eigs)
    if not _is_multiplicity_free(eigs):
        raise LParamError("SL-type factors require a multiplicity-free list")
    position = {e: i for i, e in enumerate(eigs)}
    pairs = []
    # candidate scalars: lambda must map the first eigenvalue somewhere
    for target in range(n):
        lam = eigs[target] / eigs[0]
        scaled = [Eig(e.q_exp + lam.q_exp, e.angle + lam.angle) for e in eigs]
        if set(scaled) != set(eigs):
            continue
        # (w . list)_i = list_{w^-1 i} = lam * list_i:
        # w^-1(i) = position of lam * eigs[i]
        w_inv = tuple(position[s] for s in scaled)
        w = tuple(w_inv.index(i) for i in range(n))
        if lam.q_exp != 0:
            raise LParamError("internal: scalar of finite order has a q-part")
        pairs.append((w, lam))
    return FactorComponents("SL", n, tuple(pairs))


def _trivial_factor_components(kind: str, n: int) -> FactorComponents:
    ident = tuple(range(n)) if kind != "T" else ()
    return FactorComponents(kind, n if kind != "T" else 0,
                            ((ident, Eig()),))


def component_group(tag: GroupTag, phi: ToyParameter) -> ComponentGroupResult:
    """Component group of the lifted centralizer, with markings.

    GL/PGL factors contribute trivially (their on-the-nose stabilizer
    inside SL_n(C) is a connected block group); SL factors contribute the
    cyclic group of (w, lambda) pairs; tori contribute trivially.
    """
    if len(phi.factors) != len(tag.factors):
        raise LParamError("parameter does not match the tag")
    comps = []
    for (kind, n), eigs in zip(tag.factors, phi.factors):
        if kind == "SL":
            comps.append(_sl_factor_components(tuple(eigs)))
        else:
            comps.append(_trivial_factor_components(kind, n))
    return ComponentGroupResult(tag, phi, comps)


# ---------------------------------------------------------------------------
# tau characters and relevance


def _commutator_scalar(eigs: tuple[Eig, ...], w: tuple[int, ...]) -> Cyclo:
    """c_h(Fr) = h t h^-1 t^-1 for a monomial h with permutation part w:
    the constant value of eigs[w^-1(i)] / eigs[i], a root of unity."""
    n = len(eigs)
    w_inv = tuple(w.index(i) for i in range(n))
    ratios = {eigs[w_inv[i]] / eigs[i] for i in range(n)}
    if len(ratios) != 1:
        raise LParamError("internal: commutator is not scalar")
    lam = ratios.pop()
    if lam.q_exp != 0:
        raise LParamError("internal: commutator scalar has a q-part")
    a = lam.angle
    return cyclo_root_of_unity(a.numerator, a.denominator)


def tau_character(tag: GroupTag, phi: ToyParameter,
                  g: Sequence[Sequence[int]],
                  result: ComponentGroupResult | None = None) -> RepOrChar:
    """The character <g, c_h> of the component group attached to g.

    g gives one integer cocharacter vector per factor (length n for matrix
    factors, ignored entries for tori): the class of g in the cocharacter
    lattice of the adjoint torus modulo the image of the group's own torus.
    Only the coordinate sum enters for SL factors; GL and PGL factors have
    surjective torus maps, so their contribution is trivial.
    """
    if result is None:
        result = component_group(tag, phi)
    g = [tuple(int(x) for x in gf) for gf in g]
    if len(g) != len(tag.factors):
        raise LParamError("g needs one vector per factor")
    for (kind, n), gf in zip(tag.factors, g):
        if kind != "T" and len(gf) != n:
            raise LParamError("cocharacter vector has wrong length")
    values = []
    for i in range(result.order):
        total = Cyclo.rational(1)
        for f, (kind, n) in enumerate(tag.factors):
            if kind != "SL":
                continue
            w, _lam = result.pair_data(i)[f]
            c = _commutator_scalar(phi.factors[f], w)
            total = total * c ** sum(g[f])
        values.append(total)
    return RepOrChar(result.group, tuple(values))


def relevant_enhancements(tag: GroupTag, phi: ToyParameter,
                          result: ComponentGroupResult | None = None
                          ) -> list[RepOrChar]:
    """Characters of the component group whose pullback to the center of the
    product of SL_n(C)'s equals the tag's inner-twist label."""
    if result is None:
        result = component_group(tag, phi)
    out = []
    for rho in irreducibles(result.group):
        ok = True
        for f, (kind, n) in enumerate(tag.factors):
            if kind == "T":
                continue
            # the center generator zeta_n I is a scalar matrix, hence lies in
            # the identity component: the pullback of rho to mu_n is trivial,
            # and relevance asks it to be the zeta-label of the factor
            pullback = cyclo_root_of_unity(0, 1)
            label = cyclo_root_of_unity(tag.zeta[f] % n, n)
            if pullback != label:
                ok = False
                break
        if ok:
            out.append(rho)
    return out


# ---------------------------------------------------------------------------
# serialization


_KIND_TO_JSON = {"GL": "GLn", "SL": "SLn", "PGL": "PGLn", "T": "Torus"}
_KIND_FROM_JSON = {v: k for k, v in _KIND_TO_JSON.items()}


def parameter_to_json(tag: GroupTag, phi: ToyParameter):
    factors = []
    for (kind, n), eigs in zip(tag.factors, phi.factors):
        factors.append({"tag": _KIND_TO_JSON[kind], "n": n,
                        "eigs": [e.to_json() for e in eigs]})
    return {"factors": factors, "zeta": list(tag.zeta)}


def parameter_from_json(data) -> tuple[GroupTag, ToyParameter]:
    kinds = []
    lists = []
    for fac in data["factors"]:
        kinds.append((_KIND_FROM_JSON[fac["tag"]], int(fac["n"])))
        lists.append([Eig.from_json(e) for e in fac["eigs"]])
    tag = GroupTag(tuple(kinds), tuple(data.get("zeta") or [0] * len(kinds)))
    return tag, ToyParameter.make(tag, lists)
