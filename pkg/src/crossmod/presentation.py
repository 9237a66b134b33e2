"""Crossed-module presentations and counting their morphisms.

A presentation has a base group given by generators and relators, principal
generators ``m`` with boundary words ``d0(m)``, and 2-relations, each a
product of terms ``(X, m)^theta`` read left to right.  A morphism into a
finite crossed module ``(G, E, d, act)`` is a pair of assignments
``phi: base gens -> G`` and ``psi: principal gens -> E`` such that ``phi``
kills every relator, ``d(psi(m)) = phi(d0(m))``, and every 2-relation
evaluates to the identity as ``prod (phi(X_i) . psi(m_i))^theta_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._text import ParseError, Token, check_header, check_name, logical_lines
from .algebra import FiniteCrossedModule, evaluate_group_word
from .search import Constraint, build_plan, parallel_count, solutions

Letter = tuple[int, int]
GroupWord = tuple[Letter, ...]


def word_inverse(w: Sequence[Letter]) -> GroupWord:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Sequence[Letter]) -> GroupWord:
    out: list[Letter] = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class PrincipalTerm:
    conjugator: GroupWord
    generator: int
    exponent: int


@dataclass(frozen=True)
class TwoRelation:
    terms: tuple[PrincipalTerm, ...]

    def generators(self) -> set[int]:
        return {t.generator for t in self.terms}


class PresentationInconsistency(ValueError):
    """Some base assignment makes the boundary of a 2-relation nontrivial."""

    def __init__(self, relation: int, witness: tuple[int, ...]):
        self.relation = relation
        self.witness = witness
        super().__init__(
            f"2-relation #{relation + 1} has nontrivial boundary under base "
            f"assignment {witness}"
        )


@dataclass(frozen=True)
class CrossedModulePresentation:
    base_names: tuple[str, ...] = ()
    base_relations: tuple[GroupWord, ...] = ()
    rank_b1: int = 0
    principal_names: tuple[str, ...] = ()
    boundaries: tuple[GroupWord, ...] = ()
    two_relations: tuple[TwoRelation, ...] = ()
    # free-text annotations written as comments; not part of equality
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        nb, np_ = len(self.base_names), len(self.principal_names)
        if len(self.boundaries) != np_:
            raise ValueError("one boundary word per principal generator is required")
        if not 0 <= self.rank_b1 <= nb:
            raise ValueError(f"rank_b1={self.rank_b1} must lie in [0, {nb}]")
        words = list(self.base_relations) + list(self.boundaries)
        words += [t.conjugator for r in self.two_relations for t in r.terms]
        for w in words:
            for g, e in w:
                if not 0 <= g < nb or e not in (1, -1):
                    raise ValueError(f"bad letter ({g}, {e}) in a base word")
        for r in self.two_relations:
            for t in r.terms:
                if not 0 <= t.generator < np_ or t.exponent not in (1, -1):
                    raise ValueError(f"bad principal term {t}")

    @property
    def n_base(self) -> int:
        return len(self.base_names)

    @property
    def n_principal(self) -> int:
        return len(self.principal_names)


EMPTY = CrossedModulePresentation()


# -- counting --------------------------------------------------------------------


def _word_vars(w: Sequence[Letter]) -> set[int]:
    return {g for g, _ in w}


def _relator_constraint(G, w: GroupWord, label: str) -> Constraint:
    ident = G.identity

    def check(values, w=w):
        return evaluate_group_word(G, values, w) == ident

    solve = {}
    occurrences: dict[int, list[int]] = {}
    for pos, (g, _) in enumerate(w):
        occurrences.setdefault(g, []).append(pos)
    for g, where in occurrences.items():
        if len(where) != 1:
            continue
        pos = where[0]
        left, exp, right = w[:pos], w[pos][1], w[pos + 1 :]

        # L x^exp R = 1  =>  x^exp = L^-1 R^-1
        def solver(values, left=left, right=right, exp=exp):
            lv = evaluate_group_word(G, values, left)
            rv = evaluate_group_word(G, values, right)
            x = G.product[G.inverse[lv]][G.inverse[rv]]
            return x if exp == 1 else G.inverse[x]

        solve[g] = solver
    return Constraint(tuple(sorted(_word_vars(w))), check, solve, label=label)


def base_constraints(pres: CrossedModulePresentation, cm: FiniteCrossedModule):
    """Variables and constraints for the base assignments ``phi``.

    Base generator ``i`` is variable ``i``.  Besides the relators, every
    2-relation contributes a check that raises
    :class:`PresentationInconsistency` when its boundary is nontrivial.
    """
    G = cm.base
    nb = pres.n_base
    cons = [_relator_constraint(G, w, f"rel{k}") for k, w in enumerate(pres.base_relations)]

    # Listed after the relators, so only reached by assignments passing them.
    all_base = tuple(range(nb))
    for k, rel in enumerate(pres.two_relations):
        parts = [
            (t.conjugator, pres.boundaries[t.generator], t.exponent) for t in rel.terms
        ]

        def consistent(values, parts=parts, k=k):
            acc = G.identity
            for conj, d0, theta in parts:
                x = evaluate_group_word(G, values, conj)
                y = G.conj(x, evaluate_group_word(G, values, d0))
                acc = G.product[acc][y if theta == 1 else G.inverse[y]]
            if acc != G.identity:
                raise PresentationInconsistency(k, tuple(values[:nb]))
            return True

        cons.append(Constraint(all_base, consistent, label=f"consistency rel2 {k}"))
    return [G.order] * nb, cons, list(range(nb))


class _PrincipalBlock:
    """Principal generators linked by shared 2-relations.

    For a fixed base assignment the number of compatible ``psi`` values is a
    product over blocks, and each block only looks at a few base variables,
    so its count is memoized on those.
    """

    def __init__(self, pres, cm, gens: list[int], rels: list[TwoRelation]):
        self.cm = cm
        self.gens = gens
        self.bds = [pres.boundaries[j] for j in gens]
        pos = {j: i for i, j in enumerate(gens)}
        self.rels = [[(t.conjugator, pos[t.generator], t.exponent) for t in r.terms] for r in rels]
        used = set()
        for w in self.bds:
            used |= _word_vars(w)
        for r in self.rels:
            for conj, _, _ in r:
                used |= _word_vars(conj)
        self.keys = tuple(sorted(used))
        self.memo: dict[tuple[int, ...], int] = {}

    def count(self, phi: Sequence[int]) -> int:
        key = tuple(phi[v] for v in self.keys)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._count(phi)
        return hit

    def _count(self, phi: Sequence[int]) -> int:
        cm = self.cm
        G, E, A = cm.base, cm.principal, cm.action
        fibers = [cm.fibers[evaluate_group_word(G, phi, w)] for w in self.bds]
        if not self.rels:
            out = 1
            for f in fibers:
                out *= len(f)
            return out
        # per term: the row of the action table for phi(conjugator)
        rels = [
            [(A[evaluate_group_word(G, phi, conj)], i, theta) for conj, i, theta in r]
            for r in self.rels
        ]
        Ep, Einv, one = E.product, E.inverse, E.identity
        n = 0
        for psi in itertools.product(*fibers):
            for r in rels:
                acc = one
                for row, i, theta in r:
                    y = row[psi[i]]
                    acc = Ep[acc][y if theta == 1 else Einv[y]]
                if acc != one:
                    break
            else:
                n += 1
        return n


def principal_blocks(pres: CrossedModulePresentation, cm: FiniteCrossedModule) -> list[_PrincipalBlock]:
    parent = list(range(pres.n_principal))

    def find(j: int) -> int:
        while parent[j] != j:
            parent[j] = parent[parent[j]]
            j = parent[j]
        return j

    for r in pres.two_relations:
        gens = [t.generator for t in r.terms]
        for j in gens[1:]:
            parent[find(j)] = find(gens[0])
    groups: dict[int, list[int]] = {}
    for j in range(pres.n_principal):
        groups.setdefault(find(j), []).append(j)
    rels: dict[int, list[TwoRelation]] = {root: [] for root in groups}
    for r in pres.two_relations:
        if r.terms:
            rels[find(r.terms[0].generator)].append(r)
    blocks = [_PrincipalBlock(pres, cm, gens, rels[root]) for root, gens in groups.items()]
    # a 2-relation with no terms is the empty product and always holds
    return blocks


def _count_shard(pres, cm, shard: int, jobs: int) -> int:
    plan = build_plan(*base_constraints(pres, cm))
    blocks = principal_blocks(pres, cm)
    total = 0
    for phi in solutions(plan, shard, jobs):
        n = 1
        for b in blocks:
            n *= b.count(phi)
            if not n:
                break
        total += n
    return total


def count_homs(
    pres: CrossedModulePresentation, cm: FiniteCrossedModule, jobs: int = 1
) -> int:
    """Number of crossed-module morphisms from the presented module to ``cm``.

    Base assignments are enumerated by constraint search; for each, the
    principal generators are counted block by block over the fibers of the
    boundary map.  Raises :class:`PresentationInconsistency` if a base
    assignment satisfying the relators gives some 2-relation a nontrivial
    boundary.
    """
    return parallel_count(_count_shard, (pres, cm), jobs)


def invariant(
    pres: CrossedModulePresentation, cm: FiniteCrossedModule, jobs: int = 1
) -> Fraction:
    """#Hom(pres, cm) / (#E)^rank_b1, exactly."""
    return Fraction(count_homs(pres, cm, jobs), cm.principal.order**pres.rank_b1)


# -- constructions ---------------------------------------------------------------


def _fresh(name: str, taken: set[str]) -> str:
    if name not in taken:
        return name
    k = 1
    while f"{name}{k}" in taken:
        k += 1
    return f"{name}{k}"


def stabilize(pres: CrossedModulePresentation) -> CrossedModulePresentation:
    """Free product with the presentation of Pi_2(D^2, S^1).

    Adds a base generator ``c``, a principal generator ``d`` with boundary
    ``c`` and raises ``rank_b1`` by one.
    """
    c = _fresh("c", set(pres.base_names))
    d = _fresh("d", set(pres.principal_names))
    return CrossedModulePresentation(
        pres.base_names + (c,),
        pres.base_relations,
        pres.rank_b1 + 1,
        pres.principal_names + (d,),
        pres.boundaries + (((pres.n_base, 1),),),
        pres.two_relations,
    )


def free_product(
    p1: CrossedModulePresentation, p2: CrossedModulePresentation
) -> CrossedModulePresentation:
    """Disjoint union of generators and relations; ranks add."""
    nb, np_ = p1.n_base, p1.n_principal

    def shift(w: GroupWord) -> GroupWord:
        return tuple((g + nb, e) for g, e in w)

    taken_b, taken_p = set(p1.base_names), set(p1.principal_names)
    base2, princ2 = [], []
    for nm in p2.base_names:
        nm = _fresh(nm, taken_b)
        taken_b.add(nm)
        base2.append(nm)
    for nm in p2.principal_names:
        nm = _fresh(nm, taken_p)
        taken_p.add(nm)
        princ2.append(nm)

    rels2 = tuple(
        TwoRelation(
            tuple(
                PrincipalTerm(shift(t.conjugator), t.generator + np_, t.exponent)
                for t in r.terms
            )
        )
        for r in p2.two_relations
    )
    return CrossedModulePresentation(
        p1.base_names + tuple(base2),
        p1.base_relations + tuple(shift(w) for w in p2.base_relations),
        p1.rank_b1 + p2.rank_b1,
        p1.principal_names + tuple(princ2),
        p1.boundaries + tuple(shift(w) for w in p2.boundaries),
        p1.two_relations + rels2,
    )


# -- text format -------------------------------------------------------------------


def format_word(w: Sequence[Letter], names: Sequence[str]) -> str:
    if not w:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^-1" for g, e in w)


def serialize(pres: CrossedModulePresentation) -> str:
    """Canonical text: single spaces, declared order, no trailing blanks."""
    bn = pres.base_names
    lines = [f"# {note}" for note in pres.notes]
    lines.append("presentation v1")
    lines.append(" ".join(["base", *bn]))
    lines.append(f"b1 {pres.rank_b1}")
    for w in pres.base_relations:
        lines.append(f"rel {format_word(w, bn)}")
    for name, w in zip(pres.principal_names, pres.boundaries):
        lines.append(f"pgen {name} boundary {format_word(w, bn)}")
    for r in pres.two_relations:
        terms = [
            f"( {format_word(t.conjugator, bn)} ) {pres.principal_names[t.generator]}"
            f" ^ {'+1' if t.exponent == 1 else '-1'}"
            for t in r.terms
        ]
        lines.append(" ".join(["rel2", " ; ".join(terms)]).rstrip())
    return "\n".join(lines) + "\n"


def _parse_word(toks: Sequence[Token], index: dict[str, int]) -> GroupWord:
    if len(toks) == 1 and toks[0].value == "1":
        return ()
    out = []
    for tok in toks:
        name, sep, exp = tok.value.partition("^")
        if sep and exp not in ("-1", "1", "+1"):
            raise ParseError(f"bad exponent in {tok.value!r}", tok.line, tok.col)
        if name not in index:
            raise ParseError(f"undefined base generator {name!r}", tok.line, tok.col)
        out.append((index[name], -1 if exp == "-1" else 1))
    return tuple(out)


def parse_presentation(text: str) -> CrossedModulePresentation:
    """Read the ``presentation v1`` format (inverse of :func:`serialize`)."""
    lines = list(logical_lines(text))
    check_header(lines, "presentation", "v1")
    base: list[str] | None = None
    b1: int | None = None
    rels: list[GroupWord] = []
    pnames: list[str] = []
    bds: list[GroupWord] = []
    rel2_lines: list[list[Token]] = []
    index: dict[str, int] = {}

    for toks in lines[1:]:
        key = toks[0]
        if key.value != "base" and base is None:
            raise ParseError("'base' line must come first", key.line, key.col)
        if key.value == "base":
            if base is not None:
                raise ParseError("duplicate 'base' line", key.line, key.col)
            base = [check_name(t, "generator name") for t in toks[1:]]
            if len(set(base)) != len(base):
                raise ParseError("repeated base generator", key.line, key.col)
            index = {nm: i for i, nm in enumerate(base)}
        elif key.value == "b1":
            if len(toks) != 2 or not toks[1].value.isdigit():
                raise ParseError("expected 'b1 <n>'", key.line, key.col)
            b1 = int(toks[1].value)
        elif key.value == "rel":
            if len(toks) < 2:
                raise ParseError("empty relator", key.line, key.col)
            rels.append(_parse_word(toks[1:], index))
        elif key.value == "pgen":
            if len(toks) < 4 or toks[2].value != "boundary":
                raise ParseError("expected 'pgen <name> boundary <word>'", key.line, key.col)
            nm = check_name(toks[1], "principal generator name")
            if nm in pnames:
                raise ParseError(f"duplicate principal generator {nm!r}", toks[1].line, toks[1].col)
            pnames.append(nm)
            bds.append(_parse_word(toks[3:], index))
        elif key.value == "rel2":
            rel2_lines.append(toks)
        else:
            raise ParseError(f"unknown keyword {key.value!r}", key.line, key.col)

    if base is None:
        raise ParseError("missing 'base' line", lines[0][0].line, 1)
    if b1 is None:
        raise ParseError("missing 'b1' line", lines[0][0].line, 1)
    if b1 > len(base):
        raise ParseError(f"b1={b1} exceeds the number of base generators", lines[0][0].line, 1)

    pindex = {nm: j for j, nm in enumerate(pnames)}
    rel2s = [_parse_rel2(toks, index, pindex) for toks in rel2_lines]
    return CrossedModulePresentation(
        tuple(base), tuple(rels), b1, tuple(pnames), tuple(bds), tuple(rel2s)
    )


def _parse_rel2(toks: list[Token], index, pindex) -> TwoRelation:
    body = toks[1:]
    if not body:
        return TwoRelation(())
    chunks: list[list[Token]] = [[]]
    for t in body:
        if t.value == ";":
            chunks.append([])
        else:
            chunks[-1].append(t)
    terms = []
    for chunk in chunks:
        at = chunk[0] if chunk else toks[0]
        if not chunk or chunk[0].value != "(":
            raise ParseError("expected '( <word> ) <gen> ^ <+1|-1>'", at.line, at.col)
        try:
            close = next(i for i, t in enumerate(chunk) if t.value == ")")
        except StopIteration:
            raise ParseError("missing ')'", at.line, at.col) from None
        rest = chunk[close + 1 :]
        if len(rest) != 3 or rest[1].value != "^" or rest[2].value not in ("+1", "-1", "1"):
            raise ParseError("expected '<gen> ^ <+1|-1>' after ')'", at.line, at.col)
        gname = rest[0]
        if gname.value not in pindex:
            raise ParseError(
                f"undefined principal generator {gname.value!r}", gname.line, gname.col
            )
        word_toks = chunk[1:close]
        if not word_toks:
            raise ParseError("empty conjugator, write '( 1 )'", at.line, at.col)
        terms.append(
            PrincipalTerm(
                _parse_word(word_toks, index),
                pindex[gname.value],
                -1 if rest[2].value == "-1" else 1,
            )
        )
    return TwoRelation(tuple(terms))
