"""Knot-with-bands diagrams: data model, text format, colorings, extraction.

The format records the combinatorics a reader takes off a drawing, not its
planar geometry.  Sign conventions (normative)::

    crossing    under_out = over^s under_in over^-s
    under_thin  arc[i+1]  = over^s . arc[i]
    under_band  arc[i+1]  = f^s arc[i] f^-s,   f = color of the over band arc

Band end patterns, for the band arc adjacent to the end::

    case 1: d(e) = y^-1 x     case 2: d(e) = x^-1 y
    case 3: d(e) = y x^-1     case 4: d(e) = x y^-1
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ._text import ParseError, Token, check_header, check_name, logical_lines
from .algebra import FiniteCrossedModule
from .presentation import (
    CrossedModulePresentation,
    GroupWord,
    PrincipalTerm,
    TwoRelation,
    format_word,
    free_reduce,
    word_inverse,
)
from .search import Constraint, build_plan, count, parallel_count, solutions


@dataclass(frozen=True)
class Crossing:
    over: str
    under_in: str
    under_out: str
    sign: int


@dataclass(frozen=True)
class BandEnd:
    case: int
    x: str
    y: str


@dataclass(frozen=True)
class Band:
    name: str
    arc_count: int
    first_end: BandEnd
    last_end: BandEnd


@dataclass(frozen=True)
class UnderThin:
    band: str
    step: int  # transition step -> step + 1
    over: str
    sign: int


@dataclass(frozen=True)
class UnderBand:
    band: str
    step: int
    over_band: str
    over_arc: int
    sign: int


@dataclass(frozen=True)
class MaximalCircle:
    name: str
    terms: tuple[tuple[str, int, int], ...]  # (band, arc, theta)


@dataclass(frozen=True)
class KwbDiagram:
    circles: int
    arcs: tuple[tuple[str, int], ...]  # (name, circle)
    crossings: tuple[Crossing, ...] = ()
    bands: tuple[Band, ...] = ()
    events: tuple[UnderThin | UnderBand, ...] = ()
    maximal_circles: tuple[MaximalCircle, ...] = ()

    @property
    def arc_names(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.arcs)

    def band(self, name: str) -> Band:
        return next(b for b in self.bands if b.name == name)

    def band_events(self, name: str) -> list[UnderThin | UnderBand]:
        return sorted((ev for ev in self.events if ev.band == name), key=lambda ev: ev.step)

    @property
    def euler_characteristic(self) -> int:
        """minima - saddles + maxima of the surface the diagram describes."""
        return self.circles - len(self.bands) + len(self.maximal_circles)


@dataclass
class Coloring:
    thin: dict[str, int] = field(default_factory=dict)
    band: dict[tuple[str, int], int] = field(default_factory=dict)


@dataclass
class ConsistencyReport:
    violations: list[tuple[str, Coloring]]  # (band name, witness)
    checked: int

    @property
    def clean(self) -> bool:
        return not self.violations


# -- text format -------------------------------------------------------------------


def _kv(toks: list[Token], keys: tuple[str, ...], line_tok: Token) -> dict[str, Token]:
    out: dict[str, Token] = {}
    for t in toks:
        k, sep, v = t.value.partition("=")
        if not sep or k not in keys:
            raise ParseError(f"unexpected field {t.value!r}", t.line, t.col)
        if k in out:
            raise ParseError(f"field {k!r} given twice", t.line, t.col)
        out[k] = Token(v, t.line, t.col + len(k) + 1)
    missing = [k for k in keys if k not in out]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", line_tok.line, line_tok.col)
    return out


def _sign(tok: Token) -> int:
    if tok.value not in ("+", "-"):
        raise ParseError(f"sign must be + or -, got {tok.value!r}", tok.line, tok.col)
    return 1 if tok.value == "+" else -1


def _int(tok: Token, lo: int, hi: int | None = None) -> int:
    try:
        v = int(tok.value)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok.value!r}", tok.line, tok.col) from None
    if v < lo or (hi is not None and v > hi):
        raise ParseError(f"value {v} out of range", tok.line, tok.col)
    return v


def _band_arc(tok: Token) -> tuple[str, int]:
    band, dot, arc = tok.value.rpartition(".")
    if not dot:
        raise ParseError(f"expected <band>.<arc>, got {tok.value!r}", tok.line, tok.col)
    check_name(Token(band, tok.line, tok.col), "band name")
    return band, _int(Token(arc, tok.line, tok.col + len(band) + 1), 1)


def parse_diagram(text: str) -> KwbDiagram:
    """Read and validate the ``kwb v1`` format.

    Raises :class:`ParseError` with the line and column of the first problem.
    """
    lines = list(logical_lines(text))
    check_header(lines, "kwb", "v1")
    circles: int | None = None
    arcs: dict[str, tuple[int, Token]] = {}
    crossings: list[tuple[Crossing, Token]] = []
    bands: dict[str, tuple[int, Token]] = {}
    ends: dict[tuple[str, str], tuple[BandEnd, Token]] = {}
    events: list[tuple[UnderThin | UnderBand, Token]] = []
    maximal: list[tuple[MaximalCircle, list[Token]]] = []

    for toks in lines[1:]:
        key, rest = toks[0], toks[1:]
        k = key.value
        if k == "circles":
            if circles is not None or len(rest) != 1:
                raise ParseError("expected a single 'circles <n>' line", key.line, key.col)
            circles = _int(rest[0], 0)
        elif k == "arc":
            if len(rest) != 3 or rest[1].value != "circle":
                raise ParseError("expected 'arc <name> circle <i>'", key.line, key.col)
            name = check_name(rest[0], "arc name")
            c = _int(rest[2], 0)
            if name in arcs:
                prev = arcs[name][0]
                msg = (
                    f"arc {name!r} placed on circles {prev} and {c}"
                    if prev != c
                    else f"arc {name!r} declared twice"
                )
                raise ParseError(msg, rest[0].line, rest[0].col)
            arcs[name] = (c, rest[2])
        elif k == "crossing":
            f = _kv(rest, ("over", "under_in", "under_out", "sign"), key)
            crossings.append(
                (Crossing(f["over"].value, f["under_in"].value, f["under_out"].value, _sign(f["sign"])), key)
            )
            for fld in ("over", "under_in", "under_out"):
                check_name(f[fld], "arc name")
        elif k == "band":
            if len(rest) != 3 or rest[1].value != "arcs":
                raise ParseError("expected 'band <name> arcs <k>'", key.line, key.col)
            name = check_name(rest[0], "band name")
            if name in bands:
                raise ParseError(f"band {name!r} declared twice", rest[0].line, rest[0].col)
            bands[name] = (_int(rest[2], 1), key)
        elif k == "end":
            if len(rest) != 5 or rest[1].value not in ("first", "last"):
                raise ParseError("expected 'end <band> first|last case=.. x=.. y=..'", key.line, key.col)
            f = _kv(rest[2:], ("case", "x", "y"), key)
            slot = (rest[0].value, rest[1].value)
            if slot in ends:
                raise ParseError(f"{slot[1]} end of band {slot[0]!r} given twice", key.line, key.col)
            ends[slot] = (BandEnd(_int(f["case"], 1, 4), f["x"].value, f["y"].value), key)
        elif k == "under_thin":
            f = _kv(rest, ("band", "step", "over", "sign"), key)
            events.append(
                (UnderThin(f["band"].value, _int(f["step"], 1), f["over"].value, _sign(f["sign"])), key)
            )
        elif k == "under_band":
            f = _kv(rest, ("band", "step", "over", "sign"), key)
            ob, oa = _band_arc(f["over"])
            events.append(
                (UnderBand(f["band"].value, _int(f["step"], 1), ob, oa, _sign(f["sign"])), key)
            )
        elif k == "maximal":
            if not rest:
                raise ParseError("expected 'maximal <name> ...'", key.line, key.col)
            name = check_name(rest[0], "maximal circle name")
            terms = []
            for t in rest[1:]:
                ba, colon, th = t.value.rpartition(":")
                if not colon or th not in ("+1", "-1", "1"):
                    raise ParseError(f"expected <band>.<arc>:<+1|-1>, got {t.value!r}", t.line, t.col)
                b, a = _band_arc(Token(ba, t.line, t.col))
                terms.append((b, a, -1 if th == "-1" else 1))
            maximal.append((MaximalCircle(name, tuple(terms)), rest[1:]))
        else:
            raise ParseError(f"unknown keyword {k!r}", key.line, key.col)

    head = lines[0][0]
    if circles is None:
        raise ParseError("missing 'circles' line", head.line, head.col)

    # references
    for name, (c, tok) in arcs.items():
        if c >= circles:
            raise ParseError(f"circle index {c} of arc {name!r} out of range", tok.line, tok.col)
    used = {c for c, _ in arcs.values()}
    for c in range(circles):
        if c not in used:
            raise ParseError(f"circle {c} has no arcs", head.line, head.col)

    def need_arc(name: str, tok: Token) -> None:
        if name not in arcs:
            raise ParseError(f"undefined arc {name!r}", tok.line, tok.col)

    for cr, tok in crossings:
        for a in (cr.over, cr.under_in, cr.under_out):
            need_arc(a, tok)
        if arcs[cr.under_in][0] != arcs[cr.under_out][0]:
            raise ParseError(
                f"under arcs {cr.under_in!r} and {cr.under_out!r} lie on different circles",
                tok.line,
                tok.col,
            )

    band_objs = []
    for name, (k_arcs, tok) in bands.items():
        for which in ("first", "last"):
            if (name, which) not in ends:
                raise ParseError(f"band {name!r} has no {which} end", tok.line, tok.col)
        band_objs.append(Band(name, k_arcs, ends[(name, "first")][0], ends[(name, "last")][0]))
    for (bname, _), (end, tok) in ends.items():
        if bname not in bands:
            raise ParseError(f"undefined band {bname!r}", tok.line, tok.col)
        need_arc(end.x, tok)
        need_arc(end.y, tok)

    def need_band_arc(b: str, a: int, tok: Token) -> None:
        if b not in bands:
            raise ParseError(f"undefined band {b!r}", tok.line, tok.col)
        if not 1 <= a <= bands[b][0]:
            raise ParseError(f"band {b!r} has no arc {a}", tok.line, tok.col)

    steps: dict[str, dict[int, Token]] = {b: {} for b in bands}
    for ev, tok in events:
        if ev.band not in bands:
            raise ParseError(f"undefined band {ev.band!r}", tok.line, tok.col)
        if ev.step >= bands[ev.band][0]:
            raise ParseError(
                f"band {ev.band!r} has no transition {ev.step}->{ev.step + 1}", tok.line, tok.col
            )
        if ev.step in steps[ev.band]:
            raise ParseError(
                f"transition {ev.step} of band {ev.band!r} given twice", tok.line, tok.col
            )
        steps[ev.band][ev.step] = tok
        if isinstance(ev, UnderThin):
            need_arc(ev.over, tok)
        else:
            need_band_arc(ev.over_band, ev.over_arc, tok)
    for b, (k_arcs, tok) in bands.items():
        missing = [i for i in range(1, k_arcs) if i not in steps[b]]
        if missing:
            raise ParseError(
                f"band {b!r} is missing the event for transition {missing[0]}->{missing[0] + 1}",
                tok.line,
                tok.col,
            )
    for mc, toks in maximal:
        for (b, a, _), t in zip(mc.terms, toks):
            need_band_arc(b, a, t)

    return KwbDiagram(
        circles,
        tuple((n, c) for n, (c, _) in arcs.items()),
        tuple(c for c, _ in crossings),
        tuple(band_objs),
        tuple(ev for ev, _ in events),
        tuple(m for m, _ in maximal),
    )


def serialize_diagram(d: KwbDiagram) -> str:
    sg = {1: "+", -1: "-"}
    out = ["kwb v1", f"circles {d.circles}"]
    out += [f"arc {n} circle {c}" for n, c in d.arcs]
    out += [
        f"crossing over={c.over} under_in={c.under_in} under_out={c.under_out} sign={sg[c.sign]}"
        for c in d.crossings
    ]
    for b in d.bands:
        out.append(f"band {b.name} arcs {b.arc_count}")
        for which, e in (("first", b.first_end), ("last", b.last_end)):
            out.append(f"end {b.name} {which} case={e.case} x={e.x} y={e.y}")
    for ev in d.events:
        if isinstance(ev, UnderThin):
            out.append(f"under_thin band={ev.band} step={ev.step} over={ev.over} sign={sg[ev.sign]}")
        else:
            out.append(
                f"under_band band={ev.band} step={ev.step} "
                f"over={ev.over_band}.{ev.over_arc} sign={sg[ev.sign]}"
            )
    for m in d.maximal_circles:
        terms = [f"{b}.{a}:{'+1' if th == 1 else '-1'}" for b, a, th in m.terms]
        out.append(" ".join(["maximal", m.name, *terms]))
    return "\n".join(out) + "\n"


# -- colorings ---------------------------------------------------------------------


def pattern_word(case: int, x: int, y: int) -> GroupWord:
    """Boundary word of the band arc at an end, in arc-generator indices."""
    return {
        1: ((y, -1), (x, 1)),
        2: ((x, -1), (y, 1)),
        3: ((y, 1), (x, -1)),
        4: ((x, 1), (y, -1)),
    }[case]


class _Layout:
    """Variable numbering: thin arcs first, then band arcs band by band."""

    def __init__(self, d: KwbDiagram):
        self.thin = {name: i for i, (name, _) in enumerate(d.arcs)}
        self.band: dict[tuple[str, int], int] = {}
        for b in d.bands:
            for a in range(1, b.arc_count + 1):
                self.band[(b.name, a)] = len(self.thin) + len(self.band)
        self.n_thin = len(self.thin)
        self.n = self.n_thin + len(self.band)


def coloring_constraints(
    d: KwbDiagram,
    cm: FiniteCrossedModule,
    *,
    impose_last_end: bool = True,
    impose_maximal: bool = True,
):
    """Variables and constraints whose solutions are the colorings of ``d``."""
    G, E = cm.base, cm.principal
    Gp, Ginv, Ep, Einv, A = G.product, G.inverse, E.product, E.inverse, cm.action
    bd, fibers = cm.boundary.image, cm.fibers
    L = _Layout(d)
    domains = [G.order] * L.n_thin + [E.order] * (L.n - L.n_thin)
    cons: list[Constraint] = []

    def gpow(x: int, s: int) -> int:
        return x if s == 1 else Ginv[x]

    # (a) Wirtinger relations
    for cr in d.crossings:
        o, u, v, s = L.thin[cr.over], L.thin[cr.under_in], L.thin[cr.under_out], cr.sign

        def fwd(values, o=o, u=u, s=s):
            x = gpow(values[o], s)
            return Gp[Gp[x][values[u]]][Ginv[x]]

        def back(values, o=o, v=v, s=s):
            x = gpow(values[o], -s)
            return Gp[Gp[x][values[v]]][Ginv[x]]

        cons.append(
            Constraint(
                tuple(sorted({o, u, v})),
                lambda values, v=v, fwd=fwd: values[v] == fwd(values),
                {v: fwd, u: back} if len({o, u, v}) == 3 else {},
                label="crossing",
            )
        )

    # (c), (d) band events
    for ev in d.events:
        i, j = L.band[(ev.band, ev.step)], L.band[(ev.band, ev.step + 1)]
        if isinstance(ev, UnderThin):
            o, s = L.thin[ev.over], ev.sign

            def fwd(values, o=o, i=i, s=s):
                return A[gpow(values[o], s)][values[i]]

            def back(values, o=o, j=j, s=s):
                return A[gpow(values[o], -s)][values[j]]

            vs = (o, i, j)
        else:
            f, s = L.band[(ev.over_band, ev.over_arc)], ev.sign

            def conj(values, f, s, src):
                x = values[f] if s == 1 else Einv[values[f]]
                return Ep[Ep[x][values[src]]][Einv[x]]

            def fwd(values, f=f, i=i, s=s, conj=conj):
                return conj(values, f, s, i)

            def back(values, f=f, j=j, s=s, conj=conj):
                return conj(values, f, -s, j)

            vs = (f, i, j)
        solve = {j: fwd, i: back} if len(set(vs)) == 3 else {}
        cons.append(
            Constraint(
                tuple(sorted(set(vs))),
                lambda values, j=j, fwd=fwd: values[j] == fwd(values),
                solve,
                label=f"event {ev.band}.{ev.step}",
            )
        )

    # (b) band ends
    for b in d.bands:
        ends = [(b.first_end, 1)]
        if impose_last_end:
            ends.append((b.last_end, b.arc_count))
        for end, a in ends:
            var = L.band[(b.name, a)]
            w = pattern_word(end.case, L.thin[end.x], L.thin[end.y])

            def target(values, w=w):
                (g1, e1), (g2, e2) = w
                return Gp[gpow(values[g1], e1)][gpow(values[g2], e2)]

            cons.append(
                Constraint(
                    tuple(sorted({var, *(g for g, _ in w)})),
                    lambda values, var=var, target=target: bd[values[var]] == target(values),
                    restrict=(var, lambda values, target=target: fibers[target(values)]),
                    label=f"end {b.name}.{a}",
                )
            )

    # (e) maximal circles
    if impose_maximal:
        for m in d.maximal_circles:
            terms = [(L.band[(b, a)], th) for b, a, th in m.terms]

            def holds(values, terms=terms):
                acc = E.identity
                for var, th in terms:
                    x = values[var]
                    acc = Ep[acc][x if th == 1 else Einv[x]]
                return acc == E.identity

            cons.append(
                Constraint(tuple(sorted({v for v, _ in terms})), holds, label=f"maximal {m.name}")
            )

    # one base arc per circle first, then the rest of the thin arcs, then
    # the first arc of every band
    firsts: dict[int, int] = {}
    for name, c in d.arcs:
        firsts.setdefault(c, L.thin[name])
    order = [firsts[c] for c in sorted(firsts)]
    order += [v for v in range(L.n_thin) if v not in order]
    order += [L.band[(b.name, 1)] for b in d.bands]
    return domains, cons, order


def _colorings_shard(d, cm, impose_last_end, shard, jobs) -> int:
    plan = build_plan(*coloring_constraints(d, cm, impose_last_end=impose_last_end))
    return count(plan, shard, jobs)


def count_colorings(
    d: KwbDiagram, cm: FiniteCrossedModule, jobs: int = 1, *, impose_last_end: bool = True
) -> int:
    """Number of ``cm``-colorings of ``d``.

    ``impose_last_end=False`` drops the boundary condition at the last end of
    every band, which is what the extracted presentation encodes.
    """
    return parallel_count(_colorings_shard, (d, cm, impose_last_end), jobs)


def invariant_from_diagram(d: KwbDiagram, cm: FiniteCrossedModule, jobs: int = 1) -> Fraction:
    """#colorings / (#E)^(circles of the pre-knot)."""
    return Fraction(count_colorings(d, cm, jobs), cm.principal.order**d.circles)


def _to_coloring(d: KwbDiagram, L: _Layout, values: tuple[int, ...]) -> Coloring:
    return Coloring(
        {n: values[i] for n, i in L.thin.items()},
        {k: values[i] for k, i in L.band.items()},
    )


def colorings(d: KwbDiagram, cm: FiniteCrossedModule, **kw) -> Iterator[Coloring]:
    L = _Layout(d)
    plan = build_plan(*coloring_constraints(d, cm, **kw))
    for values in solutions(plan):
        yield _to_coloring(d, L, values)


def check_consistency(d: KwbDiagram, cm: FiniteCrossedModule, limit: int = 10) -> ConsistencyReport:
    """Find colorings that satisfy everything but a band's last-end condition.

    Maximal-circle conditions are ignored.  At most ``limit`` witnesses are
    kept; ``checked`` is the number of colorings examined.
    """
    G = cm.base
    L = _Layout(d)
    plan = build_plan(
        *coloring_constraints(d, cm, impose_last_end=False, impose_maximal=False)
    )
    bd = cm.boundary.image
    ends = [
        (b.name, L.band[(b.name, b.arc_count)], pattern_word(b.last_end.case, L.thin[b.last_end.x], L.thin[b.last_end.y]))
        for b in d.bands
    ]
    violations: list[tuple[str, Coloring]] = []
    checked = 0
    for values in solutions(plan):
        checked += 1
        for name, var, w in ends:
            (g1, e1), (g2, e2) = w
            x1 = values[g1] if e1 == 1 else G.inverse[values[g1]]
            x2 = values[g2] if e2 == 1 else G.inverse[values[g2]]
            if bd[values[var]] != G.product[x1][x2] and len(violations) < limit:
                violations.append((name, _to_coloring(d, L, values)))
    return ConsistencyReport(violations, checked)


# -- presentation extraction -------------------------------------------------------


class CyclicBandDependency(ValueError):
    pass


def band_arc_values(d: KwbDiagram) -> dict[tuple[str, int], tuple[GroupWord, int, int]]:
    """Symbolic value ``(w, band index, eps)`` = w . e^eps of every band arc.

    Passing under a thin arc ``a`` with sign ``s`` prepends ``a^s`` to the
    conjugator.  Passing under a band arc of value ``w_f . e_f^eps_f`` is a
    conjugation, rewritten through the Peiffer identity as the action of
    ``w_f d0(e_f)^(eps_f s) w_f^-1``.
    """
    thin = {n: i for i, n in enumerate(d.arc_names)}
    bidx = {b.name: j for j, b in enumerate(d.bands)}
    d0 = {b.name: pattern_word(b.first_end.case, thin[b.first_end.x], thin[b.first_end.y]) for b in d.bands}
    events = {b.name: {ev.step: ev for ev in d.band_events(b.name)} for b in d.bands}
    memo: dict[tuple[str, int], tuple[GroupWord, int, int]] = {}
    active: set[tuple[str, int]] = set()

    def value(b: str, a: int) -> tuple[GroupWord, int, int]:
        if (b, a) in memo:
            return memo[(b, a)]
        if (b, a) in active:
            raise CyclicBandDependency(f"band arc {b}.{a} depends on itself")
        active.add((b, a))
        if a == 1:
            out = ((), bidx[b], 1)
        else:
            w, m, eps = value(b, a - 1)
            ev = events[b][a - 1]
            if isinstance(ev, UnderThin):
                w = ((thin[ev.over], ev.sign),) + w
            else:
                wf, mf, epsf = value(ev.over_band, ev.over_arc)
                bword = d0[d.bands[mf].name]
                k = epsf * ev.sign
                w = wf + (bword if k == 1 else word_inverse(bword)) + word_inverse(wf) + w
            out = (free_reduce(w), m, eps)
        active.discard((b, a))
        memo[(b, a)] = out
        return out

    for b in d.bands:
        for a in range(1, b.arc_count + 1):
            value(b.name, a)
    return memo


def extract_presentation(d: KwbDiagram) -> CrossedModulePresentation:
    """The presentation of Pi_2(M, M^(1)) read off the diagram.

    Base generators are the thin arcs with one Wirtinger relator per
    crossing; ``rank_b1`` is the number of pre-knot circles.  Each band
    contributes one principal generator (its first arc) whose boundary is the
    first-end pattern, and each maximal circle meeting some band contributes
    one 2-relation.  The last-end patterns become notes.
    """
    names = d.arc_names
    thin = {n: i for i, n in enumerate(names)}
    rels = []
    for cr in d.crossings:
        o, u, v, s = thin[cr.over], thin[cr.under_in], thin[cr.under_out], cr.sign
        rels.append(((o, s), (u, 1), (o, -s), (v, -1)))
    bds = tuple(
        pattern_word(b.first_end.case, thin[b.first_end.x], thin[b.first_end.y]) for b in d.bands
    )
    vals = band_arc_values(d)
    two = []
    for m in d.maximal_circles:
        if not m.terms:
            continue
        terms = []
        for b, a, th in m.terms:
            w, gen, eps = vals[(b, a)]
            terms.append(PrincipalTerm(w if w else (), gen, eps * th))
        two.append(TwoRelation(tuple(terms)))
    notes = []
    for b in d.bands:
        w, gen, _ = vals[(b.name, b.arc_count)]
        dk = free_reduce(w + bds[gen] + word_inverse(w))
        want = pattern_word(b.last_end.case, thin[b.last_end.x], thin[b.last_end.y])
        notes.append(
            f"last_end {b.name}.{b.arc_count}: boundary {format_word(dk, names)}"
            f" must equal {format_word(want, names)}"
        )
    return CrossedModulePresentation(
        names,
        tuple(rels),
        d.circles,
        tuple(b.name for b in d.bands),
        bds,
        tuple(two),
        notes=tuple(notes),
    )
