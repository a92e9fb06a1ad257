"""Core term algebra: de Bruijn terms, PTS specifications, environments.

Terms use de Bruijn indices (innermost binder = 0).  Binder hint names are
kept for printing only and never affect `alpha_eq`.  Everything here is
immutable; all operations are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Sort(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Pi(Term):
    hint: str
    domain: Term
    codomain: Term  # binds one variable


@dataclass(frozen=True, slots=True)
class Lam(Term):
    hint: str
    domain: Term
    body: Term  # binds one variable


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class IdTy(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True, slots=True)
class Refl(Term):
    ty: Term
    tm: Term


@dataclass(frozen=True, slots=True)
class JElim(Term):
    """Martin-Lof eliminator.

    `motive` is a raw body binding two variables: the endpoint (index 1)
    and the equality proof (index 0).  Their types are determined by `ty`,
    `base` and need not be stored.
    """

    ty: Term
    base: Term
    hint_pt: str
    hint_eq: str
    motive: Term  # binds two variables
    case: Term
    other: Term
    proof: Term


@dataclass(frozen=True, slots=True)
class SigmaTy(Term):
    hint: str
    first: Term
    second: Term  # binds one variable


@dataclass(frozen=True, slots=True)
class Pair(Term):
    annot: Term  # the SigmaTy this pair inhabits
    a: Term
    b: Term


@dataclass(frozen=True, slots=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Global(Term):
    name: str


def app(fn: Term, *args: Term) -> Term:
    """Left-nested application chain."""
    t = fn
    for a in args:
        t = App(t, a)
    return t


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into head and argument list."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


# ---------------------------------------------------------------------------
# Lifting and substitution
#
# Both prune subtrees with no free variable high enough to be affected; the
# bound on free indices is memoized per node (terms are immutable).

_MF_CACHE: dict[int, tuple[Term, int]] = {}


def max_free(t: Term) -> int:
    """Largest free de Bruijn index in t, or -1 if none."""
    key = id(t)
    hit = _MF_CACHE.get(key)
    if hit is not None and hit[0] is t:
        return hit[1]
    cls = type(t)
    if cls is Var:
        r = t.index
    elif cls is Sort or cls is Global:
        r = -1
    elif cls is Pi or cls is Lam or cls is SigmaTy:
        a, b = (t.domain, t.codomain) if cls is Pi else (
            (t.domain, t.body) if cls is Lam else (t.first, t.second))
        r = max(max_free(a), max_free(b) - 1)
    elif cls is App:
        r = max(max_free(t.fn), max_free(t.arg))
    elif cls is IdTy:
        r = max(max_free(t.ty), max_free(t.lhs), max_free(t.rhs))
    elif cls is Pair:
        r = max(max_free(t.annot), max_free(t.a), max_free(t.b))
    elif cls is Refl:
        r = max(max_free(t.ty), max_free(t.tm))
    elif cls is JElim:
        r = max(max_free(t.ty), max_free(t.base), max_free(t.motive) - 2,
                max_free(t.case), max_free(t.other), max_free(t.proof))
    elif cls is Fst or cls is Snd:
        r = max_free(t.pair)
    else:
        raise AssertionError(f"max_free: unknown term {t!r}")
    if r < -1:
        r = -1
    if len(_MF_CACHE) > 2_000_000:
        _MF_CACHE.clear()
    _MF_CACHE[key] = (t, r)
    return r


def lift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Shift free indices >= cutoff by `amount`."""
    if amount == 0 or max_free(t) < cutoff:
        return t
    match t:
        case Var(i):
            return Var(i + amount) if i >= cutoff else t
        case Sort() | Global():
            return t
        case Pi(h, a, b):
            return Pi(h, lift(a, amount, cutoff), lift(b, amount, cutoff + 1))
        case Lam(h, a, b):
            return Lam(h, lift(a, amount, cutoff), lift(b, amount, cutoff + 1))
        case App(f, a):
            return App(lift(f, amount, cutoff), lift(a, amount, cutoff))
        case IdTy(ty, l, r):
            return IdTy(lift(ty, amount, cutoff), lift(l, amount, cutoff), lift(r, amount, cutoff))
        case Refl(ty, tm):
            return Refl(lift(ty, amount, cutoff), lift(tm, amount, cutoff))
        case JElim(ty, a, hp, he, m, d, b, e):
            return JElim(
                lift(ty, amount, cutoff), lift(a, amount, cutoff), hp, he,
                lift(m, amount, cutoff + 2), lift(d, amount, cutoff),
                lift(b, amount, cutoff), lift(e, amount, cutoff),
            )
        case SigmaTy(h, a, b):
            return SigmaTy(h, lift(a, amount, cutoff), lift(b, amount, cutoff + 1))
        case Pair(an, a, b):
            return Pair(lift(an, amount, cutoff), lift(a, amount, cutoff), lift(b, amount, cutoff))
        case Fst(p):
            return Fst(lift(p, amount, cutoff))
        case Snd(p):
            return Snd(lift(p, amount, cutoff))
    raise AssertionError(f"lift: unknown term {t!r}")


def subst(t: Term, target: int, replacement: Term) -> Term:
    """Substitute `replacement` for Var(target), decrementing indices above it.

    The replacement is lifted once per substitution site, not per binder.
    """

    def go(t: Term, k: int) -> Term:
        # Var(target + k) is the substitution target at this depth
        if max_free(t) < target + k:
            return t
        match t:
            case Var(i):
                if i == target + k:
                    return lift(replacement, k)
                return Var(i - 1) if i > target + k else t
            case Sort() | Global():
                return t
            case Pi(h, a, b):
                return Pi(h, go(a, k), go(b, k + 1))
            case Lam(h, a, b):
                return Lam(h, go(a, k), go(b, k + 1))
            case App(f, a):
                return App(go(f, k), go(a, k))
            case IdTy(ty, l, r):
                return IdTy(go(ty, k), go(l, k), go(r, k))
            case Refl(ty, tm):
                return Refl(go(ty, k), go(tm, k))
            case JElim(ty, a, hp, he, m, d, b, e):
                return JElim(go(ty, k), go(a, k), hp, he, go(m, k + 2),
                             go(d, k), go(b, k), go(e, k))
            case SigmaTy(h, a, b):
                return SigmaTy(h, go(a, k), go(b, k + 1))
            case Pair(an, a, b):
                return Pair(go(an, k), go(a, k), go(b, k))
            case Fst(p):
                return Fst(go(p, k))
            case Snd(p):
                return Snd(go(p, k))
        raise AssertionError(f"subst: unknown term {t!r}")

    return go(t, 0)


def alpha_eq(t: Term, u: Term) -> bool:
    """Structural equality ignoring binder hint names."""
    if t is u:
        return True
    cls = type(t)
    if cls is not type(u):
        return False
    if cls is Var:
        return t.index == u.index
    if cls is Sort or cls is Global:
        return t.name == u.name
    if cls is App:
        return alpha_eq(t.fn, u.fn) and alpha_eq(t.arg, u.arg)
    if cls is Pi:
        return alpha_eq(t.domain, u.domain) and alpha_eq(t.codomain, u.codomain)
    if cls is Lam:
        return alpha_eq(t.domain, u.domain) and alpha_eq(t.body, u.body)
    if cls is IdTy:
        return (alpha_eq(t.ty, u.ty) and alpha_eq(t.lhs, u.lhs)
                and alpha_eq(t.rhs, u.rhs))
    if cls is Refl:
        return alpha_eq(t.ty, u.ty) and alpha_eq(t.tm, u.tm)
    if cls is JElim:
        return (alpha_eq(t.ty, u.ty) and alpha_eq(t.base, u.base)
                and alpha_eq(t.motive, u.motive) and alpha_eq(t.case, u.case)
                and alpha_eq(t.other, u.other) and alpha_eq(t.proof, u.proof))
    if cls is SigmaTy:
        return alpha_eq(t.first, u.first) and alpha_eq(t.second, u.second)
    if cls is Pair:
        return (alpha_eq(t.annot, u.annot) and alpha_eq(t.a, u.a)
                and alpha_eq(t.b, u.b))
    if cls is Fst or cls is Snd:
        return alpha_eq(t.pair, u.pair)
    return False


def is_scoped(t: Term, depth: int) -> bool:
    """True iff every free index is < depth."""
    match t:
        case Var(i):
            return i < depth
        case Sort() | Global():
            return True
        case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b):
            return is_scoped(a, depth) and is_scoped(b, depth + 1)
        case App(f, a):
            return is_scoped(f, depth) and is_scoped(a, depth)
        case IdTy(ty, l, r):
            return is_scoped(ty, depth) and is_scoped(l, depth) and is_scoped(r, depth)
        case Refl(ty, tm):
            return is_scoped(ty, depth) and is_scoped(tm, depth)
        case JElim(ty, a, _, _, m, d, b, e):
            return (is_scoped(ty, depth) and is_scoped(a, depth) and is_scoped(m, depth + 2)
                    and is_scoped(d, depth) and is_scoped(b, depth) and is_scoped(e, depth))
        case Pair(an, a, b):
            return is_scoped(an, depth) and is_scoped(a, depth) and is_scoped(b, depth)
        case Fst(p) | Snd(p):
            return is_scoped(p, depth)
    raise AssertionError(f"is_scoped: unknown term {t!r}")


def node_count(t: Term) -> int:
    match t:
        case Var() | Sort() | Global():
            return 1
        case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b) | App(a, b):
            return 1 + node_count(a) + node_count(b)
        case IdTy(ty, l, r) | Pair(ty, l, r):
            return 1 + node_count(ty) + node_count(l) + node_count(r)
        case Refl(ty, tm):
            return 1 + node_count(ty) + node_count(tm)
        case JElim(ty, a, _, _, m, d, b, e):
            return 1 + sum(map(node_count, (ty, a, m, d, b, e)))
        case Fst(p) | Snd(p):
            return 1 + node_count(p)
    raise AssertionError(f"node_count: unknown term {t!r}")


def map_globals(t: Term, fn) -> Term:
    """Rebuild `t`, replacing every Global g by fn(name) when it returns a term.

    The replacement must be closed or scoped for the ambient depth of the
    occurrence; callers pass closed terms, which are lifted as needed.
    """

    def go(t: Term, depth: int) -> Term:
        match t:
            case Global(name):
                r = fn(name)
                return t if r is None else lift(r, depth)
            case Var() | Sort():
                return t
            case Pi(h, a, b):
                return Pi(h, go(a, depth), go(b, depth + 1))
            case Lam(h, a, b):
                return Lam(h, go(a, depth), go(b, depth + 1))
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case IdTy(ty, l, r):
                return IdTy(go(ty, depth), go(l, depth), go(r, depth))
            case Refl(ty, tm):
                return Refl(go(ty, depth), go(tm, depth))
            case JElim(ty, a, hp, he, m, d, b, e):
                return JElim(go(ty, depth), go(a, depth), hp, he, go(m, depth + 2),
                             go(d, depth), go(b, depth), go(e, depth))
            case SigmaTy(h, a, b):
                return SigmaTy(h, go(a, depth), go(b, depth + 1))
            case Pair(an, a, b):
                return Pair(go(an, depth), go(a, depth), go(b, depth))
            case Fst(p):
                return Fst(go(p, depth))
            case Snd(p):
                return Snd(go(p, depth))
        raise AssertionError(f"map_globals: unknown term {t!r}")

    return go(t, 0)


def globals_in(t: Term) -> set[str]:
    acc: set[str] = set()

    def go(t: Term) -> None:
        match t:
            case Global(name):
                acc.add(name)
            case Var() | Sort():
                pass
            case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b) | App(a, b):
                go(a); go(b)
            case IdTy(a, b, c) | Pair(a, b, c):
                go(a); go(b); go(c)
            case Refl(a, b):
                go(a); go(b)
            case JElim(ty, a, _, _, m, d, b, e):
                for s in (ty, a, m, d, b, e):
                    go(s)
            case Fst(p) | Snd(p):
                go(p)

    go(t)
    return acc


# ---------------------------------------------------------------------------
# PTS specifications


class SpecError(ValueError):
    """Malformed PtsSpec data."""


@dataclass(frozen=True)
class PtsSpec:
    """A named pure type system: sorts, axioms s1:s2, product rules (s1,s2,s3).

    Rule triples are exact-match lookups; there is no closure or subsumption.
    """

    name: str
    sorts: tuple[str, ...]
    axioms: dict[str, str] = field(hash=False)
    rules: dict[tuple[str, str], str] = field(hash=False)

    def __post_init__(self):
        seen = set(self.sorts)
        if len(seen) != len(self.sorts):
            raise SpecError(f"{self.name}: duplicate sorts")
        for s in self.sorts:
            if not s:
                raise SpecError(f"{self.name}: empty sort name")
        for s1, s2 in self.axioms.items():
            if s1 not in seen or s2 not in seen:
                raise SpecError(f"{self.name}: axiom mentions undeclared sort ({s1}:{s2})")
        for (s1, s2), s3 in self.rules.items():
            if s1 not in seen or s2 not in seen or s3 not in seen:
                raise SpecError(f"{self.name}: rule mentions undeclared sort ({s1},{s2},{s3})")

    def has_sort(self, s: str) -> bool:
        return s in self.sorts

    def axiom(self, s: str) -> str | None:
        return self.axioms.get(s)

    def rule(self, s1: str, s2: str) -> str | None:
        return self.rules.get((s1, s2))

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "sorts": list(self.sorts),
            "axioms": [[a, b] for a, b in self.axioms.items()],
            "rules": [[a, b, c] for (a, b), c in self.rules.items()],
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "PtsSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"invalid JSON: {e}") from e
        if not isinstance(doc, dict):
            raise SpecError("spec document must be a JSON object")
        expected = {"name", "sorts", "axioms", "rules"}
        unknown = set(doc) - expected
        if unknown:
            raise SpecError(f"unknown keys: {sorted(unknown)}")
        missing = expected - set(doc)
        if missing:
            raise SpecError(f"missing keys: {sorted(missing)}")
        name = doc["name"]
        sorts = doc["sorts"]
        if not isinstance(name, str) or not isinstance(sorts, list):
            raise SpecError("bad name/sorts")
        axioms: dict[str, str] = {}
        for pair in doc["axioms"]:
            if not (isinstance(pair, list) and len(pair) == 2):
                raise SpecError(f"bad axiom entry {pair!r}")
            if pair[0] in axioms:
                raise SpecError(f"two axioms for sort {pair[0]}")
            axioms[pair[0]] = pair[1]
        rules: dict[tuple[str, str], str] = {}
        for trip in doc["rules"]:
            if not (isinstance(trip, list) and len(trip) == 3):
                raise SpecError(f"bad rule entry {trip!r}")
            key = (trip[0], trip[1])
            if key in rules:
                raise SpecError(f"two rules for pair {key}")
            rules[key] = trip[2]
        return PtsSpec(name, tuple(sorts), axioms, rules)


def builtin_specs() -> list[PtsSpec]:
    """The systems shipped with the tool.

    ASCII sort names: "*" (star), "#" (box), "@" (triangle).
    """
    star, box, tri = "*", "#", "@"
    u_minus_rules = {
        (star, star): star,
        (box, star): star,
        (box, box): box,
        (tri, box): box,
    }
    u_rules = dict(u_minus_rules)
    u_rules[(tri, star)] = star
    hol_rules = {
        (star, star): star,
        (box, star): star,
        (box, box): box,
    }
    coc_rules = {
        (star, star): star,
        (box, star): star,
        (star, box): box,
        (box, box): box,
    }
    p, t1, t2 = "Prop", "Type1", "Type2"
    host3_rules: dict[tuple[str, str], str] = {}
    for s in (p, t1, t2):
        host3_rules[(s, p)] = p
    order = {p: 0, t1: 1, t2: 2}
    for s1 in (p, t1, t2):
        for s2 in (t1, t2):
            host3_rules[(s1, s2)] = max(s1, s2, key=order.get)
    return [
        PtsSpec("system-u-minus", (star, box, tri), {star: box, box: tri}, u_minus_rules),
        PtsSpec("system-u", (star, box, tri), {star: box, box: tri}, u_rules),
        PtsSpec("coc", (star, box), {star: box}, coc_rules),
        PtsSpec("lambda-star", (star,), {star: star}, {(star, star): star}),
        PtsSpec("lambda-hol", (star, box, tri), {star: box, box: tri}, hol_rules),
        PtsSpec("host3", (p, t1, t2), {p: t1, t1: t2}, host3_rules),
    ]


def builtin_spec(name: str) -> PtsSpec:
    for s in builtin_specs():
        if s.name == name:
            return s
    raise KeyError(name)


# ---------------------------------------------------------------------------
# Declarations, environments, contexts


@dataclass(frozen=True)
class Variable:
    name: str
    type: Term


@dataclass(frozen=True)
class Definition:
    name: str
    type: Term
    body: Term


@dataclass(frozen=True)
class CheckDirective:
    term: Term
    type: Term


@dataclass(frozen=True)
class NormalizeDirective:
    fuel: int
    term: Term


Decl = Variable | Definition | CheckDirective | NormalizeDirective


class Environment:
    """Global declarations over a PtsSpec.  Treated as immutable; `extended`
    returns a new environment sharing the prefix."""

    __slots__ = ("spec", "decls", "_by_name")

    def __init__(self, spec: PtsSpec, decls: tuple[Decl, ...] = ()):
        self.spec = spec
        self.decls = decls
        self._by_name: dict[str, Decl] = {}
        for d in decls:
            if isinstance(d, (Variable, Definition)):
                self._by_name[d.name] = d

    def lookup(self, name: str) -> Decl | None:
        return self._by_name.get(name)

    def has(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> list[str]:
        return list(self._by_name)

    def extended(self, decl: Decl) -> "Environment":
        env = Environment.__new__(Environment)
        env.spec = self.spec
        env.decls = self.decls + (decl,)
        env._by_name = dict(self._by_name)
        if isinstance(decl, (Variable, Definition)):
            env._by_name[decl.name] = decl
        return env


class Context:
    """Local typing telescope: entry i's type is scoped over entries 0..i-1.

    Internally stored outermost-first; `type_of(i)` takes a de Bruijn index
    (0 = innermost) and returns the type lifted to the full depth.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: tuple[tuple[str, Term], ...] = ()):
        self.entries = entries

    def __len__(self) -> int:
        return len(self.entries)

    def push(self, hint: str, ty: Term) -> "Context":
        return Context(self.entries + ((hint, ty),))

    def type_of(self, index: int) -> Term:
        # entry types are scoped at their own position; lift into the current scope
        pos = len(self.entries) - 1 - index
        if pos < 0:
            raise IndexError(index)
        return lift(self.entries[pos][1], index + 1)

    def hint_of(self, index: int) -> str:
        pos = len(self.entries) - 1 - index
        return self.entries[pos][0]
