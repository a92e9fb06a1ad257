"""Concrete syntax for proof files and terms.

Grammar (frozen):
    file    := decl*
    decl    := "variable" IDENT ":" term "."
             | "define" IDENT ":" term ":=" term "."
             | "check" term ":" term "."
             | "normalize" "[" NAT "]" term "."
    term    := "forall" binders "," term
             | "fun" binders "=>" term
             | "Sig" binders "," term
             | arrow
    arrow   := app ("->" arrow)?
    app     := atom+
    atom    := IDENT | "(" term ")" | "Id" | "refl" | "J" | "pair" | "fst" | "snd"
    binders := ("(" IDENT+ ":" term ")")+
    comment := "--" ... EOL

`Id A x y`, `refl A x`, `J A x P d y p`, `pair T a b`, `fst p`, `snd p` are
fully applied prefix forms; partial application is an arity error at parse
time.  The surface syntax is ASCII only.  J's motive must be written as a
two-binder `fun`; its binder annotations are fixed by the first two
arguments and are not stored.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App, CheckDirective, Decl, Definition, Fst, Global, IdTy, JElim, Lam,
    NormalizeDirective, Pair, Pi, PtsSpec, Refl, SigmaTy, Snd, Sort, Term,
    Var, Variable,
)

KEYWORDS = {
    "forall", "fun", "Sig", "Id", "refl", "J", "pair", "fst", "snd",
    "variable", "define", "check", "normalize",
}

PRIM_ARITY = {"Id": 3, "refl": 2, "J": 6, "pair": 3, "fst": 1, "snd": 1}

_IDENT_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_'*#@")


class ParseError(Exception):
    def __init__(self, span: tuple[int, int], expected: str, found: str):
        self.span = span
        self.expected = expected
        self.found = found
        super().__init__(f"expected {expected}, found {found} at {span[0]}..{span[1]}")


class ScopeError(Exception):
    def __init__(self, name: str, span: tuple[int, int] = (0, 0), reason: str = "unbound identifier"):
        self.name = name
        self.span = span
        self.reason = reason
        super().__init__(f"{reason}: {name}")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "nat", "kw", or a punctuation name
    value: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if ord(c) > 127:
            raise ParseError((i, i + 1), "ASCII character", repr(c))
        if c in " \t\r\n":
            i += 1
            continue
        if text.startswith("--", i):
            j = text.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if text.startswith(":=", i):
            toks.append(Token("assign", ":=", i, i + 2)); i += 2; continue
        if text.startswith("=>", i):
            toks.append(Token("arrow2", "=>", i, i + 2)); i += 2; continue
        if text.startswith("->", i):
            toks.append(Token("arrow", "->", i, i + 2)); i += 2; continue
        punct = {"(": "lparen", ")": "rparen", ":": "colon", ",": "comma",
                 ".": "dot", "[": "lbracket", "]": "rbracket"}
        if c in punct:
            toks.append(Token(punct[c], c, i, i + 1)); i += 1; continue
        if c in _IDENT_CHARS:
            j = i
            while j < n and text[j] in _IDENT_CHARS:
                j += 1
            word = text[i:j]
            if word.isdigit():
                toks.append(Token("nat", word, i, j))
            elif word in KEYWORDS:
                toks.append(Token("kw", word, i, j))
            else:
                toks.append(Token("ident", word, i, j))
            i = j
            continue
        raise ParseError((i, i + 1), "token", repr(c))
    return toks


# ---------------------------------------------------------------------------
# PreTerms (named, with source spans)


@dataclass(frozen=True)
class PreTerm:
    span: tuple[int, int]


@dataclass(frozen=True)
class PIdent(PreTerm):
    name: str


@dataclass(frozen=True)
class PPi(PreTerm):
    name: str
    domain: PreTerm
    codomain: PreTerm


@dataclass(frozen=True)
class PArrow(PreTerm):
    domain: PreTerm
    codomain: PreTerm


@dataclass(frozen=True)
class PLam(PreTerm):
    name: str
    domain: PreTerm
    body: PreTerm


@dataclass(frozen=True)
class PSig(PreTerm):
    name: str
    first: PreTerm
    second: PreTerm


@dataclass(frozen=True)
class PApp(PreTerm):
    fn: PreTerm
    arg: PreTerm


@dataclass(frozen=True)
class PPrim(PreTerm):
    head: str  # Id / refl / J / pair / fst / snd
    args: tuple[PreTerm, ...]


@dataclass(frozen=True)
class PVariableDecl:
    name: str
    type: PreTerm
    span: tuple[int, int]


@dataclass(frozen=True)
class PDefinitionDecl:
    name: str
    type: PreTerm
    body: PreTerm
    span: tuple[int, int]


@dataclass(frozen=True)
class PCheckDecl:
    term: PreTerm
    type: PreTerm
    span: tuple[int, int]


@dataclass(frozen=True)
class PNormalizeDecl:
    fuel: int
    term: PreTerm
    span: tuple[int, int]


PDecl = PVariableDecl | PDefinitionDecl | PCheckDecl | PNormalizeDecl


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.pos = 0

    def _eof_span(self) -> tuple[int, int]:
        n = len(self.text)
        return (n, n)

    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def error(self, expected: str) -> ParseError:
        t = self.peek()
        if t is None:
            return ParseError(self._eof_span(), expected, "end of input")
        return ParseError(t.span, expected, repr(t.value))

    def take(self, kind: str, expected: str | None = None) -> Token:
        t = self.peek()
        if t is None or t.kind != kind:
            raise self.error(expected or kind)
        self.pos += 1
        return t

    def take_kw(self, word: str) -> Token:
        t = self.peek()
        if t is None or t.kind != "kw" or t.value != word:
            raise self.error(f"'{word}'")
        self.pos += 1
        return t

    def at_kw(self, *words: str) -> bool:
        t = self.peek()
        return t is not None and t.kind == "kw" and t.value in words

    # binders := ("(" IDENT+ ":" term ")")+
    def binders(self) -> list[tuple[str, PreTerm, tuple[int, int]]]:
        out: list[tuple[str, PreTerm, tuple[int, int]]] = []
        t = self.peek()
        if t is None or t.kind != "lparen":
            raise self.error("binder group '(x ... : T)'")
        while (t := self.peek()) is not None and t.kind == "lparen":
            lp = self.take("lparen")
            names: list[Token] = [self.take("ident", "binder name")]
            while (t2 := self.peek()) is not None and t2.kind == "ident":
                names.append(self.take("ident"))
            self.take("colon", "':'")
            ty = self.term()
            rp = self.take("rparen", "')'")
            for nt in names:
                out.append((nt.value, ty, (lp.start, rp.end)))
        return out

    def term(self) -> PreTerm:
        if self.at_kw("forall"):
            kw = self.take_kw("forall")
            bs = self.binders()
            self.take("comma", "','")
            body = self.term()
            for name, ty, _ in reversed(bs):
                body = PPi((kw.start, body.span[1]), name, ty, body)
            return body
        if self.at_kw("fun"):
            kw = self.take_kw("fun")
            bs = self.binders()
            self.take("arrow2", "'=>'")
            body = self.term()
            for name, ty, _ in reversed(bs):
                body = PLam((kw.start, body.span[1]), name, ty, body)
            return body
        if self.at_kw("Sig"):
            kw = self.take_kw("Sig")
            bs = self.binders()
            self.take("comma", "','")
            body = self.term()
            for name, ty, _ in reversed(bs):
                body = PSig((kw.start, body.span[1]), name, ty, body)
            return body
        return self.arrow()

    def arrow(self) -> PreTerm:
        lhs = self.app()
        t = self.peek()
        if t is not None and t.kind == "arrow":
            self.take("arrow")
            rhs = self.arrow()
            return PArrow((lhs.span[0], rhs.span[1]), lhs, rhs)
        return lhs

    def _at_atom(self) -> bool:
        t = self.peek()
        if t is None:
            return False
        if t.kind in ("ident", "lparen"):
            return True
        return t.kind == "kw" and t.value in PRIM_ARITY

    def app(self) -> PreTerm:
        if not self._at_atom():
            raise self.error("a term")
        head = self.atom()
        while self._at_atom():
            arg = self.atom()
            head = PApp((head.span[0], arg.span[1]), head, arg)
        return head

    def atom(self) -> PreTerm:
        t = self.peek()
        assert t is not None
        if t.kind == "ident":
            self.take("ident")
            return PIdent(t.span, t.value)
        if t.kind == "lparen":
            self.take("lparen")
            inner = self.term()
            rp = self.take("rparen", "')'")
            return _respan(inner, (t.start, rp.end))
        if t.kind == "kw" and t.value in PRIM_ARITY:
            self.take("kw")
            arity = PRIM_ARITY[t.value]
            args: list[PreTerm] = []
            for k in range(arity):
                if not self._at_atom():
                    raise ParseError(
                        t.span, f"{arity} arguments to '{t.value}'",
                        f"only {k}")
                args.append(self.atom())
            return PPrim((t.start, args[-1].span[1]), t.value, tuple(args))
        raise self.error("a term")

    def decl(self) -> PDecl:
        t = self.peek()
        assert t is not None
        if self.at_kw("variable"):
            self.take_kw("variable")
            name = self.take("ident", "name")
            self.take("colon", "':'")
            ty = self.term()
            dot = self.take("dot", "'.'")
            return PVariableDecl(name.value, ty, (t.start, dot.end))
        if self.at_kw("define"):
            self.take_kw("define")
            name = self.take("ident", "name")
            self.take("colon", "':'")
            ty = self.term()
            self.take("assign", "':='")
            body = self.term()
            dot = self.take("dot", "'.'")
            return PDefinitionDecl(name.value, ty, body, (t.start, dot.end))
        if self.at_kw("check"):
            self.take_kw("check")
            tm = self.term()
            self.take("colon", "':'")
            ty = self.term()
            dot = self.take("dot", "'.'")
            return PCheckDecl(tm, ty, (t.start, dot.end))
        if self.at_kw("normalize"):
            self.take_kw("normalize")
            self.take("lbracket", "'['")
            fuel = self.take("nat", "fuel")
            self.take("rbracket", "']'")
            tm = self.term()
            dot = self.take("dot", "'.'")
            return PNormalizeDecl(int(fuel.value), tm, (t.start, dot.end))
        raise self.error("a declaration")

    def file(self) -> list[PDecl]:
        out: list[PDecl] = []
        while self.peek() is not None:
            out.append(self.decl())
        return out


def _respan(t: PreTerm, span: tuple[int, int]) -> PreTerm:
    # frozen dataclasses; rebuild with the widened span
    match t:
        case PIdent(_, name):
            return PIdent(span, name)
        case PPi(_, n, d, c):
            return PPi(span, n, d, c)
        case PArrow(_, d, c):
            return PArrow(span, d, c)
        case PLam(_, n, d, b):
            return PLam(span, n, d, b)
        case PSig(_, n, f, s):
            return PSig(span, n, f, s)
        case PApp(_, f, a):
            return PApp(span, f, a)
        case PPrim(_, h, a):
            return PPrim(span, h, a)
    raise AssertionError(t)


def parse_term(text: str) -> PreTerm:
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise p.error("end of input")
    return t


def parse_file(text: str) -> list[PDecl]:
    return _Parser(text).file()


# ---------------------------------------------------------------------------
# Scope resolution


def resolve(pre: PreTerm, scope: list[str], *, sorts: frozenset[str] | set[str] = frozenset(),
            globals: frozenset[str] | set[str] = frozenset()) -> Term:
    """Turn a named PreTerm into a de Bruijn Term.

    `scope` is outermost-first; the innermost binder gets index 0.
    Identifiers resolve to binders first, then sorts, then globals.
    """

    def go(pre: PreTerm, scope: list[str]) -> Term:
        match pre:
            case PIdent(span, name):
                for i, n in enumerate(reversed(scope)):
                    if n == name:
                        return Var(i)
                if name in sorts:
                    return Sort(name)
                if name in globals:
                    return Global(name)
                raise ScopeError(name, span)
            case PPi(_, name, d, c):
                return Pi(name, go(d, scope), go(c, scope + [name]))
            case PArrow(_, d, c):
                from .syntax import lift
                return Pi("_", go(d, scope), lift(go(c, scope), 1))
            case PLam(_, name, d, b):
                return Lam(name, go(d, scope), go(b, scope + [name]))
            case PSig(_, name, f, s):
                return SigmaTy(name, go(f, scope), go(s, scope + [name]))
            case PApp(_, f, a):
                return App(go(f, scope), go(a, scope))
            case PPrim(span, head, args):
                if head == "Id":
                    return IdTy(go(args[0], scope), go(args[1], scope), go(args[2], scope))
                if head == "refl":
                    return Refl(go(args[0], scope), go(args[1], scope))
                if head == "pair":
                    return Pair(go(args[0], scope), go(args[1], scope), go(args[2], scope))
                if head == "fst":
                    return Fst(go(args[0], scope))
                if head == "snd":
                    return Snd(go(args[0], scope))
                if head == "J":
                    ty, base, motive, case, other, proof = args
                    if not (isinstance(motive, PLam) and isinstance(motive.body, PLam)):
                        raise ScopeError("J", span, "J motive must be a two-binder fun")
                    m = go(motive.body.body, scope + [motive.name, motive.body.name])
                    return JElim(go(ty, scope), go(base, scope), motive.name,
                                 motive.body.name, m, go(case, scope), go(other, scope),
                                 go(proof, scope))
        raise AssertionError(pre)

    return go(pre, list(scope))


def resolve_decls(pdecls: list[PDecl], spec: PtsSpec,
                  initial_globals: tuple[str, ...] = ()) -> list[Decl]:
    """Resolve a parsed file against a PTS spec, threading declared names."""
    sorts = frozenset(spec.sorts)
    names = list(initial_globals)
    out: list[Decl] = []
    for pd in pdecls:
        g = frozenset(names)
        match pd:
            case PVariableDecl(name, ty, span):
                if name in names:
                    raise ScopeError(name, span, "duplicate declaration")
                out.append(Variable(name, resolve(ty, [], sorts=sorts, globals=g)))
                names.append(name)
            case PDefinitionDecl(name, ty, body, span):
                if name in names:
                    raise ScopeError(name, span, "duplicate declaration")
                out.append(Definition(name, resolve(ty, [], sorts=sorts, globals=g),
                                      resolve(body, [], sorts=sorts, globals=g)))
                names.append(name)
            case PCheckDecl(tm, ty, _):
                out.append(CheckDirective(resolve(tm, [], sorts=sorts, globals=g),
                                          resolve(ty, [], sorts=sorts, globals=g)))
            case PNormalizeDecl(fuel, tm, _):
                out.append(NormalizeDirective(fuel, resolve(tm, [], sorts=sorts, globals=g)))
    return out


# ---------------------------------------------------------------------------
# Pretty-printing

_LVL_TERM, _LVL_ARROW, _LVL_APP, _LVL_ATOM = 0, 1, 2, 3


def _sanitize(hint: str) -> str:
    s = "".join(c for c in hint if c in _IDENT_CHARS)
    if not s or s.isdigit() or s == "_" or s in KEYWORDS:
        return "x"
    return s


def _fresh(hint: str, used: set[str]) -> str:
    base = _sanitize(hint)
    if base not in used:
        return base
    k = 0
    while f"{base}{k}" in used:
        k += 1
    return f"{base}{k}"


def _uses_var0(t: Term) -> bool:
    def go(t: Term, depth: int) -> bool:
        match t:
            case Var(i):
                return i == depth
            case Sort() | Global():
                return False
            case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b):
                return go(a, depth) or go(b, depth + 1)
            case App(f, a):
                return go(f, depth) or go(a, depth)
            case IdTy(x, y, z) | Pair(x, y, z):
                return go(x, depth) or go(y, depth) or go(z, depth)
            case Refl(x, y):
                return go(x, depth) or go(y, depth)
            case JElim(ty, a, _, _, m, d, b, e):
                return any((go(ty, depth), go(a, depth), go(m, depth + 2),
                            go(d, depth), go(b, depth), go(e, depth)))
            case Fst(p) | Snd(p):
                return go(p, depth)
        raise AssertionError(t)
    return go(t, 0)


def print_term(t: Term, names: list[str] | None = None) -> str:
    """Render a term; output re-parses and resolves to an alpha-equal term."""
    from .syntax import globals_in, lift

    scope: list[str] = list(names or [])  # outermost-first
    avoid = set(scope) | globals_in(t) | KEYWORDS

    def wrap(s: str, lvl: int, want: int) -> str:
        return f"({s})" if lvl < want else s

    def go(t: Term, scope: list[str], want: int) -> str:
        match t:
            case Var(i):
                if i >= len(scope):
                    return f"!{i - len(scope)}"  # out of scope; diagnostics only
                return scope[len(scope) - 1 - i]
            case Sort(n):
                return n
            case Global(n):
                return n
            case Pi(h, a, b):
                if not _uses_var0(b):
                    body = subst0_unused(b)
                    s = f"{go(a, scope, _LVL_APP)} -> {go(body, scope, _LVL_ARROW)}"
                    return wrap(s, _LVL_ARROW, want)
                groups = []
                cur = t
                sc = list(scope)
                while isinstance(cur, Pi) and _uses_var0(cur.codomain):
                    n = _fresh(cur.hint, avoid | set(sc))
                    groups.append(f"({n}:{go(cur.domain, sc, _LVL_TERM)})")
                    sc.append(n)
                    cur = cur.codomain
                s = f"forall {' '.join(groups)}, {go(cur, sc, _LVL_TERM)}"
                return wrap(s, _LVL_TERM, want)
            case Lam():
                groups = []
                cur = t
                sc = list(scope)
                while isinstance(cur, Lam):
                    n = _fresh(cur.hint, avoid | set(sc))
                    groups.append(f"({n}:{go(cur.domain, sc, _LVL_TERM)})")
                    sc.append(n)
                    cur = cur.body
                s = f"fun {' '.join(groups)} => {go(cur, sc, _LVL_TERM)}"
                return wrap(s, _LVL_TERM, want)
            case SigmaTy(h, a, b):
                n = _fresh(h, avoid | set(scope))
                s = f"Sig ({n}:{go(a, scope, _LVL_TERM)}), {go(b, scope + [n], _LVL_TERM)}"
                return wrap(s, _LVL_TERM, want)
            case App(f, a):
                s = f"{go(f, scope, _LVL_APP)} {go(a, scope, _LVL_ATOM)}"
                return wrap(s, _LVL_APP, want)
            case IdTy(ty, l, r):
                s = f"Id {go(ty, scope, _LVL_ATOM)} {go(l, scope, _LVL_ATOM)} {go(r, scope, _LVL_ATOM)}"
                return wrap(s, _LVL_APP, want)
            case Refl(ty, tm):
                s = f"refl {go(ty, scope, _LVL_ATOM)} {go(tm, scope, _LVL_ATOM)}"
                return wrap(s, _LVL_APP, want)
            case JElim(ty, a, hp, he, m, d, b, e):
                y = _fresh(hp or "y", avoid | set(scope))
                p = _fresh(he or "p", avoid | set(scope) | {y})
                eq_dom = IdTy(lift(ty, 1), lift(a, 1), Var(0))
                motive = (f"(fun ({y}:{go(ty, scope, _LVL_TERM)}) "
                          f"({p}:{go(eq_dom, scope + [y], _LVL_TERM)}) => "
                          f"{go(m, scope + [y, p], _LVL_TERM)})")
                parts = [go(ty, scope, _LVL_ATOM), go(a, scope, _LVL_ATOM), motive,
                         go(d, scope, _LVL_ATOM), go(b, scope, _LVL_ATOM),
                         go(e, scope, _LVL_ATOM)]
                return wrap("J " + " ".join(parts), _LVL_APP, want)
            case Pair(an, a, b):
                s = (f"pair {go(an, scope, _LVL_ATOM)} {go(a, scope, _LVL_ATOM)} "
                     f"{go(b, scope, _LVL_ATOM)}")
                return wrap(s, _LVL_APP, want)
            case Fst(p):
                return wrap(f"fst {go(p, scope, _LVL_ATOM)}", _LVL_APP, want)
            case Snd(p):
                return wrap(f"snd {go(p, scope, _LVL_ATOM)}", _LVL_APP, want)
        raise AssertionError(t)

    def subst0_unused(b: Term) -> Term:
        # drop an unused binder: substitute a dummy; Var(0) does not occur
        from .syntax import subst
        return subst(b, 0, Sort("_"))

    return go(t, scope, _LVL_TERM)


def print_decl(d: Decl) -> str:
    match d:
        case Variable(name, ty):
            return f"variable {name} : {print_term(ty)}."
        case Definition(name, ty, body):
            return f"define {name} : {print_term(ty)} := {print_term(body)}."
        case CheckDirective(tm, ty):
            return f"check {print_term(tm)} : {print_term(ty)}."
        case NormalizeDirective(fuel, tm):
            return f"normalize [{fuel}] {print_term(tm)}."
    raise AssertionError(d)
