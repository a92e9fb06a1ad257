"""Reduction, conversion and type checking for the PTS core plus Id/J and Sigma.

Reduction counts one fuel unit per head beta/delta/iota step.  FuelExhausted
is a verdict for the trace-producing entry points (`whnf`, `normalize`) and
an exception for decision procedures (`convertible`, `infer`, `check`).
There is no eta conversion and no cumulativity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    App, CheckDirective, Context, Decl, Definition, Environment, Fst, Global,
    IdTy, JElim, Lam, NormalizeDirective, Pair, Pi, PtsSpec, Refl, SigmaTy,
    Snd, Sort, Term, Var, Variable, lift, spine, subst,
)

DEFAULT_FUEL = 100_000
CHECK_FUEL = 10_000_000


# ---------------------------------------------------------------------------
# Errors


class TypeCheckError(Exception):
    def describe(self) -> str:
        return str(self)


class UnboundVariable(TypeCheckError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"unbound variable #{index}")


class SortHasNoAxiom(TypeCheckError):
    def __init__(self, sort: str):
        self.sort = sort
        super().__init__(f"sort {sort} has no axiom")


class NoProductRule(TypeCheckError):
    def __init__(self, s1: str, s2: str):
        self.s1 = s1
        self.s2 = s2
        super().__init__(f"no product rule for ({s1},{s2})")


class NotAFunction(TypeCheckError):
    def __init__(self, ty: Term):
        self.ty = ty
        super().__init__("application head is not a function")


class NotAPair(TypeCheckError):
    def __init__(self, ty: Term):
        self.ty = ty
        super().__init__("projection target is not a pair")


class NotAnIdentity(TypeCheckError):
    def __init__(self, ty: Term):
        self.ty = ty
        super().__init__("expected an identity type")


class ConversionFailure(TypeCheckError):
    def __init__(self, expected: Term, got: Term):
        self.expected = expected
        self.got = got
        super().__init__("conversion failure")

    def describe(self) -> str:
        from .parser import print_term
        return (f"conversion failure:\n  expected: {print_term(self.expected)}\n"
                f"  got:      {print_term(self.got)}")


class IllTypedAnnotation(TypeCheckError):
    def __init__(self, msg: str = "ill-typed annotation"):
        super().__init__(msg)


class FuelExhausted(TypeCheckError):
    def __init__(self):
        super().__init__("fuel exhausted before a decision was reached")


class UnknownGlobal(TypeCheckError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown global {name}")


class DuplicateName(TypeCheckError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate name {name}")


# ---------------------------------------------------------------------------
# Fuel accounting


class Budget:
    __slots__ = ("left", "spent")

    def __init__(self, fuel: int):
        self.left = fuel
        self.spent = 0

    def try_spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        self.spent += 1
        return True

    def spend(self) -> None:
        if not self.try_spend():
            raise FuelExhausted()


@dataclass(frozen=True)
class ReductionTrace:
    steps: int
    result: Term
    exhausted: bool  # when True, `result` is the unreduced input


# ---------------------------------------------------------------------------
# Closure machine (trace-producing whnf / normalize)
#
# Environments are linked cells (entry, parent); an entry is a _Clos or an
# int de-Bruijn-level marker introduced when normalization goes under a
# binder.


class _Clos:
    __slots__ = ("term", "env")

    def __init__(self, term: Term, env):
        self.term = term
        self.env = env


class _OutOfFuel(Exception):
    pass


def _env_at(e, i: int):
    while i > 0:
        if e is None:
            return None
        e = e[1]
        i -= 1
    return e[0] if e is not None else None


def _machine_whnf(env: Environment, focus: _Clos, stack: list, budget: Budget,
                  delta: bool = True) -> None:
    """Drive focus/stack to weak head form in place; raises _OutOfFuel.
    With delta=False, definition heads are left folded (conversion handles
    them with a spine-first policy)."""
    t, e = focus.term, focus.env
    while True:
        cls = type(t)
        if cls is App:
            stack.append(("app", _Clos(t.arg, e)))
            t = t.fn
            continue
        if cls is Lam:
            if stack and stack[-1][0] == "app":
                if not budget.try_spend():
                    raise _OutOfFuel()
                arg = stack.pop()[1]
                e = (arg, e)
                t = t.body
                continue
            break
        if cls is Var:
            entry = _env_at(e, t.index)
            if type(entry) is _Clos:
                t, e = entry.term, entry.env
                continue
            break  # level marker or out-of-env: neutral
        if cls is Global:
            d = env.lookup(t.name)
            if d is None:
                raise UnknownGlobal(t.name)
            if delta and isinstance(d, Definition):
                if not budget.try_spend():
                    raise _OutOfFuel()
                t, e = d.body, None
                continue
            break
        if cls is Fst:
            stack.append(("fst",))
            t = t.pair
            continue
        if cls is Snd:
            stack.append(("snd",))
            t = t.pair
            continue
        if cls is JElim:
            stack.append(("j", t, e))
            t = t.proof
            continue
        if cls is Pair:
            if stack and stack[-1][0] in ("fst", "snd"):
                if not budget.try_spend():
                    raise _OutOfFuel()
                t = t.a if stack.pop()[0] == "fst" else t.b
                continue
            break
        if cls is Refl:
            if stack and stack[-1][0] == "j":
                if not budget.try_spend():
                    raise _OutOfFuel()
                fr = stack.pop()
                t, e = fr[1].case, fr[2]
                continue
            break
        break  # Sort, Pi, SigmaTy, IdTy
    focus.term, focus.env = t, e


def _quote(t: Term, e, depth: int, k: int = 0) -> Term:
    """Substitute a machine environment back into a term (no reduction)."""
    match t:
        case Var(i):
            if i < k:
                return t
            entry = _env_at(e, i - k)
            if entry is None:
                return Var(i)  # free relative to the closure; keep as-is
            if type(entry) is int:
                return Var(k + depth - 1 - entry)
            return lift(_quote(entry.term, entry.env, depth), k)
        case Sort() | Global():
            return t
        case Pi(h, a, b):
            return Pi(h, _quote(a, e, depth, k), _quote(b, e, depth, k + 1))
        case Lam(h, a, b):
            return Lam(h, _quote(a, e, depth, k), _quote(b, e, depth, k + 1))
        case App(f, a):
            return App(_quote(f, e, depth, k), _quote(a, e, depth, k))
        case IdTy(ty, l, r):
            return IdTy(_quote(ty, e, depth, k), _quote(l, e, depth, k), _quote(r, e, depth, k))
        case Refl(ty, tm):
            return Refl(_quote(ty, e, depth, k), _quote(tm, e, depth, k))
        case JElim(ty, a, hp, he, m, d, b, pr):
            return JElim(_quote(ty, e, depth, k), _quote(a, e, depth, k), hp, he,
                         _quote(m, e, depth, k + 2), _quote(d, e, depth, k),
                         _quote(b, e, depth, k), _quote(pr, e, depth, k))
        case SigmaTy(h, a, b):
            return SigmaTy(h, _quote(a, e, depth, k), _quote(b, e, depth, k + 1))
        case Pair(an, a, b):
            return Pair(_quote(an, e, depth, k), _quote(a, e, depth, k), _quote(b, e, depth, k))
        case Fst(p):
            return Fst(_quote(p, e, depth, k))
        case Snd(p):
            return Snd(_quote(p, e, depth, k))
    raise AssertionError(t)


def _rebuild(env: Environment, focus: _Clos, stack: list, depth: int, norm) -> Term:
    """Quote a machine state back into a term, mapping `norm` over components."""
    t, e = focus.term, focus.env
    match t:
        case Var(i):
            entry = _env_at(e, i)
            if type(entry) is int:
                acc: Term = Var(depth - 1 - entry)
            else:
                acc = Var(i)
        case Sort() | Global():
            acc = t
        case Lam(h, a, b):
            acc = Lam(h, norm(_Clos(a, e), depth), norm(_Clos(b, (depth, e)), depth + 1))
        case Pi(h, a, b):
            acc = Pi(h, norm(_Clos(a, e), depth), norm(_Clos(b, (depth, e)), depth + 1))
        case SigmaTy(h, a, b):
            acc = SigmaTy(h, norm(_Clos(a, e), depth), norm(_Clos(b, (depth, e)), depth + 1))
        case IdTy(ty, l, r):
            acc = IdTy(norm(_Clos(ty, e), depth), norm(_Clos(l, e), depth), norm(_Clos(r, e), depth))
        case Refl(ty, tm):
            acc = Refl(norm(_Clos(ty, e), depth), norm(_Clos(tm, e), depth))
        case Pair(an, a, b):
            acc = Pair(norm(_Clos(an, e), depth), norm(_Clos(a, e), depth), norm(_Clos(b, e), depth))
        case _:
            raise AssertionError(f"unexpected machine head {t!r}")
    for fr in reversed(stack):
        if fr[0] == "app":
            acc = App(acc, norm(fr[1], depth))
        elif fr[0] == "fst":
            acc = Fst(acc)
        elif fr[0] == "snd":
            acc = Snd(acc)
        else:  # j frame; acc is the (stuck) proof
            jt, je = fr[1], fr[2]
            acc = JElim(norm(_Clos(jt.ty, je), depth), norm(_Clos(jt.base, je), depth),
                        jt.hint_pt, jt.hint_eq,
                        norm(_Clos(jt.motive, (depth + 1, (depth, je))), depth + 2),
                        norm(_Clos(jt.case, je), depth), norm(_Clos(jt.other, je), depth),
                        acc)
    return acc


def whnf(env: Environment, t: Term, fuel: int = DEFAULT_FUEL) -> ReductionTrace:
    """Head-normalize with a step budget; exhaustion is a verdict, not an error."""
    budget = Budget(fuel)
    focus, stack = _Clos(t, None), []
    try:
        _machine_whnf(env, focus, stack, budget)
    except _OutOfFuel:
        return ReductionTrace(budget.spent, t, True)

    def quote_only(c: _Clos, depth: int) -> Term:
        return _quote(c.term, c.env, depth)

    return ReductionTrace(budget.spent, _rebuild(env, focus, stack, 0, quote_only), False)


def normalize(env: Environment, t: Term, fuel: int = DEFAULT_FUEL) -> ReductionTrace:
    """Full normal form via leftmost-outermost iteration of whnf under binders."""
    budget = Budget(fuel)

    def norm(c: _Clos, depth: int) -> Term:
        stack: list = []
        _machine_whnf(env, c, stack, budget)
        return _rebuild(env, c, stack, depth, norm)

    try:
        result = norm(_Clos(t, None), 0)
    except _OutOfFuel:
        return ReductionTrace(budget.spent, t, True)
    return ReductionTrace(budget.spent, result, False)


# ---------------------------------------------------------------------------
# Syntactic whnf (substitution based, used by conversion and inference)


def _whnf_syn(env: Environment, t: Term, budget: Budget, delta: bool = True) -> Term:
    frames: list = []
    cur = t
    while True:
        cls = type(cur)
        if cls is App:
            frames.append(("arg", cur.arg))
            cur = cur.fn
            continue
        if cls is Lam and frames and frames[-1][0] == "arg":
            budget.spend()
            cur = subst(cur.body, 0, frames.pop()[1])
            continue
        if cls is Global:
            d = env.lookup(cur.name)
            if d is None:
                raise UnknownGlobal(cur.name)
            if delta and isinstance(d, Definition):
                budget.spend()
                cur = d.body
                continue
            break
        if cls is Fst:
            frames.append(("fst",))
            cur = cur.pair
            continue
        if cls is Snd:
            frames.append(("snd",))
            cur = cur.pair
            continue
        if cls is Pair and frames and frames[-1][0] in ("fst", "snd"):
            budget.spend()
            cur = cur.a if frames.pop()[0] == "fst" else cur.b
            continue
        if cls is JElim:
            pr = _whnf_syn(env, cur.proof, budget, delta)
            if isinstance(pr, Refl):
                budget.spend()
                cur = cur.case
                continue
            cur = JElim(cur.ty, cur.base, cur.hint_pt, cur.hint_eq, cur.motive,
                        cur.case, cur.other, pr)
            break
        break
    for fr in reversed(frames):
        if fr[0] == "arg":
            cur = App(cur, fr[1])
        elif fr[0] == "fst":
            cur = Fst(cur)
        else:
            cur = Snd(cur)
    return cur


def _env_len(e) -> int:
    n = 0
    while e is not None:
        n += 1
        e = e[1]
    return n


def _neutral_var_id(t: Var, e):
    entry = _env_at(e, t.index)
    if type(entry) is int:
        return ("lvl", entry)
    return ("free", t.index - _env_len(e))


def _cc1(env: Environment, c1: _Clos, c2: _Clos, depth: int, budget: Budget) -> bool:
    if c1.term is c2.term and c1.env is c2.env:
        return True
    return _cc(env, c1, [], c2, [], depth, budget)


def _frames_eq(env: Environment, sa: list, sb: list, depth: int, budget: Budget) -> bool:
    if len(sa) != len(sb):
        return False
    for fa, fb in zip(sa, sb):
        if fa[0] != fb[0]:
            return False
        if fa[0] == "app":
            if not _cc1(env, fa[1], fb[1], depth, budget):
                return False
        elif fa[0] == "j":
            ja, ea = fa[1], fa[2]
            jb, eb = fb[1], fb[2]
            for xa, xb in ((ja.ty, jb.ty), (ja.base, jb.base),
                           (ja.case, jb.case), (ja.other, jb.other)):
                if not _cc1(env, _Clos(xa, ea), _Clos(xb, eb), depth, budget):
                    return False
            ma = _Clos(ja.motive, (depth + 1, (depth, ea)))
            mb = _Clos(jb.motive, (depth + 1, (depth, eb)))
            if not _cc1(env, ma, mb, depth + 2, budget):
                return False
    return True


def _cc(env: Environment, a: _Clos, sa: list, b: _Clos, sb: list,
        depth: int, budget: Budget) -> bool:
    """Beta/delta/iota conversion of two machine states; no eta.  Definition
    heads are compared spine-first and unfolded lazily on mismatch."""
    while True:
        _machine_whnf(env, a, sa, budget, delta=False)
        _machine_whnf(env, b, sb, budget, delta=False)
        ta, tb = a.term, b.term
        ca, cb = type(ta), type(tb)
        if ca is Global and cb is Global and ta.name == tb.name:
            da = env.lookup(ta.name)
            if not isinstance(da, Definition):
                return _frames_eq(env, sa, sb, depth, budget)
            if len(sa) == len(sb) and _frames_eq(env, sa, sb, depth, budget):
                return True
            budget.spend()
            budget.spend()
            a.term, a.env = da.body, None
            b.term, b.env = da.body, None
            continue
        progressed = False
        if ca is Global:
            da = env.lookup(ta.name)
            if isinstance(da, Definition):
                budget.spend()
                a.term, a.env = da.body, None
                progressed = True
        if cb is Global:
            db = env.lookup(tb.name)
            if isinstance(db, Definition):
                budget.spend()
                b.term, b.env = db.body, None
                progressed = True
        if progressed:
            continue
        if ca is not cb:
            return False
        if ca is Var:
            return (_neutral_var_id(ta, a.env) == _neutral_var_id(tb, b.env)
                    and _frames_eq(env, sa, sb, depth, budget))
        if ca is Sort or ca is Global:
            return ta.name == tb.name and _frames_eq(env, sa, sb, depth, budget)
        if ca is Lam:
            return (_frames_eq(env, sa, sb, depth, budget)
                    and _cc1(env, _Clos(ta.domain, a.env), _Clos(tb.domain, b.env),
                             depth, budget)
                    and _cc1(env, _Clos(ta.body, (depth, a.env)),
                             _Clos(tb.body, (depth, b.env)), depth + 1, budget))
        if ca is Pi or ca is SigmaTy:
            a1, b1 = (ta.domain, ta.codomain) if ca is Pi else (ta.first, ta.second)
            a2, b2 = (tb.domain, tb.codomain) if ca is Pi else (tb.first, tb.second)
            return (_frames_eq(env, sa, sb, depth, budget)
                    and _cc1(env, _Clos(a1, a.env), _Clos(a2, b.env), depth, budget)
                    and _cc1(env, _Clos(b1, (depth, a.env)),
                             _Clos(b2, (depth, b.env)), depth + 1, budget))
        if ca is IdTy:
            return (_frames_eq(env, sa, sb, depth, budget)
                    and all(_cc1(env, _Clos(xa, a.env), _Clos(xb, b.env), depth, budget)
                            for xa, xb in ((ta.ty, tb.ty), (ta.lhs, tb.lhs),
                                           (ta.rhs, tb.rhs))))
        if ca is Refl:
            return (_frames_eq(env, sa, sb, depth, budget)
                    and _cc1(env, _Clos(ta.ty, a.env), _Clos(tb.ty, b.env), depth, budget)
                    and _cc1(env, _Clos(ta.tm, a.env), _Clos(tb.tm, b.env), depth, budget))
        if ca is Pair:
            return (_frames_eq(env, sa, sb, depth, budget)
                    and all(_cc1(env, _Clos(xa, a.env), _Clos(xb, b.env), depth, budget)
                            for xa, xb in ((ta.annot, tb.annot), (ta.a, tb.a),
                                           (ta.b, tb.b))))
        return False


def _conv_terms(env: Environment, t: Term, u: Term, budget: Budget) -> bool:
    if t is u:
        return True
    from .syntax import alpha_eq as _aeq
    if _aeq(t, u):
        return True
    try:
        return _cc1(env, _Clos(t, None), _Clos(u, None), 0, budget)
    except _OutOfFuel:
        raise FuelExhausted() from None


def convertible(env: Environment, t: Term, u: Term, fuel: int = CHECK_FUEL) -> bool:
    """Beta/delta/iota conversion; no eta.  Raises FuelExhausted if undecided."""
    return _conv_terms(env, t, u, Budget(fuel))


# ---------------------------------------------------------------------------
# Typing


def sort_of_product(spec: PtsSpec, s1: str, s2: str) -> str:
    s3 = spec.rule(s1, s2)
    if s3 is None:
        raise NoProductRule(s1, s2)
    return s3


def _motive_inst(m: Term, point: Term, eq: Term) -> Term:
    # m binds (endpoint, proof); instantiate both
    return subst(subst(m, 0, lift(eq, 1)), 0, point)


def infer(env: Environment, ctx: Context, t: Term, budget: Budget | None = None) -> Term:
    if budget is None:
        budget = Budget(CHECK_FUEL)

    def head_sort(ty: Term, ctx: Context) -> str:
        tt = _whnf_syn(env, infer_(ty, ctx), budget)
        if not isinstance(tt, Sort):
            raise IllTypedAnnotation("expected a type (its type must be a sort)")
        return tt.name

    def sort_of_wf(ty: Term, ctx: Context) -> str:
        # the sort an already-inferred (hence well-formed) type inhabits;
        # walks telescopes without re-checking arguments
        cls = type(ty)
        if cls is Pi or cls is SigmaTy:
            a, b = (ty.domain, ty.codomain) if cls is Pi else (ty.first, ty.second)
            return sort_of_product(env.spec, sort_of_wf(a, ctx),
                                   sort_of_wf(b, ctx.push(ty.hint, a)))
        if cls is Sort:
            ax = env.spec.axiom(ty.name)
            if ax is None:
                raise SortHasNoAxiom(ty.name)
            return ax
        if cls is IdTy:
            return sort_of_wf(ty.ty, ctx)
        t2 = _whnf_syn(env, ty, budget)
        if t2 is not ty and type(t2) in (Pi, SigmaTy, Sort, IdTy):
            return sort_of_wf(t2, ctx)
        h, args = spine(t2)
        if type(h) is Var:
            ht: Term | None = ctx.type_of(h.index) if h.index < len(ctx) else None
        elif type(h) is Global:
            d = env.lookup(h.name)
            ht = d.type if d is not None else None
        else:
            ht = None
        if ht is None:
            return head_sort(ty, ctx)  # stuck eliminator or odd head: slow path
        for a in args:
            ht = _whnf_syn(env, ht, budget)
            if not isinstance(ht, Pi):
                return head_sort(ty, ctx)
            ht = subst(ht.codomain, 0, a)
        ht = _whnf_syn(env, ht, budget)
        if isinstance(ht, Sort):
            return ht.name
        return head_sort(ty, ctx)

    def check_(tm: Term, ty: Term, ctx: Context) -> None:
        got = infer_(tm, ctx)
        if not _conv_terms(env, got, ty, budget):
            raise ConversionFailure(ty, got)

    def infer_(t: Term, ctx: Context) -> Term:
        match t:
            case Var(i):
                if i < 0 or i >= len(ctx):
                    raise UnboundVariable(i)
                return ctx.type_of(i)
            case Sort(s):
                ax = env.spec.axiom(s)
                if ax is None:
                    raise SortHasNoAxiom(s)
                return Sort(ax)
            case Global(name):
                d = env.lookup(name)
                if d is None:
                    raise UnknownGlobal(name)
                return d.type
            case Pi(h, a, b) | SigmaTy(h, a, b):
                s1 = head_sort(a, ctx)
                s2 = head_sort(b, ctx.push(h, a))
                return Sort(sort_of_product(env.spec, s1, s2))
            case Lam(h, a, b):
                s1 = head_sort(a, ctx)
                inner = ctx.push(h, a)
                tb = infer_(b, inner)
                s2 = sort_of_wf(tb, inner)
                sort_of_product(env.spec, s1, s2)
                return Pi(h, a, tb)
            case App(f, a):
                tf = _whnf_syn(env, infer_(f, ctx), budget)
                if not isinstance(tf, Pi):
                    raise NotAFunction(tf)
                check_(a, tf.domain, ctx)
                return subst(tf.codomain, 0, a)
            case IdTy(ty, l, r):
                s = head_sort(ty, ctx)
                check_(l, ty, ctx)
                check_(r, ty, ctx)
                return Sort(s)
            case Refl(ty, tm):
                head_sort(ty, ctx)
                check_(tm, ty, ctx)
                return IdTy(ty, tm, tm)
            case JElim(ty, a, hp, he, m, d, b, e):
                head_sort(ty, ctx)
                check_(a, ty, ctx)
                ctx2 = ctx.push(hp, ty).push(he, IdTy(lift(ty, 1), lift(a, 1), Var(0)))
                head_sort(m, ctx2)  # the motive may land in any sort
                check_(d, _motive_inst(m, a, Refl(ty, a)), ctx)
                check_(b, ty, ctx)
                te = _whnf_syn(env, infer_(e, ctx), budget)
                if not isinstance(te, IdTy):
                    raise NotAnIdentity(te)
                want = IdTy(ty, a, b)
                if not _conv_terms(env, te, want, budget):
                    raise ConversionFailure(want, te)
                return _motive_inst(m, b, e)
            case Pair(an, a, b):
                head_sort(an, ctx)
                w = _whnf_syn(env, an, budget)
                if not isinstance(w, SigmaTy):
                    raise IllTypedAnnotation("pair annotation is not a Sig type")
                check_(a, w.first, ctx)
                check_(b, subst(w.second, 0, a), ctx)
                return an
            case Fst(p):
                tp = _whnf_syn(env, infer_(p, ctx), budget)
                if not isinstance(tp, SigmaTy):
                    raise NotAPair(tp)
                return tp.first
            case Snd(p):
                tp = _whnf_syn(env, infer_(p, ctx), budget)
                if not isinstance(tp, SigmaTy):
                    raise NotAPair(tp)
                return subst(tp.second, 0, Fst(p))
        raise AssertionError(f"infer: unknown term {t!r}")

    return infer_(t, ctx)


def check(env: Environment, ctx: Context, t: Term, ty: Term,
          budget: Budget | None = None) -> None:
    if budget is None:
        budget = Budget(CHECK_FUEL)
    got = infer(env, ctx, t, budget)
    if not _conv_terms(env, got, ty, budget):
        raise ConversionFailure(ty, got)


def infer_type_sort(env: Environment, ctx: Context, ty: Term,
                    budget: Budget | None = None) -> str:
    """The sort a type inhabits (whnf of its inferred type must be a sort)."""
    if budget is None:
        budget = Budget(CHECK_FUEL)
    tt = _whnf_syn(env, infer(env, ctx, ty, budget), budget)
    if not isinstance(tt, Sort):
        raise IllTypedAnnotation("expected a type (its type must be a sort)")
    return tt.name


def extend(env: Environment, decl: Decl) -> Environment:
    """Check a declaration against `env` and add it (directives are executed
    but not stored)."""
    empty = Context()
    match decl:
        case Variable(name, ty):
            if env.has(name):
                raise DuplicateName(name)
            infer_type_sort(env, empty, ty)
            return env.extended(decl)
        case Definition(name, ty, body):
            if env.has(name):
                raise DuplicateName(name)
            infer_type_sort(env, empty, ty)
            check(env, empty, body, ty)
            return env.extended(decl)
        case CheckDirective(tm, ty):
            infer_type_sort(env, empty, ty)
            check(env, empty, tm, ty)
            return env
        case NormalizeDirective(fuel, tm):
            infer(env, empty, tm)
            normalize(env, tm, fuel)
            return env
    raise AssertionError(decl)


def extend_all(env: Environment, decls: list[Decl]) -> Environment:
    for d in decls:
        env = extend(env, d)
    return env
