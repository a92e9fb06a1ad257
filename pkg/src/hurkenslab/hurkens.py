"""The axiomatic two-universe signature, the contradiction construction, and
filler validation.

The signature is a 19-entry telescope over host3 describing a large universe
(codes `U1`, decoder `El1`) closed under small and large dependent products,
and a small universe (`u0` with `U0 := El1 u0`, decoder `El0`) likewise
closed, with equality witnesses only for the two level-1 product pairs
(`beta1`, `betaU1`).  Every definitional-equality step the construction needs
at level 1 becomes an explicit transport built from J; the small universe
needs none.

Fillers instantiate the telescope in a host system.  Assignments are
macro-style lambda chains; validation substitutes earlier assignments into
each entry's declared type, treats the ambient `Type1` positions as
"must be a well-formed type", and checks everything else against the host's
real rule table, so an unsupported product surfaces as the exact
NoProductRule/SortHasNoAxiom the host exhibits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import kernel
from .kernel import (
    Budget, ConversionFailure, IllTypedAnnotation, NotAnIdentity,
    TypeCheckError, check, convertible, extend, infer, normalize,
)
from .report import DivergenceReport, InstanceReport
from .syntax import (
    App, Context, Definition, Environment, Fst, Global, IdTy, JElim, Lam,
    Pair, Pi, PtsSpec, Refl, SigmaTy, Snd, Sort, Term, Var, Variable,
    alpha_eq, app, builtin_spec, globals_in, is_scoped, lift, node_count,
    spine, subst,
)

AMBIENT_SORT = "Type1"
_MARK = "\x00type"  # internal marker: "any well-formed type" during validation
_HOLE = "\x00hole"  # internal marker: rewrite position

SIGNATURE_ORDER = (
    "U1", "El1", "Forall1", "lam1", "app1", "beta1",
    "ForallU1", "lamU1", "appU1", "betaU1",
    "u0", "El0", "Forall0", "lam0", "app0",
    "ForallU0", "lamU0", "appU0", "F",
)


# ---------------------------------------------------------------------------
# Level-polymorphic term builders.  A builder is a function depth -> Term;
# binder bodies receive a builder for their variable, so terms written with
# these compose at any depth.

Bld = Callable[[int], Term]


def _bvar(level: int) -> Bld:
    return lambda d: Var(d - 1 - level)


def _k(t: Term) -> Bld:
    return lambda d: lift(t, d)


def _at(t: Term, made_at: int) -> Bld:
    return lambda d: lift(t, d - made_at)


def _G(name: str) -> Bld:
    g = Global(name)
    return lambda d: g


def _S(name: str) -> Bld:
    s = Sort(name)
    return lambda d: s


def _ap(f: Bld, *args: Bld) -> Bld:
    return lambda d: app(f(d), *[a(d) for a in args])


def _lam(hint: str, dom: Bld, body: Callable[[Bld], Bld]) -> Bld:
    def go(d: int) -> Term:
        return Lam(hint, dom(d), body(_bvar(d))(d + 1))
    return go


def _pi(hint: str, dom: Bld, body: Callable[[Bld], Bld]) -> Bld:
    def go(d: int) -> Term:
        return Pi(hint, dom(d), body(_bvar(d))(d + 1))
    return go


def _arrow(dom: Bld, cod: Bld) -> Bld:
    return lambda d: Pi("_", dom(d), lift(cod(d), 1))


def _refl(ty: Bld, tm: Bld) -> Bld:
    return lambda d: Refl(ty(d), tm(d))


def _idty(ty: Bld, l: Bld, r: Bld) -> Bld:
    return lambda d: IdTy(ty(d), l(d), r(d))


# Signature-level combinators (the paper's subscripted notation, explicit).

_U1 = _G("U1")
_u0 = _G("u0")


def _el1(x: Bld) -> Bld:
    return _ap(_G("El1"), x)


def _el0(x: Bld) -> Bld:
    return _ap(_G("El0"), x)


_U0ty = _el1(_u0)


def _cf1(dom: Bld, cod: Bld) -> Bld:
    return _lam("_", _el1(dom), lambda _: cod)


def _cf0(dom: Bld, cod: Bld) -> Bld:
    return _lam("_", _el0(dom), lambda _: cod)


def _fa1(u: Bld, hint: str, fam) -> Bld:
    return _ap(_G("Forall1"), u, _lam(hint, _el1(u), fam))


def _arr1(a: Bld, b: Bld) -> Bld:
    return _ap(_G("Forall1"), a, _cf1(a, b))


def _la1(u: Bld, B: Bld, hint: str, body) -> Bld:
    return _ap(_G("lam1"), u, B, _lam(hint, _el1(u), body))


def _ap1(u: Bld, B: Bld, f: Bld, x: Bld) -> Bld:
    return _ap(_G("app1"), u, B, f, x)


def _laU1(F: Bld, hint: str, body) -> Bld:
    return _ap(_G("lamU1"), F, _lam(hint, _U1, body))


def _apU1(F: Bld, f: Bld, A: Bld) -> Bld:
    return _ap(_G("appU1"), F, f, A)


def _fa0(u: Bld, hint: str, fam) -> Bld:
    return _ap(_G("Forall0"), u, _lam(hint, _el0(u), fam))


def _arr0(a: Bld, b: Bld) -> Bld:
    return _ap(_G("Forall0"), a, _cf0(a, b))


def _la0(u: Bld, B: Bld, hint: str, body) -> Bld:
    return _ap(_G("lam0"), u, B, _lam(hint, _el0(u), body))


def _ap0(u: Bld, B: Bld, f: Bld, x: Bld) -> Bld:
    return _ap(_G("app0"), u, B, f, x)


def _faU0(u: Bld, hint: str, fam) -> Bld:
    return _ap(_G("ForallU0"), u, _lam(hint, _el1(u), fam))


def _laU0(u: Bld, F: Bld, hint: str, body) -> Bld:
    return _ap(_G("lamU0"), u, F, _lam(hint, _el1(u), body))


def _apU0(u: Bld, F: Bld, f: Bld, A: Bld) -> Bld:
    return _ap(_G("appU0"), u, F, f, A)


# ---------------------------------------------------------------------------
# The signature telescope


@dataclass(frozen=True)
class SignatureContext:
    """Ordered entries (name, declared type over host3 + earlier entries)."""

    entries: tuple[tuple[str, Term], ...]

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def type_of(self, name: str) -> Term:
        for n, t in self.entries:
            if n == name:
                return t
        raise KeyError(name)


def build_signature_context() -> SignatureContext:
    ty = _S(AMBIENT_SORT)
    ent: list[tuple[str, Bld]] = []
    ent.append(("U1", ty))
    ent.append(("El1", _arrow(_U1, ty)))
    ent.append(("Forall1", _pi("u", _U1, lambda u: _arrow(_arrow(_el1(u), _U1), _U1))))
    ent.append(("lam1", _pi("u", _U1, lambda u: _pi(
        "B", _arrow(_el1(u), _U1), lambda B: _arrow(
            _pi("x", _el1(u), lambda x: _el1(_ap(B, x))),
            _el1(_ap(_G("Forall1"), u, B)))))))
    ent.append(("app1", _pi("u", _U1, lambda u: _pi(
        "B", _arrow(_el1(u), _U1), lambda B: _arrow(
            _el1(_ap(_G("Forall1"), u, B)),
            _pi("x", _el1(u), lambda x: _el1(_ap(B, x))))))))
    ent.append(("beta1", _pi("u", _U1, lambda u: _pi(
        "B", _arrow(_el1(u), _U1), lambda B: _pi(
            "f", _pi("x", _el1(u), lambda x: _el1(_ap(B, x))), lambda f: _pi(
                "x", _el1(u), lambda x: _idty(
                    _el1(_ap(B, x)),
                    _ap1(u, B, _la1(u, B, "y", lambda y: _ap(f, y)), x),
                    _ap(f, x))))))))
    ent.append(("ForallU1", _arrow(_arrow(_U1, _U1), _U1)))
    ent.append(("lamU1", _pi("F", _arrow(_U1, _U1), lambda F: _arrow(
        _pi("A", _U1, lambda A: _el1(_ap(F, A))),
        _el1(_ap(_G("ForallU1"), F))))))
    ent.append(("appU1", _pi("F", _arrow(_U1, _U1), lambda F: _arrow(
        _el1(_ap(_G("ForallU1"), F)),
        _pi("A", _U1, lambda A: _el1(_ap(F, A)))))))
    ent.append(("betaU1", _pi("F", _arrow(_U1, _U1), lambda F: _pi(
        "f", _pi("A", _U1, lambda A: _el1(_ap(F, A))), lambda f: _pi(
            "A", _U1, lambda A: _idty(
                _el1(_ap(F, A)),
                _apU1(F, _laU1(F, "B", lambda B: _ap(f, B)), A),
                _ap(f, A)))))))
    ent.append(("u0", _U1))
    ent.append(("El0", _arrow(_U0ty, ty)))
    ent.append(("Forall0", _pi("u", _U0ty, lambda u: _arrow(
        _arrow(_el0(u), _U0ty), _U0ty))))
    ent.append(("lam0", _pi("u", _U0ty, lambda u: _pi(
        "B", _arrow(_el0(u), _U0ty), lambda B: _arrow(
            _pi("x", _el0(u), lambda x: _el0(_ap(B, x))),
            _el0(_ap(_G("Forall0"), u, B)))))))
    ent.append(("app0", _pi("u", _U0ty, lambda u: _pi(
        "B", _arrow(_el0(u), _U0ty), lambda B: _arrow(
            _el0(_ap(_G("Forall0"), u, B)),
            _pi("x", _el0(u), lambda x: _el0(_ap(B, x))))))))
    ent.append(("ForallU0", _pi("u", _U1, lambda u: _arrow(
        _arrow(_el1(u), _U0ty), _U0ty))))
    ent.append(("lamU0", _pi("u", _U1, lambda u: _pi(
        "F", _arrow(_el1(u), _U0ty), lambda F: _arrow(
            _pi("A", _el1(u), lambda A: _el0(_ap(F, A))),
            _el0(_ap(_G("ForallU0"), u, F)))))))
    ent.append(("appU0", _pi("u", _U1, lambda u: _pi(
        "F", _arrow(_el1(u), _U0ty), lambda F: _arrow(
            _el0(_ap(_G("ForallU0"), u, F)),
            _pi("A", _el1(u), lambda A: _el0(_ap(F, A))))))))
    ent.append(("F", _U0ty))
    entries = tuple((n, b(0)) for n, b in ent)
    assert tuple(n for n, _ in entries) == SIGNATURE_ORDER
    return SignatureContext(entries)


def signature_env(sig: SignatureContext | None = None,
                  base: Environment | None = None,
                  ambient: str | None = None) -> Environment:
    """Replay the telescope as Variables over a host (host3 by default)."""
    sig = sig or build_signature_context()
    env = base if base is not None else Environment(builtin_spec("host3"))
    for name, ty in sig.entries:
        if ambient is not None and ambient != AMBIENT_SORT:
            ty = _swap_sort(ty, AMBIENT_SORT, ambient)
        env = extend(env, Variable(name, ty))
    return env


def _swap_sort(t: Term, frm: str, to: str) -> Term:
    repl = Sort(to)

    def go(t: Term) -> Term:
        match t:
            case Sort(n):
                return repl if n == frm else t
            case Var() | Global():
                return t
            case Pi(h, a, b):
                return Pi(h, go(a), go(b))
            case Lam(h, a, b):
                return Lam(h, go(a), go(b))
            case App(f, a):
                return App(go(f), go(a))
            case IdTy(x, y, z):
                return IdTy(go(x), go(y), go(z))
            case Refl(x, y):
                return Refl(go(x), go(y))
            case JElim(ty, a, hp, he, m, d, b, e):
                return JElim(go(ty), go(a), hp, he, go(m), go(d), go(b), go(e))
            case SigmaTy(h, a, b):
                return SigmaTy(h, go(a), go(b))
            case Pair(an, a, b):
                return Pair(go(an), go(a), go(b))
            case Fst(p):
                return Fst(go(p))
            case Snd(p):
                return Snd(go(p))
        raise AssertionError(t)

    return go(t)


# ---------------------------------------------------------------------------
# The paradox data definitions (paper-level notation spelled out)

_GV, _GU = _G("V"), _G("U")
_Gsb, _Gle, _Gle2 = _G("sb"), _G("le"), _G("le'")
_Gind, _GWF, _GI = _G("induct"), _G("WF"), _G("I")


def _vfam() -> Bld:
    return _lam("A", _U1, lambda A: _arr1(
        _arr1(_arr1(A, _u0), _arr1(A, _u0)), _arr1(A, _u0)))


def _XU(A: Bld) -> Bld:
    return _arr1(_arr1(A, _u0), _arr1(A, _u0))


def _famArr(A: Bld) -> Bld:
    return _cf1(_XU(A), _arr1(A, _u0))


def _sb_chain(z: Bld, A: Bld, r: Bld, a: Bld) -> Bld:
    # (sb z) .1 [A] .1 r .1 a
    s1 = _apU1(_vfam(), _ap(_Gsb, z), A)
    s2 = _ap1(_XU(A), _famArr(A), s1, r)
    return _ap1(A, _cf1(A, _u0), s2, a)


def _C(i: Bld) -> Bld:
    # lam2 A, lam1 r, lam1 a, i .1 (lam1 v, (sb v).1[A].1 r .1 a)
    return _laU1(_vfam(), "A", lambda A: _la1(
        _XU(A), _famArr(A), "r", lambda r: _la1(
            A, _cf1(A, _u0), "a", lambda a: _ap1(
                _GU, _cf1(_GU, _u0), i,
                _la1(_GV, _cf1(_GV, _u0), "v",
                     lambda v: _sb_chain(v, A, r, a))))))


def _dd(x: Bld) -> Bld:
    # lam1 v, (sb v).1[U].1 le' .1 x
    return _la1(_GV, _cf1(_GV, _u0), "v", lambda v: _ap1(
        _GU, _cf1(_GU, _u0),
        _ap1(_XU(_GU), _famArr(_GU), _apU1(_vfam(), _ap(_Gsb, v), _GU), _Gle2),
        x))


def _i_at(i: Bld, x: Bld) -> Bld:
    # i .1 x  for i : El1 (U ->1 u0)
    return _ap1(_GU, _cf1(_GU, _u0), i, x)


def definition_items() -> list[tuple[str, Term, Term]]:
    """(name, type, body) for V, U, sb, le, le', induct, WF, I."""
    items: list[tuple[str, Bld, Bld]] = []
    items.append(("V", _U1, _ap(_G("ForallU1"), _vfam())))
    items.append(("U", _U1, _arr1(_GV, _u0)))
    items.append((
        "sb", _arrow(_el1(_GV), _el1(_GV)),
        _lam("z", _el1(_GV), lambda z: _laU1(_vfam(), "A", lambda A: _la1(
            _XU(A), _famArr(A), "r", lambda r: _la1(
                A, _cf1(A, _u0), "a", lambda a: _ap1(
                    A, _cf1(A, _u0),
                    _ap1(_arr1(A, _u0),
                         _cf1(_arr1(A, _u0), _arr1(A, _u0)),
                         r,
                         _ap1(_XU(A), _famArr(A), _apU1(_vfam(), z, A), r)),
                    a)))))))
    items.append((
        "le",
        _arrow(_el1(_arr1(_GU, _u0)), _arrow(_el1(_GU), _U0ty)),
        _lam("i", _el1(_arr1(_GU, _u0)), lambda i: _lam(
            "x", _el1(_GU), lambda x: _ap1(_GV, _cf1(_GV, _u0), x, _C(i))))))
    items.append((
        "le'",
        _el1(_arr1(_arr1(_GU, _u0), _arr1(_GU, _u0))),
        _la1(_arr1(_GU, _u0), _cf1(_arr1(_GU, _u0), _arr1(_GU, _u0)),
             "i", lambda i: _la1(_GU, _cf1(_GU, _u0), "x",
                                 lambda x: _ap(_Gle, i, x)))))
    items.append((
        "induct",
        _arrow(_el1(_arr1(_GU, _u0)), _U0ty),
        _lam("i", _el1(_arr1(_GU, _u0)), lambda i: _faU0(
            _GU, "x", lambda x: _arr0(_ap(_Gle, i, x), _i_at(i, x))))))
    items.append((
        "WF", _el1(_GU),
        _la1(_GV, _cf1(_GV, _u0), "z", lambda z: _ap(_Gind, _ap1(
            _XU(_GU), _famArr(_GU), _apU1(_vfam(), z, _GU), _Gle2)))))
    items.append((
        "I",
        _arrow(_el1(_GU), _U0ty),
        _lam("x", _el1(_GU), lambda x: _arr0(
            _faU0(_arr1(_GU, _u0), "i", lambda i: _arr0(
                _ap(_Gle, i, x), _i_at(i, _dd(x)))),
            _G("F")))))
    return [(n, ty(0), body(0)) for n, ty, body in items]


def build_definitions(env: Environment) -> Environment:
    """Extend a signature environment with the data definitions, checking each."""
    for name, ty, body in definition_items():
        env = extend(env, Definition(name, ty, body))
    return env


# ---------------------------------------------------------------------------
# Transports


def sym_term(S: Term, a: Term, b: Term, eq: Term) -> Term:
    """From eq : Id S a b, a proof of Id S b a."""
    motive = IdTy(lift(S, 2), Var(1), lift(a, 2))
    return JElim(S, a, "w", "_", motive, Refl(S, a), b, eq)


def _motive2(motive: Lam) -> Term:
    # one-binder motive (Lam) to the raw two-binder body J expects
    return lift(motive.body, 1)


def transport(S: Term, a: Term, b: Term, eq: Term, motive: Lam, value: Term) -> Term:
    """value : motive a, eq : Id S a b  |-  motive b."""
    return JElim(S, a, motive.hint, "_", _motive2(motive), value, b, eq)


def transport_back(S: Term, a: Term, b: Term, eq: Term, motive: Lam, value: Term) -> Term:
    """value : motive b, eq : Id S a b  |-  motive a (transport along symmetry)."""
    return JElim(S, b, motive.hint, "_", _motive2(motive), value, a,
                 sym_term(S, a, b, eq))


def rewrite_along(env: Environment, ctx: Context, eq_proof: Term, motive: Term,
                  value: Term) -> Term:
    """Explicit transport: eq_proof : Id T a b, motive : T -> s, value : motive a;
    result inhabits motive b."""
    budget = Budget(kernel.CHECK_FUEL)
    ety = kernel._whnf_syn(env, infer(env, ctx, eq_proof, budget), budget)
    if not isinstance(ety, IdTy):
        raise NotAnIdentity(ety)
    if isinstance(motive, Lam):
        m2 = _motive2(motive)
        hint = motive.hint
    else:
        m2 = App(lift(motive, 2), Var(1))
        hint = "w"
    return JElim(ety.ty, ety.lhs, hint, "_", m2, value, ety.rhs, eq_proof)


# ---------------------------------------------------------------------------
# Administrative reduction and unfolding (presentation only; conversion makes
# these steps free, but the rewrite engine needs redexes to be visible)


def beta_lite(t: Term, _budget: list[int] | None = None) -> Term:
    """Contract host-level beta redexes bottom-up (no delta, no iota).

    Bounded: administrative normalization of macro expansions must terminate;
    if it does not, the build fails loudly instead of spinning."""
    b = _budget if _budget is not None else [2_000_000]

    def go(t: Term) -> Term:
        match t:
            case Var() | Sort() | Global():
                return t
            case App(f, a):
                f2, a2 = go(f), go(a)
                if isinstance(f2, Lam):
                    b[0] -= 1
                    if b[0] < 0:
                        raise AssertionError("beta_lite: contraction budget exhausted")
                    return go(subst(f2.body, 0, a2))
                return App(f2, a2)
            case Pi(h, a, bb):
                return Pi(h, go(a), go(bb))
            case Lam(h, a, bb):
                return Lam(h, go(a), go(bb))
            case IdTy(x, y, z):
                return IdTy(go(x), go(y), go(z))
            case Refl(x, y):
                return Refl(go(x), go(y))
            case JElim(ty, a, hp, he, m, d, bb, e):
                return JElim(go(ty), go(a), hp, he, go(m), go(d), go(bb), go(e))
            case SigmaTy(h, a, bb):
                return SigmaTy(h, go(a), go(bb))
            case Pair(an, a, bb):
                return Pair(go(an), go(a), go(bb))
            case Fst(p):
                return Fst(go(p))
            case Snd(p):
                return Snd(go(p))
        raise AssertionError(t)

    return go(t)


def _replace_global(t: Term, name: str, body: Term, limit: int) -> tuple[Term, int]:
    """Replace up to `limit` occurrences of Global(name), pre-order left-to-right."""
    state = [limit]

    def go(t: Term, depth: int) -> Term:
        if state[0] == 0:
            return t
        match t:
            case Global(n):
                if n == name and state[0] > 0:
                    state[0] -= 1
                    return lift(body, depth)
                return t
            case Var() | Sort():
                return t
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Pi(h, a, b):
                return Pi(h, go(a, depth), go(b, depth + 1))
            case Lam(h, a, b):
                return Lam(h, go(a, depth), go(b, depth + 1))
            case IdTy(x, y, z):
                return IdTy(go(x, depth), go(y, depth), go(z, depth))
            case Refl(x, y):
                return Refl(go(x, depth), go(y, depth))
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
        raise AssertionError(t)

    out = go(t, 0)
    return out, limit - state[0]


def unfold_in(env: Environment, t: Term, names, first_only: bool = False) -> Term:
    """Delta-expand the named definitions in `t` (positional left-to-right when
    first_only), then contract administrative beta redexes."""
    if isinstance(names, str):
        names = [names]
    bodies = {}
    for n in names:
        d = env.lookup(n)
        assert isinstance(d, Definition), n
        bodies[n] = d.body
    if first_only:
        assert len(names) == 1
        t, k = _replace_global(t, names[0], bodies[names[0]], 1)
        assert k == 1, f"no occurrence of {names[0]} to unfold"
        return beta_lite(t)
    for _ in range(200):
        changed = False
        for n in names:
            t, k = _replace_global(t, n, bodies[n], 10 ** 9)
            changed = changed or k > 0
        if not changed:
            return beta_lite(t)
    raise AssertionError(f"unfold of {names} did not reach a fixpoint")


# ---------------------------------------------------------------------------
# The simplify engine: turn visible level-1 redexes into explicit transports.
#
# A redex `app1 u B (lam1 u B fn) x` (resp. appU1/lamU1) is rewritable when
# the whole redex is closed under the binders of the goal above it; one
# transport is emitted per occurrence, leftmost-innermost first.

_INF = 10 ** 9


def _min_free(t: Term, depth: int = 0) -> int:
    match t:
        case Var(i):
            return i - depth if i >= depth else _INF
        case Sort() | Global():
            return _INF
        case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b):
            return min(_min_free(a, depth), _min_free(b, depth + 1))
        case App(f, a):
            return min(_min_free(f, depth), _min_free(a, depth))
        case IdTy(x, y, z) | Pair(x, y, z):
            return min(_min_free(x, depth), _min_free(y, depth), _min_free(z, depth))
        case Refl(x, y):
            return min(_min_free(x, depth), _min_free(y, depth))
        case JElim(ty, a, _, _, m, d, b, e):
            return min(_min_free(ty, depth), _min_free(a, depth), _min_free(m, depth + 2),
                       _min_free(d, depth), _min_free(b, depth), _min_free(e, depth))
        case Fst(p) | Snd(p):
            return _min_free(p, depth)
    raise AssertionError(t)


def _beta1_parts(t: Term):
    h, args = spine(t)
    if isinstance(h, Global) and h.name == "app1" and len(args) == 4:
        u, B, f, x = args
        fh, fargs = spine(f)
        if isinstance(fh, Global) and fh.name == "lam1" and len(fargs) == 3:
            u2, B2, fn = fargs
            if isinstance(fn, Lam) and alpha_eq(u, u2) and alpha_eq(B, B2):
                return u, B, fn, x
    return None


def _betaU1_parts(t: Term):
    h, args = spine(t)
    if isinstance(h, Global) and h.name == "appU1" and len(args) == 3:
        F, f, A = args
        fh, fargs = spine(f)
        if isinstance(fh, Global) and fh.name == "lamU1" and len(fargs) == 2:
            F2, fn = fargs
            if isinstance(fn, Lam) and alpha_eq(F, F2):
                return F, fn, A
    return None


def _try_redex(t: Term, d: int):
    """When t (at binder depth d of the goal) is a closed rewritable redex,
    return (S, lhs, rhs, eq) strengthened to the ambient context."""
    r1 = _beta1_parts(t)
    if r1 is not None and _min_free(t) >= d:
        u, B, fn, x = (lift(z, -d) for z in r1)
        lhs = lift(t, -d)
        rhs = subst(fn.body, 0, x)
        s = App(Global("El1"), App(B, x))
        eq = app(Global("beta1"), u, B, fn, x)
        return s, lhs, rhs, eq
    r2 = _betaU1_parts(t)
    if r2 is not None and _min_free(t) >= d:
        F, fn, A = (lift(z, -d) for z in r2)
        lhs = lift(t, -d)
        rhs = subst(fn.body, 0, A)
        s = App(Global("El1"), App(F, A))
        eq = app(Global("betaU1"), F, fn, A)
        return s, lhs, rhs, eq
    return None


def _find_rewrite(goal: Term):
    """Leftmost-innermost rewritable redex; returns (goal_with_hole, info) or None."""

    def go(t: Term, d: int):
        match t:
            case Var() | Sort() | Global():
                pass
            case App(f, a):
                r = go(f, d)
                if r:
                    return App(r[0], a), r[1]
                r = go(a, d)
                if r:
                    return App(f, r[0]), r[1]
            case Pi(h, a, b):
                r = go(a, d)
                if r:
                    return Pi(h, r[0], b), r[1]
                r = go(b, d + 1)
                if r:
                    return Pi(h, a, r[0]), r[1]
            case Lam(h, a, b):
                r = go(a, d)
                if r:
                    return Lam(h, r[0], b), r[1]
                r = go(b, d + 1)
                if r:
                    return Lam(h, a, r[0]), r[1]
            case SigmaTy(h, a, b):
                r = go(a, d)
                if r:
                    return SigmaTy(h, r[0], b), r[1]
                r = go(b, d + 1)
                if r:
                    return SigmaTy(h, a, r[0]), r[1]
            case IdTy(x, y, z):
                for idx, sub, dd in ((0, x, d), (1, y, d), (2, z, d)):
                    r = go(sub, dd)
                    if r:
                        parts = [x, y, z]
                        parts[idx] = r[0]
                        return IdTy(*parts), r[1]
            case Refl(x, y):
                r = go(x, d)
                if r:
                    return Refl(r[0], y), r[1]
                r = go(y, d)
                if r:
                    return Refl(x, r[0]), r[1]
            case JElim(ty, a, hp, he, m, dd_, b, e):
                slots = [(ty, d), (a, d), (m, d + 2), (dd_, d), (b, d), (e, d)]
                for idx, (sub, dsub) in enumerate(slots):
                    r = go(sub, dsub)
                    if r:
                        parts = [ty, a, m, dd_, b, e]
                        parts[idx] = r[0]
                        return JElim(parts[0], parts[1], hp, he, parts[2],
                                     parts[3], parts[4], parts[5]), r[1]
            case Pair(an, a, b):
                for idx, sub in enumerate((an, a, b)):
                    r = go(sub, d)
                    if r:
                        parts = [an, a, b]
                        parts[idx] = r[0]
                        return Pair(*parts), r[1]
            case Fst(p):
                r = go(p, d)
                if r:
                    return Fst(r[0]), r[1]
            case Snd(p):
                r = go(p, d)
                if r:
                    return Snd(r[0]), r[1]
            case _:
                raise AssertionError(t)
        info = _try_redex(t, d)
        if info:
            return Global(_HOLE), info
        return None

    return go(goal, 0)


def _hole_to_var(t: Term, depth: int = 0) -> Term:
    match t:
        case Global(n) if n == _HOLE:
            return Var(depth)
        case Var() | Sort() | Global():
            return t
        case App(f, a):
            return App(_hole_to_var(f, depth), _hole_to_var(a, depth))
        case Pi(h, a, b):
            return Pi(h, _hole_to_var(a, depth), _hole_to_var(b, depth + 1))
        case Lam(h, a, b):
            return Lam(h, _hole_to_var(a, depth), _hole_to_var(b, depth + 1))
        case SigmaTy(h, a, b):
            return SigmaTy(h, _hole_to_var(a, depth), _hole_to_var(b, depth + 1))
        case IdTy(x, y, z):
            return IdTy(_hole_to_var(x, depth), _hole_to_var(y, depth), _hole_to_var(z, depth))
        case Refl(x, y):
            return Refl(_hole_to_var(x, depth), _hole_to_var(y, depth))
        case JElim(ty, a, hp, he, m, d_, b, e):
            return JElim(_hole_to_var(ty, depth), _hole_to_var(a, depth), hp, he,
                         _hole_to_var(m, depth + 2), _hole_to_var(d_, depth),
                         _hole_to_var(b, depth), _hole_to_var(e, depth))
        case Pair(an, a, b):
            return Pair(_hole_to_var(an, depth), _hole_to_var(a, depth), _hole_to_var(b, depth))
        case Fst(p):
            return Fst(_hole_to_var(p, depth))
        case Snd(p):
            return Snd(_hole_to_var(p, depth))
    raise AssertionError(t)


def _fill_hole(t: Term, repl: Term, depth: int = 0) -> Term:
    match t:
        case Global(n) if n == _HOLE:
            return lift(repl, depth)
        case Var() | Sort() | Global():
            return t
        case App(f, a):
            return App(_fill_hole(f, repl, depth), _fill_hole(a, repl, depth))
        case Pi(h, a, b):
            return Pi(h, _fill_hole(a, repl, depth), _fill_hole(b, repl, depth + 1))
        case Lam(h, a, b):
            return Lam(h, _fill_hole(a, repl, depth), _fill_hole(b, repl, depth + 1))
        case SigmaTy(h, a, b):
            return SigmaTy(h, _fill_hole(a, repl, depth), _fill_hole(b, repl, depth + 1))
        case IdTy(x, y, z):
            return IdTy(_fill_hole(x, repl, depth), _fill_hole(y, repl, depth),
                        _fill_hole(z, repl, depth))
        case Refl(x, y):
            return Refl(_fill_hole(x, repl, depth), _fill_hole(y, repl, depth))
        case JElim(ty, a, hp, he, m, d_, b, e):
            return JElim(_fill_hole(ty, repl, depth), _fill_hole(a, repl, depth), hp, he,
                         _fill_hole(m, repl, depth + 2), _fill_hole(d_, repl, depth),
                         _fill_hole(b, repl, depth), _fill_hole(e, repl, depth))
        case Pair(an, a, b):
            return Pair(_fill_hole(an, repl, depth), _fill_hole(a, repl, depth),
                        _fill_hole(b, repl, depth))
        case Fst(p):
            return Fst(_fill_hole(p, repl, depth))
        case Snd(p):
            return Snd(_fill_hole(p, repl, depth))
    raise AssertionError(t)


def _hole_all(t: Term, lhs: Term, depth: int = 0) -> Term:
    """Replace every occurrence alpha-equal to `lhs` (closed under the binders
    above it) by the hole marker.  A transport must rewrite all copies of an
    instance at once: duplicated annotations (e.g. a constant family's binder
    type) would otherwise fall out of sync and the motive would be ill-typed."""
    if _min_free(t) >= depth and alpha_eq(lift(t, -depth), lhs):
        return Global(_HOLE)
    match t:
        case Var() | Sort() | Global():
            return t
        case App(f, a):
            return App(_hole_all(f, lhs, depth), _hole_all(a, lhs, depth))
        case Pi(h, a, b):
            return Pi(h, _hole_all(a, lhs, depth), _hole_all(b, lhs, depth + 1))
        case Lam(h, a, b):
            return Lam(h, _hole_all(a, lhs, depth), _hole_all(b, lhs, depth + 1))
        case SigmaTy(h, a, b):
            return SigmaTy(h, _hole_all(a, lhs, depth), _hole_all(b, lhs, depth + 1))
        case IdTy(x, y, z):
            return IdTy(_hole_all(x, lhs, depth), _hole_all(y, lhs, depth),
                        _hole_all(z, lhs, depth))
        case Refl(x, y):
            return Refl(_hole_all(x, lhs, depth), _hole_all(y, lhs, depth))
        case JElim(ty, a, hp, he, m, d_, b, e):
            return JElim(_hole_all(ty, lhs, depth), _hole_all(a, lhs, depth), hp, he,
                         _hole_all(m, lhs, depth + 2), _hole_all(d_, lhs, depth),
                         _hole_all(b, lhs, depth), _hole_all(e, lhs, depth))
        case Pair(an, a, b):
            return Pair(_hole_all(an, lhs, depth), _hole_all(a, lhs, depth),
                        _hole_all(b, lhs, depth))
        case Fst(p):
            return Fst(_hole_all(p, lhs, depth))
        case Snd(p):
            return Snd(_hole_all(p, lhs, depth))
    raise AssertionError(t)


def _next_rewrite(goal: Term):
    """Pick the leftmost-innermost rewritable redex, then hole out every
    occurrence of that instance simultaneously."""
    r = _find_rewrite(goal)
    if r is None:
        return None
    _, info = r
    return _hole_all(goal, info[1]), info


def simplify_goal(env: Environment, goal: Term):
    """Rewrite all visible redexes out of `goal`; returns (new_goal, wrap, count)
    where wrap maps a proof of the new goal to a proof of the original."""
    steps = []
    while True:
        r = _next_rewrite(goal)
        if r is None:
            break
        goal_holed, (s, lhs, rhs, eq) = r
        motive = Lam("w", s, _hole_to_var(lift(goal_holed, 1)))
        steps.append((s, lhs, rhs, eq, motive))
        goal = _fill_hole(goal_holed, rhs)

    def wrap(p: Term) -> Term:
        for s, lhs, rhs, eq, motive in reversed(steps):
            p = transport_back(s, lhs, rhs, eq, motive, p)
        return p

    return goal, wrap, len(steps)


def simplify_hyp(env: Environment, term: Term, ty: Term):
    """Rewrite all visible redexes in a hypothesis type, transporting the
    inhabitant along; returns (new_term, new_type, count)."""
    count = 0
    while True:
        r = _next_rewrite(ty)
        if r is None:
            break
        ty_holed, (s, lhs, rhs, eq) = r
        motive = Lam("w", s, _hole_to_var(lift(ty_holed, 1)))
        term = transport(s, lhs, rhs, eq, motive, term)
        ty = _fill_hole(ty_holed, rhs)
        count += 1
    return term, ty, count


# ---------------------------------------------------------------------------
# Destructuring helpers for the proof scripts


def _dest_el0(t: Term) -> Term:
    h, args = spine(t)
    assert isinstance(h, Global) and h.name == "El0" and len(args) == 1, t
    return args[0]


def _dest_faU0(t: Term) -> tuple[Term, Lam]:
    h, args = spine(t)
    assert isinstance(h, Global) and h.name == "ForallU0" and len(args) == 2, t
    assert isinstance(args[1], Lam)
    return args[0], args[1]


def _dest_fa0(t: Term) -> tuple[Term, Lam]:
    h, args = spine(t)
    assert isinstance(h, Global) and h.name == "Forall0" and len(args) == 2, t
    assert isinstance(args[1], Lam)
    return args[0], args[1]


def _dest_ap1(t: Term) -> tuple[Term, Term, Term, Term]:
    h, args = spine(t)
    assert isinstance(h, Global) and h.name == "app1" and len(args) == 4, t
    return tuple(args)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# The proofs (explicit terms; every `simplify` of the scripted development is
# a batch of transports produced by the engine)


def _Ifam() -> Bld:
    # lam1 u, I u
    return _la1(_GU, _cf1(_GU, _u0), "u", lambda u: _ap(_GI, u))


def _famOmega() -> Bld:
    return _lam("i", _el1(_arr1(_GU, _u0)),
                lambda i: _arr0(_ap(_Gind, i), _i_at(i, _GWF)))


def _fam_induct_at(i: Bld) -> Bld:
    # induct's body family at a given index term
    return _lam("x", _el1(_GU), lambda x: _arr0(_ap(_Gle, i, x), _i_at(i, x)))


def _gg(i: Bld) -> Bld:
    # lam1 y, i .1 (lam1 v, (sb v).1[U].1 le'.1 y)
    return _la1(_GU, _cf1(_GU, _u0), "y", lambda y: _i_at(i, _dd(y)))


def omega_type() -> Term:
    return _el0(_ap(_G("ForallU0"), _arr1(_GU, _u0),
                    _lam("i", _el1(_arr1(_GU, _u0)),
                         lambda i: _arr0(_ap(_Gind, i), _i_at(i, _GWF)))))(0)


def lemma1_type() -> Term:
    return _el0(_ap(_Gind, _Ifam()))(0)


def lemma2_type() -> Term:
    return _el0(_arr0(
        _ap(_G("ForallU0"), _arr1(_GU, _u0),
            _lam("i", _el1(_arr1(_GU, _u0)),
                 lambda i: _arr0(_ap(_Gind, i), _i_at(i, _GWF)))),
        _G("F")))(0)


def paradox_type() -> Term:
    return _el0(_G("F"))(0)


def build_omega(env: Environment) -> Term:
    def outer(i: Bld) -> Bld:
        u2 = _ap(_Gind, i)
        b2 = _cf0(u2, _i_at(i, _GWF))

        def body(y: Bld) -> Bld:
            return lambda d: _omega_body(env, i(d), y(d), d)

        return _la0(u2, b2, "y", body)

    return _laU0(_arr1(_GU, _u0), _famOmega(), "i", outer)(0)


def _omega_body(env: Environment, i_t: Term, y_t: Term, d: int) -> Term:
    ib, yb = _at(i_t, d), _at(y_t, d)
    fam_i = _fam_induct_at(ib)
    le_i_wf = _ap(_Gle, ib, _GWF)

    # hole: El0 (le i WF)
    g = _el0(le_i_wf)(d)
    g = unfold_in(env, g, ["le", "WF", "induct"])
    g, wrap1, _ = simplify_goal(env, g)
    u_g, fam_x = _dest_faU0(_dest_el0(g))
    arg1, fam_b = _dest_fa0(fam_x.body)  # scoped under fam_x's binder

    def inner_x(x: Bld) -> Bld:
        def inner_h0(h0: Bld) -> Bld:
            return lambda dd: _omega_inner(env, i_t, y_t, fam_b.body, dd)

        return _la0(_at(arg1, d + 1), _at(fam_b, d + 1), "h0", inner_h0)

    inner = _laU0(_at(u_g, d), _at(fam_x, d), "x", inner_x)(d)
    pr = wrap1(inner)

    core = _apU0(_GU, fam_i, yb, _GWF)
    return _ap0(le_i_wf, _cf0(le_i_wf, _i_at(ib, _GWF)), core, _at(pr, d))(d)


def _omega_inner(env: Environment, i_t: Term, y_t: Term, goal_body: Term, dd: int) -> Term:
    # context: ... i y |- x h0 ; goal_body was scoped under (x, family-binder)
    # and mentions neither binder at index 0, so it reads correctly here.
    ib, yb = _at(i_t, dd - 2), _at(y_t, dd - 2)
    goal = App(Global("El0"), goal_body)
    goal, wrap2, _ = simplify_goal(env, goal)
    _, _, _, ddx = _dest_ap1(_dest_el0(goal))
    ddxb = _at(ddx, dd)

    le_i_ddx = _ap(_Gle, ib, ddxb)
    core = _apU0(_GU, _fam_induct_at(ib), yb, ddxb)
    pr2 = _omega_pr2(env, ib, le_i_ddx(dd), dd)
    res = _ap0(le_i_ddx, _cf0(le_i_ddx, _i_at(ib, ddxb)), core, _at(pr2, dd))(dd)
    return wrap2(res)


def _omega_pr2(env: Environment, ib: Bld, le_i_ddx: Term, dd: int) -> Term:
    # goal: El0 (le i (lam1 v, (sb v).1[U].1 le'.1 x)); ends at h0's type
    h = App(Global("El0"), le_i_ddx)
    h = unfold_in(env, h, "le")
    h, wa, _ = simplify_goal(env, h)
    h = unfold_in(env, h, "sb", first_only=True)
    h, wb, _ = simplify_goal(env, h)
    h = unfold_in(env, h, "le'", first_only=True)
    h, wc, _ = simplify_goal(env, h)
    return wa(wb(wc(Var(0))))


def build_lemma1(env: Environment) -> Term:
    ifam = _Ifam()
    fam = _fam_induct_at(ifam)

    def outer(x: Bld) -> Bld:
        u2 = _ap(_Gle, ifam, x)
        b2 = _cf0(u2, _i_at(ifam, x))

        def body(p: Bld) -> Bld:
            return lambda d: _lemma1_body(env, x(d), p(d), d)

        return _la0(u2, b2, "p", body)

    return _laU0(_GU, fam, "x", outer)(0)


def _lemma1_body(env: Environment, x_t: Term, p_t: Term, d: int) -> Term:
    xb = _at(x_t, d)
    # goal El0 ((lam1 u, I u) .1 x) ~> El0 (I x)
    g = _el0(_i_at(_Ifam(), xb))(d)
    g, wrap1, _ = simplify_goal(env, g)
    g = unfold_in(env, g, "I", first_only=True)
    arg, fam_f = _dest_fa0(_dest_el0(g))

    def inner_q(q: Bld) -> Bld:
        return lambda d2: _lemma1_body2(env, x_t, p_t, q(d2), d2)

    inner = _la0(_at(arg, d), _at(fam_f, d), "q", inner_q)(d)
    return wrap1(inner)


def _lemma1_body2(env: Environment, x_t: Term, p_t: Term, q_t: Term, d: int) -> Term:
    xb, pb, qb = _at(x_t, d - 1), _at(p_t, d - 1), _at(q_t, d)
    ifam = _Ifam()
    ddx = _dd(xb)

    fam_q = _lam("i", _el1(_arr1(_GU, _u0)),
                 lambda i: _arr0(_ap(_Gle, i, xb), _i_at(i, ddx)))

    # assert h : El0 (I (lam1 v, ...x)) from q .0 [lam1 u, I u] .0 p
    le_if_x = _ap(_Gle, ifam, xb)
    have = _ap0(le_if_x, _cf0(le_if_x, _i_at(ifam, ddx)),
                _apU0(_arr1(_GU, _u0), fam_q, qb, ifam), pb)(d)
    have_ty = _el0(_i_at(ifam, ddx))(d)
    h_term, h_ty, _ = simplify_hyp(env, have, have_ty)

    # refine (h .0 _)
    ity = unfold_in(env, h_ty, "I", first_only=True)
    arg2, fam_f2 = _dest_fa0(_dest_el0(ity))
    u_h, fam_h = _dest_faU0(arg2)
    first_h, fam_b2 = _dest_fa0(fam_h.body)

    def inner_i(i: Bld) -> Bld:
        def inner_h2(h2: Bld) -> Bld:
            return lambda d3: _lemma1_body3(env, x_t, q_t, i(d3), d3)

        return _la0(_at(first_h, d + 1), _at(fam_b2, d + 1), "h'", inner_h2)

    hole = _laU0(_at(u_h, d), _at(fam_h, d), "i", inner_i)(d)
    return _ap0(_at(arg2, d), _at(fam_f2, d), _at(h_term, d), _at(hole, d))(d)


def _lemma1_body3(env: Environment, x_t: Term, q_t: Term, i_t: Term, d: int) -> Term:
    xb = _at(x_t, d - 3)
    qb = _at(q_t, d - 2)
    ib = _at(i_t, d)  # i_t is materialized at this body's own depth
    ddx = _dd(xb)
    gg = _gg(ib)

    fam_q = _lam("i", _el1(_arr1(_GU, _u0)),
                 lambda i2: _arr0(_ap(_Gle, i2, xb), _i_at(i2, ddx)))

    have2 = _apU0(_arr1(_GU, _u0), fam_q, qb, gg)(d)
    have2_ty = _el0(_arr0(_ap(_Gle, gg, xb), _i_at(gg, ddx)))(d)
    q2, q2_ty, _ = simplify_hyp(env, have2, have2_ty)

    # h' rewriting: El0 (le i ddx)  ~>  El0 (le (lam1 y, i.1 d(y)) x)
    h2 = Var(0)
    ty = _el0(_ap(_Gle, ib, ddx))(d)
    ty = unfold_in(env, ty, "le", first_only=True)
    h2, ty, _ = simplify_hyp(env, h2, ty)
    ty = unfold_in(env, ty, "sb", first_only=True)
    h2, ty, _ = simplify_hyp(env, h2, ty)
    ty = unfold_in(env, ty, "le'", first_only=True)
    h2, ty, _ = simplify_hyp(env, h2, ty)

    le_gg_x = _ap(_Gle, gg, xb)
    return _ap0(le_gg_x, _cf0(le_gg_x, _i_at(ib, _dd(ddx))), _at(q2, d), _at(h2, d))(d)


def build_lemma2(env: Environment) -> Term:
    omt = _ap(_G("ForallU0"), _arr1(_GU, _u0),
              _lam("i", _el1(_arr1(_GU, _u0)),
                   lambda i: _arr0(_ap(_Gind, i), _i_at(i, _GWF))))

    def body(x: Bld) -> Bld:
        return lambda d: _lemma2_body(env, x(d), d)

    return _la0(omt, _cf0(omt, _G("F")), "x", body)(0)


def _lemma2_body(env: Environment, x_t: Term, d: int) -> Term:
    xb = _at(x_t, d)
    ifam = _Ifam()

    ind_if = _ap(_Gind, ifam)
    have = _ap0(ind_if, _cf0(ind_if, _i_at(ifam, _GWF)),
                _apU0(_arr1(_GU, _u0), _famOmega(), xb, ifam), _G("lemma1"))(d)
    have_ty = _el0(_i_at(ifam, _GWF))(d)
    h_term, h_ty, _ = simplify_hyp(env, have, have_ty)

    ity = unfold_in(env, h_ty, "I", first_only=True)
    arg3, fam_f3 = _dest_fa0(_dest_el0(ity))
    u_h, fam_h = _dest_faU0(arg3)
    first_h, fam_b = _dest_fa0(fam_h.body)

    def inner_i(i: Bld) -> Bld:
        def inner_h0(h0: Bld) -> Bld:
            return lambda d2: _lemma2_body2(env, x_t, i(d2), d2)

        return _la0(_at(first_h, d + 1), _at(fam_b, d + 1), "h0", inner_h0)

    hole = _laU0(_at(u_h, d), _at(fam_h, d), "i", inner_i)(d)
    return _ap0(_at(arg3, d), _at(fam_f3, d), _at(h_term, d), _at(hole, d))(d)


def _lemma2_body2(env: Environment, x_t: Term, i_t: Term, d: int) -> Term:
    xb = _at(x_t, d - 2)
    ib = _at(i_t, d)  # i_t is materialized at this body's own depth
    gg = _gg(ib)
    ddwf = _dd(_GWF)

    have2 = _apU0(_arr1(_GU, _u0), _famOmega(), xb, gg)(d)
    have2_ty = _el0(_arr0(_ap(_Gind, gg), _i_at(gg, _GWF)))(d)
    q2, _, _ = simplify_hyp(env, have2, have2_ty)

    # h0 rewriting: El0 (le i WF) ~> El0 (induct (lam1 y, i.1 d(y)))
    h0 = Var(0)
    ty = _el0(_ap(_Gle, ib, _GWF))(d)
    ty = unfold_in(env, ty, "le")
    h0, ty, _ = simplify_hyp(env, h0, ty)
    ty = unfold_in(env, ty, "WF")
    h0, ty, _ = simplify_hyp(env, h0, ty)

    ind_gg = _ap(_Gind, gg)
    return _ap0(ind_gg, _cf0(ind_gg, _i_at(ib, ddwf)), _at(q2, d), _at(h0, d))(d)


def paradox_body() -> Term:
    omt = _ap(_G("ForallU0"), _arr1(_GU, _u0),
              _lam("i", _el1(_arr1(_GU, _u0)),
                   lambda i: _arr0(_ap(_Gind, i), _i_at(i, _GWF))))
    return _ap0(omt, _cf0(omt, _G("F")), _G("lemma2"), _G("Omega"))(0)


@dataclass(frozen=True)
class ParadoxBundle:
    defs: tuple[Definition, ...]     # V, U, sb, le, le', induct, WF, I
    lemmas: tuple[Definition, ...]   # Omega, lemma1, lemma2
    theorem: Definition              # paradox

    def items(self) -> tuple[Definition, ...]:
        return self.defs + self.lemmas + (self.theorem,)


def build_proofs(env: Environment) -> tuple[Environment, ParadoxBundle]:
    """Construct and check Omega, lemma1, lemma2, paradox over an environment
    holding the signature and the data definitions."""
    defs = tuple(Definition(n, t, b) for n, t, b in definition_items())
    omega = Definition("Omega", omega_type(), build_omega(env))
    env = extend(env, omega)
    lem1 = Definition("lemma1", lemma1_type(), build_lemma1(env))
    env = extend(env, lem1)
    lem2 = Definition("lemma2", lemma2_type(), build_lemma2(env))
    env = extend(env, lem2)
    par = Definition("paradox", paradox_type(), paradox_body())
    env = extend(env, par)
    return env, ParadoxBundle(defs, (omega, lem1, lem2), par)


_AXIOMATIC_CACHE: dict[str, tuple[Environment, SignatureContext, ParadoxBundle]] = {}


def axiomatic_environment() -> tuple[Environment, SignatureContext, ParadoxBundle]:
    """host3 + telescope + definitions + proofs, fully checked; cached."""
    if "x" not in _AXIOMATIC_CACHE:
        sig = build_signature_context()
        env = signature_env(sig)
        env = build_definitions(env)
        env, bundle = build_proofs(env)
        _AXIOMATIC_CACHE["x"] = (env, sig, bundle)
    return _AXIOMATIC_CACHE["x"]


# ---------------------------------------------------------------------------
# Fillers: instantiating the telescope in a host system
#
# Assignments are macro-style lambda chains over the host; occurrences of the
# signature globals are contracted on substitution.  Per-entry validation
# substitutes earlier assignments into the entry's declared type; the ambient
# `Type1` positions of the telescope mean "any well-formed type" there, and
# lambda values are checked by structural descent so that higher-order
# entries (whose standalone types need products the host may not have) are
# judged only by the real products their bodies build.


@dataclass
class Filler:
    host: Environment
    assignment: dict[str, Term]
    name: str = "filler"


class FillerError(TypeCheckError):
    def __init__(self, entry: str, cause: TypeCheckError):
        self.entry = entry
        self.cause = cause
        super().__init__(f"filler entry {entry}: {cause}")


def _mark_ambient(t: Term) -> Term:
    return _swap_sort(t, AMBIENT_SORT, _MARK)


def _lam_prefix(t: Term) -> int:
    n = 0
    while isinstance(t, Lam):
        n += 1
        t = t.body
    return n


def expand_macros(t: Term, assignment: dict[str, Term]) -> Term:
    """Substitute assignments for signature globals, contracting exactly the
    administrative prefix each macro consumes (assignments are closed)."""

    def go(t: Term) -> Term:
        cls = type(t)
        if cls is App:
            h, args = spine(t)
            args2 = [go(a) for a in args]
            if type(h) is Global and h.name in assignment:
                body = assignment[h.name]
                k = 0
                while k < len(args2) and isinstance(body, Lam):
                    body = subst(body.body, 0, args2[k])
                    k += 1
                return app(body, *args2[k:])
            return app(go(h), *args2)
        if cls is Global:
            return assignment.get(t.name, t)
        if cls is Var or cls is Sort:
            return t
        if cls is Pi:
            return Pi(t.hint, go(t.domain), go(t.codomain))
        if cls is Lam:
            return Lam(t.hint, go(t.domain), go(t.body))
        if cls is SigmaTy:
            return SigmaTy(t.hint, go(t.first), go(t.second))
        if cls is IdTy:
            return IdTy(go(t.ty), go(t.lhs), go(t.rhs))
        if cls is Refl:
            return Refl(go(t.ty), go(t.tm))
        if cls is JElim:
            return JElim(go(t.ty), go(t.base), t.hint_pt, t.hint_eq, go(t.motive),
                         go(t.case), go(t.other), go(t.proof))
        if cls is Pair:
            return Pair(go(t.annot), go(t.a), go(t.b))
        if cls is Fst:
            return Fst(go(t.pair))
        if cls is Snd:
            return Snd(go(t.pair))
        raise AssertionError(t)

    return go(t)


def _fits_type(env: Environment, got: Term, expected: Term, gctx: Context) -> None:
    """got (an inferred type) fits expected, where the ambient marker accepts
    any sort."""
    expected = beta_lite(expected)
    if isinstance(expected, Sort) and expected.name == _MARK:
        w = kernel._whnf_syn(env, got, Budget(kernel.CHECK_FUEL))
        if not isinstance(w, Sort):
            raise IllTypedAnnotation("expected a type (ambient position)")
        return
    if isinstance(expected, Pi):
        w = kernel._whnf_syn(env, got, Budget(kernel.CHECK_FUEL))
        if isinstance(w, Pi):
            if not convertible(env, w.domain, expected.domain):
                raise ConversionFailure(expected.domain, w.domain)
            _fits_type(env, w.codomain, expected.codomain,
                       gctx.push(expected.hint, expected.domain))
            return
    if not convertible(env, got, expected):
        raise ConversionFailure(expected, got)


def fit(env: Environment, gctx: Context, value: Term, expected: Term) -> None:
    """Check a macro assignment against an expanded entry type."""
    expected = beta_lite(expected)
    if isinstance(expected, Sort) and expected.name == _MARK:
        got = infer(env, gctx, value)
        w = kernel._whnf_syn(env, got, Budget(kernel.CHECK_FUEL))
        if not isinstance(w, Sort):
            raise IllTypedAnnotation("assignment must be a type (ambient position)")
        return
    if isinstance(expected, Pi) and isinstance(value, Lam):
        if not convertible(env, value.domain, expected.domain):
            raise ConversionFailure(expected.domain, value.domain)
        fit(env, gctx.push(value.hint, expected.domain), value.body, expected.codomain)
        return
    got = infer(env, gctx, value)
    _fits_type(env, got, expected, gctx)


def instantiate_environment(filler: Filler, f_body: Term | None = None) -> Environment:
    """Extend the host with F and the whole expanded bundle as checked
    definitions; raises on the first entry that does not check."""
    _, sig, bundle = axiomatic_environment()
    env = filler.host
    sigma = filler.assignment
    f_ty = beta_lite(expand_macros(App(Global("El1"), Global("u0")), sigma))
    if f_body is None:
        env = extend(env, Variable("F", f_ty))
    else:
        env = extend(env, Definition("F", f_ty, f_body))
    for item in bundle.items():
        env = extend(env, Definition(item.name,
                                     beta_lite(expand_macros(item.type, sigma)),
                                     beta_lite(expand_macros(item.body, sigma))))
    return env


def validate_filler(sig: SignatureContext, filler: Filler) -> InstanceReport:
    """Per-entry validation, then a full replay of the expanded bundle.

    Raises FillerError naming the first failing entry; this is the
    kernel-level meaning of "this host is not shaped like the two-universe
    signature"."""
    rep = InstanceReport(instance=filler.name, host=filler.host.spec.name)
    sigma = filler.assignment
    for name, ty in sig.entries:
        if name == "F":
            continue
        if name not in sigma:
            raise FillerError(name, UnknownGlobalShim(name))
        expected = beta_lite(expand_macros(_mark_ambient(ty), sigma))
        try:
            fit(filler.host, Context(), sigma[name], expected)
        except TypeCheckError as e:
            rep.add_entry(name, "type-error", detail=str(e))
            raise FillerError(name, e) from e
        rep.add_entry(name, "ok")
    try:
        instantiate_environment(filler)
    except TypeCheckError as e:
        rep.add_theorem("paradox", "El0 F", "type-error", str(e))
        raise FillerError("paradox", e) from e
    rep.add_theorem("paradox", "El0 F", "ok")
    return rep


class UnknownGlobalShim(TypeCheckError):
    def __init__(self, name: str):
        super().__init__(f"missing assignment for entry {name}")


def paradox_filler(spec: PtsSpec) -> Filler:
    """The sorts-style composed filler: the small universe is the system's
    first sort, the large universe is that sort's classifier, decoders are
    identities and all equality witnesses are refl."""
    s0 = spec.sorts[0]
    s1 = spec.axiom(s0)
    if s1 is None:
        raise kernel.SortHasNoAxiom(s0)
    small, large = _S(s0), _S(s1)

    def fam_to(domain: Bld, target: Bld) -> Bld:
        return _pi("x", domain, lambda _: target)

    a: dict[str, Term] = {}
    a["U1"] = large(0)
    a["El1"] = _lam("X", large, lambda X: X)(0)
    a["Forall1"] = _lam("u", large, lambda u: _lam(
        "B", fam_to(u, large), lambda B: _pi("x", u, lambda x: _ap(B, x))))(0)
    a["lam1"] = _lam("u", large, lambda u: _lam(
        "B", fam_to(u, large), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: f)))(0)
    a["app1"] = _lam("u", large, lambda u: _lam(
        "B", fam_to(u, large), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: _lam(
                "x", u, lambda x: _ap(f, x)))))(0)
    a["beta1"] = _lam("u", large, lambda u: _lam(
        "B", fam_to(u, large), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: _lam(
                "x", u, lambda x: _refl(_ap(B, x), _ap(f, x))))))(0)
    a["ForallU1"] = _lam("G", fam_to(large, large),
                         lambda G: _pi("A", large, lambda A: _ap(G, A)))(0)
    a["lamU1"] = _lam("G", fam_to(large, large), lambda G: _lam(
        "f", _pi("A", large, lambda A: _ap(G, A)), lambda f: f))(0)
    a["appU1"] = _lam("G", fam_to(large, large), lambda G: _lam(
        "f", _pi("A", large, lambda A: _ap(G, A)), lambda f: _lam(
            "A", large, lambda A: _ap(f, A))))(0)
    a["betaU1"] = _lam("G", fam_to(large, large), lambda G: _lam(
        "f", _pi("A", large, lambda A: _ap(G, A)), lambda f: _lam(
            "A", large, lambda A: _refl(_ap(G, A), _ap(f, A)))))(0)
    a["u0"] = small(0)
    a["El0"] = _lam("X", small, lambda X: X)(0)
    a["Forall0"] = _lam("u", small, lambda u: _lam(
        "B", fam_to(u, small), lambda B: _pi("x", u, lambda x: _ap(B, x))))(0)
    a["lam0"] = _lam("u", small, lambda u: _lam(
        "B", fam_to(u, small), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: f)))(0)
    a["app0"] = _lam("u", small, lambda u: _lam(
        "B", fam_to(u, small), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: _lam(
                "x", u, lambda x: _ap(f, x)))))(0)
    a["ForallU0"] = _lam("u", large, lambda u: _lam(
        "Fm", fam_to(u, small), lambda Fm: _pi("A", u, lambda A: _ap(Fm, A))))(0)
    a["lamU0"] = _lam("u", large, lambda u: _lam(
        "Fm", fam_to(u, small), lambda Fm: _lam(
            "f", _pi("A", u, lambda A: _ap(Fm, A)), lambda f: f)))(0)
    a["appU0"] = _lam("u", large, lambda u: _lam(
        "Fm", fam_to(u, small), lambda Fm: _lam(
            "f", _pi("A", u, lambda A: _ap(Fm, A)), lambda f: _lam(
                "A", u, lambda A: _ap(f, A)))))(0)
    return Filler(Environment(spec), a, name=f"sorts@{spec.name}")


def encoded_false(spec: PtsSpec) -> Term:
    """The impredicative empty type of the system's first sort."""
    s0 = spec.sorts[0]
    return Pi("p", Sort(s0), Var(0))


def divergence_probe(env: Environment, t: Term, fuel: int) -> DivergenceReport:
    tr = normalize(env, t, fuel)
    return DivergenceReport(env.spec.name, fuel, tr.steps, tr.exhausted, node_count(t))


def abstract_global(t: Term, name: str) -> Term:
    """Replace Global(name) by a variable bound just outside t."""

    def go(t: Term, depth: int) -> Term:
        match t:
            case Global(n):
                return Var(depth) if n == name else t
            case Var() | Sort():
                return t
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Pi(h, a, b):
                return Pi(h, go(a, depth), go(b, depth + 1))
            case Lam(h, a, b):
                return Lam(h, go(a, depth), go(b, depth + 1))
            case SigmaTy(h, a, b):
                return SigmaTy(h, go(a, depth), go(b, depth + 1))
            case IdTy(x, y, z):
                return IdTy(go(x, depth), go(y, depth), go(z, depth))
            case Refl(x, y):
                return Refl(go(x, depth), go(y, depth))
            case JElim(ty, a, hp, he, m, d, b, e):
                return JElim(go(ty, depth), go(a, depth), hp, he, go(m, depth + 2),
                             go(d, depth), go(b, depth), go(e, depth))
            case Pair(an, a, b):
                return Pair(go(an, depth), go(a, depth), go(b, depth))
            case Fst(p):
                return Fst(go(p, depth))
            case Snd(p):
                return Snd(go(p, depth))
        raise AssertionError(t)

    return go(t, 0)


def discharge(base_env: Environment, env: Environment, term: Term,
              ty: Term, inline: tuple[str, ...] = ()) -> tuple[Term, Term]:
    """Close `term : ty` (well-typed in env) over the declarations env adds on
    top of base_env: variables become lambda binders, definitions become
    beta-redex lets; unused tail declarations are dropped.  Let-bound
    definitions are opaque inside the body, so definitions the checking needs
    to unfold must be listed in `inline` (substituted instead).  References in
    the result type to discharged definitions are always inlined."""
    from .syntax import map_globals
    tail = env.decls[len(base_env.decls):]
    for d in reversed(tail):
        if isinstance(d, Variable):
            term = Lam(d.name, d.type, abstract_global(term, d.name))
            ty = Pi(d.name, d.type, abstract_global(ty, d.name))
        elif isinstance(d, Definition):
            if d.name in globals_in(ty):
                ty = map_globals(ty, lambda n: d.body if n == d.name else None)
            if d.name not in globals_in(term):
                continue
            if d.name in inline:
                term = map_globals(term, lambda n: d.body if n == d.name else None)
            else:
                term = App(Lam(d.name, d.type, abstract_global(term, d.name)), d.body)
    return term, ty


def inline_definitions(env: Environment, t: Term) -> Term:
    """Recursively replace definition globals by their (inlined) bodies."""
    cache: dict[str, Term | None] = {}

    def body_of(name: str):
        if name in cache:
            return cache[name]
        d = env.lookup(name)
        r = go(d.body) if isinstance(d, Definition) else None
        cache[name] = r
        return r

    from .syntax import map_globals

    def go(t: Term) -> Term:
        return map_globals(t, body_of)

    return go(t)


def count_transports(t: Term) -> int:
    """Transports along the two equality axioms in a term (one per J node)."""
    n = 0

    def go(t: Term) -> None:
        nonlocal n
        match t:
            case Global(name):
                if name in ("beta1", "betaU1"):
                    n += 1
            case Var() | Sort():
                pass
            case Pi(_, a, b) | Lam(_, a, b) | SigmaTy(_, a, b) | App(a, b):
                go(a); go(b)
            case IdTy(x, y, z) | Pair(x, y, z):
                go(x); go(y); go(z)
            case Refl(x, y):
                go(x); go(y)
            case JElim(ty, a, _, _, m, d, b, e):
                for s in (ty, a, m, d, b, e):
                    go(s)
            case Fst(p) | Snd(p):
                go(p)

    go(t)
    return n
