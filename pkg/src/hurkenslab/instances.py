"""Applications of the two-universe construction: sort instances, the
projection characterisation of impredicativity, retracts, excluded middle,
modalities, and weak excluded middle.

Everything runs over host3.  Connectives are impredicative Church encodings
in Prop; pairs use the built-in strong Sigma.  Case splits on a Church
disjunction cannot refine the scrutinee, so where the scripted development
destructs `em A` under an equality goal we instead eliminate into a
Sigma-packaged window `Sig (x:U0), (A -> t=x) /\\ ((t=x) -> A)` and project.
"""

from __future__ import annotations

from typing import Callable

from .hurkens import (
    Bld, Filler, _G, _S, _ap, _arrow, _at, _idty, _k, _lam, _pi, _refl,
    abstract_global, beta_lite, build_signature_context, discharge,
    encoded_false, expand_macros, instantiate_environment, validate_filler,
)
from .kernel import (
    NoProductRule, SortHasNoAxiom, TypeCheckError, check, extend, infer,
    normalize, sort_of_product,
)
from .report import InstanceReport
from .syntax import (
    App, Context, Definition, Environment, Fst, Global, IdTy, Lam, Pair, Pi,
    PtsSpec, Refl, SigmaTy, Snd, Sort, Term, Var, Variable, builtin_spec,
    lift,
)

PROP = _S("Prop")
TYPE1 = _S("Type1")


def _gl(name: str) -> Bld:
    return _G(name)


def _neg(a: Bld) -> Bld:
    return _ap(_G("neg"), a)


def _nn(a: Bld) -> Bld:
    return _neg(_neg(a))


def _or(a: Bld, b: Bld) -> Bld:
    return _ap(_G("or"), a, b)


# ---------------------------------------------------------------------------
# Prelude


def prelude_items() -> list[tuple[str, Bld, Bld]]:
    items: list[tuple[str, Bld, Bld]] = []
    items.append(("False", PROP, _pi("P", PROP, lambda P: P)))
    items.append(("neg", _arrow(PROP, PROP),
                  _lam("A", PROP, lambda A: _arrow(A, _G("False")))))
    items.append(("True", PROP, _pi("P", PROP, lambda P: _arrow(P, P))))
    items.append(("truth", _G("True"),
                  _lam("P", PROP, lambda P: _lam("p", P, lambda p: p))))
    items.append(("or", _arrow(PROP, _arrow(PROP, PROP)),
                  _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _pi(
                      "P", PROP, lambda P: _arrow(_arrow(A, P),
                                                  _arrow(_arrow(B, P), P)))))))
    items.append(("inl", _pi("A", PROP, lambda A: _pi("B", PROP, lambda B: _arrow(
        A, _or(A, B)))),
        _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _lam(
            "a", A, lambda a: _lam("P", PROP, lambda P: _lam(
                "f", _arrow(A, P), lambda f: _lam(
                    "g", _arrow(B, P), lambda g: _ap(f, a)))))))))
    items.append(("inr", _pi("A", PROP, lambda A: _pi("B", PROP, lambda B: _arrow(
        B, _or(A, B)))),
        _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _lam(
            "b", B, lambda b: _lam("P", PROP, lambda P: _lam(
                "f", _arrow(A, P), lambda f: _lam(
                    "g", _arrow(B, P), lambda g: _ap(g, b)))))))))
    items.append(("or_ind", _pi("A", PROP, lambda A: _pi("B", PROP, lambda B: _pi(
        "P", PROP, lambda P: _arrow(_arrow(A, P), _arrow(
            _arrow(B, P), _arrow(_or(A, B), P)))))),
        _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _lam(
            "P", PROP, lambda P: _lam("f", _arrow(A, P), lambda f: _lam(
                "g", _arrow(B, P), lambda g: _lam(
                    "o", _or(A, B), lambda o: _ap(o, P, f, g)))))))))
    return items


def prelude(base: Environment | None = None) -> Environment:
    """host3 plus the impredicative connectives, each checked."""
    env = base if base is not None else Environment(builtin_spec("host3"))
    for name, ty, body in prelude_items():
        env = extend(env, Definition(name, ty(0), body(0)))
    return env


# ---------------------------------------------------------------------------
# Section "Sorts": a universe carried by a sort, El the identity


def sorts_instance(spec: PtsSpec, s: str) -> dict[str, Term]:
    """The level-1 universe core with carrier sort `s` (El is the identity,
    the equality witness is refl).  Requires the sort to be classified and
    self-producted; the error is the verdict for hosts that refuse."""
    ax = spec.axiom(s)
    if ax is None:
        raise SortHasNoAxiom(s)
    sort_of_product(spec, s, s)
    S = _S(s)

    def fam(dom: Bld) -> Bld:
        return _pi("x", dom, lambda _: S)

    frag: dict[str, Term] = {}
    frag["U1"] = S(0)
    frag["El1"] = _lam("X", S, lambda X: X)(0)
    frag["Forall1"] = _lam("u", S, lambda u: _lam(
        "B", fam(u), lambda B: _pi("x", u, lambda x: _ap(B, x))))(0)
    frag["lam1"] = _lam("u", S, lambda u: _lam(
        "B", fam(u), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: f)))(0)
    frag["app1"] = _lam("u", S, lambda u: _lam(
        "B", fam(u), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: _lam(
                "x", u, lambda x: _ap(f, x)))))(0)
    frag["beta1"] = _lam("u", S, lambda u: _lam(
        "B", fam(u), lambda B: _lam(
            "f", _pi("x", u, lambda x: _ap(B, x)), lambda f: _lam(
                "x", u, lambda x: _refl(_ap(B, x), _ap(f, x))))))(0)
    return frag


# ---------------------------------------------------------------------------
# Section "Impredicative sort": projection from a bigger layer


def bracket_instance(env: Environment | None = None) -> tuple[Environment, dict[str, Term]]:
    """The bracketing projection for Prop.

    `bracket_proj_displayed` is the displayed form on Type1; the law-carrying
    quadruple is its Prop-level restriction (host3 has no cumulativity, so
    the counit of the Type1 form is not even stateable -- see the docs)."""
    env = env if env is not None else prelude()
    items: list[tuple[str, Bld, Bld]] = []
    items.append(("bracket_proj_displayed", _arrow(TYPE1, PROP),
                  _lam("X", TYPE1, lambda X: _pi(
                      "P", PROP, lambda P: _arrow(_arrow(X, P), P)))))
    items.append(("bracket_proj", _arrow(PROP, PROP),
                  _lam("X", PROP, lambda X: _pi(
                      "P", PROP, lambda P: _arrow(_arrow(X, P), P)))))
    items.append(("bracket_unit",
                  _pi("A", PROP, lambda A: _arrow(A, _ap(_G("bracket_proj"), A))),
                  _lam("A", PROP, lambda A: _lam("a", A, lambda a: _lam(
                      "P", PROP, lambda P: _lam(
                          "k", _arrow(A, P), lambda k: _ap(k, a)))))))
    items.append(("bracket_counit",
                  _pi("F", _arrow(PROP, PROP), lambda F: _arrow(
                      _ap(_G("bracket_proj"), _pi("A", PROP, lambda A: _ap(F, A))),
                      _pi("A", PROP, lambda A: _ap(F, A)))),
                  _lam("F", _arrow(PROP, PROP), lambda F: _lam(
                      "h", _ap(_G("bracket_proj"), _pi("A", PROP, lambda A: _ap(F, A))),
                      lambda h: _lam("A", PROP, lambda A: _ap(
                          h, _ap(F, A),
                          _lam("g", _pi("A2", PROP, lambda A2: _ap(F, A2)),
                               lambda g: _ap(g, A))))))))
    items.append(("bracket_coherent",
                  _pi("F", _arrow(PROP, PROP), lambda F: _pi(
                      "f", _pi("x", PROP, lambda x: _ap(F, x)), lambda f: _pi(
                          "x", PROP, lambda x: _idty(
                              _ap(F, x),
                              _ap(_G("bracket_counit"), F,
                                  _ap(_G("bracket_unit"),
                                      _pi("A", PROP, lambda A: _ap(F, A)), f), x),
                              _ap(f, x))))),
                  _lam("F", _arrow(PROP, PROP), lambda F: _lam(
                      "f", _pi("x", PROP, lambda x: _ap(F, x)), lambda f: _lam(
                          "x", PROP, lambda x: _refl(_ap(F, x), _ap(f, x)))))))
    for name, ty, body in items:
        env = extend(env, Definition(name, ty(0), body(0)))
    quad = {k: Global(n) for k, n in (("proj", "bracket_proj"),
                                      ("unit", "bracket_unit"),
                                      ("counit", "bracket_counit"),
                                      ("coherent", "bracket_coherent"))}
    return env, quad


def impredicative_sort_instance(proj: Term, unit: Term, counit: Term,
                                coherent: Term) -> dict[str, Term]:
    """Large products for the Prop universe from a projection: the product is
    formed one layer up and projected back; the equality witness is derived
    from the coherence law (at the eta-expanded function, as the signature
    states its beta axioms)."""
    pr, un, co, ch = map(_k, (proj, unit, counit, coherent))

    def big(G: Bld) -> Bld:
        return _pi("A", PROP, lambda A: _ap(G, A))

    fam = _pi("A2", PROP, lambda _: PROP)
    frag: dict[str, Term] = {}
    frag["ForallU1"] = _lam("G", fam, lambda G: _ap(pr, big(G)))(0)
    frag["lamU1"] = _lam("G", fam, lambda G: _lam(
        "f", big(G), lambda f: _ap(un, big(G), f)))(0)
    frag["appU1"] = _lam("G", fam, lambda G: _lam(
        "f", _ap(pr, big(G)), lambda f: _lam(
            "A", PROP, lambda A: _ap(co, G, f, A))))(0)
    frag["betaU1"] = _lam("G", fam, lambda G: _lam(
        "f", big(G), lambda f: _lam(
            "A", PROP, lambda A: _ap(
                ch, G, _lam("B", PROP, lambda B: _ap(f, B)), A))))(0)
    return frag


# ---------------------------------------------------------------------------
# Section "Generalising": a weak retract of Prop into a proposition


def retract_instance(u0: Term, proj0: Term, inj0: Term, unit: Term,
                     counit: Term) -> dict[str, Term]:
    """Small-universe fragment over a weak retraction of Prop into u0."""
    u0b, p0, i0, un, co = map(_k, (u0, proj0, inj0, unit, counit))

    def small_pi(u: Bld) -> Callable[[Bld], Bld]:
        # forall (x:proj0 u), proj0 (B x)  -- the carrier of Forall0 u B
        def mk(B: Bld) -> Bld:
            return _pi("x", _ap(p0, u), lambda x: _ap(p0, _ap(B, x)))
        return mk

    def large_pi(u: Bld, Fm: Bld) -> Bld:
        return _pi("x", u, lambda x: _ap(p0, _ap(Fm, x)))

    frag: dict[str, Term] = {}
    frag["u0"] = u0
    frag["El0"] = proj0
    frag["Forall0"] = _lam("u", u0b, lambda u: _lam(
        "B", _pi("x", _ap(p0, u), lambda _: u0b), lambda B: _ap(
            i0, small_pi(u)(B))))(0)
    frag["lam0"] = _lam("u", u0b, lambda u: _lam(
        "B", _pi("x", _ap(p0, u), lambda _: u0b), lambda B: _lam(
            "f", small_pi(u)(B), lambda f: _ap(un, small_pi(u)(B), f))))(0)
    frag["app0"] = _lam("u", u0b, lambda u: _lam(
        "B", _pi("x", _ap(p0, u), lambda _: u0b), lambda B: _lam(
            "f", _ap(p0, _ap(i0, small_pi(u)(B))), lambda f: _lam(
                "x", _ap(p0, u), lambda x: _ap(
                    _ap(co, small_pi(u)(B), f), x)))))(0)
    frag["ForallU0"] = _lam("u", PROP, lambda u: _lam(
        "Fm", _pi("x", u, lambda _: u0b), lambda Fm: _ap(
            i0, large_pi(u, Fm))))(0)
    frag["lamU0"] = _lam("u", PROP, lambda u: _lam(
        "Fm", _pi("x", u, lambda _: u0b), lambda Fm: _lam(
            "f", large_pi(u, Fm), lambda f: _ap(un, large_pi(u, Fm), f))))(0)
    frag["appU0"] = _lam("u", PROP, lambda u: _lam(
        "Fm", _pi("x", u, lambda _: u0b), lambda Fm: _lam(
            "f", _ap(p0, _ap(i0, large_pi(u, Fm))), lambda f: _lam(
                "A", u, lambda A: _ap(_ap(co, large_pi(u, Fm), f), A)))))(0)
    return frag


_RETRACT_VARS: tuple[tuple[str, Callable[[], Bld]], ...] = (
    ("U0", lambda: PROP),
    ("proj0", lambda: _arrow(_G("U0"), PROP)),
    ("inj0", lambda: _arrow(PROP, _G("U0"))),
    ("inj0_unit", lambda: _pi("b", PROP, lambda b: _arrow(
        b, _ap(_G("proj0"), _ap(_G("inj0"), b))))),
    ("inj0_counit", lambda: _pi("b", PROP, lambda b: _arrow(
        _ap(_G("proj0"), _ap(_G("inj0"), b)), b))),
)


def retract_hypotheses(env: Environment) -> Environment:
    for name, ty in _RETRACT_VARS:
        env = extend(env, Variable(name, ty()(0)))
    return env


def prop_retract_filler(env: Environment, u0: Term, proj0: Term, inj0: Term,
                        unit: Term, counit: Term, name: str) -> Filler:
    """Compose the Prop sort core, the bracket large products, and a small
    universe given by a weak retraction into u0."""
    assignment = dict(sorts_instance(env.spec, "Prop"))
    _, quad = _bracket_terms()
    assignment.update(impredicative_sort_instance(
        quad["proj"], quad["unit"], quad["counit"], quad["coherent"]))
    assignment.update(retract_instance(u0, proj0, inj0, unit, counit))
    return Filler(env, assignment, name=name)


_BRACKET_CACHE: dict[str, tuple[Environment, dict[str, Term]]] = {}


def _bracket_terms() -> tuple[Environment, dict[str, Term]]:
    if "x" not in _BRACKET_CACHE:
        _BRACKET_CACHE["x"] = bracket_instance()
    return _BRACKET_CACHE["x"]


def bracket_base() -> Environment:
    """prelude + the bracket definitions (the base for retract instances)."""
    return _bracket_terms()[0]


def no_retract_theorem() -> tuple[Environment, InstanceReport]:
    """Under a weak retraction of Prop into a proposition U0, False checks:
    instantiate the paradox at F := inj0 False and apply the counit."""
    rep = InstanceReport(instance="no-retract", host="host3")
    env = retract_hypotheses(bracket_base())
    filler = prop_retract_filler(
        env, Global("U0"), Global("proj0"), Global("inj0"),
        Global("inj0_unit"), Global("inj0_counit"), "no-retract")
    inner = validate_filler(build_signature_context(), filler)
    rep.entries_validated = inner.entries_validated
    env2 = instantiate_environment(filler, f_body=App(Global("inj0"), Global("False")))
    false_term = _ap(_G("inj0_counit"), _G("False"), _G("paradox"))(0)
    env2 = extend(env2, Definition("no_retract_false", Global("False"), false_term))
    rep.add_theorem("no_retract_false", "False")
    return env2, rep


# ---------------------------------------------------------------------------
# The transport-free contradiction.
#
# In a concrete instance every product-pair has real introduction and
# elimination, so conversion discharges all the equality steps and the proof
# is the plain self-application argument.  The construction is parameterised
# by the universe shape: codes for the large level, a decoding into types,
# and a retraction-mediated small level.  Building it as one closed term
# keeps it usable under binders (definitions cannot be let-bound
# transparently).


class UniverseShape:
    """Hooks describing a concrete universe pair.

    Large level: `code1 = el1(c)` decodes a code to a type; `arr1`, `faU1`
    build codes.  Small level: elements of `el1(u0c)` are small codes;
    `small_pi(dom_ty, hint, fam)` forms the carrier object whose decoding is
    the dependent product, `code0` injects it as a small code, `el0` decodes
    small codes, and `intro0`/`elim0` mediate through the retraction.
    """

    def el1(self, c: Bld) -> Bld:
        raise NotImplementedError

    def arr1(self, a: Bld, b: Bld) -> Bld:
        raise NotImplementedError

    def faU1(self, hint: str, fam) -> Bld:
        raise NotImplementedError

    def u0c(self) -> Bld:
        raise NotImplementedError

    def small_pi(self, dom_ty: Bld, hint: str, fam) -> Bld:
        raise NotImplementedError

    def sel(self, x: Bld) -> Bld:
        """The decoded type of a small_pi object."""
        raise NotImplementedError

    def code0(self, x: Bld) -> Bld:
        raise NotImplementedError

    def el0(self, c: Bld) -> Bld:
        raise NotImplementedError

    def intro0(self, x: Bld, f: Bld) -> Bld:
        raise NotImplementedError

    def elim0(self, x: Bld, p: Bld) -> Bld:
        raise NotImplementedError


class PropRetractShape(UniverseShape):
    """Level 1 is Prop itself; level 0 a proposition u0 with a weak
    retraction (proj0, inj0, unit, counit)."""

    def __init__(self, u0: Term, proj0: Term, inj0: Term, unit: Term, counit: Term):
        self.u0, self.p0, self.i0 = map(_k, (u0, proj0, inj0))
        self.un, self.co = map(_k, (unit, counit))

    def el1(self, c):
        return c

    def arr1(self, a, b):
        return _arrow(a, b)

    def faU1(self, hint, fam):
        return _pi(hint, PROP, fam)

    def u0c(self):
        return self.u0

    def small_pi(self, dom_ty, hint, fam):
        return _pi(hint, dom_ty, lambda x: self.el0(fam(x)))

    def sel(self, x):
        return x

    def code0(self, x):
        return _ap(self.i0, x)

    def el0(self, c):
        return _ap(self.p0, c)

    def intro0(self, x, f):
        return _ap(self.un, x, f)

    def elim0(self, x, p):
        return _ap(self.co, x, p)


class ModalShape(UniverseShape):
    """Level 1 is MProp (El-decoded); level 0 a modal proposition u0m with an
    El-mediated retraction."""

    def __init__(self, u0m: Term, proj0: Term, inj0: Term, unit: Term, counit: Term):
        self.u0m, self.p0, self.i0 = map(_k, (u0m, proj0, inj0))
        self.un, self.co = map(_k, (unit, counit))

    def el1(self, c):
        return _ap(_G("El"), c)

    def arr1(self, a, b):
        return _ap(_G("MForall_p"), self.el1(a),
                   _lam("_", self.el1(a), lambda _: b))

    def faU1(self, hint, fam):
        return _ap(_G("MForall_p"), _G("MProp"), _lam(hint, _G("MProp"), fam))

    def u0c(self):
        return self.u0m

    def small_pi(self, dom_ty, hint, fam):
        return _ap(_G("MForall_p"), dom_ty,
                   _lam(hint, dom_ty, lambda x: _ap(self.p0, fam(x))))

    def sel(self, x):
        return _ap(_G("El"), x)

    def code0(self, x):
        return _ap(self.i0, x)

    def el0(self, c):
        return _ap(_G("El"), _ap(self.p0, c))

    def intro0(self, x, f):
        return _ap(self.un, x, f)

    def elim0(self, x, p):
        return _ap(self.co, x, p)


def direct_paradox(sh: UniverseShape, fc: Term) -> Term:
    """A closed inhabitant of el0(fc): the self-application argument, with all
    equality reasoning discharged by conversion.  `fc` is a small code."""
    fcb = _k(fc)
    u0 = sh.u0c()
    carrier = _G("MProp") if isinstance(sh, ModalShape) else PROP
    TV_code = sh.faU1("A", lambda A: sh.arr1(
        sh.arr1(sh.arr1(A, u0), sh.arr1(A, u0)), sh.arr1(A, u0)))
    TV = sh.el1(TV_code)
    TU_code = sh.arr1(TV_code, u0)
    TU = sh.el1(TU_code)
    TUF = sh.el1(sh.arr1(TU_code, u0))

    def sb(z: Bld) -> Bld:
        return _lam("A2", carrier, lambda A: _lam(
            "r", sh.el1(sh.arr1(sh.arr1(A, u0), sh.arr1(A, u0))), lambda r: _lam(
                "a", sh.el1(A), lambda a: _ap(r, _ap(z, A, r), a))))

    def le_pt(i: Bld) -> Bld:
        return _lam("A2", carrier, lambda A: _lam(
            "r", sh.el1(sh.arr1(sh.arr1(A, u0), sh.arr1(A, u0))), lambda r: _lam(
                "a", sh.el1(A), lambda a: _ap(
                    i, _lam("v", TV, lambda v: _ap(sb(v), A, r, a))))))

    def le(i: Bld, x: Bld) -> Bld:
        return _ap(x, le_pt(i))

    le_fn = _lam("i2", TUF, lambda i: _lam("x2", TU, lambda x: le(i, x)))

    def dd(x: Bld) -> Bld:
        return _lam("v", TV, lambda v: _ap(sb(v), TU_code, le_fn, x))

    def gg(i: Bld) -> Bld:
        return _lam("y", TU, lambda y: _ap(i, dd(y)))

    def arr0_obj(a_el: Bld, b_code: Bld) -> Bld:
        return sh.small_pi(a_el, "h", lambda _: b_code)

    def induct_obj(i: Bld) -> Bld:
        return sh.small_pi(TU, "x", lambda x: sh.code0(
            arr0_obj(sh.el0(le(i, x)), _ap(i, x))))

    def induct_code(i: Bld) -> Bld:
        return sh.code0(induct_obj(i))

    WF = _lam("z", TV, lambda z: induct_code(_ap(z, TU_code, le_fn)))

    def inner_obj(x: Bld) -> Bld:
        return sh.small_pi(TUF, "i", lambda i: sh.code0(
            arr0_obj(sh.el0(le(i, x)), _ap(i, dd(x)))))

    def i_code(x: Bld) -> Bld:
        return sh.code0(sh.small_pi(
            sh.el0(sh.code0(inner_obj(x))), "q", lambda _: fcb))

    i_fn = _lam("u", TU, lambda u: i_code(u))

    omega_obj = sh.small_pi(TUF, "i", lambda i: sh.code0(
        arr0_obj(sh.el0(induct_code(i)), _ap(i, WF))))

    # Omega : el0 (forall01 i, induct i ->0 i WF)
    def omega_pr(i: Bld, y: Bld) -> Bld:
        # le i WF converts to induct (gg i)
        ggi = gg(i)

        def pr_inner(x: Bld, h0: Bld) -> Bld:
            dec = sh.elim0(arr0_obj(sh.el0(le(i, dd(x))), _ap(i, dd(x))),
                           _ap(sh.elim0(induct_obj(i), y), dd(x)))
            return _ap(dec, h0)

        return sh.intro0(induct_obj(ggi), _lam("x", TU, lambda x: sh.intro0(
            arr0_obj(sh.el0(le(ggi, x)), _ap(ggi, x)),
            _lam("h0", sh.el0(le(ggi, x)), lambda h0: pr_inner(x, h0)))))

    def omega_body(i: Bld, y: Bld) -> Bld:
        dec = sh.elim0(arr0_obj(sh.el0(le(i, WF)), _ap(i, WF)),
                       _ap(sh.elim0(induct_obj(i), y), WF))
        return _ap(dec, omega_pr(i, y))

    omega = sh.intro0(omega_obj, _lam("i", TUF, lambda i: sh.intro0(
        arr0_obj(sh.el0(induct_code(i)), _ap(i, WF)),
        _lam("y", sh.el0(induct_code(i)), lambda y: omega_body(i, y)))))

    # lemma1 : el0 (induct (lam1 u, I u))
    def l1_body3(x: Bld, q: Bld, i: Bld, h2: Bld) -> Bld:
        ggi = gg(i)
        dec = sh.elim0(arr0_obj(sh.el0(le(ggi, x)), _ap(ggi, dd(x))),
                       _ap(sh.elim0(inner_obj(x), q), ggi))
        return _ap(dec, h2)

    def l1_body2(x: Bld, p: Bld, q: Bld) -> Bld:
        dec = sh.elim0(arr0_obj(sh.el0(le(i_fn, x)), _ap(i_fn, dd(x))),
                       _ap(sh.elim0(inner_obj(x), q), i_fn))
        h = _ap(dec, p)
        hole = sh.intro0(inner_obj(dd(x)), _lam("i", TUF, lambda i: sh.intro0(
            arr0_obj(sh.el0(le(i, dd(x))), _ap(i, dd(dd(x)))),
            _lam("h2", sh.el0(le(i, dd(x))), lambda h2: l1_body3(x, q, i, h2)))))
        dec_h = sh.elim0(sh.small_pi(sh.el0(sh.code0(inner_obj(dd(x)))), "q",
                                     lambda _: fcb), h)
        return _ap(dec_h, hole)

    lemma1 = sh.intro0(induct_obj(i_fn), _lam("x", TU, lambda x: sh.intro0(
        arr0_obj(sh.el0(le(i_fn, x)), _ap(i_fn, x)),
        _lam("p", sh.el0(le(i_fn, x)), lambda p: sh.intro0(
            sh.small_pi(sh.el0(sh.code0(inner_obj(x))), "q", lambda _: fcb),
            _lam("q", sh.el0(sh.code0(inner_obj(x))),
                 lambda q: l1_body2(x, p, q)))))))

    # lemma2 : el0 ((forall01 i, induct i ->0 i WF) ->0 F)
    def l2_body2(x: Bld, i: Bld, h0: Bld) -> Bld:
        ggi = gg(i)
        dec = sh.elim0(arr0_obj(sh.el0(induct_code(ggi)), _ap(ggi, WF)),
                       _ap(sh.elim0(omega_obj, x), ggi))
        return _ap(dec, h0)

    def l2_body(x: Bld) -> Bld:
        dec = sh.elim0(arr0_obj(sh.el0(induct_code(i_fn)), _ap(i_fn, WF)),
                       _ap(sh.elim0(omega_obj, x), i_fn))
        h = _ap(dec, _k(lemma1(0)))
        hole = sh.intro0(inner_obj(WF), _lam("i", TUF, lambda i: sh.intro0(
            arr0_obj(sh.el0(le(i, WF)), _ap(i, dd(WF))),
            _lam("h0", sh.el0(le(i, WF)), lambda h0: l2_body2(x, i, h0)))))
        dec_h = sh.elim0(sh.small_pi(sh.el0(sh.code0(inner_obj(WF))), "q",
                                     lambda _: fcb), h)
        return _ap(dec_h, hole)

    lemma2 = sh.intro0(
        arr0_obj(sh.el0(sh.code0(omega_obj)), fcb),
        _lam("x", sh.el0(sh.code0(omega_obj)), lambda x: l2_body(x)))

    dec_final = sh.elim0(arr0_obj(sh.el0(sh.code0(omega_obj)), fcb), lemma2)
    return _ap(dec_final, omega)(0)


# ---------------------------------------------------------------------------
# Section "Excluded middle": Prop becomes a two-element universe


def em_base() -> Environment:
    env = bracket_base()
    return extend(env, Variable(
        "em", _pi("A", PROP, lambda A: _or(A, _neg(A)))(0)))


def em_retraction(env: Environment) -> Environment:
    """Under em and a proposition U0 with two points t /= f, reflect Prop into
    U0: inj0 cases on em via a Sigma window, proj0 x is `t = x`."""
    u0, t, f = _G("U0"), _G("t"), _G("f")

    def eq_t(x: Bld) -> Bld:
        return _idty(u0, t, x)

    def window(A: Bld) -> Bld:
        # Sig (x:U0), (A -> t=x) /\ ((t=x) -> A)
        return lambda d: SigmaTy(
            "x", u0(d),
            SigmaTy("u", _arrow(_at(lift(A(d), 1), d + 1), eq_t(_at(Var(0), d + 1)))(d + 1),
                    _arrow(eq_t(_at(Var(1), d + 2)), _at(lift(A(d), 2), d + 2))(d + 2)))

    def inner_sig(A: Bld, x: Bld) -> Bld:
        return lambda d: SigmaTy(
            "u", _arrow(A, eq_t(x))(d),
            _arrow(eq_t(_at(lift(x(d), 1), d + 1)), _at(lift(A(d), 1), d + 1))(d + 1))

    wty = _lam("A", PROP, lambda A: window(A))

    branch1 = _lam("A", PROP, lambda A: _lam("a", A, lambda a: lambda d: Pair(
        window(A)(d), t(d),
        Pair(inner_sig(A, t)(d),
             _lam("a2", A, lambda a2: _refl(u0, t))(d),
             _lam("e", eq_t(t), lambda e: a)(d)))))

    branch2 = _lam("A", PROP, lambda A: _lam("h", _neg(A), lambda h: lambda d: Pair(
        window(A)(d), f(d),
        Pair(inner_sig(A, f)(d),
             _lam("a2", A, lambda a2: _ap(h, a2, eq_t(f)))(d),
             _lam("e", eq_t(f), lambda e: _ap(_G("not_eq_t_f"), e, A))(d)))))

    items: list[tuple[str, Bld, Bld]] = []
    items.append(("em_window",
                  _pi("A", PROP, lambda A: window(A)),
                  _lam("A", PROP, lambda A: _ap(
                      _G("or_ind"), A, _neg(A), window(A),
                      _ap(branch1, A), _ap(branch2, A), _ap(_G("em"), A)))))
    items.append(("inj0", _arrow(PROP, u0),
                  _lam("A", PROP, lambda A: lambda d: Fst(_ap(_G("em_window"), A)(d)))))
    items.append(("proj0", _arrow(u0, PROP),
                  _lam("x", u0, lambda x: eq_t(x))))
    items.append(("inj0_unit",
                  _pi("A", PROP, lambda A: _arrow(
                      A, _ap(_G("proj0"), _ap(_G("inj0"), A)))),
                  _lam("A", PROP, lambda A: _lam("a", A, lambda a: lambda d: App(
                      Fst(Snd(_ap(_G("em_window"), A)(d))), a(d))))))
    items.append(("inj0_counit",
                  _pi("A", PROP, lambda A: _arrow(
                      _ap(_G("proj0"), _ap(_G("inj0"), A)), A)),
                  _lam("A", PROP, lambda A: _lam(
                      "e", _ap(_G("proj0"), _ap(_G("inj0"), A)),
                      lambda e: lambda d: App(Snd(Snd(_ap(_G("em_window"), A)(d))), e(d))))))
    for name, ty, body in items:
        env = extend(env, Definition(name, ty(0), body(0)))
    return env


def _two_point_vars(env: Environment) -> Environment:
    env = extend(env, Variable("U0", Sort("Prop")))
    env = extend(env, Variable("t", Global("U0")))
    env = extend(env, Variable("f", Global("U0")))
    env = extend(env, Variable(
        "not_eq_t_f", _neg(_idty(_G("U0"), _G("t"), _G("f")))(0)))
    return env


def em_proof_irrelevance() -> tuple[Environment, InstanceReport]:
    """em makes Prop proof irrelevant: the paradox over the two-point
    reflection gives the double-negated equality, and one more case split on
    em removes the double negation."""
    rep = InstanceReport(instance="em-proof-irrelevance", host="host3")
    base = em_base()
    env = em_retraction(_two_point_vars(base))
    sh = PropRetractShape(Global("U0"), Global("proj0"), Global("inj0"),
                          Global("inj0_unit"), Global("inj0_counit"))
    fc = App(Global("inj0"), Global("False"))
    par = direct_paradox(sh, fc)
    false_term = _ap(_G("inj0_counit"), _G("False"), _k(par))(0)
    env = extend(env, Definition("em_false", Global("False"), false_term))
    rep.add_theorem("em_false", "False (under U0, t, f, t /= f)")

    nn_body, nn_ty = discharge(base, env, Global("em_false"), Global("False"),
                               inline=("proj0", "inj0"))
    env3 = extend(base, Definition("em_nn_raw", nn_ty, nn_body))
    nn_stmt = _pi("A", PROP, lambda A: _pi("x", A, lambda x: _pi(
        "y", A, lambda y: _nn(_idty(A, x, y)))))(0)
    nn_tm = _lam("A", PROP, lambda A: _lam("x", A, lambda x: _lam(
        "y", A, lambda y: _ap(_G("em_nn_raw"), A, x, y))))(0)
    env3 = extend(env3, Definition("em_nn", nn_stmt, nn_tm))
    rep.add_theorem("em_nn", "forall (A:Prop) (x y:A), neg (neg (Id A x y))")

    pir_stmt = _pi("A", PROP, lambda A: _pi("x", A, lambda x: _pi(
        "y", A, lambda y: _idty(A, x, y))))(0)
    pir_tm = _lam("A", PROP, lambda A: _lam("x", A, lambda x: _lam(
        "y", A, lambda y: _ap(
            _G("or_ind"), _idty(A, x, y), _neg(_idty(A, x, y)), _idty(A, x, y),
            _lam("e", _idty(A, x, y), lambda e: e),
            _lam("ne", _neg(_idty(A, x, y)),
                 lambda ne: _ap(_G("em_nn"), A, x, y, ne, _idty(A, x, y))),
            _ap(_G("em"), _idty(A, x, y))))))(0)
    env3 = extend(env3, Definition("proof_irrelevance", pir_stmt, pir_tm))
    rep.add_theorem("proof_irrelevance", "forall (A:Prop) (x y:A), Id A x y")
    return env3, rep


# ---------------------------------------------------------------------------
# Section "Variants of Prop": modalities and the MProp universe


def modality_items(m: Term, unit: Term, join: Term, incr: Term) -> list[tuple[str, Bld, Bld]]:
    """MProp and its products for a given modality (terms over the ambient
    environment).  Without cumulativity the closure under products needs one
    variant per domain sort (Type1 and Prop)."""
    M, un, jo, inc = map(_k, (m, unit, join, incr))

    def strength(sort: Bld):
        ty = _pi("A", sort, lambda A: _pi(
            "P", _pi("x2", A, lambda _: PROP), lambda P: _arrow(
                _ap(M, _pi("x", A, lambda x: _ap(P, x))),
                _pi("x", A, lambda x: _ap(M, _ap(P, x))))))
        body = _lam("A", sort, lambda A: _lam(
            "P", _pi("x2", A, lambda _: PROP), lambda P: _lam(
                "h", _ap(M, _pi("x", A, lambda x: _ap(P, x))), lambda h: _lam(
                    "x", A, lambda x: _ap(
                        inc, _pi("x3", A, lambda x3: _ap(P, x3)), _ap(P, x),
                        _lam("ff", _pi("x4", A, lambda x4: _ap(P, x4)),
                             lambda ff: _ap(ff, x)),
                        h)))))
        return ty, body

    sty, sbody = strength(TYPE1)
    spty, spbody = strength(PROP)

    def mprop() -> Bld:
        return lambda d: SigmaTy("P", Sort("Prop"),
                                 Pi("_", App(lift(m, d + 1), Var(0)), Var(1)))

    def forall_def(sort: Bld, strength_name: str):
        ty = _pi("A", sort, lambda A: _arrow(
            _pi("x", A, lambda _: _G("MProp")), _G("MProp")))
        body = _lam("A", sort, lambda A: _lam(
            "Fm", _pi("x", A, lambda _: _G("MProp")), lambda Fm: lambda d: Pair(
                Global("MProp"),
                _pi("x", A, lambda x: _ap(_G("El"), _ap(Fm, x)))(d),
                _lam("h", _ap(M, _pi("x", A, lambda x: _ap(_G("El"), _ap(Fm, x)))),
                     lambda h: _lam("x", A, lambda x: lambda d2: App(
                         Snd(_ap(Fm, x)(d2)),
                         _ap(_G(strength_name), A,
                             _lam("x5", A, lambda x5: _ap(_G("El"), _ap(Fm, x5))),
                             h, x)(d2))))(d))))
        return ty, body

    fty, fbody = forall_def(TYPE1, "mstrength")
    fpty, fpbody = forall_def(PROP, "mstrength_p")

    items: list[tuple[str, Bld, Bld]] = [
        ("mstrength", sty, sbody),
        ("mstrength_p", spty, spbody),
        ("MProp", PROP, mprop()),
        ("El", _arrow(_G("MProp"), PROP),
         _lam("P", _G("MProp"), lambda P: lambda d: Fst(P(d)))),
        ("MForall", fty, fbody),
        ("MForall_p", fpty, fpbody),
        ("MForall1",
         _pi("u", _G("MProp"), lambda u: _arrow(
             _pi("x", _ap(_G("El"), u), lambda _: _G("MProp")), _G("MProp"))),
         _lam("u", _G("MProp"), lambda u: _lam(
             "Fm", _pi("x", _ap(_G("El"), u), lambda _: _G("MProp")),
             lambda Fm: _ap(_G("MForall_p"), _ap(_G("El"), u), Fm)))),
        ("MForallU1",
         _arrow(_pi("x", _G("MProp"), lambda _: _G("MProp")), _G("MProp")),
         _lam("Fm", _pi("x", _G("MProp"), lambda _: _G("MProp")),
              lambda Fm: _ap(_G("MForall_p"), _G("MProp"), Fm))),
    ]
    return items


def modality_universe(env: Environment, m: Term, unit: Term, join: Term,
                      incr: Term) -> Environment:
    for name, ty, body in modality_items(m, unit, join, incr):
        env = extend(env, Definition(name, ty(0), body(0)))
    return env


def modal_filler(env: Environment, u0m: Term, proj0: Term, inj0: Term,
                 unit: Term, counit: Term, name: str) -> Filler:
    """A universe pair where neither carrier is a sort: level 1 is MProp,
    level 0 a modal proposition with an El-mediated retraction into it."""
    MP, El = _G("MProp"), lambda x: _ap(_G("El"), x)
    u0b, p0, i0, un, co = map(_k, (u0m, proj0, inj0, unit, counit))
    fam1 = lambda u: _pi("x", El(u), lambda _: MP)

    def fp_small(u: Bld, B: Bld) -> Bld:
        # MForall_p (El (proj0 u)) (fun x => proj0 (B x))
        return _ap(_G("MForall_p"), El(_ap(p0, u)),
                   _lam("x", El(_ap(p0, u)), lambda x: _ap(p0, _ap(B, x))))

    def fp_large(u: Bld, Fm: Bld) -> Bld:
        return _ap(_G("MForall_p"), El(u),
                   _lam("x", El(u), lambda x: _ap(p0, _ap(Fm, x))))

    a: dict[str, Term] = {}
    a["U1"] = MP(0)
    a["El1"] = Global("El")
    a["Forall1"] = _lam("u", MP, lambda u: _lam(
        "B", fam1(u), lambda B: _ap(_G("MForall_p"), El(u), B)))(0)
    a["lam1"] = _lam("u", MP, lambda u: _lam(
        "B", fam1(u), lambda B: _lam(
            "f", _pi("x", El(u), lambda x: El(_ap(B, x))), lambda f: f)))(0)
    a["app1"] = _lam("u", MP, lambda u: _lam(
        "B", fam1(u), lambda B: _lam(
            "f", _pi("x", El(u), lambda x: El(_ap(B, x))), lambda f: _lam(
                "x", El(u), lambda x: _ap(f, x)))))(0)
    a["beta1"] = _lam("u", MP, lambda u: _lam(
        "B", fam1(u), lambda B: _lam(
            "f", _pi("x", El(u), lambda x: El(_ap(B, x))), lambda f: _lam(
                "x", El(u), lambda x: _refl(El(_ap(B, x)), _ap(f, x))))))(0)
    famU = _pi("x", MP, lambda _: MP)
    a["ForallU1"] = _lam("G", famU, lambda G: _ap(_G("MForall_p"), MP, G))(0)
    a["lamU1"] = _lam("G", famU, lambda G: _lam(
        "f", _pi("A", MP, lambda A: El(_ap(G, A))), lambda f: f))(0)
    a["appU1"] = _lam("G", famU, lambda G: _lam(
        "f", _pi("A", MP, lambda A: El(_ap(G, A))), lambda f: _lam(
            "A", MP, lambda A: _ap(f, A))))(0)
    a["betaU1"] = _lam("G", famU, lambda G: _lam(
        "f", _pi("A", MP, lambda A: El(_ap(G, A))), lambda f: _lam(
            "A", MP, lambda A: _refl(El(_ap(G, A)), _ap(f, A)))))(0)
    a["u0"] = u0m
    a["El0"] = _lam("x", El(u0b), lambda x: El(_ap(p0, x)))(0)
    fam0 = lambda u: _pi("x", El(_ap(p0, u)), lambda _: El(u0b))
    a["Forall0"] = _lam("u", El(u0b), lambda u: _lam(
        "B", fam0(u), lambda B: _ap(i0, fp_small(u, B))))(0)
    a["lam0"] = _lam("u", El(u0b), lambda u: _lam(
        "B", fam0(u), lambda B: _lam(
            "f", El(fp_small(u, B)), lambda f: _ap(un, fp_small(u, B), f))))(0)
    a["app0"] = _lam("u", El(u0b), lambda u: _lam(
        "B", fam0(u), lambda B: _lam(
            "f", El(_ap(p0, _ap(i0, fp_small(u, B)))), lambda f: _lam(
                "x", El(_ap(p0, u)), lambda x: _ap(
                    _ap(co, fp_small(u, B), f), x)))))(0)
    famU0 = lambda u: _pi("x", El(u), lambda _: El(u0b))
    a["ForallU0"] = _lam("u", MP, lambda u: _lam(
        "Fm", famU0(u), lambda Fm: _ap(i0, fp_large(u, Fm))))(0)
    a["lamU0"] = _lam("u", MP, lambda u: _lam(
        "Fm", famU0(u), lambda Fm: _lam(
            "f", El(fp_large(u, Fm)), lambda f: _ap(un, fp_large(u, Fm), f))))(0)
    a["appU0"] = _lam("u", MP, lambda u: _lam(
        "Fm", famU0(u), lambda Fm: _lam(
            "f", El(_ap(p0, _ap(i0, fp_large(u, Fm)))), lambda f: _lam(
                "A", El(u), lambda A: _ap(_ap(co, fp_large(u, Fm), f), A)))))(0)
    return Filler(env, a, name=name)


_MODAL_VARS: tuple[tuple[str, Callable[[], Bld]], ...] = (
    ("U0m", lambda: _G("MProp")),
    ("proj0m", lambda: _arrow(_ap(_G("El"), _G("U0m")), _G("MProp"))),
    ("inj0m", lambda: _arrow(_G("MProp"), _ap(_G("El"), _G("U0m")))),
    ("inj0m_unit", lambda: _pi("A", _G("MProp"), lambda A: _arrow(
        _ap(_G("El"), A),
        _ap(_G("El"), _ap(_G("proj0m"), _ap(_G("inj0m"), A)))))),
    ("inj0m_counit", lambda: _pi("A", _G("MProp"), lambda A: _arrow(
        _ap(_G("El"), _ap(_G("proj0m"), _ap(_G("inj0m"), A))),
        _ap(_G("El"), A)))),
)


def modal_paradox(env: Environment, u0m: Term, proj0: Term, inj0: Term,
                  unit: Term, counit: Term, name: str = "modal") -> tuple[Environment, InstanceReport]:
    """Every modal proposition is inhabited under a retraction of MProp into a
    modal proposition (not necessarily a contradiction)."""
    rep = InstanceReport(instance=name, host="host3")
    filler = modal_filler(env, u0m, proj0, inj0, unit, counit, name)
    inner = validate_filler(build_signature_context(), filler)
    rep.entries_validated = inner.entries_validated
    # generic F, then discharge it to quantify over the inhabited proposition
    env2 = instantiate_environment(filler)
    par_ty = beta_lite(expand_macros(App(Global("El0"), Global("F")), filler.assignment))
    body, ty = discharge(env, env2, Global("paradox"), par_ty)
    assert isinstance(ty, Pi)
    env3 = extend(env, Definition(f"{name}_paradox_at", ty, body))
    concl_ty = _pi("A", _G("MProp"), lambda A: _ap(_G("El"), A))(0)
    concl = _lam("A", _G("MProp"), lambda A: _ap(
        _k(counit), A, _ap(_G(f"{name}_paradox_at"), _ap(_k(inj0), A))))(0)
    env3 = extend(env3, Definition(f"{name}_all_inhabited", concl_ty, concl))
    rep.add_theorem(f"{name}_all_inhabited", "forall (A:MProp), El A")
    return env3, rep


def abstract_modal_base() -> Environment:
    """prelude + an abstract modality and its laws as variables."""
    env = prelude()
    env = extend(env, Variable("M", _arrow(PROP, PROP)(0)))
    env = extend(env, Variable("Munit", _pi(
        "A", PROP, lambda A: _arrow(A, _ap(_G("M"), A)))(0)))
    env = extend(env, Variable("Mjoin", _pi(
        "A", PROP, lambda A: _arrow(_ap(_G("M"), _ap(_G("M"), A)),
                                    _ap(_G("M"), A)))(0)))
    env = extend(env, Variable("Mincr", _pi(
        "A", PROP, lambda A: _pi("B", PROP, lambda B: _arrow(
            _arrow(A, B), _arrow(_ap(_G("M"), A), _ap(_G("M"), B)))))(0)))
    return modality_universe(env, Global("M"), Global("Munit"),
                             Global("Mjoin"), Global("Mincr"))


def trivial_modality_env() -> Environment:
    """M A := True; the only modal proposition is True and everything modal
    is directly provable."""
    env = prelude()
    m = _lam("A", PROP, lambda A: _G("True"))(0)
    env = extend(env, Definition("M", _arrow(PROP, PROP)(0), m))
    env = extend(env, Definition("Munit", _pi(
        "A", PROP, lambda A: _arrow(A, _ap(_G("M"), A)))(0),
        _lam("A", PROP, lambda A: _lam("a", A, lambda a: _G("truth")))(0)))
    env = extend(env, Definition("Mjoin", _pi(
        "A", PROP, lambda A: _arrow(_ap(_G("M"), _ap(_G("M"), A)), _ap(_G("M"), A)))(0),
        _lam("A", PROP, lambda A: _lam("h", _G("True"), lambda h: h))(0)))
    env = extend(env, Definition("Mincr", _pi(
        "A", PROP, lambda A: _pi("B", PROP, lambda B: _arrow(
            _arrow(A, B), _arrow(_ap(_G("M"), A), _ap(_G("M"), B)))))(0),
        _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _lam(
            "f", _arrow(A, B), lambda f: _lam("h", _G("True"), lambda h: h))))(0)))
    env = modality_universe(env, Global("M"), Global("Munit"),
                            Global("Mjoin"), Global("Mincr"))
    every = _lam("A", _G("MProp"), lambda A: lambda d: App(
        Snd(A(d)), Global("truth")))(0)
    return extend(env, Definition(
        "every_modal_holds", _pi("A", _G("MProp"), lambda A: _ap(_G("El"), A))(0),
        every))


# ---------------------------------------------------------------------------
# Section "Weak excluded middle": the double-negation modality


def wem_base() -> Environment:
    env = prelude()
    env = extend(env, Variable("wem", _pi(
        "A", PROP, lambda A: _or(_nn(A), _neg(A)))(0)))
    dn = _lam("A", PROP, lambda A: _nn(A))(0)
    env = extend(env, Definition("M", _arrow(PROP, PROP)(0), dn))
    env = extend(env, Definition("Munit", _pi(
        "A", PROP, lambda A: _arrow(A, _ap(_G("M"), A)))(0),
        _lam("A", PROP, lambda A: _lam("a", A, lambda a: _lam(
            "k", _neg(A), lambda k: _ap(k, a))))(0)))
    env = extend(env, Definition("Mjoin", _pi(
        "A", PROP, lambda A: _arrow(_ap(_G("M"), _ap(_G("M"), A)), _ap(_G("M"), A)))(0),
        _lam("A", PROP, lambda A: _lam("h", _nn(_nn(A)), lambda h: _lam(
            "k", _neg(A), lambda k: _ap(h, _lam(
                "dd", _nn(A), lambda dd: _ap(dd, k))))))(0)))
    env = extend(env, Definition("Mincr", _pi(
        "A", PROP, lambda A: _pi("B", PROP, lambda B: _arrow(
            _arrow(A, B), _arrow(_ap(_G("M"), A), _ap(_G("M"), B)))))(0),
        _lam("A", PROP, lambda A: _lam("B", PROP, lambda B: _lam(
            "f", _arrow(A, B), lambda f: _lam("h", _nn(A), lambda h: _lam(
                "k", _neg(B), lambda k: _ap(h, _lam(
                    "a", A, lambda a: _ap(k, _ap(f, a)))))))))(0)))
    env = modality_universe(env, Global("M"), Global("Munit"),
                            Global("Mjoin"), Global("Mincr"))
    # wem' : decidability of exactly the negative propositions
    wem2_ty = _pi("A", _G("MProp"), lambda A: _or(
        _ap(_G("El"), A), _neg(_ap(_G("El"), A))))
    wem2 = _lam("A", _G("MProp"), lambda A: _ap(
        _G("or_ind"), _nn(_ap(_G("El"), A)), _neg(_ap(_G("El"), A)),
        _or(_ap(_G("El"), A), _neg(_ap(_G("El"), A))),
        _lam("h", _nn(_ap(_G("El"), A)), lambda h: lambda d: App(
            App(App(Global("inl"), App(Global("El"), A(d))),
                App(Global("neg"), App(Global("El"), A(d)))),
            App(Snd(A(d)), h(d)))),
        _lam("h", _neg(_ap(_G("El"), A)), lambda h: _ap(
            _G("inr"), _ap(_G("El"), A), _neg(_ap(_G("El"), A)), h)),
        _ap(_G("wem"), _ap(_G("El"), A))))
    return extend(env, Definition("wem'", wem2_ty(0), wem2(0)))


def wem_retraction(env: Environment) -> Environment:
    """The two-point reflection of MProp into U0m under wem."""
    u0, t, f = _G("U0"), _G("t"), _G("f")
    El = lambda x: _ap(_G("El"), x)

    def eq_t(x: Bld) -> Bld:
        return _idty(u0, t, x)

    # U0 is negative: it has a point
    u0m_ty = _G("MProp")
    u0m = lambda d: Pair(Global("MProp"), Global("U0"),
                         Lam("h", App(Global("M"), Global("U0")), Global("t")))
    env = extend(env, Definition("U0m", u0m_ty(0), u0m(0)))

    def window(A: Bld) -> Bld:
        return lambda d: SigmaTy(
            "x", u0(d),
            SigmaTy("u",
                    _arrow(_at(lift(El(A)(d), 1), d + 1),
                           _nn(eq_t(_at(Var(0), d + 1))))(d + 1),
                    _arrow(_nn(eq_t(_at(Var(1), d + 2))),
                           _at(lift(El(A)(d), 2), d + 2))(d + 2)))

    def inner_sig(A: Bld, x: Bld) -> Bld:
        return lambda d: SigmaTy(
            "u", _arrow(El(A), _nn(eq_t(x)))(d),
            _arrow(_nn(eq_t(_at(lift(x(d), 1), d + 1))),
                   _at(lift(El(A)(d), 1), d + 1))(d + 1))

    branch1 = _lam("A", _G("MProp"), lambda A: _lam(
        "a", El(A), lambda a: lambda d: Pair(
            window(A)(d), t(d),
            Pair(inner_sig(A, t)(d),
                 _lam("a2", El(A), lambda a2: _lam(
                     "k", _neg(eq_t(t)), lambda k: _ap(k, _refl(u0, t))))(d),
                 _lam("e", _nn(eq_t(t)), lambda e: a)(d)))))

    branch2 = _lam("A", _G("MProp"), lambda A: _lam(
        "h", _neg(El(A)), lambda h: lambda d: Pair(
            window(A)(d), f(d),
            Pair(inner_sig(A, f)(d),
                 _lam("a2", El(A), lambda a2: _ap(h, a2, _nn(eq_t(f))))(d),
                 _lam("e", _nn(eq_t(f)), lambda e: _ap(
                     e, _G("not_eq_t_f"), El(A)))(d)))))

    items: list[tuple[str, Bld, Bld]] = []
    items.append(("wem_window",
                  _pi("A", _G("MProp"), lambda A: window(A)),
                  _lam("A", _G("MProp"), lambda A: _ap(
                      _G("or_ind"), El(A), _neg(El(A)), window(A),
                      _ap(branch1, A), _ap(branch2, A), _ap(_G("wem'"), A)))))
    items.append(("inj0m", _arrow(_G("MProp"), El(_G("U0m"))),
                  _lam("A", _G("MProp"), lambda A: lambda d: Fst(
                      _ap(_G("wem_window"), A)(d)))))
    items.append(("proj0m", _arrow(El(_G("U0m")), _G("MProp")),
                  _lam("x", El(_G("U0m")), lambda x: lambda d: Pair(
                      Global("MProp"), _nn(eq_t(x))(d),
                      _lam("h", _ap(_G("M"), _nn(eq_t(x))), lambda h: _lam(
                          "k", _neg(eq_t(x)), lambda k: _ap(h, _lam(
                              "dd", _nn(eq_t(x)), lambda dd: _ap(dd, k)))))(d)))))
    items.append(("inj0m_unit",
                  _pi("A", _G("MProp"), lambda A: _arrow(
                      El(A), El(_ap(_G("proj0m"), _ap(_G("inj0m"), A))))),
                  _lam("A", _G("MProp"), lambda A: _lam(
                      "a", El(A), lambda a: lambda d: App(
                          Fst(Snd(_ap(_G("wem_window"), A)(d))), a(d))))))
    items.append(("inj0m_counit",
                  _pi("A", _G("MProp"), lambda A: _arrow(
                      El(_ap(_G("proj0m"), _ap(_G("inj0m"), A))), El(A))),
                  _lam("A", _G("MProp"), lambda A: _lam(
                      "e", El(_ap(_G("proj0m"), _ap(_G("inj0m"), A))),
                      lambda e: lambda d: App(
                          Snd(Snd(_ap(_G("wem_window"), A)(d))), e(d))))))
    for name, ty, body in items:
        env = extend(env, Definition(name, ty(0), body(0)))
    return env


def wem_development() -> tuple[Environment, InstanceReport]:
    """wem entails weak proof irrelevance: the final double negation cannot be
    eliminated, and no stronger statement is attempted."""
    rep = InstanceReport(instance="wem", host="host3")
    base = wem_base()
    # falsity is modal: ~~False -> False
    false_m = Pair(Global("MProp"), Global("False"),
                   Lam("h", App(Global("M"), Global("False")),
                       App(App(Var(0), Lam("x", Global("False"), Var(0))),
                           Global("False"))))
    base = extend(base, Definition("FalseM", Global("MProp"), false_m))
    rep.add_theorem("wem'", "forall (A:MProp), or (El A) (neg (El A))")

    env = wem_retraction(_two_point_vars(base))
    sh = ModalShape(Global("U0m"), Global("proj0m"), Global("inj0m"),
                    Global("inj0m_unit"), Global("inj0m_counit"))
    fc = App(Global("inj0m"), Global("FalseM"))
    par = direct_paradox(sh, fc)
    false_term = App(_ap(_G("inj0m_counit"), _G("FalseM"))(0), par)
    env = extend(env, Definition("wem_false", Global("False"), false_term))
    rep.add_theorem("wem_false", "False (under U0, t, f, t /= f)")

    nn_body, nn_ty = discharge(base, env, Global("wem_false"), Global("False"),
                               inline=("U0m", "proj0m", "inj0m"))
    env4 = extend(base, Definition("wem_nn_raw", nn_ty, nn_body))
    nn_stmt = _pi("A", PROP, lambda A: _pi("x", A, lambda x: _pi(
        "y", A, lambda y: _nn(_idty(A, x, y)))))(0)
    nn_tm = _lam("A", PROP, lambda A: _lam("x", A, lambda x: _lam(
        "y", A, lambda y: _ap(_G("wem_nn_raw"), A, x, y))))(0)
    env4 = extend(env4, Definition("wem_nn", nn_stmt, nn_tm))
    rep.add_theorem("wem_nn", "forall (A:Prop) (x y:A), neg (neg (Id A x y))")
    return env4, rep
