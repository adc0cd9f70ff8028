"""The pair of maps ``V(a) = S a S*`` and ``H(a) = S* a S`` on the AF core.

Here ``S = sum_e S_e / sqrt(n_{r(e)})``. On matrix units:

* ``V(S_mu S_nu*) = (n_{s(mu)} n_{s(nu)})^{-1/2} sum S_{e mu} S_{f nu}*`` over
  edges ``e`` ending at ``s(mu)`` and ``f`` ending at ``s(nu)``; zero when
  either start is a source.
* ``H(S_{e mu} S_{f nu}*) = (n_{s(mu)} n_{s(nu)})^{-1/2} S_mu S_nu*``;
  ``H(P_v) = sum_{s(e)=v} P_{r(e)} / n_{r(e)}`` for non-sinks and 0 for sinks.

``V`` raises the level by one and ``H`` lowers it by one. Everything here is
exact; the verification routines check identities on whole bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .af import AfElement, Unit, _prepend, _tail, basis_elements, f_n_dimension, level_basis, multiply
from .errors import ConsistencyError
from .graph import DirectedGraph, Path, graph_from_edges, source_length_conflict, validate_graph
from .linalg import Echelon, Span, field_multiples, flatten
from .scalar import ExactScalar, inv_sqrt


def _memo(E: DirectedGraph, name: str) -> dict:
    return E.memo.setdefault(name, {})


def _V_unit(E: DirectedGraph, u: Unit) -> list[tuple[Unit, ExactScalar]]:
    mu, nu = u
    n1, n2 = E.in_degree[mu.base], E.in_degree[nu.base]
    if not n1 or not n2:
        return []
    c = inv_sqrt(n1 * n2)
    return [((_prepend(E, e, mu), _prepend(E, f, nu)), c)
            for e in E.in_edges[mu.base] for f in E.in_edges[nu.base]]


def _H_unit(E: DirectedGraph, u: Unit) -> list[tuple[Unit, ExactScalar]]:
    mu, nu = u
    if mu.edges:
        m, n = _tail(E, mu), _tail(E, nu)
        return [((m, n), inv_sqrt(E.in_degree[m.base] * E.in_degree[n.base]))]
    v = mu.base
    acc: dict[str, ExactScalar] = {}
    for e in E.out_edges[v]:
        w = E.dst[e]
        acc[w] = acc.get(w, ExactScalar()) + ExactScalar.of(1) / E.in_degree[w]
    return [((Path(w), Path(w)), c) for w, c in acc.items()]


def _apply(a: AfElement, name: str, rule, level: int) -> AfElement:
    E = a.graph
    cache = _memo(E, name)
    out: dict[Unit, ExactScalar] = {}
    for u, c in a.terms.items():
        img = cache.get(u)
        if img is None:
            img = cache[u] = rule(E, u)
        for w, k in img:
            s = out.get(w)
            s = c * k if s is None else s + c * k
            if s:
                out[w] = s
            else:
                del out[w]
    return AfElement(E, out, level, _canonical=True)


def apply_V(a: AfElement) -> AfElement:
    return _apply(a, "V", _V_unit, a.level + 1)


def apply_H(a: AfElement) -> AfElement:
    return _apply(a, "H", _H_unit, max(a.level - 1, 0))


def V_one(E: DirectedGraph) -> AfElement:
    return apply_V(AfElement.identity(E))


def H_one(E: DirectedGraph) -> AfElement:
    """``H(1)``, the sum of projections at vertices that receive an edge."""
    return apply_H(AfElement.identity(E))


# -- sparse product identities -------------------------------------------------


def _inner_index(elems: list[AfElement], side: int) -> dict[Path, list[int]]:
    idx: dict[Path, list[int]] = {}
    for i, a in enumerate(elems):
        for p in {u[side] for u in a.terms}:
            idx.setdefault(p, []).append(i)
    return idx


def _candidates(xs: list[AfElement], ys: list[AfElement]) -> list[set[int]]:
    """For each x, indices j with x*y_j possibly nonzero (shared inner path)."""
    left = _inner_index(ys, 0)
    return [{j for p in {u[1] for u in x.terms} for j in left.get(p, ())} for x in xs]


def _check_multiplicative(As: list[AfElement], Bs: list[AfElement],
                          f: Callable[[AfElement], AfElement]) -> tuple[int, int, list[str]]:
    """Check f(ab) = f(a)f(b) and f(ba) = f(b)f(a) for every a in As, b in Bs.

    All elements are at one level. A product of canonical elements at a
    common level vanishes unless an inner path matches, so pairs outside the
    join indices are zero on both sides; only the rest are multiplied out.
    """
    fA = [f(a) for a in As]
    fB = [f(b) for b in Bs]
    checked = evaluated = 0
    failures: list[str] = []
    for xs, ys, fx, fy, order in ((As, Bs, fA, fB, "ab"), (Bs, As, fB, fA, "ba")):
        plain = _candidates(xs, ys)
        image = _candidates(fx, fy)
        for i in range(len(xs)):
            checked += len(ys)
            for j in sorted(plain[i] | image[i]):
                evaluated += 1
                if f(multiply(xs[i], ys[j])) != multiply(fx[i], fy[j]):
                    if len(failures) < 5:
                        failures.append(f"{order}: {xs[i]!r} * {ys[j]!r}")
    return checked, evaluated, failures


def _distinct(elems: Iterable[AfElement]) -> list[AfElement]:
    seen = set()
    out = []
    for a in elems:
        if a.is_zero():
            continue
        k = a.key()
        if k not in seen:
            seen.add(k)
            out.append(a)
    return out


@dataclass
class AxiomReport:
    depth: int
    VHV_equals_V: bool = True
    HVH_equals_H: bool = True
    V_multiplicative_on_H_image: bool = True
    H_multiplicative_on_V_image: bool = True
    E_V_idempotent: bool = True
    E_H_idempotent: bool = True
    basis_checked: int = 0
    pairs_checked: int = 0
    pairs_evaluated: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "passed": self.passed,
            "axioms": {
                "VHV=V": self.VHV_equals_V,
                "HVH=H": self.HVH_equals_H,
                "V(ab)=V(a)V(b) on H-image": self.V_multiplicative_on_H_image,
                "H(ab)=H(a)H(b) on V-image": self.H_multiplicative_on_V_image,
                "VH idempotent": self.E_V_idempotent,
                "HV idempotent": self.E_H_idempotent,
            },
            "basis_elements_checked": self.basis_checked,
            "pairs_checked": self.pairs_checked,
            "pairs_evaluated": self.pairs_evaluated,
            "failures": self.failures,
        }


def verify_interaction_axioms(E: DirectedGraph, depth: int = 3) -> AxiomReport:
    """Exhaustive exact check of the interaction axioms on levels ``0..depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    rep = AxiomReport(depth)

    def fail(flag: str, msg: str) -> None:
        setattr(rep, flag, False)
        if len(rep.failures) < 20:
            rep.failures.append(msg)

    for N in range(depth + 1):
        B = basis_elements(E, N)
        rep.basis_checked += len(B)
        for x in B:
            vx, hx = apply_V(x), apply_H(x)
            if apply_V(apply_H(vx)) != vx:
                fail("VHV_equals_V", f"VHV != V at {x!r}")
            if apply_H(apply_V(hx)) != hx:
                fail("HVH_equals_H", f"HVH != H at {x!r}")
            ev = apply_V(hx)
            if apply_V(apply_H(ev)) != ev:
                fail("E_V_idempotent", f"VH not idempotent at {x!r}")
            eh = apply_H(vx)
            if apply_H(apply_V(eh)) != eh:
                fail("E_H_idempotent", f"HV not idempotent at {x!r}")
        # a ranges over H-images of the next level, which span H(F) within level N
        H_imgs = _distinct(apply_H(y) for y in basis_elements(E, N + 1))
        H_imgs = [h.embed(N) for h in H_imgs]
        c, ev_, bad = _check_multiplicative(H_imgs, B, apply_V)
        rep.pairs_checked += c
        rep.pairs_evaluated += ev_
        for msg in bad:
            fail("V_multiplicative_on_H_image", "V(ab) != V(a)V(b): " + msg)
        if N >= 1:
            V_imgs = _distinct(apply_V(y) for y in basis_elements(E, N - 1))
            c, ev_, bad = _check_multiplicative(V_imgs, B, apply_H)
            rep.pairs_checked += c
            rep.pairs_evaluated += ev_
            for msg in bad:
                fail("H_multiplicative_on_V_image", "H(ab) != H(a)H(b): " + msg)
    return rep


@dataclass
class CompletenessReport:
    depth: int
    V_image_is_corner: list[bool]
    H_image_is_corner: list[bool]
    HV_is_H1_compression: bool
    VH_is_V1_compression: bool
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "passed": self.passed,
            "V_image_equals_V1_F_V1": self.V_image_is_corner,
            "H_image_equals_H1_F_H1": self.H_image_is_corner,
            "HV_equals_H1_compression": self.HV_is_H1_compression,
            "VH_equals_V1_compression": self.VH_is_V1_compression,
            "failures": self.failures,
        }


def verify_complete_interaction(E: DirectedGraph, depth: int = 2) -> CompletenessReport:
    """Check ``V(F) = V(1) F V(1)`` and ``H(F) = H(1) F H(1)`` level by level."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    v1, h1 = V_one(E), H_one(E)
    vcorner, hcorner, failures = [], [], []
    hv_ok = vh_ok = True
    for N in range(depth):
        B, B1 = basis_elements(E, N), basis_elements(E, N + 1)
        v_span = Span.of((apply_V(x) for x in B), N + 1)
        v_corner = Span.of((multiply(multiply(v1, y), v1) for y in B1), N + 1)
        vcorner.append(v_span == v_corner)
        h_span = Span.of((apply_H(y) for y in B1), N)
        h_corner = Span.of((multiply(multiply(h1, x), h1) for x in B), N)
        hcorner.append(h_span == h_corner)
        if not vcorner[-1]:
            failures.append(f"level {N}: span V(F_N) != V(1) F_(N+1) V(1)")
        if not hcorner[-1]:
            failures.append(f"level {N}: span H(F_(N+1)) != H(1) F_N H(1)")
        for x in B:
            if apply_H(apply_V(x)) != multiply(multiply(h1, x), h1):
                hv_ok = False
                failures.append(f"HV(x) != H(1) x H(1) at {x!r}")
                break
        for y in B1:
            if apply_V(apply_H(y)) != multiply(multiply(v1, y), v1):
                vh_ok = False
                failures.append(f"VH(y) != V(1) y V(1) at {y!r}")
                break
    return CompletenessReport(depth, vcorner, hcorner, hv_ok, vh_ok, failures)


# -- classification --------------------------------------------------------------


def centrality_witness(E: DirectedGraph, z: AfElement, depth: int = 3) -> AfElement | None:
    """A basis unit of level ``<= depth`` not commuting with ``z``, if any."""
    for N in range(depth + 1):
        for x in basis_elements(E, N):
            if multiply(z, x) != multiply(x, z):
                return x
    return None


def H_one_central(E: DirectedGraph, depth: int = 3) -> bool:
    return centrality_witness(E, H_one(E), depth) is None


def V_one_central(E: DirectedGraph, depth: int = 3) -> bool:
    return centrality_witness(E, V_one(E), depth) is None


@dataclass
class CsystemResult:
    value: bool
    witness: tuple[str, tuple[int, int | None]] | None

    def __bool__(self):
        return self.value

    def to_json(self) -> dict:
        w = None if self.witness is None else {"vertex": self.witness[0], "lengths": list(self.witness[1])}
        return {"csystem": self.value, "witness": w}


def is_csystem(E: DirectedGraph) -> CsystemResult:
    """True when no vertex is the range of two equally long paths, one from a source and one not.

    Equivalently, the maximal backward paths into each vertex all start at
    sources and share one length, or none of them reaches a source.
    """
    conflict = source_length_conflict(E)
    return CsystemResult(conflict is None, conflict)


def is_H_multiplicative(E: DirectedGraph) -> bool:
    """True when no two edges share a range vertex."""
    return all(n <= 1 for n in E.in_degree.values())


@dataclass
class KernelReport:
    level: int
    kernel_dim: int
    is_ideal: bool
    witness: str | None

    def __bool__(self):
        return self.is_ideal

    def to_json(self) -> dict:
        return {"level": self.level, "kernel_dim": self.kernel_dim, "is_ideal": self.is_ideal,
                "witness": self.witness}


def kernel_V_ideal_check(E: DirectedGraph, depth: int = 3) -> KernelReport:
    """Whether the kernel of ``V`` on the level-``depth`` algebra is an ideal there."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    B = basis_elements(E, depth)
    images = [apply_V(x) for x in B]
    kernel = [x for x, vx in zip(B, images) if vx.is_zero()]
    # the kernel is spanned by basis units only if the other images are independent
    sp = Span(depth + 1)
    for vx in images:
        if vx.is_zero():
            continue
        before = sp.dim
        sp.add(vx)
        if sp.dim != before + 1:
            raise ConsistencyError("V images of basis units are linearly dependent")
    witness = None
    plain = _candidates(kernel, B)
    for i, k in enumerate(kernel):
        for j in sorted(plain[i]):
            if not apply_V(multiply(k, B[j])).is_zero():
                witness = f"{k!r} * {B[j]!r} is not in ker V"
                break
        if witness:
            break
    if witness is None:
        back = _candidates(B, kernel)
        for j, b in enumerate(B):
            for i in sorted(back[j]):
                if not apply_V(multiply(b, kernel[i])).is_zero():
                    witness = f"{b!r} * {kernel[i]!r} is not in ker V"
                    break
            if witness:
                break
    return KernelReport(depth, len(kernel), witness is None, witness)


def quotient_graph(E: DirectedGraph) -> DirectedGraph:
    """Collapse edges with the same source and range; a class keeps its smallest id."""
    classes: dict[tuple[str, str], str] = {}
    for e in E.edges:
        classes.setdefault((e.src, e.dst), e.id)
    return graph_from_edges(E.vertices, [(i, s, d) for (s, d), i in classes.items()])


def classify(E: DirectedGraph, depth: int = 3) -> dict:
    """Structure verdicts, each cross-checked against its algebraic counterpart.

    Raises ``ConsistencyError`` when two routes disagree inside a window
    large enough to be conclusive.
    """
    cs = is_csystem(E)
    needed = cs.witness[1][0] if cs.witness else 0
    conclusive = needed <= depth
    h1c = H_one_central(E, depth)
    kern = kernel_V_ideal_check(E, max(depth, 1))
    hm = is_H_multiplicative(E)
    v1c = V_one_central(E, max(depth, 1))
    if conclusive and not (cs.value == h1c == kern.is_ideal):
        raise ConsistencyError("C*-system criteria disagree",
                               {"csystem": cs.value, "H1_central": h1c, "kernel_ideal": kern.is_ideal})
    if hm != v1c:
        raise ConsistencyError("H-multiplicativity criteria disagree",
                               {"H_multiplicative": hm, "V1_central": v1c})
    return {
        "csystem": cs.value,
        "csystem_witness": cs.to_json()["witness"],
        "H_multiplicative": hm,
        "quotient_graph": quotient_graph(E).to_json(),
        "cross_checks": {
            "depth": depth,
            "window_conclusive": conclusive,
            "H1_central": h1c,
            "kernel_V_ideal": kern.is_ideal,
            "V1_central": v1c,
        },
    }


# -- generated subalgebras ---------------------------------------------------------


def _seed(E: DirectedGraph, seed: str) -> list[AfElement]:
    one = ExactScalar.of(1)
    if seed == "vertex":
        return [AfElement.projection(E, v) for v in E.vertices]
    if seed == "edge":
        out = [AfElement.projection(E, w) for w in sorted(E.sinks)]
        for e in E.edges:
            p = Path(e.src, (e.id,))
            out.append(AfElement(E, {(p, p): one}, 1, _canonical=True))
        return out
    raise ValueError(f"seed must be 'edge' or 'vertex', not {seed!r}")


def generated_algebra(gens: list[AfElement], level: int) -> Span:
    """Span of all products of ``gens``, computed at ``level``."""
    sp = Span(level)
    queue = [g for g in gens if sp.add(g)]
    while queue:
        w = queue.pop()
        for g in gens:
            p = multiply(w, g)
            if not p.is_zero() and sp.add(p):
                queue.append(p)
    return sp


def _intersect_with_level(sp: Span, E: DirectedGraph, N: int) -> list[AfElement]:
    """Basis (over the coefficient field) of ``sp`` intersected with the level-``N`` algebra."""
    if sp.level <= N:
        return list(sp.generators)
    L = sp.level
    ech = Echelon()
    # left/right tags order left coordinates first, so rows led by a right
    # coordinate have zero left part and their right part lies in both spaces
    for g in sp.generators:
        for m in field_multiples(g):
            vec = flatten(m.embed(L))
            ech.add({**{(0, k): q for k, q in vec.items()}, **{(1, k): q for k, q in vec.items()}})
    for x in basis_elements(E, N):
        ech.add({(0, k): q for k, q in flatten(x.embed(L)).items()})
    out = []
    for lead, row in ech.rows.items():
        if lead[0] == 1:
            terms: dict[Unit, dict[int, object]] = {}
            for (_, (u, d)), q in row.items():
                terms.setdefault(u, {})[d] = q
            out.append(AfElement(E, {u: ExactScalar(c) for u, c in terms.items()}, L))
    return Span.of(out, L).generators


def generated_subalgebra_dims(E: DirectedGraph, depth: int, seed: str = "edge") -> list[int]:
    """dims of B_N = alg(seed, V(B_{N-1})) within level N, for N = 0..depth."""
    gens0 = _seed(E, seed)
    dims = []
    prev: list[AfElement] = []
    for N in range(depth + 1):
        gens = list(gens0) + [apply_V(b) for b in prev]
        level = max([N] + [g.level for g in gens])
        alg = generated_algebra(gens, level)
        prev = _intersect_with_level(alg, E, N)
        dims.append(len(prev))
    return dims


def f_dimension_sequence(E: DirectedGraph, depth: int) -> list[int]:
    return [f_n_dimension(E, N) for N in range(depth + 1)]
