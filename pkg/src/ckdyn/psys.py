"""Finite partial dynamical systems ``(M, phi: Delta -> M, Y)``.

M is finite and discrete, so closed, open and "empty interior" all reduce to
plain set conditions. The natural reversible Y-extension is the space of
backward orbits: finite ones ``(x_0, ..., x_N)`` with ``phi(x_n) = x_{n-1}``
and ``x_N`` in Y, and infinite ones. For finite M every infinite backward
orbit is a pure backward cycle, so it is stored as a prefix-free lasso.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Union

from .errors import ConsistencyError, DomainError, SizeGuardError, SystemValidationError
from .lasso import Lasso

MAX_POINTS = 20


@dataclass(frozen=True)
class PartialSystem:
    points: tuple[str, ...]
    domain: frozenset[str]
    phi: tuple[tuple[str, str], ...]
    Y: frozenset[str]

    def __hash__(self):
        return hash((self.points, self.phi, tuple(sorted(self.Y))))

    @cached_property
    def map(self) -> dict[str, str]:
        return dict(self.phi)

    @cached_property
    def position(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.points)}

    @cached_property
    def image(self) -> frozenset[str]:
        return frozenset(self.map.values())

    @cached_property
    def preimages(self) -> dict[str, tuple[str, ...]]:
        pre: dict[str, list[str]] = {x: [] for x in self.points}
        for z in self.points:
            if z in self.domain:
                pre[self.map[z]].append(z)
        return {x: tuple(v) for x, v in pre.items()}

    @property
    def well_positioned(self) -> bool:
        return self.Y | self.image == frozenset(self.points)

    @property
    def canonical_Y(self) -> bool:
        return self.Y == frozenset(self.points) - self.image

    def sort(self, xs: Iterable[str]) -> list[str]:
        return sorted(xs, key=self.position.__getitem__)

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "domain": self.sort(self.domain),
            "map": {x: self.map[x] for x in self.sort(self.domain)},
            "Y": self.sort(self.Y),
        }


def validate_system(raw: Mapping) -> PartialSystem:
    if not isinstance(raw, Mapping):
        raise SystemValidationError("system JSON must be an object")
    for key in ("points", "domain", "map", "Y"):
        if key not in raw:
            raise SystemValidationError(f"missing key '{key}'")
    points = [str(x) for x in raw["points"]]
    if len(set(points)) != len(points):
        dup = next(x for x in points if points.count(x) > 1)
        raise SystemValidationError(f"duplicate point {dup}")
    pset = set(points)
    domain = {str(x) for x in raw["domain"]}
    mapping = {str(k): str(v) for k, v in dict(raw["map"]).items()}
    Y = {str(x) for x in raw["Y"]}
    for name, xs in (("domain", domain), ("Y", Y), ("map value", set(mapping.values()))):
        bad = sorted(xs - pset)
        if bad:
            raise SystemValidationError(f"{name} {bad[0]} is not a point")
    if set(mapping) != domain:
        diff = sorted(set(mapping) ^ domain)
        raise SystemValidationError(f"map must be defined exactly on the domain (mismatch at {diff[0]})")
    phi = tuple((x, mapping[x]) for x in points if x in domain)
    return PartialSystem(tuple(points), frozenset(domain), phi, frozenset(Y))


def make_system(points, mapping: Mapping[str, str], Y) -> PartialSystem:
    return validate_system({"points": list(points), "domain": list(mapping), "map": dict(mapping), "Y": list(Y)})


def require_well_positioned(sys: PartialSystem) -> None:
    if not sys.well_positioned:
        missing = sys.sort(frozenset(sys.points) - sys.Y - sys.image)
        raise SystemValidationError(
            f"Y together with phi(Delta) must cover M; uncovered points: {missing} "
            "(the reduced system for such Y is not implemented)"
        )


def _guard(sys: PartialSystem) -> None:
    if len(sys.points) > MAX_POINTS:
        raise SizeGuardError(f"{len(sys.points)} points exceeds the subset-enumeration limit of {MAX_POINTS}")


# -- orbits ------------------------------------------------------------------------


def forward_orbit(sys: PartialSystem, x: str) -> tuple[list[str], int | None]:
    """``x, phi(x), ...`` until it leaves Delta or repeats; second value is the index where the cycle starts."""
    seen: dict[str, int] = {}
    orbit = []
    while x not in seen:
        seen[x] = len(orbit)
        orbit.append(x)
        if x not in sys.domain:
            return orbit, None
        x = sys.map[x]
    return orbit, seen[x]


def periodic_cycles(sys: PartialSystem) -> list[tuple[str, ...]]:
    """Each cycle once, in forward order, starting at its earliest point."""
    cycles = set()
    for x in sys.points:
        orbit, start = forward_orbit(sys, x)
        if start is not None:
            cyc = orbit[start:]
            i = min(range(len(cyc)), key=lambda k: sys.position[cyc[k]])
            cycles.add(tuple(cyc[i:] + cyc[:i]))
    return sorted(cycles, key=lambda c: [sys.position[x] for x in c])


def periodic_points(sys: PartialSystem) -> frozenset[str]:
    return frozenset(x for c in periodic_cycles(sys) for x in c)


def has_no_entrance(sys: PartialSystem, cycle: tuple[str, ...]) -> bool:
    # every cycle point's only preimage is its predecessor on the cycle
    n = len(cycle)
    return all(sys.preimages[cycle[k]] == (cycle[k - 1],) for k in range(n))


def no_entrance_cycles(sys: PartialSystem) -> list[tuple[str, ...]]:
    return [c for c in periodic_cycles(sys) if has_no_entrance(sys, c)]


@dataclass(frozen=True)
class FreenessResult:
    value: bool
    witnesses: tuple[tuple[str, ...], ...] = ()

    def __bool__(self):
        return self.value

    def to_json(self) -> dict:
        return {"value": self.value, "witnesses": [list(c) for c in self.witnesses]}


def is_topologically_free(sys: PartialSystem) -> FreenessResult:
    bad = tuple(no_entrance_cycles(sys))
    return FreenessResult(not bad, bad)


def is_top_free_outside_Y(sys: PartialSystem) -> FreenessResult:
    require_well_positioned(sys)
    bad = tuple(c for c in no_entrance_cycles(sys) if not set(c) & sys.Y)
    return FreenessResult(not bad, bad)


# -- the reversible extension -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class FinitePoint:
    """Backward orbit ``(x_0, ..., x_N)`` ending in Y."""

    seq: tuple[str, ...]

    @property
    def N(self) -> int:
        return len(self.seq) - 1

    def to_json(self) -> dict:
        return {"finite": list(self.seq)}


ExtPoint = Union[FinitePoint, Lasso]


def point_from_json(data: Mapping) -> ExtPoint:
    if "finite" in data:
        return FinitePoint(tuple(data["finite"]))
    return Lasso.make(data.get("prefix", ()), data["cycle"])


def point_head(p: ExtPoint) -> str:
    return p.seq[0] if isinstance(p, FinitePoint) else p.symbol_at(0)


def backward_cycle(sys: PartialSystem, x: str) -> Lasso:
    orbit, start = forward_orbit(sys, x)
    if start != 0:
        raise DomainError(f"{x} is not periodic")
    return Lasso((), (x,) + tuple(reversed(orbit[1:])))


def finite_points(sys: PartialSystem, depth: int) -> list[FinitePoint]:
    level = [(y,) for y in sys.sort(sys.Y)]
    out = []
    for _ in range(depth + 1):
        out.extend(FinitePoint(s) for s in level)
        level = [(sys.map[s[0]],) + s for s in level if s[0] in sys.domain]
    return out


def lasso_points(sys: PartialSystem) -> list[Lasso]:
    return [backward_cycle(sys, x) for c in periodic_cycles(sys) for x in c]


def extension_is_finite(sys: PartialSystem) -> bool:
    """Exact: finite iff no point of Y has an infinite forward orbit."""
    return all(forward_orbit(sys, y)[1] is None for y in sys.Y)


def _stabilizes(sys: PartialSystem) -> bool:
    m = len(sys.points)
    return len(finite_points(sys, m)) == len(finite_points(sys, 2 * m))


@dataclass
class ExtensionSpace:
    system: PartialSystem
    depth: int
    finite_points: list[FinitePoint]
    lassos: list[Lasso]
    finite: bool

    @property
    def points(self) -> list[ExtPoint]:
        return [*self.finite_points, *self.lassos]

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "finite": self.finite,
            "finite_points": [p.to_json() for p in self.finite_points],
            "lasso_points": [l.to_json() for l in self.lassos],
            "preimage_graph": [[x, z] for x in self.system.points for z in self.system.preimages[x]],
        }

    def to_dot(self) -> str:
        names = {p: f"p{i}" for i, p in enumerate(self.points)}
        lines = ["digraph extension {"]
        for p, n in names.items():
            label = ",".join(p.seq) if isinstance(p, FinitePoint) else "(" + ",".join(p.cycle) + ")^inf"
            shape = "box" if isinstance(p, Lasso) else "ellipse"
            lines.append(f'  {n} [label="{label}", shape={shape}];')
        for p, n in names.items():
            try:
                q = extension_shift(self.system, p, "forward")
            except DomainError:
                continue
            if q in names:
                lines.append(f"  {n} -> {names[q]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def reversible_extension(sys: PartialSystem, depth: int = 3) -> ExtensionSpace:
    require_well_positioned(sys)
    finite = extension_is_finite(sys)
    if finite != _stabilizes(sys):
        raise ConsistencyError("finiteness of the extension disagrees with the stabilization test")
    return ExtensionSpace(sys, depth, finite_points(sys, depth), lasso_points(sys), finite)


def extension_shift(sys: PartialSystem, p: ExtPoint, direction: str = "forward") -> ExtPoint:
    if direction == "forward":
        x0 = point_head(p)
        if x0 not in sys.domain:
            raise DomainError(f"forward shift needs x_0 in the domain, got {x0}")
        if isinstance(p, FinitePoint):
            return FinitePoint((sys.map[x0],) + p.seq)
        return p.prepend(sys.map[x0])
    if direction == "backward":
        if isinstance(p, FinitePoint):
            if len(p.seq) < 2:
                raise DomainError("backward shift is undefined on a point with N = 0")
            return FinitePoint(p.seq[1:])
        return p.shift()
    raise ValueError(f"direction must be 'forward' or 'backward', not {direction!r}")


# -- periodicity of the extension ----------------------------------------------------------


def _head(p: ExtPoint, k: int) -> tuple:
    return p.seq[:k] if isinstance(p, FinitePoint) else p.head(k)


def isolated_lassos(sys: PartialSystem) -> list[Lasso]:
    """Lassos with a neighbourhood containing no other point.

    Agreement on ``2|M|`` coordinates already forces arbitrarily long
    agreement (winding around the cycle), and a witness of that length, when
    one exists, is a finite point of length at most ``4|M|`` or another lasso.
    """
    m = len(sys.points)
    k = 2 * m
    lassos = lasso_points(sys)
    others = [p for p in finite_points(sys, 4 * m) if len(p.seq) >= k]
    out = []
    for l in lassos:
        h = l.head(k)
        if any(_head(q, k) == h for q in others) or any(q != l and q.head(k) == h for q in lassos):
            continue
        out.append(l)
    return out


def extension_periodicity_check(sys: PartialSystem, n: int) -> dict:
    require_well_positioned(sys)
    if n < 1:
        raise ValueError("n must be positive")
    fixed = []
    for l in lasso_points(sys):
        q: ExtPoint = l
        for _ in range(n):
            q = extension_shift(sys, q, "forward")
        if q == l:
            fixed.append(l)
    closed = {x for c in no_entrance_cycles(sys) for x in c}
    F_n = sys.sort(x for c in no_entrance_cycles(sys) if n % len(c) == 0 for x in c)
    F_n_out = sys.sort(x for c in no_entrance_cycles(sys) if n % len(c) == 0 and not set(c) & sys.Y for x in c)
    tilde = [l for l in fixed if l.symbol_at(0) in closed]
    iso = set(isolated_lassos(sys))
    tilde_iso = [l for l in fixed if l in iso]

    expected_iso = {x for c in no_entrance_cycles(sys) if not set(c) & sys.Y for x in c}
    if {l.symbol_at(0) for l in iso} != expected_iso:
        raise ConsistencyError("isolated lassos disagree with no-entrance cycles avoiding Y")

    def matches(lassos, pts):
        heads = [l.symbol_at(0) for l in lassos]
        return sorted(heads, key=sys.position.get) == pts

    report = {
        "n": n,
        "fixed_lassos": [l.to_json() for l in fixed],
        "F_tilde_n": [l.to_json() for l in tilde],
        "F_n": F_n,
        "F_tilde_n_isolated": [l.to_json() for l in tilde_iso],
        "F_n_outside_Y": F_n_out,
        "bijection": matches(tilde, F_n),
        "bijection_outside_Y": matches(tilde_iso, F_n_out),
    }
    if not (report["bijection"] and report["bijection_outside_Y"]):
        raise ConsistencyError("coordinate map is not a bijection onto the periodic points", report)
    return report


# -- lattices ----------------------------------------------------------------------------


def _masks(sys: PartialSystem):
    pos = sys.position
    bit = {x: 1 << pos[x] for x in sys.points}
    img = [0] * len(sys.points)  # phi as bit images
    dom = 0
    for x in sys.domain:
        dom |= bit[x]
        img[pos[x]] = bit[sys.map[x]]
    Ymask = sum(bit[x] for x in sys.Y)
    phi_delta = 0
    for x in sys.domain:
        phi_delta |= bit[sys.map[x]]
    return bit, img, dom, Ymask, phi_delta


def _phi_of(mask: int, img: list[int], dom: int) -> int:
    out, m, i = 0, mask & dom, 0
    while m:
        if m & 1:
            out |= img[i]
        m >>= 1
        i += 1
    return out


def _unmask(sys: PartialSystem, mask: int) -> frozenset[str]:
    return frozenset(x for i, x in enumerate(sys.points) if mask >> i & 1)


def _set_key(sys: PartialSystem, s: frozenset[str]):
    return (len(s), sorted(sys.position[x] for x in s))


def invariant_sets(sys: PartialSystem) -> list[frozenset[str]]:
    """All V with phi(V ∩ Delta) = V ∩ phi(Delta)."""
    _guard(sys)
    _, img, dom, _, phi_delta = _masks(sys)
    out = [_unmask(sys, V) for V in range(1 << len(sys.points)) if _phi_of(V, img, dom) == V & phi_delta]
    return sorted(out, key=lambda s: _set_key(sys, s))


@dataclass(frozen=True)
class YPair:
    V: frozenset[str]
    Vp: frozenset[str]

    def __le__(self, other: "YPair") -> bool:
        return self.V <= other.V and self.Vp <= other.Vp

    def to_json(self, sys: PartialSystem | None = None) -> list[list[str]]:
        s = sys.sort if sys else sorted
        return [s(self.V), s(self.Vp)]


def y_pairs(sys: PartialSystem) -> list[YPair]:
    """All (V, V'): V positively invariant, V' ⊆ Y, V' ∪ phi(V ∩ Delta) = V.

    For each V the forced part of V' is V minus phi(V ∩ Delta); the free part
    is any subset of Y ∩ phi(V ∩ Delta).
    """
    require_well_positioned(sys)
    _guard(sys)
    _, img, dom, Ymask, _ = _masks(sys)
    out = []
    for V in range(1 << len(sys.points)):
        fV = _phi_of(V, img, dom)
        if fV & ~V:
            continue
        forced = V & ~fV
        if forced & ~Ymask:
            continue
        free = Ymask & fV
        T = free
        while True:  # all submasks of free
            out.append(YPair(_unmask(sys, V), _unmask(sys, forced | T)))
            if T == 0:
                break
            T = (T - 1) & free
    return sorted(out, key=lambda p: (_set_key(sys, p.V), _set_key(sys, p.Vp)))


def pair_order(pairs: list[YPair]) -> list[tuple[int, int]]:
    return [(i, j) for i, a in enumerate(pairs) for j, b in enumerate(pairs) if i != j and a <= b]


# -- the invariance correspondence -------------------------------------------------------


@dataclass(frozen=True)
class OrbitUnion:
    """A union of extension orbits: finite orbits by their Y endpoint, cycle orbits by cycle."""

    ends: frozenset[str]
    cycles: frozenset[tuple[str, ...]]

    def contains(self, p: ExtPoint) -> bool:
        if isinstance(p, FinitePoint):
            return p.seq[-1] in self.ends
        return any(p.symbol_at(0) in c for c in self.cycles)


def _limit_cycle(sys: PartialSystem, y: str) -> tuple[str, ...] | None:
    orbit, start = forward_orbit(sys, y)
    if start is None:
        return None
    x = orbit[start]
    return next(c for c in periodic_cycles(sys) if x in c)


def closed_invariant_unions(sys: PartialSystem) -> list[OrbitUnion]:
    """Closed phi~-invariant subsets of the extension, as orbit unions.

    Invariance under the partial homeomorphism phi~ means being a union of
    full orbits. Closedness adds one condition: a finite orbit whose Y point
    has an infinite forward orbit accumulates on that limit cycle's lassos.
    """
    _guard(sys)
    ys = sys.sort(sys.Y)
    cycles = periodic_cycles(sys)
    atoms: list = [("y", y) for y in ys] + [("c", c) for c in cycles]
    if len(atoms) > MAX_POINTS:
        raise SizeGuardError("too many extension orbits to enumerate")
    limit = {y: _limit_cycle(sys, y) for y in ys}
    out = []
    for r in range(len(atoms) + 1):
        for combo in combinations(atoms, r):
            ends = frozenset(a[1] for a in combo if a[0] == "y")
            cyc = frozenset(a[1] for a in combo if a[0] == "c")
            if all(limit[y] is None or limit[y] in cyc for y in ends):
                out.append(OrbitUnion(ends, cyc))
    return out


def coordinate_image(sys: PartialSystem, U: OrbitUnion) -> tuple[frozenset[str], frozenset[str]]:
    """``(Phi(U), Phi(U minus phi~(Delta~)))``."""
    V = set()
    for y in U.ends:
        V.update(forward_orbit(sys, y)[0])
    for c in U.cycles:
        V.update(c)
    return frozenset(V), frozenset(U.ends)


def union_from_pair(sys: PartialSystem, pair: YPair) -> OrbitUnion:
    cycles = frozenset(c for c in periodic_cycles(sys) if set(c) <= pair.V)
    return OrbitUnion(frozenset(pair.Vp), cycles)


def verify_invariance_correspondence(sys: PartialSystem, depth: int = 3) -> dict:
    require_well_positioned(sys)
    pairs = y_pairs(sys)
    unions = closed_invariant_unions(sys)
    pts = finite_points(sys, depth) + lasso_points(sys)
    failures: list[str] = []
    images = []
    for pair in pairs:
        U = union_from_pair(sys, pair)
        images.append(U)
        if coordinate_image(sys, U) != (pair.V, pair.Vp):
            failures.append(f"Phi does not recover {pair.to_json(sys)}")
        # the sub-path-space, checked on enumerated points
        for p in pts:
            if not U.contains(p):
                continue
            if isinstance(p, FinitePoint) and not (set(p.seq) <= pair.V):
                failures.append(f"point {p.seq} leaves V")
            for d in ("forward", "backward"):
                try:
                    q = extension_shift(sys, p, d)
                except DomainError:
                    continue
                if not U.contains(q):
                    failures.append(f"{d} shift leaves the set from {p}")
    injective = len(set(images)) == len(images)
    surjective = set(images) == set(unions)
    order_ok = all(
        (a <= b) == (images[i].ends <= images[j].ends and images[i].cycles <= images[j].cycles)
        for i, a in enumerate(pairs) for j, b in enumerate(pairs)
    )
    canonical = None
    if sys.canonical_Y:
        firsts = sorted({p.V for p in pairs}, key=lambda s: _set_key(sys, s))
        canonical = firsts == invariant_sets(sys)
        if not canonical:
            failures.append("first components differ from the invariant sets")
    report = {
        "y_pairs": [p.to_json(sys) for p in pairs],
        "invariant_subspaces": [
            {"finite_orbits_ending_at": sys.sort(U.ends), "cycles": [list(c) for c in sorted(U.cycles)]}
            for U in images
        ],
        "closed_invariant_count": len(unions),
        "injective": injective,
        "surjective": surjective,
        "order_preserving": order_ok,
        "canonical_Y_matches_invariant_sets": canonical,
        "extension_finite": extension_is_finite(sys),
        "checked_points": len(pts),
        "failures": failures[:10],
    }
    if failures or not (injective and surjective and order_ok):
        raise ConsistencyError("Y-pair correspondence failed", report)
    return report


# -- verdicts -------------------------------------------------------------------------------


def _is_single_cycle(sys: PartialSystem) -> bool:
    cycles = periodic_cycles(sys)
    return len(cycles) == 1 and set(cycles[0]) == set(sys.points)


def _chain_order(sys: PartialSystem) -> list[str] | None:
    missing = set(sys.points) - sys.domain
    if len(missing) != 1 or sys.image != frozenset(sys.points) - _starts(sys):
        return None
    start = _starts(sys)
    if len(start) != 1:
        return None
    orbit, cyc = forward_orbit(sys, next(iter(start)))
    if cyc is not None or len(orbit) != len(sys.points):
        return None
    return orbit


def _starts(sys: PartialSystem) -> frozenset[str]:
    return frozenset(sys.points) - sys.image


def classify_minimal(sys: PartialSystem) -> dict:
    inv = invariant_sets(sys)
    M = frozenset(sys.points)
    minimal = bool(M) and inv == [frozenset(), M]
    n = len(sys.points)
    out = {"minimal": minimal, "case": None, "model": None, "simple_model": None}
    if not minimal:
        return out
    if _is_single_cycle(sys):
        out.update(case="i", model=f"C(T, M_{n}(C))", simple_model=False, orbit=list(periodic_cycles(sys)[0]))
    else:
        chain = _chain_order(sys)
        if chain is None:
            raise ConsistencyError("minimal finite system is neither a cycle nor a chain")
        out.update(case="ii", model=f"M_{n}(C)", simple_model=True, orbit=chain)
    return out


def simplicity_verdict(sys: PartialSystem) -> dict:
    require_well_positioned(sys)
    M = frozenset(sys.points)
    if not sys.canonical_Y:
        witness = YPair(M, M - sys.image)
        top = YPair(M, sys.Y)
        if witness not in y_pairs(sys) or witness == top:
            raise ConsistencyError("expected a proper Y-pair below (M, Y)")
        return {"simple": False, "reason": "Y is not M minus phi(Delta)",
                "witness": witness.to_json(sys), "top": top.to_json(sys)}
    cm = classify_minimal(sys)
    periodic_orbit = _is_single_cycle(sys)
    simple = cm["minimal"] and not periodic_orbit
    if not cm["minimal"]:
        reason = "not minimal"
    elif periodic_orbit:
        reason = "M is a single periodic orbit"
    else:
        reason = "minimal and M is not a periodic orbit"
    if simple and len(y_pairs(sys)) != 2:
        raise ConsistencyError("simple algebra with a nontrivial gauge-invariant ideal")
    return {"simple": simple, "reason": reason, "minimal": cm["minimal"]}


def gauge_ideal_lattice(sys: PartialSystem) -> dict:
    """Y-pairs, read as the gauge-invariant ideal lattice (inclusion reverses)."""
    pairs = y_pairs(sys)
    return {
        "pairs": [p.to_json(sys) for p in pairs],
        "ideal_count": len(pairs),
        "pair_order": [list(e) for e in pair_order(pairs)],
        "order_note": "pair i <= pair j iff ideal j <= ideal i",
        "all_ideals_gauge_invariant": not periodic_points(sys),
    }


def analyze_system(sys: PartialSystem, depth: int = 3) -> dict:
    report: dict = {
        "well_positioned": sys.well_positioned,
        "canonical_Y": sys.canonical_Y,
        "topologically_free": is_topologically_free(sys).to_json(),
        "invariant_sets": [sys.sort(s) for s in invariant_sets(sys)],
        "minimal": classify_minimal(sys),
    }
    if sys.well_positioned:
        report["topologically_free_outside_Y"] = is_top_free_outside_Y(sys).to_json()
        report["extension_finite"] = extension_is_finite(sys)
        report["y_pairs"] = [p.to_json(sys) for p in y_pairs(sys)]
        report["simplicity"] = simplicity_verdict(sys)
        report["gauge_ideals"] = gauge_ideal_lattice(sys)
        report["correspondence"] = {k: v for k, v in verify_invariance_correspondence(sys, depth).items()
                                    if k in ("injective", "surjective", "order_preserving", "closed_invariant_count")}
        report["periodic_extension_points"] = {
            str(n): len(extension_periodicity_check(sys, n)["F_tilde_n_isolated"])
            for n in range(1, len(sys.points) + 1)
        }
    return report
