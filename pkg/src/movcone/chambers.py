"""Chamber decompositions of the movable cone of ``X_F``.

All classes are written in the reference basis ``L, H`` of ``X_F``.  Rays
are listed left to right, meaning ``det(previous, next) < 0``; in this
order ``5H - L`` comes before ``H``, which comes before ``L - H``.

Which wall is crossed by which flop or involution, and with how many
curves, comes from the per-family scripts below.  Every number those
scripts rely on is recomputed from the profiles and checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .birational import (
    PushforwardMap,
    accumulation_rays,
    compose,
    determinantal_flop,
    flop_consistent,
    is_hyperbolic,
    primitive_curve,
    symmetry_solver,
)
from .errors import (
    ChamberVerificationError,
    ConeConjectureError,
    SolverError,
    UnrecognizedFibrationError,
)
from .exact import Mat2, QuadExt, det2
from .fano import SplitPair, require_cy
from .invariants import (
    E_SIDE,
    F_SIDE,
    H,
    L,
    CurveClass,
    DivClass,
    NumericalProfile,
    cubic_eval,
    exceptional_class,
    flop_update,
    hodge,
    nef_wall,
    octic_double_cover_nodes,
    profile,
)

DETERMINANTAL = "determinantal"
TYPE_I = "type_I"
TYPE_II = "type_II"
TYPE_III = "type_III"
K3_FIBRATION = "K3_fibration"
ELLIPTIC_FIBRATION = "elliptic_fibration"
DOUBLE_COVER_SMALL = "double_cover_small"
FINITE, INFINITE = "finite", "infinite"

_TARGETS = {
    TYPE_I: "nodal threefold",
    TYPE_II: "point",
    TYPE_III: "curve",
    K3_FIBRATION: "P1",
    ELLIPTIC_FIBRATION: "surface",
}

# curve counts of the scripted small walls
K3_CASE_FLOP_COUNT = 1
BORDIGA_FLOP_COUNT = 10
QUINTIC_FLOP_COUNT = 50


@dataclass(frozen=True)
class Model:
    id: str
    profile: NumericalProfile
    marking: Mat2
    nef_generators: tuple[DivClass, DivClass]
    provenance: str

    def __post_init__(self):
        if abs(self.marking.det()) != 1:
            raise ChamberVerificationError(f"{self.id}: marking is not unimodular")
        for g in self.nef_generators:
            if not g.is_integral() or g.primitive() != g:
                raise ChamberVerificationError(f"{self.id}: nef generator {g} is not primitive")
        if det2(self.nef_generators[0].vec, self.nef_generators[1].vec) >= 0:
            raise ChamberVerificationError(f"{self.id}: nef generators are not ordered left to right")

    @cached_property
    def marked(self) -> NumericalProfile:
        """The model's forms pulled back to the reference basis."""
        return self.profile.rebase(self.marking.inverse(), ("L", "H"))

    def to_json(self) -> dict:
        return {
            "model": self.id,
            "provenance": self.provenance,
            "nef": [g.to_json() for g in self.nef_generators],
            "marking": self.marking.as_int_rows(),
            "profile": self.profile.to_json(),
        }


@dataclass(frozen=True)
class Wall:
    divisor: DivClass
    kind: str
    data: dict = field(default_factory=dict)

    @property
    def small(self) -> bool:
        return self.kind in (TYPE_I, DETERMINANTAL)

    def to_json(self) -> dict:
        return {
            "class": str(self.divisor),
            "vector": self.divisor.to_json(),
            "kind": self.kind,
            "certificates": {k: _plain(v) for k, v in self.data.items()},
        }


def _plain(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, (DivClass, Mat2)):
        return str(v) if isinstance(v, DivClass) else v.as_int_rows()
    if isinstance(v, CurveClass):
        return [v.pairing_with_L, v.pairing_with_H]
    return v


@dataclass(frozen=True)
class Chamber:
    model: Model
    left: Wall
    right: Wall


@dataclass(frozen=True)
class MovableCone:
    case_id: str
    finiteness: str
    models: tuple[Model, ...]
    walls: tuple[Wall, ...]
    generator: Optional[PushforwardMap] = None
    boundary_rays: Optional[tuple[DivClass, DivClass]] = None
    spectral_radius: Optional[QuadExt] = None
    mirror: Optional[PushforwardMap] = None
    mirror_wall: Optional[Wall] = None

    @property
    def chambers(self) -> list[Chamber]:
        return [Chamber(m, self.walls[i], self.walls[i + 1]) for i, m in enumerate(self.models)]

    @property
    def fundamental_domain(self) -> tuple[DivClass, DivClass]:
        return (self.walls[0].divisor, self.walls[-1].divisor)

    @property
    def all_walls(self) -> list[Wall]:
        """Walls left to right, with the mirrored boundary first when there is one."""
        return ([self.mirror_wall] if self.mirror_wall else []) + list(self.walls)

    @property
    def boundary(self) -> tuple:
        if self.finiteness == INFINITE:
            return self.boundary_rays
        walls = self.all_walls
        return (walls[0].divisor, walls[-1].divisor)

    def to_json(self) -> dict:
        out = {
            "case": self.case_id,
            "finiteness": self.finiteness,
            "chambers": [
                {**c.model.to_json(), "walls": [c.left.to_json(), c.right.to_json()]}
                for c in self.chambers
            ],
            "walls": [w.to_json() for w in self.all_walls],
            "boundary": [_ray_json(r) for r in self.boundary],
            "boundary_text": [str(r) for r in self.boundary],
        }
        if self.generator is not None:
            out["generator"] = self.generator.to_json()
            out["generator_pullback"] = self.generator.pullback.as_int_rows()
            out["boundary_rays"] = [_ray_json(r) for r in self.boundary_rays]
            out["spectral_radius"] = self.spectral_radius.to_json()
        if self.mirror is not None:
            out["mirror"] = self.mirror.to_json()
        return out


def _ray_json(r: DivClass) -> list:
    return [c.to_json() if isinstance(c, QuadExt) else _plain(c) for c in r.vec]


def nef_cone(pair: SplitPair) -> tuple[DivClass, DivClass]:
    """``<H, L - (min a_i) H>`` on ``X_F``."""
    require_cy(pair)
    return (H, nef_wall(pair, F_SIDE))


def _numerically_zero_square(p: NumericalProfile, g: DivClass) -> bool:
    return cubic_eval(p, g, g, L) == 0 and cubic_eval(p, g, g, H) == 0


def classify_wall(m: Model, w: DivClass, exc: DivClass | None = None) -> Wall:
    """Contraction type of the boundary ray ``w`` of ``m``'s nef cone.

    Without an exceptional class a birational contraction is taken to be small.
    """
    p = m.marked
    g3 = cubic_eval(p, w, w, w)
    cert: dict = {"G3": g3, "c2G": p.c2(w), "model": m.id}
    if g3 < 0:
        raise ChamberVerificationError(f"{w} has negative cube on {m.id}; it is not nef there")
    if g3 == 0:
        if not _numerically_zero_square(p, w):
            cert["G2H"] = cubic_eval(p, w, w, H)
            cert["G2L"] = cubic_eval(p, w, w, L)
            kind = ELLIPTIC_FIBRATION
        elif p.c2(w) == 24:
            kind = K3_FIBRATION
        else:
            raise UnrecognizedFibrationError(f"{w} on {m.id}: square zero but c2 pairing {p.c2(w)}")
        cert["target"] = _TARGETS[kind]
        return Wall(w, kind, cert)
    if exc is None:
        kind = TYPE_I
    else:
        g2s, gs2 = cubic_eval(p, w, w, exc), cubic_eval(p, w, exc, exc)
        cert.update({"S": exc, "G2S": g2s, "GS2": gs2})
        if g2s > 0:
            kind = TYPE_I
        elif g2s == 0 and gs2 == 0:
            kind = TYPE_II
        elif g2s == 0 and gs2 < 0:
            kind = TYPE_III
        else:
            raise ChamberVerificationError(f"{w} on {m.id}: G^2 S = {g2s}, G S^2 = {gs2}")
    if kind == TYPE_I and g3 == 2:
        cert[DOUBLE_COVER_SMALL] = True
    cert["target"] = _TARGETS[kind]
    return Wall(w, kind, cert)


def _expect(wall: Wall, kind: str, case_id: str) -> Wall:
    if wall.kind != kind:
        raise ChamberVerificationError(f"{case_id}: wall {wall.divisor} is {wall.kind}, expected {kind}")
    return wall


def _with(wall: Wall, **extra) -> Wall:
    return Wall(wall.divisor, wall.kind, {**wall.data, **extra})


def _side_models(pair: SplitPair) -> tuple[Model, Model, PushforwardMap]:
    pF, pE = profile(pair, F_SIDE), profile(pair, E_SIDE)
    chi = determinantal_flop(pF, pE, pair.base)
    if not flop_consistent(pF, pE, chi):
        raise ChamberVerificationError(f"{pair.case_id}: determinantal flop does not transport the forms")
    ident = Mat2.identity()
    x_f = Model("X_F", pF, ident, nef_cone(pair), F_SIDE)
    to_ref = chi.matrix.inverse().relabel(pE.basis_labels, ("L", "H"))
    e_wall = DivClass(*to_ref.apply(nef_wall(pair, E_SIDE).vec))
    x_e = Model("X_E", pE, to_ref, (e_wall, H), E_SIDE)
    return x_f, x_e, chi


def _determinantal_wall(pair: SplitPair, x_f: Model, chi: PushforwardMap) -> Wall:
    return Wall(
        H,
        DETERMINANTAL,
        {"G3": cubic_eval(x_f.marked, H, H, H), "odp": x_f.profile.odp, "chi": chi.matrix,
         "target": "determinantal hypersurface"},
    )


def _exc_in_ref(pair: SplitPair, side: str, model: Model) -> DivClass | None:
    twists = pair.f_twists if side == F_SIDE else pair.e_twists
    if max(twists) == min(twists):
        return None
    own = exceptional_class(pair, side)
    return DivClass(*model.marking.apply(own.vec))


def _build_two_chamber(pair: SplitPair) -> MovableCone:
    x_f, x_e, chi = _side_models(pair)
    left = classify_wall(x_e, x_e.nef_generators[0], _exc_in_ref(pair, E_SIDE, x_e))
    right = classify_wall(x_f, x_f.nef_generators[1], _exc_in_ref(pair, F_SIDE, x_f))
    for w in (left, right):
        if w.small:
            raise ChamberVerificationError(f"{pair.case_id}: boundary wall {w.divisor} is small")
    walls = (left, _determinantal_wall(pair, x_f, chi), right)
    return MovableCone(pair.case_id, FINITE, (x_e, x_f), walls)


def _flopped(source: Model, wall: DivClass, count: int, far: DivClass, name: str) -> tuple[Model, CurveClass]:
    """Flop ``count`` curves of the class killed by ``wall`` on the reference frame."""
    interior = source.nef_generators[0] + source.nef_generators[1]
    curve = primitive_curve(wall, interior)
    p = flop_update(source.marked, curve, count)
    p = NumericalProfile(p.cubic, p.c2_form, count, ("L+", "H+"))
    return Model(name, p, Mat2(((1, 0), (0, 1)), ("L+", "H+"), ("L", "H")), (wall, far), "flopped"), curve


def _build_k3_flop(pair: SplitPair) -> MovableCone:
    x_f, x_e, chi = _side_models(pair)
    s = _exc_in_ref(pair, F_SIDE, x_f)
    left = _expect(classify_wall(x_e, x_e.nef_generators[0]), ELLIPTIC_FIBRATION, pair.case_id)
    mid = _expect(classify_wall(x_f, x_f.nef_generators[1], s), TYPE_I, pair.case_id)
    far = DivClass(1, -2)
    x_plus, curve = _flopped(x_f, mid.divisor, K3_CASE_FLOP_COUNT, far, "X_F+")
    mid = _with(mid, resolution="flop", curve=curve, count=K3_CASE_FLOP_COUNT)
    right = _expect(classify_wall(x_plus, far), K3_FIBRATION, pair.case_id)
    walls = (left, _determinantal_wall(pair, x_f, chi), mid, right)
    return MovableCone(pair.case_id, FINITE, (x_e, x_f, x_plus), walls)


def _build_bordiga(pair: SplitPair) -> MovableCone:
    x_f, x_e, chi = _side_models(pair)
    iota_e = symmetry_solver(x_e.profile, nef_wall(pair, E_SIDE), "X_E")
    if iota_e is None:
        raise SolverError(f"{pair.case_id}: no involution fixes the E-side wall")
    psi = compose([chi.inverse(), iota_e, chi])

    left = _expect(classify_wall(x_e, x_e.nef_generators[0]), TYPE_I, pair.case_id)
    if not left.data.get(DOUBLE_COVER_SMALL):
        raise ChamberVerificationError(f"{pair.case_id}: {left.divisor} is not a double cover wall")
    nodes = octic_double_cover_nodes(hodge(pair).euler)
    left = _with(left, resolution="involution", matrix=iota_e.matrix, odp=nodes)

    s = _exc_in_ref(pair, F_SIDE, x_f)
    mid = _expect(classify_wall(x_f, x_f.nef_generators[1], s), TYPE_I, pair.case_id)
    far = DivClass(4, -5)
    x_plus, curve = _flopped(x_f, mid.divisor, BORDIGA_FLOP_COUNT, far, "X_F+")
    mid = _with(mid, resolution="flop", curve=curve, count=BORDIGA_FLOP_COUNT)
    right = _expect(classify_wall(x_plus, far, s), TYPE_II, pair.case_id)

    # the mirror image of the far wall bounds the cone on the other side
    mirror_model = Model(
        "psi(X_F+)", x_plus.profile, (psi.matrix @ x_plus.marking).relabel(("L+", "H+"), ("L", "H")),
        _ordered(psi(x_plus.nef_generators[0]), psi(far)), "mirror",
    )
    mirror_wall = _expect(classify_wall(mirror_model, psi(far), psi(s)), TYPE_II, pair.case_id)
    walls = (left, _determinantal_wall(pair, x_f, chi), mid, right)
    return MovableCone(pair.case_id, FINITE, (x_e, x_f, x_plus), walls, mirror=psi, mirror_wall=mirror_wall)


def _ordered(a: DivClass, b: DivClass) -> tuple[DivClass, DivClass]:
    a, b = a.primitive(), b.primitive()
    return (a, b) if det2(a.vec, b.vec) < 0 else (b, a)


def _build_quintic(pair: SplitPair) -> MovableCone:
    x_f, x_e, chi = _side_models(pair)
    pF, pE = x_f.profile, x_e.profile
    # flops over the non-H walls are determinantal flops in a rebased frame
    frame_f = Mat2.from_columns((1, 0), (1, -1))
    frame_e = Mat2.from_columns((1, 1), (1, 0), pE.basis_labels, pE.basis_labels)
    flop_f = _frame_flop(pF, pE, frame_f, pair)
    flop_e = _frame_flop(pE, pE, frame_e, pair)

    far = DivClass(4, -5)
    x_plus, curve = _flopped(x_f, DivClass(1, -1), pF.odp, far, "X+")
    own_plus = pE.rebase(flop_f)
    if not own_plus.same_forms(x_plus.marked):
        raise ChamberVerificationError("flop over L - H disagrees with the rebased determinantal flop")

    candidates = []
    for ident in (Mat2(((1, 0), (0, 1))), Mat2(((0, 1), (1, 0)))):
        m = flop_f.inverse() @ ident @ flop_e @ chi.matrix
        if m.is_integral() and is_hyperbolic(m):
            candidates.append(m)
    if len(candidates) != 1:
        raise SolverError(f"expected one hyperbolic identification, found {len(candidates)}")
    rho = PushforwardMap(candidates[0].relabel(("L", "H"), ("L", "H")), "X_F", "X_F", "composite")

    left = _expect(classify_wall(x_e, x_e.nef_generators[0]), TYPE_I, pair.case_id)
    mid = _expect(classify_wall(x_f, x_f.nef_generators[1]), TYPE_I, pair.case_id)
    right = _expect(classify_wall(x_plus, far), TYPE_I, pair.case_id)
    left = _with(left, resolution="determinantal_flop", odp=pE.odp)
    mid = _with(mid, resolution="flop", curve=curve, count=pF.odp)
    right = _with(right, resolution="generator", odp=pF.odp)
    if QUINTIC_FLOP_COUNT != pF.odp:
        raise ChamberVerificationError(f"quintic walls carry {pF.odp} nodes, expected {QUINTIC_FLOP_COUNT}")
    walls = (left, _determinantal_wall(pair, x_f, chi), mid, right)
    return _infinite(pair, (x_e, x_f, x_plus), walls, rho)


def _frame_flop(p_src: NumericalProfile, p_tgt: NumericalProfile, frame: Mat2, pair: SplitPair) -> Mat2:
    """Reference coordinates to the flopped model's frame coordinates."""
    rebased = p_src.rebase(frame)
    flop = determinantal_flop(rebased, p_tgt, pair.base)
    if not flop_consistent(rebased, p_tgt, flop):
        raise ChamberVerificationError("rebased determinantal flop does not transport the forms")
    return (flop.matrix @ frame.inverse()).relabel(frame.domain, ("L+", "H+"))


def _build_gr24(pair: SplitPair) -> MovableCone:
    x_f, x_e, chi = _side_models(pair)
    iota_f = symmetry_solver(x_f.profile, nef_wall(pair, F_SIDE), "X_F")
    iota_e = symmetry_solver(x_e.profile, nef_wall(pair, E_SIDE), "X_E")
    if iota_f is None or iota_e is None:
        raise SolverError(f"{pair.case_id}: missing involution")
    theta = compose([chi.inverse(), iota_e, chi])
    rho = compose([iota_f, theta])

    th = theta.matrix
    tx_f = Model("theta(X_F)", x_f.profile, th, _ordered(theta(x_f.nef_generators[1]), theta(H)), F_SIDE)
    tx_e = Model("theta(X_E)", x_e.profile, th @ x_e.marking, _ordered(theta(H), x_e.nef_generators[0]), E_SIDE)

    walls = []
    w0 = _expect(classify_wall(tx_f, tx_f.nef_generators[0]), TYPE_I, pair.case_id)
    walls.append(_with(w0, resolution="generator"))
    walls.append(Wall(theta(H), DETERMINANTAL, {"G3": cubic_eval(tx_f.marked, theta(H), theta(H), theta(H)),
                                                 "odp": x_f.profile.odp, "target": "determinantal hypersurface"}))
    w2 = _expect(classify_wall(x_e, x_e.nef_generators[0]), TYPE_I, pair.case_id)
    walls.append(_with(w2, resolution="involution", matrix=iota_e.matrix))
    walls.append(_determinantal_wall(pair, x_f, chi))
    w4 = _expect(classify_wall(x_f, x_f.nef_generators[1]), TYPE_I, pair.case_id)
    walls.append(_with(w4, resolution="involution", matrix=iota_f.matrix))
    for w in (walls[0], walls[2], walls[4]):
        if not w.data.get(DOUBLE_COVER_SMALL):
            raise ChamberVerificationError(f"{pair.case_id}: {w.divisor} is not a double cover wall")
    return _infinite(pair, (tx_f, tx_e, x_e, x_f), tuple(walls), rho)


def _infinite(pair: SplitPair, models, walls, rho: PushforwardMap) -> MovableCone:
    left, right = walls[0].divisor, walls[-1].divisor
    back = DivClass(*rho.pullback.apply(right.vec))
    if back != left:
        raise ChamberVerificationError(f"{pair.case_id}: generator sends {right} to {back}, not {left}")
    interior = left + right
    rays, radius = accumulation_rays(rho.pullback, interior)
    return MovableCone(pair.case_id, INFINITE, tuple(models), tuple(walls), rho, rays, radius)


_SCRIPTS = {
    ("P4", (1, 1, 1, 1, 1)): _build_quintic,
    ("Gr24", (1, 1, 1, 1)): _build_gr24,
    ("P4", (2, 1, 1, 1)): _build_bordiga,
    ("P4", (2, 2, 1)): _build_k3_flop,
}


def build_movable(pair: SplitPair) -> MovableCone:
    require_cy(pair)
    builder = _SCRIPTS.get((pair.base.id, pair.f_twists), _build_two_chamber)
    return builder(pair)


def _strictly_left_to_right(rays) -> bool:
    return all(_orient(a, b) < 0 for a, b in zip(rays, rays[1:]))


def _orient(a: DivClass, b: DivClass) -> int:
    value = det2(a.vec, b.vec)
    if isinstance(value, QuadExt):
        return value.sign()
    return (value > 0) - (value < 0)


def _check_tiles(mc: MovableCone) -> None:
    for c in mc.chambers:
        if c.model.nef_generators != (c.left.divisor.primitive(), c.right.divisor.primitive()):
            raise ConeConjectureError(f"{c.model.id}: nef cone does not match its walls")
    rays = [w.divisor for w in mc.walls]
    if not _strictly_left_to_right(rays):
        raise ConeConjectureError(f"{mc.case_id}: chamber walls overlap")


def verify_cone_conjecture(mc: MovableCone, depth: int = 10) -> dict:
    """Check that the tiles have disjoint interiors and cover the cone as claimed."""
    if depth < 1:
        raise ValueError("depth must be positive")
    _check_tiles(mc)
    report = {"case": mc.case_id, "finiteness": mc.finiteness, "tiles": len(mc.models)}
    if mc.finiteness == FINITE:
        rays = [w.divisor for w in mc.walls]
        if mc.mirror is not None:
            pivot = rays[0]
            if mc.mirror(pivot) != pivot:
                raise ConeConjectureError(f"{mc.case_id}: mirror does not fix {pivot}")
            if (mc.mirror.matrix @ mc.mirror.matrix) != Mat2.identity():
                raise ConeConjectureError(f"{mc.case_id}: mirror is not an involution")
            rays = [mc.mirror(r) for r in reversed(rays[1:])] + rays
            report["mirror_tiles"] = len(mc.models)
        if not _strictly_left_to_right(rays) or _orient(rays[0], rays[-1]) >= 0:
            raise ConeConjectureError(f"{mc.case_id}: tiles do not form a strictly convex cone")
        for w in (mc.all_walls[0], mc.all_walls[-1]):
            if w.small:
                raise ConeConjectureError(f"{mc.case_id}: boundary wall {w.divisor} is small")
        report["rays"] = [str(r) for r in rays]
        report["ok"] = True
        return report

    g = mc.generator.pullback
    left_ray, right_ray = mc.boundary_rays
    tile = [w.divisor for w in mc.walls[:-1]]
    rays: list[DivClass] = []
    # g moves tiles to the left, so higher powers come first
    for k in range(depth, -depth - 1, -1):
        step = g**k
        rays.extend(r.pushforward(step) for r in tile)
    rays.append(mc.walls[-1].divisor.pushforward(g**-depth))
    if not _strictly_left_to_right(rays):
        raise ConeConjectureError(f"{mc.case_id}: translates overlap within depth {depth}")
    if _orient(left_ray, rays[0]) >= 0 or _orient(rays[-1], right_ray) >= 0:
        raise ConeConjectureError(f"{mc.case_id}: translates leave the accumulation cone")
    ends = rays[:: len(tile)]
    _check_convergence(ends[: depth + 1], left_ray, mc.case_id)
    _check_convergence(list(reversed(ends[depth + 1:])), right_ray, mc.case_id)
    report.update({"depth": depth, "translates": 2 * depth + 1, "rays_checked": len(rays), "ok": True})
    return report


def _slope_gap(r: DivClass, limit: DivClass):
    """``|slope(r) - slope(limit)|`` with slope ``H / L``."""
    gap = r.coeff_H / r.coeff_L - limit.coeff_H / limit.coeff_L
    return gap if gap.sign() >= 0 else -gap


def _check_convergence(seq: list[DivClass], limit: DivClass, case_id: str) -> None:
    """Gaps to the limit shrink strictly as the sequence approaches ``limit``."""
    gaps = [_slope_gap(r, limit) for r in reversed(seq)]
    if not all((a - b).sign() > 0 for a, b in zip(gaps, gaps[1:])):
        raise ConeConjectureError(f"{case_id}: translates do not approach {limit} monotonically")
