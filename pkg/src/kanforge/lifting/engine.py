"""RLP decision engine: extension search, boundary enumeration, fibrancy reports."""

import time

import numpy as np

from ..fincat.category import CategoryError, FunctorData
from ..fincat.poset import poset_as_category
from ..sdposet import retraction, sd_delta, sd_horn
from .kernel import (
    STATUS_BUDGET,
    STATUS_EXHAUSTED,
    STATUS_FOUND,
    STATUS_TRUNCATED,
    search_kernel,
)
from .problem import (
    BUDGET,
    DEFAULT_BUDGET,
    EXHAUSTED,
    FILLED,
    FibrancyReport,
    HornReport,
    LiftReport,
)

DEFAULT_BOUNDARY_CAP = 10_000


class PosetBattery:
    """Reusable search arrays for functors from a fixed poset into a category.

    Elements are reindexed into a linear extension once; individual
    problems only swap the fixed-assignment arrays.
    """

    def __init__(self, poset, target):
        self.poset = poset
        self.target = target
        order = poset.topological_order()
        self.order = order                       # position -> original index
        self.pos = {orig: p for p, orig in enumerate(order)}
        n = poset.n
        self.leq = poset.leq[np.ix_(order, order)].astype(np.int8)
        var_elt, var_src = [], []
        for j in range(n):
            var_elt.append(j)
            var_src.append(-1)
            for i in range(j):
                if self.leq[i, j] and not any(
                        self.leq[i, z] and self.leq[z, j] and z != i and z != j
                        for z in range(i + 1, j)):
                    var_elt.append(j)
                    var_src.append(i)
        self.var_elt = np.array(var_elt, dtype=np.int64)
        self.var_src = np.array(var_src, dtype=np.int64)
        self.hom_off, self.hom_flat = target.hom_arrays()

    def blank_fixed(self):
        n = self.poset.n
        return (np.full(n, -1, dtype=np.int64),
                np.full((n, n), -1, dtype=np.int64))

    def run(self, fixed_obj, fixed_mor, budget, mode=0, max_out=1):
        n = self.poset.n
        out_obj = np.empty((max_out, n), dtype=np.int64)
        out_mor = np.empty((max_out, n, n), dtype=np.int64)
        status, nodes, found = search_kernel(
            self.leq, self.var_elt, self.var_src, fixed_obj, fixed_mor,
            self.target.dom, self.target.cod, self.target.comp,
            self.target.ident, self.hom_off, self.hom_flat,
            np.int64(self.target.n_obj), np.int64(budget), np.int64(mode),
            out_obj, out_mor)
        return int(status), int(nodes), int(found), out_obj, out_mor

    def functor_from_solution(self, sol_obj, sol_mor):
        "rebuild a FunctorData on poset_as_category(poset) from kernel output"
        shape = poset_as_category(self.poset)
        n = self.poset.n
        obj_map = np.empty(n, dtype=np.int64)
        for p, orig in enumerate(self.order):
            obj_map[orig] = sol_obj[p]
        mor_map = np.empty(shape.n_mor, dtype=np.int64)
        for (i, j), mid in shape.pair_id.items():
            mor_map[mid] = sol_mor[self.pos[i], self.pos[j]]
        return FunctorData(shape, self.target, obj_map, mor_map)

    def fixed_from_functor(self, indices, functor, sub_shape=None):
        """Fixed arrays from a functor defined on the subposet at `indices`.

        `functor` maps poset_as_category(subposet) -> target; `indices[i]`
        is the poset index of subposet element i.
        """
        fixed_obj, fixed_mor = self.blank_fixed()
        shape = sub_shape or functor.source
        sub = shape.poset
        for a in range(sub.n):
            fixed_obj[self.pos[indices[a]]] = functor.obj(a)
        for (a, b), mid in shape.pair_id.items():
            fixed_mor[self.pos[indices[a]], self.pos[indices[b]]] = functor.mor(mid)
        return fixed_obj, fixed_mor

    def fixed_from_arrays(self, indices_pos, sub_obj, sub_mor):
        "fixed arrays from kernel-style (obj row, mor matrix) on a subposet"
        fixed_obj, fixed_mor = self.blank_fixed()
        m = len(indices_pos)
        for a in range(m):
            fixed_obj[indices_pos[a]] = sub_obj[a]
        for a in range(m):
            for b in range(m):
                if sub_mor[a, b] >= 0:
                    fixed_mor[indices_pos[a], indices_pos[b]] = sub_mor[a, b]
        return fixed_obj, fixed_mor


_STATUS_NAME = {STATUS_EXHAUSTED: EXHAUSTED, STATUS_FOUND: FILLED,
                STATUS_BUDGET: BUDGET}


def extend_functor(problem, budget=DEFAULT_BUDGET):
    """Complete backtracking search for an extension of the partial functor.

    Exhausted is a proof of non-existence; Budget is inconclusive.  Every
    Filled result is re-validated and checked to restrict to the input.
    """
    battery = PosetBattery(problem.domain_poset, problem.ambient)
    fixed_obj, fixed_mor = battery.fixed_from_functor(
        problem.subposet, problem.partial_functor)
    t0 = time.perf_counter()
    status, nodes, found, out_obj, out_mor = battery.run(fixed_obj, fixed_mor, budget)
    elapsed = time.perf_counter() - t0
    if status != STATUS_FOUND:
        return LiftReport(_STATUS_NAME[status], None, nodes, elapsed)
    functor = battery.functor_from_solution(out_obj[0], out_mor[0]).validate()
    _assert_restricts(functor, problem)
    return LiftReport(FILLED, functor, nodes, elapsed)


def _assert_restricts(functor, problem):
    part = problem.partial_functor
    sub = part.source.poset
    shape = functor.source
    for a in range(sub.n):
        if functor.obj(problem.subposet[a]) != part.obj(a):
            raise CategoryError("filler does not restrict to the boundary")
    for (a, b), mid in part.source.pair_id.items():
        big = shape.pair_id[(problem.subposet[a], problem.subposet[b])]
        if functor.mor(big) != part.mor(mid):
            raise CategoryError("filler does not restrict to the boundary")


def enumerate_poset_functors(poset, target, cap, battery=None):
    """First `cap` functors poset -> target in lexicographic search order.

    Returns (complete, sol_obj, sol_mor, count); complete is False when the
    cap truncated the enumeration.
    """
    battery = battery or PosetBattery(poset, target)
    fixed_obj, fixed_mor = battery.blank_fixed()
    status, nodes, found, out_obj, out_mor = battery.run(
        fixed_obj, fixed_mor, budget=0, mode=1, max_out=cap)
    return status == STATUS_EXHAUSTED, out_obj[:found], out_mor[:found], found


# ---------------------------------------------------------------------------
# level-0 horns: fundamental categories of undivided horns
# ---------------------------------------------------------------------------

def _free_two_arrow(k):
    "fundamental category of the 2-horn at vertex k"
    objs = ["0", "1", "2"]
    ids = [("id0", "0", "0"), ("id1", "1", "1"), ("id2", "2", "2")]
    idmap = {"0": "id0", "1": "id1", "2": "id2"}
    comp = [("id%d" % i, "id%d" % i, "id%d" % i) for i in range(3)]
    if k == 0:
        mors = ids + [("e01", "0", "1"), ("e02", "0", "2")]
        pairs = {"e01": ("0", "1"), "e02": ("0", "2")}
    elif k == 2:
        mors = ids + [("e02", "0", "2"), ("e12", "1", "2")]
        pairs = {"e02": ("0", "2"), "e12": ("1", "2")}
    else:
        mors = ids + [("e01", "0", "1"), ("e12", "1", "2"), ("e02", "0", "2")]
        pairs = {"e01": ("0", "1"), "e12": ("1", "2"), "e02": ("0", "2")}
        comp.append(("e01", "e12", "e02"))
    for nm, d, c in mors[3:]:
        comp.append((idmap[d], nm, nm))
        comp.append((nm, idmap[c], nm))
    from ..fincat.category import build_category
    cat = build_category(objs, mors, idmap, comp, name="cHorn%d[2]" % k)
    return cat, pairs


def _chain_pairs(n):
    return {"e%d%d" % (i, j): (str(i), str(j))
            for i in range(n + 1) for j in range(i + 1, n + 1)}


def _chain_like(n, extra=None, drop_relation=None, name=""):
    """[n] as a free-ish category, optionally with one doubled hom.

    `extra` = (name, i, j): an additional generator alongside e_ij; the
    composition table is completed through the remaining face relations.
    """
    from ..fincat.category import build_category
    objs = [str(i) for i in range(n + 1)]
    idmap = {str(i): "id%d" % i for i in range(n + 1)}
    mors = [("id%d" % i, str(i), str(i)) for i in range(n + 1)]
    pairs = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            nm = "e%d%d" % (i, j)
            mors.append((nm, str(i), str(j)))
            pairs[nm] = (str(i), str(j))
    if extra:
        nm, i, j = extra
        mors.append((nm, str(i), str(j)))
        pairs[nm] = (str(i), str(j))
    comp = [("id%d" % i, "id%d" % i, "id%d" % i) for i in range(n + 1)]
    for nm, d, c in mors[n + 1:]:
        comp.append((idmap[d], nm, nm))
        comp.append((nm, idmap[c], nm))
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for l in range(j + 1, n + 1):
                if drop_relation == (i, j, l):
                    comp.append(("e%d%d" % (i, j), "e%d%d" % (j, l), extra[0]))
                else:
                    comp.append(("e%d%d" % (i, j), "e%d%d" % (j, l), "e%d%d" % (i, l)))
    if extra:
        nm, i, j = extra
        # the doubled arrow composes like e_ij on either side
        for l in range(int(j) + 1, n + 1):
            comp.append((nm, "e%d%d" % (j, l), "e%d%d" % (i, l)))
        for l in range(0, int(i)):
            comp.append(("e%d%d" % (l, i), nm, "e%d%d" % (l, j)))
    cat = build_category(objs, mors, idmap, comp, name=name)
    return cat, pairs


def horn_zero_category(n, k):
    """Fundamental category of the horn Λ^k[n] plus its map to the chain [n].

    Hardcoded: a point for n = 1; the three free two-arrow categories for
    n = 2; [n] with one doubled hom for the outer 3-horns; [n] itself for
    the inner 3-horns and all n >= 4.  Returns (cat, obj_to_vertex,
    mor_to_chain_pair) with pairs as (i, j) vertex indices, None for
    identities.
    """
    from ..fincat.category import build_category
    if n == 1:
        cat = build_category(["0"], [("id0", "0", "0")], {"0": "id0"},
                             [("id0", "id0", "id0")], name="cHorn%d[1]" % k)
        return cat, [k], {0: None}
    if n == 2:
        cat, pairs = _free_two_arrow(k)
    elif n == 3 and k == 0:
        cat, pairs = _chain_like(3, extra=("q13", 1, 3), drop_relation=(1, 2, 3),
                                 name="cHorn0[3]")
        pairs = dict(pairs)
    elif n == 3 and k == 3:
        cat, pairs = _chain_like(3, extra=("q02", 0, 2), drop_relation=(0, 1, 2),
                                 name="cHorn3[3]")
        pairs = dict(pairs)
    else:
        cat, pairs = _chain_like(n, name="cHorn%d[%d]" % (k, n))
    obj_to_vertex = [int(o) for o in cat.obj_names]
    mor_to_pair = {}
    for m in range(cat.n_mor):
        nm = cat.mor_names[m]
        if nm in pairs:
            d, c = pairs[nm]
            mor_to_pair[m] = (int(d), int(c))
        elif nm.startswith("q"):
            mor_to_pair[m] = (int(nm[1]), int(nm[2]))
        else:
            mor_to_pair[m] = None
    return cat, obj_to_vertex, mor_to_pair


def enumerate_cat_functors(source, target, cap):
    """Functors between finite categories by backtracking over generators.

    Yields FunctorData in deterministic order, at most `cap` of them.
    """
    n_mor = source.n_mor
    idents = set(int(i) for i in source.ident)
    gens = []
    factor = {}
    for m in range(n_mor):
        if m in idents:
            continue
        fac = None
        for f in range(n_mor):
            if f in idents or source.cod[f] != source.dom[m]:
                continue
            for g in range(n_mor):
                if g in idents:
                    continue
                if source.comp[f, g] == m and f != m and g != m:
                    fac = (f, g)
                    break
            if fac:
                break
        if fac is None:
            gens.append(m)
        else:
            factor[m] = fac
    count = 0
    obj_img = [-1] * source.n_obj
    mor_img = [-1] * n_mor

    def derive():
        for o in range(source.n_obj):
            mor_img[int(source.ident[o])] = int(target.ident[obj_img[o]])
        pending = list(factor)
        while pending:
            rest = []
            for m in pending:
                f, g = factor[m]
                if mor_img[f] >= 0 and mor_img[g] >= 0:
                    h = target.comp[mor_img[f], mor_img[g]]
                    if h < 0:
                        return False
                    mor_img[m] = int(h)
                else:
                    rest.append(m)
            if len(rest) == len(pending):
                return False
            pending = rest
        return True

    def assign_gens(pos):
        nonlocal count
        if count >= cap:
            return
        if pos == len(gens):
            if derive():
                F = FunctorData(source, target,
                                np.array(obj_img), np.array(mor_img))
                if F.is_valid():
                    count += 1
                    yield F
            return
        m = gens[pos]
        a, b = obj_img[int(source.dom[m])], obj_img[int(source.cod[m])]
        for img in target.hom(a, b):
            mor_img[m] = img
            yield from assign_gens(pos + 1)
            mor_img[m] = -1

    def assign_objs(pos):
        if pos == source.n_obj:
            yield from assign_gens(0)
            return
        for o in range(target.n_obj):
            obj_img[pos] = o
            yield from assign_objs(pos + 1)
            obj_img[pos] = -1

    yield from assign_objs(0)


def _extend_zero_level(battery, horn_cat, obj_to_vertex, mor_to_pair, F, budget):
    "push the horn functor onto the chain poset and search the free part"
    chain = battery.poset
    fixed_obj, fixed_mor = battery.blank_fixed()
    for o in range(horn_cat.n_obj):
        pos = battery.pos[obj_to_vertex[o]]
        if fixed_obj[pos] not in (-1, F.obj(o)):
            return LiftReport(EXHAUSTED, None, 0, 0.0)
        fixed_obj[pos] = F.obj(o)
    for m in range(horn_cat.n_mor):
        pair = mor_to_pair[m]
        if pair is None:
            continue
        i, j = battery.pos[pair[0]], battery.pos[pair[1]]
        if fixed_mor[i, j] not in (-1, F.mor(m)):
            return LiftReport(EXHAUSTED, None, 0, 0.0)  # image collapses a doubled hom
        fixed_mor[i, j] = F.mor(m)
    status, nodes, found, out_obj, out_mor = battery.run(fixed_obj, fixed_mor, budget)
    if status != STATUS_FOUND:
        return LiftReport(_STATUS_NAME[status], None, nodes, 0.0)
    functor = battery.functor_from_solution(out_obj[0], out_mor[0]).validate()
    return LiftReport(FILLED, functor, nodes, 0.0)


def _horn_shapes(level, n, k):
    "returns (horn poset, delta poset, inclusion array) at subdivision `level`"
    horn, incl = sd_horn(n, k, level)
    delta = sd_delta(n, level)
    return horn, delta, incl


def fibrancy_report(c, level, n_max, budget=DEFAULT_BUDGET,
                    boundary_cap=DEFAULT_BOUNDARY_CAP, probes=True,
                    collect_fillers=False):
    """Per-(n, k) horn extension report for the category c at a given level.

    Level 0 uses the hardcoded fundamental horn categories; level 1 seeds
    each horn with the span/equalizer probe diagrams before generic
    enumeration (those probes are exactly what makes a failed calculus of
    fractions visible at desk scale); level 2 uses the double subdivision.
    Budget exhaustion is reported per horn, never silently dropped.
    """
    if level not in (0, 1, 2):
        raise ValueError("level must be 0, 1 or 2")
    report = FibrancyReport(c.name, level, n_max, budget, boundary_cap)
    for n in range(1, n_max + 1):
        for k in range(n + 1):
            report.add(_horn_run(c, level, n, k, budget, boundary_cap, probes,
                                 collect_fillers))
    return report


def _horn_run(c, level, n, k, budget, boundary_cap, probes, collect_fillers):
    from ..fincat.io import functor_to_dict
    rep = HornReport(n, k)
    if level == 0:
        horn_cat, obj_to_vertex, mor_to_pair = horn_zero_category(n, k)
        from ..fincat.poset import chain_poset
        battery = PosetBattery(chain_poset(n), c)
        for F in enumerate_cat_functors(horn_cat, c, boundary_cap):
            rep.boundaries_checked += 1
            lift = _extend_zero_level(battery, horn_cat, obj_to_vertex,
                                      mor_to_pair, F, budget)
            rep.nodes += lift.nodes_explored
            if lift.status == EXHAUSTED:
                rep.status = EXHAUSTED
                rep.witness_boundary = functor_to_dict(F)
                return rep
            if lift.status == BUDGET:
                rep.status = BUDGET
                return rep
            if rep.sample_filler is None and collect_fillers:
                rep.sample_filler = functor_to_dict(lift.functor)
        return rep

    horn, delta, incl = _horn_shapes(level, n, k)
    battery = PosetBattery(delta, c)
    horn_battery = PosetBattery(horn, c)
    incl_pos = [battery.pos[int(i)] for i in incl]
    horn_shape = poset_as_category(horn)

    def attempt(fixed_obj, fixed_mor):
        status, nodes, found, out_obj, out_mor = battery.run(
            fixed_obj, fixed_mor, budget)
        rep.nodes += nodes
        return status, out_obj, out_mor

    if probes and level == 1 and n in (2, 3):
        from ..fractions import horn_probe_boundaries
        for F in horn_probe_boundaries(c, n, k):
            rep.probes_checked += 1
            fixed = battery.fixed_from_functor([int(i) for i in incl], F,
                                               sub_shape=horn_shape)
            status, out_obj, out_mor = attempt(*fixed)
            if status == STATUS_EXHAUSTED:
                rep.status = EXHAUSTED
                rep.witness_boundary = functor_to_dict(F)
                return rep
            if status == STATUS_BUDGET:
                rep.status = BUDGET
                return rep

    complete, sols_obj, sols_mor, found = enumerate_poset_functors(
        horn, c, boundary_cap, battery=horn_battery)
    rep.truncated = not complete
    horn_pos_of_sub = [battery.pos[int(incl[horn_battery.order[p]])]
                       for p in range(horn.n)]
    for idx in range(found):
        rep.boundaries_checked += 1
        fixed = battery.fixed_from_arrays(horn_pos_of_sub,
                                          sols_obj[idx], sols_mor[idx])
        status, out_obj, out_mor = attempt(*fixed)
        if status == STATUS_EXHAUSTED:
            rep.status = EXHAUSTED
            F = horn_battery.functor_from_solution(sols_obj[idx], sols_mor[idx])
            rep.witness_boundary = functor_to_dict(F)
            return rep
        if status == STATUS_BUDGET:
            rep.status = BUDGET
            return rep
        if rep.sample_filler is None and collect_fillers:
            filler = battery.functor_from_solution(out_obj[0], out_mor[0])
            rep.sample_filler = functor_to_dict(filler)
    return rep


def rlp_via_kcone(c, n, budget=DEFAULT_BUDGET, boundary_cap=DEFAULT_BOUNDARY_CAP,
                  boundary=None):
    """Test RLP against c Sd² Λⁿ[n] → K(c Sd² Λⁿ[n]) via the retraction.

    Each boundary is extended over the embedded subposet 𝒫; the filler is
    transported along the retraction to the full c Sd² Δ[n] problem and the
    outcome is checked to agree with the direct search.  Returns a
    LiftReport for a single `boundary`, else a HornReport over enumerated
    boundaries.
    """
    from ..sdposet import p_embedding
    horn, incl = sd_horn(n, n, 2)
    kp, delta, image = p_embedding(n)
    delta_r, r = retraction(n)
    assert delta.elements == delta_r.elements
    p_indices = sorted(int(i) for i in image)
    p_sub = delta.subposet(p_indices, name="P[%d]" % n)
    horn_in_p = [p_indices.index(int(i)) for i in incl]
    p_battery = PosetBattery(p_sub, c)
    full_battery = PosetBattery(delta, c)
    delta_shape = poset_as_category(delta)
    horn_shape = poset_as_category(horn)
    p_shape = poset_as_category(p_sub)
    r_into_p = np.array([p_indices.index(int(r[i])) for i in range(delta.n)],
                        dtype=np.int64)

    def solve_one(F):
        fixed = p_battery.fixed_from_functor(horn_in_p, F, sub_shape=horn_shape)
        status, nodes, found, out_obj, out_mor = p_battery.run(*fixed, budget=budget)
        direct_fixed = full_battery.fixed_from_functor(
            [int(i) for i in incl], F, sub_shape=horn_shape)
        dstatus, dnodes, _, _, _ = full_battery.run(*direct_fixed, budget=budget)
        if {status, dstatus} <= {STATUS_FOUND, STATUS_EXHAUSTED}:
            if status != dstatus:
                raise CategoryError(
                    "k-cone route disagrees with the direct test at n=%d" % n)
        if status != STATUS_FOUND:
            return LiftReport(_STATUS_NAME[status], None, nodes + dnodes)
        p_functor = p_battery.functor_from_solution(out_obj[0], out_mor[0])
        obj_map = p_functor.obj_map[r_into_p]
        mor_map = np.empty(delta_shape.n_mor, dtype=np.int64)
        for (i, j), mid in delta_shape.pair_id.items():
            mor_map[mid] = p_functor.mor(
                p_shape.pair_id[(int(r_into_p[i]), int(r_into_p[j]))])
        full = FunctorData(delta_shape, c, obj_map, mor_map).validate()
        return LiftReport(FILLED, full, nodes + dnodes)

    if boundary is not None:
        return solve_one(boundary)
    rep = HornReport(n, n)
    complete, sols_obj, sols_mor, found = enumerate_poset_functors(
        horn, c, boundary_cap)
    rep.truncated = not complete
    horn_battery = PosetBattery(horn, c)
    for idx in range(found):
        rep.boundaries_checked += 1
        F = horn_battery.functor_from_solution(sols_obj[idx], sols_mor[idx])
        lift = solve_one(F)
        rep.nodes += lift.nodes_explored
        if lift.status != FILLED:
            rep.status = lift.status
            return rep
    return rep
