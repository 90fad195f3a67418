"""Elementary (co)limit searches with exhaustive universal-property checks.

Every result returned here has been verified universal against every
competing cone/cocone in the category; that scan is the oracle the rest
of the package trusts.  Categories are small (tens of morphisms), so the
scans are affordable and cached per category.
"""

import numpy as np

from .category import CategoryError


class PushoutSquare:
    def __init__(self, apex, leg_f, leg_g):
        self.apex = apex      # object id W
        self.leg_f = leg_f    # i : cod f -> W
        self.leg_g = leg_g    # j : cod g -> W

    def __repr__(self):
        return "PushoutSquare(apex=%d, leg_f=%d, leg_g=%d)" % (
            self.apex, self.leg_f, self.leg_g)


class PullbackSquare:
    def __init__(self, apex, proj_f, proj_g):
        self.apex = apex      # object id P
        self.proj_f = proj_f  # p : P -> dom f
        self.proj_g = proj_g  # q : P -> dom g

    def __repr__(self):
        return "PullbackSquare(apex=%d, proj_f=%d, proj_g=%d)" % (
            self.apex, self.proj_f, self.proj_g)


def _cocones(c, f, g):
    "all (apex, i, j) with i∘f = j∘g, grouped by apex"
    y, z = int(c.cod[f]), int(c.cod[g])
    out = []
    for w in range(c.n_obj):
        ii = np.array(c.hom(y, w), dtype=np.int64)
        jj = np.array(c.hom(z, w), dtype=np.int64)
        if len(ii) == 0 or len(jj) == 0:
            out.append((ii[:0], jj[:0], np.zeros((0, 2), dtype=np.int64)))
            continue
        mask = c.comp[f, ii][:, None] == c.comp[g, jj][None, :]
        out.append((ii, jj, np.argwhere(mask)))
    return out


def pushout(c, f, g):
    """Canonical pushout of the span (f: X→Y, g: X→Z), or None if absent.

    Returns the lowest-id cocone among those verified universal by
    exhaustive scan over all competing cocones.
    """
    if c.dom[f] != c.dom[g]:
        raise CategoryError("pushout span must share its domain")
    cache = _limits_cache(c)
    key = (int(f), int(g))
    if key in cache.pushouts:
        return cache.pushouts[key]
    per_apex = _cocones(c, f, g)
    result = None
    for w in range(c.n_obj):
        ii, jj, pairs = per_apex[w]
        for a, b in pairs:
            i0, j0 = int(ii[a]), int(jj[b])
            if _pushout_universal(c, i0, j0, per_apex):
                result = PushoutSquare(w, i0, j0)
                break
        if result is not None:
            break
    cache.pushouts[key] = result
    return result


def _pushout_universal(c, i0, j0, per_apex):
    w0 = int(c.cod[i0])
    for t in range(c.n_obj):
        ii, jj, pairs = per_apex[t]
        us = np.array(c.hom(w0, t), dtype=np.int64)
        if len(pairs) == 0:
            continue
        if len(us) == 0:
            return False
        left = c.comp[i0, us]
        right = c.comp[j0, us]
        for a, b in pairs:
            n = int(np.count_nonzero((left == ii[a]) & (right == jj[b])))
            if n != 1:
                return False
    return True


def _cones(c, f, g):
    "all (apex, p, q) with f∘p = g∘q, grouped by apex"
    y, z = int(c.dom[f]), int(c.dom[g])
    out = []
    for t in range(c.n_obj):
        pp = np.array(c.hom(t, y), dtype=np.int64)
        qq = np.array(c.hom(t, z), dtype=np.int64)
        if len(pp) == 0 or len(qq) == 0:
            out.append((pp[:0], qq[:0], np.zeros((0, 2), dtype=np.int64)))
            continue
        mask = c.comp[pp, f][:, None] == c.comp[qq, g][None, :]
        out.append((pp, qq, np.argwhere(mask)))
    return out


def pullback(c, f, g):
    "canonical pullback of the cospan (f: Y→X, g: Z→X), or None if absent"
    if c.cod[f] != c.cod[g]:
        raise CategoryError("pullback cospan must share its codomain")
    cache = _limits_cache(c)
    key = (int(f), int(g))
    if key in cache.pullbacks:
        return cache.pullbacks[key]
    per_apex = _cones(c, f, g)
    result = None
    for p_obj in range(c.n_obj):
        pp, qq, pairs = per_apex[p_obj]
        for a, b in pairs:
            p0, q0 = int(pp[a]), int(qq[b])
            if _pullback_universal(c, p0, q0, per_apex):
                result = PullbackSquare(p_obj, p0, q0)
                break
        if result is not None:
            break
    cache.pullbacks[key] = result
    return result


def _pullback_universal(c, p0, q0, per_apex):
    apex = int(c.dom[p0])
    for t in range(c.n_obj):
        pp, qq, pairs = per_apex[t]
        us = np.array(c.hom(t, apex), dtype=np.int64)
        if len(pairs) == 0:
            continue
        if len(us) == 0:
            return False
        left = c.comp[us, p0]
        right = c.comp[us, q0]
        for a, b in pairs:
            n = int(np.count_nonzero((left == pp[a]) & (right == qq[b])))
            if n != 1:
                return False
    return True


def has_all_pushouts(c):
    "(True, None) or (False, first failing span (f, g))"
    for f in range(c.n_mor):
        for g in range(f, c.n_mor):
            if c.dom[f] == c.dom[g] and pushout(c, f, g) is None:
                return False, (f, g)
    return True, None


def has_all_pullbacks(c):
    "(True, None) or (False, first failing cospan (f, g))"
    for f in range(c.n_mor):
        for g in range(f, c.n_mor):
            if c.cod[f] == c.cod[g] and pullback(c, f, g) is None:
                return False, (f, g)
    return True, None


def mediating_from_cocone(c, square, i1, j1):
    "the unique u with u∘leg_f = i1 and u∘leg_g = j1; raises if not unique"
    t = int(c.cod[i1])
    us = [u for u in c.hom(square.apex, t)
          if c.comp[square.leg_f, u] == i1 and c.comp[square.leg_g, u] == j1]
    if len(us) != 1:
        raise CategoryError("pushout mediating morphism not unique (%d found)" % len(us))
    return us[0]


class DiagramOracle:
    """Cone enumeration and limit verification for a poset-shaped diagram.

    `poset` is a FinPoset, `values[i]` an object id and `edges[(i, j)]` a
    morphism id for every related pair i <= j.
    """

    def __init__(self, c, poset, values, edges):
        self.c = c
        self.poset = poset
        self.values = values
        self.edges = edges
        # static order: place an element as soon as a predecessor is placed
        # (its leg is then forced), otherwise introduce the next minimal one.
        order = []
        placed = set()
        topo = poset.topological_order()
        pending = list(topo)
        while pending:
            forced = [e for e in pending
                      if any(poset.leq[p, e] and p != e for p in placed)]
            nxt = forced[0] if forced else pending[0]
            order.append(nxt)
            placed.add(nxt)
            pending.remove(nxt)
        self.order = order
        self.preds = {e: [p for p in range(poset.n) if poset.leq[p, e] and p != e]
                      for e in range(poset.n)}

    def cones(self, apex, limit=None):
        "yield leg dicts {element: morphism id} for every cone from apex"
        c, poset = self.c, self.poset
        legs = {}
        out = []

        def place(pos):
            if limit is not None and len(out) > limit:
                return
            if pos == len(self.order):
                out.append(dict(legs))
                return
            e = self.order[pos]
            placed_preds = [p for p in self.preds[e] if p in legs]
            if placed_preds:
                forced = c.comp[legs[placed_preds[0]], self.edges[(placed_preds[0], e)]]
                if forced < 0:
                    return
                for p in placed_preds[1:]:
                    if c.comp[legs[p], self.edges[(p, e)]] != forced:
                        return
                legs[e] = int(forced)
                place(pos + 1)
                del legs[e]
            else:
                for m in c.hom(apex, self.values[e]):
                    legs[e] = m
                    place(pos + 1)
                    del legs[e]

        place(0)
        return out

    def is_limit(self, apex, legs):
        "exhaustive check that (apex, legs) is a limit cone of the diagram"
        c = self.c
        for e in range(self.poset.n):
            m = legs[e]
            if c.dom[m] != apex or c.cod[m] != self.values[e]:
                return False
            for p in self.preds[e]:
                if c.comp[legs[p], self.edges[(p, e)]] != m:
                    return False
        leg_vec = np.array([legs[e] for e in range(self.poset.n)], dtype=np.int64)
        for t in range(c.n_obj):
            us = np.array(c.hom(t, apex), dtype=np.int64)
            induced = {tuple(int(c.comp[u, m]) for m in leg_vec) for u in us}
            if len(induced) != len(us):
                return False        # two mediators induce the same cone
            cones = self.cones(t)
            if len(cones) != len(us):
                return False        # some cone does not factor
            for cone in cones:
                if tuple(cone[e] for e in range(self.poset.n)) not in induced:
                    return False
        return True

    def find_limit(self):
        "lowest-id verified limit cone (apex, legs) or None"
        c = self.c
        for apex in range(c.n_obj):
            for legs in sorted(self.cones(apex),
                               key=lambda L: [L[e] for e in range(self.poset.n)]):
                if self.is_limit(apex, legs):
                    return apex, legs
        return None

    def mediate(self, apex, legs, src, cone):
        "the unique u: src -> apex inducing the given cone; raises if not unique"
        c = self.c
        us = [u for u in c.hom(src, apex)
              if all(c.comp[u, legs[e]] == cone[e] for e in range(self.poset.n))]
        if len(us) != 1:
            raise CategoryError("limit mediating morphism not unique (%d found)" % len(us))
        return us[0]


def limit_of_diagram(d):
    """Limit cone of a diagram over a poset shape, or None if absent.

    `d` is a FunctorData whose source is a poset-as-category (it carries
    `.poset` and `.pair_id`).  Returns (apex object id, legs dict) verified
    universal by exhaustive scan.
    """
    shape = d.source
    poset = shape.poset
    values = [d.obj(i) for i in range(poset.n)]
    edges = {(i, j): d.mor(shape.pair_id[(i, j)])
             for i in range(poset.n) for j in range(poset.n) if poset.leq[i, j]}
    return DiagramOracle(d.target, poset, values, edges).find_limit()


class _LimitsCache:
    def __init__(self):
        self.pushouts = {}
        self.pullbacks = {}


def _limits_cache(c):
    if c.limits is None:
        c.limits = _LimitsCache()
    return c.limits
