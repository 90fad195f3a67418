"""Left calculus of fractions: checks, witnesses, and constructive horn filling.

CF1 asks every span for a commuting cocone; CF2 asks every equalized
parallel pair for an equalizing postcomposition.  The witness tables are
materialized deterministically (lowest-id choices) so the constructions
built from them are reproducible.
"""

import numpy as np

from .fincat.category import CategoryError, FunctorData
from .fincat.limits import mediating_from_cocone, pushout
from .fincat.poset import functor_from_cover_values, poset_as_category
from .lifting import DEFAULT_BUDGET, EXHAUSTED, FILLED, LiftingProblem, extend_functor
from .sdposet import sd_delta, sd_horn


class CfWitness:
    """Materialized CF1/CF2 witness tables for a category.

    cf1[(s, t)] = (d1, d2) with d1∘s = d2∘t; cf2[(f, g, s)] = t with
    t∘f = t∘g.  Every stored entry re-verifies against the composition
    table on construction.
    """

    def __init__(self, category, cf1, cf2):
        self.category = category
        self.cf1 = cf1
        self.cf2 = cf2
        c = category
        for (s, t), (d1, d2) in cf1.items():
            if c.comp[s, d1] != c.comp[t, d2]:
                raise CategoryError("corrupt CF1 witness at (%s, %s)"
                                    % (c.mor_names[s], c.mor_names[t]))
        for (f, g, s), t in cf2.items():
            if c.comp[f, t] != c.comp[g, t] or c.comp[s, f] != c.comp[s, g]:
                raise CategoryError("corrupt CF2 witness at (%s, %s, %s)"
                                    % (c.mor_names[f], c.mor_names[g], c.mor_names[s]))


class CfResult:
    def __init__(self, category, cf1_ok, cf1_counterexample,
                 cf2_ok, cf2_counterexample, witness):
        self.category = category
        self.cf1_ok = cf1_ok
        self.cf1_counterexample = cf1_counterexample
        self.cf2_ok = cf2_ok
        self.cf2_counterexample = cf2_counterexample
        self.witness = witness

    @property
    def passed(self):
        return self.cf1_ok and self.cf2_ok

    def to_dict(self):
        c = self.category
        out = {"schema": 1, "category": c.name,
               "cf1": {"status": "pass" if self.cf1_ok else "fail"},
               "cf2": {"status": "pass" if self.cf2_ok else "fail"},
               "status": "pass" if self.passed else "fail"}
        if self.cf1_counterexample:
            s, t = self.cf1_counterexample
            out["cf1"]["counterexample"] = {"s": c.mor_names[s], "t": c.mor_names[t]}
        if self.cf2_counterexample:
            f, g, s = self.cf2_counterexample
            out["cf2"]["counterexample"] = {"f": c.mor_names[f], "g": c.mor_names[g],
                                            "s": c.mor_names[s]}
        return out


def _lowest_cf1_cocone(c, s, t):
    y, z = int(c.cod[s]), int(c.cod[t])
    for w in range(c.n_obj):
        d1s = np.array(c.hom(y, w), dtype=np.int64)
        d2s = np.array(c.hom(z, w), dtype=np.int64)
        if len(d1s) == 0 or len(d2s) == 0:
            continue
        eq = c.comp[s, d1s][:, None] == c.comp[t, d2s][None, :]
        hits = np.argwhere(eq)
        if len(hits):
            a, b = hits[0]
            return int(d1s[a]), int(d2s[b])
    return None


def _lowest_equalizer(c, f, g):
    y = int(c.cod[f])
    for w in range(c.n_obj):
        for t in c.hom(y, w):
            if c.comp[f, t] == c.comp[g, t]:
                return t
    return None


def check_cf(c):
    """Exhaustively verify CF1 over all spans and CF2 over equalized triples.

    Returns a CfResult carrying total witness tables on success and the
    first counterexample of each kind otherwise.
    """
    cf1, cf2 = {}, {}
    cf1_bad = cf2_bad = None
    for s in range(c.n_mor):
        for t in range(c.n_mor):
            if c.dom[s] != c.dom[t]:
                continue
            cocone = _lowest_cf1_cocone(c, s, t)
            if cocone is None:
                cf1_bad = cf1_bad or (s, t)
            else:
                cf1[(s, t)] = cocone
        if cf1_bad:
            break
    parallel_eq = {}
    for f in range(c.n_mor):
        for g in range(c.n_mor):
            if c.dom[f] != c.dom[g] or c.cod[f] != c.cod[g]:
                continue
            parallel_eq[(f, g)] = _lowest_equalizer(c, f, g)
    for f, g in sorted(parallel_eq):
        for s in range(c.n_mor):
            if c.cod[s] != c.dom[f] or c.comp[s, f] != c.comp[s, g]:
                continue
            t = parallel_eq[(f, g)]
            if t is None:
                cf2_bad = cf2_bad or (f, g, s)
            else:
                cf2[(f, g, s)] = t
        if cf2_bad:
            break
    witness = None
    if cf1_bad is None and cf2_bad is None:
        witness = CfWitness(c, cf1, cf2)
    return CfResult(c, cf1_bad is None, cf1_bad, cf2_bad is None, cf2_bad, witness)


def common_multiple(c, fs, witness):
    """Morphisms g_i with g_i∘f_i all equal, for f_i sharing their source.

    Induction on the CF1 witness: the base case is the stored cocone, the
    step composes a fresh cocone over (g_1∘f_1, f_n).  The result is
    re-verified before returning.
    """
    if not fs:
        raise CategoryError("common multiple of an empty family")
    if len(set(int(c.dom[f]) for f in fs)) != 1:
        raise CategoryError("family does not share its source")
    if len(fs) == 1:
        gs = [int(c.ident[int(c.cod[fs[0]])])]
    else:
        gs = list(witness.cf1[(fs[0], fs[1])])
        for i in range(2, len(fs)):
            lead = c.compose(fs[0], gs[0])
            h, k = witness.cf1[(lead, fs[i])]
            gs = [c.compose(g, h) for g in gs] + [k]
    vals = {c.compose(f, g) for f, g in zip(fs, gs)}
    if len(vals) != 1:
        raise CategoryError("common multiple construction failed to re-verify")
    return gs


def _horn_shape(n, k, level=1):
    horn, incl = sd_horn(n, k, level)
    return horn, poset_as_category(horn), incl


def construct_horn_filler(c, witness, F, n, k):
    """Execute the constructive Kan-filling recipe on a level-1 horn functor.

    F is a functor on the subdivided horn (n, k); the result is a validated
    functor on the subdivided simplex restricting to F.  Raises if any
    re-verification fails, which indicates witness corruption.
    """
    horn, horn_shape, _ = _horn_shape(n, k)
    delta = sd_delta(n, 1)
    delta_shape = poset_as_category(delta)
    full = (1 << (n + 1)) - 1
    face_k = full & ~(1 << k)
    obj_values = [0] * delta.n
    cover_values = {}
    for i, e in enumerate(horn.elements):
        obj_values[delta.index(e)] = F.obj(i)
    for (i, j) in horn.covers:
        di, dj = delta.index(horn.elements[i]), delta.index(horn.elements[j])
        cover_values[(di, dj)] = F.mor(horn_shape.pair_id[(i, j)])

    if n == 1:
        x = F.obj(0)
        w = x
        into_full = {face_k: int(c.ident[x]), (full & ~(1 << (1 - k))): int(c.ident[x])}
        obj_values[delta.index(full)] = w
        obj_values[delta.index(face_k)] = w
        for mask, m in into_full.items():
            cover_values[(delta.index(mask), delta.index(full))] = m
        filler = functor_from_cover_values(delta_shape, c, obj_values, cover_values)
        _check_restriction(filler, F, horn, delta)
        return filler

    others = [i for i in range(n + 1) if i != k]
    apex = horn.index((1 << k))
    a = {i: F.mor(horn_shape.pair_id[(apex, horn.index(full & ~(1 << i)))])
         for i in others}
    bs = common_multiple(c, [a[i] for i in others], witness)
    b = dict(zip(others, bs))
    ts = []
    pairs = [(i, j) for ai, i in enumerate(others) for j in others[ai + 1:]]
    for i, j in pairs:
        mid = full & ~((1 << i) | (1 << j))
        s_ij = F.mor(horn_shape.pair_id[(apex, horn.index(mid))])
        p = F.mor(horn_shape.pair_id[(horn.index(mid), horn.index(full & ~(1 << j)))])
        q = F.mor(horn_shape.pair_id[(horn.index(mid), horn.index(full & ~(1 << i)))])
        f1 = c.compose(p, b[j])
        g1 = c.compose(q, b[i])
        if f1 == g1:
            ts.append(int(c.ident[int(c.cod[f1])]))
        else:
            ts.append(witness.cf2[(f1, g1, s_ij)])
    us = common_multiple(c, ts, witness)
    vset = {c.compose(t, u) for t, u in zip(ts, us)}
    if len(vset) != 1:
        raise CategoryError("corrected multiples failed to agree")
    v = vset.pop()
    w_obj = int(c.cod[v])

    obj_values[delta.index(full)] = w_obj
    obj_values[delta.index(face_k)] = w_obj
    for i in others:
        cover_values[(delta.index(full & ~(1 << i)), delta.index(full))] = \
            c.compose(b[i], v)
    cover_values[(delta.index(face_k), delta.index(full))] = int(c.ident[w_obj])
    for i in others:
        # value on n̄∖{i,k} -> n̄∖k is forced to equal the route to n̄ via n̄∖i
        mid = face_k & ~(1 << i)
        m_mid_i = F.mor(horn_shape.pair_id[(horn.index(mid), horn.index(full & ~(1 << i)))])
        cover_values[(delta.index(mid), delta.index(face_k))] = \
            c.compose(m_mid_i, c.compose(b[i], v))
    filler = functor_from_cover_values(delta_shape, c, obj_values, cover_values)
    _check_restriction(filler, F, horn, delta)
    return filler


def _check_restriction(filler, F, horn, delta):
    delta_shape = filler.source
    horn_shape = F.source
    for i, e in enumerate(horn.elements):
        if filler.obj(delta.index(e)) != F.obj(i):
            raise CategoryError("filler does not restrict to the boundary")
    for (i, j), mid in horn_shape.pair_id.items():
        di, dj = delta.index(horn.elements[i]), delta.index(horn.elements[j])
        if filler.mor(delta_shape.pair_id[(di, dj)]) != F.mor(mid):
            raise CategoryError("filler does not restrict to the boundary")


# ---------------------------------------------------------------------------
# probe diagrams: the two reverse-lemma horn problems
# ---------------------------------------------------------------------------

def _swap_bit(mask, a, b):
    ba, bb = (mask >> a) & 1, (mask >> b) & 1
    mask &= ~((1 << a) | (1 << b))
    return mask | (ba << b) | (bb << a)


def span_probe_boundary(c, s, t, k=0):
    """The outer-2-horn diagram that encodes a CF1 span (s, t).

    With vertex relabeling (0 k) this is a boundary functor on the
    subdivided horn (2, k); it extends iff the span has a commuting cocone.
    """
    horn, horn_shape, _ = _horn_shape(2, k)
    x, y, z = int(c.dom[s]), int(c.cod[s]), int(c.cod[t])
    by_mask = {0b001: (x, None), 0b010: (y, None), 0b100: (z, None),
               0b011: (y, None), 0b101: (z, None)}
    covers = {(0b001, 0b011): s, (0b001, 0b101): t,
              (0b010, 0b011): int(c.ident[y]), (0b100, 0b101): int(c.ident[z])}
    return _probe_from_masks(c, horn, horn_shape, by_mask, covers, swap=(0, k))


def equalizer_probe_boundary(c, f, g, s, k=0):
    """The 13-object outer-3-horn diagram encoding a CF2 triple (f, g, s).

    Filling it produces t with t∘f = t∘g (read off the face opposite the
    missing vertex).
    """
    horn, horn_shape, _ = _horn_shape(3, k)
    x1 = int(c.dom[s])
    x = int(c.dom[f])
    y = int(c.cod[f])
    idx, idy = int(c.ident[x]), int(c.ident[y])
    fs = c.compose(s, f)
    objects = {0b0001: x1, 0b0010: x1, 0b0100: x, 0b1000: x,
               0b0011: x, 0b0101: y, 0b1001: x, 0b0110: x, 0b1010: x, 0b1100: x,
               0b0111: y, 0b1011: y, 0b1101: y}
    covers = {
        (0b0011, 0b0111): f, (0b0101, 0b0111): idy, (0b0110, 0b0111): g,
        (0b0011, 0b1011): g, (0b1001, 0b1011): g, (0b1010, 0b1011): g,
        (0b0101, 0b1101): idy, (0b1001, 0b1101): g, (0b1100, 0b1101): g,
        (0b0001, 0b0011): s, (0b0001, 0b0101): fs, (0b0001, 0b1001): s,
        (0b0010, 0b0011): s, (0b0010, 0b0110): s, (0b0010, 0b1010): s,
        (0b0100, 0b0101): g, (0b0100, 0b0110): idx, (0b0100, 0b1100): idx,
        (0b1000, 0b1001): idx, (0b1000, 0b1010): idx, (0b1000, 0b1100): idx,
    }
    by_mask = {m: (o, None) for m, o in objects.items()}
    return _probe_from_masks(c, horn, horn_shape, by_mask, covers, swap=(0, k))


def _probe_from_masks(c, horn, horn_shape, by_mask, covers, swap):
    a, b = swap
    obj_values = [0] * horn.n
    for mask, (obj, _) in by_mask.items():
        obj_values[horn.index(_swap_bit(mask, a, b))] = obj
    cover_values = {}
    for (m1, m2), mor in covers.items():
        i = horn.index(_swap_bit(m1, a, b))
        j = horn.index(_swap_bit(m2, a, b))
        cover_values[(i, j)] = mor
    return functor_from_cover_values(horn_shape, c, obj_values, cover_values)


def horn_probe_boundaries(c, n, k):
    "probe boundary functors for the (n, k) level-1 horn, deterministic order"
    if n == 2:
        for s in range(c.n_mor):
            for t in range(c.n_mor):
                if c.dom[s] == c.dom[t]:
                    yield span_probe_boundary(c, s, t, k)
    elif n == 3:
        seen = set()
        for f in range(c.n_mor):
            for g in range(c.n_mor):
                if f == g or c.dom[f] != c.dom[g] or c.cod[f] != c.cod[g]:
                    continue
                if (f, g) in seen:
                    continue
                for s in range(c.n_mor):
                    if c.cod[s] == c.dom[f] and c.comp[s, f] == c.comp[s, g]:
                        seen.add((f, g))
                        yield equalizer_probe_boundary(c, f, g, s, k)
                        break


def _lift_horn_boundary(c, F, n, k, budget):
    horn, incl = sd_horn(n, k, 1)
    delta = sd_delta(n, 1)
    problem = LiftingProblem(c, delta, [int(i) for i in incl], F)
    return extend_functor(problem, budget)


def cf1_from_horn(c, budget=DEFAULT_BUDGET):
    """Extract a CF1 witness table by filling one outer 2-horn per span.

    Returns (table, None) on success or (None, (span, report)) with the
    horn problem that failed.
    """
    horn, horn_shape, _ = _horn_shape(2, 0)
    delta = sd_delta(2, 1)
    delta_shape = poset_as_category(delta)
    pair = delta_shape.pair_id
    table = {}
    for s in range(c.n_mor):
        for t in range(c.n_mor):
            if c.dom[s] != c.dom[t]:
                continue
            F = span_probe_boundary(c, s, t, 0)
            lift = _lift_horn_boundary(c, F, 2, 0, budget)
            if lift.status != FILLED:
                return None, ((s, t), lift)
            d1 = lift.functor.mor(pair[(delta.index(0b011), delta.index(0b111))])
            d2 = lift.functor.mor(pair[(delta.index(0b101), delta.index(0b111))])
            if c.comp[s, d1] != c.comp[t, d2]:
                raise CategoryError("extracted CF1 square does not commute")
            table[(s, t)] = (int(d1), int(d2))
    return table, None


def cf2_from_horn(c, budget=DEFAULT_BUDGET):
    """Extract CF2 equalizers by filling one outer 3-horn per triple.

    The equalizing morphism is read off the filler on the face opposite
    the missing vertex.  Returns (table, None) or (None, (triple, report)).
    """
    delta = sd_delta(3, 1)
    delta_shape = poset_as_category(delta)
    pair = delta_shape.pair_id
    table = {}
    per_pair = {}
    for f in range(c.n_mor):
        for g in range(c.n_mor):
            if c.dom[f] != c.dom[g] or c.cod[f] != c.cod[g]:
                continue
            for s in range(c.n_mor):
                if c.cod[s] != c.dom[f] or c.comp[s, f] != c.comp[s, g]:
                    continue
                if (f, g) in per_pair:
                    table[(f, g, s)] = per_pair[(f, g)]
                    continue
                F = equalizer_probe_boundary(c, f, g, s, 0)
                lift = _lift_horn_boundary(c, F, 3, 0, budget)
                if lift.status != FILLED:
                    return None, ((f, g, s), lift)
                t = lift.functor.mor(pair[(delta.index(0b1101), delta.index(0b1111))])
                if c.comp[f, t] != c.comp[g, t]:
                    raise CategoryError("extracted CF2 equalizer fails t∘f = t∘g")
                per_pair[(f, g)] = int(t)
                table[(f, g, s)] = int(t)
    return table, None


# ---------------------------------------------------------------------------
# coequalizers from pushouts
# ---------------------------------------------------------------------------

class Coequalizer:
    def __init__(self, obj, mor, transcript):
        self.obj = obj
        self.mor = mor
        self.transcript = transcript


def coequalizer_from_pushouts(c, f, g, alpha):
    """Coequalizer of (f, g) built from two pushouts, given α with fα = gα.

    Follows the double-pushout construction and verifies the universal
    property by exhaustive scan over all h with h∘f = h∘g.
    """
    if c.dom[f] != c.dom[g] or c.cod[f] != c.cod[g]:
        raise CategoryError("coequalizer needs a parallel pair")
    if c.cod[alpha] != c.dom[f] or c.comp[alpha, f] != c.comp[alpha, g]:
        raise CategoryError("α must equalize the pair from the left")
    falpha = c.compose(alpha, f)
    sq1 = pushout(c, alpha, falpha)
    if sq1 is None:
        raise CategoryError("required pushout of (α, fα) is absent")
    i, j = sq1.leg_f, sq1.leg_g   # i: X→B, j: Y→B
    y = int(c.cod[f])
    id_y = int(c.ident[y])
    big_f = mediating_from_cocone(c, sq1, f, id_y)
    big_g = mediating_from_cocone(c, sq1, g, id_y)
    sq2 = pushout(c, big_f, big_g)
    if sq2 is None:
        raise CategoryError("required pushout of (F, G) is absent")
    phi1, phi2 = sq2.leg_f, sq2.leg_g
    # φ1 = φ1∘F∘j = φ2∘G∘j = φ2 because F∘j = G∘j = id_Y
    if phi1 != phi2:
        raise CategoryError("pushout legs fail φ1 = φ2")
    phi = int(phi1)
    if c.comp[f, phi] != c.comp[g, phi]:
        raise CategoryError("φ fails to equalize the pair")
    z = int(c.cod[phi])
    # universal-property oracle over every equalizing h
    for t_obj in range(c.n_obj):
        for h in c.hom(y, t_obj):
            if c.comp[f, h] != c.comp[g, h]:
                continue
            psis = [u for u in c.hom(z, t_obj) if c.comp[phi, u] == h]
            if len(psis) != 1:
                raise CategoryError(
                    "coequalizer not universal against %s" % c.mor_names[h])
    transcript = {"B": int(sq1.apex), "F": int(big_f), "G": int(big_g),
                  "Z": z, "phi": int(phi)}
    return Coequalizer(z, int(phi), transcript)
