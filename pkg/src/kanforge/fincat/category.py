"""Finite categories as closed composition tables.

A category is stored as dense integer tables: `dom`/`cod` per morphism,
`ident` per object and a full composition matrix `comp` with
``comp[f, g] == g after f`` (defined exactly when ``cod[f] == dom[g]``,
-1 elsewhere).  All arrays are immutable after validation.
"""

import numpy as np


class CategoryError(Exception):
    """A composition-table law is violated; message names the witness."""


def _frozen(arr, dtype=np.int64):
    out = np.asarray(arr, dtype=dtype)
    out.flags.writeable = False
    return out


class FinCategory:
    def __init__(self, obj_names, mor_names, dom, cod, ident, comp, name=""):
        self.name = name
        self.obj_names = list(obj_names)
        self.mor_names = list(mor_names)
        self.dom = _frozen(dom)
        self.cod = _frozen(cod)
        self.ident = _frozen(ident)
        self.comp = _frozen(comp)
        self._obj_index = {nm: i for i, nm in enumerate(self.obj_names)}
        self._mor_index = {nm: i for i, nm in enumerate(self.mor_names)}
        if len(self._obj_index) != len(self.obj_names):
            raise CategoryError("duplicate object names")
        if len(self._mor_index) != len(self.mor_names):
            raise CategoryError("duplicate morphism names")
        self._hom = None
        self._hom_arrays = None
        self.limits = None  # lazily attached cache, see limits.py

    @property
    def n_obj(self):
        return len(self.obj_names)

    @property
    def n_mor(self):
        return len(self.mor_names)

    def obj_id(self, name):
        return self._obj_index[name]

    def mor_id(self, name):
        return self._mor_index[name]

    def compose(self, f, g):
        "id of g∘f; raises if not composable"
        h = self.comp[f, g]
        if h < 0:
            raise CategoryError(
                "morphisms %r and %r are not composable"
                % (self.mor_names[f], self.mor_names[g]))
        return int(h)

    def hom(self, a, b):
        "tuple of morphism ids from object a to object b, ascending"
        if self._hom is None:
            table = {}
            for m in range(self.n_mor):
                table.setdefault((int(self.dom[m]), int(self.cod[m])), []).append(m)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((a, b), ())

    def hom_arrays(self):
        "flattened hom sets (hom_off, hom_flat) indexed by a*n_obj+b"
        if self._hom_arrays is None:
            n = self.n_obj
            off = np.zeros(n * n + 1, dtype=np.int64)
            flat = np.empty(self.n_mor, dtype=np.int64)
            buckets = [self.hom(a, b) for a in range(n) for b in range(n)]
            pos = 0
            for i, bucket in enumerate(buckets):
                for m in bucket:
                    flat[pos] = m
                    pos += 1
                off[i + 1] = pos
            flat.flags.writeable = False
            off.flags.writeable = False
            self._hom_arrays = (off, flat)
        return self._hom_arrays

    def __repr__(self):
        label = self.name or "FinCategory"
        return "<%s: %d objects, %d morphisms>" % (label, self.n_obj, self.n_mor)

    def same_tables(self, other):
        "bit-exact table comparison (names included)"
        return (self.obj_names == other.obj_names
                and self.mor_names == other.mor_names
                and np.array_equal(self.dom, other.dom)
                and np.array_equal(self.cod, other.cod)
                and np.array_equal(self.ident, other.ident)
                and np.array_equal(self.comp, other.comp))


def build_category(objects, morphisms, identities, compose, name=""):
    """Assemble a FinCategory from name-level data and validate it.

    ``morphisms`` is a list of (name, dom, cod); ``identities`` maps object
    name -> morphism name; ``compose`` is a list of (f, g, gof) triples.
    """
    obj_names = list(objects)
    obj_index = {nm: i for i, nm in enumerate(obj_names)}
    if len(obj_index) != len(obj_names):
        raise CategoryError("duplicate object names")
    mor_names = [m[0] for m in morphisms]
    mor_index = {nm: i for i, nm in enumerate(mor_names)}
    if len(mor_index) != len(mor_names):
        raise CategoryError("duplicate morphism names")
    n_mor = len(mor_names)
    dom = np.empty(n_mor, dtype=np.int64)
    cod = np.empty(n_mor, dtype=np.int64)
    for i, (_, d, c) in enumerate(morphisms):
        if d not in obj_index or c not in obj_index:
            raise CategoryError("morphism %r has unknown endpoint" % mor_names[i])
        dom[i] = obj_index[d]
        cod[i] = obj_index[c]
    ident = np.full(len(obj_names), -1, dtype=np.int64)
    for o, m in identities.items():
        ident[obj_index[o]] = mor_index[m]
    if (ident < 0).any():
        missing = obj_names[int(np.argmin(ident))]
        raise CategoryError("object %r has no identity" % missing)
    comp = np.full((n_mor, n_mor), -1, dtype=np.int64)
    for f, g, h in compose:
        fi, gi, hi = mor_index[f], mor_index[g], mor_index[h]
        if comp[fi, gi] not in (-1, hi):
            raise CategoryError("conflicting entries for %r then %r" % (f, g))
        comp[fi, gi] = hi
    cat = FinCategory(obj_names, mor_names, dom, cod, ident, comp, name=name)
    return validate_category(cat)


def validate_category(c):
    """Check identity, totality and associativity laws; return c or raise.

    The first violated law is reported with the offending morphisms.
    """
    dom, cod, comp, ident = c.dom, c.cod, c.comp, c.ident
    names = c.mor_names
    for o in range(c.n_obj):
        e = ident[o]
        if dom[e] != o or cod[e] != o:
            raise CategoryError("identity of %r has wrong endpoints" % c.obj_names[o])
    # totality: defined exactly on composable pairs, endpoints match
    composable = cod[:, None] == dom[None, :]
    defined = comp >= 0
    if (defined & ~composable).any():
        f, g = np.argwhere(defined & ~composable)[0]
        raise CategoryError(
            "totality: compose(%s, %s) defined but not composable" % (names[f], names[g]))
    if (composable & ~defined).any():
        f, g = np.argwhere(composable & ~defined)[0]
        raise CategoryError(
            "totality: compose(%s, %s) missing" % (names[f], names[g]))
    fs, gs = np.nonzero(defined)
    hs = comp[fs, gs]
    bad = (dom[hs] != dom[fs]) | (cod[hs] != cod[gs])
    if bad.any():
        i = int(np.argmax(bad))
        raise CategoryError(
            "compose(%s, %s) has wrong endpoints" % (names[fs[i]], names[gs[i]]))
    # identity laws
    for m in range(c.n_mor):
        if comp[ident[dom[m]], m] != m:
            raise CategoryError("identity law fails: %s after id" % names[m])
        if comp[m, ident[cod[m]]] != m:
            raise CategoryError("identity law fails: id after %s" % names[m])
    # associativity over all composable triples, vectorized per middle arrow
    for g in range(c.n_mor):
        fs = np.nonzero(cod == dom[g])[0]
        hs = np.nonzero(dom == cod[g])[0]
        if len(fs) == 0 or len(hs) == 0:
            continue
        gf = comp[fs, g]            # g∘f for each f
        hg = comp[g, hs]            # h∘g for each h
        lhs = comp[np.ix_(gf, hs)]  # h∘(g∘f)
        rhs = comp[np.ix_(fs, hg)]  # (h∘g)∘f
        if not np.array_equal(lhs, rhs):
            i, j = np.argwhere(lhs != rhs)[0]
            raise CategoryError(
                "associativity fails on (%s, %s, %s)"
                % (names[fs[i]], names[g], names[hs[j]]))
    return c


def opposite(c):
    "reverse all arrows; an involution, bit-exact on tables"
    comp_op = c.comp.T.copy()
    return FinCategory(c.obj_names, c.mor_names, c.cod.copy(), c.dom.copy(),
                       c.ident.copy(), comp_op,
                       name=(c.name + "^op") if c.name else "")


def is_groupoid(c):
    "(True, None) if every morphism is invertible, else (False, witness name)"
    for m in range(c.n_mor):
        a, b = int(c.dom[m]), int(c.cod[m])
        e_a, e_b = c.ident[a], c.ident[b]
        if not any(c.comp[m, g] == e_a and c.comp[g, m] == e_b
                   for g in c.hom(b, a)):
            return False, c.mor_names[m]
    return True, None


def is_filtered(c):
    """(True, None) if c is filtered, else (False, witness).

    Filtered: nonempty, every object pair has a cocone object, and every
    parallel pair is equalized by some postcomposition.
    """
    if c.n_obj == 0:
        return False, "empty category"
    for a in range(c.n_obj):
        for b in range(a, c.n_obj):
            if not any(c.hom(a, w) and c.hom(b, w) for w in range(c.n_obj)):
                return False, ("no cocone over objects (%s, %s)"
                               % (c.obj_names[a], c.obj_names[b]))
    for f in range(c.n_mor):
        for g in range(c.n_mor):
            if c.dom[f] == c.dom[g] and c.cod[f] == c.cod[g] and f != g:
                y = int(c.cod[f])
                if not any(c.comp[f, h] == c.comp[g, h]
                           for w in range(c.n_obj) for h in c.hom(y, w)):
                    return False, ("parallel pair (%s, %s) not equalized"
                                   % (c.mor_names[f], c.mor_names[g]))
    return True, None


class FunctorData:
    """Object map + morphism map between finite categories, as id arrays."""

    def __init__(self, source, target, obj_map, mor_map):
        self.source = source
        self.target = target
        self.obj_map = _frozen(obj_map)
        self.mor_map = _frozen(mor_map)

    @classmethod
    def from_names(cls, source, target, obj_map, mor_map):
        om = np.array([target.obj_id(obj_map[o]) for o in source.obj_names])
        mm = np.array([target.mor_id(mor_map[m]) for m in source.mor_names])
        return cls(source, target, om, mm)

    def obj(self, o):
        return int(self.obj_map[o])

    def mor(self, m):
        return int(self.mor_map[m])

    def key(self):
        "hashable identity of the assignment (for memoization)"
        return (self.obj_map.tobytes(), self.mor_map.tobytes())

    def validate(self):
        "check dom/cod, identity and composite preservation; return self or raise"
        s, t = self.source, self.target
        om, mm = self.obj_map, self.mor_map
        if not (np.array_equal(t.dom[mm], om[s.dom])
                and np.array_equal(t.cod[mm], om[s.cod])):
            bad = np.nonzero((t.dom[mm] != om[s.dom]) | (t.cod[mm] != om[s.cod]))[0][0]
            raise CategoryError("functor breaks endpoints at %r" % s.mor_names[bad])
        if not np.array_equal(mm[s.ident], t.ident[om]):
            bad = np.nonzero(mm[s.ident] != t.ident[om])[0][0]
            raise CategoryError("functor breaks identity of %r" % s.obj_names[bad])
        fs, gs = np.nonzero(s.comp >= 0)
        image = t.comp[mm[fs], mm[gs]]
        expect = mm[s.comp[fs, gs]]
        if not np.array_equal(image, expect):
            i = int(np.argmax(image != expect))
            raise CategoryError(
                "functor breaks compose(%s, %s)"
                % (s.mor_names[fs[i]], s.mor_names[gs[i]]))
        return self

    def is_valid(self):
        try:
            self.validate()
            return True
        except CategoryError:
            return False

    def equal_on(self, other):
        return (np.array_equal(self.obj_map, other.obj_map)
                and np.array_equal(self.mor_map, other.mor_map))

    def compose_with(self, other):
        "other after self (self: A→B, other: B→C) -> functor A→C"
        assert self.target is other.source
        return FunctorData(self.source, other.target,
                           other.obj_map[self.obj_map],
                           other.mor_map[self.mor_map])

    def __repr__(self):
        return "<FunctorData %s -> %s>" % (self.source.name or "?",
                                           self.target.name or "?")


def identity_functor(c):
    return FunctorData(c, c, np.arange(c.n_obj), np.arange(c.n_mor))
