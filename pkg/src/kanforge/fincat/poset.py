"""Finite posets and their view as categories (one arrow per related pair)."""

import numpy as np

from .category import CategoryError, FinCategory, _frozen


class FinPoset:
    def __init__(self, elements, leq, name=""):
        self.name = name
        self.elements = list(elements)
        self.leq = np.asarray(leq, dtype=bool)
        n = len(self.elements)
        if self.leq.shape != (n, n):
            raise CategoryError("leq must be %d x %d" % (n, n))
        if not self.leq.diagonal().all():
            raise CategoryError("leq not reflexive")
        if (self.leq & self.leq.T & ~np.eye(n, dtype=bool)).any():
            raise CategoryError("leq not antisymmetric")
        closure = self.leq @ self.leq
        if (closure & ~self.leq).any():
            raise CategoryError("leq not transitive")
        self.leq.flags.writeable = False
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != n:
            raise CategoryError("duplicate poset elements")
        self._covers = None
        self._cat = None

    @property
    def n(self):
        return len(self.elements)

    def index(self, e):
        return self._index[e]

    @property
    def covers(self):
        "list of (i, j) with j covering i"
        if self._covers is None:
            lt = self.leq & ~np.eye(self.n, dtype=bool)
            between = lt @ lt
            self._covers = [(int(i), int(j)) for i, j in np.argwhere(lt & ~between)]
        return self._covers

    def down_closed(self, subset):
        "True if the index set is closed under taking smaller elements"
        inside = np.zeros(self.n, dtype=bool)
        inside[list(subset)] = True
        return not (self.leq[:, inside] & ~inside[:, None]).any()

    def topological_order(self):
        "indices sorted by down-set size (a linear extension), ties by index"
        ranks = self.leq.sum(axis=0)
        return sorted(range(self.n), key=lambda i: (ranks[i], i))

    def subposet(self, indices, name=""):
        idx = list(indices)
        sub = self.leq[np.ix_(idx, idx)]
        return FinPoset([self.elements[i] for i in idx], sub, name=name)

    def iso_to(self, other, mapping):
        "check that index map `mapping` is an order isomorphism onto other"
        if sorted(mapping[i] for i in range(self.n)) != list(range(other.n)):
            return False
        for i in range(self.n):
            for j in range(self.n):
                if self.leq[i, j] != other.leq[mapping[i], mapping[j]]:
                    return False
        return True

    def __repr__(self):
        return "<FinPoset %s: %d elements>" % (self.name or "?", self.n)


def poset_as_category(p, name=None):
    "category with one morphism per related pair; composition is forced"
    if p._cat is not None:
        return p._cat
    names = [str(e) for e in p.elements]
    pairs = [(i, j) for i in range(p.n) for j in range(p.n) if p.leq[i, j]]
    pair_id = {pq: m for m, pq in enumerate(pairs)}
    mor_names = ["%s->%s" % (names[i], names[j]) for i, j in pairs]
    dom = np.array([i for i, _ in pairs], dtype=np.int64)
    cod = np.array([j for _, j in pairs], dtype=np.int64)
    ident = np.array([pair_id[(i, i)] for i in range(p.n)], dtype=np.int64)
    n_mor = len(pairs)
    comp = np.full((n_mor, n_mor), -1, dtype=np.int64)
    for f, (i, j) in enumerate(pairs):
        for g, (j2, k) in enumerate(pairs):
            if j == j2:
                comp[f, g] = pair_id[(i, k)]
    cat = FinCategory(names, mor_names, dom, cod, ident, comp,
                      name=name or (p.name + "-cat" if p.name else "poset-cat"))
    cat.poset = p
    cat.pair_id = pair_id
    p._cat = cat
    return cat


def chain_poset(n, name=None):
    "the chain 0 <= 1 <= ... <= n"
    elems = list(range(n + 1))
    leq = np.fromfunction(lambda i, j: i <= j, (n + 1, n + 1))
    return FinPoset(elems, leq, name=name or ("chain[%d]" % n))


def poset_from_leq_pairs(elements, pairs, name=""):
    "reflexive-transitive closure of the given pairs, validated as a poset"
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[index[a], index[b]] = True
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    return FinPoset(elements, leq, name=name)


def functor_from_cover_values(shape, target, obj_values, cover_values):
    """Functor poset-cat -> target from values on elements and covering pairs.

    Composites along different cover paths must agree; the first clash is
    reported.  Returns a validated FunctorData.
    """
    from .category import FunctorData

    p = shape.poset
    covers_into = {}
    for i, j in p.covers:
        covers_into.setdefault(j, []).append(i)
    mor = {}
    for j in p.topological_order():
        mor[(j, j)] = int(target.ident[obj_values[j]])
        for i in covers_into.get(j, ()):
            m = cover_values[(i, j)]
            for z in range(p.n):
                if not p.leq[z, i]:
                    continue
                c = int(target.comp[mor[(z, i)], m])
                if c < 0:
                    raise CategoryError(
                        "cover value at (%s, %s) is not composable"
                        % (p.elements[i], p.elements[j]))
                if (z, j) in mor and mor[(z, j)] != c:
                    raise CategoryError(
                        "cover values disagree on the pair (%s, %s)"
                        % (p.elements[z], p.elements[j]))
                mor[(z, j)] = c
    mor_map = np.empty(shape.n_mor, dtype=np.int64)
    for (i, j), mid in shape.pair_id.items():
        mor_map[mid] = mor[(i, j)]
    F = FunctorData(shape, target, np.asarray(obj_values, dtype=np.int64), mor_map)
    return F.validate()
