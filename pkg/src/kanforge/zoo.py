"""Canonical example categories and corpus enumerators for the test bench."""

from itertools import permutations, product

import numpy as np

from .fincat.category import FinCategory, build_category
from .fincat.poset import FinPoset, chain_poset, poset_as_category


def idempotent_monoid():
    "one object, one non-identity morphism a with a∘a = a"
    return build_category(
        ["*"],
        [("1", "*", "*"), ("a", "*", "*")],
        {"*": "1"},
        [("1", "1", "1"), ("1", "a", "a"), ("a", "1", "a"), ("a", "a", "a")],
        name="idempotent-monoid")


def cyclic_group(n):
    "the cyclic group of order n as a one-object category"
    mors = [("g%d" % i, "*", "*") for i in range(n)]
    compose = [("g%d" % i, "g%d" % j, "g%d" % ((i + j) % n))
               for i in range(n) for j in range(n)]
    return build_category(["*"], mors, {"*": "g0"}, compose, name="C%d" % n)


def walking_iso():
    "two objects and a pair of mutually inverse morphisms"
    return build_category(
        ["x", "y"],
        [("idx", "x", "x"), ("idy", "y", "y"), ("f", "x", "y"), ("fi", "y", "x")],
        {"x": "idx", "y": "idy"},
        [("idx", "idx", "idx"), ("idy", "idy", "idy"),
         ("idx", "f", "f"), ("f", "idy", "f"),
         ("idy", "fi", "fi"), ("fi", "idx", "fi"),
         ("f", "fi", "idx"), ("fi", "f", "idy")],
        name="walking-iso")


def parallel_pair():
    "objects x, y with two non-identity morphisms x → y (no composites)"
    return build_category(
        ["x", "y"],
        [("idx", "x", "x"), ("idy", "y", "y"), ("a", "x", "y"), ("b", "x", "y")],
        {"x": "idx", "y": "idy"},
        [("idx", "idx", "idx"), ("idy", "idy", "idy"),
         ("idx", "a", "a"), ("a", "idy", "a"),
         ("idx", "b", "b"), ("b", "idy", "b")],
        name="parallel-pair")


def boolean_lattice(n, as_poset=False):
    "the lattice of subsets of {1..n}"
    elems = sorted(range(1 << n), key=lambda s: (bin(s).count("1"), s))
    labels = ["{" + ",".join(str(i + 1) for i in range(n) if s >> i & 1) + "}"
              for s in elems]
    size = len(elems)
    leq = np.zeros((size, size), dtype=bool)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            leq[i, j] = (a & b) == a
    p = FinPoset(labels, leq, name="B%d" % n)
    return p if as_poset else poset_as_category(p, name="B%d" % n)


def chain_category(n):
    "the chain poset [n] viewed as a category"
    return poset_as_category(chain_poset(n), name="chain[%d]" % n)


def _injections(a, b):
    "all injections {1..a} -> {1..b} as image tuples, sorted"
    return sorted(p for p in permutations(range(1, b + 1), a))


def fi_skeleton(n_max, include_empty=True):
    """Skeleton of finite sets and injections, objects {1..j} for j <= n_max.

    The empty set is included by default; pass include_empty=False to drop it.
    """
    if n_max > 4:
        raise ValueError("fi_skeleton guarded at n_max <= 4")
    sizes = list(range(0 if include_empty else 1, n_max + 1))
    objects = [str(j) for j in sizes]
    morphisms = []
    mor_of = {}
    for a in sizes:
        for b in sizes:
            if a > b:
                continue
            for img in _injections(a, b):
                nm = "i%d%d%s" % (a, b, "".join(map(str, img)))
                mor_of[(a, b, img)] = nm
                morphisms.append((nm, str(a), str(b)))
    identities = {str(j): mor_of[(j, j, tuple(range(1, j + 1)))] for j in sizes}
    compose = []
    for (a, b, f), nf in mor_of.items():
        for (b2, c, g), ng in mor_of.items():
            if b != b2:
                continue
            h = tuple(g[x - 1] for x in f)
            compose.append((nf, ng, mor_of[(a, c, h)]))
    return build_category(objects, morphisms, identities, compose,
                          name="FI<=%d" % n_max)


def fi_tau(c):
    "the transposition of the two largest elements of the top object of fi_skeleton"
    n = max(int(o) for o in c.obj_names)
    img = list(range(1, n + 1))
    img[-1], img[-2] = img[-2], img[-1]
    return c.mor_id("i%d%d%s" % (n, n, "".join(map(str, img))))


def _monoid_table_to_category(table, name):
    n = len(table)
    mors = [("m%d" % i, "*", "*") for i in range(n)]
    compose = [("m%d" % i, "m%d" % j, "m%d" % table[j][i])
               for i in range(n) for j in range(n)]
    return build_category(["*"], mors, {"*": "m0"}, compose, name=name)


def _canonical_monoid(table):
    "lexicographically least table over relabelings fixing the identity 0"
    n = len(table)
    best = None
    for perm in permutations(range(1, n)):
        relabel = (0,) + perm
        inv = [0] * n
        for i, v in enumerate(relabel):
            inv[v] = i
        flat = tuple(inv[table[relabel[i]][relabel[j]]]
                     for i in range(n) for j in range(n))
        if best is None or flat < best:
            best = flat
    return best


def enumerate_monoids(max_order):
    """All monoids of order <= max_order up to isomorphism, as categories.

    Element 0 is the unit; tables are deduplicated by canonical form.
    """
    if max_order > 4:
        raise ValueError("enumerate_monoids guarded at max_order <= 4")
    for n in range(1, max_order + 1):
        seen = set()
        idx = 0
        cells = [(i, j) for i in range(1, n) for j in range(1, n)]
        for choice in product(range(n), repeat=len(cells)):
            table = [[0] * n for _ in range(n)]
            for i in range(n):
                table[0][i] = i
                table[i][0] = i
            for (i, j), v in zip(cells, choice):
                table[i][j] = v
            if not all(table[table[i][j]][k] == table[i][table[j][k]]
                       for i in range(n) for j in range(n) for k in range(n)):
                continue
            canon = _canonical_monoid(table)
            if canon in seen:
                continue
            seen.add(canon)
            yield _monoid_table_to_category(table, "monoid%d_%d" % (n, idx))
            idx += 1


def _canonical_poset(leq):
    n = len(leq)
    best = None
    for perm in permutations(range(n)):
        flat = tuple(leq[perm[i]][perm[j]] for i in range(n) for j in range(n))
        if best is None or flat < best:
            best = flat
    return best


def enumerate_posets(max_size, as_poset=False):
    "all posets of size <= max_size up to isomorphism, as categories"
    if max_size > 5:
        raise ValueError("enumerate_posets guarded at max_size <= 5")
    for n in range(1, max_size + 1):
        seen = set()
        idx = 0
        strict_pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for mask in range(1 << len(strict_pairs)):
            leq = [[i == j for j in range(n)] for i in range(n)]
            for bit, (i, j) in enumerate(strict_pairs):
                if mask >> bit & 1:
                    leq[i][j] = True
            ok = True
            for i in range(n):
                for j in range(n):
                    if leq[i][j] and leq[j][i] and i != j:
                        ok = False
                    if ok and leq[i][j]:
                        for k in range(n):
                            if leq[j][k] and not leq[i][k]:
                                ok = False
                                break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                continue
            canon = _canonical_poset(leq)
            if canon in seen:
                continue
            seen.add(canon)
            p = FinPoset(list(range(n)), np.array(leq, dtype=bool),
                         name="poset%d_%d" % (n, idx))
            yield p if as_poset else poset_as_category(p, name=p.name)
            idx += 1


ZOO_BUILDERS = {
    "idempotent-monoid": lambda: idempotent_monoid(),
    "parallel-pair": lambda: parallel_pair(),
    "walking-iso": lambda: walking_iso(),
}


def from_name(name, *params):
    "zoo lookup used by the CLI `gen` subcommand"
    if name in ZOO_BUILDERS:
        return ZOO_BUILDERS[name]()
    if name == "fi":
        return fi_skeleton(int(params[0]) if params else 3)
    if name == "boolean-lattice":
        return boolean_lattice(int(params[0]) if params else 3)
    if name == "chain":
        return chain_category(int(params[0]) if params else 1)
    if name == "cyclic-group":
        return cyclic_group(int(params[0]) if params else 2)
    raise KeyError("unknown zoo entry %r" % name)
