"""Subdivision posets, the partial-cone construction and horn retractions.

Level-1 posets have nonempty subsets of {0..n} (bit masks) as elements;
level-m posets are iterated chain posets: elements are strictly increasing
tuples of level-(m-1) elements, ordered by containment of entry sets.
Everything here is a plain FinPoset plus index-level structure maps.
"""

import numpy as np

from .fincat.category import CategoryError, FinCategory, FunctorData
from .fincat.poset import FinPoset

DEFAULT_ELEMENT_CAP = 20000


class ResourceCapExceeded(Exception):
    pass


def mask_members(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _key(e):
    "canonical sort key: masks by (size, members), chains by (length, entries)"
    if isinstance(e, int):
        m = mask_members(e)
        return (0, len(m), m)
    return (1, len(e), tuple(_key(x) for x in e))


def element_name(e):
    if isinstance(e, int):
        return "".join(str(i) for i in mask_members(e))
    parts = [element_name(x) for x in e]
    if any(isinstance(x, tuple) for x in e):
        return "(" + "<".join(parts) + ")"
    return "<".join(parts)


def _elem_leq(a, b):
    if isinstance(a, int):
        return (a & b) == a
    return set(a) <= set(b)


def _build_poset(elements, name, cap):
    if cap is not None and len(elements) > cap:
        raise ResourceCapExceeded(
            "%s has %d elements, over the cap %d" % (name, len(elements), cap))
    elements = sorted(elements, key=_key)
    n = len(elements)
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            leq[i, j] = _elem_leq(a, b)
    return FinPoset(elements, leq, name=name)


def _chains_of(elements):
    "all nonempty strictly increasing tuples over the given elements"
    elements = sorted(elements, key=_key)
    bigger = {e: [f for f in elements if e != f and _elem_leq(e, f)]
              for e in elements}
    out = []

    def grow(chain):
        out.append(tuple(chain))
        for f in bigger[chain[-1]]:
            chain.append(f)
            grow(chain)
            chain.pop()

    for e in elements:
        grow([e])
    return out


def sd_delta(n, m, cap=DEFAULT_ELEMENT_CAP):
    "the poset underlying the m-fold subdivided n-simplex"
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    full = (1 << (n + 1)) - 1
    elems = [s for s in range(1, full + 1)]
    for level in range(2, m + 1):
        elems = _chains_of(elems)
        if cap is not None and len(elems) > cap:
            raise ResourceCapExceeded("subdivision level %d exceeds cap" % level)
    p = _build_poset(elems, "sd%d-delta[%d]" % (m, n), cap)
    p.level, p.dim, p.horn_k = m, n, None
    return p


def sd_horn(n, k, m, cap=DEFAULT_ELEMENT_CAP):
    """The m-subdivided k-horn of the n-simplex, with its inclusion.

    Returns (poset, inclusion) where inclusion[i] is the index of horn
    element i inside sd_delta(n, m).
    """
    if not (0 <= k <= n and n >= 1):
        raise ValueError("need 0 <= k <= n and n >= 1")
    full = (1 << (n + 1)) - 1
    banned = {full, full & ~(1 << k)}
    elems = [s for s in range(1, full + 1) if s not in banned]
    for _ in range(2, m + 1):
        elems = _chains_of(elems)
        if cap is not None and len(elems) > cap:
            raise ResourceCapExceeded("subdivision exceeds cap")
    p = _build_poset(elems, "sd%d-horn%d[%d]" % (m, k, n), cap)
    p.level, p.dim, p.horn_k = m, n, k
    delta = sd_delta(n, m, cap=cap)
    inclusion = np.array([delta.index(e) for e in p.elements], dtype=np.int64)
    return p, inclusion


def k_cone_poset(d):
    """K(D) for a poset D: two copies of D plus a partial initial element.

    Returns a FinPoset whose elements are (0, e), (1, e) and ("k",), with
    the structure maps attached as .part0/.part1/.kvert index arrays.
    """
    n = d.n
    elems = [(0, e) for e in d.elements] + [("k",)] + [(1, e) for e in d.elements]
    size = 2 * n + 1
    leq = np.zeros((size, size), dtype=bool)
    kv = n
    idx0 = {e: i for i, e in enumerate(d.elements)}

    def i0(e):
        return idx0[e]

    def i1(e):
        return n + 1 + idx0[e]

    for a in range(size):
        leq[a, a] = True
    for x in d.elements:
        for y in d.elements:
            if d.leq[idx0[x], idx0[y]]:
                leq[i0(x), i0(y)] = True
                leq[i1(x), i1(y)] = True
                leq[i0(x), i1(y)] = True
        leq[kv, i1(x)] = True
    p = FinPoset(elems, leq, name="K(%s)" % (d.name or "?"))
    p.base = d
    p.part0 = np.array([i0(e) for e in d.elements], dtype=np.int64)
    p.part1 = np.array([i1(e) for e in d.elements], dtype=np.int64)
    p.kvert = kv
    return p


def k_cone(d):
    """K(D) for a finite category D, as a category.

    Objects are two copies of Ob(D) plus the partial initial object k; the
    0-copy maps to the 1-copy, and k maps into every 1-copy object.
    """
    obj = ["0:%s" % o for o in d.obj_names] + ["k"] + ["1:%s" % o for o in d.obj_names]
    n_obj = d.n_obj
    kv = n_obj

    def o0(i):
        return i

    def o1(i):
        return n_obj + 1 + i

    mors = []
    mor_id = {}

    def add(name, a, b):
        mor_id[name] = len(mors)
        mors.append((name, a, b))

    for tag in ("0", "1", "01"):
        for m in range(d.n_mor):
            a, b = int(d.dom[m]), int(d.cod[m])
            src = o0(a) if tag in ("0", "01") else o1(a)
            dst = o1(b) if tag in ("1", "01") else o0(b)
            add("%s:%s" % (tag, d.mor_names[m]), src, dst)
    add("id_k", kv, kv)
    for i in range(n_obj):
        add("k->1:%s" % d.obj_names[i], kv, o1(i))

    n_mor = len(mors)
    dom = np.array([a for _, a, _ in mors], dtype=np.int64)
    cod = np.array([b for _, _, b in mors], dtype=np.int64)
    ident = np.empty(len(obj), dtype=np.int64)
    for i in range(n_obj):
        ident[o0(i)] = mor_id["0:%s" % d.mor_names[int(d.ident[i])]]
        ident[o1(i)] = mor_id["1:%s" % d.mor_names[int(d.ident[i])]]
    ident[kv] = mor_id["id_k"]
    comp = np.full((n_mor, n_mor), -1, dtype=np.int64)

    def cid(tag, m):
        return mor_id["%s:%s" % (tag, d.mor_names[m])]

    for f in range(d.n_mor):
        for g in range(d.n_mor):
            h = int(d.comp[f, g])
            if h < 0:
                continue
            comp[cid("0", f), cid("0", g)] = cid("0", h)
            comp[cid("1", f), cid("1", g)] = cid("1", h)
            comp[cid("0", f), cid("01", g)] = cid("01", h)
            comp[cid("01", f), cid("1", g)] = cid("01", h)
    for i in range(n_obj):
        kmap = mor_id["k->1:%s" % d.obj_names[i]]
        comp[mor_id["id_k"], kmap] = kmap
        comp[kmap, ident[o1(i)]] = kmap
        for g in range(d.n_mor):
            if d.dom[g] == i:
                comp[kmap, cid("1", g)] = mor_id["k->1:%s" % d.obj_names[int(d.cod[g])]]
    comp[mor_id["id_k"], mor_id["id_k"]] = mor_id["id_k"]
    for m in range(n_mor):
        a, b = int(dom[m]), int(cod[m])
        comp[ident[a], m] = m
        comp[m, ident[b]] = m
    cat = FinCategory(obj, [nm for nm, _, _ in mors], dom, cod, ident, comp,
                      name="K(%s)" % (d.name or "?"))
    cat.base = d
    cat.kvert = kv
    return cat


def k_functor(F):
    "K applied to a functor: copies F on both levels and sends k to k"
    ks, kt = k_cone(F.source), k_cone(F.target)
    n_s, n_t = F.source.n_obj, F.target.n_obj
    obj_map = np.empty(ks.n_obj, dtype=np.int64)
    for i in range(n_s):
        obj_map[i] = F.obj(i)
        obj_map[n_s + 1 + i] = n_t + 1 + F.obj(i)
    obj_map[n_s] = n_t
    mor_map = np.empty(ks.n_mor, dtype=np.int64)
    for tag in ("0", "1", "01"):
        for m in range(F.source.n_mor):
            mor_map[ks.mor_id("%s:%s" % (tag, F.source.mor_names[m]))] = \
                kt.mor_id("%s:%s" % (tag, F.target.mor_names[F.mor(m)]))
    mor_map[ks.mor_id("id_k")] = kt.mor_id("id_k")
    for i in range(n_s):
        mor_map[ks.mor_id("k->1:%s" % F.source.obj_names[i])] = \
            kt.mor_id("k->1:%s" % F.target.obj_names[F.obj(i)])
    return FunctorData(ks, kt, obj_map, mor_map)


def p_embedding(n, cap=DEFAULT_ELEMENT_CAP):
    """Order isomorphism K(c Sd² Λⁿ[n]) → 𝒫 ⊂ c Sd² Δ[n].

    (v, 0) ↦ v;  (v, 1) ↦ v with the full set appended;  k ↦ (full,).
    Returns (kposet, delta, image) with image[i] the delta index of kposet
    element i; raises if the map fails to be an order embedding.
    """
    horn, _ = sd_horn(n, n, 2, cap=cap)
    delta = sd_delta(n, 2, cap=cap)
    kp = k_cone_poset(horn)
    full = (1 << (n + 1)) - 1
    image = np.empty(kp.n, dtype=np.int64)
    for i, e in enumerate(kp.elements):
        if e == ("k",):
            image[i] = delta.index((full,))
        elif e[0] == 0:
            image[i] = delta.index(e[1])
        else:
            image[i] = delta.index(tuple(e[1]) + (full,))
    if len(set(image.tolist())) != kp.n:
        raise CategoryError("p_embedding image not injective")
    sub = delta.leq[np.ix_(image, image)]
    if not np.array_equal(sub, kp.leq):
        raise CategoryError("p_embedding is not an order embedding")
    return kp, delta, image


def retraction(n, cap=DEFAULT_ELEMENT_CAP):
    """Monotone retraction r: c Sd² Δ[n] → 𝒫 fixing 𝒫.

    Deletes the entry full∖{n} from a chain and, if the full set was not
    already present, appends it.  Returns (delta, r) with r an index array;
    monotonicity and r∘incl = id are verified before returning.
    """
    delta = sd_delta(n, 2, cap=cap)
    full = (1 << (n + 1)) - 1
    face = full & ~(1 << n)
    r = np.empty(delta.n, dtype=np.int64)
    for i, chain in enumerate(delta.elements):
        if face not in chain:
            r[i] = i
            continue
        rest = tuple(s for s in chain if s != face)
        if full not in rest:
            rest = rest + (full,)
        r[i] = delta.index(rest)
    # retraction and monotonicity checks
    fixed = [i for i, chain in enumerate(delta.elements) if face not in chain]
    if not all(r[i] == i for i in fixed):
        raise CategoryError("retraction does not fix the embedded subposet")
    if (delta.leq & ~delta.leq[r][:, r]).any():
        i, j = np.argwhere(delta.leq & ~delta.leq[r][:, r])[0]
        raise CategoryError(
            "retraction not monotone at %s <= %s"
            % (element_name(delta.elements[i]), element_name(delta.elements[j])))
    return delta, r


def horn_automorphism(n, i, cap=DEFAULT_ELEMENT_CAP):
    """Automorphism of c Sd² Δ[n] carrying c Sd² Λ^i[n] onto c Sd² Λⁿ[n].

    Induced by the transposition (i n) applied entrywise to chains.
    Returns (delta, sigma) with sigma an index permutation; the horn
    restriction property is verified.
    """
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    delta = sd_delta(n, 2, cap=cap)

    def swap_mask(s):
        bi, bn = (s >> i) & 1, (s >> n) & 1
        s &= ~((1 << i) | (1 << n))
        return s | (bi << n) | (bn << i)

    sigma = np.empty(delta.n, dtype=np.int64)
    for idx, chain in enumerate(delta.elements):
        sigma[idx] = delta.index(tuple(sorted((swap_mask(s) for s in chain),
                                              key=_key)))
    if not np.array_equal(delta.leq[sigma][:, sigma], delta.leq):
        raise CategoryError("transposition did not induce an automorphism")
    horn_i, incl_i = sd_horn(n, i, 2, cap=cap)
    horn_n, incl_n = sd_horn(n, n, 2, cap=cap)
    if set(sigma[incl_i].tolist()) != set(incl_n.tolist()):
        raise CategoryError("automorphism does not carry horn %d to horn %d" % (i, n))
    return delta, sigma


def poset_to_dot(p, out=None):
    "DOT digraph of the covering relations, paper-figure style"
    lines = ["digraph poset {"]
    for i, e in enumerate(p.elements):
        label = element_name(e) if (isinstance(e, (int, tuple))) else str(e)
        lines.append('  n%d [label="%s"];' % (i, label))
    for i, j in p.covers:
        lines.append("  n%d -> n%d;" % (i, j))
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        with open(out, "w") as fh:
            fh.write(text)
    return text
