"""Relative categories and partial-model-category structure.

A RelStructure marks subclasses weq / cof / fib of a finite category and
carries explicit functorial-factorization data.  The three axiom checks
are exhaustive; pmc_search additionally quantifies over all subclass
pairs and factorization assignments for small categories.

Classes like "identities only" are not closed under isomorphism, so the
pushout/pullback stability checks accept any isomorphic copy of the
canonical square whose induced leg lies in the class.
"""

from itertools import combinations

import numpy as np

from .fincat.category import CategoryError, FinCategory
from .fincat.limits import PullbackSquare, PushoutSquare, pullback, pushout


class RelStructure:
    """Finite category with weak equivalences, (acyclic) cof/fib classes
    and functorial factorization data.

    `fact_obj[w] = (c, f)` with f∘c = w; `fact_mid[(w, w2, u, v)]` is the
    middle morphism of the factorized square (u, v): w -> w2.
    """

    def __init__(self, ambient, weq, cof, fib, fact_obj, fact_mid, name=""):
        self.ambient = ambient
        self.weq = frozenset(int(m) for m in weq)
        self.cof = frozenset(int(m) for m in cof)
        self.fib = frozenset(int(m) for m in fib)
        self.fact_obj = {int(w): (int(c), int(f)) for w, (c, f) in fact_obj.items()}
        self.fact_mid = {tuple(int(x) for x in k): int(v)
                         for k, v in fact_mid.items()}
        self.name = name or (ambient.name + "-rel")
        self._validate()

    def _validate(self):
        c = self.ambient
        for o in range(c.n_obj):
            if int(c.ident[o]) not in self.weq:
                raise CategoryError("weq must contain the identity of %r"
                                    % c.obj_names[o])
        for f in self.weq:
            for g in self.weq:
                h = c.comp[f, g]
                if h >= 0 and int(h) not in self.weq:
                    raise CategoryError(
                        "weq not closed under composition at (%s, %s)"
                        % (c.mor_names[f], c.mor_names[g]))
        if not self.cof <= self.weq or not self.fib <= self.weq:
            raise CategoryError("cof and fib must be subclasses of weq")
        for w in self.weq:
            if w not in self.fact_obj:
                raise CategoryError("missing factorization of %s" % c.mor_names[w])
            cw, fw = self.fact_obj[w]
            if c.comp[cw, fw] != w:
                raise CategoryError("factorization of %s does not compose back"
                                    % c.mor_names[w])

    def factor(self, w):
        return self.fact_obj[int(w)]

    def factor_mid(self, w, w2, u, v):
        return self.fact_mid[(int(w), int(w2), int(u), int(v))]

    def squares(self):
        "commuting squares (u, v): w -> w2 in the arrow category of weq"
        c = self.ambient
        ws = sorted(self.weq)
        for w in ws:
            for w2 in ws:
                for u in sorted(self.weq):
                    if c.dom[u] != c.dom[w] or c.cod[u] != c.dom[w2]:
                        continue
                    for v in sorted(self.weq):
                        if c.dom[v] != c.cod[w] or c.cod[v] != c.cod[w2]:
                            continue
                        if c.comp[w, v] == c.comp[u, w2]:
                            yield w, w2, u, v

    def to_dict(self):
        from .fincat.io import category_to_dict
        c = self.ambient
        nm = c.mor_names
        out = category_to_dict(c)
        out["weq"] = [nm[m] for m in sorted(self.weq)]
        out["cof"] = [nm[m] for m in sorted(self.cof)]
        out["fib"] = [nm[m] for m in sorted(self.fib)]
        factor = {}
        for w, (cw, fw) in sorted(self.fact_obj.items()):
            mids = {}
            for (w0, w2, u, v), mid in sorted(self.fact_mid.items()):
                if w0 == w:
                    mids["%s|%s|%s" % (nm[u], nm[v], nm[w2])] = nm[mid]
            factor[nm[w]] = {"c": nm[cw], "f": nm[fw], "mid": mids}
        out["factor"] = factor
        return out

    @classmethod
    def from_dict(cls, data, name=""):
        from .fincat.io import category_from_dict
        cat = category_from_dict(data, name=name)
        mid = {}
        fact = {}
        for w_name, entry in data.get("factor", {}).items():
            w = cat.mor_id(w_name)
            fact[w] = (cat.mor_id(entry["c"]), cat.mor_id(entry["f"]))
            for key, m_name in entry.get("mid", {}).items():
                u_name, v_name, w2_name = key.split("|")
                mid[(w, cat.mor_id(w2_name), cat.mor_id(u_name),
                     cat.mor_id(v_name))] = cat.mor_id(m_name)
        return cls(cat,
                   [cat.mor_id(m) for m in data["weq"]],
                   [cat.mor_id(m) for m in data["cof"]],
                   [cat.mor_id(m) for m in data["fib"]],
                   fact, mid, name=name)


def isomorphisms(c, a, b):
    "morphism ids of the isomorphisms a -> b"
    out = []
    ea, eb = int(c.ident[a]), int(c.ident[b])
    for u in c.hom(a, b):
        if any(c.comp[u, v] == ea and c.comp[v, u] == eb for v in c.hom(b, a)):
            out.append(u)
    return out


def corrected_pushout(c, f, g, leg_class=None):
    """Canonical pushout of (f, g), with leg_g adjusted into `leg_class`.

    Every pushout square is the canonical one postcomposed with an iso, so
    when the cobase-change leg must land in a class that is not iso-closed
    we search the isomorphic copies.  Returns None if no pushout exists,
    or raises if none of the copies has its leg in the class.
    """
    sq = pushout(c, f, g)
    if sq is None or leg_class is None or int(sq.leg_g) in leg_class:
        return sq
    for w2 in range(c.n_obj):
        for u in isomorphisms(c, sq.apex, w2):
            if int(c.comp[sq.leg_g, u]) in leg_class:
                return PushoutSquare(w2, int(c.comp[sq.leg_f, u]),
                                     int(c.comp[sq.leg_g, u]))
    raise CategoryError("no pushout square has its induced leg in the class")


def corrected_pullback(c, f, g, proj_class=None):
    "dual of corrected_pushout: proj_g adjusted into `proj_class`"
    sq = pullback(c, f, g)
    if sq is None or proj_class is None or int(sq.proj_g) in proj_class:
        return sq
    for p2 in range(c.n_obj):
        for u in isomorphisms(c, p2, sq.apex):
            if int(c.comp[u, sq.proj_g]) in proj_class:
                return PullbackSquare(p2, int(c.comp[u, sq.proj_f]),
                                      int(c.comp[u, sq.proj_g]))
    raise CategoryError("no pullback square has its induced projection in the class")


def check_two_of_six(r):
    """If s∘r and t∘s are weak equivalences then so are r, s, t and t∘s∘r.

    Returns (True, None) or (False, (r, s, t, which)) naming the first
    violating triple.
    """
    c = r.ambient
    weq = r.weq
    for s in range(c.n_mor):
        rs = [x for x in range(c.n_mor)
              if c.cod[x] == c.dom[s] and int(c.comp[x, s]) in weq]
        ts = [x for x in range(c.n_mor)
              if c.dom[x] == c.cod[s] and int(c.comp[s, x]) in weq]
        if not rs or not ts:
            continue
        if int(s) not in weq:
            return False, (rs[0], s, ts[0], "s")
        for x in rs:
            if int(x) not in weq:
                return False, (x, s, ts[0], "r")
        for x in ts:
            if int(x) not in weq:
                return False, (rs[0], s, x, "t")
        for x in rs:
            for y in ts:
                if int(c.comp[c.comp[x, s], y]) not in weq:
                    return False, (x, s, y, "tsr")
    return True, None


def check_class_closure(r):
    """Cofibrations are stable under pushout along arbitrary maps;
    fibrations dually under pullback.  Existence is part of the check.

    Returns (True, None) or (False, witness dict).
    """
    c = r.ambient
    for f in sorted(r.cof):
        for g in range(c.n_mor):
            if c.dom[g] != c.dom[f]:
                continue
            if pushout(c, f, g) is None:
                return False, {"kind": "pushout-missing", "f": f, "g": g}
            try:
                corrected_pushout(c, f, g, r.cof)
            except CategoryError:
                return False, {"kind": "pushout-escapes-cof", "f": f, "g": g}
    for f in sorted(r.fib):
        for g in range(c.n_mor):
            if c.cod[g] != c.cod[f]:
                continue
            if pullback(c, f, g) is None:
                return False, {"kind": "pullback-missing", "f": f, "g": g}
            try:
                corrected_pullback(c, f, g, r.fib)
            except CategoryError:
                return False, {"kind": "pullback-escapes-fib", "f": f, "g": g}
    return True, None


def check_factorization(r):
    """Factorizations compose back, land in the classes, and the middle
    maps are functorial over the arrow category of weq.

    Returns (True, None) or (False, witness dict).
    """
    c = r.ambient
    for w in sorted(r.weq):
        cw, fw = r.fact_obj[w]
        if int(cw) not in r.cof or int(fw) not in r.fib:
            return False, {"kind": "factor-outside-classes", "w": w}
        if c.comp[cw, fw] != w:
            return False, {"kind": "factor-broken", "w": w}
    squares = list(r.squares())
    for (w, w2, u, v) in squares:
        key = (w, w2, u, v)
        if key not in r.fact_mid:
            return False, {"kind": "mid-missing", "square": key}
        m = r.fact_mid[key]
        cw, fw = r.fact_obj[w]
        cw2, fw2 = r.fact_obj[w2]
        if c.comp[cw, m] != c.comp[u, cw2] or c.comp[m, fw2] != c.comp[fw, v]:
            return False, {"kind": "mid-squares-broken", "square": key}
    for (w, w2, u, v) in squares:
        if w == w2 and u == c.ident[c.dom[w]] and v == c.ident[c.cod[w]]:
            cw, _ = r.fact_obj[w]
            if r.fact_mid[(w, w2, u, v)] != c.ident[c.cod[cw]]:
                return False, {"kind": "mid-identity-broken", "w": w}
    square_set = set(squares)
    for (w, w2, u1, v1) in squares:
        for (w2b, w3, u2, v2) in squares:
            if w2b != w2:
                continue
            u = int(c.comp[u1, u2])
            v = int(c.comp[v1, v2])
            if (w, w3, u, v) not in square_set:
                return False, {"kind": "arrow-category-not-closed",
                               "square": (w, w3, u, v)}
            lhs = r.fact_mid[(w, w3, u, v)]
            rhs = c.comp[r.fact_mid[(w, w2, u1, v1)],
                         r.fact_mid[(w2, w3, u2, v2)]]
            if lhs != rhs:
                return False, {"kind": "mid-composition-broken",
                               "square": (w, w3, u, v)}
    return True, None


def check_all(r):
    "run the three axiom checks; returns dict of (ok, witness) pairs"
    return {"two_of_six": check_two_of_six(r),
            "class_closure": check_class_closure(r),
            "factorization": check_factorization(r)}


def passes_all(r):
    return all(ok for ok, _ in check_all(r).values())


def _trivial_left(c):
    "factorization w = w∘id with cof = identities"
    fact_obj = {}
    fact_mid = {}
    idents = set(int(i) for i in c.ident)
    for w in range(c.n_mor):
        fact_obj[w] = (int(c.ident[int(c.dom[w])]), w)
    return fact_obj, fact_mid, idents


def pmc_from_pullbacks(c):
    """(c, c) as a partial model category: cof = identities, fib = all.

    Requires all pullbacks; the three checks are re-run before returning.
    """
    from .fincat.limits import has_all_pullbacks
    ok, witness = has_all_pullbacks(c)
    if not ok:
        raise CategoryError("category lacks a pullback for cospan %r" % (witness,))
    weq = list(range(c.n_mor))
    fact_obj, _, idents = _trivial_left(c)
    fact_mid = {}
    r = RelStructure(c, weq, sorted(idents), weq, fact_obj, {},
                     name=c.name + "-pmc-pullbacks")
    for (w, w2, u, v) in r.squares():
        fact_mid[(w, w2, u, v)] = u
    r = RelStructure(c, weq, sorted(idents), weq, fact_obj, fact_mid,
                     name=c.name + "-pmc-pullbacks")
    _require_checks(r)
    return r


def pmc_from_pushouts(c):
    "(c, c) with cof = all, fib = identities; requires all pushouts"
    from .fincat.limits import has_all_pushouts
    ok, witness = has_all_pushouts(c)
    if not ok:
        raise CategoryError("category lacks a pushout for span %r" % (witness,))
    weq = list(range(c.n_mor))
    idents = set(int(i) for i in c.ident)
    fact_obj = {w: (w, int(c.ident[int(c.cod[w])])) for w in weq}
    r = RelStructure(c, weq, weq, sorted(idents), fact_obj, {},
                     name=c.name + "-pmc-pushouts")
    fact_mid = {}
    for (w, w2, u, v) in r.squares():
        fact_mid[(w, w2, u, v)] = v
    r = RelStructure(c, weq, weq, sorted(idents), fact_obj, fact_mid,
                     name=c.name + "-pmc-pushouts")
    _require_checks(r)
    return r


def _require_checks(r):
    for name, (ok, witness) in check_all(r).items():
        if not ok:
            raise CategoryError("constructed structure fails %s: %r" % (name, witness))


def _candidate_pairs(weq, idents):
    "deterministic candidate order: canonical pairs first, then by size"
    weq = sorted(weq)
    idset = sorted(idents)
    yield tuple(idset), tuple(weq)
    yield tuple(weq), tuple(idset)
    non_id = [m for m in weq if m not in idents]
    rest = []
    for kc in range(len(non_id) + 1):
        for cof_extra in combinations(non_id, kc):
            for kf in range(len(non_id) + 1):
                for fib_extra in combinations(non_id, kf):
                    cand = (tuple(sorted(idset + list(cof_extra))),
                            tuple(sorted(idset + list(fib_extra))))
                    rest.append((kc + kf, cand))
    emitted = {(tuple(idset), tuple(weq)), (tuple(weq), tuple(idset))}
    for _, cand in sorted(rest):
        if cand not in emitted:
            emitted.add(cand)
            yield cand


def _search_factorization(c, weq, cof, fib):
    "find (fact_obj, fact_mid) satisfying the functoriality laws, or None"
    choices = {}
    for w in sorted(weq):
        opts = [(cw, fw) for cw in sorted(cof) for fw in sorted(fib)
                if c.comp[cw, fw] == w]
        if not opts:
            return None, {"kind": "factorization-impossible", "w": w}
        choices[w] = opts
    ws = sorted(weq)

    def mids_for(assign):
        r_tmp = RelStructure.__new__(RelStructure)
        fact_mid = {}
        squares = []
        for w in ws:
            for w2 in ws:
                for u in sorted(weq):
                    if c.dom[u] != c.dom[w] or c.cod[u] != c.dom[w2]:
                        continue
                    for v in sorted(weq):
                        if (c.dom[v] != c.cod[w] or c.cod[v] != c.cod[w2]
                                or c.comp[w, v] != c.comp[u, w2]):
                            continue
                        squares.append((w, w2, u, v))
        for (w, w2, u, v) in squares:
            cw, fw = assign[w]
            cw2, fw2 = assign[w2]
            mids = [m for m in range(c.n_mor)
                    if c.dom[m] == c.cod[cw] and c.cod[m] == c.cod[cw2]
                    and c.comp[cw, m] == c.comp[u, cw2]
                    and c.comp[m, fw2] == c.comp[fw, v]]
            if not mids:
                return None
            fact_mid[(w, w2, u, v)] = mids
        return fact_mid

    def expand(idx, assign):
        if idx == len(ws):
            cand = mids_for(assign)
            if cand is None:
                return None
            # try mid choices; usually forced
            keys = sorted(cand)

            def pick(kidx, chosen):
                if kidx == len(keys):
                    r = RelStructure(c, weq, cof, fib, dict(assign), dict(chosen))
                    ok, _ = check_factorization(r)
                    return r if ok else None
                key = keys[kidx]
                for m in cand[key]:
                    chosen[key] = m
                    got = pick(kidx + 1, chosen)
                    if got is not None:
                        return got
                    del chosen[key]
                return None

            return pick(0, {})
        w = ws[idx]
        for opt in choices[w]:
            assign[w] = opt
            got = expand(idx + 1, assign)
            if got is not None:
                return got
            del assign[w]
        return None

    return expand(0, {}), None


def pmc_search(c, weq, guard=12):
    """Exhaustive search for a PMC structure with the given weq class.

    Returns (RelStructure, certificate_log) where the structure is None
    when no candidate works; the log records the failing axiom for every
    (cof, fib) candidate pair examined.
    """
    if c.n_mor > guard:
        raise CategoryError("pmc_search guarded at %d morphisms" % guard)
    weq = frozenset(int(m) for m in weq)
    idents = set(int(i) for i in c.ident)
    ok, witness = check_two_of_six(
        _bare_structure(c, weq, idents & weq, idents & weq))
    log = []
    names = c.mor_names
    if not ok:
        log.append({"cof": [], "fib": [],
                    "failure": "two-of-six fails at %r" % (witness,)})
        return None, log
    for cof, fib in _candidate_pairs(weq, idents):
        entry = {"cof": [names[m] for m in cof], "fib": [names[m] for m in fib]}
        r0 = _bare_structure(c, weq, cof, fib)
        ok, witness = check_class_closure(r0)
        if not ok:
            entry["failure"] = _closure_failure_text(c, witness)
            log.append(entry)
            continue
        structure, fail = _search_factorization(c, weq, cof, fib)
        if structure is None:
            if fail is not None:
                entry["failure"] = ("no factorization of %s through the classes"
                                    % names[fail["w"]])
            else:
                entry["failure"] = "no functorial middle maps exist"
            log.append(entry)
            continue
        entry["failure"] = None
        log.append(entry)
        return structure, log
    return None, log


def _closure_failure_text(c, witness):
    f, g = witness["f"], witness["g"]
    kind = witness["kind"]
    if kind == "pushout-missing":
        return "pushout of (%s, %s) absent" % (c.mor_names[f], c.mor_names[g])
    if kind == "pullback-missing":
        return "pullback of (%s, %s) absent" % (c.mor_names[f], c.mor_names[g])
    if kind == "pushout-escapes-cof":
        return "pushout of %s along %s leaves cof" % (c.mor_names[f], c.mor_names[g])
    return "pullback of %s along %s leaves fib" % (c.mor_names[f], c.mor_names[g])


def _bare_structure(c, weq, cof, fib):
    "RelStructure with dummy factorization, for running single checks"
    r = RelStructure.__new__(RelStructure)
    r.ambient = c
    r.weq = frozenset(int(m) for m in weq)
    r.cof = frozenset(int(m) for m in cof)
    r.fib = frozenset(int(m) for m in fib)
    r.fact_obj = {}
    r.fact_mid = {}
    r.name = c.name + "-candidate"
    return r


def zigzag_components(r):
    "partition of objects into weak-equivalence zig-zag components"
    c = r.ambient
    parent = list(range(c.n_obj))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w in r.weq:
        a, b = find(int(c.dom[w])), find(int(c.cod[w]))
        if a != b:
            parent[a] = b
    groups = {}
    for o in range(c.n_obj):
        groups.setdefault(find(o), []).append(o)
    return sorted(groups.values())


def restrict_homotopically_full(r, objects):
    """Restriction of a PMC to a union of zig-zag components.

    `objects` must be closed under weak-equivalence zig-zags; the classes
    and factorization data restrict to the full subcategory on them.
    """
    c = r.ambient
    keep = sorted(set(int(o) for o in objects))
    comp_of = {}
    for comp in zigzag_components(r):
        for o in comp:
            comp_of[o] = tuple(comp)
    if any(o not in keep for o0 in keep for o in comp_of[o0]):
        raise CategoryError("object set is not closed under zig-zags")
    obj_pos = {o: i for i, o in enumerate(keep)}
    mors = [m for m in range(c.n_mor)
            if int(c.dom[m]) in obj_pos and int(c.cod[m]) in obj_pos]
    mor_pos = {m: i for i, m in enumerate(mors)}
    comp_tab = np.full((len(mors), len(mors)), -1, dtype=np.int64)
    for a in mors:
        for b in mors:
            h = c.comp[a, b]
            if h >= 0:
                comp_tab[mor_pos[a], mor_pos[b]] = mor_pos[int(h)]
    sub = FinCategory([c.obj_names[o] for o in keep],
                      [c.mor_names[m] for m in mors],
                      [obj_pos[int(c.dom[m])] for m in mors],
                      [obj_pos[int(c.cod[m])] for m in mors],
                      [mor_pos[int(c.ident[o])] for o in keep],
                      comp_tab, name=c.name + "-restricted")
    weq = [mor_pos[m] for m in r.weq if m in mor_pos]
    cof = [mor_pos[m] for m in r.cof if m in mor_pos]
    fib = [mor_pos[m] for m in r.fib if m in mor_pos]
    fact_obj = {mor_pos[w]: (mor_pos[cw], mor_pos[fw])
                for w, (cw, fw) in r.fact_obj.items() if w in mor_pos}
    fact_mid = {}
    for (w, w2, u, v), m in r.fact_mid.items():
        if all(x in mor_pos for x in (w, w2, u, v, m)):
            fact_mid[(mor_pos[w], mor_pos[w2], mor_pos[u], mor_pos[v])] = mor_pos[m]
    return RelStructure(sub, weq, cof, fib, fact_obj, fact_mid,
                        name=r.name + "-restricted")
