"""JSON (de)serialization of categories and functors.

Category files look like::

    {"objects": ["X", "Y"],
     "morphisms": [{"name": "f", "dom": "X", "cod": "Y"}, ...],
     "identities": {"X": "id_X", ...},
     "compose": [["f", "g", "gof"], ...]}

where ``[f, g, gof]`` means ``gof = g∘f``.  The loader rejects duplicate
names and non-total tables (via validate_category).
"""

import json

from .category import CategoryError, FinCategory, FunctorData, build_category


def category_to_dict(c):
    return {
        "objects": list(c.obj_names),
        "morphisms": [
            {"name": c.mor_names[m],
             "dom": c.obj_names[int(c.dom[m])],
             "cod": c.obj_names[int(c.cod[m])]}
            for m in range(c.n_mor)
        ],
        "identities": {c.obj_names[o]: c.mor_names[int(c.ident[o])]
                       for o in range(c.n_obj)},
        "compose": sorted(
            [c.mor_names[f], c.mor_names[g], c.mor_names[int(c.comp[f, g])]]
            for f in range(c.n_mor) for g in range(c.n_mor) if c.comp[f, g] >= 0
        ),
    }


def category_from_dict(data, name=""):
    try:
        objects = data["objects"]
        morphisms = [(m["name"], m["dom"], m["cod"]) for m in data["morphisms"]]
        identities = data["identities"]
        compose = data["compose"]
    except (KeyError, TypeError) as exc:
        raise CategoryError("malformed category data: %s" % exc)
    return build_category(objects, morphisms, identities, compose, name=name)


def save_category(c, path):
    with open(path, "w") as fh:
        json.dump(category_to_dict(c), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_category(path, name=None):
    with open(path) as fh:
        data = json.load(fh)
    return category_from_dict(data, name=name or str(path))


def functor_to_dict(F):
    s, t = F.source, F.target
    return {
        "objects": {s.obj_names[o]: t.obj_names[F.obj(o)] for o in range(s.n_obj)},
        "morphisms": {s.mor_names[m]: t.mor_names[F.mor(m)] for m in range(s.n_mor)},
    }


def functor_from_dict(data, source, target):
    try:
        return FunctorData.from_names(source, target,
                                      data["objects"], data["morphisms"]).validate()
    except KeyError as exc:
        raise CategoryError("malformed functor data: missing %s" % exc)
