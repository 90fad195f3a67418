"""Lifting problems and their outcome reports."""

FILLED = "filled"
EXHAUSTED = "exhausted"
BUDGET = "budget"

DEFAULT_BUDGET = 10_000_000


class LiftingProblem:
    """Extend a functor given on a subset A of a poset B into a category C.

    `subposet` lists B-element indices; `partial_functor` is a FunctorData
    from the poset-as-category of B restricted to A, into the ambient C.
    A may be down-closed or arbitrary.
    """

    def __init__(self, ambient, domain_poset, subposet, partial_functor):
        self.ambient = ambient
        self.domain_poset = domain_poset
        self.subposet = list(subposet)
        self.partial_functor = partial_functor


class LiftReport:
    def __init__(self, status, functor=None, nodes_explored=0, elapsed=0.0):
        self.status = status
        self.functor = functor
        self.nodes_explored = nodes_explored
        self.elapsed = elapsed

    @property
    def filled(self):
        return self.status == FILLED

    def __repr__(self):
        return "<LiftReport %s nodes=%d>" % (self.status, self.nodes_explored)


class HornReport:
    "outcome of one (n, k) horn within a fibrancy report"

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.status = FILLED
        self.boundaries_checked = 0
        self.probes_checked = 0
        self.truncated = False
        self.nodes = 0
        self.witness_boundary = None     # functor dict of the failing boundary
        self.sample_filler = None        # functor dict of one found filler

    def to_dict(self):
        out = {
            "n": self.n, "k": self.k, "status": self.status,
            "boundaries_checked": self.boundaries_checked,
            "probes_checked": self.probes_checked,
            "truncated": self.truncated,
            "nodes": self.nodes,
        }
        if self.witness_boundary is not None:
            out["witness_boundary"] = self.witness_boundary
        if self.sample_filler is not None:
            out["sample_filler"] = self.sample_filler
        return out


class FibrancyReport:
    def __init__(self, category_name, level, n_max, budget, boundary_cap):
        self.category_name = category_name
        self.level = level
        self.n_max = n_max
        self.budget = budget
        self.boundary_cap = boundary_cap
        self.horns = {}

    def add(self, horn_report):
        self.horns[(horn_report.n, horn_report.k)] = horn_report

    @property
    def status(self):
        "filled iff every horn filled; a single budget makes it inconclusive"
        worst = FILLED
        for rep in self.horns.values():
            if rep.status == EXHAUSTED:
                return EXHAUSTED
            if rep.status == BUDGET:
                worst = BUDGET
        return worst

    @property
    def passed(self):
        return self.status == FILLED

    def first_failure(self):
        for key in sorted(self.horns):
            if self.horns[key].status == EXHAUSTED:
                return key
        return None

    def to_dict(self):
        return {
            "schema": 1,
            "category": self.category_name,
            "level": self.level,
            "n_max": self.n_max,
            "budget": self.budget,
            "boundary_cap": self.boundary_cap,
            "status": self.status,
            "horns": [self.horns[key].to_dict() for key in sorted(self.horns)],
        }
