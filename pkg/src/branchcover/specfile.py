"""File format for branched cover specifications.

A spec file is JSON with the following keys (all simplices are strictly
ascending lists of non-negative integers):

    complex                 required, list of simplices
    stratification          optional, descending singular levels of the
                            base, top level (dim m-2) first
    branch                  optional, list of simplices of the locus
    branch_stratification   optional, levels for the locus
    monodromy               optional: {"degree": d, "basepoint": v,
                            "assignments": {"u->v": [images]}}
    options                 optional: {"perversity": "lower"|"upper",
                            "subdivisions": 0..2}

Assignments are 0-indexed image arrays keyed by the generator edges of
the deterministic presentation of the complement, computed after the
requested subdivisions; `generators` prints that contract.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SpecFileError
from .covering import BranchedCoverSpec, MonodromyRep
from .simplicial import SimplicialComplex, validate_complex
from .stratified import StratifiedComplex, subdivide_with_subcomplexes


@dataclass
class SpecData:
    complex: list
    stratification: list | None = None
    branch: list | None = None
    branch_stratification: list | None = None
    monodromy: dict | None = None
    options: dict = field(default_factory=dict)

    @property
    def perversity(self) -> str:
        return self.options.get("perversity", "lower")

    @property
    def subdivisions(self) -> int:
        return self.options.get("subdivisions", 0)


def parse_spec_text(text: str) -> SpecData:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SpecFileError("top level must be an object")
    known = {"complex", "stratification", "branch", "branch_stratification",
             "monodromy", "options"}
    for key in raw:
        if key not in known:
            raise SpecFileError(f"unknown key {key!r}")
    if "complex" not in raw:
        raise SpecFileError("missing required key 'complex'")
    data = SpecData(
        complex=raw["complex"],
        stratification=raw.get("stratification"),
        branch=raw.get("branch"),
        branch_stratification=raw.get("branch_stratification"),
        monodromy=raw.get("monodromy"),
        options=raw.get("options", {}),
    )
    opts = data.options
    if not isinstance(opts, dict):
        raise SpecFileError("'options' must be an object")
    if opts.get("perversity", "lower") not in ("lower", "upper", "zero", "top"):
        raise SpecFileError("options.perversity must be lower, upper, zero or top")
    subs = opts.get("subdivisions", 0)
    if subs not in (0, 1, 2):
        raise SpecFileError("options.subdivisions must be 0, 1 or 2")
    if data.monodromy is not None:
        mono = data.monodromy
        if not isinstance(mono, dict) or "degree" not in mono or "assignments" not in mono:
            raise SpecFileError("'monodromy' needs keys degree and assignments")
        if not isinstance(mono["degree"], int) or mono["degree"] < 1:
            raise SpecFileError("monodromy.degree must be a positive integer")
        if not isinstance(mono["assignments"], dict):
            raise SpecFileError("monodromy.assignments must be an object")
    return data


def _parse_edge_key(key: str) -> tuple[int, int]:
    parts = key.split("->")
    if len(parts) != 2:
        raise SpecFileError(f"assignment key {key!r} is not of the form 'u->v'")
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise SpecFileError(f"assignment key {key!r} is not of the form 'u->v'") from None
    if not u < v:
        raise SpecFileError(f"assignment key {key!r} must be ascending")
    return (u, v)


def _simplices(raw: list, where: str) -> list:
    if not isinstance(raw, list):
        raise SpecFileError(f"{where} must be a list of simplices")
    for s in raw:
        if not isinstance(s, list):
            raise SpecFileError(f"{where}: entry {s!r} is not a list")
    return [tuple(s) for s in raw]


@dataclass
class LoadedSpec:
    base: StratifiedComplex
    branch: StratifiedComplex | None
    monodromy: MonodromyRep | None
    basepoint: int | None
    perversity: str
    subdivisions: int

    def cover_spec(self) -> BranchedCoverSpec:
        if self.monodromy is None:
            raise SpecFileError("this command needs a 'monodromy' section")
        return BranchedCoverSpec(self.base, self.branch, self.monodromy,
                                 basepoint=self.basepoint)


def _stratified_from_lists(complex_: SimplicialComplex, levels_raw: list | None,
                           where: str) -> StratifiedComplex:
    singular = []
    if levels_raw is not None:
        if not isinstance(levels_raw, list):
            raise SpecFileError(f"{where} must be a list of levels")
        for level in levels_raw:
            singular.append(validate_complex(_simplices(level, where)))
    return StratifiedComplex(complex_, singular)


def load_spec(data: SpecData) -> LoadedSpec:
    """Validate, subdivide as requested and assemble domain objects."""
    base_c = validate_complex(_simplices(data.complex, "complex"))
    base = _stratified_from_lists(base_c, data.stratification, "stratification")

    branch = None
    if data.branch:
        branch_c = validate_complex(_simplices(data.branch, "branch"))
        branch = _stratified_from_lists(branch_c, data.branch_stratification,
                                        "branch_stratification")

    for _ in range(data.subdivisions):
        if branch is not None:
            base, (branch,) = subdivide_with_subcomplexes(base, [branch])
        else:
            base, _extras = subdivide_with_subcomplexes(base, [])

    monodromy = None
    basepoint = None
    if data.monodromy is not None:
        from .presentation import edge_path_presentation
        from .simplicial import full_subcomplex

        basepoint = data.monodromy.get("basepoint")
        branch_vertices = set(branch.complex.vertices) if branch is not None else set()
        complement = full_subcomplex(
            base.complex, (v for v in base.complex.vertices if v not in branch_vertices))
        if complement.n_simplices() == 0:
            raise SpecFileError("complement of the branch locus is empty")
        bp = basepoint if basepoint is not None else min(complement.vertices)
        pres = edge_path_presentation(complement, bp)
        assignments = {}
        for key, val in data.monodromy["assignments"].items():
            if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
                raise SpecFileError(f"assignment {key!r} must be a list of integers")
            assignments[_parse_edge_key(key)] = tuple(val)
        monodromy = MonodromyRep.from_edge_dict(pres, data.monodromy["degree"], assignments)

    return LoadedSpec(base, branch, monodromy, basepoint,
                      data.perversity, data.subdivisions)


# ---------------------------------------------------------------------------
# serialization


def spec_to_dict(base: StratifiedComplex, branch: StratifiedComplex | None,
                 monodromy: MonodromyRep | None, presentation=None,
                 perversity: str = "lower", basepoint: int | None = None) -> dict:
    out: dict = {"complex": [list(s) for s in base.complex.all_simplices()]}
    m = base.dim
    levels = []
    for j in range(m - 2, -1, -1):
        levels.append([list(s) for s in base.levels[j].all_simplices()])
    while levels and not levels[-1]:
        levels.pop()
    if levels:
        out["stratification"] = levels
    if branch is not None:
        out["branch"] = [list(s) for s in branch.complex.all_simplices()]
        rm = branch.dim
        blevels = []
        for j in range(rm - 2, -1, -1):
            blevels.append([list(s) for s in branch.levels[j].all_simplices()])
        while blevels and not blevels[-1]:
            blevels.pop()
        if blevels:
            out["branch_stratification"] = blevels
    if monodromy is not None:
        if presentation is None:
            raise SpecFileError("serializing monodromy needs the presentation")
        assignments = {
            f"{u}->{v}": list(monodromy.images[i])
            for i, (u, v) in enumerate(presentation.generators)
        }
        out["monodromy"] = {
            "degree": monodromy.degree,
            "basepoint": presentation.basepoint,
            "assignments": assignments,
        }
    out["options"] = {"perversity": perversity, "subdivisions": 0}
    return out


def spec_to_text(spec_dict: dict) -> str:
    return json.dumps(spec_dict, sort_keys=True, indent=2) + "\n"
