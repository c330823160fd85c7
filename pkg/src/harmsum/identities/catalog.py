"""The relation catalog: declarative records loaded from the JSON files next to this module.

A record states ``lhs == rhs`` as two expression strings.  ``kind`` says how
the two sides are evaluated:

    sum        harmonic sum at integer N against Mellin transforms and constants
    algebraic  both sides exact rationals at integer N
    mellin     Mellin transforms on both sides
    moment     as ``mellin``, with rational functions of N
    constant   no N; ``params`` expands ``{k}`` placeholders
    integral   ``lhs`` is an integrand in x, integrated over [0, X]; ``rhs`` is a
               function of x evaluated at X

A record with ``variant == "as_written"`` keeps a formula exactly as printed
in the source when it is known to be wrong; the matching ``corrected`` record
carries the fix.  Only the non-as-written records count towards a pass.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product as cartesian
from pathlib import Path

from .. import expr as E

KINDS = ("sum", "algebraic", "mellin", "moment", "constant", "integral")
SECTIONS = ("2", "3", "4", "5", "6", "8", "appendix")
CATALOG_FILES = (
    "catalog_double.json",
    "catalog_mellin.json",
    "catalog_triple.json",
    "catalog_higher.json",
    "catalog_appendix.json",
)
INTEGRAL_POINTS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class RelationRecord:
    id: str
    anchor: str
    lhs: str
    rhs: str
    kind: str = "sum"
    variant: str | None = None
    note: str = ""
    params: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def key(self) -> str:
        return f"{self.id}[{self.variant}]" if self.variant else self.id

    @property
    def counts(self) -> bool:
        """True unless this is a known-wrong transcription kept for reference."""
        return self.variant != "as_written"

    @property
    def depends_on_N(self) -> bool:
        return self.kind in ("sum", "algebraic", "mellin", "moment")

    def instances(self) -> list[tuple[str, str, dict]]:
        """(lhs, rhs, parameter values) for every parameter combination."""
        if not self.params:
            return [(self.lhs, self.rhs, {})]
        names = sorted(self.params)
        out = []
        for values in cartesian(*(self.params[n] for n in names)):
            sub = dict(zip(names, values))
            out.append((self.lhs.format(**sub), self.rhs.format(**sub), sub))
        return out

    def to_json(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "kind": self.kind, "lhs": self.lhs, "rhs": self.rhs}
        if self.variant:
            d["variant"] = self.variant
        if self.params:
            d["params"] = self.params
        if self.note:
            d["note"] = self.note
        return d


def _record(d: dict, source: str) -> RelationRecord:
    try:
        rec = RelationRecord(
            id=d["id"],
            anchor=str(d["anchor"]),
            lhs=d["lhs"],
            rhs=d["rhs"],
            kind=d.get("kind", "sum"),
            variant=d.get("variant"),
            note=d.get("note", ""),
            params=d.get("params", {}),
        )
    except KeyError as e:
        raise CatalogError(f"{source}: record without {e.args[0]!r}: {d}") from None
    if rec.kind not in KINDS:
        raise CatalogError(f"{source}: {rec.id}: unknown kind {rec.kind!r}")
    if rec.variant not in (None, "as_written", "corrected"):
        raise CatalogError(f"{source}: {rec.id}: unknown variant {rec.variant!r}")
    for lhs, rhs, _ in rec.instances():
        try:
            E.parse(lhs)
            E.parse(rhs)
        except E.ExprSyntaxError as e:
            raise CatalogError(f"{source}: {rec.id}: {e}") from None
    return rec


def load(path: str | Path) -> list[RelationRecord]:
    path = Path(path)
    if path.is_dir():
        out = []
        for f in sorted(path.glob("*.json")):
            out.extend(load(f))
        return out
    data = json.loads(path.read_text())
    return [_record(d, path.name) for d in data]


@lru_cache(maxsize=1)
def _builtin() -> tuple[RelationRecord, ...]:
    out = []
    pkg = resources.files(__package__)
    for name in CATALOG_FILES:
        data = json.loads((pkg / name).read_text())
        out.extend(_record(d, name) for d in data)
    keys = [r.key for r in out]
    dup = {k for k in keys if keys.count(k) > 1}
    if dup:
        raise CatalogError(f"duplicate records: {sorted(dup)}")
    return tuple(out)


def catalog(path: str | Path | None = None, include_as_written: bool = True) -> list[RelationRecord]:
    """All records, from the built-in files or from ``path`` (a file or directory)."""
    recs = list(_builtin()) if path is None else load(path)
    if not include_as_written:
        recs = [r for r in recs if r.counts]
    return recs


def select(records, section: str | None = None) -> list[RelationRecord]:
    if section in (None, "all"):
        return list(records)
    return [r for r in records if r.anchor == str(section)]


def relation_ids(records) -> list[str]:
    """Distinct relation ids, in catalog order."""
    seen = []
    for r in records:
        if r.id not in seen:
            seen.append(r.id)
    return seen


def find(rel_id: str, variant: str | None = None, records=None) -> RelationRecord:
    records = catalog() if records is None else records
    hits = [r for r in records if r.id == rel_id or r.key == rel_id]
    if variant is not None:
        hits = [r for r in hits if r.variant == variant]
    elif len(hits) > 1:
        hits = [r for r in hits if r.counts]
    if not hits:
        raise KeyError(rel_id)
    return hits[0]


# -- weights -----------------------------------------------------------------


def expected_weight(rec: RelationRecord, lhs: str) -> int:
    w = E.weight_of(E.parse(lhs))
    return w + 1 if rec.kind == "integral" else w


def weight_problems(rec: RelationRecord) -> list[str]:
    """Additive RHS terms whose weight differs from the LHS weight."""
    bad = []
    for lhs, rhs, _ in rec.instances():
        try:
            target = expected_weight(rec, lhs)
        except E.WeightError as e:
            bad.append(f"lhs: {e}")
            continue
        for text, w in E.term_weights(E.parse(rhs)):
            if w != target:
                bad.append(f"{text} has weight {w}, expected {target}")
    return bad


# -- completeness ------------------------------------------------------------


def _linear_part(v) -> dict:
    from ..algebra import algebraic_reduce

    return {mono[0]: c for mono, c in algebraic_reduce(v).terms.items() if len(mono) == 1}


def _lhs_indices(rec: RelationRecord):
    if rec.kind not in ("sum", "algebraic"):
        return None
    node = E.parse(rec.lhs)
    if isinstance(node, E.SumRef):
        return tuple(node.indices)
    return None


def completeness(w: int = 6, records=None) -> dict:
    """Check that the catalog reaches every weight-``w`` sum without index -1.

    A sum is reached when, modulo products of lower-weight sums, it is a
    rational combination of catalog left-hand sides and single sums.  The
    linear parts of the Lyndon-basis reductions are compared by exact
    Gaussian elimination.
    """
    from ..sums import enumerate_sums

    records = catalog(include_as_written=False) if records is None else records
    gens = []
    for r in records:
        v = _lhs_indices(r)
        if v is not None and sum(abs(a) for a in v) == w:
            gens.append(v)
    gens += [(w,), (-w,)]
    pivots: dict[tuple, dict] = {}

    def reduce_vec(vec: dict) -> dict:
        vec = dict(vec)
        while vec:
            lead = max(vec, key=lambda k: (len(k), k))
            if lead not in pivots:
                return vec
            c = vec[lead]
            for k, pv in pivots[lead].items():
                vec[k] = vec.get(k, Fraction(0)) - c * pv
                if not vec[k]:
                    del vec[k]
        return vec

    for g in gens:
        vec = reduce_vec(_linear_part(g))
        if vec:
            lead = max(vec, key=lambda k: (len(k), k))
            inv = 1 / vec[lead]
            pivots[lead] = {k: c * inv for k, c in vec.items()}
    targets = [v for v in enumerate_sums(w, exclude_minus_one=True) if len(v) >= 2]
    missing = [v for v in targets if reduce_vec(_linear_part(v))]
    return {"weight": w, "targets": len(targets), "generators": len(set(gens)), "rank": len(pivots),
            "missing": missing}
