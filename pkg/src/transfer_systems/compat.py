"""Compatible pairs and the maximal compatible transfer system M(O).

Three independent computations of M(O) are provided:

* ``max_compat_oracle`` keeps each edge e whose generated system T(e) forms a
  compatible pair with O (the definitional set expression);
* ``max_compat_recursive`` runs the recursion over the full restriction
  poset: e is kept iff every strict restriction r < e is already kept and
  annotates a compatibility success;
* ``max_compat_disklike`` is the cover-relation worklist for disklike
  systems, processing conjugacy classes of minimal queue elements and
  counting cover inspections.

``conjecture_formula`` evaluates the conjectured one-shot simplification
(keep e iff all strict restrictions are successes) and deliberately returns
a raw edge set rather than a validated system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DisklikeRequiredError
from .restriction import restriction_poset
from .sites import Site
from .systems import (
    TransferSystem,
    _require_same_site,
    generate_from_edges,
    is_disklike,
)


@dataclass(frozen=True)
class CompatReport:
    """Outcome of a compatibility check.

    The witness, present iff incompatible, is the first (K, J, H) in
    canonical scan order such that K -> H is multiplicative, K /\\ J -> K is
    additive, and the required additive edge J -> H is missing.
    """

    compatible: bool
    witness: Optional[tuple[int, int, int]] = None

    def to_json(self, site: Site) -> dict:
        out: dict = {"compatible": self.compatible}
        if self.witness is not None:
            k, j, h = self.witness
            out["witness"] = {
                "K": site.labels[k],
                "J": site.labels[j],
                "H": site.labels[h],
                "missing": [site.labels[j], site.labels[h]],
            }
        return out


def is_compatible(o_a: TransferSystem, o_m: TransferSystem) -> CompatReport:
    """Check that (o_a, o_m) is a compatible pair.

    Scans condition (2) of the definition over all multiplicative edges;
    the containment o_m <= o_a is subsumed by the scan (take J = K).
    """
    _require_same_site(o_a, o_m)
    site = o_a.site
    rel_a = o_a.rel
    for k, h in o_m.edges():
        js = site.lower[h]
        hyp = rel_a[site.meet[k, js], k]
        bad = hyp & ~rel_a[js, h]
        if np.any(bad):
            j = int(js[np.flatnonzero(bad)[0]])
            return CompatReport(False, (k, j, h))
    return CompatReport(True)


def max_compat_oracle(o: TransferSystem) -> TransferSystem:
    """M(O) via the set expression: e is kept iff (O, T(e)) is compatible."""
    keep = [e for e in o.edges() if is_compatible(o, generate_from_edges(o.site, [e])).compatible]
    return _wrap(o.site, keep)


def max_compat_recursive(o: TransferSystem) -> TransferSystem:
    """M(O) via the recursion over the full restriction poset."""
    poset = restriction_poset(o)
    in_m = [False] * len(poset)
    for j in poset.topological_order():
        in_m[j] = all(in_m[i] and poset.is_success(i, j) for i in poset.strict_below(j))
    keep = [e for j, e in enumerate(poset.nodes) if in_m[j]]
    return _wrap(o.site, keep)


class DisklikeResult(NamedTuple):
    system: TransferSystem
    steps: int  # cover-relation inspections performed


def max_compat_disklike(o: TransferSystem) -> DisklikeResult:
    """M(O) for disklike O by the worklist over cover relations.

    Starts from the minimal elements of the restriction poset, repeatedly
    takes the minimal queue element (lowest canonical index on ties) and
    decides its whole conjugacy class at once.  The step counter records
    how many cover relations were inspected.
    """
    if not is_disklike(o):
        raise DisklikeRequiredError("the cover-relation algorithm requires a disklike system")
    poset = restriction_poset(o)
    site = o.site
    decided: dict[int, bool] = {}
    for i in poset.minimal():
        decided[i] = True
    queue = sorted(set(range(len(poset))) - decided.keys())
    steps = 0
    while queue:
        queue_set = set(queue)
        # Minimal queue element under the restriction order; ties break by
        # lowest canonical edge index since queue stays sorted.
        m = next(j for j in queue if not any(i in queue_set for i in poset.strict_below(j)))
        verdict = True
        for i in poset.covers_below(m):
            steps += 1
            if not (decided.get(i, False) and poset.is_success(i, m)):
                verdict = False
                break
        orbit = {poset.index[e] for e in site.orbit(poset.nodes[m]) if e in poset.index}
        orbit.add(m)
        for j in orbit:
            decided[j] = verdict
        queue = [j for j in queue if j not in orbit]
    keep = [e for j, e in enumerate(poset.nodes) if decided.get(j, False)]
    return DisklikeResult(_wrap(site, keep), steps)


def conjecture_formula(o: TransferSystem) -> frozenset[tuple[int, int]]:
    """Edges e whose strict restrictions are all compatibility successes.

    Returned as a raw edge set: on inputs outside the conjecture's scope it
    can fail the transfer-system axioms, so no validation is attempted.
    """
    poset = restriction_poset(o)
    keep = []
    for j, e in enumerate(poset.nodes):
        if all(poset.is_success(i, j) for i in poset.strict_below(j)):
            keep.append(e)
    return frozenset(keep)


def _wrap(site: Site, edges: list[tuple[int, int]]) -> TransferSystem:
    rel = np.eye(site.size, dtype=bool)
    for k, h in edges:
        rel[k, h] = True
    return TransferSystem(site, rel)  # constructor asserts the axioms
