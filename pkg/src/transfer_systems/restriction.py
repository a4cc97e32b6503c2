"""The restriction poset of a transfer system, with compatibility annotations.

Nodes are the non-reflexive transfers of a system O.  For e: K -> H and
r: K' -> J, r <= e iff J <= H and K' = K /\\ J (e "restricts onto" r); such
an r is automatically in O.  Each comparable pair is annotated as a
compatibility success or failure:

    failure  iff  K /\\ J -> K is in O and J -> H is not,

and exactly one of the two holds.  The poset and its annotations are
computed once per system and cached; the maximal-compatible computations
never re-derive them.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .systems import TransferSystem

NOT_COMPARABLE = 0
SUCCESS = 1
FAILURE = 2


class RestrictionPoset:
    """Poset (<=, <, covers) over the non-reflexive edges of one system.

    Attributes:
        nodes: edges in canonical (src, dst) order.
        leq: boolean matrix, ``leq[i, j]`` iff nodes[j] restricts onto nodes[i].
        strict, covers: derived strict order and cover relation.
        annotation: int8 matrix over comparable pairs (SUCCESS / FAILURE).
    """

    def __init__(self, ts: "TransferSystem"):
        site = ts.site
        self.owner = ts
        self.nodes = ts.edges()
        self.index = {e: i for i, e in enumerate(self.nodes)}
        m = len(self.nodes)
        self.leq = np.eye(m, dtype=bool)
        self.annotation = np.zeros((m, m), dtype=np.int8)
        rel = ts.rel
        meet = site.meet
        for j, (k, h) in enumerate(self.nodes):
            for jj in site.lower[h]:
                r = (int(meet[k, jj]), int(jj))
                i = self.index.get(r)
                if i is None:  # reflexive restriction, not a poset node
                    continue
                self.leq[i, j] = True
                failed = bool(rel[r[0], k]) and not bool(rel[jj, h])
                self.annotation[i, j] = FAILURE if failed else SUCCESS
        self.strict = self.leq & ~np.eye(m, dtype=bool)
        two = (self.strict.astype(np.uint8) @ self.strict.astype(np.uint8)) > 0
        self.covers = self.strict & ~two
        self.leq.flags.writeable = False
        self.strict.flags.writeable = False
        self.covers.flags.writeable = False
        self.annotation.flags.writeable = False

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def cover_count(self) -> int:
        return int(self.covers.sum())

    def minimal(self) -> list[int]:
        """Indices of edges with no non-trivial strict restriction."""
        return [i for i in range(len(self.nodes)) if not self.strict[:, i].any()]

    def strict_below(self, j: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.strict[:, j])]

    def covers_below(self, j: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.covers[:, j])]

    def is_success(self, i: int, j: int) -> bool:
        return self.annotation[i, j] == SUCCESS

    def annotation_name(self, r: tuple[int, int], e: tuple[int, int]) -> str:
        a = self.annotation[self.index[r], self.index[e]]
        return ("not-comparable", "success", "failure")[int(a)]

    def topological_order(self) -> list[int]:
        """Linear extension of <=, ties broken by canonical edge index."""
        m = len(self.nodes)
        remaining = np.array([int(self.strict[:, j].sum()) for j in range(m)])
        done = np.zeros(m, dtype=bool)
        order = []
        for _ in range(m):
            ready = np.flatnonzero(~done & (remaining == 0))
            j = int(ready[0])
            order.append(j)
            done[j] = True
            remaining[self.strict[j]] -= 1
        return order


def restriction_poset(ts: "TransferSystem") -> RestrictionPoset:
    """The (cached) restriction poset of a transfer system."""
    poset = ts._cache.get("restriction_poset")
    if poset is None:
        poset = RestrictionPoset(ts)
        ts._cache["restriction_poset"] = poset
    return poset
