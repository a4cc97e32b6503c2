"""Sites: finite bounded lattices carrying an automorphism action.

A :class:`Site` is the common habitat for transfer systems.  Group subgroup
lattices become sites whose action is conjugation; abstract posets read from
files become sites with a trivial (or user-declared) action.  All transfer
system machinery downstream runs identically on both kinds.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DescriptorError,
    InputFileError,
    InternalCheckError,
    NotNormalError,
)
from .groups import SubgroupLattice, build_group, subgroup_lattice


class Site:
    """A finite bounded lattice plus a set of lattice automorphisms.

    Attributes:
        size: number of nodes.
        leq: boolean partial-order matrix with unique bottom and top.
        meet: greatest-lower-bound table.
        action: tuple of node permutations (closed under composition and
            inverse; always contains the identity).
        labels: display names, unique per node.
        kind: ``"group"`` for conjugation sites, ``"abstract"`` otherwise.
        lattice: the source SubgroupLattice for plain group sites, else None.
        descriptor: string that rebuilds this site, if available.
    """

    def __init__(
        self,
        leq: np.ndarray,
        meet: np.ndarray,
        action: tuple[np.ndarray, ...],
        labels: tuple[str, ...],
        kind: str,
        lattice: SubgroupLattice | None = None,
        descriptor: str | None = None,
    ):
        self.size = int(leq.shape[0])
        self.leq = leq
        self.meet = meet
        self.action = action
        self.labels = labels
        self.kind = kind
        self.lattice = lattice
        self.descriptor = descriptor
        self._check()
        self.leq.flags.writeable = False
        self.meet.flags.writeable = False
        for p in self.action:
            p.flags.writeable = False
        self.bottom = int(np.flatnonzero(leq[:, :].all(axis=1))[0])
        self.top = int(np.flatnonzero(leq[:, :].all(axis=0))[0])
        # lower[h] = indices of nodes <= h, ascending
        self.lower = tuple(np.flatnonzero(leq[:, h]) for h in range(self.size))
        self.pairs = tuple(
            (int(a), int(b)) for a in range(self.size) for b in range(self.size)
            if a != b and leq[a, b]
        )
        self._label_index = {lab: i for i, lab in enumerate(labels)}
        raw = leq.tobytes() + b"|" + b",".join(p.tobytes() for p in self.action)
        self.key = hashlib.sha256(raw).digest()

    def _check(self) -> None:
        n = self.size
        leq = self.leq
        if not np.all(np.diag(leq)):
            raise InputFileError("order is not reflexive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise InputFileError("cycle detected: order is not antisymmetric")
        reach2 = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
        if np.any(reach2 & ~leq):
            raise InputFileError("order is not transitive")
        if int(leq.all(axis=1).sum()) != 1:
            raise InputFileError("no unique bottom element")
        if int(leq.all(axis=0).sum()) != 1:
            raise InputFileError("no unique top element")
        for a in range(n):
            for b in range(a, n):
                m = int(self.meet[a, b])
                lows = leq[:, a] & leq[:, b]
                if not (lows[m] and bool(np.all(leq[lows, m]))):
                    raise InputFileError(
                        f"not a lattice: {self.labels[a]} and {self.labels[b]} have no meet"
                    )
        if len(self.labels) != n or len(set(self.labels)) != n:
            raise InternalCheckError("labels must be unique, one per node")
        if not any(np.array_equal(p, np.arange(n)) for p in self.action):
            raise InternalCheckError("action must contain the identity")
        for p in self.action:
            if not np.array_equal(leq[np.ix_(p, p)], leq):
                raise InputFileError("declared automorphism does not preserve the order")
            if not np.array_equal(p[self.meet], self.meet[np.ix_(p, p)]):
                raise InputFileError("declared automorphism does not preserve meets")

    def node(self, label: str) -> int:
        """Node index for a display label (or a bare numeric index)."""
        if label in self._label_index:
            return self._label_index[label]
        if label.isdigit():
            i = int(label)
            if 0 <= i < self.size:
                return i
        raise DescriptorError(
            f"unknown node {label!r}; run the `lattice` subcommand to list labels"
        )

    def orbit(self, edge: tuple[int, int]) -> frozenset[tuple[int, int]]:
        """Orbit of an edge under the action."""
        k, h = edge
        return frozenset((int(p[k]), int(p[h])) for p in self.action)

    def orbit_representatives(self, edges) -> list[tuple[int, int]]:
        """Lexicographically least member of each edge orbit, in order.

        Generated transfer systems depend on a generator edge only through
        its orbit, so enumerations may expand representatives only.
        """
        reps = []
        seen: set[tuple[int, int]] = set()
        for e in edges:
            if e in seen:
                continue
            orbit = self.orbit(e)
            seen.update(orbit)
            reps.append(min(orbit))
        return reps

    def subset_orbit_key(self, edges) -> tuple:
        """Canonical key of an edge set under the simultaneous action."""
        return min(tuple(sorted((int(p[a]), int(p[b])) for a, b in edges)) for p in self.action)

    def same_site(self, other: "Site") -> bool:
        return self.key == other.key


def _meet_table(leq: np.ndarray, labels: tuple[str, ...]) -> np.ndarray:
    """Compute all binary meets, erroring where a pair has none."""
    n = leq.shape[0]
    meet = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(a, n):
            lows = np.flatnonzero(leq[:, a] & leq[:, b])
            if lows.size == 0:
                raise InputFileError(f"nodes {labels[a]} and {labels[b]} have no common lower bound")
            maximal = [m for m in lows if np.all(leq[lows, m])]
            if len(maximal) != 1:
                raise InputFileError(
                    f"not a lattice: nodes {labels[a]} and {labels[b]} have no meet"
                )
            meet[a, b] = meet[b, a] = maximal[0]
    return meet


def _close_permutations(perms: list[np.ndarray], n: int) -> tuple[np.ndarray, ...]:
    """Close a permutation set under composition; dedup; canonical order."""
    seen = {tuple(range(n))}
    for p in perms:
        seen.add(tuple(int(x) for x in p))
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for q in list(seen):
                for r in (tuple(p[i] for i in q), tuple(q[i] for i in p)):
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
        frontier = nxt
    return tuple(np.array(p, dtype=np.int32) for p in sorted(seen))


def site_from_lattice(latt: SubgroupLattice) -> Site:
    """The site of a subgroup lattice with its conjugation action."""
    perms = sorted({tuple(int(x) for x in latt.conj_action[g]) for g in range(latt.group.order)})
    action = tuple(np.array(p, dtype=np.int32) for p in perms)
    return Site(
        leq=latt.leq.copy(),
        meet=latt.meet.astype(np.int32).copy(),
        action=action,
        labels=latt.labels,
        kind="group",
        lattice=latt,
        descriptor=latt.group.descriptor,
    )


@dataclass(frozen=True)
class IntervalView:
    """The sub-site on {H : N <= H <= top} with index maps to the parent."""

    site: Site
    parent: Site
    normal_index: int
    to_parent: tuple[int, ...]
    from_parent: dict[int, int] = field(hash=False)


def interval_above(latt_or_site, n: int) -> IntervalView:
    """Induced site on the subgroups containing a normal subgroup n."""
    if isinstance(latt_or_site, SubgroupLattice):
        parent = site_from_lattice(latt_or_site)
    else:
        parent = latt_or_site
    if not all(int(p[n]) == n for p in parent.action):
        raise NotNormalError(f"node {parent.labels[n]} is not fixed by the action")
    if parent.kind == "group" and parent.lattice is not None:
        if not parent.lattice.normal[n]:
            raise NotNormalError(f"subgroup {parent.labels[n]} is not normal")
    nodes = [int(i) for i in np.flatnonzero(parent.leq[n])]
    from_parent = {p: i for i, p in enumerate(nodes)}
    idx = np.array(nodes)
    leq = parent.leq[np.ix_(idx, idx)].copy()
    meet = np.array(
        [[from_parent[int(parent.meet[a, b])] for b in nodes] for a in nodes], dtype=np.int32
    )
    perms = sorted({tuple(from_parent[int(p[v])] for v in nodes) for p in parent.action})
    action = tuple(np.array(p, dtype=np.int32) for p in perms)
    labels = tuple(parent.labels[v] for v in nodes)
    descriptor = None
    if parent.descriptor is not None:
        descriptor = f"{parent.descriptor}|above:{parent.labels[n]}"
    site = Site(leq, meet, action, labels, kind=parent.kind, lattice=None, descriptor=descriptor)
    return IntervalView(site, parent, n, tuple(nodes), from_parent)


# ---------------------------------------------------------------------------
# Poset files

POSET_FORMAT = """\
Poset file format: one `nodes:` line then `cover:` lines, e.g.

    nodes: bot a b top
    cover: bot a
    cover: bot b
    cover: a top
    cover: b top
    auto: bot b a top    # optional automorphism (images in `nodes:` order)
"""


def parse_poset_text(text: str, descriptor: str | None = None) -> Site:
    names: list[str] = []
    covers: list[tuple[str, str]] = []
    autos: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        parts = rest.split()
        if key == "nodes":
            if names:
                raise InputFileError(f"line {lineno}: duplicate nodes: line")
            names = parts
        elif key == "cover":
            if len(parts) != 2:
                raise InputFileError(f"line {lineno}: cover needs exactly two node names")
            covers.append((parts[0], parts[1]))
        elif key == "auto":
            autos.append(parts)
        else:
            raise InputFileError(f"line {lineno}: unknown directive {key!r}")
    if not names:
        raise InputFileError("missing nodes: line")
    if len(set(names)) != len(names):
        raise InputFileError("duplicate node names")
    index = {nm: i for i, nm in enumerate(names)}
    n = len(names)
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        if a not in index or b not in index:
            raise InputFileError(f"cover references unknown node in {a!r} {b!r}")
        leq[index[a], index[b]] = True
    # transitive closure
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    labels = tuple(names)
    if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
        raise InputFileError("cycle detected among cover relations")
    meet = _meet_table(leq, labels)
    perms = []
    for parts in autos:
        if sorted(parts) != sorted(names):
            raise InputFileError(f"auto: line must permute all node names: {parts}")
        perms.append(np.array([index[p] for p in parts], dtype=np.int32))
    action = _close_permutations(perms, n)
    return Site(leq, meet, action, labels, kind="abstract", descriptor=descriptor)


def site_from_poset_file(path: str | Path) -> Site:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputFileError(f"cannot read poset file {path}: {exc}") from None
    return parse_poset_text(text, descriptor=f"poset:{path}")


def site_from_descriptor(descriptor: str, order_cap: int = 1000) -> Site:
    """Rebuild a site from its descriptor string.

    Understands group descriptors, ``poset:FILE``, and interval descriptors
    of the form ``<parent>|above:<label>``.
    """
    descriptor = descriptor.strip()
    if "|above:" in descriptor:
        parent_desc, _, label = descriptor.rpartition("|above:")
        parent = site_from_descriptor(parent_desc, order_cap)
        return interval_above(parent, parent.node(label)).site
    if descriptor.startswith("poset:"):
        return site_from_poset_file(descriptor[len("poset:") :])
    return site_from_lattice(subgroup_lattice(build_group(descriptor, order_cap)))
