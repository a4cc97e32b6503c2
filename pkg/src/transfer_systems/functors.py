"""Inflation along a quotient, N-fixed points, and the universal-transfer reduction.

For a normal subgroup N of G the subgroup lattice of G/N is identified with
the interval [N, G] inside Sub(G).  Inflation pulls a transfer system on the
interval back to G via the membership test

    K -> H  is inflated  iff  KN -> HN is an interval transfer and K = KN /\\ H,

which matches the restriction closure of the preimage (the closure route is
kept as a test oracle since it costs a full generation pass).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compat import is_compatible, max_compat_recursive
from .errors import (
    DisklikeRequiredError,
    GroupSiteRequiredError,
    InternalCheckError,
    MismatchedSitesError,
)
from .groups import SubgroupLattice
from .sites import IntervalView, Site, interval_above, site_from_lattice
from .systems import TransferSystem, is_disklike, is_saturated


@dataclass(frozen=True)
class QuotientContext:
    """Everything needed to move transfer systems across G -> G/N.

    ``kn[k]`` is the parent index of the product KN (the join, N being
    normal), precomputed once.
    """

    parent: Site
    interval: IntervalView
    normal_index: int
    kn: np.ndarray

    @property
    def interval_site(self) -> Site:
        return self.interval.site


def quotient_context(latt_or_site: SubgroupLattice | Site, n: int) -> QuotientContext:
    if isinstance(latt_or_site, SubgroupLattice):
        parent = site_from_lattice(latt_or_site)
    else:
        parent = latt_or_site
    if parent.kind != "group" or parent.lattice is None:
        raise GroupSiteRequiredError("quotient contexts require a group subgroup lattice")
    iv = interval_above(parent, n)
    latt = parent.lattice
    kn = np.array([int(latt.join[k, n]) for k in range(parent.size)], dtype=np.int32)
    kn.flags.writeable = False
    return QuotientContext(parent, iv, n, kn)


def _require_interval_system(ctx: QuotientContext, ts: TransferSystem, what: str) -> None:
    if ts.site.key != ctx.interval.site.key:
        raise MismatchedSitesError(f"{what} must live on the interval site of the context")


def inflate(ctx: QuotientContext, o_bar: TransferSystem) -> TransferSystem:
    """Pull a transfer system on [N, G] back to G."""
    _require_interval_system(ctx, o_bar, "inflate input")
    parent = ctx.parent
    iv = ctx.interval
    sub_of = np.array([iv.from_parent[int(p)] for p in ctx.kn])  # interval index of KN
    lifted = o_bar.rel[np.ix_(sub_of, sub_of)]  # KN -> HN is an interval transfer
    anchored = parent.meet[ctx.kn, :] == np.arange(parent.size)[:, None]  # K == KN /\ H
    rel = parent.leq & lifted & anchored
    return TransferSystem(parent, rel)  # constructor asserts validity


def fixed_points(ctx: QuotientContext, o: TransferSystem) -> TransferSystem:
    """Restrict a G-transfer system to the interval [N, G]."""
    if o.site.key != ctx.parent.key:
        raise MismatchedSitesError("fixed_points input must live on the parent site")
    idx = np.array(ctx.interval.to_parent)
    return TransferSystem(ctx.interval.site, o.rel[np.ix_(idx, idx)].copy())


def minimal_transferring_subgroup(o: TransferSystem) -> int:
    """N_O: the meet of all sources of transfers into the top node.

    Equals top when the only such transfer is reflexive.  For disklike
    systems the result is asserted to transfer to top and to be fixed by
    the site action (normal, for group sites).
    """
    site = o.site
    n = site.top
    for h in np.flatnonzero(o.rel[:, site.top]):
        n = int(site.meet[n, int(h)])
    if is_disklike(o):
        if not o.rel[n, site.top]:
            raise InternalCheckError("minimal transferring subgroup lost its top transfer")
        if any(int(p[n]) != n for p in site.action):
            raise InternalCheckError("minimal transferring subgroup is not action-fixed")
    return n


def universal_reduction(o: TransferSystem) -> TransferSystem:
    """M(O) for disklike O, computed on the quotient by N_O and inflated back.

    Refused on abstract sites: the reduction is specific to group
    quotients and is known to fail for categorical transfer systems.
    """
    if o.site.kind != "group" or o.site.lattice is None:
        raise GroupSiteRequiredError(
            "universal reduction is only valid over a group subgroup lattice"
        )
    if not is_disklike(o):
        raise DisklikeRequiredError("universal reduction requires a disklike system")
    n = minimal_transferring_subgroup(o)
    ctx = quotient_context(o.site, n)
    m_bar = max_compat_recursive(fixed_points(ctx, o))
    result = inflate(ctx, m_bar)
    if result != max_compat_recursive(o):
        raise InternalCheckError("universal reduction disagrees with the direct computation")
    return result


def check_preservation(
    ctx: QuotientContext, o_bar: TransferSystem, om_bar: TransferSystem
) -> tuple[bool, bool, bool, bool]:
    """Evaluate the four inflation-preservation implications concretely.

    Returns one boolean per statement, each True iff (hypothesis implies
    conclusion) holds for these inputs: disklike, saturated, compatibility,
    and maximal compatibility are preserved by inflation.
    """
    _require_interval_system(ctx, o_bar, "check_preservation o_bar")
    _require_interval_system(ctx, om_bar, "check_preservation om_bar")
    p_o = inflate(ctx, o_bar)
    p_om = inflate(ctx, om_bar)

    def implies(a: bool, b: bool) -> bool:
        return (not a) or b

    return (
        implies(is_disklike(o_bar), is_disklike(p_o)),
        implies(is_saturated(o_bar).saturated, is_saturated(p_o).saturated),
        implies(is_compatible(o_bar, om_bar).compatible, is_compatible(p_o, p_om).compatible),
        implies(om_bar == max_compat_recursive(o_bar), p_om == max_compat_recursive(p_o)),
    )
