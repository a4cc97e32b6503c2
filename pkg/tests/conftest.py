import pytest

from transfer_systems import (
    enumerate_all,
    generate_from_edges,
    site_from_descriptor,
)
from transfer_systems.sites import parse_poset_text

# The 5-node bounded lattice with a pendant chain: bot < A < top and
# bot < C < B < top, A incomparable to B and C.
P5_TEXT = """\
nodes: bot A B C top
cover: bot A
cover: bot C
cover: C B
cover: B top
cover: A top
"""


def edges_by_label(site, pairs):
    return [(site.node(a), site.node(b)) for a, b in pairs]


def system_from_labels(site, pairs):
    ts = generate_from_edges(site, edges_by_label(site, pairs))
    assert sorted(ts.edges()) == sorted(edges_by_label(site, pairs)), (
        "label edge list is expected to already be transfer-closed"
    )
    return ts


def labeled(ts):
    lab = ts.site.labels
    return sorted((lab[a], lab[b]) for a, b in ts.edges())


@pytest.fixture(scope="session")
def c6_site():
    return site_from_descriptor("cyclic:6")


@pytest.fixture(scope="session")
def c12_site():
    return site_from_descriptor("cyclic:12")


@pytest.fixture(scope="session")
def c36_site():
    return site_from_descriptor("cyclic:36")


@pytest.fixture(scope="session")
def s3_site():
    return site_from_descriptor("symmetric:3")


@pytest.fixture(scope="session")
def q8_site():
    return site_from_descriptor("q8")


@pytest.fixture(scope="session")
def d4_site():
    return site_from_descriptor("dihedral:4")


@pytest.fixture(scope="session")
def p5_site():
    return parse_poset_text(P5_TEXT, descriptor="poset:P5")


@pytest.fixture(scope="session")
def c6_catalog(c6_site):
    return enumerate_all(c6_site)


@pytest.fixture(scope="session")
def c12_catalog(c12_site):
    return enumerate_all(c12_site)


@pytest.fixture(scope="session")
def c36_catalog(c36_site):
    return enumerate_all(c36_site)


@pytest.fixture(scope="session")
def s3_catalog(s3_site):
    return enumerate_all(s3_site)


@pytest.fixture(scope="session")
def q8_catalog(q8_site):
    return enumerate_all(q8_site)


@pytest.fixture(scope="session")
def d4_catalog(d4_site):
    return enumerate_all(d4_site)


FIG1_EDGES = {
    "a": [("1", "C2"), ("1", "C3"), ("1", "C6"), ("C2", "C6"), ("C3", "C6")],
    "b": [("1", "C2"), ("1", "C3"), ("1", "C6"), ("C3", "C6")],
    "c": [("1", "C2"), ("1", "C3"), ("1", "C6"), ("C2", "C6")],
    "d": [("1", "C2"), ("1", "C3"), ("1", "C6")],
    "e": [("1", "C2"), ("C3", "C6")],
    "f": [("1", "C3"), ("C2", "C6")],
    "g": [("1", "C2"), ("1", "C3")],
    "h": [("1", "C2")],
    "i": [("1", "C3")],
    "j": [],
}


@pytest.fixture(scope="session")
def fig1(c6_site):
    """The ten C_pq transfer systems, keyed by their printed names."""
    return {name: system_from_labels(c6_site, pairs) for name, pairs in FIG1_EDGES.items()}
