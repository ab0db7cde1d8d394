"""Shared fixtures: a corpus of symmetry groups used across the test modules."""

import numpy as np
import pytest

from rcopselect import CyclicGroup, PermutationGroup, parse_cycles


def cyc(text, p):
    """Cyclic group generated by one permutation in cycle notation."""
    return CyclicGroup(parse_cycles(text, p))


def gen(p, *texts):
    """Group generated by several permutations in cycle notation."""
    return PermutationGroup([parse_cycles(t, p) for t in texts], p=p)


# The quaternionic example on 16 variables: order 8, four 1-dimensional
# irreducible representations plus one of real dimension 4, each appearing
# twice, so the colored space has a rank-2 quaternionic block.
Q16_GENERATORS = (
    "(1,2,5,6)(3,4,7,8)(9,10,13,14)(11,12,15,16)",
    "(1,3,5,7)(2,8,6,4)(9,11,13,15)(10,16,14,12)",
)


def group_corpus():
    """Labeled groups covering every block field, ranks 1-4, and p from 1 to 16."""
    groups = [
        ("trivial p=1", cyc("", 1)),
        ("trivial p=2", cyc("", 2)),
        ("trivial p=3", cyc("", 3)),
        ("swap p=2", cyc("(1,2)", 2)),
        ("3-cycle", cyc("(1,2,3)", 3)),
        ("S3", gen(3, "(1,2)", "(1,2,3)")),
        ("transposition p=3", cyc("(1,2)", 3)),
        ("4-cycle", cyc("(1,2,3,4)", 4)),
        ("double swap p=4", cyc("(1,2)(3,4)", 4)),
        ("3-cycle p=4", cyc("(1,2,3)", 4)),
        ("Klein", gen(4, "(1,2)(3,4)", "(1,3)(2,4)")),
        ("D4", gen(4, "(1,2,3,4)", "(1,3)")),
        ("S4", gen(4, "(1,2)", "(1,2,3,4)")),
        ("two swaps p=4", gen(4, "(1,2)", "(3,4)")),
        ("5-cycle", cyc("(1,2,3,4,5)", 5)),
        ("mixed 3+2", cyc("(1,2,3)(4,5)", 5)),
        ("D5", gen(5, "(1,2,3,4,5)", "(2,5)(3,4)")),
        ("6-cycle", cyc("(1,2,3,4,5,6)", 6)),
        ("two 3-cycles", cyc("(1,2,3)(4,5,6)", 6)),
        ("mixed 3+2+fix", cyc("(1,2,3)(4,5)", 6)),
        ("independent 3-cycles", gen(6, "(1,2,3)", "(4,5,6)")),
        ("S3 x S3", gen(6, "(1,2)", "(1,2,3)", "(4,5)", "(4,5,6)")),
        ("D6", gen(6, "(1,2,3,4,5,6)", "(1,6)(2,5)(3,4)")),
        ("three swaps", gen(6, "(1,2)", "(3,4)", "(5,6)")),
        ("7-cycle", cyc("(1,2,3,4,5,6,7)", 7)),
        ("mixed 5+2", cyc("(1,2,3,4,5)(6,7)", 7)),
        ("8-cycle", cyc("(1,2,3,4,5,6,7,8)", 8)),
        ("two 4-cycles", gen(8, "(1,2,3,4)", "(5,6,7,8)")),
        ("mixed 4+3+2", cyc("(1,2,3,4)(5,6,7)(8,9)", 9)),
        ("10-cycle", cyc("(1,2,3,4,5,6,7,8,9,10)", 10)),
        ("D10", gen(10, "(1,2,3,4,5,6,7,8,9,10)", "(2,10)(3,9)(4,8)(5,7)")),
        ("quaternionic p=16", gen(16, *Q16_GENERATORS)),
    ]
    assert len(groups) >= 30
    return groups


@pytest.fixture(scope="session")
def corpus():
    return group_corpus()


@pytest.fixture(scope="session")
def small_corpus():
    """Groups with p <= 6, where dense reference computations stay cheap."""
    return [(label, g) for label, g in group_corpus() if g.p <= 6]


def random_cone_point(group, rng, jitter=0.3):
    """A well-conditioned random point of the positive definite cone."""
    from rcopselect import project

    p = group.p
    g = rng.standard_normal((p, p))
    x = project(group, np.eye(p) + jitter * (g + g.T) / np.sqrt(p))
    w = np.linalg.eigvalsh(x)
    if w[0] < 0.05:
        x = x + (0.05 - w[0]) * np.eye(p)
    return x
