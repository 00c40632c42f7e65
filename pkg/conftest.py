import random
from typing import Dict

import pytest

from rackgeom.models.rack import CosetRackSpec, FiniteRack
from rackgeom.services.permgroup_service import from_cycles, permgroup_service
from rackgeom.services.rack_service import rack_service


def s3_group():
    return permgroup_service.generate(3, [from_cycles("(0 1)", 3), from_cycles("(0 1 2)", 3)])


def s3_transposition_spec() -> CosetRackSpec:
    """(S3, (0 1), Z((0 1)))."""
    group = s3_group()
    s = from_cycles("(0 1)", 3)
    return CosetRackSpec(group=group, reps=((s, (s,)),))


def build_suite() -> Dict[str, FiniteRack]:
    suite = {
        "trivial(2)": rack_service.trivial(2),
        "trivial(3)": rack_service.trivial(3),
    }
    for n in range(3, 7):
        suite[f"dihedral({n})"] = rack_service.dihedral(n)
    for n in range(2, 7):
        suite[f"cyclic({n})"] = rack_service.cyclic(n)
    suite["conj(S3)"] = rack_service.conjugation_quandle(s3_group())
    suite["coset(S3)"] = rack_service.coset_rack(s3_transposition_spec(), name="coset(S3)").rack
    suite["cyclic(2)xdihedral(3)"] = rack_service.product(
        rack_service.cyclic(2), rack_service.dihedral(3)
    )
    return suite


SUITE = build_suite()

# |pi0| of every suite rack
COMPONENTS = {
    "trivial(2)": 2,
    "trivial(3)": 3,
    "dihedral(3)": 1,
    "dihedral(4)": 2,
    "dihedral(5)": 1,
    "dihedral(6)": 2,
    "cyclic(2)": 1,
    "cyclic(3)": 1,
    "cyclic(4)": 1,
    "cyclic(5)": 1,
    "cyclic(6)": 1,
    "conj(S3)": 3,
    "coset(S3)": 1,
    "cyclic(2)xdihedral(3)": 1,
}


@pytest.fixture
def suite() -> Dict[str, FiniteRack]:
    return SUITE


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240517)


@pytest.fixture
def s3():
    return s3_group()


@pytest.fixture
def dihedral3() -> FiniteRack:
    return rack_service.dihedral(3)
