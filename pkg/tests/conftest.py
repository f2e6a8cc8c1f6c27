import numpy as np
import pytest

from dnafec import channel, ldpc
from dnafec.bp import BpDecoder


@pytest.fixture(scope="session")
def small_code():
    return ldpc.build_code("1/2", 8, seed=0)


@pytest.fixture(scope="session")
def small_decoder(small_code):
    return BpDecoder(small_code.H)


@pytest.fixture(scope="session")
def nanopore_03():
    return channel.nanopore(0.03)


@pytest.fixture(scope="session")
def illumina_mild():
    return channel.illumina(0.5e-3)


def bit_string(arr) -> str:
    return "".join(str(int(b)) for b in arr)
