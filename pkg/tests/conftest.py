import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from termlex.cli import data_path
from termlex.formats import load_kb, read_sentences

from oracles import random_tbox

settings.register_profile(
    "default",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
tboxes = seeds.map(lambda s: random_tbox(random.Random(s)))


@pytest.fixture(scope="session")
def pour_ws():
    return load_kb(data_path("pour.kb"))


@pytest.fixture(scope="session")
def pour_corpus():
    pairs = read_sentences(data_path("pour.sentences"))
    return {s.id: s for _, s in pairs}, pairs


@pytest.fixture(scope="session")
def give_corpus():
    return read_sentences(data_path("give.sentences"))
