"""
Test configuration and fixtures
"""
from pathlib import Path

import pytest

from netdecode.models.builders import build_diamond, build_family_d, build_mirrored_diamond
from netdecode.models.channel import Alphabet
from netdecode.services.adversary import AdversaryModel, ChangeSemantics, Regime, default_edges
from netdecode.services.schemes import NetworkCode, scheme_compare_flag, scheme_diamond_star
from netdecode.services.transfer import TransferQuery

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


@pytest.fixture
def diamond():
    return build_diamond()


@pytest.fixture
def mirrored():
    return build_mirrored_diamond()


@pytest.fixture
def q3():
    """Alphabet {0, 1, 2} with 2 reserved"""
    return Alphabet(3)


@pytest.fixture
def make_diamond_query():
    """Factory for Diamond transfer queries under the diamond_star scheme"""
    def _make(q=3, shots=1, regime=Regime.ONE_SHOT, change=None, t=1, **kwargs):
        network = build_diamond()
        a = Alphabet(q)
        model = AdversaryModel(default_edges(network), t, regime, change)
        scheme = NetworkCode.repeat(scheme_diamond_star(a, network), shots)
        return TransferQuery(network, scheme, model, a, shots, **kwargs)
    return _make


@pytest.fixture
def make_two_level_query():
    """Factory for compare_flag queries on the Mirrored Diamond or family d"""
    def _make(q=2, shots=1, regime=Regime.ONE_SHOT, change=None, t=1, family_t=None):
        network = build_mirrored_diamond() if family_t is None else build_family_d(family_t)
        a = Alphabet(q)
        model = AdversaryModel(default_edges(network), t, regime, change)
        scheme = NetworkCode.repeat(scheme_compare_flag(a, network), shots)
        return TransferQuery(network, scheme, model, a, shots)
    return _make


@pytest.fixture
def static_must():
    return {"regime": Regime.STATIC, "change": ChangeSemantics.MUST}


@pytest.fixture
def cache_path(tmp_path):
    return str(tmp_path / "cache.json")
