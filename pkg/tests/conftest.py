import json
from pathlib import Path

import numpy as np
import pytest

from gshermite.classify import DecayCertificate

FROZEN = Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text(encoding="utf-8"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def assert_theta_monotone(cert: DecayCertificate) -> None:
    """Falloff side: passing set is downward closed in theta; growth side: upward closed."""
    holds = [c.holds for c in sorted(cert.per_theta, key=lambda c: c.theta)]
    if cert.mode.startswith("dual"):
        holds = holds[::-1]
    # after the first failure nothing may pass again
    seen_fail = False
    for h in holds:
        if not h:
            seen_fail = True
        assert not (seen_fail and h), f"non-monotone verdicts {holds} in {cert.mode}"


# Every DecayCertificate built during the session is recorded so that the
# theta-monotonicity invariant can be checked across the whole suite.
CERTIFICATES: list[DecayCertificate] = []
_original_init = DecayCertificate.__init__


def _recording_init(self, *args, **kwargs):
    _original_init(self, *args, **kwargs)
    CERTIFICATES.append(self)


DecayCertificate.__init__ = _recording_init
