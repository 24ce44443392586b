from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from thetafactor.parabolic import Component, DegenerationSpec, ParabolicPoint  # noqa: E402
from thetafactor.sampling import random_spec  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

balanced_specs = st.builds(random_spec, st.randoms(use_true_random=False))


def point(pid, comp, flag_type, weights, alpha):
    return ParabolicPoint(pid, Component(comp), tuple(flag_type), tuple(weights), alpha)


def empty_spec(r, k, ell_total, chi, g1=1, g2=1, c1=1, c2=1):
    return DegenerationSpec(g1, g2, c1, c2, r, k, chi, ell_total)
