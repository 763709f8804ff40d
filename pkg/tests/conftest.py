import dataclasses

import pytest

from coexsim import cli
from coexsim.engine import Model, Scheme


@pytest.fixture(scope="session")
def default_spec():
    return cli.parse_config(None)


@pytest.fixture(scope="session")
def make_config(default_spec):
    """Build a runnable SimConfig from the defaults with keyword tweaks.

    Spec-level fields (p_s, success_override, ...) are replaced on the spec;
    grid-level fields (model, scheme, distance_m, b2_fraction, seed,
    horizon_frames) go through build_sim_config.
    """

    def _make(model=Model.FRAME_BASED, scheme=Scheme.FDMA, distance_m=None,
              b2_fraction=None, seed=0, horizon_frames=1000, **spec_overrides):
        spec = dataclasses.replace(default_spec, **spec_overrides)
        return cli.build_sim_config(spec, model=model, scheme=scheme,
                                    distance_m=distance_m,
                                    b2_fraction=b2_fraction, seed=seed,
                                    horizon_frames=horizon_frames)

    return _make
