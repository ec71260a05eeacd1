"""Python bindings for the OBST(k) overlay simulator."""

import json

from ._obst import *  # noqa: F401,F403
from ._obst import run_scenario as _run_scenario


def run(config=None, **overrides):
    """Run a scenario from a config dict (or preset name) plus overrides.

    Returns (csv_text, metadata_dict).
    """
    if isinstance(config, str):
        config = {"preset": config}
    cfg = dict(config or {})
    cfg.update(overrides)
    csv, meta = _run_scenario(json.dumps(cfg))
    return csv, json.loads(meta)
