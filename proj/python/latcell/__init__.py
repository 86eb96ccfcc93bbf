"""Discrete lattice-cell energies of deformed crystals."""

import json as _json

try:
    from ._latcell import *  # noqa: F401,F403
    from . import _latcell as _impl
except ImportError:  # build-tree layout keeps the module next to the package
    from _latcell import *  # noqa: F401,F403
    import _latcell as _impl


def parse_scene(text):
    """Validate a scene description and return it with defaults filled in."""
    return _json.loads(_impl.parse_scene_json(text))


def verify_proposition(proposition, scene_text):
    """Run an expansion check (P1..P5) on a scene, returning the summary dict."""
    return _json.loads(_impl.verify_proposition_json(proposition, scene_text))


def density_table(scene_text):
    """Evaluate the densities a scene requests, returning a list of row dicts."""
    return _json.loads(_impl.density_table_json(scene_text))
