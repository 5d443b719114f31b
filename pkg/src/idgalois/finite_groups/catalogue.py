"""The shipped small-group catalogue (orders up to 16)."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .group import FiniteGroup, GroupError


@lru_cache(maxsize=1)
def _data() -> dict:
    with resources.files("idgalois").joinpath("data/catalogue.json").open() as fh:
        return json.load(fh)


def catalogue_names() -> list:
    return list(_data()["groups"])


@lru_cache(maxsize=None)
def catalogue_group(name: str) -> FiniteGroup:
    d = _data()
    name = d["aliases"].get(name, name)
    if name not in d["groups"]:
        raise GroupError(f"unknown catalogue group {name!r}")
    return FiniteGroup.from_cycles(d["groups"][name]["generators"], name=name)


def catalogue(max_order: int = 16) -> list:
    return [G for G in map(catalogue_group, catalogue_names()) if G.n <= max_order]
