"""Computation budgets.

Every exponential routine consults a :class:`Budget`.  Defaults can be
overridden process-wide through the ``HOMEXP_BUDGET`` environment variable,
either as a single integer (applied to every cap) or as a comma separated
list such as ``maps=1e6,enum=1e5,transfer=5000,tensor=1e6``.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace

ENV_VAR = "HOMEXP_BUDGET"

_ALIASES = {
    "maps": "map_cap",
    "map": "map_cap",
    "enum": "enum_cap",
    "transfer": "transfer_cap",
    "tensor": "tensor_cap",
}


@dataclass(frozen=True)
class Budget:
    map_cap: int = 10**7  # brute-force map enumeration |V(H)|^|F|
    enum_cap: int = 10**7  # members produced by subgraph enumeration
    transfer_cap: int = 10**5  # transfer-graph states |V(H)|^m
    tensor_cap: int = 10**7  # largest intermediate table in variable elimination

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"budget {f.name} must be positive")


def parse_budget(spec: str, base: Budget | None = None) -> Budget:
    base = base or Budget()
    spec = spec.strip()
    if not spec:
        return base
    if "=" not in spec:
        v = int(float(spec))
        return Budget(v, v, v, v)
    updates = {}
    for part in spec.split(","):
        key, _, val = part.partition("=")
        key = key.strip().lower()
        name = _ALIASES.get(key, key)
        if name not in {f.name for f in fields(Budget)}:
            raise ValueError(f"unknown budget key {key!r}")
        updates[name] = int(float(val))
    return replace(base, **updates)


_active: list = []


@contextmanager
def use_budget(budget: Budget):
    """Make ``budget`` the default inside the block."""
    _active.append(budget)
    try:
        yield budget
    finally:
        _active.pop()


def get_budget() -> Budget:
    """Default budget: the innermost :func:`use_budget`, else ``HOMEXP_BUDGET``, else built-ins."""
    if _active:
        return _active[-1]
    spec = os.environ.get(ENV_VAR)
    if spec:
        return parse_budget(spec)
    return Budget()
