"""Every worked configuration with its expected verdict (True = finite)."""

from __future__ import annotations

CONFIGS = [
    ("ex3.3", {"n": 3}, True),
    ("ex3.3", {"n": 4}, True),
    ("ex3.6.1", {}, False),
    ("ex3.6.2", {"n": 3}, True),
    ("ex3.6.2", {"n": 4}, True),
    ("ex3.7", {}, False),
    ("ex3.7", {"orthogonal": True}, True),
    ("ex3.8", {}, False),
    ("ex4.8", {}, True),
    ("ex4.9", {}, False),
    ("heisenberg", {"n": 2}, False),
    ("heisenberg", {"n": 4}, False),
    ("g2", {"L": "gl"}, True),
    ("g2", {"L": "sl"}, True),
    ("ex6.1", {"n": 4, "degenerate": True}, False),
    ("ex6.1", {"n": 4, "degenerate": True, "structure": "symmetric"}, False),
    ("ex6.1", {"n": 3, "degenerate": False}, True),
    ("ex6.1", {"n": 4, "degenerate": False}, True),
]

FIRST_KIND = [c for c in CONFIGS if c[0].startswith("ex3.")]


def config_id(cfg) -> str:
    name, params, _ = cfg
    return name + "".join(f"-{k}={v}" for k, v in sorted(params.items()))
