"""Flat sectioned config files for experiments and protocol scenarios.

The format is deliberately small: `[section]` headers, `key = value` lines,
`#` comments. Unknown keys are hard errors with the offending line number,
so a typo cannot silently fall back to a default.
"""
from __future__ import annotations

from .game import GameConfig
from .protocol.world import Scenario

__all__ = ["ConfigError", "parse_sections", "load_game_config", "load_scenario"]


class ConfigError(ValueError):
    pass


def parse_sections(text: str) -> dict:
    """{section: {key: (raw value, line number)}} with duplicate detection."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise ConfigError(f"line {lineno}: empty section name")
            if current in sections:
                raise ConfigError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = {}
            continue
        if current is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        if key in sections[current]:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in [{current}]")
        sections[current][key] = (value.strip(), lineno)
    return sections


def _convert(caster, raw, lineno, key):
    try:
        return caster(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None


def _boolean(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _int_or_none(raw: str):
    return None if raw.lower() == "none" else int(raw)


def _float_or_none(raw: str):
    return None if raw.lower() == "none" else float(raw)


def _targets(raw: str):
    if raw.lower() == "none":
        return None
    parts = [p for p in raw.replace(",", " ").split() if p]
    values = [float(p) for p in parts]
    return values[0] if len(values) == 1 else values


def _pair_list(raw: str):
    # "1:0, 3:2" -> ((1, 0), (3, 2))
    pairs = []
    for item in raw.replace(",", " ").split():
        a, sep, b = item.partition(":")
        if not sep:
            raise ValueError(f"expected smr:shard pair, got {item!r}")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


_GAME_KEYS = {
    "num_shards": int,
    "rounds": int,
    "gamma": float,
    "beta": float,
    "mode": str,
    "policy": str,
    "adversary": str,
    "num_nodes": _int_or_none,
    "rotation_interval": int,
    "compliance": float,
    "seed": _int_or_none,
    "targets": _targets,
    "focus": _int_or_none,
    "floor_budget": _float_or_none,
    "margin": _float_or_none,
    "occupancy": float,
    "growth": _float_or_none,
    "target_shard": int,
}

_OUTPUT_KEYS = {"directory": str, "plot": _boolean, "label": str}

_SCENARIO_KEYS = {
    "num_nodes": int,
    "num_shards": int,
    "beta": float,
    "smr_blocks": int,
    "kappa": int,
    "epoch_length": int,
    "branching": int,
    "txs_per_block": int,
    "seed": int,
    "rotation_period": int,
    "withhold": _pair_list,
    "miscode": _pair_list,
    "bad_commitment": _pair_list,
    "censor_shard": _int_or_none,
}


def _collect(section: dict, known: dict, section_name: str) -> dict:
    out = {}
    for key, (raw, lineno) in section.items():
        caster = known.get(key)
        if caster is None:
            raise ConfigError(
                f"line {lineno}: unknown key {key!r} in [{section_name}]"
            )
        out[key] = _convert(caster, raw, lineno, key)
    return out


def load_game_config(text: str):
    """Returns (GameConfig, output options dict)."""
    sections = parse_sections(text)
    unknown = set(sections) - {"game", "output"}
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    if "game" not in sections:
        raise ConfigError("missing [game] section")
    kwargs = _collect(sections["game"], _GAME_KEYS, "game")
    output = _collect(sections.get("output", {}), _OUTPUT_KEYS, "output")
    try:
        config = GameConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return config, output


def load_scenario(text: str):
    """Returns (Scenario, output options dict)."""
    sections = parse_sections(text)
    unknown = set(sections) - {"scenario", "output"}
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    if "scenario" not in sections:
        raise ConfigError("missing [scenario] section")
    kwargs = _collect(sections["scenario"], _SCENARIO_KEYS, "scenario")
    output = _collect(sections.get("output", {}), _OUTPUT_KEYS, "output")
    try:
        scenario = Scenario(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return scenario, output
