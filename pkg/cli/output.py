"""
Output envelope shared by every subcommand.
"""

import json
from typing import Any, Dict

VERSION = "1.0.0"


def envelope(subcommand: str, input_echo: Dict[str, Any], result: Any, elapsed_ms: float) -> Dict[str, Any]:
    return {
        "subcommand": subcommand,
        "input": input_echo,
        "result": result,
        "elapsed_ms": round(elapsed_ms, 3),
        "version": VERSION,
    }


def render_json(env: Dict[str, Any]) -> str:
    """Deterministic JSON (sorted keys)."""
    return json.dumps(env, sort_keys=True)


def _render_value(value: Any, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item and not _is_flat_list(item):
                lines.append(f"{pad}{key}:")
                lines.append(_render_value(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(item)}")
        return "\n".join(lines)
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat_list(item):
                lines.append(f"{pad}-")
                lines.append(_render_value(item, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
        return "\n".join(lines)
    return f"{pad}{_inline(value)}"


def _is_flat_list(value: Any) -> bool:
    """Scalar lists share one line; strings may hold commas so they get a line each."""
    return isinstance(value, list) and all(not isinstance(x, (dict, list, str)) for x in value)


def _inline(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(str(x) for x in value) if value else "[]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, str) and "\n" in value:
        return value.strip().replace("\n", "; ")
    return str(value)


def render_text(env: Dict[str, Any]) -> str:
    """Human-readable rendering of the same payload."""
    header = f"{env['subcommand']} ({env['elapsed_ms']:.1f} ms)"
    return header + "\n" + _render_value(env["result"], 1)


def render(env: Dict[str, Any], as_json: bool) -> str:
    return render_json(env) if as_json else render_text(env)
