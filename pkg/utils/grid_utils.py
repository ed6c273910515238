"""
Grid utilities for probe radii and truncation dimension lists
"""
from typing import List, Optional, Tuple


def dyadic_radii(levels: int) -> List[float]:
    """
    Radii 1 - 2^-j for j = 1..levels.

    Examples:
        1 -> [0.5]
        3 -> [0.5, 0.75, 0.875]
    """
    if levels < 1:
        raise ValueError("levels must be at least 1")
    return [1.0 - 2.0 ** -j for j in range(1, levels + 1)]


def parse_dims(text: Optional[str]) -> Optional[List[int]]:
    """
    Parse a dimension list.

    Examples:
        "8..20"    -> [8, 9, ..., 20]
        "8..20:4"  -> [8, 12, 16, 20]
        "8,12,16"  -> [8, 12, 16]

    Args:
        text: list expression, None passes through

    Returns:
        List of dims in the given order (validation happens in the experiment config)
    """
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        span, _, step_text = text.partition(":")
        start_text, _, stop_text = span.partition("..")
        step = int(step_text) if step_text else 1
        if step < 1:
            raise ValueError(f"step must be positive in {text!r}")
        return list(range(int(start_text), int(stop_text) + 1, step))
    return [int(part) for part in text.split(",") if part.strip()]


def parse_pair(text: Optional[str]) -> Optional[Tuple[int, int]]:
    """'2,3' -> (2, 3)."""
    if text is None:
        return None
    parts = [int(part) for part in text.split(",") if part.strip()]
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated integers, got {text!r}")
    return parts[0], parts[1]


def parse_radii(text: Optional[str]) -> Optional[List[float]]:
    """'0.5,0.75' -> [0.5, 0.75]; an empty string gives an empty list."""
    if text is None:
        return None
    return [float(part) for part in text.split(",") if part.strip()]
