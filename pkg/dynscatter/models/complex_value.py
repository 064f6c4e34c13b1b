"""Complex scalar field type shared by the JSON-facing models."""

from typing import Annotated, Any, Dict

from pydantic import BeforeValidator, PlainSerializer


def coerce_complex(value: Any) -> complex:
    """Accept numbers, ``[re, im]`` pairs, ``{"re", "im"}`` objects and "1+2j" strings."""
    if isinstance(value, bool):
        raise ValueError("expected a complex number, got a boolean")
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and "re" in value:
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.endswith("i"):
            text = text[:-1] + "j"
        return complex(text)
    raise ValueError(f"expected a complex number, got {type(value).__name__}")


def dump_complex(value: complex) -> Dict[str, float]:
    value = complex(value)
    return {"re": value.real, "im": value.imag, "abs": abs(value)}


ComplexValue = Annotated[
    complex,
    BeforeValidator(coerce_complex),
    PlainSerializer(dump_complex, return_type=dict),
]
