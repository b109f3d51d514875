"""Reading and writing map files.

A map file is a JSON document::

    {
      "dimension": 2,
      "convention": "X-H",
      "components": [
        [{"exponents": [0, 2], "num": "1", "den": "1"}],
        []
      ]
    }

``components`` holds the nonlinear part in the stated convention: for ``"X+H"``
the map is X + H~ and is normalized internally to X - H with H = -H~.  Extra
top-level keys (``id``, ``provenance``, ``expected``, ``certificate`` ...) are kept
in order and written back after the standard fields, so canonical files round-trip
byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .multipoly import Poly
from .polymap import HPart, PolyMap

CONVENTIONS = ("X-H", "X+H")
_STANDARD_KEYS = ("dimension", "convention", "components")


class MapFormatError(ValueError):
    pass


@dataclass
class MapDocument:
    """A parsed map file.  ``H`` is always in the X - H convention."""

    H: HPart
    convention: str = "X-H"
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.H.n

    @property
    def negated(self) -> bool:
        return self.convention == "X+H"

    @property
    def map_id(self) -> str:
        return str(self.extra.get("id", ""))

    def stored_components(self) -> PolyMap:
        return -self.H if self.negated else self.H


def _poly_to_json(p: Poly) -> list[dict[str, Any]]:
    return [
        {"exponents": list(alpha), "num": str(c.numerator), "den": str(c.denominator)}
        for alpha, c in p.sorted_terms()
    ]


def _poly_from_json(obj: Any, n: int, where: str) -> Poly:
    if not isinstance(obj, list):
        raise MapFormatError(f"{where}: expected a list of terms")
    terms: dict[tuple[int, ...], Fraction] = {}
    for t, term in enumerate(obj):
        if not isinstance(term, dict):
            raise MapFormatError(f"{where}, term {t}: expected an object")
        missing = {"exponents", "num", "den"} - term.keys()
        if missing:
            raise MapFormatError(f"{where}, term {t}: missing {sorted(missing)}")
        exps = term["exponents"]
        if (
            not isinstance(exps, list)
            or len(exps) != n
            or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps)
        ):
            raise MapFormatError(f"{where}, term {t}: exponents must be {n} non-negative integers")
        try:
            num = int(term["num"])
            den = int(term["den"])
        except (TypeError, ValueError) as exc:
            raise MapFormatError(f"{where}, term {t}: num/den must be integer strings") from exc
        if not isinstance(term["num"], str) or not isinstance(term["den"], str):
            raise MapFormatError(f"{where}, term {t}: num/den must be strings")
        if den <= 0:
            raise MapFormatError(f"{where}, term {t}: den must be positive")
        key = tuple(exps)
        if key in terms:
            raise MapFormatError(f"{where}: duplicate exponent key {list(key)}")
        terms[key] = Fraction(num, den)
    return Poly(n, terms)


def parse_map(text: str) -> MapDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MapFormatError("top level must be an object")
    for key in _STANDARD_KEYS:
        if key not in data:
            raise MapFormatError(f"missing field {key!r}")
    n = data["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MapFormatError("dimension must be a positive integer")
    conv = data["convention"]
    if conv not in CONVENTIONS:
        raise MapFormatError(f"convention must be one of {CONVENTIONS}, got {conv!r}")
    comps = data["components"]
    if not isinstance(comps, list) or len(comps) != n:
        raise MapFormatError(f"components must be a list of {n} polynomials")
    polys = [_poly_from_json(c, n, f"component {i + 1}") for i, c in enumerate(comps)]
    for i, p in enumerate(polys):
        low = [a for a in p.terms if sum(a) < 2]
        if low:
            raise MapFormatError(
                f"component {i + 1}: term {list(low[0])} has degree < 2; "
                "maps must be given as X - H or X + H with H of order >= 2"
            )
    H = HPart(n, tuple(polys))
    if conv == "X+H":
        H = -H
    extra = {k: v for k, v in data.items() if k not in _STANDARD_KEYS}
    return MapDocument(H=H, convention=conv, extra=extra)


def dump_map(doc: MapDocument) -> str:
    """Canonical text: two-space indent, one term per line, terms in graded-lex order."""
    comps = []
    for p in doc.stored_components():
        terms = [json.dumps(t, separators=(", ", ": ")) for t in _poly_to_json(p)]
        if terms:
            body = ",\n".join(f"      {t}" for t in terms)
            comps.append(f"    [\n{body}\n    ]")
        else:
            comps.append("    []")
    fields = [
        f'  "dimension": {doc.n}',
        f'  "convention": {json.dumps(doc.convention)}',
        '  "components": [\n' + ",\n".join(comps) + "\n  ]",
    ]
    for key, value in doc.extra.items():
        rendered = json.dumps(value, indent=2).replace("\n", "\n  ")
        fields.append(f"  {json.dumps(key)}: {rendered}")
    return "{\n" + ",\n".join(fields) + "\n}\n"


def read_map(path: str | Path) -> MapDocument:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def write_map(doc: MapDocument, path: str | Path) -> None:
    Path(path).write_text(dump_map(doc), encoding="utf-8")
