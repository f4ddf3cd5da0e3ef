"""Series specifications: a small JSON vocabulary naming every input series.

A spec is a dict with a ``kind`` and kind-specific fields, plus two options
shared by all kinds:

* ``map`` (Habiro kinds only): ``"T"`` for ``q = e^{1/x}`` (default),
  ``"T-"`` for ``q = e^{-1/x}``, ``"TZ"`` for ``q = 1 + 1/x``;
* ``normalize_exp``: a rational ``r``; the series is multiplied by ``e^{r/x}``.

Kinds: ``builtin`` (``name``: trefoil | fig8 | habiro_one), ``explicit``
(``terms``), ``qholonomic`` (recurrence fields), ``raw`` (``coeffs``),
``euler``, ``euler-alternating`` and ``geometric`` (``ratio``).
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from pathlib import Path

from .exact import as_rational, parse_rational
from .habiro import BUILTINS, HabiroElement, element_from_json, taylor_T, taylor_TZ
from .series import Fps, fps_exp

__all__ = ["SpecError", "SeriesSpec", "CACHE_VERSION"]

CACHE_VERSION = 1
HABIRO_KINDS = ("builtin", "explicit", "qholonomic")
SIMPLE_KINDS = ("raw", "euler", "euler-alternating", "geometric")
MAPS = ("T", "T-", "TZ")

_GEOMETRIC = re.compile(r"^geometric\((.+)\)$")


class SpecError(ValueError):
    pass


def _rational(text, what: str) -> Fraction:
    try:
        if isinstance(text, str):
            return Fraction(parse_rational(text))
        return Fraction(as_rational(text))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(f"invalid {what}: {text!r} ({exc})") from None


@dataclass(frozen=True)
class SeriesSpec:
    """A validated spec; ``data`` is its canonical JSON object."""

    data: dict

    @classmethod
    def from_json(cls, obj) -> "SeriesSpec":
        if not isinstance(obj, dict):
            raise SpecError("a series spec must be a JSON object")
        kind = obj.get("kind")
        if kind not in HABIRO_KINDS + SIMPLE_KINDS:
            raise SpecError(f"unknown spec kind {kind!r}")
        data = dict(obj)
        if kind in HABIRO_KINDS:
            data.setdefault("map", "T")
            if data["map"] not in MAPS:
                raise SpecError(f"map must be one of {', '.join(MAPS)}")
            if kind == "builtin" and data.get("name") not in BUILTINS:
                raise SpecError(f"unknown builtin Habiro element {data.get('name')!r}")
        elif "map" in data:
            raise SpecError(f"'map' does not apply to kind {kind!r}")
        if kind == "raw":
            if not isinstance(data.get("coeffs"), list) or not data["coeffs"]:
                raise SpecError("raw spec needs a nonempty 'coeffs' list")
            data["coeffs"] = [str(_rational(c, "coefficient")) for c in data["coeffs"]]
        if kind == "geometric":
            if "ratio" not in data:
                raise SpecError("geometric spec needs a 'ratio'")
            data["ratio"] = str(_rational(data["ratio"], "ratio"))
        if data.get("normalize_exp") is not None:
            data["normalize_exp"] = str(_rational(data["normalize_exp"], "normalize_exp"))
        else:
            data.pop("normalize_exp", None)
        spec = cls(data)
        if kind in ("explicit", "qholonomic"):
            try:
                spec.element()
            except (ValueError, KeyError) as exc:
                raise SpecError(f"invalid Habiro element: {exc}") from None
        return spec

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "SeriesSpec":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec file {path}: {exc.strerror}") from None
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"spec file {path} is not valid JSON: {exc}") from None
        return cls.from_json(obj)

    @classmethod
    def from_builtin(cls, name: str) -> "SeriesSpec":
        """``trefoil``, ``fig8``, ``habiro_one``, ``euler``, ``euler-alternating`` or ``geometric(r)``."""
        if name in BUILTINS:
            return cls.from_json({"kind": "builtin", "name": name})
        if name in ("euler", "euler-alternating"):
            return cls.from_json({"kind": name})
        m = _GEOMETRIC.match(name)
        if m:
            return cls.from_json({"kind": "geometric", "ratio": m.group(1)})
        raise SpecError(f"unknown builtin series {name!r}")

    def with_normalization(self, r) -> "SeriesSpec":
        data = dict(self.data)
        data["normalize_exp"] = r
        return SeriesSpec.from_json(data)

    @property
    def kind(self) -> str:
        return self.data["kind"]

    def canonical(self) -> str:
        return json.dumps(self.data, sort_keys=True, separators=(",", ":"))

    def cache_key(self, order: int) -> str:
        h = hashlib.sha256(f"{self.canonical()}|{order}|v{CACHE_VERSION}".encode())
        return h.hexdigest()

    def element(self) -> HabiroElement:
        if self.kind not in HABIRO_KINDS:
            raise SpecError(f"kind {self.kind!r} is not a Habiro element")
        return element_from_json(self.data)

    def _raw_series(self, order: int) -> Fps:
        kind = self.kind
        if kind in HABIRO_KINDS:
            phi = self.element()
            if self.data["map"] == "TZ":
                return taylor_TZ(phi, order)
            f = taylor_T(phi, order)
            return f.flip() if self.data["map"] == "T-" else f
        if kind == "raw":
            cs = [Fraction(c) for c in self.data["coeffs"]]
            if len(cs) < order + 1:
                raise SpecError(f"raw spec has {len(cs)} coefficients, order {order} needs {order + 1}")
            return Fps(cs[: order + 1], "inv_x")
        if kind == "euler":
            # sum_{n>=0} n! x^{-n-1}
            return Fps([0] + [factorial(n - 1) for n in range(1, order + 1)], "inv_x")
        if kind == "euler-alternating":
            return Fps([0] + [(-1) ** (n - 1) * factorial(n - 1) for n in range(1, order + 1)], "inv_x")
        if kind == "geometric":
            r = Fraction(self.data["ratio"])
            return Fps([r**n for n in range(order + 1)], "inv_x")
        raise SpecError(f"unknown spec kind {kind!r}")  # pragma: no cover

    def resolve(self, order: int, cache_dir: str | os.PathLike | None = None) -> Fps:
        """Exact coefficients of ``x^0 .. x^-order``; optionally cached on disk."""
        if order < 0:
            raise SpecError("order must be nonnegative")
        path = None
        if cache_dir is not None:
            path = Path(cache_dir) / f"{self.cache_key(order)}.json"
            cached = _read_cache(path, self, order)
            if cached is not None:
                return cached
        f = self._raw_series(order)
        if "normalize_exp" in self.data:
            r = Fraction(self.data["normalize_exp"])
            f = f * fps_exp(Fps([0, r] + [0] * (order - 1), "inv_x").truncate(order))
        if path is not None:
            _write_cache(path, self, order, f)
        return f


def _read_cache(path: Path, spec: SeriesSpec, order: int) -> Fps | None:
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if obj.get("version") != CACHE_VERSION or obj.get("spec") != spec.data or obj.get("order") != order:
        return None
    return Fps([Fraction(c) for c in obj["coeffs"]], obj.get("var", "inv_x"))


def _write_cache(path: Path, spec: SeriesSpec, order: int, f: Fps) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    obj = {
        "version": CACHE_VERSION,
        "spec": spec.data,
        "order": order,
        "var": f.var,
        "coeffs": [str(Fraction(c)) for c in f.coeffs],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(obj, sort_keys=True))
    os.replace(tmp, path)
