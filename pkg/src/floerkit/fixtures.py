"""Named built-in complexes and maps, plus loading of user fixture files."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .complex import (Complex, Endomorphism, ParseError, check_map, dual, fig8_rollspin,
                      figure_eight, map_from_fixture, parse_fixture,
                      staircase_from_exponents, torus_knot, unknot, validate)


class RegistryError(ValueError):
    """Unknown fixture name or a fixture that fails validation."""


def _trefoil() -> Complex:
    C = torus_knot(2, 3)
    return C.renamed({n: n for n in C.names}, name="trefoil")


def _fig8_dual() -> Complex:
    return dual(figure_eight(), name="fig8_dual")


COMPLEXES: Dict[str, Callable[[], Complex]] = {
    "unknot": unknot,
    "trefoil": _trefoil,
    "figure_eight": figure_eight,
    "fig8_dual": _fig8_dual,
}

MAPS: Dict[str, Callable[[], "tuple[Complex, Endomorphism]"]] = {
    "fig8_rollspin_map": lambda: (figure_eight(), fig8_rollspin()),
}


def _checked(C: Complex, label: str) -> Complex:
    rep = validate(C)
    if not rep.ok:
        raise RegistryError(f"fixture {label} is invalid: {rep}")
    return C


def builtin_names() -> list:
    return sorted(COMPLEXES) + ["torus:<p>,<q>", "staircase:<a0>,<a1>,..."] + sorted(MAPS)


def _ints(text: str, label: str) -> list:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise RegistryError(f"{label} expects comma-separated integers, got {text!r}") from None


def load_complex(ref: str) -> Complex:
    """Built-in name, torus:p,q, staircase:a0,...,a2n, or a fixture file path."""
    if ref in COMPLEXES:
        return _checked(COMPLEXES[ref](), ref)
    if ref.startswith("torus:"):
        pq = _ints(ref[6:], "torus")
        if len(pq) != 2:
            raise RegistryError("torus expects two integers p,q")
        try:
            return _checked(torus_knot(*pq), ref)
        except ValueError as e:
            raise RegistryError(str(e)) from None
    if ref.startswith("staircase:"):
        try:
            return _checked(staircase_from_exponents(_ints(ref[10:], "staircase")), ref)
        except ValueError as e:
            raise RegistryError(str(e)) from None
    if ref in MAPS:
        return _checked(MAPS[ref]()[0], ref)
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
        fx = parse_fixture(text)
        if fx.complex is None:
            raise ParseError("empty complex")
        return _checked(fx.complex, ref)
    raise RegistryError(f"unknown fixture {ref!r}; built-ins: {', '.join(builtin_names())}")


@dataclass
class LoadedMap:
    complex: Complex
    maps: Dict[str, Endomorphism]


def load_maps(ref: str, C: Optional[Complex] = None) -> LoadedMap:
    """Maps from a built-in map name or a file with 'map' lines (and optionally a complex)."""
    if ref in MAPS:
        C2, f = MAPS[ref]()
        return LoadedMap(C2, {f.name: f})
    if not os.path.exists(ref):
        raise RegistryError(f"unknown map fixture {ref!r}")
    with open(ref, encoding="utf-8") as fh:
        fx = parse_fixture(fh.read())
    base = fx.complex or C
    if base is None:
        raise RegistryError("map file has no complex and none was given")
    out = {}
    for name, ent in fx.maps.items():
        for x, vec in ent.items():
            for y in [x, *vec]:
                if y not in base.index:
                    raise ParseError(f"map {name} uses unknown generator {y!r}")
        out[name] = map_from_fixture(base, ent, name)
    if not out:
        raise RegistryError(f"{ref} defines no maps")
    return LoadedMap(base, out)


def startup_check() -> None:
    """Re-validate every static built-in; raise if any is broken."""
    for name in COMPLEXES:
        load_complex(name)
    for name, make in MAPS.items():
        C, f = make()
        _checked(C, name)
        probs = check_map(C, C, f)
        if probs:
            raise RegistryError(f"built-in map {name} is not a chain map: {probs[0]}")


__all__ = ["RegistryError", "COMPLEXES", "MAPS", "builtin_names", "load_complex", "load_maps",
           "LoadedMap", "startup_check"]
