"""Complex files: a small JSON format.

Top-level fields: `name` (string), `generators` (list of {id, grw, grz}),
`differential` (list of {from, to, u, v}), each entry one monomial term;
duplicate (from, to, u, v) quadruples are an error. The optional `iota`
field has the same entry shape and is interpreted as a skew-equivariant
involution candidate; it must pass the skew chain-map checks.

Loading validates everything and reports violations with entry context;
saving canonicalizes ordering so that save(load(f)) is byte-stable.
"""

from __future__ import annotations

import json
from typing import Dict, Optional, Tuple

from .complexes import BigradedComplex, Generator, SkewMap, verify_chain_map
from .errors import FileFormatError, ValidationError
from .rings import UVPoly, uv_add, uv_mono


def _entry_context(kind: str, idx: int) -> str:
    return f"{kind} entry #{idx}"


def _parse_entries(raw, kind: str, names) -> Dict[str, Dict[str, UVPoly]]:
    seen = set()
    out: Dict[str, Dict[str, UVPoly]] = {}
    for idx, entry in enumerate(raw):
        ctx = _entry_context(kind, idx)
        if not isinstance(entry, dict):
            raise FileFormatError(f"{ctx}: expected an object")
        try:
            src = entry["from"]
            tgt = entry["to"]
            u = entry["u"]
            v = entry["v"]
        except KeyError as missing:
            raise FileFormatError(f"{ctx}: missing field {missing}") from None
        if src not in names:
            raise FileFormatError(f"{ctx}: unknown generator {src!r} in 'from'")
        if tgt not in names:
            raise FileFormatError(f"{ctx}: unknown generator {tgt!r} in 'to'")
        if not isinstance(u, int) or not isinstance(v, int) or u < 0 or v < 0:
            raise FileFormatError(f"{ctx}: exponents must be nonnegative integers")
        quad = (src, tgt, u, v)
        if quad in seen:
            raise FileFormatError(f"{ctx}: duplicate term {quad}")
        seen.add(quad)
        row = out.setdefault(src, {})
        row[tgt] = uv_add(row.get(tgt, frozenset()), uv_mono(u, v))
    return out


def load_complex(path: str) -> Tuple[BigradedComplex, Optional[SkewMap]]:
    """Load and fully validate a complex file; returns (complex, iota?)."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not well-formed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FileFormatError("top level must be an object")
    gens_raw = data.get("generators")
    if not isinstance(gens_raw, list) or not gens_raw:
        raise FileFormatError("'generators' must be a nonempty list")
    gens = []
    for idx, g in enumerate(gens_raw):
        ctx = _entry_context("generator", idx)
        if not isinstance(g, dict):
            raise FileFormatError(f"{ctx}: expected an object")
        try:
            gens.append(Generator(str(g["id"]), int(g["grw"]), int(g["grz"])))
        except KeyError as missing:
            raise FileFormatError(f"{ctx}: missing field {missing}") from None
    names = {g.name for g in gens}
    if len(names) != len(gens):
        raise FileFormatError("duplicate generator ids")
    diff = _parse_entries(data.get("differential", []), "differential", names)
    try:
        complex_ = BigradedComplex(gens, diff).require_valid()
    except ValidationError as exc:
        raise FileFormatError(
            f"{path}: complex fails validation: {'; '.join(exc.violations)}"
        ) from None
    iota = None
    if "iota" in data:
        entries = _parse_entries(data["iota"], "iota", names)
        iota = SkewMap(complex_, entries, provenance="user-file")
        violation = verify_chain_map(iota)
        if violation is not None:
            raise FileFormatError(f"{path}: iota rejected: {violation}")
    return complex_, iota


def save_complex(
    complex_: BigradedComplex,
    path: str,
    name: str = "",
    iota: Optional[SkewMap] = None,
) -> None:
    def entry_list(entries):
        rows = []
        for src in sorted(entries):
            for tgt in sorted(entries[src]):
                for u, v in sorted(entries[src][tgt]):
                    rows.append({"from": src, "to": tgt, "u": u, "v": v})
        return rows

    data = {
        "name": name,
        "generators": [
            {"id": g.name, "grw": g.grw, "grz": g.grz} for g in complex_.gens
        ],
        "differential": entry_list(complex_.diff),
    }
    if iota is not None:
        data["iota"] = entry_list(iota.entries)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=1, sort_keys=True)
        handle.write("\n")
