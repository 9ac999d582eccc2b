"""JSON file formats. Rationals are always ``"p/q"`` strings; indices are
zero-based (good ``G_k`` is index ``k - 1``)."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .games import BimatrixGame, MixedProfile
from .market import Buyer, Market
from .plc import PLCRepresentation
from .rational import format_rational, parse_rational
from .reduction import ReductionMeta


def _rat(v) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ValueError(f"rationals must be 'p/q' strings or integers, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_rational(v)
    raise ValueError(f"not a rational: {v!r}")


def market_to_json(m: Market, meta: Optional[ReductionMeta] = None) -> dict:
    out = {
        "goods": [{"supply": format_rational(c)} for c in m.supplies],
        "buyers": [
            {
                "money": format_rational(b.money),
                "label": b.label,
                "valuations": {str(j): rep.to_json() for j, rep in b.valuations.items()},
            }
            for b in m.buyers
        ],
    }
    if meta is not None:
        out["meta"] = meta.to_json()
    return out


def market_from_json(obj: dict) -> Tuple[Market, Optional[ReductionMeta]]:
    supplies = [_rat(g["supply"]) for g in obj["goods"]]
    buyers = []
    for b in obj["buyers"]:
        vals = {int(j): PLCRepresentation.from_json(rep) for j, rep in b.get("valuations", {}).items()}
        buyers.append(Buyer(_rat(b["money"]), vals, label=b.get("label", "")))
    meta = ReductionMeta.from_json(obj["meta"]) if obj.get("meta") else None
    return Market(tuple(supplies), tuple(buyers)), meta


def prices_to_json(p: Sequence[Fraction]) -> list:
    return [format_rational(v) for v in p]


def prices_from_json(obj) -> List[Fraction]:
    if isinstance(obj, dict):
        obj = obj["prices"]
    return [_rat(v) for v in obj]


def game_to_json(g: BimatrixGame) -> dict:
    return {
        "A": [[format_rational(v) for v in row] for row in g.A],
        "B": [[format_rational(v) for v in row] for row in g.B],
    }


def game_from_json(obj: dict) -> BimatrixGame:
    if "n" in obj:
        n = int(obj["n"])
        mats = []
        for key in ("A", "B"):
            M = [[Fraction(0)] * n for _ in range(n)]
            for i, j, v in obj.get(key, []):
                M[int(i)][int(j)] = _rat(v)
            mats.append(M)
        return BimatrixGame(mats[0], mats[1])
    return BimatrixGame([[_rat(v) for v in row] for row in obj["A"]], [[_rat(v) for v in row] for row in obj["B"]])


def profile_to_json(prof: MixedProfile) -> dict:
    return {"x": [format_rational(v) for v in prof.x], "y": [format_rational(v) for v in prof.y]}


def profile_from_json(obj: dict) -> MixedProfile:
    return MixedProfile([_rat(v) for v in obj["x"]], [_rat(v) for v in obj["y"]])


def read_json(path: Union[str, Path]):
    with open(path) as fh:
        return json.load(fh)


def write_json(path: Union[str, Path], obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
