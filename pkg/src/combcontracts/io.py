"""JSON instance format.

Rationals are written as ``"num/den"`` strings; integers are accepted on
input.  Explicit tables map every bitmask (as a decimal string) to a value.
"""

from __future__ import annotations

import json
from pathlib import Path

from .costs import Instance, SPACost
from .errors import CapacityError, InputError, ParseError
from .functions import (
    MAX_TABLE_N,
    OXS,
    Additive,
    BudgetAdditive,
    ExplicitTable,
    PlusSymmetric,
    RewardFunction,
    Symmetric,
    Truncated,
    UnitDemand,
)
from .sets import MAX_N, format_rational, to_rational


def _field(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise ParseError(f"{where} must be a JSON object")
    if key not in d:
        raise ParseError(f"{where} is missing field {key!r}")
    return d[key]


def _rats(x, where: str) -> list:
    if not isinstance(x, list):
        raise ParseError(f"{where} must be a list of rationals")
    return [to_rational(v) for v in x]


def reward_from_dict(d: dict, n: int | None = None) -> RewardFunction:
    kind = _field(d, "type", "reward")
    if kind == "explicit":
        values = _field(d, "values", "explicit reward")
        if not isinstance(values, dict):
            raise ParseError("explicit reward values must map bitmask strings to rationals")
        size = len(values)
        m = size.bit_length() - 1
        if n is None:
            n = m
        if n > MAX_TABLE_N:
            raise CapacityError(f"explicit tables support n <= {MAX_TABLE_N}, got {n}")
        table = []
        for S in range(1 << n):
            if str(S) not in values:
                raise ParseError(f"explicit table is missing key {str(S)!r}")
            table.append(to_rational(values[str(S)]))
        if size != 1 << n:
            raise ParseError(f"explicit table for n = {n} must have {1 << n} entries, got {size}")
        return ExplicitTable(table)
    if kind == "additive":
        return Additive(_rats(_field(d, "weights", "additive reward"), "weights"))
    if kind == "symmetric":
        return Symmetric(_rats(_field(d, "levels", "symmetric reward"), "levels"))
    if kind == "budget_additive":
        return BudgetAdditive(
            _rats(_field(d, "weights", "budget-additive reward"), "weights"),
            to_rational(_field(d, "budget", "budget-additive reward")),
        )
    if kind == "unit_demand":
        return UnitDemand(_rats(_field(d, "weights", "unit-demand reward"), "weights"))
    if kind == "oxs":
        rows = _field(d, "weights", "oxs reward")
        if not isinstance(rows, list):
            raise ParseError("oxs weights must be a list of rows")
        return OXS([_rats(r, "oxs row") for r in rows])
    if kind == "plus_symmetric":
        inner = reward_from_dict(_field(d, "inner", "plus_symmetric reward"), n)
        return PlusSymmetric(inner, _rats(_field(d, "levels", "plus_symmetric reward"), "levels"))
    if kind == "truncated":
        inner = reward_from_dict(_field(d, "inner", "truncated reward"), n)
        t = _field(d, "t", "truncated reward")
        if not isinstance(t, int) or isinstance(t, bool):
            raise ParseError("truncation size t must be an integer")
        return Truncated(inner, t)
    raise ParseError(f"unknown reward type {kind!r}")


def reward_to_dict(f: RewardFunction) -> dict:
    fmt = lambda xs: [format_rational(x) for x in xs]
    if isinstance(f, ExplicitTable):
        return {"type": "explicit", "values": {str(S): format_rational(v) for S, v in enumerate(f.values)}}
    if isinstance(f, Additive):
        return {"type": "additive", "weights": fmt(f.weights)}
    if isinstance(f, Symmetric):
        return {"type": "symmetric", "levels": fmt(f.levels)}
    if isinstance(f, BudgetAdditive):
        return {"type": "budget_additive", "weights": fmt(f.weights), "budget": format_rational(f.budget)}
    if isinstance(f, UnitDemand):
        return {"type": "unit_demand", "weights": fmt(f.weights)}
    if isinstance(f, OXS):
        return {"type": "oxs", "weights": [fmt(r) for r in f.weights]}
    if isinstance(f, PlusSymmetric):
        return {"type": "plus_symmetric", "inner": reward_to_dict(f.inner), "levels": fmt(f.levels)}
    if isinstance(f, Truncated):
        return {"type": "truncated", "inner": reward_to_dict(f.inner), "t": f.t}
    raise InputError(f"reward of type {type(f).__name__} has no JSON form")


def cost_from_dict(d: dict, n: int) -> SPACost:
    if not isinstance(d, dict):
        raise ParseError("cost must be a JSON object")
    p = _rats(d["additive"], "additive cost") if "additive" in d else [0] * n
    g = _rats(d["symmetric"], "symmetric cost") if "symmetric" in d else None
    if len(p) != n:
        raise InputError(f"expected {n} additive costs, got {len(p)}")
    return SPACost(p, g)


def cost_to_dict(c: SPACost) -> dict:
    out = {"additive": [format_rational(x) for x in c.additive]}
    if not c.is_additive:
        out["symmetric"] = [format_rational(x) for x in c.symmetric]
    return out


def instance_from_dict(d: dict) -> Instance:
    n = _field(d, "n", "instance")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError("n must be a nonnegative integer")
    if n > MAX_N:
        raise CapacityError(f"ground sets are limited to n <= {MAX_N}, got {n}")
    f = reward_from_dict(_field(d, "reward", "instance"), n)
    if f.n != n:
        raise InputError(f"reward has n = {f.n} but the instance declares n = {n}")
    c = cost_from_dict(_field(d, "cost", "instance"), n)
    label = d.get("label", "")
    return Instance(f, c, label=str(label))


def instance_to_dict(inst: Instance) -> dict:
    out = {"n": inst.n, "reward": reward_to_dict(inst.reward), "cost": cost_to_dict(inst.cost)}
    if inst.label:
        out["label"] = inst.label
    return out


def loads(text: str) -> Instance:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return instance_from_dict(d)


def dumps(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def load(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads(text)


def dump(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst))
