"""JSON encoding of field elements, quaternions and forms.

All big integers are serialized as strings.  F-elements are emitted as
{"base": "F", "val": v, "digits": [d0, ...]} with base-p digits of the unit
part, little-endian; a bare integer string is accepted as shorthand on
input.  L-elements (and E-elements) are {"a": <F>, "b": <F>}, quaternions
{"a": <L>, "b": <L>}, forms {"epsilon": e, "rank": n, "gram": [[...]]}.
"""

from __future__ import annotations

from .errors import HermiwittError
from .hermitian import HermitianForm
from .padic import FElement, FieldConfig, QuadExtElement, QuadExtField
from .quaternion import QuaternionElement


class MalformedInput(HermiwittError):
    pass


def f_to_json(x: FElement) -> dict:
    if x.is_zero():
        return {"base": "F", "val": None, "digits": [], "prec": x.prec}
    return {"base": "F", "val": x.val, "digits": x.digits(), "prec": x.prec}


def f_from_json(cfg: FieldConfig, obj) -> FElement:
    if isinstance(obj, bool):
        raise MalformedInput("boolean is not a field element")
    if isinstance(obj, int):
        return cfg.f(obj)
    if isinstance(obj, str):
        try:
            return cfg.f(int(obj, 10))
        except ValueError as ex:
            raise MalformedInput(f"bad integer literal {obj!r}") from ex
    if not isinstance(obj, dict):
        raise MalformedInput("F-element must be an object, int or string")
    if obj.get("base", "F") != "F":
        raise MalformedInput("expected base F")
    val = obj.get("val")
    digits = obj.get("digits", [])
    if val is None:
        return cfg.f_zero()
    unit = 0
    for i, d in enumerate(digits):
        unit += int(d) * cfg.p**i
    if unit % cfg.p == 0:
        raise MalformedInput("unit part must not be divisible by p")
    return cfg.f(unit).shift(int(val))


def l_to_json(x: QuadExtElement) -> dict:
    return {"a": f_to_json(x.a), "b": f_to_json(x.b)}


def l_from_json(cfg: FieldConfig, obj) -> QuadExtElement:
    if isinstance(obj, (int, str)):
        return cfg.l(f_from_json(cfg, obj), 0)
    if not isinstance(obj, dict) or "a" not in obj:
        raise MalformedInput("L-element must be {'a': ..., 'b': ...}")
    return cfg.l(f_from_json(cfg, obj["a"]), f_from_json(cfg, obj.get("b", 0)))


def e_from_json(field: QuadExtField, obj) -> QuadExtElement:
    cfg = field.cfg
    if isinstance(obj, (int, str)):
        return field.from_f(f_from_json(cfg, obj))
    if not isinstance(obj, dict) or "a" not in obj:
        raise MalformedInput("E-element must be {'a': ..., 'b': ...}")
    return field.el(f_from_json(cfg, obj["a"]), f_from_json(cfg, obj.get("b", 0)))


def quat_to_json(q: QuaternionElement) -> dict:
    return {"a": l_to_json(q.a), "b": l_to_json(q.b)}


def quat_from_json(cfg: FieldConfig, obj) -> QuaternionElement:
    if isinstance(obj, (int, str)):
        return QuaternionElement.make(cfg, l_from_json(cfg, obj))
    if not isinstance(obj, dict) or "a" not in obj:
        raise MalformedInput("quaternion must be {'a': <L>, 'b': <L>}")
    return QuaternionElement(l_from_json(cfg, obj["a"]),
                             l_from_json(cfg, obj.get("b", 0)))


def form_to_json(form: HermitianForm) -> dict:
    return {"epsilon": form.epsilon, "rank": form.rank,
            "gram": [[quat_to_json(e) for e in row] for row in form.gram]}


def form_from_json(cfg: FieldConfig, obj) -> HermitianForm:
    if not isinstance(obj, dict) or "gram" not in obj or "epsilon" not in obj:
        raise MalformedInput("form must carry 'epsilon' and 'gram'")
    eps = int(obj["epsilon"])
    gram = obj["gram"]
    n = len(gram)
    if obj.get("rank", n) != n or any(len(r) != n for r in gram):
        raise MalformedInput("gram must be square and match 'rank'")
    rows = [[quat_from_json(cfg, e) for e in r] for r in gram]
    return HermitianForm.from_rows(eps, rows)


def beta_from_json(cfg: FieldConfig, obj, rank: int):
    """A quaternion (acting diagonally) or an explicit rank x rank matrix."""
    if isinstance(obj, list):
        if len(obj) != rank or any(len(r) != rank for r in obj):
            raise MalformedInput("beta matrix must match the form rank")
        return [[quat_from_json(cfg, e) for e in r] for r in obj]
    return quat_from_json(cfg, obj)


def edform_to_json(ed) -> dict:
    return {"epsilon": ed.epsilon,
            "delta": f_to_json(ed.split.E.delta),
            "t": ed.t,
            "H": [[l_to_json(x) for x in row] for row in ed.H]}


def edform_from_json(cfg: FieldConfig, obj):
    from .morita import EDForm, split_for_delta

    if not isinstance(obj, dict) or "H" not in obj or "delta" not in obj:
        raise MalformedInput("E(x)D form must carry 'delta' and 'H'")
    delta = f_from_json(cfg, obj["delta"])
    data = split_for_delta(cfg, delta)
    H = [[e_from_json(data.E, x) for x in row] for row in obj["H"]]
    ed = EDForm(data, int(obj["epsilon"]), tuple(tuple(r) for r in H))
    if not ed.validate():
        raise MalformedInput("H is not eps-hermitian nondegenerate over E")
    return ed
