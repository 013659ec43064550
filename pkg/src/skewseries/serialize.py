"""JSON interchange for ring elements, with strict canonical validation.

Residues are decimal strings (p**K overflows native JSON numbers), with
one object "kind" per type.  Parsing is strict: a residue at or above
its slot modulus, a malformed digit string, or a missing field raises
SchemaError rather than being silently reduced; ``normalize=True`` opts
into reduction (and accepts signed values).  Dumps are byte-determinis-
tic -- sorted keys, minimal separators, trailing newline -- and writes
go through a temp file plus rename so readers never observe a partial
file.

Metadata keys ("seed", "subcommand", "n", "params") may ride along on
any object and are ignored by loaders; everything else unexpected is
rejected.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
from typing import Sequence

from .coeff import CoeffSeries
from .errors import SchemaError
from .precision import CHARP, INTEGRAL, PrecisionContext
from .series import SkewSeries
from .skew import SkewData, build_skew
from .weierstrass import DistinguishedPoly
from .iwasawa import ModuleSpec

MODE_TO_JSON = {INTEGRAL: "zp", CHARP: "fp"}
JSON_TO_MODE = {"zp": INTEGRAL, "fp": CHARP}

META_KEYS = frozenset({"seed", "subcommand", "n", "params"})

_UNSIGNED = re.compile(r"^(0|[1-9][0-9]*)$")
_SIGNED = re.compile(r"^-?(0|[1-9][0-9]*)$")


# -- low-level helpers ---------------------------------------------------


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_json_atomic(path: str, obj) -> None:
    write_text_atomic(path, canonical_json(obj))


def read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: top-level JSON value must be an object")
    return obj


def _need(obj: dict, field: str, where: str):
    if field not in obj:
        raise SchemaError(f"{where}: missing field {field!r}")
    return obj[field]


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    extra = set(obj) - allowed - META_KEYS
    if extra:
        raise SchemaError(f"{where}: unexpected fields {sorted(extra)}")


def _int_field(obj: dict, field: str, where: str) -> int:
    v = _need(obj, field, where)
    if not isinstance(v, int) or isinstance(v, bool):
        raise SchemaError(f"{where}: field {field!r} must be a JSON integer")
    return v


def _str_field(obj: dict, field: str, where: str) -> str:
    v = _need(obj, field, where)
    if not isinstance(v, str):
        raise SchemaError(f"{where}: field {field!r} must be a string")
    return v


def _parse_residue(s, modulus: int, normalize: bool, where: str) -> int:
    if not isinstance(s, str):
        raise SchemaError(f"{where}: residues must be decimal strings, got {s!r}")
    pat = _SIGNED if normalize else _UNSIGNED
    if not pat.match(s):
        raise SchemaError(f"{where}: {s!r} is not a canonical decimal residue")
    v = int(s)
    if not normalize and v >= modulus:
        raise SchemaError(
            f"{where}: residue {s} is not reduced (slot modulus {modulus})"
        )
    return v % modulus


def _parse_int_string(s, where: str) -> int:
    if not isinstance(s, str) or not _SIGNED.match(s):
        raise SchemaError(f"{where}: {s!r} is not a canonical decimal integer")
    return int(s)


def _kind(obj: dict, expected: str, where: str) -> None:
    k = _need(obj, "kind", where)
    if k != expected:
        raise SchemaError(f"{where}: expected kind {expected!r}, got {k!r}")


# -- precision context / twist data --------------------------------------

_CTX_FIELDS = {"kind", "p", "K", "mode", "epsilon"}


def context_fields(sd: SkewData) -> dict:
    return {
        "p": sd.ctx.p,
        "K": sd.ctx.K,
        "mode": MODE_TO_JSON[sd.ctx.mode],
        "epsilon": str(sd.epsilon_raw),
    }


def load_context(obj: dict, where: str) -> SkewData:
    p = _int_field(obj, "p", where)
    K = _int_field(obj, "K", where)
    mode = _str_field(obj, "mode", where)
    if mode not in JSON_TO_MODE:
        raise SchemaError(f"{where}: mode must be one of {sorted(JSON_TO_MODE)}")
    eps = _parse_int_string(_need(obj, "epsilon", where), where + ".epsilon")
    try:
        ctx = PrecisionContext(p, K, JSON_TO_MODE[mode])
        return build_skew(ctx, eps)
    except Exception as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# -- coefficient series --------------------------------------------------


def dump_coeff(c: CoeffSeries, epsilon: int | None = None) -> dict:
    obj = {
        "kind": "coeff_series",
        "p": c.ctx.p,
        "K": c.ctx.K,
        "mode": MODE_TO_JSON[c.ctx.mode],
        "coeffs": [str(v) for v in c.coeffs],
    }
    if epsilon is not None:
        obj["epsilon"] = str(epsilon)
    return obj


def _load_coeff_vector(
    raw, ctx: PrecisionContext, q: int, normalize: bool, where: str
) -> list[int]:
    moduli = ctx.slot_moduli(q)
    if not isinstance(raw, list):
        raise SchemaError(f"{where}: expected a list of residue strings")
    if len(raw) != q:
        raise SchemaError(f"{where}: expected {q} slots, got {len(raw)}")
    return [
        _parse_residue(s, moduli[a], normalize, f"{where}[{a}]")
        for a, s in enumerate(raw)
    ]


def load_coeff(obj: dict, normalize: bool = False) -> CoeffSeries:
    where = "coeff_series"
    _kind(obj, "coeff_series", where)
    _check_keys(obj, _CTX_FIELDS | {"coeffs"}, where)
    p = _int_field(obj, "p", where)
    K = _int_field(obj, "K", where)
    mode = _str_field(obj, "mode", where)
    if mode not in JSON_TO_MODE:
        raise SchemaError(f"{where}: mode must be one of {sorted(JSON_TO_MODE)}")
    try:
        ctx = PrecisionContext(p, K, JSON_TO_MODE[mode])
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    vals = _load_coeff_vector(
        _need(obj, "coeffs", where), ctx, K, normalize, where + ".coeffs"
    )
    return CoeffSeries(ctx, vals)


# -- skew series ---------------------------------------------------------


def dump_series(f: SkewSeries) -> dict:
    K = f.sd.ctx.K
    obj = {"kind": "skew_series", **context_fields(f.sd)}
    obj["rows"] = [[str(v) for v in row[: K - j]] for j, row in enumerate(f.rows)]
    return obj


def load_series(
    obj: dict, normalize: bool = False, sd: SkewData | None = None
) -> SkewSeries:
    where = "skew_series"
    _kind(obj, "skew_series", where)
    _check_keys(obj, _CTX_FIELDS | {"rows"}, where)
    loaded = load_context(obj, where)
    if sd is not None:
        sd.check_same(loaded)
    else:
        sd = loaded
    K = sd.ctx.K
    raw = _need(obj, "rows", where)
    if not isinstance(raw, list) or len(raw) != K:
        raise SchemaError(f"{where}.rows: expected {K} rows")
    rows = [
        _load_coeff_vector(r, sd.ctx, K - j, normalize, f"{where}.rows[{j}]")
        for j, r in enumerate(raw)
    ]
    return SkewSeries.from_rows(sd, rows)


# -- distinguished polynomials -------------------------------------------


def dump_distinguished(F: DistinguishedPoly) -> dict:
    obj = {"kind": "distinguished", **context_fields(F.sd)}
    obj["s"] = F.degree
    obj["lower"] = [[str(v) for v in a.coeffs] for a in F.lower]
    return obj


def load_distinguished(
    obj: dict, normalize: bool = False, sd: SkewData | None = None
) -> DistinguishedPoly:
    where = "distinguished"
    _kind(obj, "distinguished", where)
    _check_keys(obj, _CTX_FIELDS | {"s", "lower"}, where)
    loaded = load_context(obj, where)
    if sd is not None:
        sd.check_same(loaded)
    else:
        sd = loaded
    s = _int_field(obj, "s", where)
    if s < 0:
        raise SchemaError(f"{where}: degree s must be >= 0")
    raw = _need(obj, "lower", where)
    if not isinstance(raw, list) or len(raw) != s:
        raise SchemaError(f"{where}.lower: expected {s} coefficient vectors")
    lower = [
        CoeffSeries(
            sd.ctx,
            _load_coeff_vector(r, sd.ctx, sd.ctx.K, normalize, f"{where}.lower[{i}]"),
        )
        for i, r in enumerate(raw)
    ]
    try:
        return DistinguishedPoly(sd, s, tuple(lower))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# -- division problems ---------------------------------------------------


def dump_division_problem(g: SkewSeries, f: SkewSeries) -> dict:
    g.sd.check_same(f.sd)
    return {
        "kind": "division_problem",
        "dividend": dump_series(g),
        "divisor": dump_series(f),
    }


def load_division_problem(
    obj: dict, normalize: bool = False
) -> tuple[SkewSeries, SkewSeries]:
    where = "division_problem"
    _kind(obj, "division_problem", where)
    _check_keys(obj, {"kind", "dividend", "divisor"}, where)
    graw = _need(obj, "dividend", where)
    fraw = _need(obj, "divisor", where)
    if not isinstance(graw, dict) or not isinstance(fraw, dict):
        raise SchemaError(f"{where}: dividend and divisor must be skew_series objects")
    g = load_series(graw, normalize)
    f = load_series(fraw, normalize, sd=g.sd)
    return g, f


# -- Z-polynomials (descent input) ---------------------------------------


def dump_z_poly(sd: SkewData, coeffs: Sequence[CoeffSeries]) -> dict:
    for c in coeffs:
        sd.ctx.check_same(c.ctx)
    obj = {"kind": "z_poly", **context_fields(sd)}
    obj["coeffs"] = [[str(v) for v in c.coeffs] for c in coeffs]
    return obj


def load_z_poly(
    obj: dict, normalize: bool = False
) -> tuple[SkewData, list[CoeffSeries]]:
    where = "z_poly"
    _kind(obj, "z_poly", where)
    _check_keys(obj, _CTX_FIELDS | {"coeffs"}, where)
    sd = load_context(obj, where)
    raw = _need(obj, "coeffs", where)
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{where}.coeffs: expected a nonempty list")
    coeffs = [
        CoeffSeries(
            sd.ctx,
            _load_coeff_vector(r, sd.ctx, sd.ctx.K, normalize, f"{where}.coeffs[{i}]"),
        )
        for i, r in enumerate(raw)
    ]
    return sd, coeffs


# -- module specifications (rank growth input) ---------------------------


def dump_module_spec(ms: ModuleSpec) -> dict:
    return {
        "kind": "module_spec",
        "p": ms.p,
        "d": ms.d,
        "torsion_polys": [[str(c) for c in F] for F in ms.torsion_polys],
        "p_power_ranks": list(ms.p_power_ranks),
    }


def load_module_spec(obj: dict) -> ModuleSpec:
    where = "module_spec"
    _kind(obj, "module_spec", where)
    _check_keys(obj, {"kind", "p", "d", "torsion_polys", "p_power_ranks"}, where)
    p = _int_field(obj, "p", where)
    d = _int_field(obj, "d", where)
    rawt = obj.get("torsion_polys", [])
    rawr = obj.get("p_power_ranks", [])
    if not isinstance(rawt, list) or not all(isinstance(F, list) for F in rawt):
        raise SchemaError(f"{where}.torsion_polys: expected a list of lists")
    if not isinstance(rawr, list) or not all(
        isinstance(n, int) and not isinstance(n, bool) for n in rawr
    ):
        raise SchemaError(f"{where}.p_power_ranks: expected a list of integers")
    polys = tuple(
        tuple(
            _parse_int_string(c, f"{where}.torsion_polys[{i}][{j}]")
            for j, c in enumerate(F)
        )
        for i, F in enumerate(rawt)
    )
    try:
        return ModuleSpec(p, d, polys, tuple(rawr))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


# -- kind dispatch -------------------------------------------------------

_LOADERS = {
    "coeff_series": lambda obj, normalize: load_coeff(obj, normalize),
    "skew_series": lambda obj, normalize: load_series(obj, normalize),
    "distinguished": lambda obj, normalize: load_distinguished(obj, normalize),
    "division_problem": lambda obj, normalize: load_division_problem(obj, normalize),
    "z_poly": lambda obj, normalize: load_z_poly(obj, normalize),
    "module_spec": lambda obj, normalize: load_module_spec(obj),
}


def load_object(obj: dict, normalize: bool = False):
    kind = _need(obj, "kind", "input")
    if kind not in _LOADERS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {sorted(_LOADERS)}")
    return _LOADERS[kind](obj, normalize)
