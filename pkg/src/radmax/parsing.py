"""Text descriptors for sets, profiles and grids.

Sets::

    lacunary:ratio=1/2,k=-20..0
    cantor:depth=8,block=0[,remove=1/3]       block may also be [a;b]
    dilated:base={cantor:depth=6},k=-10..10   base may be @file.json
    explicit:1,3/2,[5/3;2]
    convergent:i=1..16[,block=0]
    random:n=20,M=12,seed=0[,block=0]
    empty
    @set.json

and ``A | B`` for unions.  Profiles::

    power:beta=-1.5,on=[1;2][,coef=1]
    powerlog:beta=-2,on=[0;1/2]
    const:c=1,on=[1;2]     indicator:on=[1;2]     ball:R=1
    step:edges=[1;2;4],values=[1;0.5]
    witness-block:p=1.2,d=3,j=0     witness-tent:d=3,a=0,L=2
    divergent:d=3     zero

joined with ``+``.  Numbers accept ``3/2``, ``0.75`` and ``2^-3``.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from . import dyadic, profiles, spherical
from .dyadic import DilationSet
from .profiles import RadialProfile

_OPEN, _CLOSE = "[{(", "]})"


class DescriptorError(ValueError):
    pass


# ----------------------------------------------------------------------------
# tokens
# ----------------------------------------------------------------------------

def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside brackets and braces."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise DescriptorError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise DescriptorError(f"unbalanced brackets in {text!r}")
    out.append("".join(cur))
    return [s.strip() for s in out]


def parse_number(text) -> Fraction:
    """``3/2``, ``0.75``, ``-4`` or ``2^-3`` as an exact fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(text)
    s = str(text).strip()
    try:
        if "^" in s:
            base, exp = s.split("^", 1)
            return Fraction(base.strip()) ** int(exp.strip().strip("{}()"))
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DescriptorError(f"cannot parse number {text!r}") from exc


def parse_float(text) -> float:
    s = str(text).strip().lower()
    if s in ("inf", "+inf", "infinity"):
        return math.inf
    return float(parse_number(s))


def parse_int(text) -> int:
    v = parse_number(text)
    if v.denominator != 1:
        raise DescriptorError(f"expected an integer, got {text!r}")
    return int(v)


def parse_range(text: str) -> tuple[int, int]:
    """``a..b`` (inclusive) as a pair of integers."""
    if ".." not in str(text):
        v = parse_int(text)
        return v, v
    a, b = str(text).split("..", 1)
    lo, hi = parse_int(a), parse_int(b)
    if hi < lo:
        raise DescriptorError(f"empty range {text!r}")
    return lo, hi


def parse_list(text: str) -> list[str]:
    """``[a;b;c]`` (or ``[a,b,c]``) into its items."""
    s = str(text).strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise DescriptorError(f"expected [a;b;...], got {text!r}")
    body = s[1:-1].strip()
    sep = ";" if ";" in body else ","
    return [x for x in split_top(body, sep) if x] if body else []


def _unbrace(text: str) -> str:
    s = text.strip()
    if s.startswith("{") and s.endswith("}"):
        return s[1:-1].strip()
    return s


def _head(text: str) -> tuple[str, str]:
    if ":" in text:
        name, rest = text.split(":", 1)
        return name.strip().lower(), rest.strip()
    return text.strip().lower(), ""


def _kwargs(body: str, allowed: set[str], where: str) -> dict[str, str]:
    out = {}
    if not body:
        return out
    for item in split_top(body, ","):
        if "=" not in item:
            raise DescriptorError(f"{where}: expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k not in allowed:
            raise DescriptorError(f"{where}: unknown key {k!r} (allowed: {sorted(allowed)})")
        out[k] = v.strip()
    return out


def _need(kw: dict, key: str, where: str) -> str:
    if key not in kw:
        raise DescriptorError(f"{where}: missing {key}=")
    return kw[key]


# ----------------------------------------------------------------------------
# sets
# ----------------------------------------------------------------------------

def load_set_file(path) -> DilationSet:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "descriptor" in data:
        return parse_set(data["descriptor"])
    if isinstance(data, dict) and ("intervals" in data or "points" in data):
        return DilationSet.from_json(data)
    if isinstance(data, list):
        return dyadic.explicit(tuple(x) if isinstance(x, list) else x for x in data)
    raise DescriptorError(f"{path}: not a set file")


def _parse_one_set(text: str) -> DilationSet:
    text = _unbrace(text)
    if not text:
        raise DescriptorError("empty set descriptor (use 'empty')")
    if text.startswith("@"):
        return load_set_file(text[1:])
    name, body = _head(text)
    try:
        if name == "empty":
            return DilationSet()
        if name == "lacunary":
            kw = _kwargs(body, {"ratio", "k"}, name)
            return dyadic.lacunary(parse_number(kw.get("ratio", "1/2")), parse_range(_need(kw, "k", name)))
        if name == "cantor":
            kw = _kwargs(body, {"depth", "block", "remove"}, name)
            blk: Any = kw.get("block", "0")
            blk = tuple(parse_number(x) for x in parse_list(blk)) if blk.startswith("[") else parse_int(blk)
            return dyadic.cantor(parse_int(_need(kw, "depth", name)), blk,
                                 parse_number(kw.get("remove", "1/3")))
        if name == "dilated":
            kw = _kwargs(body, {"base", "k"}, name)
            return dyadic.dilated(parse_set(_need(kw, "base", name)), parse_range(_need(kw, "k", name)))
        if name == "explicit":
            items = []
            for it in split_top(body, ","):
                if not it:
                    continue
                if it.startswith("["):
                    a, b = (parse_number(x) for x in parse_list(it))
                    items.append((a, b))
                else:
                    items.append(parse_number(it))
            return dyadic.explicit(items)
        if name == "convergent":
            kw = _kwargs(body, {"i", "block"}, name)
            return dyadic.convergent(parse_range(kw.get("i", "1..16")), parse_int(kw.get("block", "0")))
        if name == "random":
            kw = _kwargs(body, {"n", "block", "M", "seed"}, name)
            return dyadic.random_points(parse_int(_need(kw, "n", name)), parse_int(kw.get("block", "0")),
                                        parse_int(kw.get("M", "12")), parse_int(kw.get("seed", "0")))
    except DescriptorError:
        raise
    except ValueError as exc:
        raise DescriptorError(f"{text!r}: {exc}") from exc
    raise DescriptorError(f"unknown set kind {name!r}")


def parse_set(desc) -> DilationSet:
    """Build a :class:`DilationSet` from a descriptor string, a JSON dict or a set."""
    if isinstance(desc, DilationSet):
        return desc
    if isinstance(desc, dict):
        if "descriptor" in desc:
            return parse_set(desc["descriptor"])
        return DilationSet.from_json(desc)
    parts = split_top(str(desc), "|")
    out = _parse_one_set(parts[0])
    for part in parts[1:]:
        out = out.union(_parse_one_set(part))
    if len(parts) > 1:
        object.__setattr__(out, "label", str(desc))
    elif not out.label:
        object.__setattr__(out, "label", str(desc))
    return out


# ----------------------------------------------------------------------------
# profiles
# ----------------------------------------------------------------------------

def _support(text: str) -> tuple[float, float]:
    a, b = (parse_float(x) for x in parse_list(text))
    return a, b


def _parse_one_profile(text: str) -> RadialProfile:
    name, body = _head(_unbrace(text))
    try:
        if name == "zero":
            return profiles.zero()
        if name in ("power", "powerlog"):
            kw = _kwargs(body, {"beta", "coef", "on"}, name)
            ctor = profiles.power if name == "power" else profiles.powerlog
            return ctor(parse_float(_need(kw, "beta", name)), _support(_need(kw, "on", name)),
                        parse_float(kw.get("coef", "1")))
        if name in ("const", "constant"):
            kw = _kwargs(body, {"c", "on"}, name)
            return profiles.constant(parse_float(kw.get("c", "1")), _support(kw.get("on", "[0;inf]")))
        if name == "indicator":
            kw = _kwargs(body, {"on"}, name)
            return profiles.indicator(*_support(_need(kw, "on", name)))
        if name == "ball":
            kw = _kwargs(body, {"R"}, name)
            return profiles.ball(parse_float(kw.get("R", "1")))
        if name == "step":
            kw = _kwargs(body, {"edges", "values"}, name)
            return profiles.step([parse_float(x) for x in parse_list(_need(kw, "edges", name))],
                                 [parse_float(x) for x in parse_list(_need(kw, "values", name))])
        if name == "witness-block":
            kw = _kwargs(body, {"p", "d", "j"}, name)
            return spherical.witness_block(parse_float(_need(kw, "p", name)), parse_int(kw.get("d", "3")),
                                           parse_int(kw.get("j", "0")))
        if name == "witness-tent":
            kw = _kwargs(body, {"d", "a", "L"}, name)
            return spherical.witness_tent(parse_int(kw.get("d", "3")), parse_int(kw.get("a", "0")),
                                          parse_int(kw.get("L", "1")))
        if name == "divergent":
            kw = _kwargs(body, {"d"}, name)
            return spherical.divergent_profile(parse_int(kw.get("d", "3")))
    except DescriptorError:
        raise
    except ValueError as exc:
        raise DescriptorError(f"{text!r}: {exc}") from exc
    raise DescriptorError(f"unknown profile kind {name!r}")


def parse_profile(desc) -> RadialProfile:
    if isinstance(desc, RadialProfile):
        return desc
    parts = split_top(str(desc), "+")
    out = profiles.combine(_parse_one_profile(p) for p in parts)
    return RadialProfile(out.pieces, str(desc))


# ----------------------------------------------------------------------------
# grids
# ----------------------------------------------------------------------------

def parse_delta_grid(text) -> list[Fraction]:
    """``2^-1..2^-16`` (every power of two in between) or a comma list."""
    if isinstance(text, (list, tuple)):
        return [parse_number(x) for x in text]
    s = str(text).strip()
    if ".." in s and s.startswith("2^"):
        a, b = s.split("..", 1)
        if not b.strip().startswith("2^"):
            raise DescriptorError(f"delta grid {text!r}: both ends must be powers of two")
        e0, e1 = parse_int(a.strip()[2:]), parse_int(b.strip()[2:])
        step = -1 if e1 < e0 else 1
        return [Fraction(2) ** e for e in range(e0, e1 + step, step)]
    return [parse_number(x) for x in split_top(s, ",") if x]


def parse_r_grid(text) -> np.ndarray:
    """``geo:a..b:n``, ``lin:a..b:n`` or a comma list of radii."""
    if isinstance(text, (list, tuple, np.ndarray)):
        return np.asarray([float(x) for x in text])
    s = str(text).strip()
    for kind in ("geo", "lin"):
        if s.startswith(kind + ":"):
            try:
                rng, n = s[len(kind) + 1:].rsplit(":", 1)
                a, b = rng.split("..", 1)
                lo, hi, m = parse_float(a), parse_float(b), parse_int(n)
            except ValueError as exc:
                raise DescriptorError(f"bad grid {text!r}") from exc
            if not 0 < lo < hi or m < 2:
                raise DescriptorError(f"bad grid {text!r}: need 0 < a < b and n >= 2")
            return np.geomspace(lo, hi, m) if kind == "geo" else np.linspace(lo, hi, m)
    return np.asarray([parse_float(x) for x in split_top(s, ",") if x])
