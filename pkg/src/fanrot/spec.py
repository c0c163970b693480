"""Parsing element descriptions given on the command line.

Accepted forms::

    rot:p/q                     sector rotation on a q-sector regular fan
    lin:a,b,c,d                 linear map [[a,b],[c,d]] on the quadrant fan
    id                          identity
    random:seed:length          reproducible random word in the generators
    {"rays": ..., "matrices": ...}
    {"breakpoints": ..., "images": ...}
    [spec, spec, ...]           word, the first entry acts first
    @path                       read any of the above from a file
    -                           read from stdin
"""

from __future__ import annotations

import json
import re
import sys

from . import dyadic, plmap
from .plmap import PLAutomorphism


class SpecError(ValueError):
    """Malformed input (as opposed to a well-formed but invalid element)."""


_ROT = re.compile(r"^rot:(\d+)/(\d+)$")
_RANDOM = re.compile(r"^random:(-?\d+):(\d+)$")
_LIN = re.compile(r"^lin:(-?\d+),(-?\d+),(-?\d+),(-?\d+)$")


def parse_element(text: str, stdin=None) -> PLAutomorphism:
    text = text.strip()
    if text == "-":
        return parse_element((stdin or sys.stdin).read())
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                return parse_element(fh.read())
        except OSError as exc:
            raise SpecError(f"cannot read {text[1:]}: {exc}") from None
    if text[:1] in "{[":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed JSON: {exc}") from None
        return element_from_obj(obj)
    return _parse_word(text)


def _parse_word(text: str) -> PLAutomorphism:
    if text == "id":
        return plmap.identity()
    m = _ROT.match(text)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if q < 3 or p >= q:
            raise SpecError(f"rot:p/q needs 0 <= p < q and q >= 3, got {text}")
        return plmap.construct_rotation(p, q)
    m = _RANDOM.match(text)
    if m:
        seed, length = int(m.group(1)), int(m.group(2))
        if length < 1:
            raise SpecError("random element length must be >= 1")
        return plmap.random_element(seed, length)
    m = _LIN.match(text)
    if m:
        return plmap.linear([[int(m.group(1)), int(m.group(2))], [int(m.group(3)), int(m.group(4))]])
    raise SpecError(f"unrecognized element spec {text!r}")


def element_from_obj(obj) -> PLAutomorphism:
    if isinstance(obj, str):
        return parse_element(obj)
    if isinstance(obj, list):
        if not obj:
            raise SpecError("empty word")
        F = element_from_obj(obj[0])
        for item in obj[1:]:
            F = plmap.compose(element_from_obj(item), F)
        return F
    if isinstance(obj, dict):
        if "rays" in obj:
            try:
                return plmap.from_json(obj)
            except plmap.InvalidElement:
                raise
            except ValueError as exc:
                raise SpecError(str(exc)) from None
        if "breakpoints" in obj:
            try:
                f = dyadic.from_json(obj)
            except dyadic.InvalidDyadicMap:
                raise
            except ValueError as exc:
                raise SpecError(str(exc)) from None
            return dyadic.from_dyadic(f)
    raise SpecError("element JSON must have 'rays'/'matrices' or 'breakpoints'/'images'")
