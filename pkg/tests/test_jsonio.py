"""Serialization roundtrips and random instance generation."""

import json

import pytest

from bimodulus.bimodules import Descriptor, NRSheaf
from bimodulus.curves import make_kind
from bimodulus.errors import ValidationError
from bimodulus.exactmath import QQ
from bimodulus.jsonio import (
    GENERATE_KINDS,
    generate_instance,
    instance_from_json,
    instance_to_json,
    validate_instance,
)
from bimodulus.linebundles import Curve, LineBundle, isomorphic
from bimodulus.moduli import Quadruple


def dumps_loads(obj):
    # through an actual JSON string, so nothing non-serializable sneaks by
    return instance_from_json(json.loads(json.dumps(instance_to_json(obj))))


def test_member_roundtrip(any_field, rng):
    f = make_kind(any_field, "I1", rng)
    g = dumps_loads(f)
    assert g.degree == (2, 2) and g.proportional(f)
    assert validate_instance(g) == {"type": "member", "kind": "I1"}


def test_line_bundle_roundtrip(F101, rng):
    curve = Curve(make_kind(F101, "I0", rng))
    L = LineBundle(curve, 1, -1)
    M = dumps_loads(L)
    assert M.curve.f.proportional(curve.f)
    assert (M.m, M.n) == (1, -1) and M.minus == L.minus and M.plus == L.plus
    info = validate_instance(M)
    assert info["member_kind"] == "I0" and info["degree"] == L.degree_total()


def test_nr_sheaf_roundtrip(any_field):
    sheaf = NRSheaf(any_field, 1, -1, any_field.coerce(3),
                    [any_field.coerce(2), any_field.one()], 1)
    back = dumps_loads(sheaf)
    assert (back.ku, back.kv, back.apic) == (sheaf.ku, sheaf.kv, sheaf.apic)
    assert back.dfin == sheaf.dfin and back.dinf == sheaf.dinf
    assert validate_instance(back) == {
        "type": "nr-sheaf", "chi": sheaf.chi(), "degd": sheaf.degd(),
        "invertible": False,
    }


def test_quadruple_roundtrip(F101, rng):
    quad = generate_instance("quadruple", F101, rng)
    back = dumps_loads(quad)
    assert isinstance(back, Quadruple)
    assert back.component == quad.component
    assert back.curve.f.proportional(quad.curve.f)
    assert isomorphic(back.L1, LineBundle(back.curve, quad.L1.m, quad.L1.n,
                                          quad.L1.minus, quad.L1.plus))


def test_descriptor_roundtrip():
    d = Descriptor("integral", chi=2, invertible=True, v_pullback=False)
    back = dumps_loads(d)
    assert back.kind == d.kind and back.params == d.params
    assert validate_instance(back) == {"type": "descriptor", "kind": "integral", "chi": 2}


def test_generate_every_kind(F101, rng):
    seen = set()
    for kind in GENERATE_KINDS:
        obj = generate_instance(kind, F101, rng)
        info = validate_instance(dumps_loads(obj))
        seen.add(info["type"])
        if kind == "smooth-bimodule-chi2":
            assert info == {"type": "line-bundle", "member_kind": "I0", "degree": 2}
        if kind == "smooth-bimodule-chi1":
            assert info["degree"] == 1
        if kind == "reducible":
            assert info["member_kind"] == "I2"
        if kind == "non-reduced":
            assert info["chi"] == 2 * obj.k - info["degd"]
    assert seen == {"line-bundle", "nr-sheaf", "quadruple"}


def test_generate_rejects_unknown_kind(F101, rng):
    with pytest.raises(ValidationError):
        generate_instance("mystery", F101, rng)


def test_parse_rejects_bad_payloads(F101, rng):
    with pytest.raises(ValidationError):
        instance_from_json(["not", "an", "object"])
    with pytest.raises(ValidationError):
        instance_from_json({"type": "mystery", "field": {"kind": "Fp", "p": 101}})
    with pytest.raises(ValidationError):
        instance_from_json({"type": "member", "field": {"kind": "Fp", "p": 91},
                            "f": []})
    blob = instance_to_json(make_kind(F101, "I0", rng))
    blob["f"] = "not a coefficient table"
    with pytest.raises(ValidationError):
        instance_from_json(blob)


def test_scalars_travel_as_strings(F101, rng):
    blob = instance_to_json(make_kind(F101, "I2", rng))
    flat = json.dumps(blob)
    parsed = json.loads(flat)
    assert parsed["field"] == {"kind": "Fp", "p": 101}
    coeffs = json.dumps(parsed["f"])
    assert '"' in coeffs  # coefficients are strings, not bare ints


def test_rational_quadruple_roundtrip(rng):
    quad = generate_instance("quadruple", QQ, rng)
    back = dumps_loads(quad)
    assert back.component == quad.component
