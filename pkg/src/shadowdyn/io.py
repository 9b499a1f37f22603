"""JSON codecs for systems, pseudo-orbits, measures and certificates.

Every emitted number that is a claim (a distance, a bound, a weight) is an
exact rational rendered as "p/q"; documents carry a schema tag and
certificates a content hash, both checked on load.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Optional, Union

from .horseshoe import HorseshoeCertificate, LoopFamily, SeparationWitness
from .measures import EmpiricalMeasure
from .pseudo_orbits import PseudoOrbit, validate
from .systems import NetSystem, SymbolicPoint, SymbolicSystem

SCHEMA_SYSTEM = "shadowdyn/system.v1"
SCHEMA_ORBIT = "shadowdyn/pseudo-orbit.v1"
SCHEMA_MEASURE = "shadowdyn/measure.v1"
SCHEMA_CERT = "shadowdyn/horseshoe-certificate.v1"


class SchemaError(ValueError):
    """Document does not carry the expected schema or hash."""


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(s)


def point_to_json(p) -> Union[int, dict]:
    if isinstance(p, SymbolicPoint):
        return {"offset": p.offset, "word": list(p.word), "period": list(p.period)}
    return int(p)


def point_from_json(doc, system):
    if isinstance(doc, dict):
        p = SymbolicPoint(doc["period"], doc.get("word", ()), doc.get("offset", 0))
        if isinstance(system, SymbolicSystem) and not system.admissible(p):
            raise SchemaError("point is not admissible for the system")
        return p
    return int(doc)


def system_to_json(system) -> dict:
    if isinstance(system, SymbolicSystem):
        return {"schema": SCHEMA_SYSTEM, "kind": "symbolic",
                "alphabet_size": system.alphabet_size,
                "transitions": [list(r) for r in system.transitions]}
    rows = [[frac_str(system.distance(i, j)) for j in range(system.n)]
            for i in range(system.n)]
    return {"schema": SCHEMA_SYSTEM, "kind": "net",
            "labels": [str(l) for l in system.labels],
            "metric": rows,
            "map": list(system.map),
            "resolution": frac_str(system.resolution),
            "invertible": system.invertible}


def system_from_json(doc) -> Union[SymbolicSystem, NetSystem]:
    if doc.get("schema") != SCHEMA_SYSTEM:
        raise SchemaError("not a system document")
    if doc["kind"] == "symbolic":
        return SymbolicSystem(doc["alphabet_size"], doc["transitions"])
    if doc["kind"] != "net":
        raise SchemaError(f"unknown system kind {doc['kind']!r}")
    rows = [[parse_frac(v) for v in row] for row in doc["metric"]]
    return NetSystem(doc["labels"], rows, doc["map"],
                     resolution=parse_frac(doc["resolution"]),
                     invertible=doc.get("invertible", False))


def orbit_to_json(po: PseudoOrbit) -> dict:
    return {"schema": SCHEMA_ORBIT,
            "points": [point_to_json(p) for p in po.points],
            "delta": frac_str(po.delta),
            "kind": po.kind}


def orbit_from_json(doc, system) -> PseudoOrbit:
    if doc.get("schema") != SCHEMA_ORBIT:
        raise SchemaError("not a pseudo-orbit document")
    pts = [point_from_json(p, system) for p in doc["points"]]
    return validate(pts, parse_frac(doc["delta"]), system, kind=doc.get("kind"))


def measure_to_json(mu: EmpiricalMeasure) -> dict:
    return {"schema": SCHEMA_MEASURE,
            "atoms": [[point_to_json(p), frac_str(w)] for p, w in mu.atoms]}


def measure_from_json(doc, system) -> EmpiricalMeasure:
    if doc.get("schema") != SCHEMA_MEASURE:
        raise SchemaError("not a measure document")
    return EmpiricalMeasure([(point_from_json(p, system), parse_frac(w))
                             for p, w in doc["atoms"]])


def _payload_hash(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def certificate_to_json(cert: HorseshoeCertificate) -> dict:
    fam = cert.family
    payload = {
        "schema": SCHEMA_CERT,
        "base": point_to_json(fam.base),
        "loops": [[point_to_json(p) for p in lp.points] for lp in fam.loops],
        "delta": frac_str(fam.delta),
        "epsilon": frac_str(fam.epsilon),
        "witnesses": [{"a": w.loop_a, "b": w.loop_b, "index": w.index,
                       "distance": frac_str(w.distance)} for w in fam.witnesses],
        "word_length_max": cert.word_length_max,
        "coded": [{"word": list(word), "shadow": point_to_json(wit.shadow_point)}
                  for word, wit in sorted(cert.coded.items())],
        "entropy": {"log_arg": cert.entropy_log_arg,
                    "divisor": cert.entropy_divisor},
    }
    payload["sha256"] = _payload_hash({k: v for k, v in payload.items()})
    return payload


def certificate_from_json(doc, system) -> HorseshoeCertificate:
    if doc.get("schema") != SCHEMA_CERT:
        raise SchemaError("not a horseshoe certificate document")
    body = {k: v for k, v in doc.items() if k != "sha256"}
    if doc.get("sha256") != _payload_hash(body):
        raise SchemaError("certificate payload hash mismatch")
    delta = parse_frac(doc["delta"])
    epsilon = parse_frac(doc["epsilon"])
    loops = tuple(validate([point_from_json(p, system) for p in lp], delta,
                           system, kind="loop")
                  for lp in doc["loops"])
    witnesses = tuple(SeparationWitness(w["a"], w["b"], w["index"],
                                        parse_frac(w["distance"]))
                      for w in doc["witnesses"])
    fam = LoopFamily(system, point_from_json(doc["base"], system), loops,
                     delta, epsilon, witnesses)
    from .shadow_search import ShadowWitness

    coded = {}
    for entry in doc["coded"]:
        word = tuple(entry["word"])
        span = (0, len(word) * loops[0].step_count)
        coded[word] = ShadowWitness(point_from_json(entry["shadow"], system),
                                    epsilon, span)
    return HorseshoeCertificate(fam, doc["word_length_max"], coded,
                                doc["entropy"]["log_arg"],
                                doc["entropy"]["divisor"])


def verify_certificate(doc, system) -> dict:
    """Re-check every stored invariant from the document and the system
    alone: loop validity, separation witnesses, the tracing clause for all
    coded words, the semiconjugacy relation and the separation counts."""
    from .horseshoe import verify_semiconjugacy

    cert = certificate_from_json(doc, system)
    checks = {}
    details: dict = {}
    checks["family"] = cert.family.reverify()
    bad_words = []
    from .shadow_search import shadows

    for word, witness in sorted(cert.coded.items()):
        po = cert.word_orbit(word)
        if shadows(cert.family.system, witness.shadow_point, po,
                   cert.family.epsilon) is None:
            bad_words.append(list(word))
    checks["tracing"] = not bad_words
    if bad_words:
        details["tracing_failures"] = bad_words
    checks["semiconjugacy"] = verify_semiconjugacy(cert).ok
    lengths = sorted({len(w) for w in cert.coded})
    counts_ok = True
    for length in lengths:
        expected = cert.family.k ** length
        got = cert.separated_pair_count(length)
        if got != expected:
            counts_ok = False
    checks["separated_counts"] = counts_ok
    checks["entropy_bound"] = (cert.entropy_log_arg == cert.family.k
                               and cert.entropy_divisor == cert.family.n)
    return {"ok": all(checks.values()), "checks": checks, "details": details}


def dump(path: str, doc: dict) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
