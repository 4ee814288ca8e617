"""JSON Schemas (draft 2020-12) for run records and per-command results."""

_frac = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_cell = {"type": "string", "pattern": r"^\d+:\d+$"}
_enclosure = {
    "type": "object",
    "required": ["lo", "hi"],
    "properties": {"lo": _frac, "hi": _frac},
    "additionalProperties": False,
}
_verdict = {"enum": ["proved", "refuted", "undecided"]}

_claim = {
    "type": "object",
    "required": ["claim", "statement", "verdict", "precision", "method"],
    "properties": {
        "claim": {"type": "string"},
        "statement": {"type": "string"},
        "verdict": _verdict,
        "precision": {"type": "integer", "minimum": 0},
        "method": {"type": "string"},
        "lhs": _enclosure,
        "rhs": _enclosure,
        "width": _frac,
        "note": {"type": "string"},
    },
    "additionalProperties": False,
}

CERTIFICATE = {
    "type": "object",
    "required": ["claim_set", "n", "verdict", "hypothesis_met", "precision", "claims"],
    "properties": {
        "claim_set": {"enum": ["fact22", "final_chain"]},
        "n": {"type": "integer", "minimum": 1},
        "verdict": _verdict,
        "hypothesis_met": {"type": "boolean"},
        "precision": {"type": "integer", "minimum": 0},
        "claims": {"type": "array", "items": _claim},
        "note": {"type": "string"},
        "extras": {"type": "object"},
    },
}

ESTIMATE = {
    "type": "object",
    "required": ["experiment", "config", "successes", "trials", "estimate", "stderr", "p_clamped"],
    "properties": {
        "experiment": {"enum": ["cover", "disjoint_split", "spread_lemma"]},
        "config": {
            "type": "object",
            "required": ["p", "trials", "seed", "generator"],
            "properties": {
                "p": _frac,
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
                "generator": {"type": "string"},
            },
        },
        "successes": {"type": "integer", "minimum": 0},
        "trials": {"type": "integer", "minimum": 1},
        "estimate": _frac,
        "stderr": _enclosure,
        "p_clamped": {"type": "boolean"},
        "bound": {
            "type": "object",
            "required": ["enclosure", "vacuous", "note"],
            "properties": {"enclosure": {"oneOf": [_enclosure, {"type": "null"}]}, "vacuous": {"type": "boolean"}},
        },
        "bound_vacuous": {"type": "boolean"},
        "consistent": {"type": ["boolean", "null"]},
    },
}

DECOMPOSITION = {
    "type": "object",
    "required": ["params", "input_size", "branches", "remainder_size", "stop_reason", "basis_intersecting"],
    "properties": {
        "params": {
            "type": "object",
            "required": ["n", "r", "q_cap", "q_floor"],
            "properties": {"r": _frac, "q_cap": _enclosure, "q_floor": {"type": "integer"}},
        },
        "input_size": {"type": "integer", "minimum": 0},
        "input_intersecting": {"type": "boolean"},
        "selection_rule": {"type": "string"},
        "branches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["basis", "size", "restriction_spread"],
                "properties": {
                    "basis": {"type": "array", "items": _cell},
                    "size": {"type": "integer", "minimum": 1},
                    "restriction_spread": {"type": "boolean"},
                },
            },
        },
        "remainder_size": {"type": "integer", "minimum": 0},
        "stop_reason": {"enum": ["exhausted", "oversize_witness"]},
        "stop_witness": {"oneOf": [{"type": "null"}, {"type": "array", "items": _cell}]},
        "basis_intersecting": {"type": "boolean"},
    },
}

CASCADE = {
    "type": "object",
    "required": ["q_int", "detection_rule", "layers", "residue_size", "classification"],
    "properties": {
        "q_int": {"type": "integer", "minimum": 1},
        "detection_rule": {"type": "string"},
        "layers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "size", "furedi_bound"],
                "properties": {
                    "i": {"type": "integer", "minimum": 3},
                    "size": {"type": "integer", "minimum": 0},
                    "furedi_bound": {"type": "integer"},
                },
            },
        },
        "residue_size": {"type": "integer", "minimum": 0},
        "classification": {
            "type": "object",
            "required": ["shape", "cells"],
            "properties": {"shape": {"enum": ["star", "triangle", "other"]}, "cells": {"type": "array", "items": _cell}},
        },
        "residue": {"type": "string"},
    },
}

DIVERSITY = {
    "type": "object",
    "required": ["n", "size", "gamma", "argmin_cell", "minimizing_cells", "intersecting"],
    "properties": {
        "gamma": {"type": "integer", "minimum": 0},
        "argmin_cell": _cell,
        "minimizing_cells": {"type": "array", "items": _cell, "minItems": 1},
        "intersecting": {"type": "boolean"},
    },
}

COMPRESS = {
    "type": "object",
    "required": ["n", "s", "input_size", "output_size", "family"],
    "properties": {"family": {"type": "string"}},
}

SEARCH = {
    "type": "object",
    "oneOf": [
        {
            "required": ["mode", "best_gamma", "family_size", "iterations", "family"],
            "properties": {"mode": {"enum": ["exact", "heuristic"]}, "best_gamma": {"type": "integer", "minimum": 0}},
        },
        {"required": ["n", "gamma", "expected_gamma", "minimizing_cells", "ok"]},
    ],
}

GEN = {
    "type": "object",
    "required": ["construction", "n", "size", "family"],
    "properties": {"family": {"type": "string", "pattern": r"^n=\d+\n"}},
}

VERIFY_BOUNDS = {
    "type": "object",
    "required": ["verdict", "reports"],
    "properties": {"verdict": _verdict, "reports": {"type": "array", "items": CERTIFICATE}},
}

RESULTS = {
    "diversity": DIVERSITY,
    "decompose": DECOMPOSITION,
    "compress": COMPRESS,
    "cascade": CASCADE,
    "verify-bounds": VERIFY_BOUNDS,
    "montecarlo": ESTIMATE,
    "search": SEARCH,
    "gen": GEN,
}

RUN_RECORD = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["tool", "version", "command", "config", "seeds", "wall_time_s", "exit_code", "result"],
    "properties": {
        "tool": {"const": "permdiv"},
        "version": {"type": "string"},
        "command": {"enum": sorted(RESULTS)},
        "config": {"type": "object", "required": ["format", "budget", "workers", "output"]},
        "seeds": {"type": "array", "items": {"type": "integer"}},
        "wall_time_s": {"type": "number", "minimum": 0},
        "exit_code": {"enum": [0, 2, 3, 4, 5]},
        "result": {"type": ["object", "null"]},
        "error": {"type": "string"},
    },
    "additionalProperties": False,
}


def schema_for(command: str) -> dict:
    """Run-record schema with the result slot narrowed to ``command``."""
    s = dict(RUN_RECORD)
    s["properties"] = dict(RUN_RECORD["properties"])
    s["properties"]["result"] = {"oneOf": [RESULTS[command], {"type": "null"}]}
    return s
