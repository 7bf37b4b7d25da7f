"""Canonical JSON for every artifact the toolkit reads or writes.

One float, one spelling: floats are printed with 17 significant digits
(enough to round-trip a double exactly), keys are emitted sorted, and
exact rationals travel as "p/q" strings so nothing is lost to binary
conversion.  Two equal objects therefore serialize to byte-identical
text, which is what makes digests and replay comparisons meaningful.
"""

import hashlib
import json
import math
from fractions import Fraction

import numpy as np

from .crnorm import MatrixSequence
from .multiindex import Smoothness
from .property_o import PropertyOWitness
from .sequence import ConditionReport, LacunaryPlan
from .trigpoly import TrigPoly


def _float_repr(x):
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite float has no canonical JSON form")
    s = "%.17g" % x
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _emit(o, out):
    if o is None:
        out.append("null")
    elif o is True:
        out.append("true")
    elif o is False:
        out.append("false")
    elif isinstance(o, (int, np.integer)):
        out.append(str(int(o)))
    elif isinstance(o, (float, np.floating)):
        out.append(_float_repr(float(o)))
    elif isinstance(o, str):
        out.append(json.dumps(o))
    elif isinstance(o, (list, tuple)):
        out.append("[")
        for i, v in enumerate(o):
            if i:
                out.append(",")
            _emit(v, out)
        out.append("]")
    elif isinstance(o, dict):
        out.append("{")
        for i, k in enumerate(sorted(o)):
            if not isinstance(k, str):
                raise TypeError("canonical JSON keys must be strings")
            if i:
                out.append(",")
            out.append(json.dumps(k))
            out.append(":")
            _emit(o[k], out)
        out.append("}")
    else:
        raise TypeError("no canonical JSON form for %r" % type(o))


def canonical_dumps(obj):
    """Serialize to canonical JSON text (sorted keys, %.17g floats)."""
    out = []
    _emit(to_jsonable(obj), out)
    return "".join(out)


def to_jsonable(obj):
    """Recursively rewrite into plain JSON-compatible values: Fractions
    to "p/q" strings, complex to {re, im}, arrays to nested lists."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (list, tuple, frozenset, set)):
        vals = list(obj)
        if isinstance(obj, (frozenset, set)):
            vals = sorted(vals)
        return [to_jsonable(v) for v in vals]
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    raise TypeError("no JSON form for %r" % type(obj))


def _frac(s):
    return Fraction(s)


def _cplx(d):
    return complex(d["re"], d["im"])


# ----------------------------------------------------------------------
# typed codecs


def smoothness_to_json(s):
    return {"dim": s.dim, "indices": [list(g) for g in sorted(s.indices)]}


def smoothness_from_json(d):
    return Smoothness.from_indices(tuple(g) for g in d["indices"])


def witness_to_json(w):
    return {
        "alpha": list(w.alpha),
        "beta": list(w.beta),
        "c": [str(v) for v in w.c],
        "t_star": str(w.t_star),
    }


def witness_from_json(d):
    return PropertyOWitness(
        alpha=tuple(d["alpha"]),
        beta=tuple(d["beta"]),
        c=tuple(_frac(v) for v in d["c"]),
        t_star=_frac(d["t_star"]),
    )


def condition_report_to_json(r):
    return {
        "cond_i": r.cond_i,
        "ell_hat": r.ell_hat,
        "ell_drift": r.ell_drift,
        "sum_iii": r.sum_iii,
        "sum_iv": r.sum_iv,
        "bound_iii_met": r.bound_iii_met,
        "bound_iv_met": r.bound_iv_met,
        "iv_evaluated": list(r.iv_evaluated),
        "iv_skipped": list(r.iv_skipped),
        "cap": r.cap,
    }


def condition_report_from_json(d):
    return ConditionReport(
        cond_i=d["cond_i"],
        ell_hat=d["ell_hat"],
        ell_drift=d["ell_drift"],
        sum_iii=d["sum_iii"],
        sum_iv=d["sum_iv"],
        bound_iii_met=d["bound_iii_met"],
        bound_iv_met=d["bound_iv_met"],
        iv_evaluated=list(d["iv_evaluated"]),
        iv_skipped=list(d["iv_skipped"]),
        cap=d["cap"],
    )


def plan_to_json(plan):
    return {
        "smoothness": smoothness_to_json(plan.smoothness),
        "witness": witness_to_json(plan.witness),
        "K": plan.K,
        "t0": str(plan.t0),
        "q": str(plan.q),
        "ts": [str(t) for t in plan.ts],
        "sequence": [list(n) for n in plan.sequence],
        "radii": list(plan.radii),
        "tau": to_jsonable(plan.tau),
        "ell_exact": str(plan.ell_exact),
        "ell_hat": plan.ell_hat,
        "ell_drift": plan.ell_drift,
        "rho_hat": plan.rho_hat,
        "report": None if plan.report is None
        else condition_report_to_json(plan.report),
    }


def plan_from_json(d):
    return LacunaryPlan(
        smoothness=smoothness_from_json(d["smoothness"]),
        witness=witness_from_json(d["witness"]),
        K=d["K"],
        t0=_frac(d["t0"]),
        q=_frac(d["q"]),
        ts=[_frac(t) for t in d["ts"]],
        sequence=[tuple(n) for n in d["sequence"]],
        radii=list(d["radii"]),
        tau=_cplx(d["tau"]),
        ell_exact=_frac(d["ell_exact"]),
        ell_hat=d["ell_hat"],
        ell_drift=d["ell_drift"],
        rho_hat=d["rho_hat"],
        report=None if d.get("report") is None
        else condition_report_from_json(d["report"]),
    )


def poly_to_json(f):
    entries = []
    for n in sorted(f.coeffs):
        v = f.coeffs[n]
        if isinstance(v, np.ndarray):
            val = [[to_jsonable(complex(x)) for x in row] for row in v]
        else:
            val = to_jsonable(complex(v))
        entries.append({"n": list(n), "value": val})
    return {
        "dim": f.dim,
        "mdim": f.mdim if f.is_matrix_valued() else None,
        "coeffs": entries,
    }


def poly_from_json(d):
    coeffs = {}
    for e in d["coeffs"]:
        n = tuple(e["n"])
        v = e["value"]
        if d.get("mdim"):
            coeffs[n] = np.array(
                [[_cplx(x) for x in row] for row in v], dtype=complex)
        else:
            coeffs[n] = _cplx(v)
    return TrigPoly(coeffs, dim=d["dim"])


def matrixseq_to_json(ms):
    mats = [[[to_jsonable(complex(x)) for x in row] for row in m]
            for m in ms.matrices]
    return {"mdim": ms.mdim, "matrices": mats}


def matrixseq_from_json(d):
    mats = [np.array([[_cplx(x) for x in row] for row in m], dtype=complex)
            for m in d["matrices"]]
    return MatrixSequence(mats)


def plan_digest(plan):
    """Identity of a plan: hash of the inputs plus the sequence they
    produced.  Derived floats stay out so the digest is exact."""
    payload = {
        "smoothness": smoothness_to_json(plan.smoothness),
        "witness": witness_to_json(plan.witness),
        "K": plan.K,
        "t0": str(plan.t0),
        "q": str(plan.q),
        "sequence": [list(n) for n in plan.sequence],
    }
    return hashlib.sha256(canonical_dumps(payload).encode()).hexdigest()
