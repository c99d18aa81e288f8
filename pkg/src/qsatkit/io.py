"""Instance and state file formats (JSON).

Instance schema::

    {
      "format": "qsat-instance-v1",
      "k": 3, "n": 5, "mode": "float" | "exact",
      "amplitude_convention": "first clause variable is the most significant amplitude bit",
      "clauses": [[m1, ..., mk], ...],          # variable indices, clause order fixed
      "projectors": [
          {"re": [...], "im": [...]},           # float mode: 2^k doubles each
          {"re": [[num, den], ...], "im": [[num, den], ...]}   # exact mode
      ]
    }

Float amplitudes round-trip at full double precision; exact amplitudes
round-trip bit-exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .errors import InvalidParametersError
from .fields import QI
from .graph import FactorGraph
from .instance import Instance, ProductState, Projector

CONVENTION = "first clause variable is the most significant amplitude bit"


def instance_to_dict(inst):
    g = inst.graph
    projectors = []
    for p in inst.projectors:
        if inst.mode == "exact":
            re = [[a.real.numerator, a.real.denominator] for a in p.amplitudes]
            im = [[a.imag.numerator, a.imag.denominator] for a in p.amplitudes]
        else:
            re = [float(x) for x in p.amplitudes.real]
            im = [float(x) for x in p.amplitudes.imag]
        projectors.append({"re": re, "im": im})
    return {
        "format": "qsat-instance-v1",
        "k": g.k,
        "n": g.n_vars,
        "mode": inst.mode,
        "amplitude_convention": CONVENTION,
        "clauses": [list(cl) for cl in g.clauses],
        "projectors": projectors,
    }


def instance_from_dict(doc):
    if doc.get("format") != "qsat-instance-v1":
        raise InvalidParametersError("not a qsat-instance-v1 document")
    k = int(doc["k"])
    n = int(doc["n"])
    mode = doc["mode"]
    clauses = tuple(tuple(int(v) for v in cl) for cl in doc["clauses"])
    g = FactorGraph(k, n, clauses)
    projectors = []
    for entry in doc["projectors"]:
        re, im = entry["re"], entry["im"]
        if mode == "exact":
            amps = tuple(QI.from_fractions(Fraction(a, b), Fraction(c, d))
                         for (a, b), (c, d) in zip(re, im))
            projectors.append(Projector(k, amps, exact=True))
        else:
            projectors.append(Projector(k, np.array(re) + 1j * np.array(im)))
    return Instance(g, tuple(projectors), mode)


def write_instance(inst, path):
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=1)
        fh.write("\n")


def read_instance(path):
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def state_to_dict(psi, residuals=None):
    doc = {
        "format": "qsat-state-v1",
        "qubits": [[q[0].real, q[0].imag, q[1].real, q[1].imag]
                   for q in psi.qubits],
    }
    if residuals is not None:
        doc["residuals"] = list(map(float, residuals))
        doc["max_residual"] = max(map(float, residuals), default=0.0)
    return doc


def write_state(psi, path, residuals=None):
    with open(path, "w") as fh:
        json.dump(state_to_dict(psi, residuals), fh, indent=1)
        fh.write("\n")


def read_state(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "qsat-state-v1":
        raise InvalidParametersError("not a qsat-state-v1 document")
    qubits = np.array([[complex(a, b), complex(c, d)]
                       for a, b, c, d in doc["qubits"]])
    return ProductState(qubits)
