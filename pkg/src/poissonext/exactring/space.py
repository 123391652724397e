from __future__ import annotations

import re

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class StructuralError(ValueError):
    """Operands live in incompatible variable spaces, or a name is unknown."""


class VariableSpace:
    """Ordered, named polynomial variables with integer gradings attached.

    The ``total`` grading (every weight 1) is always present.
    """

    __slots__ = ("names", "gradings", "_index", "_hash")

    def __init__(self, names, gradings=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError("variable names must be unique")
        for name in names:
            if not _IDENT.match(name):
                raise StructuralError(f"bad variable identifier {name!r}")
        grads = {"total": (1,) * len(names)}
        for gname, weights in (gradings or {}).items():
            if isinstance(weights, dict):
                missing = set(names) - set(weights)
                if missing:
                    raise StructuralError(f"grading {gname!r} has no weight for {sorted(missing)}")
                weights = tuple(int(weights[n]) for n in names)
            else:
                weights = tuple(int(w) for w in weights)
            if len(weights) != len(names):
                raise StructuralError(f"grading {gname!r} must weight every variable")
            grads[gname] = weights
        self.names = names
        self.gradings = grads
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((names, tuple(sorted(grads.items()))))

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VariableSpace):
            return NotImplemented
        return self.names == other.names and self.gradings == other.gradings

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"VariableSpace({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def weights(self, grading: str):
        try:
            return self.gradings[grading]
        except KeyError:
            raise StructuralError(f"unknown grading {grading!r}") from None

    def degree(self, exps, grading: str = "total") -> int:
        return sum(e * w for e, w in zip(exps, self.weights(grading)))

    def var(self, name: str):
        from .polynomial import Polynomial

        return Polynomial.variable(self, name)

    def gens(self):
        from .polynomial import Polynomial

        return [Polynomial.variable(self, n) for n in self.names]

    def with_gradings(self, **gradings) -> "VariableSpace":
        merged = {k: v for k, v in self.gradings.items() if k != "total"}
        merged.update(gradings)
        return VariableSpace(self.names, merged)
