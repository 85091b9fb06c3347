"""Fibre products and connected sums over the residue field."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraError, LocalAlgebra, ideal_generated, is_gorenstein, quotient
from .linalg import matmul


@dataclass
class FibreProductWitness:
    T: LocalAlgebra
    embed_R: np.ndarray  # (dim T x dim R), columns are images of R's basis
    embed_S: np.ndarray

    @property
    def algebra(self):
        return self.T


@dataclass
class ConnectedSumWitness:
    Q: LocalAlgebra
    fibre: FibreProductWitness
    delta_R: np.ndarray
    delta_S: np.ndarray
    projection: np.ndarray  # fibre product -> Q
    map_R: np.ndarray  # R -> Q on underlying spaces (not unital on the socle)
    map_S: np.ndarray

    @property
    def algebra(self):
        return self.Q


def _fresh_names(taken, names):
    out = []
    used = set(taken)
    for n in names:
        new = n
        k = 2
        while new in used:
            new = f"{n}{k}"
            k += 1
        used.add(new)
        out.append(new)
    return out


def _rename(label: str, mapping: dict) -> str:
    if not mapping:
        return label
    pattern = re.compile(r"\b(" + "|".join(map(re.escape, mapping)) + r")\b")
    return pattern.sub(lambda m: mapping[m.group(1)], label)


def fibre_product(R: LocalAlgebra, S: LocalAlgebra) -> FibreProductWitness:
    if R.field != S.field:
        raise AlgebraError(f"field mismatch: {R.field} vs {S.field}")
    F = R.field
    a, b = R.dim - 1, S.dim - 1
    d = 1 + a + b
    table = F.zeros((d, d, d))
    table[0] = F.eye(d)
    table[:, 0, :] = F.eye(d)
    table[1 : 1 + a, 1 : 1 + a, 0] = R.table[1:, 1:, 0]
    table[1 : 1 + a, 1 : 1 + a, 1 : 1 + a] = R.table[1:, 1:, 1:]
    table[1 + a :, 1 + a :, 0] = S.table[1:, 1:, 0]
    table[1 + a :, 1 + a :, 1 + a :] = S.table[1:, 1:, 1:]

    names_S = _fresh_names(R.names, S.names)
    mapping = {old: new for old, new in zip(S.names, names_S) if old != new}
    labels = ["1"] + list(R.basis[1:]) + [_rename(lbl, mapping) for lbl in S.basis[1:]]
    seen = set()
    for i, lbl in enumerate(labels):
        # labels of derived algebras may still collide; disambiguate
        while lbl in seen:
            lbl = lbl + "'"
        seen.add(lbl)
        labels[i] = lbl

    emb_R = F.zeros((d, R.dim))
    emb_R[0, 0] = 1
    emb_R[1 : 1 + a, 1:] = F.eye(a)
    emb_S = F.zeros((d, S.dim))
    emb_S[0, 0] = 1
    emb_S[1 + a :, 1:] = F.eye(b)
    gens = np.concatenate(
        [matmul(R.gens, emb_R.T, F).reshape(-1, d), matmul(S.gens, emb_S.T, F).reshape(-1, d)], axis=0
    )
    T = LocalAlgebra(F, labels, table, names=tuple(R.names) + tuple(names_S), gens=gens)
    return FibreProductWitness(T, emb_R, emb_S)


def socle_generator(A: LocalAlgebra) -> np.ndarray:
    """Pivot-canonical generator of a one-dimensional socle."""
    if not is_gorenstein(A):
        raise AlgebraError(f"algebra is not Gorenstein (socle dimension {A.socle.dim})")
    return A.socle.vectors[0].copy()


def connected_sum(R: LocalAlgebra, S: LocalAlgebra) -> ConnectedSumWitness:
    for name, X in (("first", R), ("second", S)):
        if X.dim < 2:
            raise AlgebraError(f"{name} factor must have dimension >= 2")
        if not is_gorenstein(X):
            raise AlgebraError(f"{name} factor is not Gorenstein")
    fw = fibre_product(R, S)
    F = R.field
    dR, dS = socle_generator(R), socle_generator(S)
    delta = F.reduce(matmul(fw.embed_R, dR, F) - matmul(fw.embed_S, dS, F))
    J = ideal_generated(fw.T, [delta])
    Q, proj = quotient(fw.T, J, return_map=True)
    return ConnectedSumWitness(
        Q,
        fw,
        dR,
        dS,
        proj,
        matmul(proj, fw.embed_R, F),
        matmul(proj, fw.embed_S, F),
    )
