"""Independent oracles shared by the unit and acceptance tests.

chain_map_data computes the space of chain maps and its null-homotopic
subspace straight from the commuting-square constraints, using nothing but
hom_space bases and one kernel computation — deliberately bypassing
inner_hom so the two can be compared.
"""

from dataclasses import dataclass
from random import Random

import numpy as np

from roofext.algebra import ModuleHom, coordinates_in_hom_basis, hom_space
from roofext.complexes import ChainMap, Complex
from roofext.linalg import Mat, PrimeField, kernel_basis, rank, solve


@dataclass
class ChainMapData:
    source: Complex
    target: Complex
    slot_bases: dict[int, list]
    offsets: dict[int, int]
    total: int
    cocycles: Mat        # coefficient vectors spanning the chain maps
    boundaries: Mat      # coefficient vectors spanned by dh + hd

    @property
    def maps_dim(self) -> int:
        return self.cocycles.ncols

    @property
    def null_homotopic_dim(self) -> int:
        return rank(self.boundaries)

    @property
    def classes_dim(self) -> int:
        return self.maps_dim - self.null_homotopic_dim

    def materialize(self, coeffs: Mat) -> ChainMap:
        """Chain map from a coefficient column in the slot bases."""
        comps = {}
        for i, basis in self.slot_bases.items():
            if not basis:
                continue
            acc = Mat.zeros(self.source.algebra.field,
                            self.target.obj(i).dim, self.source.obj(i).dim)
            for t, b in enumerate(basis):
                c = coeffs.entry(self.offsets[i] + t, 0)
                if c:
                    acc = acc + b.matrix.scale(c)
            if not acc.is_zero():
                comps[i] = ModuleHom(self.source.obj(i), self.target.obj(i),
                                     acc, check=False)
        return ChainMap(self.source, self.target, comps, check=True)

    def random_chain_map(self, rng: Random) -> tuple[ChainMap, Mat]:
        field = self.source.algebra.field
        if self.cocycles.ncols == 0:
            coeffs = Mat.zeros(field, self.total, 1)
        else:
            if isinstance(field, PrimeField):
                w = [[rng.randrange(field.p)] for _ in range(self.cocycles.ncols)]
            else:
                w = [[rng.randint(-2, 2)] for _ in range(self.cocycles.ncols)]
            coeffs = self.cocycles @ Mat(field, w)
        return self.materialize(coeffs), coeffs

    def is_null_homotopic(self, coeffs: Mat) -> bool:
        return solve(self.boundaries, coeffs) is not None


def chain_map_data(x: Complex, y: Complex) -> ChainMapData:
    field = x.algebra.field
    lo = min(x.lo, y.lo)
    hi = max(x.hi, y.hi)
    degs = list(range(lo, hi + 1))
    slot_bases = {i: hom_space(x.obj(i), y.obj(i)) for i in degs}
    offsets, total = {}, 0
    for i in degs:
        offsets[i] = total
        total += len(slot_bases[i])

    rows = []
    for i in degs[:-1]:
        r = y.obj(i + 1).dim * x.obj(i).dim
        if r == 0:
            continue
        block = field.zeros((r, total))
        d_y = y.diff(i).matrix
        d_x = x.diff(i).matrix
        for t, b in enumerate(slot_bases[i]):
            block[:, offsets[i] + t] = np.asarray((d_y @ b.matrix).a).reshape(-1)
        for t, b in enumerate(slot_bases[i + 1]):
            col = np.asarray((b.matrix @ d_x).a).reshape(-1)
            block[:, offsets[i + 1] + t] = block[:, offsets[i + 1] + t] - col
        rows.append(block)
    if rows and total:
        cocycles = kernel_basis(Mat(field, np.vstack(rows)))
    else:
        cocycles = Mat.identity(field, total)

    cols = []
    for i in degs:
        if i - 1 < lo:
            continue
        for b in hom_space(x.obj(i), y.obj(i - 1)):
            vec = field.zeros((total, 1))
            up = y.diff(i - 1).matrix @ b.matrix       # slot i of dh
            if slot_bases[i] and not up.is_zero():
                c = coordinates_in_hom_basis(slot_bases[i], up)
                vec[offsets[i]: offsets[i] + len(slot_bases[i])] = vec[
                    offsets[i]: offsets[i] + len(slot_bases[i])] + c.a
            down = b.matrix @ x.diff(i - 1).matrix     # slot i-1 of hd
            if slot_bases[i - 1] and not down.is_zero():
                c = coordinates_in_hom_basis(slot_bases[i - 1], down)
                vec[offsets[i - 1]: offsets[i - 1] + len(slot_bases[i - 1])] = vec[
                    offsets[i - 1]: offsets[i - 1] + len(slot_bases[i - 1])] + c.a
            cols.append(vec)
    boundaries = Mat(field, np.hstack(cols)) if cols else Mat.zeros(field, total, 0)
    return ChainMapData(x, y, slot_bases, offsets, total, cocycles, boundaries)
