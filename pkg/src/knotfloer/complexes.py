"""Bigraded chain complexes over GF(2)[U, V] and maps between them.

A complex is a finite list of generators carrying two integer gradings
(grw, grz) together with a differential whose entries live in the
two-variable ring. The structural rules enforced by `validate`:

* d^2 = 0;
* homogeneity: a term U^a V^b y of dx satisfies
  grw(y) = grw(x) - 1 + 2a and grz(y) = grz(x) - 1 + 2b
  (the differential drops both gradings by one; U and V carry
  bidegrees (-2, 0) and (0, -2));
* grw - grz is even for every generator, so the Alexander grading
  A = (grw - grz) / 2 is an integer.

Homogeneity makes the differential single-monomial per generator pair;
the polynomial-valued interface is still used so that violations can be
reported term by term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import ValidationError
from .rings import (
    UV_ONE,
    UV_ZERO,
    UVPoly,
    uv_add,
    uv_mul,
    uv_mul_hat,
    uv_str,
    uv_swap,
)


@dataclass(frozen=True)
class Generator:
    name: str
    grw: int
    grz: int

    @property
    def alexander(self) -> int:
        return (self.grw - self.grz) // 2

    @property
    def delta(self):
        return (self.grw + self.grz) / 2


DiffMap = Dict[str, Dict[str, UVPoly]]


class BigradedComplex:
    """Finitely generated free complex over GF(2)[U, V].

    Immutable after construction; `validate` returns a list of violation
    strings (empty when the complex is well formed) and `require_valid`
    raises on the first dirty input.
    """

    def __init__(self, gens: Sequence[Generator], diff: Mapping[str, Mapping[str, UVPoly]]):
        self.gens: Tuple[Generator, ...] = tuple(gens)
        names = [g.name for g in self.gens]
        if len(set(names)) != len(names):
            seen = set()
            dup = next(n for n in names if n in seen or seen.add(n))
            raise ValidationError(f"duplicate generator id {dup!r}")
        self.index: Dict[str, int] = {g.name: i for i, g in enumerate(self.gens)}
        clean: DiffMap = {}
        for src, row in diff.items():
            if src not in self.index:
                raise ValidationError(f"differential source {src!r} is not a generator")
            entries = {}
            for tgt, poly in row.items():
                if tgt not in self.index:
                    raise ValidationError(f"differential target {tgt!r} is not a generator")
                poly = frozenset(poly)
                if poly:
                    entries[tgt] = poly
            if entries:
                clean[src] = entries
        self.diff: DiffMap = clean

    # -- basic access --------------------------------------------------

    def __len__(self) -> int:
        return len(self.gens)

    def gen(self, name: str) -> Generator:
        return self.gens[self.index[name]]

    def diff_entry(self, src: str, tgt: str) -> UVPoly:
        return self.diff.get(src, {}).get(tgt, UV_ZERO)

    def diff_row(self, src: str) -> Dict[str, UVPoly]:
        return self.diff.get(src, {})

    def alexander(self, name: str) -> int:
        return self.gen(name).alexander

    def max_alexander(self) -> int:
        return max(g.alexander for g in self.gens)

    def min_alexander(self) -> int:
        return min(g.alexander for g in self.gens)

    # -- validation ----------------------------------------------------

    def validate(self) -> List[str]:
        out: List[str] = []
        for g in self.gens:
            if (g.grw - g.grz) % 2:
                out.append(
                    f"generator {g.name!r}: grw-grz = {g.grw - g.grz} is odd, "
                    "Alexander grading is not an integer"
                )
        for src, row in self.diff.items():
            gs = self.gen(src)
            for tgt, poly in row.items():
                gt = self.gen(tgt)
                for a, b in sorted(poly):
                    if gt.grw != gs.grw - 1 + 2 * a or gt.grz != gs.grz - 1 + 2 * b:
                        out.append(
                            f"inhomogeneous term U^{a}V^{b}*{tgt} in d({src}): "
                            f"target grading ({gt.grw},{gt.grz}), "
                            f"needs ({gs.grw - 1 + 2 * a},{gs.grz - 1 + 2 * b})"
                        )
        # d^2 = 0 over the full two-variable ring.
        for src in self.diff:
            acc: Dict[str, UVPoly] = {}
            for mid, poly in self.diff[src].items():
                for tgt, poly2 in self.diff_row(mid).items():
                    prod = uv_mul(poly, poly2)
                    cur = uv_add(acc.get(tgt, UV_ZERO), prod)
                    if cur:
                        acc[tgt] = cur
                    else:
                        acc.pop(tgt, None)
            for tgt, poly in sorted(acc.items()):
                out.append(f"d^2({src}) has term ({uv_str(poly)})*{tgt}")
        return out

    def require_valid(self) -> "BigradedComplex":
        violations = self.validate()
        if violations:
            raise ValidationError(violations)
        return self

    # -- constructions -------------------------------------------------

    def tensor(self, other: "BigradedComplex") -> "BigradedComplex":
        """Tensor product over GF(2)[U, V] with the Leibniz differential.

        Generators are named "left|right"; bigradings add.
        """
        gens = []
        for g in self.gens:
            for h in other.gens:
                gens.append(Generator(f"{g.name}|{h.name}", g.grw + h.grw, g.grz + h.grz))
        diff: DiffMap = {}
        for g in self.gens:
            grow = self.diff_row(g.name)
            for h in other.gens:
                row: Dict[str, UVPoly] = {}
                for tgt, poly in grow.items():
                    row[f"{tgt}|{h.name}"] = poly
                for tgt, poly in other.diff_row(h.name).items():
                    key = f"{g.name}|{tgt}"
                    row[key] = uv_add(row.get(key, UV_ZERO), poly)
                if row:
                    diff[f"{g.name}|{h.name}"] = row
        return BigradedComplex(gens, diff)

    def dual(self, suffix: str = "*") -> "BigradedComplex":
        """Dual complex: gradings negate, differential transposes.

        Computes the mirror: the complex of the mirror knot is the dual of
        the complex of the knot.
        """
        gens = [Generator(g.name + suffix, -g.grw, -g.grz) for g in self.gens]
        diff: DiffMap = {}
        for src, row in self.diff.items():
            for tgt, poly in row.items():
                diff.setdefault(tgt + suffix, {})[src + suffix] = poly
        return BigradedComplex(gens, diff)

    def relabel(self, mapping: Mapping[str, str]) -> "BigradedComplex":
        gens = [Generator(mapping.get(g.name, g.name), g.grw, g.grz) for g in self.gens]
        diff = {
            mapping.get(s, s): {mapping.get(t, t): p for t, p in row.items()}
            for s, row in self.diff.items()
        }
        return BigradedComplex(gens, diff)


def tensor_many(factors: Sequence[BigradedComplex]) -> BigradedComplex:
    if not factors:
        raise ValueError("empty tensor product")
    acc = factors[0]
    for f in factors[1:]:
        acc = acc.tensor(f)
    return acc


UNKNOT = BigradedComplex([Generator("o", 0, 0)], {})


# --- chain maps -------------------------------------------------------


def _infer_bidegree(source: BigradedComplex, target: BigradedComplex, entries: DiffMap):
    for src, row in entries.items():
        gs = source.gen(src)
        for tgt, poly in row.items():
            gt = target.gen(tgt)
            for a, b in poly:
                return (gt.grw - 2 * a - gs.grw, gt.grz - 2 * b - gs.grz)
    return None


class ChainMap:
    """GF(2)[U,V]-equivariant map of homogeneous bidegree.

    The bidegree is inferred from the first nonzero entry unless given;
    `verify_chain_map` checks homogeneity of every entry and df = fd.
    """

    skew = False

    def __init__(
        self,
        source: BigradedComplex,
        target: BigradedComplex,
        entries: Mapping[str, Mapping[str, UVPoly]],
        bidegree: Optional[Tuple[int, int]] = None,
    ):
        self.source = source
        self.target = target
        clean: DiffMap = {}
        for src, row in entries.items():
            keep = {t: frozenset(p) for t, p in row.items() if p}
            if keep:
                clean[src] = keep
        self.entries = clean
        if bidegree is None:
            bidegree = _infer_bidegree(source, target, clean)
        self.bidegree = bidegree

    def entry(self, src: str, tgt: str) -> UVPoly:
        return self.entries.get(src, {}).get(tgt, UV_ZERO)

    def row(self, src: str) -> Dict[str, UVPoly]:
        return self.entries.get(src, {})

    def is_zero(self) -> bool:
        return not self.entries

    def apply(self, element: Mapping[str, UVPoly]) -> Dict[str, UVPoly]:
        """Image of a module element given as {generator: coefficient}."""
        out: Dict[str, UVPoly] = {}
        for src, coeff in element.items():
            for tgt, poly in self.row(src).items():
                term = uv_mul(coeff, poly)
                cur = uv_add(out.get(tgt, UV_ZERO), term)
                if cur:
                    out[tgt] = cur
                else:
                    out.pop(tgt, None)
        return out


class SkewMap(ChainMap):
    """Conjugation-skew-equivariant endomorphism: f(U x) = V f(x).

    Entries are the images of the generators; the skew rule extends the
    map to the whole module. A valid skew map swaps grw and grz.
    """

    skew = True

    def __init__(self, complex_: BigradedComplex, entries, provenance: str = "user"):
        super().__init__(complex_, complex_, entries, bidegree=(0, 0))
        self.provenance = provenance

    def apply(self, element: Mapping[str, UVPoly]) -> Dict[str, UVPoly]:
        out: Dict[str, UVPoly] = {}
        for src, coeff in element.items():
            swapped = uv_swap(coeff)
            for tgt, poly in self.row(src).items():
                term = uv_mul(swapped, poly)
                cur = uv_add(out.get(tgt, UV_ZERO), term)
                if cur:
                    out[tgt] = cur
                else:
                    out.pop(tgt, None)
        return out


def identity_map(c: BigradedComplex) -> ChainMap:
    return ChainMap(c, c, {g.name: {g.name: UV_ONE} for g in c.gens}, bidegree=(0, 0))


def map_add(f: ChainMap, g: ChainMap) -> ChainMap:
    if f.skew != g.skew:
        raise ValueError("cannot add a skew map to an equivariant one")
    entries: DiffMap = {}
    for src in set(f.entries) | set(g.entries):
        row: Dict[str, UVPoly] = {}
        for tgt in set(f.row(src)) | set(g.row(src)):
            p = uv_add(f.entry(src, tgt), g.entry(src, tgt))
            if p:
                row[tgt] = p
        if row:
            entries[src] = row
    if f.skew:
        return SkewMap(f.source, entries)
    return ChainMap(f.source, f.target, entries, bidegree=f.bidegree)


def map_compose(outer: ChainMap, inner: ChainMap) -> ChainMap:
    """outer after inner. The skew rule twists inner coefficients when the
    outer map is skew; composing two skew maps yields an equivariant map."""
    entries: DiffMap = {}
    for src, row in inner.entries.items():
        acc: Dict[str, UVPoly] = {}
        for mid, p in row.items():
            carried = uv_swap(p) if outer.skew else p
            for tgt, q in outer.row(mid).items():
                term = uv_mul(carried, q)
                cur = uv_add(acc.get(tgt, UV_ZERO), term)
                if cur:
                    acc[tgt] = cur
                else:
                    acc.pop(tgt, None)
        if acc:
            entries[src] = acc
    if outer.skew != inner.skew:
        return SkewMap(inner.source, entries)
    dw = (outer.bidegree[0] if outer.bidegree else 0) + (inner.bidegree[0] if inner.bidegree else 0)
    dz = (outer.bidegree[1] if outer.bidegree else 0) + (inner.bidegree[1] if inner.bidegree else 0)
    return ChainMap(inner.source, outer.target, entries, bidegree=(dw, dz))


def tensor_map(f: ChainMap, g: ChainMap, source: BigradedComplex, target: BigradedComplex) -> ChainMap:
    """f (x) g on already-built tensor complexes (generator names "a|b")."""
    if f.skew != g.skew:
        raise ValueError("tensor factors must be both skew or both equivariant")
    entries: DiffMap = {}
    for s1, row1 in f.entries.items():
        for s2, row2 in g.entries.items():
            src = f"{s1}|{s2}"
            acc: Dict[str, UVPoly] = {}
            for t1, p1 in row1.items():
                for t2, p2 in row2.items():
                    tgt = f"{t1}|{t2}"
                    term = uv_mul(p1, p2)
                    cur = uv_add(acc.get(tgt, UV_ZERO), term)
                    if cur:
                        acc[tgt] = cur
                    else:
                        acc.pop(tgt, None)
            if acc:
                entries[src] = acc
    if f.skew:
        return SkewMap(source, entries)
    bd = None
    if f.bidegree and g.bidegree:
        bd = (f.bidegree[0] + g.bidegree[0], f.bidegree[1] + g.bidegree[1])
    return ChainMap(source, target, entries, bidegree=bd)


def verify_chain_map(f: ChainMap) -> Optional[str]:
    """None when f is a valid (skew) chain map, else the first violation."""
    # Homogeneity of every entry at the declared bidegree / grading swap.
    for src in sorted(f.entries):
        gs = f.source.gen(src)
        for tgt in sorted(f.entries[src]):
            gt = f.target.gen(tgt)
            for a, b in sorted(f.entry(src, tgt)):
                if f.skew:
                    ok = gt.grw - 2 * a == gs.grz and gt.grz - 2 * b == gs.grw
                    if not ok:
                        return (
                            f"skew map does not swap gradings on term "
                            f"U^{a}V^{b}*{tgt} of image of {src}"
                        )
                else:
                    if f.bidegree is None:
                        return "nonzero map with undetermined bidegree"
                    dw, dz = f.bidegree
                    if gt.grw - 2 * a != gs.grw + dw or gt.grz - 2 * b != gs.grz + dz:
                        return (
                            f"entry U^{a}V^{b}*{tgt} of image of {src} is not "
                            f"homogeneous of bidegree ({dw},{dz})"
                        )
    # Chain condition d f = f d, with the skew rule on coefficients of f d.
    for g in f.source.gens:
        src = g.name
        # d(f(src))
        left: Dict[str, UVPoly] = {}
        for mid, p in f.row(src).items():
            for tgt, q in f.target.diff_row(mid).items():
                term = uv_mul(p, q)
                cur = uv_add(left.get(tgt, UV_ZERO), term)
                if cur:
                    left[tgt] = cur
                else:
                    left.pop(tgt, None)
        # f(d(src))
        right: Dict[str, UVPoly] = {}
        for mid, p in f.source.diff_row(src).items():
            carried = uv_swap(p) if f.skew else p
            for tgt, q in f.row(mid).items():
                term = uv_mul(carried, q)
                cur = uv_add(right.get(tgt, UV_ZERO), term)
                if cur:
                    right[tgt] = cur
                else:
                    right.pop(tgt, None)
        if left != right:
            return f"d f != f d on generator {src!r}"
    return None


def require_chain_map(f: ChainMap) -> ChainMap:
    violation = verify_chain_map(f)
    if violation is not None:
        raise ValidationError(violation)
    return f


# --- basepoint endomorphisms ---------------------------------------------


def basepoint_maps(c: BigradedComplex) -> Tuple[ChainMap, ChainMap]:
    """The two basepoint endomorphisms as formal partial derivatives.

    The first differentiates the differential in U (a term U^a V^b y of dx
    contributes a * U^(a-1) V^b y, coefficient mod 2), the second in V.
    Their bidegrees are inferred, never hard-coded.
    """
    phi_entries: DiffMap = {}
    psi_entries: DiffMap = {}
    for src, row in c.diff.items():
        phi_row: Dict[str, UVPoly] = {}
        psi_row: Dict[str, UVPoly] = {}
        for tgt, poly in row.items():
            dphi = frozenset((a - 1, b) for a, b in poly if a % 2 == 1)
            dpsi = frozenset((a, b - 1) for a, b in poly if b % 2 == 1)
            if dphi:
                phi_row[tgt] = dphi
            if dpsi:
                psi_row[tgt] = dpsi
        if phi_row:
            phi_entries[src] = phi_row
        if psi_row:
            psi_entries[src] = psi_row
    phi = ChainMap(c, c, phi_entries)
    psi = ChainMap(c, c, psi_entries)
    if phi.entries:
        require_chain_map(phi)
    if psi.entries:
        require_chain_map(psi)
    return phi, psi


# --- quotient reductions ---------------------------------------------------


class HatComplex:
    """The GF(2)[U,V]/(UV) reduction of a bigraded complex.

    Same generators; differential entries keep only pure monomials
    (u = 0 or v = 0). Products are taken in the quotient ring.
    """

    def __init__(self, c: BigradedComplex):
        self.gens = c.gens
        self.index = c.index
        self.diff: DiffMap = {}
        for src, row in c.diff.items():
            keep = {}
            for tgt, poly in row.items():
                pure = frozenset((a, b) for a, b in poly if a == 0 or b == 0)
                if pure:
                    keep[tgt] = pure
            if keep:
                self.diff[src] = keep

    def gen(self, name: str):
        return self.gens[self.index[name]]

    def diff_row(self, src: str) -> Dict[str, UVPoly]:
        return self.diff.get(src, {})

    def d_squared_violations(self) -> List[str]:
        out = []
        for src in self.diff:
            acc: Dict[str, UVPoly] = {}
            for mid, poly in self.diff[src].items():
                for tgt, poly2 in self.diff_row(mid).items():
                    prod = uv_mul_hat(poly, poly2)
                    cur = uv_add(acc.get(tgt, UV_ZERO), prod)
                    if cur:
                        acc[tgt] = cur
                    else:
                        acc.pop(tgt, None)
            for tgt, poly in sorted(acc.items()):
                out.append(f"hat d^2({src}) has term ({uv_str(poly)})*{tgt}")
        return out


@dataclass
class GF2Complex:
    """Finite-dimensional GF(2) complex (the U=0, V=1 reduction)."""

    names: Tuple[str, ...]
    columns: Tuple[int, ...]  # columns[j] = bitmask of targets of generator j

    def d_squared_is_zero(self) -> bool:
        for col in self.columns:
            acc = 0
            rest = col
            while rest:
                low = rest & -rest
                acc ^= self.columns[low.bit_length() - 1]
                rest ^= low
            if acc:
                return False
        return True


def reduce_complex(c: BigradedComplex, mode: str):
    """Quotient reductions of the coefficient ring.

    mode "UV0" -> HatComplex over GF(2)[U,V]/(UV);
    mode "U0"  -> free GF(2)[V]-complex (a FUComplex graded by grz);
    mode "V0"  -> free GF(2)[U]-complex (graded by grw);
    mode "U0V1"-> finite GF(2) complex with V specialised to 1.
    """
    from .fu import FUComplex  # local import to avoid a cycle

    if mode == "UV0":
        return HatComplex(c)
    if mode in ("U0", "V0"):
        labels = tuple(g.name for g in c.gens)
        gradings = tuple((g.grz if mode == "U0" else g.grw) for g in c.gens)
        cols = []
        for g in c.gens:
            mask = 0
            for tgt, poly in c.diff_row(g.name).items():
                keep = any(
                    (a == 0 if mode == "U0" else b == 0) for a, b in poly
                )
                if keep:
                    mask |= 1 << c.index[tgt]
            cols.append(mask)
        return FUComplex(labels, gradings, tuple(cols))
    if mode == "U0V1":
        names = tuple(g.name for g in c.gens)
        cols = []
        for g in c.gens:
            mask = 0
            for tgt, poly in c.diff_row(g.name).items():
                parity = sum(1 for a, _b in poly if a == 0) % 2
                if parity:
                    mask |= 1 << c.index[tgt]
            cols.append(mask)
        return GF2Complex(names, tuple(cols))
    raise ValueError(f"unknown reduction mode {mode!r}")
