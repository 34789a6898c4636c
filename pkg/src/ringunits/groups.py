"""Integer-matrix groups, words, and the two torsion-free groups P and S.

Group elements are exact integer matrices.  Equality and hashing are
entrywise, so elements double as canonical dictionary keys for group-ring
supports; the canonical total order is lexicographic on the row-major
entry tuple.

P is the 3-dimensional crystallographic group generated by two affine
maps a, b and comes with its index-4 lattice bookkeeping: x = a^2,
y = b^2, z = (ab)^2 span a copy of Z^3, every element factors uniquely
as x^i y^j z^k c with c in {1, a, b, ab}, and the abelianization is
Z/4 + Z/4.  S is a virtually nilpotent group of unipotent-by-finite
3x3 matrices; its generator matrices do not keep a fixed last row, so
the affine last-row invariant is only enforced for P.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional


class GroupError(ValueError):
    """Structural error: bad dimension, non-unimodular matrix, or an element outside the group."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGeneratorError(ValueError):
    def __init__(self, name: str, group_name: str) -> None:
        super().__init__(f"unknown generator {name!r} in group {group_name}")
        self.name = name


class DecompositionError(GroupError):
    """The element does not lie in P (wrong point group or odd translation residue)."""


Rows = "tuple[tuple[int, ...], ...]"


def _mat_mul(a: Rows, b: Rows) -> Rows:
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )


def _minor(m: Rows, i: int, j: int) -> Rows:
    return tuple(row[:j] + row[j + 1 :] for k, row in enumerate(m) if k != i)


def _det(m: Rows) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            total += (-1) ** j * m[0][j] * _det(_minor(m, 0, j))
    return total


def _mat_inv(m: Rows) -> Rows:
    n = len(m)
    d = _det(m)
    if d not in (1, -1):
        raise GroupError(f"matrix is not unimodular (det = {d})")
    if n == 1:
        return ((d,),)
    # adjugate transpose; 1/det == det for det = +-1
    return tuple(
        tuple(d * (-1) ** (i + j) * _det(_minor(m, j, i)) for j in range(n))
        for i in range(n)
    )


@dataclass(frozen=True)
class GroupElement:
    """Exact integer matrix; the matrix itself is the canonical key."""

    entries: Rows

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.dim != other.dim:
            raise GroupError("dimension mismatch")
        return GroupElement(_mat_mul(self.entries, other.entries))

    def inv(self) -> "GroupElement":
        return GroupElement(_mat_inv(self.entries))

    def __pow__(self, e: int) -> "GroupElement":
        base = self if e >= 0 else self.inv()
        e = abs(e)
        result = GroupElement.identity(self.dim)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __lt__(self, other: "GroupElement") -> bool:
        return self.entries < other.entries

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.dim)

    @staticmethod
    def identity(dim: int) -> "GroupElement":
        return GroupElement(
            tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
        )

    @staticmethod
    def from_rows(rows) -> "GroupElement":
        t = tuple(tuple(int(v) for v in row) for row in rows)
        if any(len(row) != len(t) for row in t):
            raise GroupError("matrix must be square")
        return GroupElement(t)

    def to_json(self) -> dict:
        return {"dim": self.dim, "rows": [list(row) for row in self.entries]}

    @staticmethod
    def from_json(obj: dict) -> "GroupElement":
        g = GroupElement.from_rows(obj["rows"])
        if g.dim != obj["dim"]:
            raise GroupError("dim field does not match row count")
        return g

    def __repr__(self) -> str:
        return f"GroupElement({self.entries!r})"


@dataclass(frozen=True)
class Word:
    """Ordered product of generator powers; exponents are nonzero."""

    factors: tuple  # of (name, exponent)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in self.factors
        )

    def inverse(self) -> "Word":
        return Word(tuple((name, -e) for name, e in reversed(self.factors)))

    def concat(self, other: "Word") -> "Word":
        return Word(self.factors + other.factors)

    def __mul__(self, other: "Word") -> "Word":
        return self.concat(other)


def parse_word(text: str, group: "AffineGroup") -> Word:
    """Parse ``1`` or ``name[^exp] * name[^exp] * ...`` against the group's tokens."""
    pos = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    skip_ws()
    if pos < n and text[pos] == "1":
        pos += 1
        skip_ws()
        if pos != n:
            raise WordSyntaxError("trailing input after identity word", pos)
        return Word(())

    factors = []
    while True:
        skip_ws()
        start = pos
        while pos < n and (text[pos].isalnum() or text[pos] == "_"):
            if text[pos].isdigit() and pos == start:
                break
            pos += 1
        name = text[start:pos]
        if not name:
            raise WordSyntaxError("expected generator name", pos)
        if name not in group.tokens:
            raise UnknownGeneratorError(name, group.name)
        exponent = 1
        skip_ws()
        if pos < n and text[pos] == "^":
            pos += 1
            skip_ws()
            estart = pos
            if pos < n and text[pos] in "+-":
                pos += 1
            while pos < n and text[pos].isdigit():
                pos += 1
            if pos == estart or text[estart:pos] in ("+", "-"):
                raise WordSyntaxError("expected integer exponent", pos)
            exponent = int(text[estart:pos])
        if exponent != 0:
            factors.append((name, exponent))
        skip_ws()
        if pos == n:
            break
        if text[pos] != "*":
            raise WordSyntaxError("expected '*' between factors", pos)
        pos += 1
    return Word(tuple(factors))


class AffineGroup:
    """A finitely generated group of exact integer matrices.

    ``generators`` are the defining matrices, ``derived`` names extra
    tokens given by words in the generators (x, y, z for P), and
    ``relators`` are words that must evaluate to the identity.
    Instances are treated as immutable.
    """

    def __init__(
        self,
        name: str,
        dim: int,
        generators: Mapping[str, GroupElement],
        relator_texts,
        derived_texts=None,
        affine: bool = True,
    ) -> None:
        self.name = name
        self.dim = dim
        self.generators = dict(generators)
        self.affine = affine
        for gname, g in self.generators.items():
            if g.dim != dim:
                raise GroupError(f"generator {gname} has dimension {g.dim} != {dim}")
            if affine and g.entries[-1] != tuple([0] * (dim - 1) + [1]):
                raise GroupError(f"generator {gname} is not an affine matrix")
        self.derived: dict = {}
        self._token_matrices = dict(self.generators)
        for dname, text in (derived_texts or {}).items():
            word = parse_word(text, self)
            self.derived[dname] = word
            self._token_matrices[dname] = eval_word(word, self)
        self.relators = tuple(parse_word(text, self) for text in relator_texts)

    @property
    def tokens(self):
        return self._token_matrices.keys()

    def token_matrix(self, name: str) -> GroupElement:
        try:
            return self._token_matrices[name]
        except KeyError:
            raise UnknownGeneratorError(name, self.name) from None

    def identity(self) -> GroupElement:
        return GroupElement.identity(self.dim)

    def element(self, text: str) -> GroupElement:
        return eval_word(parse_word(text, self), self)

    def __repr__(self) -> str:
        return f"AffineGroup({self.name!r}, dim={self.dim})"


def eval_word(word: Word, group: AffineGroup) -> GroupElement:
    result = group.identity()
    for name, e in word.factors:
        result = result * group.token_matrix(name) ** e
    return result


def apply_generator_map(mapping: Mapping[str, Word], word: Word) -> Word:
    """Substitute each generator by its image word; errors on unmapped names."""
    factors = []
    for name, e in word.factors:
        if name not in mapping:
            raise KeyError(f"generator {name!r} is not mapped")
        image = mapping[name] if e > 0 else mapping[name].inverse()
        factors.extend(image.factors * abs(e))
    return Word(tuple(factors))


def extend_generator_map(group: AffineGroup, mapping: Mapping[str, Word]) -> dict:
    """Extend a map on the generators to the derived tokens via their definitions."""
    out = dict(mapping)
    for dname, defn in group.derived.items():
        out[dname] = apply_generator_map(mapping, defn)
    return out


def check_relators(group: AffineGroup) -> bool:
    return all(eval_word(r, group).is_identity() for r in group.relators)


@lru_cache(maxsize=None)
def make_group_P() -> AffineGroup:
    """The torsion-free crystallographic group P acting on Z^3."""
    a = GroupElement.from_rows([[1, 0, 0, 1], [0, -1, 0, 1], [0, 0, -1, 0], [0, 0, 0, 1]])
    b = GroupElement.from_rows([[-1, 0, 0, 0], [0, 1, 0, 1], [0, 0, -1, 1], [0, 0, 0, 1]])
    return AffineGroup(
        "P",
        4,
        {"a": a, "b": b},
        relator_texts=["b^-1*a^2*b*a^2", "a^-1*b^2*a*b^2"],
        derived_texts={"x": "a^2", "y": "b^2", "z": "a*b*a*b"},
        affine=True,
    )


@lru_cache(maxsize=None)
def make_group_S() -> AffineGroup:
    """The virtually nilpotent group S in its faithful 3x3 representation.

    The squares x^2, y^2 generate a copy of the integral Heisenberg group;
    y mixes in a -1 on the last row, so the matrices are not affine.
    """
    x = GroupElement.from_rows([[-1, 1, 0], [0, -1, 0], [0, 0, 1]])
    y = GroupElement.from_rows([[1, 0, 0], [0, -1, 1], [0, 0, -1]])
    return AffineGroup(
        "S",
        3,
        {"x": x, "y": y},
        relator_texts=["x*y*x*y*x*y^-1*x*y^-1", "y*x*y*x*y*x^-1*y*x^-1"],
        affine=False,
    )


_P_COSETS = ("1", "a", "b", "ab")


@lru_cache(maxsize=None)
def _p_coset_data():
    P = make_group_P()
    reps = {
        "1": P.identity(),
        "a": P.token_matrix("a"),
        "b": P.token_matrix("b"),
        "ab": P.token_matrix("a") * P.token_matrix("b"),
    }
    by_linear = {}
    for cname, rep in reps.items():
        linear = tuple(row[:3] for row in rep.entries[:3])
        by_linear[linear] = (cname, rep)
    return reps, by_linear


@dataclass(frozen=True)
class PDecomposition:
    """g = x^i y^j z^k c with c one of the four coset representatives."""

    i: int
    j: int
    k: int
    coset: str

    def to_word(self) -> Word:
        factors = [
            (name, e)
            for name, e in (("x", self.i), ("y", self.j), ("z", self.k))
            if e != 0
        ]
        if self.coset in ("a", "b"):
            factors.append((self.coset, 1))
        elif self.coset == "ab":
            factors.extend([("a", 1), ("b", 1)])
        return Word(tuple(factors))


def decompose_P(g: GroupElement) -> PDecomposition:
    if g.dim != 4:
        raise DecompositionError("decomposition requires a 4x4 matrix")
    if g.entries[3] != (0, 0, 0, 1):
        raise DecompositionError("last row must be (0, 0, 0, 1)")
    _, by_linear = _p_coset_data()
    linear = tuple(row[:3] for row in g.entries[:3])
    if linear not in by_linear:
        raise DecompositionError("linear part is not in the point group of P")
    cname, rep = by_linear[linear]
    diff = tuple(g.entries[r][3] - rep.entries[r][3] for r in range(3))
    if any(d % 2 for d in diff):
        raise DecompositionError("translation residue is odd; element is not in P")
    return PDecomposition(diff[0] // 2, diff[1] // 2, -diff[2] // 2, cname)


def recompose_P(dec: PDecomposition) -> GroupElement:
    return eval_word(dec.to_word(), make_group_P())


def canonical_word_P(g: GroupElement) -> Word:
    return decompose_P(g).to_word()


def abelianize_P(g: GroupElement) -> "tuple[int, int]":
    """Image in Z/4 + Z/4 under a -> (1, 0), b -> (0, 1)."""
    dec = decompose_P(g)
    ea = int(dec.coset in ("a", "ab"))
    eb = int(dec.coset in ("b", "ab"))
    return ((2 * dec.i + 2 * dec.k + ea) % 4, (2 * dec.j + 2 * dec.k + eb) % 4)
