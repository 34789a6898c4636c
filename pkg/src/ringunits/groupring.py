"""Sparse group-ring arithmetic over the exact coefficient rings.

Elements are finite sums sum_g lambda_g * g keyed by canonical integer
matrices.  Each term may carry a word witness recording how its group
element was produced; witnesses feed character evaluation and twisted
automorphisms.  For P, witnesses can always be reconstructed from the
lattice decomposition, so they are optional there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .groups import (
    AffineGroup,
    GroupElement,
    Word,
    abelianize_P,
    apply_generator_map,
    canonical_word_P,
    eval_word,
    extend_generator_map,
    make_group_P,
    make_group_S,
    parse_word,
)
from .rings import (
    CycloBivariate,
    FieldDesc,
    GaussianInt,
    PrimeField,
    QuadExtField,
    RingMismatchError,
    Zeta8,
)


class MissingWitnessError(ValueError):
    """A word witness is required but absent and not reconstructible."""


@dataclass(frozen=True)
class CoeffRing:
    """Descriptor of the coefficient ring of a group-ring element."""

    kind: str  # "cyclo" | "zeta8" | "gaussian" | "gf"
    p: Optional[int] = None
    deg: int = 1
    modulus: Optional[tuple] = None

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.kind == "cyclo":
            return CycloBivariate.from_int(n)
        if self.kind == "zeta8":
            return Zeta8.from_int(n)
        if self.kind == "gaussian":
            return GaussianInt.from_int(n)
        if self.kind == "gf":
            if self.deg == 1:
                return PrimeField(self.p, n % self.p)
            return QuadExtField(self.p, self.modulus, n % self.p, 0)
        raise ValueError(f"unknown ring kind {self.kind!r}")

    def contains(self, v) -> bool:
        if self.kind == "cyclo":
            return isinstance(v, CycloBivariate)
        if self.kind == "zeta8":
            return isinstance(v, Zeta8)
        if self.kind == "gaussian":
            return isinstance(v, GaussianInt)
        if self.kind == "gf":
            if self.deg == 1:
                return isinstance(v, PrimeField) and v.p == self.p
            return (
                isinstance(v, QuadExtField)
                and v.p == self.p
                and v.modulus == self.modulus
            )
        return False

    def coeff_to_json(self, v):
        return v.to_json()

    def coeff_from_json(self, obj):
        if self.kind == "cyclo":
            return CycloBivariate.from_json(obj)
        if self.kind == "zeta8":
            return Zeta8.from_json(obj)
        if self.kind == "gaussian":
            return GaussianInt.from_json(obj)
        if self.kind == "gf":
            vals = obj["val"]
            if obj["p"] != self.p or obj["deg"] != self.deg:
                raise RingMismatchError("field descriptor mismatch in term")
            if self.deg == 1:
                return PrimeField(self.p, vals[0] % self.p)
            return QuadExtField(self.p, self.modulus, vals[0] % self.p, vals[1] % self.p)
        raise ValueError(f"unknown ring kind {self.kind!r}")

    def descriptor_json(self) -> dict:
        if self.kind == "gf":
            out = {"kind": "gf", "p": self.p, "deg": self.deg}
            if self.modulus is not None:
                out["modulus"] = list(self.modulus)
            return out
        return {"kind": self.kind}

    @staticmethod
    def from_descriptor(obj: dict) -> "CoeffRing":
        kind = obj["kind"]
        if kind == "gf":
            modulus = tuple(obj["modulus"]) if obj.get("modulus") else None
            return CoeffRing("gf", p=obj["p"], deg=obj["deg"], modulus=modulus)
        return CoeffRing(kind)


R_RING = CoeffRing("cyclo")
ZETA8_RING = CoeffRing("zeta8")
GAUSSIAN_RING = CoeffRing("gaussian")
F2_RING = CoeffRing("gf", p=2, deg=1)


def gf_ring(desc: FieldDesc) -> CoeffRing:
    return CoeffRing("gf", p=desc.p, deg=desc.deg, modulus=desc.modulus)


class GroupRingElem:
    """Finite formal sum of group elements with exact coefficients."""

    __slots__ = ("group", "ring", "terms", "witnesses")

    def __init__(
        self,
        group: AffineGroup,
        ring: CoeffRing,
        terms: Mapping[GroupElement, object],
        witnesses: Optional[Mapping[GroupElement, Word]] = None,
    ) -> None:
        self.group = group
        self.ring = ring
        clean = {}
        for g, c in terms.items():
            if not ring.contains(c):
                raise RingMismatchError(f"coefficient {c!r} is not in {ring.kind}")
            if not c.is_zero():
                clean[g] = c
        self.terms = clean
        self.witnesses = {
            g: w for g, w in (witnesses or {}).items() if g in clean
        }

    @staticmethod
    def zero(group: AffineGroup, ring: CoeffRing) -> "GroupRingElem":
        return GroupRingElem(group, ring, {})

    @staticmethod
    def one(group: AffineGroup, ring: CoeffRing) -> "GroupRingElem":
        return GroupRingElem(group, ring, {group.identity(): ring.one()}, {group.identity(): Word(())})

    @staticmethod
    def from_words(group: AffineGroup, ring: CoeffRing, pairs) -> "GroupRingElem":
        """Build from (word, coefficient) pairs; repeated elements collide additively."""
        terms: dict = {}
        witnesses: dict = {}
        for text, coeff in pairs:
            word = text if isinstance(text, Word) else parse_word(text, group)
            g = eval_word(word, group)
            if g in terms:
                terms[g] = terms[g] + coeff
            else:
                terms[g] = coeff
                witnesses[g] = word
        return GroupRingElem(group, ring, terms, witnesses)

    def support(self):
        return tuple(sorted(self.terms))

    def coeff(self, g: GroupElement):
        return self.terms.get(g, self.ring.zero())

    def witness_word(self, g: GroupElement) -> Word:
        w = self.witnesses.get(g)
        if w is not None:
            return w
        if self.group.name == "P":
            return canonical_word_P(g)
        raise MissingWitnessError(
            f"no witness for a term of a {self.group.name}-group element"
        )

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return (
            len(self.terms) == 1
            and self.group.identity() in self.terms
            and self.terms[self.group.identity()] == self.ring.one()
        )

    def _check_compatible(self, other: "GroupRingElem") -> None:
        if not isinstance(other, GroupRingElem):
            raise TypeError("expected a GroupRingElem operand")
        if other.group.name != self.group.name or other.ring != self.ring:
            raise RingMismatchError("group-ring elements are not compatible")

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check_compatible(other)
        terms = dict(self.terms)
        for g, c in other.terms.items():
            terms[g] = terms[g] + c if g in terms else c
        witnesses = dict(other.witnesses)
        witnesses.update(self.witnesses)
        return GroupRingElem(self.group, self.ring, terms, witnesses)

    def __neg__(self) -> "GroupRingElem":
        return GroupRingElem(
            self.group, self.ring, {g: -c for g, c in self.terms.items()}, self.witnesses
        )

    def __sub__(self, other: "GroupRingElem") -> "GroupRingElem":
        return self + (-other)

    def __mul__(self, other: "GroupRingElem") -> "GroupRingElem":
        self._check_compatible(other)
        terms: dict = {}
        witnesses: dict = {}
        for g in sorted(self.terms):
            cg = self.terms[g]
            wg = self.witnesses.get(g)
            for h in sorted(other.terms):
                k = g * h
                c = cg * other.terms[h]
                if k in terms:
                    terms[k] = terms[k] + c
                else:
                    terms[k] = c
                    wh = other.witnesses.get(h)
                    if wg is not None and wh is not None:
                        witnesses[k] = wg.concat(wh)
        return GroupRingElem(self.group, self.ring, terms, witnesses)

    def scale(self, c) -> "GroupRingElem":
        if not self.ring.contains(c):
            raise RingMismatchError("scalar is not in the coefficient ring")
        return GroupRingElem(
            self.group, self.ring, {g: c * v for g, v in self.terms.items()}, self.witnesses
        )

    def translate(self, h: GroupElement, h_word: Optional[Word] = None) -> "GroupRingElem":
        """Right translation: sum lambda_g (g h)."""
        terms = {g * h: c for g, c in self.terms.items()}
        witnesses = {}
        if h_word is not None:
            for g, w in self.witnesses.items():
                witnesses[g * h] = w.concat(h_word)
        return GroupRingElem(self.group, self.ring, terms, witnesses)

    def star(self) -> "GroupRingElem":
        """The anti-involution sum lambda_g g -> sum lambda_g g^-1."""
        terms = {g.inv(): c for g, c in self.terms.items()}
        witnesses = {g.inv(): w.inverse() for g, w in self.witnesses.items()}
        return GroupRingElem(self.group, self.ring, terms, witnesses)

    def map_coeffs(self, fn: Callable, ring: Optional[CoeffRing] = None) -> "GroupRingElem":
        return GroupRingElem(
            self.group,
            ring or self.ring,
            {g: fn(c) for g, c in self.terms.items()},
            self.witnesses,
        )

    def apply_twisted(self, theta: "TwistedAutomorphism") -> "GroupRingElem":
        """sum lambda_g g -> sum chi(g) sigma(lambda_g) phi(g), via word witnesses."""
        terms: dict = {}
        witnesses: dict = {}
        for g, c in self.terms.items():
            word = self.witness_word(g)
            image_word = theta.image_word(word)
            image = eval_word(image_word, self.group)
            coeff = theta.coeff_map(c) if theta.coeff_map else c
            if theta.character is not None:
                coeff = theta.character.of_word(word) * coeff
            if image in terms:
                terms[image] = terms[image] + coeff
            else:
                terms[image] = coeff
                witnesses[image] = image_word
        return GroupRingElem(self.group, self.ring, terms, witnesses)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupRingElem)
            and other.group.name == self.group.name
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash(
            (self.group.name, self.ring, tuple(sorted(self.terms.items(), key=lambda kv: kv[0])))
        )

    def __repr__(self) -> str:
        return f"GroupRingElem({self.group.name}, {self.ring.kind}, {len(self.terms)} terms)"

    def to_json(self) -> dict:
        terms = []
        for g in self.support():
            terms.append(
                {
                    "word": str(self.witness_word(g)),
                    "coeff": self.ring.coeff_to_json(self.terms[g]),
                }
            )
        return {
            "group": self.group.name,
            "ring": self.ring.descriptor_json(),
            "terms": terms,
        }

    @staticmethod
    def from_json(obj: dict) -> "GroupRingElem":
        group = group_by_name(obj["group"])
        ring = CoeffRing.from_descriptor(obj["ring"])
        pairs = [(t["word"], ring.coeff_from_json(t["coeff"])) for t in obj["terms"]]
        return GroupRingElem.from_words(group, ring, pairs)


def group_by_name(name: str) -> AffineGroup:
    if name == "P":
        return make_group_P()
    if name == "S":
        return make_group_S()
    raise ValueError(f"unknown group {name!r}")


def verify_unit(a: GroupRingElem, b: GroupRingElem) -> bool:
    """True iff a * b = 1 = b * a exactly."""
    return (a * b).is_one() and (b * a).is_one()


def is_nontrivial(a: GroupRingElem) -> bool:
    """Support size at least 2; single-term elements are trivial units at best."""
    return len(a.terms) >= 2


def _unit_inverse(v, ring_one):
    """Inverse of a finite-order unit: the power one step before it returns to 1."""
    power = v
    for _ in range(16):
        if power * v == ring_one:
            return power
        power = power * v
    raise ValueError("character value is not a root of unity")


class GroupCharacter:
    """Multiplicative character on a group, given by values on the generators.

    Values must be roots of unity in the coefficient ring.  Evaluation
    extends along word witnesses; for P it can also go through the lattice
    decomposition, and both paths agree for genuine characters.
    """

    def __init__(self, group: AffineGroup, values: Mapping[str, object], ring: CoeffRing) -> None:
        self.group = group
        self.ring = ring
        vals = dict(values)
        for name in group.generators:
            if name not in vals:
                raise ValueError(f"character is missing a value for generator {name!r}")
        for name, defn in group.derived.items():
            if name not in vals:
                vals[name] = self._eval_factors(defn.factors, vals)
        self.values = vals
        self._inverses = {
            name: _unit_inverse(v, ring.one()) for name, v in vals.items()
        }

    def _eval_factors(self, factors, vals):
        acc = self.ring.one()
        for name, e in factors:
            v = vals[name]
            if e < 0:
                v = _unit_inverse(v, self.ring.one())
                e = -e
            acc = acc * v**e
        return acc

    def of_word(self, word: Word):
        acc = self.ring.one()
        for name, e in word.factors:
            v = self.values[name] if e > 0 else self._inverses[name]
            acc = acc * v ** abs(e)
        return acc

    def of_element(self, g: GroupElement):
        """Evaluate through the canonical decomposition (P only)."""
        if self.group.name != "P":
            raise MissingWitnessError("element-level evaluation needs the P decomposition")
        return self.of_word(canonical_word_P(g))

    def check(self) -> bool:
        return all(
            self.of_word(r) == self.ring.one() for r in self.group.relators
        )


class TwistedAutomorphism:
    """A pair (phi, chi) with an optional coefficient automorphism.

    Acts on group-ring elements by sum lambda_g g -> sum chi(g) sigma(lambda_g) phi(g).
    phi is given by generator image words together with the images of the
    inverse automorphism, so the defining data can be validated.
    """

    def __init__(
        self,
        group: AffineGroup,
        gen_map: Mapping[str, str],
        gen_map_inv: Mapping[str, str],
        character: Optional[GroupCharacter] = None,
        coeff_map: Optional[Callable] = None,
        name: str = "",
    ) -> None:
        self.group = group
        self.name = name
        base = {k: parse_word(v, group) for k, v in gen_map.items()}
        base_inv = {k: parse_word(v, group) for k, v in gen_map_inv.items()}
        self.gen_map = extend_generator_map(group, base)
        self.gen_map_inv = extend_generator_map(group, base_inv)
        self.character = character
        self.coeff_map = coeff_map

    def image_word(self, word: Word) -> Word:
        return apply_generator_map(self.gen_map, word)

    def image_element(self, g_word: Word) -> GroupElement:
        return eval_word(self.image_word(g_word), self.group)

    def check(self) -> bool:
        for r in self.group.relators:
            if not eval_word(self.image_word(r), self.group).is_identity():
                return False
        for name in self.group.generators:
            round_trip = apply_generator_map(self.gen_map_inv, self.gen_map[name])
            target = self.group.token_matrix(name)
            if eval_word(round_trip, self.group) != target:
                return False
        return True


class SignedCharacter:
    """Character into units-mod-sign of the coefficient ring (grading data)."""

    def __init__(self, group: AffineGroup, values: Mapping[str, object], ring: CoeffRing) -> None:
        self.group = group
        self.ring = ring
        vals = dict(values)
        for name, defn in group.derived.items():
            if name not in vals:
                acc = ring.one()
                for fname, e in defn.factors:
                    v = vals[fname] if e > 0 else _unit_inverse(vals[fname], ring.one())
                    acc = acc * v ** abs(e)
                vals[name] = acc
        self.values = vals
        self._inverses = {name: _unit_inverse(v, ring.one()) for name, v in vals.items()}

    def representative(self, word: Word):
        acc = self.ring.one()
        for name, e in word.factors:
            v = self.values[name] if e > 0 else self._inverses[name]
            acc = acc * v ** abs(e)
        return acc


def check_rho_grading(elem: GroupRingElem, rho: SignedCharacter) -> bool:
    """Each coefficient equals the rho-image of its group element up to sign."""
    for g, c in elem.terms.items():
        m = rho.representative(elem.witness_word(g))
        if c != m and c != -m:
            return False
    return True


def abelianize_table(elem: GroupRingElem):
    """Image under R[P] -> R[Z/4 + Z/4] as a 4x4 array of coefficients."""
    if elem.group.name != "P":
        raise ValueError("abelianization table is defined for P")
    table = [[elem.ring.zero() for _ in range(4)] for _ in range(4)]
    for g, c in elem.terms.items():
        u, v = abelianize_P(g)
        table[u][v] = table[u][v] + c
    return table


def abelianize_is_one(elem: GroupRingElem) -> bool:
    table = abelianize_table(elem)
    ok = table[0][0] == elem.ring.one()
    for u in range(4):
        for v in range(4):
            if (u, v) != (0, 0) and not table[u][v].is_zero():
                return False
    return ok
