"""The concrete nontrivial units and their symmetry data.

alpha and beta live in R[P] with R = Z[s,t]/(s^4+1, t^4+1); each has 21
terms whose coefficients are signed monomials +-s^i t^j.  nu lives in
F2[S] and has 29 terms.  The twisted automorphisms below map the catalog
elements onto each other and pin down the symmetries the bilinear system
inherits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .groups import AffineGroup, GroupElement, Word, eval_word, make_group_P, make_group_S, parse_word
from .groupring import (
    F2_RING,
    GroupCharacter,
    GroupRingElem,
    R_RING,
    SignedCharacter,
    TwistedAutomorphism,
    ZETA8_RING,
    gf_ring,
    group_by_name,
)
from .rings import PrimeField, Zeta8, cyclo_monomial, find_eighth_root, specialize_R

# (word, sign, s exponent, t exponent); the term order fixes the variable
# indexing of the bilinear system, so it must not be "tidied up".
ALPHA_TERMS: Tuple[Tuple[str, int, int, int], ...] = (
    ("1", 1, 0, 0),
    ("x*z^-1", 1, 0, 2),
    ("x^-1*z^-1", -1, 0, 2),
    ("y*z^-1", -1, 2, 0),
    ("y^-1*z^-1", 1, 2, 0),
    ("x^-1*a", -1, 3, 0),
    ("a", 1, 1, 0),
    ("x^-1*y^-1*z*a", -1, 1, 0),
    ("y*z*a", 1, 3, 0),
    ("x^-1*y^-1*z*b", 1, 0, 1),
    ("x*z*b", -1, 0, 3),
    ("y^-1*z^2*b", 1, 0, 3),
    ("z^2*b", -1, 0, 1),
    ("x^-1*z^-1*a*b", -1, 1, 3),
    ("y*z^-1*a*b", -1, 3, 1),
    ("z^-1*a*b", 1, 3, 3),
    ("x^-1*y*z^-1*a*b", 1, 1, 1),
    ("x^-1*z^-2*a*b", 1, 3, 1),
    ("y*z^-2*a*b", 1, 1, 3),
    ("z^-2*a*b", -1, 1, 1),
    ("x^-1*y*z^-2*a*b", -1, 3, 3),
)

BETA_TERMS: Tuple[Tuple[str, int, int, int], ...] = (
    ("1", 1, 0, 0),
    ("x^-1*z", 1, 0, 2),
    ("x*z", -1, 0, 2),
    ("y*z", 1, 2, 0),
    ("y^-1*z", -1, 2, 0),
    ("a", -1, 1, 0),
    ("x^-1*a", 1, 3, 0),
    ("y*z*a", -1, 3, 0),
    ("x^-1*y^-1*z*a", 1, 1, 0),
    ("x^-1*y^-1*z*b", -1, 0, 1),
    ("x*z*b", 1, 0, 3),
    ("y^-1*z^2*b", -1, 0, 3),
    ("z^2*b", 1, 0, 1),
    ("x^-1*y*a*b", 1, 3, 3),
    ("a*b", 1, 1, 1),
    ("y*a*b", -1, 1, 3),
    ("x^-1*a*b", -1, 3, 1),
    ("x^-1*y*z*a*b", -1, 1, 1),
    ("z*a*b", -1, 3, 3),
    ("y*z*a*b", 1, 3, 1),
    ("x^-1*z*a*b", 1, 1, 3),
)

NU_WORDS: Tuple[str, ...] = (
    "x",
    "x^-1",
    "y",
    "y^-1",
    "x*y",
    "x^-1*y^-1",
    "y*x^-1",
    "y^2",
    "y^-1*x",
    "y^-2",
    "x^2*y",
    "x*y^-1*x",
    "x*y^-2",
    "x^-2*y^-1",
    "x^-1*y*x^-1",
    "x^-1*y^2",
    "y*x*y",
    "y^-1*x^-1*y^-1",
    "x^2*y^-1*x",
    "x*y*x^2",
    "x^-2*y*x^-1",
    "x^-1*y^-1*x^-2",
    "y*x^-2*y^-1",
    "y^-1*x^2*y",
    "x^2*y*x^2",
    "x*y^-1*x^2*y",
    "x^-2*y^-1*x^-2",
    "x^-1*y*x^-2*y^-1",
    "x^2*y^-1*x^2*y",
)


def make_alpha() -> GroupRingElem:
    group = make_group_P()
    pairs = [(w, cyclo_monomial(sgn, i, j)) for w, sgn, i, j in ALPHA_TERMS]
    return GroupRingElem.from_words(group, R_RING, pairs)


def make_beta() -> GroupRingElem:
    group = make_group_P()
    pairs = [(w, cyclo_monomial(sgn, i, j)) for w, sgn, i, j in BETA_TERMS]
    return GroupRingElem.from_words(group, R_RING, pairs)


def make_nu() -> GroupRingElem:
    group = make_group_S()
    one = PrimeField(2, 1)
    return GroupRingElem.from_words(group, F2_RING, [(w, one) for w in NU_WORDS])


def phi_S() -> TwistedAutomorphism:
    """Order-4 automorphism of S pairing nu with its inverse."""
    return TwistedAutomorphism(
        make_group_S(),
        {"x": "y", "y": "x^-1"},
        {"x": "y^-1", "y": "x"},
        name="phi",
    )


def make_nu_partner() -> GroupRingElem:
    """phi(nu)^*, the two-sided inverse of nu in F2[S]."""
    return make_nu().apply_twisted(phi_S()).star()


def theta0() -> TwistedAutomorphism:
    """Inversion twist fixing alpha: phi0 inverts the generators, chi0(a) = -s^2, chi0(b) = -t^2."""
    group = make_group_P()
    chi = GroupCharacter(
        group,
        {"a": cyclo_monomial(-1, 2, 0), "b": cyclo_monomial(-1, 0, 2)},
        R_RING,
    )
    return TwistedAutomorphism(
        group,
        {"a": "a^-1", "b": "b^-1"},
        {"a": "a^-1", "b": "b^-1"},
        character=chi,
        name="theta0",
    )


def theta1() -> TwistedAutomorphism:
    """Half twist carrying alpha to beta (after the star): phi1 fixes a, inverts b."""
    group = make_group_P()
    chi = GroupCharacter(
        group,
        {"a": cyclo_monomial(1, 2, 0), "b": cyclo_monomial(-1, 0, 0)},
        R_RING,
    )
    return TwistedAutomorphism(
        group,
        {"a": "a", "b": "b^-1"},
        {"a": "a", "b": "b^-1"},
        character=chi,
        name="theta1",
    )


def coefficient_conjugation_twist() -> TwistedAutomorphism:
    """Identity on P, chi(a) = s^2, chi(b) = t^2, coefficients conjugated; fixes alpha."""
    group = make_group_P()
    chi = GroupCharacter(
        group,
        {"a": cyclo_monomial(1, 2, 0), "b": cyclo_monomial(1, 0, 2)},
        R_RING,
    )
    return TwistedAutomorphism(
        group,
        {"a": "a", "b": "b"},
        {"a": "a", "b": "b"},
        character=chi,
        coeff_map=lambda c: c.conj(),
        name="conj-twist",
    )


def rho_grading() -> SignedCharacter:
    """Grading character: coefficients of alpha and beta are +- rho(g)."""
    return SignedCharacter(
        make_group_P(),
        {"a": cyclo_monomial(1, 1, 0), "b": cyclo_monomial(1, 0, 1)},
        R_RING,
    )


@dataclass(frozen=True)
class SupportPair:
    """Ordered supports (g_1..g_m, h_1..h_n) feeding the bilinear system."""

    group: AffineGroup
    left_words: Tuple[Word, ...]
    right_words: Tuple[Word, ...]

    @staticmethod
    def from_texts(group: AffineGroup, left, right) -> "SupportPair":
        lw = tuple(parse_word(t, group) for t in left)
        rw = tuple(parse_word(t, group) for t in right)
        pair = SupportPair(group, lw, rw)
        pair.validate()
        return pair

    def left_elements(self) -> Tuple[GroupElement, ...]:
        return tuple(eval_word(w, self.group) for w in self.left_words)

    def right_elements(self) -> Tuple[GroupElement, ...]:
        return tuple(eval_word(w, self.group) for w in self.right_words)

    def validate(self) -> None:
        for label, elems in (("left", self.left_elements()), ("right", self.right_elements())):
            if len(set(elems)) != len(elems):
                raise ValueError(f"{label} support words repeat a group element")
            if not elems:
                raise ValueError(f"{label} support is empty")

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "left": [str(w) for w in self.left_words],
            "right": [str(w) for w in self.right_words],
        }

    @staticmethod
    def from_json(obj: dict) -> "SupportPair":
        group = group_by_name(obj["group"])
        return SupportPair.from_texts(group, obj["left"], obj["right"])


def catalog_support_pair() -> SupportPair:
    """The 21 x 21 supports of alpha and beta, in catalog order."""
    return SupportPair.from_texts(
        make_group_P(),
        [w for w, _, _, _ in ALPHA_TERMS],
        [w for w, _, _, _ in BETA_TERMS],
    )


def specialize_catalog_pair(p: int):
    """(field, root, alpha, beta) at s = t = the canonical eighth root of -1 mod p."""
    desc, root = find_eighth_root(p)
    ring = gf_ring(desc)
    alpha = make_alpha().map_coeffs(lambda c: specialize_R(c, root, root), ring)
    beta = make_beta().map_coeffs(lambda c: specialize_R(c, root, root), ring)
    return desc, root, alpha, beta


def specialize_catalog_pair_zeta8(s_exp: int = 1, t_exp: int = 1):
    """alpha, beta over Z[zeta8][P] at s = zeta8^s_exp, t = zeta8^t_exp (odd exponents)."""
    sigma = Zeta8.gen_power(s_exp)
    tau = Zeta8.gen_power(t_exp)
    alpha = make_alpha().map_coeffs(lambda c: specialize_R(c, sigma, tau), ZETA8_RING)
    beta = make_beta().map_coeffs(lambda c: specialize_R(c, sigma, tau), ZETA8_RING)
    return alpha, beta
