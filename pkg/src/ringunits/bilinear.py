"""Bilinear equation systems attached to a pair of finite supports.

For supports (g_1..g_m), (h_1..h_n) the unit condition
(sum u_i g_i)(sum v_j h_j) = 1 becomes one equation per distinct product:
sum over {(i,j) : g_i h_j = w} of u_i v_j = [w = 1].  On the catalog
supports this is the 121-equation system; normalization, localization and
the character reduction to 11 variables are transformations of it, and
exports serialize it for external Groebner/SAT tooling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .catalog import SupportPair
from .groupring import GAUSSIAN_RING, CoeffRing, GroupCharacter, TwistedAutomorphism
from .groups import GroupElement, canonical_word_P, eval_word
from .rings import GaussianInt, RingMismatchError


class FormatConstraintError(ValueError):
    """The requested external format cannot encode this system."""


def _var_key(name: str) -> Tuple[str, int]:
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return (head, int(tail) if tail else 0)


def _mono_key(vars_: Tuple[str, ...]):
    # nonconstant monomials in variable-lex order, the constant term last
    return (vars_ == (), tuple(_var_key(v) for v in vars_))


def _as_gauss(c) -> GaussianInt:
    return c if isinstance(c, GaussianInt) else GaussianInt.from_int(c)


def _cmul(a, b):
    if isinstance(a, GaussianInt) or isinstance(b, GaussianInt):
        return _as_gauss(a) * _as_gauss(b)
    return a * b


def _cadd(a, b):
    if isinstance(a, GaussianInt) or isinstance(b, GaussianInt):
        return _as_gauss(a) + _as_gauss(b)
    return a + b


def _ciszero(c) -> bool:
    return c.is_zero() if isinstance(c, GaussianInt) else c == 0


@dataclass(frozen=True)
class Polynomial:
    """Canonical sparse polynomial: sorted (coefficient, variable multiset) pairs."""

    monomials: Tuple[Tuple[object, Tuple[str, ...]], ...]

    @staticmethod
    def from_terms(terms) -> "Polynomial":
        acc: Dict[Tuple[str, ...], object] = {}
        for c, vars_ in terms:
            key = tuple(sorted(vars_, key=_var_key))
            acc[key] = _cadd(acc[key], c) if key in acc else c
        cleaned = [(c, k) for k, c in acc.items() if not _ciszero(c)]
        cleaned.sort(key=lambda m: _mono_key(m[1]))
        return Polynomial(tuple(cleaned))

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial.from_terms([(c, ())])

    def is_zero(self) -> bool:
        return not self.monomials

    def variables(self) -> Tuple[str, ...]:
        seen = set()
        for _, vars_ in self.monomials:
            seen.update(vars_)
        return tuple(sorted(seen, key=_var_key))

    def has_gaussian_coeffs(self) -> bool:
        return any(isinstance(c, GaussianInt) for c, _ in self.monomials)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial.from_terms(
            (c, tuple(mapping.get(v, v) for v in vars_)) for c, vars_ in self.monomials
        )

    def substitute_linear(self, mapping: Mapping[str, tuple]) -> "Polynomial":
        """Simultaneously replace each mapped variable by coeff * target.

        mapping values are (coeff, target name or None); a None target with
        coefficient c turns each occurrence into the constant factor c.
        """
        terms = []
        for c, vars_ in self.monomials:
            coeff = c
            kept = []
            for v in vars_:
                if v in mapping:
                    k, target = mapping[v]
                    coeff = _cmul(coeff, k)
                    if target is not None:
                        kept.append(target)
                else:
                    kept.append(v)
            terms.append((coeff, tuple(kept)))
        return Polynomial.from_terms(terms)

    def reduce_mod(self, p: int) -> "Polynomial":
        if self.has_gaussian_coeffs():
            raise RingMismatchError("cannot reduce Gaussian coefficients modulo p")
        return Polynomial.from_terms((c % p, vars_) for c, vars_ in self.monomials)

    def evaluate(self, assignment: Mapping[str, object], ring: CoeffRing, iota_image=None):
        acc = ring.zero()
        for c, vars_ in self.monomials:
            if isinstance(c, GaussianInt):
                if iota_image is None:
                    raise RingMismatchError(
                        "Gaussian coefficient needs an image of iota in the target ring"
                    )
                term = ring.from_int(c.re) + ring.from_int(c.im) * iota_image
            else:
                term = ring.from_int(c)
            for v in vars_:
                if v not in assignment:
                    raise ValueError(f"assignment is missing variable {v!r}")
                term = term * assignment[v]
            acc = acc + term
        return acc

    def _coeff_str(self, c) -> str:
        return str(c)

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for c, vars_ in self.monomials:
            if vars_:
                grouped = []
                run_start = 0
                for idx in range(1, len(vars_) + 1):
                    if idx == len(vars_) or vars_[idx] != vars_[run_start]:
                        count = idx - run_start
                        grouped.append(
                            vars_[run_start] if count == 1 else f"{vars_[run_start]}^{count}"
                        )
                        run_start = idx
                mono = "*".join(grouped)
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append(f"-{mono}")
                else:
                    parts.append(f"{self._coeff_str(c)}*{mono}")
            else:
                parts.append(self._coeff_str(c))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


@dataclass(frozen=True)
class LabeledEquation:
    label: str  # word of the product element; "" for added constraints
    poly: Polynomial


@dataclass(frozen=True)
class BilinearSystem:
    u_vars: Tuple[str, ...]
    v_vars: Tuple[str, ...]
    extra_vars: Tuple[str, ...]
    char: int
    equations: Tuple[LabeledEquation, ...]
    supports: Optional[SupportPair] = None
    normalized: bool = False
    localized: Optional[Tuple[int, int]] = None
    reduced: bool = False
    pinned: Tuple[str, ...] = field(default=())

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.u_vars + self.v_vars + self.extra_vars

    @property
    def identity_equation(self) -> Polynomial:
        for eq in self.equations:
            if eq.label == "1":
                return eq.poly
        raise KeyError("no identity-labeled equation")

    def equation_set(self) -> frozenset:
        return frozenset(eq.poly for eq in self.equations)

    def has_gaussian_coeffs(self) -> bool:
        return any(eq.poly.has_gaussian_coeffs() for eq in self.equations)


def _product_label(pair: SupportPair, w: GroupElement, i: int, j: int) -> str:
    if pair.group.name == "P":
        return str(canonical_word_P(w))
    return str(pair.left_words[i].concat(pair.right_words[j]))


def generate_bilinear_system(pair: SupportPair) -> BilinearSystem:
    pair.validate()
    gs = pair.left_elements()
    hs = pair.right_elements()
    m, n = len(gs), len(hs)
    identity = pair.group.identity()

    products: Dict[GroupElement, List[Tuple[int, int]]] = {}
    for i, g in enumerate(gs, start=1):
        for j, h in enumerate(hs, start=1):
            products.setdefault(g * h, []).append((i, j))

    ordered = sorted(products, key=lambda w: (w != identity, w))
    equations = []
    for w in ordered:
        pairs = sorted(products[w])
        terms = [(1, (f"u{i}", f"v{j}")) for i, j in pairs]
        if w == identity:
            terms.append((-1, ()))
        i0, j0 = pairs[0]
        equations.append(
            LabeledEquation(_product_label(pair, w, i0 - 1, j0 - 1), Polynomial.from_terms(terms))
        )

    return BilinearSystem(
        u_vars=tuple(f"u{i}" for i in range(1, m + 1)),
        v_vars=tuple(f"v{j}" for j in range(1, n + 1)),
        extra_vars=(),
        char=0,
        equations=tuple(equations),
        supports=pair,
    )


def add_normalization(sys: BilinearSystem) -> BilinearSystem:
    """Append the augmentation constraints sum u_i = 1 and sum v_j = 1."""
    if sys.normalized:
        raise ValueError("system is already normalized")
    if sys.localized is not None or sys.reduced:
        raise ValueError("normalization applies to the plain product system")
    norm_u = Polynomial.from_terms([(1, (v,)) for v in sys.u_vars] + [(-1, ())])
    norm_v = Polynomial.from_terms([(1, (v,)) for v in sys.v_vars] + [(-1, ())])
    return replace(
        sys,
        equations=sys.equations + (LabeledEquation("", norm_u), LabeledEquation("", norm_v)),
        normalized=True,
    )


def localize(sys: BilinearSystem, i: int, j: int) -> BilinearSystem:
    """Trade the normalization for u_i = 1 plus an inverse variable for u_j."""
    if i == j:
        raise ValueError("localization needs two distinct variable indices")
    if sys.localized is not None:
        raise ValueError("system is already localized")
    if sys.reduced:
        raise ValueError("cannot localize a character-reduced system")
    m = len(sys.u_vars)
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"localization indices must lie in 1..{m}")

    equations = [eq for eq in sys.equations if eq.label != ""] if sys.normalized else list(sys.equations)
    ui, uj = f"u{i}", f"u{j}"
    mapping = {ui: (1, None)}
    equations = [LabeledEquation(eq.label, eq.poly.substitute_linear(mapping)) for eq in equations]
    equations.append(
        LabeledEquation("", Polynomial.from_terms([(1, (uj, "w")), (-1, ())]))
    )
    return replace(
        sys,
        u_vars=tuple(v for v in sys.u_vars if v != ui),
        extra_vars=("w",),
        equations=tuple(equations),
        normalized=False,
        localized=(i, j),
    )


def check_parity(sys: BilinearSystem) -> bool:
    """Every equation except the identity-labeled one has an even monomial count."""
    return all(
        len(eq.poly.monomials) % 2 == 0 for eq in sys.equations if eq.label != "1"
    )


def apply_variable_permutation(sys: BilinearSystem, mapping: Mapping[str, str]) -> BilinearSystem:
    known = set(sys.variables)
    for src, dst in mapping.items():
        if src not in known or dst not in known:
            raise ValueError(f"permutation mentions unknown variable {src!r} or {dst!r}")
    equations = tuple(
        LabeledEquation(eq.label, eq.poly.rename(mapping)) for eq in sys.equations
    )
    return replace(sys, equations=equations)


def _catalog_index_pairing(m: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, i + 1) for i in range(2, m, 2))


def check_swap_symmetries(sys: BilinearSystem, pairs: Optional[Sequence[Tuple[int, int]]] = None) -> bool:
    """Both display symmetries: u <-> v, and the simultaneous pair swaps fixing index 1."""
    m, n = len(sys.u_vars), len(sys.v_vars)
    if m != n:
        return False
    base = sys.equation_set()

    uv_swap = {f"u{i}": f"v{i}" for i in range(1, m + 1)}
    uv_swap.update({f"v{i}": f"u{i}" for i in range(1, m + 1)})
    if apply_variable_permutation(sys, uv_swap).equation_set() != base:
        return False

    if pairs is None:
        pairs = _catalog_index_pairing(m)
    pair_swap: Dict[str, str] = {}
    for i, j in pairs:
        for stem in ("u", "v"):
            pair_swap[f"{stem}{i}"] = f"{stem}{j}"
            pair_swap[f"{stem}{j}"] = f"{stem}{i}"
    return apply_variable_permutation(sys, pair_swap).equation_set() == base


@dataclass(frozen=True)
class CharacterPair:
    """One of the 256 assignments of (chi0, chi1) generator values in {1, i, -1, -i}."""

    index: int
    chi0_a: GaussianInt
    chi0_b: GaussianInt
    chi1_a: GaussianInt
    chi1_b: GaussianInt
    valid: bool


def enumerate_character_pairs() -> Tuple[CharacterPair, ...]:
    """All 4^4 value assignments, flagged by the anti-involution condition."""
    one = GaussianInt.one()
    out = []
    for e0a in range(4):
        for e0b in range(4):
            for e1a in range(4):
                for e1b in range(4):
                    vals = tuple(GaussianInt.iota_power(e) for e in (e0a, e0b, e1a, e1b))
                    relators_ok = all(v**4 == one for v in vals)
                    # theta1-star squares to the identity iff chi1(b^-1) = chi1(b)
                    involution_ok = vals[3] * vals[3] == one
                    out.append(
                        CharacterPair(
                            index=64 * e0a + 16 * e0b + 4 * e1a + e1b,
                            chi0_a=vals[0],
                            chi0_b=vals[1],
                            chi1_a=vals[2],
                            chi1_b=vals[3],
                            valid=relators_ok and involution_ok,
                        )
                    )
    return tuple(out)


def remark_character_pair() -> CharacterPair:
    """Gaussian image of the Remark-1 characters under s, t -> zeta8 (so s^2 -> iota)."""
    minus_i = GaussianInt.iota_power(3)
    pair = enumerate_character_pairs()[246]
    assert pair.chi0_a == minus_i and pair.chi0_b == minus_i
    return pair


def _gaussian_character(group, a_val: GaussianInt, b_val: GaussianInt) -> GroupCharacter:
    return GroupCharacter(group, {"a": a_val, "b": b_val}, GAUSSIAN_RING)


def reduce_by_characters(
    sys: BilinearSystem,
    phi0: TwistedAutomorphism,
    phi1: TwistedAutomorphism,
    pair: CharacterPair,
) -> BilinearSystem:
    """Impose theta0-symmetry and theta1-star-unitarity, eliminating variables.

    u_{idx(phi0(g))} = chi0(g) u_{idx(g)} pairs up the u's; v_{idx(phi1(g)^-1)}
    = chi1(g) u_{idx(g)} removes every v.  A phi0-fixpoint with chi0 != 1 pins
    its variable to 0 (recorded, not an error).  Coefficients land in Z[i].
    """
    if sys.supports is None:
        raise ValueError("character reduction needs the generating supports")
    if sys.reduced:
        raise ValueError("system is already character-reduced")
    sp = sys.supports
    group = sp.group
    chi0 = _gaussian_character(group, pair.chi0_a, pair.chi0_b)
    chi1 = _gaussian_character(group, pair.chi1_a, pair.chi1_b)

    gs = sp.left_elements()
    hs = sp.right_elements()
    g_index = {g: i for i, g in enumerate(gs, start=1)}
    h_index = {h: j for j, h in enumerate(hs, start=1)}

    sigma: Dict[int, int] = {}
    for i, gw in enumerate(sp.left_words, start=1):
        image = eval_word(phi0.image_word(gw), group)
        if image not in g_index:
            raise ValueError("phi0 does not permute the left support")
        sigma[i] = g_index[image]
    if any(sigma[sigma[i]] != i for i in sigma):
        raise ValueError("phi0 is not an involution on the left support")

    tau: Dict[int, int] = {}
    for i, gw in enumerate(sp.left_words, start=1):
        image = eval_word(phi1.image_word(gw), group).inv()
        if image not in h_index:
            raise ValueError("phi1-star does not carry the left support onto the right one")
        tau[i] = h_index[image]
    if len(set(tau.values())) != len(hs):
        raise ValueError("phi1-star is not a bijection between the supports")

    one = GaussianInt.one()
    # resolve each u to (coefficient, representative) with representative None = pinned
    resolved: Dict[int, Tuple[GaussianInt, Optional[int]]] = {}
    pinned: List[str] = []
    free: List[int] = []
    for i in range(1, len(gs) + 1):
        if i in resolved:
            continue
        si = sigma[i]
        ci = chi0.of_word(sp.left_words[i - 1])
        if si == i:
            if ci == one:
                resolved[i] = (one, i)
                free.append(i)
            else:
                resolved[i] = (GaussianInt.zero(), None)
                pinned.append(f"u{i}")
        else:
            base = min(i, si)
            other = max(i, si)
            resolved[base] = (one, base)
            free.append(base)
            c_base = chi0.of_word(sp.left_words[base - 1])
            resolved[other] = (c_base, base)

    mapping: Dict[str, tuple] = {}
    for i, (c, rep) in resolved.items():
        if rep != i or c != one:
            mapping[f"u{i}"] = (c, f"u{rep}" if rep is not None else None)
    for i in range(1, len(gs) + 1):
        j = tau[i]
        c = chi1.of_word(sp.left_words[i - 1])
        base_c, rep = resolved[i]
        coeff = c * base_c
        mapping[f"v{j}"] = (coeff, f"u{rep}" if rep is not None else None)

    equations = tuple(
        LabeledEquation(
            eq.label,
            Polynomial.from_terms(
                (_as_gauss(c), vars_) for c, vars_ in eq.poly.substitute_linear(mapping).monomials
            ),
        )
        for eq in sys.equations
    )
    return replace(
        sys,
        u_vars=tuple(f"u{i}" for i in sorted(free)),
        v_vars=(),
        equations=equations,
        reduced=True,
        pinned=tuple(pinned),
    )


def substitute(
    sys: BilinearSystem,
    assignment: Mapping[str, object],
    ring: CoeffRing,
    iota_image=None,
):
    """Evaluate every equation exactly; the residual list is zero iff assignment solves."""
    for v in sys.variables:
        if v not in assignment:
            raise ValueError(f"assignment is missing variable {v!r}")
    return [eq.poly.evaluate(assignment, ring, iota_image) for eq in sys.equations]


def reduce_system_mod(sys: BilinearSystem, p: int) -> BilinearSystem:
    if p < 2:
        raise ValueError("characteristic must be a prime")
    equations = tuple(
        LabeledEquation(eq.label, eq.poly.reduce_mod(p)) for eq in sys.equations
    )
    return replace(sys, char=p, equations=equations)


def _encode_coeff(c):
    if isinstance(c, GaussianInt):
        return [c.re, c.im]
    return c


def export_system(sys: BilinearSystem, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "vars": list(sys.variables),
            "char": sys.char,
            "eqs": [
                {
                    "label": eq.label,
                    "monomials": [
                        [_encode_coeff(c), list(vars_)] for c, vars_ in eq.poly.monomials
                    ],
                }
                for eq in sys.equations
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    if sys.has_gaussian_coeffs():
        raise FormatConstraintError(
            f"Gaussian coefficients are not expressible in {fmt} format; use json"
        )
    polys = [str(eq.poly) for eq in sys.equations]
    if fmt == "msolve":
        head = ",".join(sys.variables)
        return head + "\n" + str(sys.char) + "\n" + ",\n".join(polys) + "\n"
    if fmt == "singular":
        lines = [f"ring r = {sys.char},({','.join(sys.variables)}),dp;", "ideal I ="]
        lines.extend(f"  {p}," for p in polys[:-1])
        lines.append(f"  {polys[-1]};")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
