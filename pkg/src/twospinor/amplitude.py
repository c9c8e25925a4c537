"""Chirality-split evaluation of gamma chains and the V-A amplitude for nu n -> p e.

A chain ``psibar_f G_1 ... G_n P psi_i`` with a chiral projector ``P`` has a
single nonvanishing block routing: every ``G_k`` is block off-diagonal, so the
chirality of the intermediate two-spinor flips at each slot. The engine walks
that routing with 2x2 blocks and never forms a 4x4 product.

Block naming follows the 4x4 layout: the ``+`` block of ``G`` is its upper-right
corner (it maps the ``-`` half to the ``+`` half), the ``-`` block is the
lower-left corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import I4, lower_left, max_abs, upper_right
from .dirac import (
    FourSpinor,
    GammaSet,
    adjoint,
    default_gamma_set,
)
from .spinors import FourVector, TwoSpinor, minkowski_norm, raise_index

Slot = int | FourVector

_FLIP = {"+": "-", "-": "+"}


@dataclass
class TermCounter:
    """Counts 2x2 block products and two-spinor inner products."""

    contractions: int = 0
    chain_length: int = 0

    def add(self, k: int = 1) -> None:
        if k < 0:
            raise ValueError("cannot remove work from a counter")
        self.contractions += k


@dataclass(frozen=True)
class ChiralBlock:
    m: np.ndarray
    sign: str

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError(f"block sign must be '+' or '-', got {self.sign!r}")


def slot_matrix(slot: Slot, g: GammaSet) -> np.ndarray:
    """``gamma^a`` for an integer slot, ``p-hat`` for a four-vector slot."""
    if isinstance(slot, FourVector):
        return g.slash(slot)
    if isinstance(slot, (int, np.integer)) and not isinstance(slot, bool) and 0 <= slot < 4:
        return g.upper(int(slot))
    raise ValueError(f"chain slot must be a gamma index 0..3 or a FourVector, got {slot!r}")


def slot_block(slot: Slot, sign: str, g: GammaSet) -> ChiralBlock:
    m = slot_matrix(slot, g)
    return ChiralBlock(upper_right(m) if sign == "+" else lower_left(m), sign)


def mass_shell_residual(p: FourVector, g: GammaSet) -> float:
    """``|p_+ p_- - clifford_sign (p.p) I|`` for the two blocks of ``p-hat``."""
    pp = g.slash(p)
    prod = upper_right(pp) @ lower_left(pp)
    return max_abs(prod - g.clifford_sign * minkowski_norm(p) * np.eye(2))


@dataclass(frozen=True)
class ChiralChain:
    slots: tuple
    projector_sign: str | None = "+"

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        if self.projector_sign not in ("+", "-", None):
            raise ValueError(f"projector sign must be '+', '-' or None, got {self.projector_sign!r}")

    def __len__(self) -> int:
        return len(self.slots)


def chain_matrix(chain: ChiralChain, g: GammaSet | None = None) -> np.ndarray:
    """The explicit 4x4 product ``G_1 ... G_n P`` (``P = I`` without a projector)."""
    g = default_gamma_set() if g is None else g
    m = I4.copy()
    for slot in chain.slots:
        m = m @ slot_matrix(slot, g)
    if chain.projector_sign is not None:
        m = m @ g.projector(chain.projector_sign)
    return m


@dataclass(frozen=True)
class RoutedTerm:
    """``psibar_{f,bra_half} B_1 ... B_n psi_{i,ket_half}`` with 2x2 blocks."""

    bra_half: str
    blocks: tuple
    ket_half: str

    def evaluate(self, psi_f: FourSpinor, psi_i: FourSpinor,
                 counter: TermCounter | None = None) -> complex:
        bar = adjoint(psi_f)
        v = psi_i.plus if self.ket_half == "+" else psi_i.minus
        for b in reversed(self.blocks):
            v = b.m @ v
            if counter is not None:
                counter.add()
        row = bar.plus if self.bra_half == "+" else bar.minus
        if counter is not None:
            counter.add()
        return complex(row @ v)


def _route(chain: ChiralChain, ket_half: str, g: GammaSet) -> RoutedTerm:
    blocks = []
    half = ket_half
    for slot in reversed(chain.slots):
        # a block acting on the "+" half is the "-" block, and the result is "-"
        sign = _FLIP[half]
        blocks.append(slot_block(slot, sign, g))
        half = sign
    # psibar_{+} is built from the conjugated "+" half and pairs with the "-" half
    return RoutedTerm(bra_half=_FLIP[half], blocks=tuple(reversed(blocks)), ket_half=ket_half)


def chirality_split(chain: ChiralChain, g: GammaSet | None = None) -> list[RoutedTerm]:
    """Replace a 4x4 chain by its nonvanishing two-spinor routings.

    With a projector there is exactly one routing. Without one, both
    chiralities of ``psi_i`` contribute and two routings are returned; the
    empty chain then reduces to the two halves of ``<psi_f|psi_i>``.
    """
    g = default_gamma_set() if g is None else g
    if chain.projector_sign is not None:
        if not chain.slots:
            raise ValueError("a projector needs at least one chain slot")
        return [_route(chain, chain.projector_sign, g)]
    return [_route(chain, "+", g), _route(chain, "-", g)]


def evaluate_chain(chain: ChiralChain, psi_f: FourSpinor, psi_i: FourSpinor,
                   g: GammaSet | None = None, counter: TermCounter | None = None) -> complex:
    """Direct two-spinor evaluation of ``psibar_f G_1 ... G_n P psi_i``."""
    g = default_gamma_set() if g is None else g
    if chain.projector_sign is None and not chain.slots:
        # identity routing: a single four-component inner product
        if counter is not None:
            counter.add()
            counter.chain_length = 0
        return complex(adjoint(psi_f).row @ psi_i.column)
    if counter is not None:
        counter.chain_length = len(chain)
    return sum(t.evaluate(psi_f, psi_i, counter) for t in chirality_split(chain, g))


# --- contracted gamma pairs ----------------------------------------------------

@dataclass(frozen=True)
class PairTerm:
    """``sum_a (r1 X_a c1)(r2 Y^a c2)`` with X, Y single chiral blocks of gamma_a."""

    r1: np.ndarray
    sign1: str
    c1: np.ndarray
    r2: np.ndarray
    sign2: str
    c2: np.ndarray

    def evaluate(self, g: GammaSet, counter: TermCounter | None = None) -> complex:
        pick = {"+": g.plus, "-": g.minus}
        total = 0j
        for a in range(4):
            x = self.r1 @ pick[self.sign1](a) @ self.c1
            y = self.r2 @ pick[self.sign2](a, raised=True) @ self.c2
            total += x * y
        if counter is not None:
            # two block products and two inner products for each of the four a
            counter.add(16)
        return complex(total)


@dataclass(frozen=True)
class ContractedTerm:
    """A sum of ``coef * (r_i . c_j)(r_k . c_l)`` products of inner products."""

    products: tuple  # (coef, (r, c), (r, c))

    def evaluate(self, counter: TermCounter | None = None) -> complex:
        total = 0j
        for coef, (ra, ca), (rb, cb) in self.products:
            total += coef * (ra @ ca) * (rb @ cb)
            if counter is not None:
                counter.add(2)
        return complex(total)


def contract_pair_identities(term, g: GammaSet | None = None):
    """Eliminate a contracted gamma index with the two block identities.

    Opposite block signs leave one product of inner products, equal signs
    leave the antisymmetrised pair. The coefficients are the ones measured on
    the constructed blocks (``g.opposite_coeff`` and ``g.same_coeff``). A term
    without a contracted pair is returned unchanged.
    """
    if not isinstance(term, PairTerm):
        return term
    g = default_gamma_set() if g is None else g
    t = term
    if t.sign1 != t.sign2:
        return ContractedTerm(((g.opposite_coeff, (t.r1, t.c2), (t.r2, t.c1)),))
    return ContractedTerm((
        (g.same_coeff, (t.r1, t.c1), (t.r2, t.c2)),
        (-g.same_coeff, (t.r1, t.c2), (t.r2, t.c1)),
    ))


# --- plane waves ------------------------------------------------------------------

@dataclass(frozen=True)
class ParticleState:
    E: float
    m: float
    s: int = 1
    eps: int = 1
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("E", "m", "theta", "phi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.s not in (1, -1):
            raise ValueError(f"helicity s must be +1 or -1, got {self.s!r}")
        if self.eps not in (1, -1):
            raise ValueError(f"energy sign eps must be +1 or -1, got {self.eps!r}")
        if self.m < 0:
            raise ValueError(f"mass must be non-negative, got {self.m}")
        if self.E < self.m:
            raise ValueError(f"energy {self.E} is below the mass {self.m}")

    def with_helicity(self, s: int) -> "ParticleState":
        return ParticleState(self.E, self.m, s, self.eps, self.theta, self.phi)


@dataclass(frozen=True)
class Couplings:
    G_F: float = 1.1663787e-5
    g_V: float = 1.0
    g_A: float = 1.2754

    def __post_init__(self):
        for name in ("G_F", "g_V", "g_A"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"coupling {name} must be finite, got {value}")
            object.__setattr__(self, name, value)


def _chiral_prefactor(state: ParticleState, block_sign: str) -> float:
    e, m, s, eps = state.E, state.m, state.s, state.eps
    pm = 1 if block_sign == "+" else -1
    # E >= m >= 0 keeps both roots real for either energy sign
    return (math.sqrt(e + eps * m) + pm * eps * s * math.sqrt(e - eps * m)) / math.sqrt(2.0)


def plane_wave_spinor(state: ParticleState, block_sign: str) -> TwoSpinor:
    """Longitudinally polarised two-spinor block of a plane wave.

    ``(sqrt(E + eps m) +/- eps s sqrt(E - eps m)) / sqrt(2)`` times
    ``(e^{-i phi/2} sqrt(1 + s cos theta), e^{i phi/2} sqrt(1 - s cos theta))``.
    The ``+`` block is an upper unprimed spinor. The ``-`` block is returned as
    a lower primed spinor: it enters the four-spinor with its index raised.
    """
    if block_sign not in ("+", "-"):
        raise ValueError(f"block sign must be '+' or '-', got {block_sign!r}")
    phi = state.phi % (2 * math.pi)
    ct = math.cos(state.theta)
    s = state.s
    spatial = np.array([
        np.exp(-0.5j * phi) * math.sqrt(max(1 + s * ct, 0.0)),
        np.exp(0.5j * phi) * math.sqrt(max(1 - s * ct, 0.0)),
    ])
    c = _chiral_prefactor(state, block_sign) * spatial
    if block_sign == "+":
        return TwoSpinor(c, "upper", False)
    return TwoSpinor(c, "lower", True)


def four_spinor_from_blocks(u_plus, u_minus) -> FourSpinor:
    """Assemble ``(u_+^A, eps^{A'B'} u_{- B'})`` from raw block components."""
    up = TwoSpinor(u_plus, "upper", False)
    um = TwoSpinor(u_minus, "lower", True)
    return FourSpinor(up, raise_index(um))


def four_spinor_from_state(state: ParticleState) -> FourSpinor:
    return FourSpinor(plane_wave_spinor(state, "+"), raise_index(plane_wave_spinor(state, "-")))


def helicity_kets(theta_p: float, theta_e: float) -> tuple[TwoSpinor, ...]:
    """The four reference kets ``|s0>, |s1>, |s2>, |s3>`` of the worked example."""
    return (
        TwoSpinor([1, 0]),
        TwoSpinor([0, 1]),
        TwoSpinor([math.cos(theta_p / 2), math.sin(theta_p / 2)]),
        TwoSpinor([-math.sin(theta_e / 2), math.cos(theta_e / 2)]),
    )


# --- the V-A amplitude ------------------------------------------------------------

LEGS = ("nu", "n", "p", "e")


def _va_direct(psi: dict, c: Couplings, g: GammaSet, counter: TermCounter) -> complex:
    bar_e, bar_p = adjoint(psi["e"]), adjoint(psi["p"])
    nu, n = psi["nu"], psi["n"]
    # lepton current: psibar_e gamma_a (1 + gamma5) psi_nu = 2 psibar_{e+} gamma_{a-} psi_{nu+}
    # hadron current splits into (g_V + g_A) P_+ and (g_V - g_A) P_- pieces
    same = PairTerm(bar_e.plus, "-", nu.plus, bar_p.plus, "-", n.plus)
    opposite = PairTerm(bar_e.plus, "-", nu.plus, bar_p.minus, "+", n.minus)
    m_same = contract_pair_identities(same, g).evaluate(counter)
    m_opp = contract_pair_identities(opposite, g).evaluate(counter)
    pref = 2 * c.G_F / math.sqrt(2.0)
    return pref * ((c.g_V + c.g_A) * m_same + (c.g_V - c.g_A) * m_opp)


def va_amplitude(nu: ParticleState, n: ParticleState, p: ParticleState, e: ParticleState,
                 c: Couplings, g: GammaSet | None = None,
                 counter: TermCounter | None = None) -> complex:
    """``M`` for nu n -> p e evaluated entirely with two-spinor inner products."""
    g = default_gamma_set() if g is None else g
    counter = TermCounter() if counter is None else counter
    psi = {k: four_spinor_from_state(s) for k, s in zip(LEGS, (nu, n, p, e))}
    return _va_direct(psi, c, g, counter)


def va_amplitude_from_spinors(blocks: dict, c: Couplings, g: GammaSet | None = None,
                              counter: TermCounter | None = None) -> complex:
    """Same engine, fed raw ``{leg: (u_plus, u_minus)}`` block components."""
    g = default_gamma_set() if g is None else g
    counter = TermCounter() if counter is None else counter
    psi = {k: four_spinor_from_blocks(*blocks[k]) for k in LEGS}
    return _va_direct(psi, c, g, counter)


def va_amplitude_reference(nu: ParticleState, n: ParticleState, p: ParticleState,
                           e: ParticleState, c: Couplings, g: GammaSet | None = None) -> complex:
    """Explicit 4x4 evaluation of the V-A matrix element, used as an oracle."""
    g = default_gamma_set() if g is None else g
    psi = {k: four_spinor_from_state(s) for k, s in zip(LEGS, (nu, n, p, e))}
    return va_reference_from_four_spinors(psi, c, g)


def va_reference_from_four_spinors(psi: dict, c: Couplings, g: GammaSet) -> complex:
    bar_e = adjoint(psi["e"]).row
    bar_p = adjoint(psi["p"]).row
    lep = I4 + g.gamma5
    had = c.g_V * I4 + c.g_A * g.gamma5
    total = 0j
    for a in range(4):
        total += (bar_e @ g.gamma[a] @ lep @ psi["nu"].column) * \
                 (bar_p @ g.upper(a) @ had @ psi["n"].column)
    return complex(c.G_F / math.sqrt(2.0) * total)


# --- the worked example -----------------------------------------------------------

def _example_prefactor(state: ParticleState, sign: int) -> float:
    return math.sqrt(state.E + state.m) + sign * state.s * math.sqrt(state.E - state.m)


def worked_example_blocks(nu: ParticleState, n: ParticleState, p: ParticleState,
                          e: ParticleState) -> dict:
    """Leg blocks ``u_{x+-} = (sqrt(E+m) +- s sqrt(E-m))/sqrt(2) |s_k>``.

    The kets use ``theta_p = p.theta`` and ``theta_e = e.theta``; the other
    angles are those of the example and are not read.
    """
    kets = helicity_kets(p.theta, e.theta)
    out = {}
    for leg, state, k in zip(LEGS, (nu, n, p, e), (0, 1, 2, 3)):
        ket = kets[k].c
        out[leg] = tuple(_example_prefactor(state, sg) / math.sqrt(2.0) * ket for sg in (1, -1))
    return out


def _braket(x: TwoSpinor, y: TwoSpinor) -> complex:
    return complex(np.vdot(x.c, y.c))


def worked_example_braket(nu, n, p, e, c: Couplings) -> complex:
    """The bra-ket form of the reduced amplitude with the example kets."""
    s0, s1, s2, s3 = helicity_kets(p.theta, e.theta)
    outer = c.G_F / math.sqrt(2.0) * _example_prefactor(e, 1) * _example_prefactor(nu, 1)
    t_minus = (c.g_V - c.g_A) * _example_prefactor(n, -1) * _example_prefactor(p, -1) \
        * _braket(s3, s1) * _braket(s2, s0)
    t_plus = (c.g_V + c.g_A) * _example_prefactor(n, 1) * _example_prefactor(p, 1) \
        * (_braket(s3, s0) * _braket(s2, s1) - _braket(s3, s1) * _braket(s2, s0))
    return complex(outer * (t_minus + t_plus))


def worked_example_closed_form(nu, n, p, e, c: Couplings, sine_fix: bool = False) -> float:
    """Trigonometric closed form of the worked example.

    The stray factor in front of the first cosine product is dropped. With
    ``sine_fix`` the mixed term ``sin(theta_e/2) cos(theta_p/2)`` of the second
    bracket is replaced by ``sin(theta_e/2) sin(theta_p/2)``, which is what the
    bra-ket form evaluates to.
    """
    he, hp = e.theta / 2, p.theta / 2
    mixed = math.sin(he) * (math.sin(hp) if sine_fix else math.cos(hp))
    outer = c.G_F / math.sqrt(2.0) * _example_prefactor(e, 1) * _example_prefactor(nu, 1)
    t_minus = (c.g_V - c.g_A) * _example_prefactor(n, -1) * _example_prefactor(p, -1) \
        * math.cos(he) * math.cos(hp)
    t_plus = (c.g_V + c.g_A) * _example_prefactor(n, 1) * _example_prefactor(p, 1) \
        * (mixed + math.cos(he) * math.cos(hp))
    return outer * (t_minus - t_plus)


def example_angle_states(nu: ParticleState, n: ParticleState, p: ParticleState,
                       e: ParticleState) -> tuple[ParticleState, ...]:
    """Copies with all azimuths zero and ``theta_nu = theta_n = pi/2``."""
    def place(s: ParticleState, theta: float) -> ParticleState:
        return ParticleState(s.E, s.m, s.s, s.eps, theta, 0.0)

    return (place(nu, math.pi / 2), place(n, math.pi / 2), place(p, p.theta), place(e, e.theta))


# --- work scaling --------------------------------------------------------------------

def random_chain(n: int, rng: np.random.Generator, projector_sign: str | None = "+") -> ChiralChain:
    """``n`` slashed random real four-vectors (no particular mass shell)."""
    return ChiralChain(tuple(FourVector.from_array(rng.normal(size=4)) for _ in range(n)),
                       projector_sign)


def direct_chain_count(n: int, rng: np.random.Generator, g: GammaSet | None = None) -> int:
    """Contractions used by the direct engine on a random chain of ``n`` slots."""
    g = default_gamma_set() if g is None else g
    counter = TermCounter()
    psi_f = FourSpinor.from_column(rng.normal(size=4) + 1j * rng.normal(size=4))
    psi_i = FourSpinor.from_column(rng.normal(size=4) + 1j * rng.normal(size=4))
    chain = random_chain(n, rng, "+" if n else None)
    evaluate_chain(chain, psi_f, psi_i, g, counter)
    return counter.contractions


def term_count_scan(chain_lengths, seed: int = 0) -> list[tuple[int, int, int]]:
    """``(n, direct_count, trace_count)`` for synthetic chains of each length."""
    from .trace import chain_trace_count

    rng = np.random.default_rng(seed)
    rows = []
    for n in chain_lengths:
        n = int(n)
        if n < 0:
            raise ValueError("chain length must be non-negative")
        direct = direct_chain_count(n, rng)
        vectors = [FourVector.from_array(rng.normal(size=4)) for _ in range(n)]
        rows.append((n, direct, chain_trace_count(vectors, rng)))
    return rows


def growth_exponent(ns, counts) -> float:
    """Slope of the least-squares line through ``(log n, log count)``."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


__all__ = [
    "TermCounter", "ChiralBlock", "ChiralChain", "RoutedTerm", "PairTerm", "ContractedTerm",
    "slot_matrix", "slot_block", "mass_shell_residual", "chain_matrix", "chirality_split",
    "evaluate_chain", "contract_pair_identities", "ParticleState", "Couplings",
    "plane_wave_spinor", "four_spinor_from_blocks", "four_spinor_from_state", "helicity_kets",
    "LEGS", "va_amplitude", "va_amplitude_from_spinors", "va_amplitude_reference",
    "va_reference_from_four_spinors", "worked_example_blocks", "worked_example_braket",
    "worked_example_closed_form", "example_angle_states", "random_chain", "direct_chain_count",
    "term_count_scan", "growth_exponent",
]
