"""Angular channel algebra for the two singular radial models.

A "channel" is one angular sector of the separated radial problem. For the
monopole Pauli Hamiltonian the sectors are labeled by (j, m) plus the
eigenvalue kappa of the spin-orbit style operator, with

    kappa = +- sqrt((j + 1/2)^2 - (e g)^2),      nu = |kappa + 1/2|,

and the radial coupling kappa (kappa + 1). For the attractive 1/r^2 model
with strength c the sectors are (l, m) with

    nu^2 = 1/4 + l(l+1) - c.

A channel is singular, i.e. admits both small-r behaviors r^(-1/2 +- nu) as
normalizable solutions, exactly when nu^2 < 1 (equivalently when the radial
coupling is below 3/4). Channels with nu^2 <= 0 are overcritical: no real
order exists and nu itself is undefined for them, though they still count as
singular for enumeration purposes.

Everything here is exact quantum-number arithmetic; no special functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_TOL = 1e-12
_INTEGER_TOL = 1e-9

_MODELS = ("monopole", "inverse_square")


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters shared by every stage of the analysis.

    model            "monopole" or "inverse_square".
    eg               monopole coupling product (electric charge times magnetic
                     charge); Dirac quantization requires 2*eg to be a
                     positive integer. Ignored by the inverse-square model.
    c                strength of the attractive 1/r^2 term (inverse-square
                     model only).
    mu               particle mass; sets the energy and length units.
    deficiency_scale the wavenumber s of the deficiency vectors, which solve
                     H phi = +- i (s^2/mu) phi. The choice is arbitrary; it
                     defaults to mu, making the eigenvalue +- i mu.
    """

    model: str = "monopole"
    eg: float = 0.5
    c: float = 0.0
    mu: float = 1.0
    deficiency_scale: float = field(default=0.0)

    def __post_init__(self):
        if self.model not in _MODELS:
            raise ValueError(f"model must be one of {_MODELS}, got {self.model!r}")
        if not self.mu > 0.0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if self.deficiency_scale == 0.0:
            object.__setattr__(self, "deficiency_scale", self.mu)
        if not self.deficiency_scale > 0.0:
            raise ValueError(f"deficiency_scale must be positive, got {self.deficiency_scale}")
        if self.model == "monopole":
            two_eg = 2.0 * self.eg
            if not (two_eg >= 1.0 - _INTEGER_TOL and abs(two_eg - round(two_eg)) < _INTEGER_TOL):
                raise ValueError(f"monopole model requires 2*eg a positive integer, got eg = {self.eg}")


@dataclass(frozen=True)
class ChannelSpec:
    """One angular sector.

    Monopole channels carry (j, m, kappa); inverse-square channels carry
    (l, m). nu_sq is always real; the order nu = sqrt(nu_sq) exists only for
    subcritical channels and is exposed as a property that raises otherwise.
    """

    m: float
    nu_sq: float
    j: float | None = None
    kappa: float | None = None
    l: int | None = None

    def __post_init__(self):
        if (self.j is None) == (self.l is None):
            raise ValueError("exactly one of j (monopole) or l (inverse_square) must be set")
        if self.kappa is not None:
            expected = (self.kappa + 0.5) ** 2
            if abs(self.nu_sq - expected) > _TOL:
                raise ValueError(f"nu_sq = {self.nu_sq} inconsistent with kappa = {self.kappa}")

    @property
    def nu(self) -> float:
        """Bessel order of the channel; defined only for nu_sq > 0."""
        if self.nu_sq <= 0.0:
            raise ValueError(f"overcritical channel (nu_sq = {self.nu_sq}) has no real order")
        return math.sqrt(self.nu_sq)

    @property
    def singular(self) -> bool:
        return self.nu_sq < 1.0

    @property
    def coupling(self) -> float:
        """Coefficient of the 1/(2 mu r^2) radial potential term.

        Equals kappa (kappa + 1) for monopole channels and l(l+1) - c for
        inverse-square channels; both are nu_sq - 1/4.
        """
        return self.nu_sq - 0.25


def kappa_of(j: float, eg: float) -> tuple[float, float]:
    """Both roots kappa = +- sqrt((j + 1/2)^2 - (e g)^2).

    At the bottom sector j = eg - 1/2 the roots coincide at zero (and the
    enumeration emits a single channel for it).
    """
    steps = j - (eg - 0.5)
    if steps < -_INTEGER_TOL or abs(steps - round(steps)) > _INTEGER_TOL:
        raise ValueError(f"j = {j} is not in the ladder eg - 1/2, eg + 1/2, ... for eg = {eg}")
    disc = (j + 0.5) ** 2 - eg * eg
    if disc < -_TOL:
        raise ValueError(f"(j + 1/2)^2 < (eg)^2 for j = {j}, eg = {eg}")
    root = math.sqrt(max(disc, 0.0))
    return (-root, root)


def l_crit(c: float) -> float:
    """Critical angular momentum below which inverse-square channels are singular.

    The nonnegative root of l(l+1) - c = 3/4, i.e. -1/2 + sqrt(1 + c),
    clamped at zero. For 1 + c < 0 (strongly repulsive) every channel is
    regular and the clamp applies as well.
    """
    if 1.0 + c < 0.0:
        return 0.0
    return max(0.0, -0.5 + math.sqrt(1.0 + c))


def nu_of(*, kappa: float | None = None, l: int | None = None, c: float = 0.0) -> float:
    """Bessel order of a channel from its quantum numbers.

    Monopole: nu = |kappa + 1/2|. Inverse-square: nu = sqrt(1/4 + l(l+1) - c),
    defined only below the critical strength. Integer orders are rejected,
    mirroring the special-function policy.
    """
    if (kappa is None) == (l is None):
        raise ValueError("pass exactly one of kappa= (monopole) or l= (inverse_square)")
    if kappa is not None:
        nu = abs(kappa + 0.5)
    else:
        nu_sq = 0.25 + l * (l + 1) - c
        if nu_sq <= 0.0:
            raise ValueError(f"overcritical channel: nu^2 = {nu_sq} <= 0 for l = {l}, c = {c}")
        nu = math.sqrt(nu_sq)
    if abs(nu - round(nu)) < _INTEGER_TOL:
        raise ValueError(f"integer order nu = {nu} is unsupported")
    return nu


def singular_channels(params: ModelParams, cutoff: float) -> list[ChannelSpec]:
    """Ordered list of singular channels up to the angular cutoff.

    Monopole ordering: ascending j, then ascending kappa, then ascending m.
    For eg = 1/2 this yields the canonical four channels
    (j=0, kappa=0, m=0), (j=1, kappa=-sqrt(2), m=-1, 0, +1).
    Inverse-square ordering: (l, m) lexicographic over l < l_crit(c).

    The cutoff must clear the largest singular sector; that is checked so a
    too-small cutoff cannot silently truncate the set.
    """
    out: list[ChannelSpec] = []
    if params.model == "monopole":
        # singular kappa lie in (-3/2, 1/2), so j stays below -1/2 + sqrt(9/4 + eg^2)
        j_bound = -0.5 + math.sqrt(2.25 + params.eg**2)
        j_last = params.eg - 0.5
        while j_last + 1.0 < j_bound - _TOL:
            j_last += 1.0
        if cutoff < j_last - _TOL:
            raise ValueError(f"cutoff {cutoff} excludes the singular sector at j = {j_last}")
        j = params.eg - 0.5
        while j <= j_last + _TOL:
            roots = kappa_of(j, params.eg)
            kappas = (0.0,) if abs(roots[1]) < _TOL else roots
            for kappa in kappas:
                nu_sq = (kappa + 0.5) ** 2
                if nu_sq < 1.0:
                    for k in range(int(round(2 * j)) + 1):
                        out.append(ChannelSpec(m=-j + k, nu_sq=nu_sq, j=j, kappa=kappa))
            j += 1.0
    else:
        l_top = int(math.ceil(l_crit(params.c) - _TOL))  # singular l are 0 .. l_top - 1
        if l_top > 0 and cutoff < l_top - 1 - _TOL:
            raise ValueError(f"cutoff {cutoff} excludes the singular sector at l = {l_top - 1}")
        for l in range(l_top):
            nu_sq = 0.25 + l * (l + 1) - params.c
            for m in range(-l, l + 1):
                out.append(ChannelSpec(m=float(m), nu_sq=nu_sq, l=l))
    return out
