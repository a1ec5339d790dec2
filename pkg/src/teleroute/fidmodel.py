"""Closed-form fidelity laws for teleportation paths and link weights.

Every supported channel is X-shaped, and a hop multiplies two scalars:

    mu = a11 - a22 - a33 + a44      (population balance)
    nu = 2 Re a14 + 2 Re a23       (coherence)

so an L-hop path delivers average equatorial fidelity

    F = (2 + prod(mu_i) + prod(nu_i)) / 4.

Pure chains reduce to F = (3 + prod(sin 2 theta_i)) / 4. When every link
on a path has empty inner levels (a22 = a33 = 0) the objective collapses
to a product of negativities and -ln N becomes an additive weight, which
is what lets a shortest-path search find the best route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NotAdditiveError
from .qcore import ChannelState, PureSchmidtChannel, WernerGenChannel, as_x_state, negativity

ADDITIVE_TOL = 1e-12


@dataclass(frozen=True)
class LinkWeights:
    """Per-link scalars; log_neg_weight is None when the link does not
    qualify for the additive single-weight model."""

    mu: float
    nu: float
    log_neg_weight: float | None = None


@dataclass(frozen=True)
class PathObjective:
    """Accumulated products along a path, with the fidelity they imply."""

    mu_product: float
    nu_product: float

    @property
    def fidelity(self) -> float:
        return (2.0 + self.mu_product + self.nu_product) / 4.0


def link_weights(channel: ChannelState) -> LinkWeights:
    """Compute mu, nu and (when admissible) the additive -ln N weight."""
    x = as_x_state(channel)
    mu = x.a11 - x.a22 - x.a33 + x.a44
    nu = 2.0 * x.a14.real + 2.0 * x.a23.real
    weight = None
    if x.a22 <= ADDITIVE_TOL and x.a33 <= ADDITIVE_TOL:
        n = negativity(x)
        if n > 0.0:
            weight = -math.log(n)
    return LinkWeights(mu=mu, nu=nu, log_neg_weight=weight)


def additive_weight(channel: ChannelState, link_id: str = "<channel>") -> float:
    """The -ln N weight of a link, for links with empty inner levels.

    Raises NotAdditiveError when a22/a33 are populated or the channel is
    separable, since then -ln N either is not defined or does not add up
    to the true path objective.
    """
    x = as_x_state(channel)
    if x.a22 > ADDITIVE_TOL or x.a33 > ADDITIVE_TOL:
        raise NotAdditiveError(link_id, f"inner populations a22={x.a22}, a33={x.a33} exceed {ADDITIVE_TOL}")
    n = negativity(x)
    if n <= 0.0:
        raise NotAdditiveError(link_id, "channel is separable (negativity 0)")
    return -math.log(n)


def path_objective(channels) -> PathObjective:
    """Fold link weights along a chain into a PathObjective."""
    channels = list(channels)
    if not channels:
        raise DomainError("path must contain at least one channel")
    mu_product = 1.0
    nu_product = 1.0
    for channel in channels:
        w = link_weights(channel)
        mu_product *= w.mu
        nu_product *= w.nu
    return PathObjective(mu_product=mu_product, nu_product=nu_product)


def xstate_path_fidelity(channels) -> float:
    """Average equatorial fidelity of a chain of X-shaped channels."""
    return path_objective(channels).fidelity


def pure_path_fidelity(channels) -> float:
    """Average equatorial fidelity of a chain of pure Schmidt channels."""
    channels = list(channels)
    if not channels:
        raise DomainError("path must contain at least one channel")
    product = 1.0
    for channel in channels:
        if not isinstance(channel, PureSchmidtChannel):
            raise DomainError(f"expected a pure channel, got {type(channel).__name__}")
        product *= math.sin(2.0 * channel.theta)
    return (3.0 + product) / 4.0


def werner_path_fidelity(channels) -> float:
    """Average equatorial fidelity of a chain of Werner-type channels.

    Reads only the mixing weight p_w and Schmidt angle of each hop:
    F = (2 + prod(p_i) + prod(p_i sin 2 theta_i)) / 4.
    """
    channels = list(channels)
    if not channels:
        raise DomainError("path must contain at least one channel")
    p_product = 1.0
    coh_product = 1.0
    for channel in channels:
        if not isinstance(channel, WernerGenChannel):
            raise DomainError(f"expected a Werner-type channel, got {type(channel).__name__}")
        p_product *= channel.p_w
        coh_product *= channel.p_w * math.sin(2.0 * channel.theta)
    return (2.0 + p_product + coh_product) / 4.0
