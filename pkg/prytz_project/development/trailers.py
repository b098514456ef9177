# development/trailers.py
"""
Chains of rods ("trailers") pulled by the tracer.

Joint 0 is the tracer; joint i = joint i−1 + l[i](cos θ[i], sin θ[i]) and
each rod obeys the planimeter constraint with joint i−1 as its tracer. All
angles are integrated together in one RK4 state.
"""
from dataclasses import dataclass
import logging

import numpy as np

from planimeter.lift import DEFAULT_STEPS, check_lift_args, integrate_chain, tracer_drive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrailerChain:
    lengths: tuple
    angles: tuple

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(float(l) for l in self.lengths))
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if len(self.lengths) != len(self.angles):
            raise ValueError("a chain needs one angle per rod")

    def __len__(self):
        return len(self.lengths)

    def joints(self, origin, angles=None):
        """Joint positions for the tracer at `origin`, shape (n + 1, 2)."""
        angles = np.asarray(self.angles if angles is None else angles, dtype=float)
        rods = np.asarray(self.lengths)[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        return np.concatenate([np.asarray(origin, dtype=float)[None, :], origin + np.cumsum(rods, axis=0)])


def chain_header(n):
    columns = ["t", "u0x", "u0y"]
    for i in range(1, n + 1):
        columns += [f"theta{i}", f"u{i}x", f"u{i}y"]
    return ",".join(columns)


@dataclass(frozen=True, eq=False)
class ChainPath:
    t: np.ndarray
    joints: np.ndarray
    thetas: np.ndarray
    chain: TrailerChain

    def joint(self, i):
        """Path of joint i, shape (len(t), 2)."""
        return self.joints[:, i, :]

    def to_rows(self):
        """Columns t, u0x, u0y, theta1, u1x, u1y, ..., thetan, unx, uny."""
        columns = [self.t[:, None], self.joints[:, 0, :]]
        for i in range(len(self.chain)):
            columns += [self.thetas[:, i:i + 1], self.joints[:, i + 1, :]]
        return np.hstack(columns)


def chain_lift(curve, chain, steps=DEFAULT_STEPS):
    """Joint paths of the chain while joint 0 follows `curve`."""
    check_lift_args(chain.lengths, steps)
    t, position, drive = tracer_drive(curve, steps)
    thetas = integrate_chain(t, drive, chain.angles, chain.lengths)
    logger.debug("chain of %d rods along %s: %d nodes", len(chain), curve.kind, len(t))

    joints = np.empty((len(t), len(chain) + 1, 2))
    joints[:, 0, :] = position
    for i, l in enumerate(chain.lengths):
        rod = l * np.stack([np.cos(thetas[:, i]), np.sin(thetas[:, i])], axis=-1)
        joints[:, i + 1, :] = joints[:, i, :] + rod
    return ChainPath(t=t, joints=joints, thetas=thetas, chain=chain)
