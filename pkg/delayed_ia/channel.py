"""
Channel ensembles for one transmission frame.

Holds the N x M channel matrix of every (phase, round, slot, receiver,
transmitter). Time-varying ensembles draw i.i.d. CN(0, 1) entries for every
slot; constant ensembles draw one matrix per link and repeat it. Asymmetric
complex signaling (ACS) lifts a complex ensemble to the real domain.
"""

import dataclasses
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .model import ChannelMode, Dims, FrameLayout, LayoutError, SchemeParams

logger = logging.getLogger(__name__)


class AlreadyLiftedError(Exception):
    """Exception raised when lifting an ensemble or parameter set twice."""
    pass


@dataclass(frozen=True, eq=False)
class ChannelEnsemble:
    """
    Channel realizations for a whole frame.

    blocks[(p, r)] has shape (S_p, users, users, rx_dim, tx_dim) and is
    indexed [slot, receiver, transmitter].
    """
    dims: Dims
    layout: FrameLayout
    mode: ChannelMode
    blocks: dict[tuple[int, int], np.ndarray]
    seed: Optional[int] = None
    source_mode: Optional[ChannelMode] = None  # mode before ACS lifting

    @property
    def is_real(self) -> bool:
        """True for real-valued (lifted) ensembles."""
        first = next(iter(self.blocks.values()))
        return not np.iscomplexobj(first)

    @property
    def users(self) -> int:
        """Users of one simulated scheme instance."""
        return self.layout.users

    @property
    def rx_dim(self) -> int:
        """Rows of a per-slot channel matrix (N, or 2N once lifted)."""
        return int(next(iter(self.blocks.values())).shape[-2])

    @property
    def tx_dim(self) -> int:
        """Columns of a per-slot channel matrix (M, or 2M once lifted)."""
        return int(next(iter(self.blocks.values())).shape[-1])

    def slot_matrix(self, p: int, r: int, s: int, j: int, i: int) -> np.ndarray:
        """Channel from transmitter i to receiver j in one slot."""
        self.layout.check_round(p, r)
        _check_link(self.users, j, i)
        if not 0 <= s < self.layout.slots[p]:
            raise LayoutError(f"slot {s} outside phase {p + 1} of {self.layout.slots[p]} slots")
        return self.blocks[(p, r)][s, j, i]


def _check_link(users: int, j: int, i: int) -> None:
    if not (0 <= j < users and 0 <= i < users):
        raise LayoutError(f"link ({j}, {i}) outside users 0..{users - 1}")


def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Draw i.i.d. circularly-symmetric CN(0, 1) entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def generate_ensemble(dims: Dims, layout: FrameLayout, mode: ChannelMode,
                      seed: int) -> ChannelEnsemble:
    """
    Draw a channel ensemble for one frame.

    Args:
        dims: Antenna setting; matrices are N x M
        layout: Frame layout of the scheme being simulated
        mode: TIME_VARYING draws every slot independently, CONSTANT draws one
            matrix per link, ACS_REAL draws a constant ensemble and lifts it
        seed: Seed of the channel generator

    Returns:
        ChannelEnsemble covering every round of the layout
    """
    rng = np.random.default_rng(seed)
    users, N, M = layout.users, dims.N, dims.M
    blocks: dict[tuple[int, int], np.ndarray] = {}

    if mode is ChannelMode.TIME_VARYING:
        for p, r, _ in layout.rounds():
            blocks[(p, r)] = complex_gaussian(rng, (layout.slots[p], users, users, N, M))
    else:
        per_link = complex_gaussian(rng, (users, users, N, M))
        for p, r, _ in layout.rounds():
            blocks[(p, r)] = np.repeat(per_link[np.newaxis], layout.slots[p], axis=0)

    ensemble = ChannelEnsemble(dims=dims, layout=layout,
                               mode=ChannelMode.CONSTANT if mode is ChannelMode.ACS_REAL else mode,
                               blocks=blocks, seed=seed)
    logger.debug("generated %s ensemble for %s, tau=%d, seed=%d",
                 mode.value, dims, layout.tau, seed)
    if mode is ChannelMode.ACS_REAL:
        return acs_lift(ensemble)
    return ensemble


def round_channel(ens: ChannelEnsemble, p: int, r: int, j: int, i: int) -> np.ndarray:
    """
    Space-time channel of one round, block-diagonal over its slots.

    Returns:
        (S_p * rx_dim) x (S_p * tx_dim) matrix from transmitter i to receiver j
    """
    ens.layout.check_round(p, r)
    _check_link(ens.users, j, i)
    return scipy.linalg.block_diag(*ens.blocks[(p, r)][:, j, i])


def _lift(h: np.ndarray) -> np.ndarray:
    """Replace every complex entry h by [[Re h, -Im h], [Im h, Re h]]."""
    rows, cols = h.shape[-2], h.shape[-1]
    out = np.empty(h.shape[:-2] + (2 * rows, 2 * cols))
    out[..., 0::2, 0::2] = h.real
    out[..., 0::2, 1::2] = -h.imag
    out[..., 1::2, 0::2] = h.imag
    out[..., 1::2, 1::2] = h.real
    return out


def acs_lift(ens: ChannelEnsemble) -> ChannelEnsemble:
    """
    Lift a complex ensemble to the real domain.

    Raises:
        AlreadyLiftedError: If the ensemble is already real
    """
    if ens.mode is ChannelMode.ACS_REAL or ens.is_real:
        raise AlreadyLiftedError("channel ensemble is already real-valued")
    blocks = {key: _lift(value) for key, value in ens.blocks.items()}
    return dataclasses.replace(ens, mode=ChannelMode.ACS_REAL, blocks=blocks,
                               source_mode=ens.mode)


def realstack(x: np.ndarray) -> np.ndarray:
    """Interleave real and imaginary parts along the last axis."""
    x = np.asarray(x)
    out = np.empty(x.shape[:-1] + (2 * x.shape[-1],))
    out[..., 0::2] = x.real
    out[..., 1::2] = x.imag
    return out


def lift_params(params: SchemeParams) -> SchemeParams:
    """
    Parameters of the same scheme over the lifted real channel.

    Antenna counts and symbols per user double; slots and DoF are unchanged.

    Raises:
        AlreadyLiftedError: If params are already lifted
    """
    if params.lifted:
        raise AlreadyLiftedError("scheme parameters are already lifted")
    dims = Dims(K=params.dims.K, M=2 * params.dims.M, N=2 * params.dims.N)
    return dataclasses.replace(params, dims=dims, b=2 * params.b, lifted=True)
