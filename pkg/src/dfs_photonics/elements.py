"""Optical elements as mode unitaries.

Single-port elements are 4x4 matrices ``P (x) T`` with the polarization factor
``P`` on {H, V} and the transverse factor ``T`` on {h, v}.  Waveplate angles are
measured so that a HWP at ``phi/2`` followed by a HWP at 0 is
``polarization_rotation(phi)``; see the conventions table in the README.
"""

from __future__ import annotations

import numpy as np

from .fock import ModeUnitary, Pol, Tr

_I2 = np.eye(2, dtype=np.complex128)
_X2 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_HAD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def rotation2(theta: float) -> np.ndarray:
    """SO(2) basis rotation: first -> cos|first> + sin|second>."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def retarder2(alpha: float, retardance: float) -> np.ndarray:
    """Linear retarder with its fast axis at ``alpha`` (waveplate sign convention)."""
    r = rotation2(-alpha)
    return r @ np.diag([1.0, np.exp(1j * retardance)]) @ r.T


def _pol(m, label):
    return ModeUnitary(np.kron(m, _I2), label)


def _tr(m, label):
    return ModeUnitary(np.kron(_I2, m), label)


def polarization_rotation(phi: float) -> ModeUnitary:
    """|H> -> cos(phi)|H> + sin(phi)|V>, |V> -> -sin(phi)|H> + cos(phi)|V>."""
    return _pol(rotation2(phi), f"Ry_p({2 * phi:.6g})")


def half_wave_plate(alpha: float) -> ModeUnitary:
    # real reflection, no global phase
    return _pol(retarder2(alpha, np.pi), f"HWP({alpha:.6g})")


def quarter_wave_plate(alpha: float) -> ModeUnitary:
    return _pol(retarder2(alpha, np.pi / 2), f"QWP({alpha:.6g})")


def polarization_hadamard() -> ModeUnitary:
    """|H> -> (|H>+|V>)/sqrt2, |V> -> (|H>-|V>)/sqrt2; a HWP at -pi/8."""
    return _pol(retarder2(-np.pi / 8, np.pi), "h_p")


def dove_prism(alpha: float) -> ModeUnitary:
    """Transverse-mode analog of ``half_wave_plate``: mirror about axis 2*alpha."""
    return _tr(retarder2(alpha, np.pi), f"Dove({alpha:.6g})")


def mode_converter_hadamard() -> ModeUnitary:
    """|h> -> (|h>+|v>)/sqrt2, |v> -> (|h>-|v>)/sqrt2."""
    return _tr(_HAD, "h_s")


def spatial_rotation(phi: float) -> ModeUnitary:
    return _tr(rotation2(phi), f"Ry_s({2 * phi:.6g})")


def rx_spatial(theta: float) -> ModeUnitary:
    """exp(-i theta/2 sigma_x) on the transverse qubit."""
    m = np.cos(theta / 2) * _I2 - 1j * np.sin(theta / 2) * _X2
    return _tr(m, f"Rx_s({theta:.6g})")


def _controlled_flip(control_is_pol: bool, active: int) -> np.ndarray:
    perm = np.zeros((4, 4), dtype=np.complex128)
    for pol in (0, 1):
        for tr in (0, 1):
            p, t = pol, tr
            if control_is_pol and pol == active:
                t = 1 - tr
            elif not control_is_pol and tr == active:
                p = 1 - pol
            perm[2 * p + t, 2 * pol + tr] = 1.0
    return perm


def cnot_pol_target(active: str | Tr = Tr.h) -> ModeUnitary:
    """Flip polarization when the transverse mode is ``active``."""
    level = Tr[active] if isinstance(active, str) else Tr(active)
    return ModeUnitary(_controlled_flip(False, int(level)), f"c{level.name}X_p")


def cnot_spatial_target(active: str | Pol = Pol.V) -> ModeUnitary:
    """Flip the transverse mode when the polarization is ``active``."""
    level = Pol[active] if isinstance(active, str) else Pol(active)
    return ModeUnitary(_controlled_flip(True, int(level)), f"c{level.name}X_s")


def port_rotation(theta: float) -> ModeUnitary:
    """Frame rotation by ``theta`` about the propagation axis, one port."""
    r = rotation2(theta)
    return ModeUnitary(np.kron(r, r), f"rot({theta:.6g})")


def collective_rotation(theta: float) -> ModeUnitary:
    """Same rotation on polarization and transverse mode of both ports."""
    return port_rotation(theta).both_ports()


def beam_splitter() -> ModeUnitary:
    """Balanced coupler between ports with an extra pi on reflected h modes.

    Each (port-1, port-2) pair of equally labeled modes is mixed by the real
    rotation ``[[c, sg*s], [-sg*s, c]]`` at angle pi/4, with ``sg = +1`` for v
    modes and ``-1`` for h modes.  This is the ``cos I + i sin swap`` coupler
    with the port-2 phase reference shifted by i.
    """
    m = np.zeros((8, 8), dtype=np.complex128)
    c = np.cos(np.pi / 4)
    for k in range(4):
        sg = 1.0 if k % 2 == Tr.v else -1.0
        s = sg * np.sin(np.pi / 4)
        a, b = k, 4 + k
        m[a, a] = m[b, b] = c
        m[a, b] = s
        m[b, a] = -s
    return ModeUnitary(m, "BS")
