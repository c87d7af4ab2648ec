"""Published 2N=4 root sets and energies (4 decimals) for the two Hermitian regimes.

Each row: (w1..w4, z1..z3, Lambda0^2, E_n, n).  W0 = 1 for every row.
"""
from __future__ import annotations

from .bae import RootSet
from .chain import ModelParams

_R = 1.5708j

TABLE_REAL_A = {
    "params": (2, 0.2, 0.6j),
    "rows": [
        ((-1.2826, -0.2473, 0.2473, 1.2826), (-0.3477, 0.0, 0.3477), -399.7321, -5.2630, 1),
        ((-1.0902, -0.0812, 0.5857 - 0.9540j, 0.5857 + 0.9540j), (-0.2913, 0.0728, 1.8173), -10.8865, -2.9735, 2),
        ((-0.5857 - 0.9540j, -0.5857 + 0.9540j, 0.0812, 1.0902), (-1.8173, -0.0728, 0.2913), -10.8865, -2.9735, 3),
        ((-0.7051, -1.0960j, 1.0960j, 0.7051), (-0.2105, -_R, 0.2105), 105.6802, -2.7257, 4),
        ((-0.3577 - 0.8792j, -0.3577 + 0.8792j, 0.3577 - 0.8792j, 0.3577 + 0.8792j),
         (-0.8076 - _R, 0.0, 0.8076 - _R), -5.9241, 0.9387, 5),
        ((-0.8868, 0.1556 - 0.8924j, 0.1556 + 0.8924j, 0.5756), (-0.2332, 0.1899 - 0.6221j, 0.1899 + 0.6221j),
         -127.8985, 2.9735, 6),
        ((-0.5756, -0.1556 - 0.8924j, -0.1556 + 0.8924j, 0.8868), (-0.1899 - 0.6221j, -0.1899 + 0.6221j, 0.2332),
         -127.8983, 2.9735, 7),
        ((-0.1910 - 0.8162j, -0.1910 + 0.8162j, 0.1910 - 0.8162j, 0.1910 + 0.8162j), (-_R, -0.6474j, 0.6474j),
         22.4078, 7.0500, 8),
    ],
}

TABLE_IMAG_A = {
    "params": (2, 0.2j, 0.6),
    "rows": [
        ((-1.6145 - _R, -0.2869j, 0.2869j, 1.6145 + _R), (-0.3690j, 0.0, 0.3690j), 308.1505, -4.6408, 1),
        ((-1.3531 + 0.6671j, -1.2799j, -0.0542j, 1.3531 + 0.6671j), (-0.2868j, 0.0800j, 0.7901j), 140.6619, -3.3343, 2),
        ((-1.3531 - 0.6671j, 0.0542j, 1.2799j, 1.3531 - 0.6671j), (-0.7901j, -0.0800j, 0.2868j), 140.6615, -3.3343, 3),
        ((-1.4230, -0.5427j, 0.5427j, 1.4230), (-_R, -0.1996j, 0.1996j), 79.2054, -3.1881, 4),
        ((-0.8913 - 0.3487j, -0.8913 + 0.3487j, 0.8913 - 0.3487j, 0.8913 + 0.3487j),
         (-0.9699 - _R, 0.0, 0.9699 - _R), 2.6434, 0.9566, 5),
        ((-0.8929 - 0.1418j, -0.2682 - 1.4290j, 0.2682 + 1.7126j, 0.8929 - 0.1418j),
         (-0.6190 - 0.2120j, 0.2360j, 0.6190 - 0.2120j), 59.4799, 3.3343, 6),
        ((-0.8929 + 0.1418j, -0.2682 - 1.7126j, 0.2682 + 1.4290j, 0.8929 + 0.1418j),
         (-0.6190 + 0.2120j, -0.2360j, 0.6190 + 0.2120j), 59.4799, 3.3343, 7),
        ((-0.8693 - 0.2039j, -0.8693 + 0.2039j, 0.8693 - 0.2039j, 0.8693 + 0.2039j), (-0.6253, -_R, 0.6253),
         10.2842, 6.8723, 8),
    ],
}

TABLES = {"real-a": TABLE_REAL_A, "imag-a": TABLE_IMAG_A}


def table_params(name: str) -> ModelParams:
    n, a, eta = TABLES[name]["params"]
    return ModelParams(n, a, eta)


def table_rootsets(name: str):
    """[(RootSet, energy, level)] for every row of the named table."""
    out = []
    for w, z, l2, e, n in TABLES[name]["rows"]:
        out.append((RootSet(z, w, l2, 1.0, source="table"), e, n))
    return out


def table_energies(name: str):
    return [row[3] for row in TABLES[name]["rows"]]
