#!/usr/bin/env python3
"""Order of accuracy of the wave-function oracle and of hydro-vs-oracle agreement.

Halves dt three times for a free Gaussian, compares against a fine reference and
prints the error ratios (second-order schemes give ~4 per halving).
"""

import sys

import numpy as np

from qgauss.constraint import ForceModel
from qgauss.fields import make_grid
from qgauss.hydro import run_hydro, stability_limit
from qgauss.madelung import PhysParams, to_hydro
from qgauss.oracle import run_wave
from qgauss.states import gaussian_packet, polynomial_potential

T_END = 1.0
HALVINGS = 3


def _l2(a: np.ndarray, b: np.ndarray, dx: float) -> float:
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) * dx))


def study(n: int = 256) -> bool:
    print(f"Convergence study on n={n}, t_end={T_END}")

    try:
        grid = make_grid(n, -20.0, 40.0)
        p = PhysParams()
        V, dV = polynomial_potential(grid, [0.0, 0.0, 0.05])
        psi0 = gaussian_packet(grid, 1.0, x0=1.0, k0=0.5)

        base = 0.02
        reference = run_wave(psi0, V, p, T_END, base / 2 ** (HALVINGS + 3))
        for method in ("splitstep", "crank_nicolson"):
            errors = []
            for level in range(HALVINGS + 1):
                dt = base / 2**level
                traj = run_wave(psi0, V, p, T_END, dt, method=method)
                errors.append(
                    _l2(traj.psis[-1].values, reference.psis[-1].values, grid.dx)
                )
            ratios = [a / b for a, b in zip(errors, errors[1:])]
            print(f"  {method}:")
            for level, error in enumerate(errors):
                print(f"    dt={base / 2**level:.5f}  error={error:.3e}")
            print(f"    ratios: {', '.join(f'{r:.2f}' for r in ratios)}")

        force = ForceModel(V=V, dV=dV)
        limit = stability_limit(grid, p)
        print("  hydro vs split-step oracle:")
        for level in range(HALVINGS):
            dt = limit / 2**level
            hydro = run_hydro(to_hydro(psi0, p), force, p, T_END, dt)
            wave = run_wave(psi0, V, p, T_END, dt)
            rho_wave = wave.psis[-1].density().values
            gap = _l2(hydro.states[-1].rho.values, rho_wave, grid.dx)
            print(f"    dt={dt:.3e}  L2(rho_hydro - rho_wave)={gap:.3e}")

        return True

    except Exception as e:
        print(f"Convergence study failed: {e}")
        import traceback

        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = study()
    sys.exit(0 if success else 1)
