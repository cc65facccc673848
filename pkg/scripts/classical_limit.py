#!/usr/bin/env python3
"""Sweep hbar for a narrow packet in a damped, slightly anharmonic well.

Runs the built-in classical_limit scenario, writes its outputs and prints the
sup deviation of <x> from the damped classical ODE for every hbar.
"""

import sys
from pathlib import Path

from qgauss.config import config
from qgauss.scenarios import builtin, run_scenario, write_outputs


def sweep(out_dir: Path) -> bool:
    print("Running classical-limit sweep...")

    try:
        report = run_scenario(builtin("classical_limit"))
        write_outputs(report, out_dir)
        if report.error is not None:
            print(f"Solver error: {report.error.type}: {report.error.message}")
            return False

        for hbar, deviation in report.families["deviation"].rows:
            print(f"  hbar={hbar:.4f}  sup|<x> - x_classical|={deviation:.3e}")
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            bound = f"{check.value:.3e} vs {check.threshold:g}"
            print(f"  {check.name}: {status} ({bound})")
        print(f"Outputs in {out_dir / report.name}")
        return report.passed

    except Exception as e:
        print(f"Sweep failed: {e}")
        import traceback

        traceback.print_exc()
        return False


if __name__ == "__main__":
    success = sweep(config.out_dir)
    sys.exit(0 if success else 1)
