#!/usr/bin/env python3
"""
Main entry point for nullcurve-toolkit.

Demonstrates the core workflow: synthesize a null curve from a generator,
compare its torsion with the Schwarzian of the generator, and run the
catalog verification.
"""

import sys
from pathlib import Path

import numpy as np

from src.catalog import verify_all
from src.frenet import frame_at, torsion_along, torsion_schwarzian
from src.generator import Exp, make_generator
from src.minkowski import Vec3
from src.serialization import render_report_table
from src.synthesis import CurveSpec, synthesize
from src.utils.error_handling import NullCurveError
from src.utils.logging import setup_logger


def main() -> int:
    """Run the demonstration; returns the exit status."""
    log_file = Path("logs/nullcurve.log")
    logger = setup_logger("nullcurve", level="INFO", log_file=log_file)

    logger.info("Starting null curve demonstration")
    logger.info("=" * 50)

    try:
        gen = make_generator(Exp(c=1.5))
        logger.info(f"Generator {gen.label} on {gen.domain}")

        grid = [float(s) for s in np.linspace(-1.0, 1.0, 41)]
        curve = synthesize(CurveSpec(gen, 1, 0.0, Vec3(0.0, 1.0 / 2.25, 0.0)), grid)
        logger.info(f"Synthesized {len(curve)} samples")

        params, torsions = torsion_along(curve)
        expected = np.array([torsion_schwarzian(gen, s) for s in params])
        logger.info(
            f"Torsion from positions vs Schwarzian: max deviation "
            f"{np.max(np.abs(torsions - expected)):.3e} (exact value {expected[0]:g})"
        )

        frame = frame_at(gen, 1, 0.0)
        logger.info(
            f"Frame at s=0: Gram residual {frame.gram_residual():.2e}, "
            f"det {frame.determinant():+.12f}"
        )

        logger.info("Verifying the catalog...")
        reports = verify_all()
        print(render_report_table(reports), end="")

    except NullCurveError as e:
        logger.error(f"Error during demonstration: {e}")
        logger.exception("Full error details:")
        return 2

    if not all(r.passed() for r in reports):
        logger.error("Catalog verification failed")
        return 1
    logger.info("Null curve demonstration completed successfully!")
    return 0


if __name__ == "__main__":
    sys.exit(main())
