import os
import sys
import argparse

import numpy as np
from dotenv import load_dotenv

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Load environment variables
load_dotenv()

from app import config
from app.db.storage import write_sweep_csv, write_sweep_svg
from app.schemas.schemas import HydrogenModel, StaticFieldConfig, SweepResult
from app.services.hydrogen_service import HydrogenResponse, resonance_frequencies
from app.services.sweep_service import figure_grid, zoom_grid
from app.services.tensor_service import hydrogen_volume
from app.services.units_service import CONSTANTS, electron_proton_pair


def _result(response, omegas, axis="rad_s"):
    tensors = response.evaluate(omegas)
    chi12 = tensors[:, 0, 1] / (CONSTANTS.eps0 * CONSTANTS.c_light * hydrogen_volume())
    return SweepResult(omega=omegas, tensors=tensors, chi12_dimless=chi12, axis=axis)


def reproduce_figures(out_dir, n_max=20, gamma=1e8, zoom_levels=(2, 3, 4), verbose=True):
    """Overview sweep and per-resonance zooms for the hydrogen response."""
    os.makedirs(out_dir, exist_ok=True)
    model = HydrogenModel(
        pair=electron_proton_pair(),
        fields=StaticFieldConfig(E0=(1e5, 0.0, 0.0), B0=(0.0, 10.0, 0.0)),
        gamma=gamma,
        n_max=n_max,
    )
    if verbose:
        print(f"Building hydrogen response sums (n_max={n_max})...")
    response = HydrogenResponse(model)
    resonances = resonance_frequencies(n_max)

    # Overview: plateau, resonances and 1/omega^2 tail
    overview = _result(response, figure_grid(1e12, 1e20, resonances))
    write_sweep_csv(overview, os.path.join(out_dir, "overview.csv"))
    write_sweep_svg(overview, os.path.join(out_dir, "overview.svg"), "abs", "|chi12| / (eps0 c V)")
    plateau = overview.chi12_dimless[0]

    summary = []
    for n in zoom_levels:
        omegas = zoom_grid(resonances[n - 2], gamma)
        zoom = _result(response, omegas)
        for quantity in ("re", "im"):
            write_sweep_svg(
                zoom, os.path.join(out_dir, f"zoom_n{n}_{quantity}.svg"), quantity, f"n={n} resonance ({quantity})"
            )
        write_sweep_csv(zoom, os.path.join(out_dir, f"zoom_n{n}.csv"))
        peak = int(np.argmax(np.abs(zoom.chi12_dimless)))
        imaginary = zoom.chi12_dimless.imag
        sign_changes = int(np.count_nonzero(np.diff(np.sign(imaginary[imaginary != 0]))))
        summary.append({
            "n": n,
            "resonance": resonances[n - 2],
            "peak_offset": peak - len(omegas) // 2,
            "peak_over_plateau": abs(zoom.chi12_dimless[peak]) / abs(plateau),
            "im_sign_changes": sign_changes,
        })

    if verbose:
        print("\n✅ Figures written to", out_dir)
        print(f"Plateau chi12 / (eps0 c V): {plateau.real:.4e} {plateau.imag:+.4e}i")
        for row in summary:
            print(
                f"n={row['n']}: omega={row['resonance']:.6e} rad/s, "
                f"peak offset {row['peak_offset']:+d} steps, "
                f"peak/plateau {row['peak_over_plateau']:.3e}, "
                f"Im sign changes {row['im_sign_changes']}"
            )
    return summary


if __name__ == "__main__":
    # Parse arguments
    parser = argparse.ArgumentParser(description='Regenerate the hydrogen response figures')
    parser.add_argument('--out-dir', type=str, default='figures', help='Output directory')
    parser.add_argument('--n-max', type=int, default=config.DEFAULT_N_MAX, help='Highest principal quantum number')
    parser.add_argument('--gamma', type=float, default=1e8, help='Line width (rad/s)')

    args = parser.parse_args()
    config.configure_logging()

    reproduce_figures(args.out_dir, n_max=args.n_max, gamma=args.gamma)
