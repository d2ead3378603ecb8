"""Where do tuned phases beat the textbook Fourier angles?

Sweeps banded Fourier circuits over register sizes and coupling ranges,
optimizing the controlled-phase angles classically.  The shorter the
coupling range the more a non-standard angle compensates for the
dropped gates; with the full gate set there is nothing to gain.  Also
prints the ideal-search reference curve used by the training plots.
"""

from gatelearn import grover_reference_curve, improvement_table
from gatelearn.optimize import improvement_table_csv


def main():
    print("optimized-phase gain over standard phases (percent):")
    rows = improvement_table([5, 6, 7, 8], [1, 2, 3])
    print("  qubits  band=1  band=2  band=3")
    by_n = {}
    for row in rows:
        by_n.setdefault(row["n_qubits"], {})[row["band"]] = row["improvement_percent"]
    for n, cells in sorted(by_n.items()):
        rendered = [
            f"{cells[m]:6.1f}" if cells.get(m) is not None else "     -"
            for m in (1, 2, 3)
        ]
        print(f"  {n:6d}  {'  '.join(rendered)}")
    print("\n(blank cells: no practical gain from tuning, or band exceeds the register)")

    print("\nplot-ready CSV of the same table:\n")
    print(improvement_table_csv(rows))

    print("ideal-search success versus source-target overlap:")
    for row in grover_reference_curve([16, 64, 200, 1024, 10000]):
        print(f"  overlap {row['target_overlap']:.4f} "
              f"({row['n_elements']:5d} elements): "
              f"max success {row['max_success']:.4f}")


if __name__ == "__main__":
    main()
