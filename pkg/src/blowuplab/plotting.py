"""Optional static plots rendered from the CSV outputs.

Everything downstream consumes the CSVs; plotting needs matplotlib, which is
an optional extra, so the imports stay inside the functions.
"""

import csv


def _require_matplotlib():
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise RuntimeError(
            "plots need matplotlib; install the 'plots' extra or set output.plots = false"
        ) from exc
    return plt


def plot_energy_trace(csv_path, png_path) -> None:
    plt = _require_matplotlib()
    rows = list(csv.DictReader(open(csv_path)))
    t = [float(r["t"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for col in ("kinetic", "potential", "dissipated_cum", "work_cum"):
        ax1.plot(t, [float(r[col]) for r in rows], label=col)
    ax1.legend()
    ax1.set_ylabel("energy ledger")
    ax2.semilogy(t, [max(float(r["linf"]), 1e-300) for r in rows], label="sup norm")
    ax2.semilogy(t, [max(float(r["l2"]), 1e-300) for r in rows], label="L2 norm")
    ax2.legend()
    ax2.set_xlabel("t")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def plot_sweep(csv_path, png_path) -> None:
    plt = _require_matplotlib()
    rows = list(csv.DictReader(open(csv_path)))
    fig, ax = plt.subplots(figsize=(7, 5))
    markers = {"BlowupDetected": "x", "SurvivedHorizon": "o"}
    for r in rows:
        m = markers.get(r["outcome"], "s")
        ax.scatter(float(r["p"]), float(r["beta"]), marker=m, c="k")
    ax.set_xlabel("p")
    ax.set_ylabel("beta")
    ax.set_title("observed outcomes")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
