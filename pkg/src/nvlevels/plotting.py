"""Figure rendering for the CLI report path (matplotlib, Agg backend).

Each scan subcommand writes a PNG next to its delimited output.  Figures are
derived from the same arrays as the data files; nothing here feeds back into
the computation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_CONFIG_COLUMNS = {"e2": 0.0, "ae": 1.0, "a2": 2.0}


def render_levels(rows, path):
    """Level diagram: one column per electronic configuration."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for row in rows:
        x0 = _CONFIG_COLUMNS[row["config"]]
        e = row["energy_ghz"]
        ax.hlines(e, x0 - 0.35, x0 + 0.35, lw=1.4)
        ax.annotate(row["name"], (x0 + 0.38, e), fontsize=7, va="center")
    ax.set_xticks(list(_CONFIG_COLUMNS.values()))
    ax.set_xticklabels(["e$^2$", "ae", "a$^2$"])
    ax.set_ylabel("energy (GHz)")
    ax.set_title("two-hole levels by configuration")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_strain_scan(deltas, energies, labels, degrees, axes_rad, component, path):
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 7.0), sharex=True,
                                   height_ratios=[2, 1])
    for b, lab in enumerate(labels):
        ax1.plot(deltas, energies[:, b], lw=1.3, label=lab)
    ax1.set_ylabel("energy (GHz)")
    ax1.legend(ncol=3, fontsize=8)
    ax1.set_title(f"excited triplet vs {component}-channel strain")
    ax2.plot(deltas, degrees, lw=1.3, color="k", label="circular degree")
    finite_axes = [a if a is not None else np.nan for a in axes_rad]
    ax2.plot(deltas, finite_axes, lw=1.0, ls="--", color="C3",
             label="linear axis (rad)")
    ax2.set_xlabel(f"strain amplitude {component} (GHz)")
    ax2.set_ylabel("A2-branch polarization")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_stark_scan(fields, transitions, labels, axis, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    rel = transitions - transitions[0]
    for b, lab in enumerate(labels):
        ax.plot(fields, rel[:, b], lw=1.3, label=lab)
    ax.set_xlabel(f"electric field E{axis} (MV/m)")
    ax.set_ylabel("optical transition shift (GHz)")
    ax.set_title(f"Stark response, field along {axis}")
    ax.legend(ncol=3, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_spin_spin_sweep(p_values, results, path):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    series = [
        ("3*delta (zero-field gap)", [3 * r.delta for r in results],
         [3 * r.sigma["delta"] for r in results]),
        ("4*delta' (A2-A1 gap)", [4 * r.delta_prime for r in results],
         [4 * r.sigma["delta_prime"] for r in results]),
        ("delta'' (mixing)", [r.delta_dprime for r in results],
         [r.sigma["delta_dprime"] for r in results]),
    ]
    for label, vals, sigs in series:
        vals = np.asarray(vals)
        sigs = np.asarray(sigs)
        ax.plot(p_values, vals, lw=1.4, label=label)
        ax.fill_between(p_values, vals - 3 * sigs, vals + 3 * sigs, alpha=0.25)
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("nitrogen population p_N of a1(2)")
    ax.set_ylabel("GHz")
    ax.set_title("spin-spin amplitudes vs nitrogen population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_selection_rules(rules, path):
    """Annotated grids of the three allowed-transition families."""
    groups = [
        ("triplets", rules.triplet, ("3A2-", "3A20", "3A2+"),
         ("A1", "A2", "E1", "E2", "Ex", "Ey")),
        ("singlets (ground conf.)", rules.singlets_e2,
         ("1E1", "1E2", "1A1(e2)"), ("1Ex", "1Ey")),
        ("singlets (doubly excited)", rules.singlets_a2,
         ("1Ex", "1Ey"), ("1A1(a2)",)),
    ]
    fig, axes = plt.subplots(1, 3, figsize=(10.0, 3.2),
                             gridspec_kw={"width_ratios": [6, 2, 1]})
    for ax, (title, table, rows, cols) in zip(axes, groups):
        ax.set_xlim(-0.5, len(cols) - 0.5)
        ax.set_ylim(-0.5, len(rows) - 0.5)
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                text = table.get((r, c), "")
                ax.text(j, i, text, ha="center", va="center", fontsize=9)
        ax.set_xticks(range(len(cols)))
        ax.set_xticklabels(cols, fontsize=8)
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels(rows, fontsize=8)
        ax.invert_yaxis()
        ax.set_title(title, fontsize=9)
        ax.grid(True, lw=0.3)
    fig.suptitle("optical selection rules (emitted polarization)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
