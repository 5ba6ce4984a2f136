"""The ``nvlevels`` command line: configuration in, data files and figures out.

Subcommands
-----------
levels           fifteen-state table with energies and symmetry labels (JSON)
selection-rules  the allowed-transition table (JSON)
strain-scan      excited-triplet energies and polarization vs strain (CSV)
stark-scan       optical transitions vs electric field (CSV)
spin-spin        dipolar amplitudes vs nitrogen population (CSV)
validate         run the full oracle/acceptance suite and report pass/fail

Every output embeds the sha256 of the effective configuration and a full
parameter echo; identical configuration and seed give byte-identical data
files.  Figures (PNG) are rendered next to each data file unless --no-plot
is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import __version__, config, fock, nvmodel, plotting, quad, spectra, validate
from .config import ConfigError
from .quad import IntegrationError


def _fmt(value) -> str:
    """Deterministic shortest round-trip formatting for CSV cells."""
    if value is None:
        return "nan"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, cfg: dict, columns, rows):
    lines = [f"# config_sha256: {config.config_hash(cfg)}"]
    echo = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    lines.append(f"# config: {echo}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_json(path: Path, cfg: dict, payload: dict):
    doc = {"config_sha256": config.config_hash(cfg), "config": cfg}
    doc.update(payload)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _complex_pairs(vec):
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec)]


def _fine_structure(cfg) -> nvmodel.FineStructureParams:
    c = cfg["fine_structure"]
    return nvmodel.FineStructureParams(
        lambda_z=c["lambda_z_ghz"], lambda_xy=c["lambda_xy_ghz"],
        delta=c["delta_ghz"], delta_prime=c["delta_prime_ghz"],
        delta_dprime=c["delta_dprime_ghz"])


def _piezo(cfg) -> nvmodel.PiezoParams:
    p = cfg["piezo"]
    return nvmodel.PiezoParams(a=p["a_per_mvm"], b=p["b_per_mvm"],
                               c=p["c_per_mvm"], d=p["d_per_mvm"], g=p["g_ghz"])


def _geometry(cfg) -> quad.DefectGeometry:
    g = cfg["geometry"]
    return quad.DefectGeometry.default(bond_length=g["bond_length_angstrom"],
                                       carbon_scale=g["carbon_scale"],
                                       nitrogen_scale=g["nitrogen_scale"])


def _orbital_model(cfg) -> quad.GaussianOrbitalModel:
    m = cfg["orbital_model"]
    return quad.GaussianOrbitalModel(m["width_angstrom"], m["p_n"])


def _quad_spec(cfg) -> quad.QuadratureSpec:
    q = cfg["quadrature"]
    return quad.QuadratureSpec(seed=cfg["seed"], log2_points=q["log2_points"],
                               scrambles=q["scrambles"],
                               eta_factors=tuple(q["eta_factors"]),
                               target_rel_error=q["target_rel_error"])


def _coulomb_block(cfg) -> np.ndarray:
    """15x15 Coulomb contribution on the state basis, per the config source."""
    source = cfg["coulomb"]["source"]
    if source == "none":
        return np.zeros((15, 15), dtype=complex)
    if source == "gaussian":
        orbs = quad.build_orbitals(_geometry(cfg), _orbital_model(cfg))
        tensor = quad.coulomb_tensor(orbs, _quad_spec(cfg)).tensor
    else:
        block = np.zeros((2, 2, 2, 2))
        axis = {"x": 0, "y": 1}
        # each given entry is replicated over its real-orbital symmetry
        # orbit (particle exchange and bra-ket swaps); conflicts rejected
        for key, val in cfg["coulomb"]["entries"].items():
            idx = tuple(axis[ch] for ch in key)
            orbit = {idx}
            while True:
                grown = set(orbit)
                for a, b, c, d in orbit:
                    grown |= {(b, a, d, c), (c, b, a, d), (a, d, c, b)}
                if grown == orbit:
                    break
                orbit = grown
            for pos in orbit:
                if block[pos] != 0.0 and block[pos] != float(val):
                    raise ConfigError(
                        f"tensor entry {key} conflicts with an equivalent "
                        f"entry set earlier")
                block[pos] = float(val)
        tensor = fock.TwoBodyTensor.from_e_block(block)
    states = fock.symmetry_adapted_states()
    return fock.change_basis(fock.embed_two_body(tensor), states).matrix


def assemble_levels(cfg):
    """Eigenvalues and labeled eigenstates of the assembled 15-state model.

    The Hamiltonian is configuration offsets + Coulomb (per the configured
    source) + spin-orbit on all states + spin-spin on the excited triplet.
    """
    fs = _fine_structure(cfg)
    states = fock.symmetry_adapted_states()
    h = np.zeros((15, 15), dtype=complex)
    offsets = cfg["config_offsets_ghz"]
    for k, st in enumerate(states):
        h[k, k] += offsets[st.config]
    h += _coulomb_block(cfg)
    h += nvmodel.spin_orbit_hamiltonian(fs.lambda_xy, fs.lambda_z).full.matrix
    ss = nvmodel.spin_spin_hamiltonian(fs.delta, fs.delta_prime, fs.delta_dprime)
    idx = [fock.state_index(n) for n in fock.EXCITED_TRIPLET]
    h[np.ix_(idx, idx)] += ss.matrix

    evals, evecs = np.linalg.eigh(h)
    # label eigenstates by their dominant unperturbed state
    ov = np.abs(evecs) ** 2
    row, col = linear_sum_assignment(-ov.T)
    order = np.empty(15, dtype=int)
    order[row] = col
    s = fock.state_matrix(states)
    rows = []
    for label_idx in range(15):
        vec = evecs[:, order[label_idx]]
        st = states[label_idx]
        rows.append({
            "name": st.name,
            "irrep": st.irrep,
            "partner": st.partner,
            "config": st.config,
            "energy_ghz": float(evals[order[label_idx]].real),
            "amplitudes": _complex_pairs(s @ vec),
        })
    return rows


def cmd_levels(cfg, out: Path, plot: bool) -> int:
    rows = assemble_levels(cfg)
    _write_json(out / "levels.json", cfg, {"states": rows})
    if plot:
        plotting.render_levels(rows, out / "levels.png")
    print(f"wrote {out / 'levels.json'}")
    return 0


def cmd_selection_rules(cfg, out: Path, plot: bool) -> int:
    rules = spectra.selection_rules()

    def table(d):
        return [{"to": to, "from": frm, "polarization": pol}
                for (to, frm), pol in sorted(d.items())]

    dips = [{"from": d.from_state, "to": d.to_state,
             "amplitude_x": [d.amplitude_x.real, d.amplitude_x.imag],
             "amplitude_y": [d.amplitude_y.real, d.amplitude_y.imag],
             "polarization": d.polarization}
            for d in rules.all_allowed]
    payload = {
        "triplet": table(rules.triplet),
        "singlets_e2": table(rules.singlets_e2),
        "singlets_a2": table(rules.singlets_a2),
        "allowed_transitions": dips,
    }
    _write_json(out / "selection_rules.json", cfg, payload)
    if plot:
        plotting.render_selection_rules(rules, out / "selection_rules.png")
    print(f"wrote {out / 'selection_rules.json'}")
    return 0


def cmd_strain_scan(cfg, out: Path, plot: bool) -> int:
    sc = cfg["scans"]["strain"]
    fs = _fine_structure(cfg)
    deltas = np.linspace(0.0, sc["max_ghz"], sc["points"])
    res = spectra.strain_scan(fs, sc["component"], deltas,
                              g_pre=sc["pre_strain_ghz"])
    labels = res.scan.labels
    cols = [f"delta_{sc['component']}_ghz"]
    cols += [f"energy_{lab}_ghz" for lab in labels]
    for lab in labels:
        cols += [f"ov_{lab}_A2", f"ov_{lab}_A1", f"ov_{lab}_E"]
    cols += ["circular_degree", "linear_axis_rad"]
    i_a1, i_a2 = labels.index("A1"), labels.index("A2")
    i_e = [labels.index(n) for n in ("Ex", "Ey", "E1", "E2")]
    rows = []
    for k, d in enumerate(deltas):
        row = [float(d)] + [float(e) for e in res.scan.energies[k]]
        for b in range(len(labels)):
            ov = res.scan.overlaps[k, b]
            row += [float(ov[i_a2]), float(ov[i_a1]), float(np.sum(ov[i_e]))]
        rep = res.a2_to_minus[k]
        row += [rep.circular_degree,
                rep.linear_axis if rep.linear_axis is not None else None]
        rows.append(row)
    _write_csv(out / "strain_scan.csv", cfg, cols, rows)
    if plot:
        plotting.render_strain_scan(
            deltas, res.scan.energies, labels,
            [r.circular_degree for r in res.a2_to_minus],
            [r.linear_axis for r in res.a2_to_minus],
            sc["component"], out / "strain_scan.png")
    print(f"wrote {out / 'strain_scan.csv'}")
    return 0


def cmd_stark_scan(cfg, out: Path, plot: bool) -> int:
    sc = cfg["scans"]["stark"]
    fs = _fine_structure(cfg)
    piezo = _piezo(cfg)
    fields = np.linspace(0.0, sc["max_mvm"], sc["points"])
    pre = nvmodel.StrainCoefficients(e2_a=sc["pre_strain_e2_ghz"])
    res = spectra.stark_scan(fs, piezo, sc["axis"], fields, prestrain=pre)
    cols = ["field_mvm"] + [f"transition_{lab}_ghz" for lab in res.labels] \
        + ["ground_shift_ghz"]
    rows = [[float(f)] + [float(v) for v in res.transitions[k]]
            + [float(res.ground_energy[k])]
            for k, f in enumerate(fields)]
    _write_csv(out / "stark_scan.csv", cfg, cols, rows)
    if plot:
        plotting.render_stark_scan(fields, res.transitions, res.labels,
                                   sc["axis"], out / "stark_scan.png")
    print(f"wrote {out / 'stark_scan.csv'}")
    return 0


def cmd_spin_spin(cfg, out: Path, plot: bool) -> int:
    sc = cfg["scans"]["spin_spin"]
    p_values = np.linspace(sc["p_n_start"], sc["p_n_stop"], sc["p_n_points"])
    geom = _geometry(cfg)
    model = _orbital_model(cfg)
    results, trend = quad.sweep_nitrogen_population(geom, model, p_values,
                                                    _quad_spec(cfg))
    cols = ["p_n", "three_delta_ghz", "sigma_three_delta_ghz",
            "four_delta_prime_ghz", "sigma_four_delta_prime_ghz",
            "delta_dprime_ghz", "sigma_delta_dprime_ghz",
            "traceless_check_ghz", "sigma_traceless_ghz"]
    rows = []
    for p, r in zip(p_values, results):
        rows.append([float(p), 3 * r.delta, 3 * r.sigma["delta"],
                     4 * r.delta_prime, 4 * r.sigma["delta_prime"],
                     r.delta_dprime, r.sigma["delta_dprime"],
                     r.traceless[0], r.traceless[1]])
    _write_csv(out / "spin_spin_sweep.csv", cfg, cols, rows)
    _write_json(out / "spin_spin_trend.json", cfg, {"trend": trend})
    if plot:
        plotting.render_spin_spin_sweep(p_values, results,
                                        out / "spin_spin_sweep.png")
    print(f"wrote {out / 'spin_spin_sweep.csv'}")
    return 0


def cmd_validate(cfg, out: Path, plot: bool) -> int:
    results = validate.run_all(cfg)
    payload = {"checks": [{
        "criterion": r.criterion, "name": r.name,
        "passed": bool(r.passed and r.within_time),
        "runtime_s": r.runtime_s, "time_limit_s": r.time_limit_s,
        "detail": r.detail} for r in results]}
    _write_json(out / "validate_report.json", cfg, payload)
    for r in results:
        print(r.line())
    n_fail = sum(1 for r in results if not (r.passed and r.within_time))
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return 0 if n_fail == 0 else 1


_COMMANDS = {
    "levels": cmd_levels,
    "selection-rules": cmd_selection_rules,
    "strain-scan": cmd_strain_scan,
    "stark-scan": cmd_stark_scan,
    "spin-spin": cmd_spin_spin,
    "validate": cmd_validate,
}


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nvlevels",
        description="Fine structure of the NV- center from symmetry, with "
                    "numerical cross-checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=str, default=None,
                        help="JSON configuration (defaults used when omitted)")
        sp.add_argument("--out", type=str, required=True,
                        help="output directory (created if missing)")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the sampling seed")
        sp.add_argument("--no-plot", action="store_true",
                        help="skip PNG figure rendering")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = config.load_config(args.config, seed=args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out, not args.no_plot)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}),
              file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(json.dumps({"error": "integration", "message": str(exc),
                          "achieved_rel_error": exc.achieved}), file=sys.stderr)
        return 3
    except ValueError as exc:
        print(json.dumps({"error": "assembly", "message": str(exc)}),
              file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
