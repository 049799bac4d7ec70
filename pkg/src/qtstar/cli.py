"""Command-line driver: ``qtstar <command> --config FILE [--out DIR]``.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import channel, coherent, core, kernel, packet
from .config import ConfigError, RunConfig, load_config
from .core import HBAR_SI, PLANCK_H, DomainError, GalileanConfig

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return str(x)


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_surface(path: Path, grid: kernel.Grid1D, values: np.ndarray) -> Path:
    pts = grid.points
    X, Y = np.meshgrid(pts, pts, indexing="ij")
    return write_csv(path, ["x", "y", "value"], zip(X.ravel(), Y.ravel(), values.ravel()))


@dataclass
class RunManifest:
    command: str
    config: str
    config_digest: str
    seed: int
    started: str
    finished: str = ""
    outputs: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    exit_code: int = EXIT_OK

    def check(self, name: str, ok: bool) -> bool:
        self.checks[name] = "PASS" if ok else "FAIL"
        return ok

    def add(self, path: Path, out: Path) -> None:
        self.outputs.append(str(path.relative_to(out)))

    @property
    def passed(self) -> bool:
        return all(v == "PASS" for v in self.checks.values())


def _now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())


def _alternate_hbar(hbar: float) -> float:
    return HBAR_SI if abs(hbar - PLANCK_H) < 1e-6 * PLANCK_H else PLANCK_H


# hbar exponent of each reported quantity, for the h-versus-hbar comparison
PARAM_EXPONENTS = {"tau": 1.0, "sigma_x": 0.5, "sigma_u": 0.5, "delta_eta": 0.5, "delta_mu": 0.5, "m_sf": 0.0,
                   "delta_t": 1.0}
SG_EXPONENTS = {"t1": 0, "v": 0, "t3": 0, "d1": 0.5, "d2": 0.5, "sigma_x": 0.5, "sigma_u": 0.5, "tau": 1,
                "delta_t": 1, "delta_z": 0, "delta_x": 1, "t_diss_pointer": 0, "t_diss_atom": 0, "theta": 1,
                "delta_eta": 0.5, "delta_eta_1": 0.5}


def _masses(rc: RunConfig) -> list[float]:
    sec = rc.section("params")
    if "masses_kg" in sec or "masses" in sec:
        return [float(m) for m in sec.get("masses_kg", sec.get("masses"))]
    if rc.mass is not None:
        return [rc.mass]
    if rc.stern_gerlach is not None:
        return [rc.stern_gerlach.m1, rc.stern_gerlach.m2]
    raise ConfigError("params: no masses declared (use [params] masses_kg, mass, or [stern_gerlach])")


def _param_rows(cfg: GalileanConfig, rc: RunConfig, masses):
    rows = []
    for m in masses:
        if rc.galilean.delta_t is None:
            ratio = 1.0 if rc.delta_t_over_tau is None else rc.delta_t_over_tau
            dt = ratio * core.max_decoherence_time(cfg, m)
        else:
            dt = rc.galilean.delta_t
        rows.append(core.derive_quantities(cfg, m, dt).as_dict())
    return rows


def cmd_params(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    masses = _masses(rc)
    cfg = rc.galilean
    rows = _param_rows(cfg, rc, masses)
    for m in masses:
        man.notes.append(f"mass {m:g}: delta_t {rc.delta_t_for(m)[1]}")
    cols = ["mass", "delta_t", "tau", "sigma_x", "sigma_u", "delta_eta", "delta_mu", "m_sf"]
    tables = {"config_hbar": (cfg.hbar, rows)}
    if args.both_hbar:
        alt = _alternate_hbar(cfg.hbar)
        alt_cfg = GalileanConfig(alt, cfg.alpha, cfg.beta, cfg.delta_t)
        alt_rows = _param_rows(alt_cfg, rc, masses)
        tables["alternate_hbar"] = (alt, alt_rows)
        ratio = cfg.hbar / alt
        fixed_dt = rc.galilean.delta_t is not None
        for r, a in zip(rows, alt_rows):
            for c in cols[2:]:
                expo = PARAM_EXPONENTS[c]
                if fixed_dt and c in ("delta_eta", "delta_mu"):
                    expo = 1.0
                if fixed_dt and c == "m_sf":
                    expo = -0.5
                got = r[c] / a[c]
                man.check(f"ratio_{c}_m{r['mass']:g}", abs(got / ratio ** expo - 1) < 1e-12)
    payload = {name: {"hbar": h, "rows": rs} for name, (h, rs) in tables.items()}
    p = out / "params.json"
    p.write_text(json.dumps(payload, indent=2))
    man.add(p, out)
    lines = []
    for name, (h, rs) in tables.items():
        lines.append(f"# {name}: hbar = {h:.10g}")
        lines.append("  ".join(f"{c:>14}" for c in cols))
        for r in rs:
            lines.append("  ".join(f"{r[c]:>14.6e}" for c in cols))
        lines.append("")
    if args.both_hbar:
        lines.append("# ratio config/alternate (expected powers of the hbar ratio)")
        lines.append("  ".join(f"{c:>14}" for c in cols))
        for r, a in zip(rows, tables["alternate_hbar"][1]):
            lines.append("  ".join(f"{r[c] / a[c]:>14.6e}" if c != "mass" else f"{r[c]:>14.6e}" for c in cols))
    p = out / "params.txt"
    p.write_text("\n".join(lines) + "\n")
    man.add(p, out)
    print("\n".join(lines))


SG_TOLERANCE = 0.005
SG_FACTOR_TOLERANCE = 0.01


def sg_report(rc: RunConfig):
    if rc.stern_gerlach is None:
        raise ConfigError("sg-report: config has no [stern_gerlach] section")
    s = rc.stern_gerlach
    cfg = rc.galilean
    if cfg.delta_t is None:
        ratio = 1.0 if rc.delta_t_over_tau is None else rc.delta_t_over_tau
        cfg = cfg.with_delta_t(ratio * core.max_decoherence_time(cfg, s.m2))
    alt = GalileanConfig(_alternate_hbar(cfg.hbar), cfg.alpha, cfg.beta, None)
    if rc.galilean.delta_t is None:
        ratio = 1.0 if rc.delta_t_over_tau is None else rc.delta_t_over_tau
        alt = alt.with_delta_t(ratio * core.max_decoherence_time(alt, s.m2))
    else:
        alt = alt.with_delta_t(rc.galilean.delta_t)
    return core.sg_derived_numbers(s, cfg), core.sg_derived_numbers(s, alt), cfg, alt


def cmd_sg_report(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    rep, alt_rep, cfg, alt = sg_report(rc)
    ratio = cfg.hbar / alt.hbar
    scales_with_tau = rc.galilean.delta_t is None
    rows = []
    for name, value in rep.values.items():
        reference = core.REFERENCE_SG_VALUES.get(name)
        rel = abs(value - reference) / abs(reference) if reference is not None else float("nan")
        status = ""
        if reference is not None:
            status = "PASS" if man.check(f"value_{name}", rel <= SG_TOLERANCE) else "FAIL"
        expo = SG_EXPONENTS[name]
        if not scales_with_tau and name in ("delta_t", "delta_x"):
            expo = 0
        if not scales_with_tau and name == "theta":
            expo = 0
        if not scales_with_tau and name == "delta_eta_1":
            expo = 1
        other = alt_rep.values[name]
        law = value / other / ratio ** expo if other else float("nan")
        if other:
            man.check(f"hbar_law_{name}", abs(law - 1.0) < 1e-9)
        rows.append([name, value, reference if reference is not None else float("nan"), rel, status, other,
                     value / other if other else float("nan"), expo])
    for name, value in rep.factors.items():
        reference = core.REFERENCE_SG_FACTORS.get(name)
        rel = abs(value - reference) / abs(reference) if reference is not None else float("nan")
        status = ""
        if reference is not None:
            status = "PASS" if man.check(f"factor_{name}", rel <= SG_FACTOR_TOLERANCE) else "FAIL"
        other = alt_rep.factors[name]
        rows.append([name, value, reference if reference is not None else float("nan"), rel, status, other,
                     value / other if other else float("nan"), float("nan")])
    for name, ok in rep.flags.items():
        man.check(f"flag_{name}", ok)
    header = ["quantity", "computed", "reference", "rel_error", "status", "computed_alt_hbar", "ratio", "hbar_exponent"]
    p = write_csv(out / "sg_report.csv", header, rows)
    man.add(p, out)
    payload = {"hbar": cfg.hbar, "alternate_hbar": alt.hbar, "delta_t": cfg.delta_t,
               "values": rep.values, "factors": rep.factors, "flags": rep.flags, "info": rep.info,
               "alternate": {"values": alt_rep.values, "factors": alt_rep.factors, "flags": alt_rep.flags}}
    p = out / "sg_report.json"
    p.write_text(json.dumps(payload, indent=2))
    man.add(p, out)
    print(f"{'quantity':<24}{'computed':>14}{'reference':>14}{'rel_err':>10}  status  {'alt hbar':>14}{'ratio':>10}")
    for r in rows:
        print(f"{r[0]:<24}{r[1]:>14.6g}{r[2]:>14.6g}{r[3]:>10.2e}  {r[4]:<6}  {r[5]:>14.6g}{r[6]:>10.4g}")
    for name, ok in rep.flags.items():
        print(f"flag {name:<28}{'PASS' if ok else 'FAIL'}")
    for name, v in rep.info.items():
        print(f"info {name:<28}{v:.6g}")


# -- grid experiments ----------------------------------------------------------

def _grid_setup(rc: RunConfig):
    sec = rc.section("grid")
    mass = rc.mass if rc.mass is not None else 1.0
    cfg = rc.galilean
    tau = core.max_decoherence_time(cfg, mass)
    sigma = math.sqrt(cfg.alpha * tau)
    n = int(sec.get("n", 256))
    half = float(sec.get("half_width_sigma", 16.0))
    return cfg, mass, tau, sigma, kernel.Grid1D.centered(n, half * sigma)


def _cat_kernel(rc: RunConfig, grid, mass, sigma, sec):
    a = float(sec.get("a_sigma", -5.0)) * sigma
    b = float(sec.get("b_sigma", 5.0)) * sigma
    psi = coherent.cat_state(grid, sigma, a, b, mass, rc.galilean.hbar)
    return kernel.kernel_from_wavefunction(psi), a, b


def cmd_figure1(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    cfg, mass, tau, sigma, grid = _grid_setup(rc)
    sec = rc.section("figure1")
    W, a, b = _cat_kernel(rc, grid, mass, sigma, sec)
    sep = abs(b - a)
    x = grid.points
    diff = x[:, None] - x[None, :]
    absW = np.abs(W.data)
    surfaces = {"cat_abs_W": absW}
    narrow = sep * float(sec.get("narrow_ratio", 1.0 / 20.0))
    wide = sep * float(sec.get("wide_ratio", 20.0))
    for tag, width in (("narrow", narrow), ("wide", wide)):
        damp = np.exp(-diff ** 2 / (2.0 * width ** 2))
        surfaces[f"damping_{tag}"] = damp
        surfaces[f"product_{tag}"] = damp * absW
    for name, values in surfaces.items():
        p = write_surface(out / f"figure1_{name}.csv", grid, values)
        man.add(p, out)
    ia, ib = grid.index_of(a), grid.index_of(b)
    diag_peak = max(absW[ia, ia], absW[ib, ib])
    # neighbourhoods (+/- 3 sigma) of the off-diagonal peaks at (A, B) and (B, A)
    near_a = np.abs(x - a) <= 3.0 * sigma
    near_b = np.abs(x - b) <= 3.0 * sigma
    off = (near_a[:, None] & near_b[None, :]) | (near_b[:, None] & near_a[None, :])
    supp = float(surfaces["product_narrow"][off].max() / diag_peak)
    change = float(np.max(np.abs(surfaces["product_wide"] - absW)) / absW.max())
    man.check("narrow_offdiag_below_1e-12", supp < 1e-12)
    man.check("wide_change_below_1pct", change <= 0.01)
    man.check("symmetric", bool(np.allclose(W.data, W.data.conj().T, rtol=0, atol=1e-12 * absW.max())))
    man.notes.append(f"narrow off-diagonal/diagonal = {supp:.3e}; wide max change = {change:.3e}")
    print(f"off-diagonal suppression (delta_eta = |A-B|/20): {supp:.3e}")
    print(f"maximal change (delta_eta = 20|A-B|): {change:.3e}")


def _state(rc: RunConfig, name: str, grid, mass, sigma, sec, rng):
    hbar = rc.galilean.hbar
    if name == "cat":
        W, a, b = _cat_kernel(rc, grid, mass, sigma, sec)
        return W, (a, b)
    if name == "gaussian":
        l = coherent.CoherentLabel(0.0, 0.0, float(sec.get("width_sigma", 1.0)) * sigma, mass, hbar)
        return kernel.kernel_from_wavefunction(coherent.coherent_wavefunction(l, grid)), None
    if name == "coherent-mixture":
        a = float(sec.get("a_sigma", -5.0)) * sigma
        b = float(sec.get("b_sigma", 5.0)) * sigma
        ks = [kernel.kernel_from_wavefunction(coherent.coherent_wavefunction(
            coherent.CoherentLabel(c, 0.0, sigma, mass, hbar), grid)) for c in (a, b)]
        return kernel.mixture(ks, [0.5, 0.5]), (a, b)
    if name == "random":
        psi = coherent.random_superposition(rng, grid, sigma, mass, hbar)
        return kernel.kernel_from_wavefunction(psi), None
    raise ConfigError(f"unknown state {name!r} (cat | gaussian | coherent-mixture | random)")


def cmd_evolve(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    cfg, mass, tau, sigma, grid = _grid_setup(rc)
    sec = rc.section("evolve")
    ratios = args.delta_t_over_tau if args.delta_t_over_tau is not None else sec.get("delta_t_over_tau", [])
    state = args.state or sec.get("state", "cat")
    rng = np.random.default_rng(args.seed)
    W, centres = _state(rc, state, grid, mass, sigma, sec, rng)
    if not ratios:
        man.notes.append("empty delta_t list: nothing to do")
        return
    snap_dir = out / "snapshots"
    snap_dir.mkdir(exist_ok=True)
    p = kernel.save_snapshot(W, snap_dir / "input.txt")
    man.add(p, out)
    rows = []
    entropies = []
    for i, r in enumerate(ratios):
        dt = float(r) * tau
        Wt = channel.apply_galilean_decoherence(W, cfg, dt)
        if args.strict:
            Wt.validate(strict=True, trace_tol=1e-10, eig_tol=1e-9)
        S = kernel.von_neumann_entropy(Wt)
        entropies.append(S)
        residual = closed = float("nan")
        if centres is not None:
            a, b = centres
            la = coherent.CoherentLabel(a, 0.0, sigma, mass, cfg.hbar)
            lb = coherent.CoherentLabel(b, 0.0, sigma, mass, cfg.hbar)
            if state == "cat":
                # the cat's coherence is the channel image of its cross dyad
                img = coherent.pointer_dyad_after_channels(la, lb, cfg.with_delta_t(dt), grid)
                residual = img.grid_ratio
                closed = img.position_factor * img.velocity_factor
                # like for like: the closed-form image sampled on the same grid
                man.check(f"residual_closed_form_{i}", abs(residual / img.sampled_ratio - 1.0) <= 1e-6)
            else:
                residual = closed = 0.0
        damping = channel.damping_profile(channel.boost_params(cfg, mass, dt), abs(centres[1] - centres[0])) \
            if centres is not None else float("nan")
        rows.append([float(r), dt, kernel.purity(Wt), S, kernel.sup_abs(Wt), residual, closed, damping])
        p = kernel.save_snapshot(Wt, snap_dir / f"dt_{i:03d}.txt")
        man.add(p, out)
        if dt == 0:
            man.check(f"identity_at_zero_{i}", bool(np.array_equal(Wt.data, W.data)))
    order = np.argsort([float(r) for r in ratios], kind="stable")
    ent = np.array(entropies)[order]
    man.check("entropy_non_decreasing", bool(np.all(np.diff(ent) >= -1e-9)))
    header = ["delta_t_over_tau", "delta_t", "purity", "entropy", "sup_abs", "offdiag_residual",
              "closed_form_residual", "boost_damping_at_separation"]
    p = write_csv(out / "evolve_series.csv", header, rows)
    man.add(p, out)
    for r in rows:
        print("  ".join(fmt(v) if not isinstance(v, float) else f"{v:.6e}" for v in r))


def _collision_setup(rc: RunConfig):
    sec = rc.section("collision")
    hbar = rc.galilean.hbar
    m1 = float(sec.get("m1", 1.0))
    m2 = float(sec.get("m2", 1000.0))
    d2 = float(sec.get("d2", 1.0))
    d1 = d2 * math.sqrt(m2 / m1)
    v = float(sec.get("v", 64.0))
    A = float(sec.get("A_over_d1", 10.0)) * d1
    strength = sec.get("v0_strength")
    return packet.CollisionSetup.build(m1, m2, v, d1, A, None if strength is None else float(strength), hbar), sec


def trajectory(setup: packet.CollisionSetup, times, n: int = 256):
    hbar = setup.hbar
    rows = []
    for t in times:
        if t < setup.collision_time:
            atom_mean, atom_w = setup.atom.center + setup.v * t, packet.packet_width(setup.atom, t, hbar)
            ptr_mean, ptr_w = setup.pointer.center, packet.packet_width(setup.pointer, t, hbar)
            rows.append([t, atom_mean, atom_w, ptr_mean, ptr_w, float("nan")])
            continue
        res = packet.collide(setup, t, n=n)
        ps = setup.pointer_out_spec()
        label = coherent.CoherentLabel(ps.center + ps.v * t, ps.v, setup.pointer.d, setup.m2, hbar)
        omega = coherent.coherent_wavefunction(label, res.pointer_out.grid)
        fid = abs(omega.inner(res.pointer_out)) ** 2
        rows.append([t, res.atom_out.mean(), res.atom_out.std(), res.pointer_out.mean(), res.pointer_out.std(), fid])
    return rows


def cmd_collide(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    setup, sec = _collision_setup(rc)
    t3 = setup.collision_time
    t_end = float(sec.get("t_end_over_t3", 2.0)) * t3
    samples = int(sec.get("samples", 21))
    times = np.linspace(0.0, t_end, samples)
    rows = trajectory(setup, times)
    header = ["t", "atom_mean", "atom_width", "pointer_mean", "pointer_width", "overlap_with_coherent"]
    p = write_csv(out / "collision_trajectory.csv", header, rows)
    man.add(p, out)
    exp = packet.pointer_expansion(setup, t_end)
    final_fid = rows[-1][5]
    man.check("final_fidelity", final_fid >= 1.0 - exp.theta ** 2 / 2.0)
    man.check("pointer_velocity", abs(rows[-1][3] - setup.pointer_mean(t_end)) <= 1e-6 * setup.pointer.d)
    p = out / "collision_expansion.json"
    p.write_text(json.dumps({"setup": {"m1": setup.m1, "m2": setup.m2, "v": setup.v, "d1": setup.atom.d,
                                       "d2": setup.pointer.d, "A": setup.A, "v0_strength": setup.v0_strength,
                                       "t3": t3},
                             "expansion": asdict(exp), "final_fidelity": final_fid}, indent=2))
    man.add(p, out)
    print(f"t3 = {t3:.6g}, theta(t_end) = {exp.theta:.4g}, final fidelity = {final_fid:.12f} "
          f"(threshold {1 - exp.theta ** 2 / 2:.12f})")


def cmd_overlap(rc: RunConfig, out: Path, man: RunManifest, args) -> None:
    cfg, mass, tau, sigma, grid = _grid_setup(rc)
    sec = rc.section("overlap")
    rng = np.random.default_rng(args.seed)
    W, _ = _state(rc, args.state or sec.get("state", "cat"), grid, mass, sigma, sec, rng)
    dt = float(sec.get("delta_t_over_tau", 1.0)) * tau
    Wp = channel.apply_translation_channel(W, channel.translation_params(cfg, mass, dt))
    W2 = channel.apply_boost_channel(Wp, channel.boost_params(cfg, mass, dt))
    m_sf = core.decoherence_parameter(cfg, mass, dt)
    span = float(sec.get("span_sigma", 6.0))
    points = int(sec.get("points", 25))
    tw = coherent.tube_widths(W2, sigma)
    ket = tw.label
    dx = np.linspace(-span, span, points) * sigma
    dv = np.linspace(-span, span, points) * ket.sigma_u
    amap = coherent.overlap_map(W2, ket, dx, dv)
    w_sup = kernel.sup_abs(Wp)
    rows, ok = [], True
    for i, ox in enumerate(dx):
        bound = coherent.a1_upper_bound(m_sf, sigma, ox / math.sqrt(2.0), w_sup)
        for j, ov in enumerate(dv):
            rows.append([ox, ov, amap[i, j], bound])
            ok &= amap[i, j] <= bound
    p = write_csv(out / "overlap_map.csv", ["x0_offset", "v0_offset", "abs_overlap", "bound"], rows)
    man.add(p, out)
    man.check("bound_dominates", bool(ok))
    man.check("tube_x_within_3", 1 / 3 <= tw.position / sigma <= 3)
    man.check("tube_v_within_3", 1 / 3 <= tw.velocity / ket.sigma_u <= 3)
    p = out / "overlap_widths.json"
    p.write_text(json.dumps({"sigma_x": sigma, "sigma_u": ket.sigma_u, "tube_x": tw.position, "tube_v": tw.velocity,
                             "centre": [ket.x0, ket.v0], "m_sf": m_sf}, indent=2))
    man.add(p, out)
    print(f"tube widths: x {tw.position / sigma:.3f} sigma_x, v {tw.velocity / ket.sigma_u:.3f} sigma_u")


COMMANDS = {
    "params": cmd_params,
    "sg-report": cmd_sg_report,
    "figure1": cmd_figure1,
    "evolve": cmd_evolve,
    "collide": cmd_collide,
    "overlap": cmd_overlap,
}


def _ratio_list(text: str):
    text = text.strip()
    return [] if not text else [float(t) for t in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtstar", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True)
    ap.add_argument("--out", default="out")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--strict", action="store_true", help="full positivity checks; aliasing is an error")
    ap.add_argument("--both-hbar", action="store_true", help="params: also tabulate with the other hbar convention")
    ap.add_argument("--state", help="evolve/overlap: cat | gaussian | coherent-mixture | random")
    ap.add_argument("--delta-t-over-tau", type=_ratio_list, help="evolve: comma-separated durations in units of tau")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        rc = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out.mkdir(parents=True, exist_ok=True)
    man = RunManifest(args.command, str(args.config), rc.digest, args.seed, _now())
    with warnings.catch_warnings():
        if args.strict:
            warnings.simplefilter("error", kernel.AliasingWarning)
        try:
            COMMANDS[args.command](rc, out, man, args)
            man.exit_code = EXIT_OK if man.passed else EXIT_FAIL
        except (ConfigError, DomainError, kernel.AliasingWarning) as exc:
            print(f"error: {exc}", file=sys.stderr)
            man.notes.append(f"error: {exc}")
            man.exit_code = EXIT_INVALID
    for name, status in man.checks.items():
        if status == "FAIL":
            print(f"FAIL {name}", file=sys.stderr)
    man.finished = _now()
    p = out / f"{args.command}.manifest.json"
    p.write_text(json.dumps(asdict(man), indent=2))
    return man.exit_code


if __name__ == "__main__":
    sys.exit(main())
