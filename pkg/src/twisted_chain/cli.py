"""Command line: spectrum, verify, bae, thermo.

Exit codes: 0 ok, 1 domain, 2 convergence, 3 I/O, 4 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import serialize as io
from .bae import (
    RootSet,
    charge_from_roots,
    classify_roots,
    energy_from_roots,
    momentum_from_roots,
    residual_norm,
    solve_bae,
)
from .chain import ModelParams
from .errors import ChainError, ConvergenceError, DomainError, VerificationError
from .spectrum import diagonalize_model, extract_states, joint_eigenbasis
from .thermo import ThermoParams, check_domain, dispersion_curve, ground_energy_density
from .verify import run_suite

log = logging.getLogger("twisted_chain")


def parse_complex(text: str) -> complex:
    """Accept 0.6, 0.6i, -0.2i, 0.2+0.3i, i."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if s in ("i", "+i"):
        return 1j
    if s == "-i":
        return -1j
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_range(text: str):
    """start:stop:step, stop included."""
    try:
        parts = [float(x) for x in text.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if len(parts) == 1:
        return np.array(parts)
    if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
        raise argparse.ArgumentTypeError(f"range must be start:stop:step with step > 0, got {text!r}")
    start, stop, step = parts
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise DomainError(f"{self.prog}: {message}")


def _model(args) -> ModelParams:
    if args.sites % 2:
        raise DomainError("--sites must be even (2N)")
    return ModelParams(args.sites // 2, args.a, args.eta)


def _model_dict(p: ModelParams):
    return {"sites": p.sites, "a": p.a, "eta": p.eta}


# ---------------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    p = _model(args)
    spec = diagonalize_model(p)
    body = {"levels": [r.to_dict() for r in spec.records]}
    states = []
    if not args.no_roots:
        basis = joint_eigenbasis(p, spectrum=spec, seed=args.seed)
        for ef in extract_states(p, basis):
            d = ef.to_dict()
            d["energy_from_roots"] = energy_from_roots(ef.z_roots, p)
            states.append(d)
        body["states"] = states
    head = io.provenance("spectrum", _model_dict(p), {"level_gap": 1e-9, "fit": 1e-7, "seed": args.seed})
    if args.format == "json":
        io.write_json(args.output, head, body)
    else:
        cols = ["state", "level", "energy", "degeneracy", "z", "w", "lambda0_sq", "w0"]
        deg = {r.level: r.degeneracy for r in spec.records}
        rows = []
        if states:
            for s in states:
                rows.append([s["state"], s["level"], s["energy"], deg[s["level"]], _cjoin(s["z"]), _cjoin(s["w"]),
                             _cjoin([s["lambda0_sq"]]), _cjoin([s["w0"]])])
        else:
            rows = [[r.eigenvector_ids[0], r.level, r.energy, r.degeneracy, "", "", "", ""] for r in spec.records]
        io.write_csv(args.output, head, cols, rows)
    return 0


def _cjoin(pairs):
    return " ".join(f"{complex(re, im):.12g}" for re, im in pairs)


def cmd_verify(args) -> int:
    if args.sweep:
        n = args.sites // 2
        models = [ModelParams(n, 0.2, 0.6j), ModelParams(n, 0.2j, 0.6)]
    else:
        models = [_model(args)]
    failed = []
    lines = []
    for p in models:
        lines.append(f"# 2N={p.sites} a={p.a:.6g} eta={p.eta:.6g}")
        for c in run_suite(p, seed=args.seed, fault=args.inject_fault):
            lines.append(c.line())
            if not c.ok:
                failed.append(c)
    text = "\n".join(lines) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise io.OutputError(f"cannot write {args.output}: {exc}") from exc
    if failed:
        worst = max(failed, key=lambda c: c.residual / c.threshold)
        raise VerificationError(f"{len(failed)} check(s) failed; worst {worst.name}: residual {worst.residual:.3e}")
    return 0


def _load_seeds(path):
    data = io.read_json(path)
    if isinstance(data, dict) and "states" in data:
        data = data["states"]
    if isinstance(data, dict):
        data = [data]
    return [RootSet.from_dict(d) for d in data]


def cmd_bae(args) -> int:
    p = _model(args)
    if args.seed_file:
        seeds = [(i, None, s) for i, s in enumerate(_load_seeds(args.seed_file))]
        ground_ids = {0}
    else:
        efs = extract_states(p, joint_eigenbasis(p, seed=args.seed))
        e_min = min(ef.energy for ef in efs)
        chosen = efs if args.states == "all" else [ef for ef in efs if ef.energy - e_min < 1e-9]
        seeds = [(ef.state_id, ef.energy, RootSet.from_eigenfunction(ef)) for ef in chosen]
        ground_ids = {ef.state_id for ef in efs if ef.energy - e_min < 1e-9}
    out = []
    ground_failed = False
    for sid, e_ed, seed in seeds:
        rec = {"state": sid, "energy_ed": e_ed}
        try:
            rec["seed_residual"] = residual_norm(seed, p)
            r = solve_bae(seed, p)
        except ChainError as exc:
            rec["error"] = str(exc)
            ground_failed |= sid in ground_ids
            log.warning("state %s: %s", sid, exc)
            out.append(rec)
            continue
        rec.update(r.to_dict())
        rec["energy"] = energy_from_roots(r.z, p)
        rec["momentum"] = momentum_from_roots(r.z, p)
        rec["charge"] = charge_from_roots(r.z, r.lambda0, p) if r.lambda0 is not None else None
        if p.gamma is not None and abs(p.a.imag) < 1e-14:
            rec["classification"] = classify_roots(r, p).to_dict()
        out.append(rec)
    head = io.provenance("bae", _model_dict(p), {"newton": 1e-11, "seed": args.seed,
                                                 "seed_source": "file" if args.seed_file else "ed"})
    io.write_json(args.output, head, {"states": out})
    if ground_failed:
        raise ConvergenceError("ground-level BAE solve failed")
    return 0


def cmd_thermo(args) -> int:
    if args.mode == "gs":
        a_vals = args.a_range if args.a_range is not None else np.array([args.a])
        g_vals = args.gamma_range if args.gamma_range is not None else np.array([args.gamma])
        rows = []
        for g in g_vals:
            for a in a_vals:
                try:
                    rows.append([float(a), float(g), ground_energy_density(ThermoParams(float(a), float(g)))])
                except ChainError as exc:
                    log.warning("a=%g gamma=%g: %s", a, g, exc)
        head = io.provenance("thermo gs", {"a": list(a_vals), "gamma": list(g_vals)}, {"quad": 1e-10})
        io.write_csv(args.output, head, ["a", "gamma", "e_g"], rows)
        return 0
    t = ThermoParams(args.a, args.gamma)
    check_domain(args.type, t, args.n)
    samples, errors = dispersion_curve(args.type, t, args.lambda_range, n=args.n)
    for lam, exc in errors:
        log.warning("lambda=%g: %s", lam, exc)
    if not samples and errors:
        raise errors[0][1]
    head = io.provenance("thermo dispersion", {"type": args.type, "n": args.n, "a": args.a, "gamma": args.gamma},
                         {"quad": t.quad_tol})
    io.write_csv(args.output, head, ["kind", "n", "lambda", "delta_e", "k", "a", "gamma"],
                 [s.row(t) for s in samples])
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="twisted-chain", description="Antiperiodic NN/NNN/chiral spin chain: ED, Bethe roots, thermodynamics")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def model_flags(sp, sites=4):
        sp.add_argument("--sites", type=int, default=sites, help="chain length 2N (even, 4..12)")
        sp.add_argument("--a", type=parse_complex, default=0.2, help="model parameter a, e.g. 0.2 or 0.2i")
        sp.add_argument("--eta", type=parse_complex, default=0.6j, help="crossing parameter eta, e.g. 0.6i")
        sp.add_argument("--seed", type=int, default=0, help="seed for the u0 draws")
        sp.add_argument("-o", "--output", default="-")

    sp = sub.add_parser("spectrum", help="ED levels and per-state roots")
    model_flags(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--no-roots", action="store_true", help="levels only")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("verify", help="run the identity checks")
    model_flags(sp)
    sp.add_argument("--sweep", action="store_true", help="both Hermitian regimes (a=0.2, eta=0.6i and a=0.2i, eta=0.6)")
    sp.add_argument("--inject-fault", choices=("sign",), default=None, help="test hook: corrupt the R-matrix")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bae", help="solve the Bethe equations from ED or file seeds")
    model_flags(sp)
    sp.add_argument("--seed-file", help="RootSet JSON (object, list, or {'states': [...]})")
    sp.add_argument("--states", choices=("ground", "all"), default="all")
    sp.set_defaults(func=cmd_bae)

    sp = sub.add_parser("thermo", help="thermodynamic-limit curves (CSV)")
    sp.add_argument("mode", choices=("gs", "dispersion"))
    sp.add_argument("--a", type=float, default=0.0)
    sp.add_argument("--gamma", type=float, default=0.6)
    sp.add_argument("--a-range", type=parse_range)
    sp.add_argument("--gamma-range", type=parse_range)
    sp.add_argument("--type", choices=("1", "2", "3"), default="1")
    sp.add_argument("--n", type=int, default=None, help="string length for type 3 (n >= 3)")
    sp.add_argument("--lambda-range", type=parse_range, default=parse_range("-6:6:0.1"))
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_thermo)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
