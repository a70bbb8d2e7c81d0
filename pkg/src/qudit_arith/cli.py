"""Command-line interface: ``qudit-arith <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .approx import approx_rot_gate, approx_vz, error_curve, worst_case_angle
from .circuitfile import read_circuit, serialize
from .circuits import BUILDERS, SWAP_MODES
from .core import CircuitError, GateSpec, Kind
from .oracle import dft_matrix, diag_phase_vector, exhaustive_check, oracle_spec_for
from .resources import asymptotic_fit, count_elementary, table1_rows
from .sim import StateVector, circuit_unitary, equal_up_to_global_phase, reduced_purity, run_circuit

ORACLE_BLOCKS = ("add", "addc", "caddc", "gcaddc", "mac", "mulc", "mmac", "smac")


class UsageError(Exception):
    pass


def _q_range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(text)]
        return list(range(int(lo), int(hi) + 1))
    except ValueError:
        raise UsageError(f"bad q range {text!r}; expected a..b") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational {text!r}") from None


def build_block(args):
    kind = args.block
    d, q = args.d, args.q
    if kind == "qft":
        return BUILDERS[kind](d, q, args.swap_mode)
    needs = {"addc": ("b",), "caddc": ("c", "b"), "gcaddc": ("b",), "mac": ("b",), "mulc": ("b",),
             "smac": ("gamma",), "diag": ("gamma",)}.get(kind, ())
    values = []
    for name in needs:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"block {kind!r} needs --{name}")
        values.append(v)
    if kind in ("mulc", "smac", "diag"):
        return BUILDERS[kind](d, q, *values)
    return BUILDERS[kind](d, q, *values, args.sandwich)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def cmd_build(args) -> int:
    block = build_block(args)
    text = serialize(block.circuit)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_input(spec: str, circuit) -> StateVector:
    system = circuit.system
    if spec.startswith("basis:"):
        try:
            index = int(spec[6:])
        except ValueError:
            raise UsageError(f"bad basis index in {spec!r}") from None
        if not 0 <= index < system.dim:
            raise UsageError(f"basis index {index} out of range [0, {system.dim})")
        return StateVector.basis(system, index)
    try:
        amps = np.load(spec) if spec.endswith(".npy") else np.loadtxt(spec, dtype=complex)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return StateVector(system, np.asarray(amps, dtype=complex).ravel())


def cmd_simulate(args) -> int:
    c = read_circuit(args.circuit)
    out = run_circuit(_load_input(args.input, c), c)
    amps = out.amplitudes
    rows = []
    for i in np.flatnonzero(np.abs(amps) > args.threshold):
        rows.append({"index": int(i), "registers": c.system.register_values(int(i)),
                     "amplitude": [float(amps[i].real), float(amps[i].imag)],
                     "probability": float(abs(amps[i]) ** 2)})
    text = "\n".join(f"{r['index']:>8}  {r['registers']}  p={r['probability']:.12f}" for r in rows)
    _emit(args, {"nonzero": rows}, text)
    return 0


def _verify_qft(args) -> dict:
    block = build_block(args)
    u, dft = circuit_unitary(block.circuit), dft_matrix(args.d, args.q)
    err = float(np.max(np.abs(u - dft)))
    return {"block": "qft", "ok": err <= 1e-10, "max_error": err,
            "up_to_phase": equal_up_to_global_phase(u, dft)[0]}


def _verify_diag(args) -> dict:
    block = build_block(args)
    d, q = args.d, args.q
    rng = np.random.default_rng(args.seed)
    phases = diag_phase_vector(d, q, args.gamma)
    system = block.circuit.system
    worst_amp, worst_purity = 0.0, 1.0
    for _ in range(args.samples):
        v = rng.normal(size=d ** q) + 1j * rng.normal(size=d ** q)
        v /= np.linalg.norm(v)
        psi = np.zeros(system.dim, dtype=complex)
        for k in range(d ** q):
            psi[system.basis_index({"reg1": k})] = v[k]
        out = run_circuit(StateVector(system, psi), block.circuit)
        got = np.array([out.amplitudes[system.basis_index({"reg1": k})] for k in range(d ** q)])
        worst_amp = max(worst_amp, float(np.max(np.abs(got - phases * v))))
        worst_purity = min(worst_purity, reduced_purity(out, "reg2"))
    return {"block": "diag", "ok": worst_amp <= 1e-8 and worst_purity >= 1 - 1e-9,
            "max_amplitude_error": worst_amp, "min_reg2_purity": worst_purity}


def cmd_verify(args) -> int:
    if args.block == "qft":
        result = _verify_qft(args)
    elif args.block == "diag":
        result = _verify_diag(args)
    else:
        if not args.exhaustive:
            raise UsageError("only --exhaustive verification is available for arithmetic blocks")
        block = build_block(args)
        result = exhaustive_check(block, oracle_spec_for(block)).as_dict()
    if "total" in result:
        text = (f"{result['block']}: {result['passed']}/{result['total']} pass, "
                f"worst fidelity {result['worst_fidelity']:.12f}")
        for f in result["failures"]:
            text += f"\n  FAIL input={f['input']} expected={f['expected']} fidelity={f['fidelity']:.3e}"
    else:
        text = f"{result['block']}: {'pass' if result['ok'] else 'FAIL'} " + " ".join(
            f"{k}={v}" for k, v in result.items() if k not in ("block", "ok"))
    _emit(args, result, text)
    return 0 if result["ok"] else 1


def _report_text(rep) -> str:
    lines = [f"{rep.label or 'circuit'}  d={rep.d}  width={rep.width}",
             f"  basic gates      {rep.basic_total}  {rep.basic}",
             f"  elementary cost  {rep.cost}  {rep.elementary}",
             f"  phase gates      {rep.phase}",
             f"  depth (basic)    {rep.depth_basic}"]
    if rep.depth_elementary is not None:
        lines.append(f"  depth (elem.)    {rep.depth_elementary}")
    for tag, counts in rep.breakdown.items():
        lines.append(f"  [{tag}] {counts}")
    return "\n".join(lines)


def cmd_resources(args) -> int:
    payload = {}
    text = []
    if args.circuit:
        rep = count_elementary(read_circuit(args.circuit), elementary_depth=args.expand == "elementary")
        payload["report"] = rep.as_dict()
        text.append(_report_text(rep))
    if args.fit:
        if not args.block or args.d is None:
            raise UsageError("--fit needs --block and --d")
        qs = _q_range(args.q_range)
        fit = asymptotic_fit(args.block, args.d, qs, args.metric)
        payload["fit"] = {"block": args.block, "d": args.d, "metric": args.metric, "qs": qs,
                          "exponent": fit.exponent, "residual": fit.residual, "values": fit.values}
        text.append(f"{args.block} d={args.d} {args.metric} ~ q^{fit.exponent:.3f} "
                    f"(q={qs[0]}..{qs[-1]}, residual {fit.residual:.2e})")
    if not payload:
        raise UsageError("resources needs --circuit and/or --fit")
    _emit(args, payload, "\n".join(text))
    return 0


def cmd_approx(args) -> int:
    theta = _fraction(args.theta)
    if args.gate == "rz":
        res = approx_vz(theta, args.max_len, args.target_err)
        word, err = res.word, res.error
    else:
        g = GateSpec(Kind.RX, (0,), (0, 1), angles=(theta,))
        r = approx_rot_gate(g, args.max_len, args.target_err)
        word, err = "".join("H" if x.kind == Kind.HJK else "T" for x in r.gates), r.error
    payload = {"gate": args.gate, "theta_turns": str(theta), "word": word, "length": len(word),
               "t_count": word.count("T"), "error": err}
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["max_len", "error", "word"])
            for n, e, w in error_curve(theta, range(0, args.max_len + 1, 2)):
                writer.writerow([n, f"{e:.16e}", w])
    if args.d is not None and args.q is not None:
        angle, eps = worst_case_angle(args.d, args.q)
        payload["worst_case_angle_turns"] = str(angle)
        payload["required_precision"] = eps
    _emit(args, payload, f"{word or '(identity)'}\nerror {err:.3e}  length {len(word)}")
    return 0


def cmd_export(args) -> int:
    if not args.table1:
        raise UsageError("export currently supports --table1 only")
    rows = table1_rows(args.d, _q_range(args.q_range))
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    cols = ["block", "q", "cost", "phase", "basic", "depth_basic", "width", "width_expected",
            "cost_leading", "depth_leading"]
    print("  ".join(f"{c:>14}" for c in cols))
    for r in rows:
        print("  ".join(f"{str(r[c]):>14}" for c in cols))
    return 0


def _block_args(p: argparse.ArgumentParser, block_required: bool = True) -> None:
    if block_required:
        p.add_argument("block", choices=sorted(BUILDERS))
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--gamma", type=int)
    p.add_argument("--sandwich", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--swap-mode", choices=SWAP_MODES, default="relabel")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qudit-arith", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="write a block as a circuit file")
    _block_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("simulate", parents=[common], help="run a circuit file on an input state")
    p.add_argument("--circuit", required=True)
    p.add_argument("--input", required=True, help="basis:<int> or a .npy/.txt amplitude file")
    p.add_argument("--threshold", type=float, default=1e-9)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="check a block against its reference")
    _block_args(p)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resources", parents=[common], help="gate counts, depth and fits")
    p.add_argument("--circuit")
    p.add_argument("--expand", choices=("basic", "elementary"), default="basic")
    p.add_argument("--fit", action="store_true")
    p.add_argument("--block", choices=sorted(BUILDERS))
    p.add_argument("--d", type=int)
    p.add_argument("--q-range", default="16..64")
    p.add_argument("--metric", choices=("cost", "basic", "depth", "depth_elementary"), default="cost")
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("approx", parents=[common], help="approximate a rotation by H/T words")
    p.add_argument("gate", choices=("rz", "rx"))
    p.add_argument("--theta", required=True, help="angle as a fraction of a full turn, e.g. 1/8")
    p.add_argument("--max-len", type=int, default=16)
    p.add_argument("--target-err", type=float, default=0.0)
    p.add_argument("--csv", help="write the error-vs-length curve here")
    p.add_argument("--d", type=int)
    p.add_argument("--q", type=int)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("export", parents=[common], help="cost/depth/width comparison table")
    p.add_argument("--table1", action="store_true")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--q-range", default="1..4")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CircuitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
