"""Command-line experiment runner.

Every subcommand builds a list of flat records and writes them as CSV or
JSON.  Options can come from a JSON file given with ``--config``; flags on
the command line override it.  Exit codes: 0 success, 1 usage error,
2 when the protocol run ends in an abort.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _rng, attacklab, cointoss, extract, randexp
from . import relnet

EXIT_OK, EXIT_USAGE, EXIT_ABORT = 0, 1, 2
FLOAT_DIGITS = 12


class UsageError(Exception):
    """Bad flags, bad config or an invalid report request."""


# ---------------------------------------------------------------------------
# report emission


def _scalar(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        if math.isfinite(v):
            return float(format(v, f".{FLOAT_DIGITS}g"))
        return str(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_scalar(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_scalar(x) for x in v]
    return v


def _as_dict(rec) -> dict:
    if isinstance(rec, dict):
        return rec
    if hasattr(rec, "as_record"):
        return rec.as_record()
    raise UsageError(f"cannot report a {type(rec).__name__}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{FLOAT_DIGITS}g")
    if isinstance(v, list):
        return json.dumps(v)
    return str(v)


def emit_report(records, fmt: str = "json", path=None, fields=None) -> str:
    """Serialize homogeneous records.

    Parameters
    ----------
    records : list of dict or objects with ``as_record()``
        All must be of one type with one key set.
    fmt : {"json", "csv"}
    path : path-like, optional
        Written in UTF-8 when given.
    fields : list of str, optional
        Column names, used for the header of an empty CSV.

    Returns
    -------
    str
        The serialized report.
    """
    records = list(records)
    kinds = {type(r) for r in records}
    if len(kinds) > 1:
        raise UsageError("records of mixed types cannot share one report")
    rows = [{k: _scalar(v) for k, v in _as_dict(r).items()} for r in records]
    keys = list(rows[0]) if rows else list(fields or [])
    for r in rows:
        if list(r) != keys:
            raise UsageError("records do not share one field list")
    if fmt == "json":
        text = json.dumps(rows, ensure_ascii=False, indent=1) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([_csv_cell(r[k]) for k in keys])
        text = buf.getvalue()
    else:
        raise UsageError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="")
    return text


# ---------------------------------------------------------------------------
# experiments


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    output_path: str | None = None
    format: str = "json"


def _party(spec: str) -> cointoss.PartyStrategy:
    if spec == "honest":
        return cointoss.PartyStrategy.honest()
    if spec in ("cheat0", "cheat1"):
        return cointoss.PartyStrategy.cheat_towards(int(spec[-1]))
    raise UsageError(f"unknown strategy {spec!r}")


def _cmd_cointoss(p: dict, seed: int):
    if p["bias_report"]:
        return cointoss.bias_report(p["protocol"]), False
    run = {"ambainis": cointoss.run_ambainis, "colbeck": cointoss.run_colbeck}[p["protocol"]]
    mode = "analytic" if p["trials"] == 0 else (p["trials"], seed)
    rep = run(_party(p["alice"]), _party(p["bob"]), mode)
    rec = {"protocol": p["protocol"], "alice": p["alice"], "bob": p["bob"], **rep.as_record()}
    return [rec], rep.p_abort == 1.0


def _cmd_vbct(p: dict, seed: int):
    if p["variant"] == 1:
        adv = None if p["delta"] == 0 else relnet.Biased(p["delta"], p["gamma"])
        rep = relnet.run_vbct1(p["theta"], p["bob_wish"], adv, p["poisson_mean"], seed,
                               p["trials"], p["engine"])
        ex = rep.extras
        rec = {"variant": 1, "theta": p["theta"], **rep.as_record(),
               "expected_p_zero": 0.5 * (1 + math.sin(p["theta"])) if p["bob_wish"] == 0
               else 0.5 * (1 - math.sin(p["theta"])),
               "undetected_exact": ex.get("exact"), "undetected_compact": ex.get("compact")}
        return [rec], rep.p_abort == 1.0
    if p["info_bound"]:
        rows = []
        for n in range(2, 10):
            full, single = relnet.vbct2_alice_info_bound(p["alpha0"], p["alpha1"], n)
            rows.append({"N": n, "d_full": full, "d_single": single, "gap": full - single})
        return rows, False
    if p["adversary"] == "overbias":
        adv = relnet.BobOverbias(p["delta"])
    else:
        adv = {"none": None, "split-z": relnet.ALICE_SPLIT_Z}[p["adversary"]]
    rep = relnet.run_vbct2(p["alpha0"], p["alpha1"], p["batch_size"], p["trust_exponent"], adv,
                           seed, p["bob_wish"], p["trials"], p["engine"])
    ex = rep.extras
    rec = {"variant": 2, "adversary": p["adversary"], **rep.as_record(),
           "bias_learned": ex.get("bias_learned"), "exposed": ex.get("exposed"),
           "analytic_detection": ex.get("analytic_detection")}
    return [rec], rep.p_abort == 1.0


def _cmd_twoparty(p: dict, seed: int):
    if p["ot"]:
        d = attacklab.ot_demo()
        return [{k: v for k, v in d.items() if np.isscalar(v)}], False
    if p["thm3"] is not None:
        table = attacklab.ProbFunctionTable.from_entries(*p["thm3"])
        rows = []
        for eta0 in attacklab.thm3_default_grid():
            p_c = attacklab.helstrom_cheat_2x2(table, float(eta0))[0]
            p_h = attacklab.honest_best(table, [eta0, 1 - eta0])
            rows.append({"eta0": float(eta0), "p_honest": p_h, "p_cheat": p_c,
                         "advantage": p_c - p_h})
        return rows, False
    rows = attacklab.sweep_3x3(p["max_alphabet"], grid=p["grid"])
    return rows, False


def _cmd_randexp(p: dict, seed: int):
    if p["mode"] == "classical-analysis":
        m, comp = randexp.classical_attack_analysis(p["epsilon"])
        return [{"epsilon": p["epsilon"], "max_attacks": m, "compression_bits": comp}], False
    cfg = randexp.ExpansionConfig(p["epsilon"], p["zeta"], p["credit_mode"], seed)
    x = extract.BitString.random(p["x_bits"], _rng.substream(seed, 40))
    if p["mode"] == "protocol-n":
        triples = [randexp.DeviceTriple(_device(p, seed, k)) for k in range(p["triples"])]
        results = [randexp.run_protocol_n(x, triples, cfg)]
    else:
        triple = randexp.DeviceTriple(_device(p, seed, 0))
        results = [randexp.run_protocol_a(x, triple, cfg) for _ in range(p["repeat"])]
    rows = [{**r.as_record(), "credit_mode": cfg.credit_mode,
             "output_hex": r.output.to_hex() if r.output is not None else ""} for r in results]
    return rows, any(r.outcome == "abort" for r in results)


def _device(p: dict, seed: int, k: int):
    kind = p["device"]
    if p["mode"] == "protocol-n" and p["classical_index"] >= 0 and k != p["classical_index"]:
        kind = "honest"
    if kind == "honest":
        return randexp.HonestGhz()
    if kind == "classical":
        return randexp.ClassicalProgrammed(randexp.best_classical_assignment())
    if kind == "replay":
        return randexp.Replay(seed=seed)
    raise UsageError(f"unknown device {kind!r}")


def _cmd_entropy(p: dict, seed: int):
    probs = np.asarray(p["probs"], dtype=float)
    if probs.sum() <= 0 or np.any(probs < 0):
        raise UsageError("probabilities must be nonnegative with positive sum")
    if abs(probs.sum() - 1.0) > 1e-9:
        raise UsageError("probabilities must sum to 1")
    probs = probs / probs.sum()
    joint = extract.JointDistribution.trivial_side(probs)
    rows = [{"quantity": f"renyi_{a:g}", "value": extract.renyi_entropy(probs, a)} for a in p["alpha"]]
    rows.append({"quantity": "min", "value": extract.renyi_entropy(probs, math.inf)})
    rows.append({"quantity": f"smooth_min_{p['epsilon']:g}",
                 "value": extract.smooth_entropy(joint, p["epsilon"], "min")})
    rows.append({"quantity": f"smooth_max_{p['epsilon']:g}",
                 "value": extract.smooth_entropy(joint, p["epsilon"], "max")})
    rows.append({"quantity": "collision_probability",
                 "value": extract.collision_uniformity(probs)[0]})
    return rows, False


def _cmd_nonlocal(p: dict, seed: int):
    games = ["ghz", "chsh", "prc(1)", "prc(2)", "prc(3)"] if p["game"] == "all" else [p["game"]]
    rows = []
    for g in games:
        classical, total = randexp.classical_brute_force(g)
        if g == "chsh":
            q, passed = randexp.quantum_values(g), None
        elif g == "prc(3)":
            q, passed = None, None
        else:
            passed, _ = randexp.quantum_values(g)
            q = None
        rows.append({"game": g, "classical": classical, "terms": total, "quantum_value": q,
                     "quantum_passes_all": passed})
    return rows, False


def _cmd_relativistic(p: dict, seed: int):
    layout = relnet.SiteLayout.line(2, p["separation"])
    if p["protocol"] == "coin":
        rep = relnet.run_rel_coin_toss(_rel(p["alice"]), _rel(p["bob"]), layout, p["trials"], seed)
        return [{"protocol": "coin", **rep.as_record()}], rep.p_abort == 1.0
    if p["protocol"] == "die":
        faces = p["faces"]
        res = relnet.die_roll_frequencies(faces, p["die_n"], _rel(p["alice"]), _rel(p["bob"]),
                                          layout, p["trials"], seed)
        rows = [{"face": str(k), "frequency": float(v)} for k, v in enumerate(res["faces"])]
        rows.append({"face": "abort", "frequency": float(res["p_abort"])})
        return rows, res["p_abort"] == 1.0
    adv = {"none": "none", "flip": "alice_flips"}[p["rbc_adversary"]]
    res = relnet.run_rbc1(p["bit"], p["p"], p["sustain"], adv, seed, p["separation"])
    return [{"protocol": "rbc1", "status": res.status, "bit": res.bit,
             "unveil_spacelike": res.unveil_spacelike}], res.status == "aborted"


def _rel(spec: str) -> relnet.RelStrategy:
    if spec == "honest":
        return relnet.RelStrategy()
    kind, _, val = spec.partition(":")
    if kind in ("fixed", "delayed") and val:
        return relnet.RelStrategy(kind, int(val))
    raise UsageError(f"unknown relativistic strategy {spec!r} (honest, fixed:V, delayed:V)")


COMMANDS = {"cointoss": _cmd_cointoss, "vbct": _cmd_vbct, "twoparty": _cmd_twoparty,
            "randexp": _cmd_randexp, "entropy": _cmd_entropy, "nonlocal": _cmd_nonlocal,
            "relativistic": _cmd_relativistic}


def run_suite(config: RunConfig) -> int:
    """Run one experiment, write its report and return the exit code."""
    if config.subcommand not in COMMANDS:
        raise UsageError(f"unknown subcommand {config.subcommand!r}")
    try:
        records, aborted = COMMANDS[config.subcommand](config.parameters, config.seed)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    text = emit_report(records, config.format, config.output_path)
    if config.output_path is None:
        sys.stdout.write(text)
    return EXIT_ABORT if aborted else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _DefaultsFormatter(argparse.HelpFormatter):
    """Shows the default of every option, including ones without help text."""

    def _get_help_string(self, action):
        text = action.help or ""
        if (action.default is not argparse.SUPPRESS and action.option_strings
                and "%(default)" not in text):
            text += " (default: %(default)s)"
        return text.strip()


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    fmt = _DefaultsFormatter
    top = _Parser(prog="qcrypt-lab", description=__doc__.splitlines()[0], formatter_class=fmt)
    sub = top.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_, description=help_, formatter_class=fmt)
        sp.add_argument("--seed", type=int, default=0, help="master seed")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", default=None, help="report path (stdout if omitted)")
        sp.add_argument("--config", default=None, help="JSON file of option defaults")
        return sp

    sp = add("cointoss", "Quantum coin tossing: analytic or sampled outcome statistics")
    sp.add_argument("--protocol", choices=("ambainis", "colbeck"), default="colbeck")
    sp.add_argument("--alice", choices=("honest", "cheat0", "cheat1"), default="honest")
    sp.add_argument("--bob", choices=("honest", "cheat0", "cheat1"), default="honest")
    sp.add_argument("--trials", type=int, default=0, help="0 for the exact analysis")
    sp.add_argument("--bias-report", action="store_true", help="tabulate every cheating strategy")

    sp = add("vbct", "Variable-bias coin toss (variant 1 or 2)")
    sp.add_argument("--variant", type=int, choices=(1, 2), default=1)
    sp.add_argument("--theta", type=float, default=math.pi / 4, help="variant 1 angle")
    sp.add_argument("--bob-wish", type=int, choices=(0, 1), default=0,
                    help="variant 1 target / variant 2 bias choice")
    sp.add_argument("--delta", type=float, default=0.0, help="cheating shift (0: honest)")
    sp.add_argument("--gamma", type=float, default=1.0, help="variant 1: probability Alice tampers")
    sp.add_argument("--poisson-mean", type=float, default=50.0)
    sp.add_argument("--alpha0", type=float, default=math.sqrt(0.8))
    sp.add_argument("--alpha1", type=float, default=math.sqrt(0.2))
    sp.add_argument("--batch-size", type=int, default=8, help="variant 2 states per batch")
    sp.add_argument("--trust-exponent", type=int, default=3, help="variant 2: trust prob 2^-M")
    sp.add_argument("--adversary", choices=("none", "overbias", "split-z"), default="none")
    sp.add_argument("--info-bound", action="store_true", help="variant 2 distinguishability table")
    sp.add_argument("--engine", choices=("batch", "event"), default="batch")
    sp.add_argument("--trials", type=int, default=10000)

    sp = add("twoparty", "Cheating attacks on two-party function evaluation")
    sp.add_argument("--sweep-3x3", action="store_true", help="sweep canonical 3x3 tables (default)")
    sp.add_argument("--max-alphabet", type=int, default=4)
    sp.add_argument("--grid", type=int, default=11, help="honest-operator grid levels")
    sp.add_argument("--ot", action="store_true", help="oblivious-transfer attack demo")
    sp.add_argument("--thm3", type=float, nargs=4, default=None, metavar=("P00", "P01", "P10", "P11"),
                    help="scan a 2x2 probabilistic table over the prior")

    sp = add("randexp", "Randomness expansion with GHZ device triples")
    sp.add_argument("--mode", choices=("protocol-a", "protocol-n", "classical-analysis"),
                    default="protocol-a")
    sp.add_argument("--device", choices=("honest", "classical", "replay"), default="honest")
    sp.add_argument("--x-bits", type=int, default=400, help="length of Alice's private string")
    sp.add_argument("--epsilon", type=float, default=1e-6)
    sp.add_argument("--zeta", type=float, default=2.0, help="conjectured credit per test")
    sp.add_argument("--credit-mode", choices=("classical-threat", "conjectured"),
                    default="classical-threat")
    sp.add_argument("--triples", type=int, default=2, help="protocol-n sub-labs")
    sp.add_argument("--classical-index", type=int, default=-1,
                    help="protocol-n: sub-lab that gets --device (others honest)")
    sp.add_argument("--repeat", type=int, default=1, help="protocol-a: feed the same x this often")

    sp = add("entropy", "Entropies of a finite distribution")
    sp.add_argument("--probs", type=_floats, default=[0.5, 0.25, 0.125, 0.125])
    sp.add_argument("--alpha", type=_floats, default=[0.0, 1.0, 2.0])
    sp.add_argument("--epsilon", type=float, default=0.1)

    sp = add("nonlocal", "Classical and quantum values of GHZ, CHSH and PRC games")
    sp.add_argument("--game", choices=("ghz", "chsh", "prc(1)", "prc(2)", "prc(3)", "all"),
                    default="all")

    sp = add("relativistic", "Relativistic coin toss, die roll and bit commitment")
    sp.add_argument("--protocol", choices=("coin", "die", "rbc1"), default="coin")
    sp.add_argument("--alice", default="honest", help="honest, fixed:V or delayed:V")
    sp.add_argument("--bob", default="honest", help="honest, fixed:V or delayed:V")
    sp.add_argument("--separation", type=float, default=1.0)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--faces", type=_floats, default=[1 / 3, 1 / 3, 1 / 3])
    sp.add_argument("--die-n", type=int, default=3, help="die string length")
    sp.add_argument("--bit", type=int, choices=(0, 1), default=0)
    sp.add_argument("--p", type=int, default=8, help="rbc1 modulus exponent")
    sp.add_argument("--sustain", type=int, default=2, help="rbc1 extra rounds")
    sp.add_argument("--rbc-adversary", choices=("none", "flip"), default="none")
    for sp in sub.choices.values():
        for action in sp._actions:
            if action.help is None:
                action.help = "(default: %(default)s)"
    return top


def parse_config(argv) -> RunConfig:
    """Flags over ``--config`` JSON over built-in defaults."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
        if not isinstance(overrides, dict):
            raise UsageError("config file must hold a JSON object")
        sp = parser._subparsers._group_actions[0].choices[args.subcommand]
        known = {a.dest for a in sp._actions}
        bad = sorted(set(k.replace("-", "_") for k in overrides) - known)
        if bad:
            raise UsageError(f"unknown config keys: {', '.join(bad)}")
        sp.set_defaults(**{k.replace("-", "_"): v for k, v in overrides.items()})
        args = parser.parse_args(argv)
    params = {k: v for k, v in vars(args).items()
              if k not in ("subcommand", "seed", "format", "output", "config")}
    if not 0 <= args.seed < 2 ** 64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    return RunConfig(args.subcommand, params, args.seed, args.output, args.format)


def main(argv=None) -> int:
    try:
        return run_suite(parse_config(argv))
    except UsageError as exc:
        sys.stderr.write(f"qcrypt-lab: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
