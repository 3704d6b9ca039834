"""Command-line front end.

Exit status: 0 when a verdict was computed (true or false), 2 when the
evaluator ran out of budget, 1 on usage, parse or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from .constructions import (
    PreconditionError,
    canonicalize_local_to_sd,
    entropy,
    entropy_sections,
    extend_single_valued,
    measurement_prior,
    probabilistic_lift,
    realize_strong_determinism,
    realize_weak_det_z_indep,
)
from .derivation import RULE_NAMES, entail
from .evaluate import EvalContext, EvaluationError, Verdict, eval_possibilistic, eval_probabilistic
from .formula import ParseError, parse, parse_atom
from .io import FormatError, dumps_csv, format_rational, parse_value, read_team, team_to_json, write_team
from .nogo import (
    KSSpec,
    epr_formula,
    epr_team,
    ghz_parity_check,
    ghz_team_minimal,
    hardy_team_minimal,
    is_ghz_team,
    is_hardy_team,
    ks_team_canonical,
    verify_no_local_model,
    verify_no_noncontextual,
)
from .probe import ProbeConfig, search_probabilistic_realization
from .properties import PropertyId, check
from .quantum import PRESETS, NonLocalGame, QuantumError, game_to_team, outcome_distribution, quantum_team, snap
from .team import ProbabilisticTeam, Team, TeamError, collapse

SCHEMA = 1
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    """Text lines for humans plus a JSON payload; both are deterministic."""

    command: str
    lines: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    status: int = EXIT_OK

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def to_json(self) -> str:
        return json.dumps({"schema": SCHEMA, "command": self.command, **self.data}, indent=2, sort_keys=True)


def _q(x) -> str:
    return format_rational(Fraction(x))


def _load(path: str):
    try:
        return read_team(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _emit(team, path: Optional[str], rep: Report) -> None:
    if path:
        write_team(team, path)
        rep.data["emitted"] = path
        rep.say(f"wrote {path}")
    else:
        rep.say(dumps_csv(team).rstrip("\n"))
    rep.data["team"] = team_to_json(team)


def _ctx(args) -> EvalContext:
    domain = tuple(_parse_values(args.domain)) if getattr(args, "domain", None) else None
    return EvalContext(domain=domain, k_max=args.k_max, budget=args.budget)


def _parse_values(text: str):
    return [parse_value(t) for t in text.split(",") if t.strip()]


def _verdict(rep: Report, v: Verdict) -> None:
    rep.data["verdict"] = v.value
    rep.say(v.value)
    if v is Verdict.INCONCLUSIVE:
        rep.status = EXIT_INCONCLUSIVE


# ---------------------------------------------------------------- subcommands


def cmd_eval(args, rep: Report) -> None:
    team = _load(args.team)
    phi = parse(args.formula, warn_roles=False)
    rep.data["formula"] = str(phi)
    if args.prob:
        if not isinstance(team, ProbabilisticTeam):
            raise UsageError("--prob needs a team file with a prob column")
        value = eval_probabilistic(team, phi, _ctx(args))
        rep.data["semantics"] = "probabilistic"
        _verdict(rep, Verdict.TRUE if value else Verdict.FALSE)
        return
    if isinstance(team, ProbabilisticTeam):
        team = collapse(team)
    rep.data["semantics"] = "possibilistic"
    _verdict(rep, eval_possibilistic(team, phi, _ctx(args)))


def cmd_property(args, rep: Report) -> None:
    team = _load(args.team)
    if args.prob and not isinstance(team, ProbabilisticTeam):
        raise UsageError("--prob needs a team file with a prob column")
    if not args.prob and isinstance(team, ProbabilisticTeam):
        team = collapse(team)
    results = {}
    for p in args.check:
        results[p] = check(PropertyId(p), team)
        rep.say(f"{p}: {'true' if results[p] else 'false'}")
    rep.data["semantics"] = "probabilistic" if args.prob else "possibilistic"
    rep.data["properties"] = results


REALIZERS: dict[str, Callable[[Team], Team]] = {
    "sv": extend_single_valued,
    "sd": realize_strong_determinism,
    "wdzi": realize_weak_det_z_indep,
    "canon": canonicalize_local_to_sd,
}


def cmd_realize(args, rep: Report) -> None:
    team = _load(args.team)
    if isinstance(team, ProbabilisticTeam):
        team = collapse(team)
    out = REALIZERS[args.mode](team)
    rep.data["mode"] = args.mode
    rep.data["rows"] = len(out.rows)
    _emit(out, args.emit, rep)


def cmd_lift(args, rep: Report) -> None:
    team = _load(args.team)
    if isinstance(team, ProbabilisticTeam):
        team = collapse(team)
    _emit(probabilistic_lift(team), args.emit, rep)


def cmd_entropy(args, rep: Report) -> None:
    team = _load(args.team)
    pt = team if isinstance(team, ProbabilisticTeam) else probabilistic_lift(team)
    rep.data["lifted"] = not isinstance(team, ProbabilisticTeam)
    h_theta = entropy(measurement_prior(pt))
    sections = entropy_sections(pt)
    rep.data["measurement_entropy"] = h_theta
    rep.data["sections"] = [{"key": list(k), "entropy": h} for k, h in sections.items()]
    rep.say(f"H(theta) = {h_theta:.12f}")
    for k, h in sections.items():
        rep.say(f"H(eta | {', '.join(map(str, k))}) = {h:.12f}")


def cmd_probe(args, rep: Report) -> None:
    team = _load(args.team)
    if isinstance(team, ProbabilisticTeam):
        team = collapse(team)
    props = parse(args.formula, warn_roles=False) if args.formula else [PropertyId(p) for p in args.prop]
    cfg = ProbeConfig(restarts=args.restarts, iterations=args.iterations, seed=args.seed, min_weight=args.min_weight)
    res = search_probabilistic_realization(team, props, cfg)
    rep.data.update(residual=res.residual, restarts=res.restarts, witness_found=res.witness is not None, exact=res.exact)
    rep.say(f"restarts: {res.restarts}")
    rep.say(f"best max-residual: {res.residual:.3e}")
    if res.witness is None:
        rep.say("no witness")
        return
    rep.say(f"witness ({'exact' if res.exact else 'approximate after rationalization'}):")
    _emit(res.witness, args.emit, rep)


def cmd_entail(args, rep: Report) -> None:
    try:
        text = Path(args.premises).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {args.premises}: {e.strerror}") from None
    premises = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    for p in premises:
        parse_atom(p)
    res = entail(premises, args.goal, depth=args.depth, side_len=args.side_len, max_facts=args.max_facts)
    rep.data.update(rounds=res.rounds, facts=res.facts, derived=bool(res))
    if res.derivation is None:
        rep.say("not derived: " + "; ".join(res.diagnostics))
        rep.data["diagnostics"] = res.diagnostics
        # saturation closes the search; a depth or fact bound leaves it open
        if not any(d.startswith("saturated") for d in res.diagnostics):
            rep.status = EXIT_INCONCLUSIVE
        return
    rep.say(f"derived in {res.rounds} round(s), {res.derivation.rule_steps} rule step(s)")
    rep.lines.extend(res.derivation.lines())
    rep.data["derivation"] = [
        {"fact": str(s.fact), "rule": s.rule, "rule_name": RULE_NAMES.get(s.rule), "inputs": [j + 1 for j in s.inputs]}
        for s in res.derivation.steps
    ]


def cmd_nogo(args, rep: Report) -> None:
    case = args.case
    rep.data["case"] = case
    if case == "epr":
        team = epr_team()
        v = eval_possibilistic(team, epr_formula(), EvalContext(k_max=1))
        rep.say(f"formula: {epr_formula()}")
        rep.say(f"verdict: {v.value} (k_max = 1; single-valuedness leaves one hidden value)")
        rep.data["verdict"] = v.value
        rep.data["no_model"] = not bool(v)
    elif case in ("ghz", "hardy"):
        team = ghz_team_minimal() if case == "ghz" else hardy_team_minimal()
        recognized = is_ghz_team(team) if case == "ghz" else is_hardy_team(team)
        no_model, cert = verify_no_local_model(team)
        rep.say(f"recognized as a {case.upper()} team: {'true' if recognized else 'false'}")
        rep.say(f"no local model: {'true' if no_model else 'false'}")
        rep.say(f"instructions searched: {cert.instructions}; consistent with the team: {len(cert.consistent)}")
        rep.say(f"rows no consistent instruction produces: {len(cert.uncovered)}")
        rep.data.update(
            recognized=recognized,
            no_model=no_model,
            instructions=cert.instructions,
            consistent=len(cert.consistent),
            uncovered=[list(a) + list(b) for a, b in cert.uncovered],
        )
        if case == "ghz":
            parity = ghz_parity_check()
            rep.say(f"parity argument: {'holds' if parity else 'fails'}")
            rep.data["parity"] = parity
    else:
        ks = KSSpec()
        team = ks_team_canonical(ks)
        no_model, report = verify_no_noncontextual(ks)
        rep.say(f"no non-contextual assignment: {'true' if no_model else 'false'}")
        rep.say(f"assignments searched: {report['assignments']}; non-contextual: {report['noncontextual']}")
        rep.say(f"parity cross-check agrees: {'true' if report['parity_agrees'] else 'false'}")
        rep.data.update(no_model=no_model, **report)
    if args.emit:
        write_team(team, args.emit)
        rep.data["emitted"] = args.emit
        rep.say(f"wrote {args.emit}")


def cmd_quantum(args, rep: Report) -> None:
    system = PRESETS[args.preset]()
    outcomes = system.O
    table = {}
    rep.say("measurement | " + "  ".join(",".join(map(str, b)) for b in outcomes))
    for a in system.M:
        dist = outcome_distribution(system, a)
        row = [_q(snap(dist[b])) if dist[b] > 1e-9 else "0" for b in outcomes]
        table[",".join(map(str, a))] = dict(zip((",".join(map(str, b)) for b in outcomes), row))
        rep.say(",".join(map(str, a)) + " | " + "  ".join(row))
    rep.data["preset"] = args.preset
    rep.data["distribution"] = table
    pt = quantum_team(system)
    if args.emit:
        write_team(pt, args.emit)
        rep.data["emitted"] = args.emit
        rep.say(f"wrote {args.emit}")
    rep.data["team"] = team_to_json(pt)


def _load_game(path: str) -> NonLocalGame:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: line {e.lineno}: {e.msg}") from None
    try:
        sets = [tuple(spec[k]) for k in ("I_A", "I_B", "O_A", "O_B")]
        V = spec["V"]
    except KeyError as e:
        raise UsageError(f"{path}: missing field {e.args[0]}") from None
    if isinstance(V, dict):
        table = {tuple(json.loads(f"[{k}]")): int(v) for k, v in V.items()}
    else:
        table = {tuple(r[:4]): int(r[4]) for r in V}
    I_A, I_B, O_A, O_B = sets
    return NonLocalGame.from_table(I_A, I_B, O_A, O_B, table)


def cmd_game(args, rep: Report) -> None:
    g = _load_game(args.spec)
    team = game_to_team(g)
    rep.data["rows"] = len(team.rows)
    rep.say(f"rows: {len(team.rows)}")
    if args.to_team:
        write_team(team, args.to_team)
        rep.data["emitted"] = args.to_team
        rep.say(f"wrote {args.to_team}")
    else:
        rep.say(dumps_csv(team).rstrip("\n"))
    rep.data["team"] = team_to_json(team)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report instead of text")
    p = _Parser(prog="teamsem", description="Model checking for (probabilistic) team semantics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def evaluation(sp):
        sp.add_argument("--k-max", type=int, default=4, help="largest fresh-sort size tried")
        sp.add_argument("--budget", type=int, default=1_000_000, help="node budget of the search")
        sp.add_argument("--domain", help="comma-separated quantifier domain (default: values of the team)")

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula on a team")
    s.add_argument("--team", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--prob", action="store_true", help="probabilistic semantics")
    evaluation(s)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("property", parents=[common], help="check named properties")
    s.add_argument("--team", required=True)
    s.add_argument("--check", required=True, action="append", choices=[p.value for p in PropertyId])
    s.add_argument("--prob", action="store_true")
    s.set_defaults(func=cmd_property)

    s = sub.add_parser("realize", parents=[common], help="build a hidden-variable realization")
    s.add_argument("--team", required=True)
    s.add_argument("--mode", required=True, choices=sorted(REALIZERS))
    s.add_argument("--emit")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("lift", parents=[common], help="probabilistic lift of a z-independent team")
    s.add_argument("--team", required=True)
    s.add_argument("--emit")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("entropy-report", parents=[common], help="entropies of the measurement prior and sections")
    s.add_argument("--team", required=True)
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("pr-probe", parents=[common], help="numerically search for a probabilistic realization")
    s.add_argument("--team", required=True)
    s.add_argument("--prop", action="append", default=[], choices=[p.value for p in PropertyId if p is not PropertyId.LOCAL])
    s.add_argument("--formula", help="conjunction of atoms instead of --prop")
    s.add_argument("--restarts", type=int, default=10_000)
    s.add_argument("--iterations", type=int, default=300)
    s.add_argument("--min-weight", type=float, default=0.01)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("entail", parents=[common], help="derive an atom from premises")
    s.add_argument("--premises", required=True, help="file with one atom per line")
    s.add_argument("--goal", required=True)
    s.add_argument("--depth", type=int, default=6)
    s.add_argument("--side-len", type=int, default=3)
    s.add_argument("--max-facts", type=int, default=200_000)
    s.set_defaults(func=cmd_entail)

    s = sub.add_parser("nogo", parents=[common], help="run a no-go check")
    s.add_argument("--case", required=True, choices=["epr", "ghz", "hardy", "ks"])
    s.add_argument("--emit")
    s.set_defaults(func=cmd_nogo)

    s = sub.add_parser("quantum", parents=[common], help="Born-rule table of a preset system")
    s.add_argument("--preset", required=True, choices=sorted(PRESETS))
    s.add_argument("--emit")
    s.set_defaults(func=cmd_quantum)

    s = sub.add_parser("game", parents=[common], help="team of winning plays of a non-local game")
    s.add_argument("--spec", required=True)
    s.add_argument("--to-team")
    s.set_defaults(func=cmd_game)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:  # --help and --version
            return int(e.code or 0)
        if args.command == "pr-probe" and not args.prop and not args.formula:
            raise UsageError("pr-probe needs --prop or --formula")
        rep = Report(args.command)
        args.func(args, rep)
    except UsageError as e:
        print(f"error: {e}", file=err)
        return EXIT_ERROR
    except (ParseError, FormatError, TeamError, PreconditionError, EvaluationError, QuantumError, ValueError) as e:
        print(f"error: {e}", file=err)
        return EXIT_ERROR
    print(rep.to_json() if args.json else "\n".join(rep.lines), file=out)
    return rep.status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
