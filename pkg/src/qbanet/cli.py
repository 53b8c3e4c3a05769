"""Command-line scenario runner and report emitter.

Subcommands:

  keygen     simulate both links, reconcile, write hex key blocks + stats
  qba        run the full pipeline for one scenario, print a RunReport
  security   evaluate the finite-key bound chain (supports sweeps)
  netplan    channel budgets and communication complexity
  classical  oral / signature baselines

All emitted JSON is deterministic for a fixed seed and config; wall-clock
duration lives in the envelope, outside the reproducible report body.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import keysim, netplan, qba, secparams
from .otuh import ProtocolError
from .rng import stream

SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    """Reproducible record of one pipeline run."""

    scenario: dict
    link_stats: dict
    security: dict
    transcript_digest: str
    verdict: dict
    status: str = "completed"
    schema_version: int = SCHEMA_VERSION
    transcript: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "status": self.status,
            "scenario": self.scenario,
            "link_stats": self.link_stats,
            "security": self.security,
            "transcript_digest": self.transcript_digest,
            "verdict": self.verdict,
        }


def _simulate_and_reconcile(scenario: qba.ScenarioConfig):
    """Both links -> reconciled key strings + stats; None keys on EC failure."""
    out = {}
    for name, params in (("alice_bob", scenario.link_ab), ("alice_charlie", scenario.link_ac)):
        keys, stats = keysim.simulate_link(
            params, scenario.n_events, rng=stream(scenario.seed, f"link-{name}")
        )
        agreed, leakage, ok = keysim.reconcile(
            keys.x_a, keys.x_b, stats, rng=stream(scenario.seed, f"reconcile-{name}")
        )
        stats.leakage_bits = leakage
        out[name] = (agreed if ok else None, stats)
    return out


def run_pipeline(scenario: qba.ScenarioConfig) -> RunReport:
    """keysim -> two signing rounds -> majority -> IC checks -> bounds."""
    scenario.validate()
    links = _simulate_and_reconcile(scenario)
    stats_dict = {name: stats.to_dict() for name, (_, stats) in links.items()}

    key_ab, stats_ab = links["alice_bob"]
    key_ac, stats_ac = links["alice_charlie"]
    if key_ab is None or key_ac is None:
        verdict = qba.Verdict(
            outputs={}, lists={}, aborted=True, status="aborted: reconciliation failure"
        )
        return RunReport(
            scenario=scenario.to_dict(),
            link_stats=stats_dict,
            security={},
            transcript_digest="",
            verdict=verdict.to_dict(),
            status="aborted: reconciliation failure",
        )

    blocks = keysim.build_three_party_keys(key_ab, key_ac, scenario.l, scenario.seed)
    transcript, verdict = qba.run_three_party(scenario, blocks)

    security = {}
    for rnd in (1, 2):
        m_signed = (
            scenario.messages[1]
            if scenario.adversary_strategy == "equivocate" and rnd == 2
            else scenario.messages[0]
        )
        per_link = {}
        for name, stats in (("alice_bob", stats_ab), ("alice_charlie", stats_ac)):
            inputs = secparams.SecurityInputs(
                l=scenario.l,
                m_len=8 * len(m_signed),
                n_x=stats.n_x,
                n_z=stats.n_z,
                e_z=stats.e_z_obs,
                e_x=stats.e_x_obs,
                f_ec=stats.f_ec,
                eps_ec=stats.eps_ec,
            )
            per_link[name] = secparams.security_bounds(inputs).to_dict()
        limiting = max(per_link, key=lambda n: per_link[n]["eps_for"])
        security[f"round_{rnd}"] = {
            "limited_by": limiting,
            "bounds": per_link[limiting],
            "links": per_link,
        }

    return RunReport(
        scenario=scenario.to_dict(),
        link_stats=stats_dict,
        security=security,
        transcript_digest=transcript.digest(),
        verdict=verdict.to_dict(),
        transcript=transcript.to_dict(),
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON (line {exc.lineno}, col {exc.colno})") from exc


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _envelope(report_body: dict, started: float) -> dict:
    return {
        "report": report_body,
        "duration_seconds": time.perf_counter() - started,
    }


def cmd_keygen(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config) if args.config else {}
    if args.seed is not None:
        cfg["seed"] = args.seed
    try:
        scenario = qba.ScenarioConfig.from_dict(cfg)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad keygen config: {exc}") from exc

    links = _simulate_and_reconcile(scenario)
    key_ab, stats_ab = links["alice_bob"]
    key_ac, stats_ac = links["alice_charlie"]
    if key_ab is None or key_ac is None:
        print("aborted: reconciliation failure", file=sys.stderr)
        return 1
    try:
        blocks = keysim.build_three_party_keys(key_ab, key_ac, scenario.l, scenario.seed)
    except ProtocolError as exc:
        print(f"insufficient key material: {exc}", file=sys.stderr)
        return 1

    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for owner, blks in blocks.blocks.items():
        payload = {
            "schema_version": SCHEMA_VERSION,
            "seed": scenario.seed,
            "owner": owner,
            "l": scenario.l,
            "blocks": [
                {"role": b.role, "round": b.round, "bits": b.bits.hex()} for b in blks
            ],
        }
        (outdir / f"keys_{owner.lower()}.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n"
        )
    stats_payload = {
        "schema_version": SCHEMA_VERSION,
        "seed": scenario.seed,
        "alice_bob": stats_ab.to_dict(),
        "alice_charlie": stats_ac.to_dict(),
    }
    (outdir / "link_stats.json").write_text(
        json.dumps(stats_payload, indent=2, sort_keys=True) + "\n"
    )
    print(
        json.dumps(
            {"written": sorted(p.name for p in outdir.glob("*.json")),
             "duration_seconds": time.perf_counter() - started},
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def cmd_qba(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config) if args.config else {}
    if args.seed is not None:
        cfg["seed"] = args.seed
    try:
        scenario = qba.ScenarioConfig.from_dict(cfg)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad scenario: {exc}") from exc
    report = run_pipeline(scenario)
    _emit(_envelope(report.to_dict(), started), args.out)
    return 1 if report.status.startswith("aborted") else 0


def cmd_security(args) -> int:
    started = time.perf_counter()
    reports = []
    try:
        for l in args.l:
            for eps_gamma in args.eps_gamma:
                inputs = secparams.SecurityInputs(
                    l=l,
                    m_len=args.m_len,
                    n_x=args.n_x,
                    n_z=args.n_z,
                    e_z=args.e_z,
                    e_x=args.e_x,
                    f_ec=args.f_ec,
                    eps_gamma=eps_gamma,
                    eps_ec=args.eps_ec,
                )
                reports.append(secparams.security_bounds(inputs).to_dict())
    except ValueError as exc:
        raise ConfigError(f"bad security parameters: {exc}") from exc
    body = reports[0] if len(reports) == 1 else {"sweep": reports}
    _emit(_envelope(body, started), args.out)
    return 0


def cmd_netplan(args) -> int:
    started = time.perf_counter()
    body: dict = {}
    try:
        if args.users is not None:
            if args.subnets is not None:
                body["channels"] = netplan.channels_required(args.users, args.subnets).to_dict()
            choice = netplan.optimal_subnets(args.users)
            body["optimal_subnets"] = {"k": choice.k, "closed_form": choice.closed_form}
        if args.parties is not None:
            if args.faulty is None:
                raise ConfigError("--parties needs --faulty")
            body["comm_complexity"] = {
                "n_parties": args.parties,
                "f_faulty": args.faulty,
                "qds_rounds": netplan.comm_complexity(args.parties, args.faulty),
            }
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not body:
        raise ConfigError("netplan needs --users and/or --parties")
    _emit(_envelope(body, started), args.out)
    return 0


def cmd_classical(args) -> int:
    started = time.perf_counter()
    cfg = _load_config(args.config) if args.config else {}
    if args.seed is not None:
        cfg["seed"] = args.seed
    cfg.setdefault("adversary_strategy", "honest")
    try:
        scenario = qba.ScenarioConfig.from_dict(cfg)
        if args.faulty is not None:
            scenario.faulty_party = args.faulty or None
            scenario.commander_loyal = scenario.faulty_party != qba.ALICE
        if args.kind == "oral":
            transcript, verdict = qba.run_classical_oral(args.parties, scenario)
        else:
            transcript, verdict = qba.run_classical_signature(scenario)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    body = {
        "kind": args.kind,
        "n_parties": args.parties if args.kind == "oral" else 3,
        "faulty_party": scenario.faulty_party,
        "verdict": verdict.to_dict(),
        "transcript": transcript.to_dict(),
    }
    _emit(_envelope(body, started), args.out)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qbanet",
        description="Three-party Byzantine agreement testbed over simulated entangled links",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="simulate links and write key blocks")
    kg.add_argument("--config", help="scenario config JSON")
    kg.add_argument("--seed", type=int)
    kg.add_argument("--out", help="output directory", default=".")
    kg.set_defaults(fn=cmd_keygen)

    qb = sub.add_parser("qba", help="run a full agreement scenario")
    qb.add_argument("--config", help="scenario config JSON")
    qb.add_argument("--seed", type=int)
    qb.add_argument("--out", help="write the report JSON here as well")
    qb.set_defaults(fn=cmd_qba)

    se = sub.add_parser("security", help="finite-key bound chain")
    se.add_argument("--l", type=int, action="append", default=None)
    se.add_argument("--m-len", type=int, default=896, dest="m_len")
    se.add_argument("--n-x", type=int, default=1_050_000, dest="n_x")
    se.add_argument("--n-z", type=int, default=740_000, dest="n_z")
    se.add_argument("--e-z", type=float, default=0.0342, dest="e_z")
    se.add_argument("--e-x", type=float, default=0.0476, dest="e_x")
    se.add_argument("--f-ec", type=float, default=1.1648, dest="f_ec")
    se.add_argument("--eps-gamma", type=float, action="append", default=None, dest="eps_gamma")
    se.add_argument("--eps-ec", type=float, default=1e-10, dest="eps_ec")
    se.add_argument("--out")
    se.set_defaults(fn=cmd_security)

    np_ = sub.add_parser("netplan", help="channel budgets and complexity")
    np_.add_argument("--users", type=int)
    np_.add_argument("--subnets", type=int)
    np_.add_argument("--parties", type=int)
    np_.add_argument("--faulty", type=int)
    np_.add_argument("--out")
    np_.set_defaults(fn=cmd_netplan)

    cl = sub.add_parser("classical", help="oral / signature baselines")
    cl.add_argument("kind", choices=("oral", "signature"))
    cl.add_argument("--parties", type=int, default=4, choices=(3, 4))
    cl.add_argument("--config")
    cl.add_argument("--seed", type=int)
    cl.add_argument("--faulty", help="faulty party name, empty for none")
    cl.add_argument("--out")
    cl.set_defaults(fn=cmd_classical)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "fn", None) is cmd_security:
        args.l = args.l or [512]
        args.eps_gamma = args.eps_gamma or [1e-10]
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
