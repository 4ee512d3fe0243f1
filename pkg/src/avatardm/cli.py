"""Command-line entry points: interactive REPL, experiment runner, trend
inspection tool, and the HTTP gateway."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import load_assets, start_session
from .errors import AvatarDmError
from .levels import KnowledgeLevel
from .sim import (
    DEFAULT_PROFILES,
    DEFAULT_TEMPLATES,
    PolicySpec,
    UserProfile,
    policy_improvement_report,
    run_experiment,
    train_policy,
)
from .trend import analyze


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="avatardm",
        description="Belief-tracking dialogue manager with learned policy and fuzzy affect",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    repl = sub.add_parser("repl", help="interactive chat on stdin/stdout")
    repl.add_argument("--ontology", help="ontology JSON path (packaged default)")
    repl.add_argument("--model", help="dialogue model JSON path (packaged default)")
    repl.add_argument("--lexicon", help="sentiment lexicon path (packaged default)")
    repl.add_argument("--seed", type=int, default=0)
    repl.add_argument("--log", help="write one AgentTurn JSON line per turn to this file")
    repl.set_defaults(func=cmd_repl)

    simulate = sub.add_parser("simulate", help="run the simulated-user experiment")
    simulate.add_argument("--profiles", help="JSON file with user profiles (built-in default)")
    simulate.add_argument("--episodes", type=int, default=200, help="episodes per profile")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", required=True, help="output directory for metrics and figures")
    simulate.add_argument(
        "--train-episodes",
        type=int,
        default=0,
        help="also train a policy for this many episodes and compare it",
    )
    simulate.set_defaults(func=cmd_simulate)

    dwt = sub.add_parser("dwt", help="wavelet trend analysis of a belief-scalar CSV")
    dwt.add_argument("--input", required=True, help="one-column CSV of belief scalars")
    dwt.set_defaults(func=cmd_dwt)

    serve = sub.add_parser("serve", help="run the HTTP gateway")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--assets", help="static UI directory to serve at /")
    serve.add_argument("--ontology")
    serve.add_argument("--model")
    serve.add_argument("--lexicon")
    serve.set_defaults(func=cmd_serve)
    return parser


def cmd_repl(args) -> int:
    assets = load_assets(args.ontology, args.model, args.lexicon)
    session = start_session(assets, seed=args.seed)
    log = open(args.log, "w", encoding="utf-8") if args.log else None
    try:
        print(f"agent> {session.greeting}")
        while not session.goal_reached:
            try:
                text = input("you> ")
            except EOFError:
                break
            if not text.strip():
                continue
            turn = session.step(text)
            print(f"agent> {turn.reply}")
            print(
                f"[turn {session.turn}] emotion={turn.emotion} x={turn.crisp_x:.3f} "
                f"level={turn.level} mode={turn.mode} reward={turn.reward:.2f} "
                f"ncp={turn.ncp} belief={turn.belief_top[0]}:{turn.belief_top[1]:.3f}"
            )
            if log:
                log.write(turn.to_json() + "\n")
    finally:
        if log:
            log.close()
    return 0


def load_profiles(path: str | None):
    if path is None:
        return DEFAULT_PROFILES
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    profiles = []
    for raw in doc:
        kwargs = dict(
            name=raw["name"],
            level_target=KnowledgeLevel[raw.get("level_target", "amateur").upper()],
            p_request_info=float(raw.get("p_request_info", 0.0)),
            p_offscript=float(raw.get("p_offscript", 0.0)),
            p_negative_sentiment=float(raw.get("p_negative_sentiment", 0.0)),
        )
        if raw.get("templates"):
            kwargs["templates"] = {**dict(DEFAULT_TEMPLATES), **raw["templates"]}
        profiles.append(UserProfile(**kwargs))
    return tuple(profiles)


def cmd_simulate(args) -> int:
    from .reports import write_experiment_reports

    profiles = load_profiles(args.profiles)
    result = run_experiment(
        profiles=profiles, episodes_per_profile=args.episodes, seed=args.seed
    )
    trace = None
    policy_rows = None
    if args.train_episodes > 0:
        qtable, trace = train_policy(
            profiles=profiles, episodes=args.train_episodes, seed=args.seed
        )
        policy_rows = policy_improvement_report(
            before=PolicySpec("handcrafted"),
            after=PolicySpec("learned", qtable=qtable),
            profiles=profiles,
            seed=args.seed + 1,
        )
    written = write_experiment_reports(
        result, args.out, training_trace=trace, policy_rows=policy_rows
    )
    print(result.to_csv(), end="")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_dwt(args) -> int:
    values = []
    for lineno, raw in enumerate(
        Path(args.input).read_text(encoding="utf-8").splitlines(), start=1
    ):
        cell = raw.split(",")[0].strip()
        if not cell:
            continue
        try:
            values.append(float(cell))
        except ValueError:
            if lineno == 1:
                continue  # tolerate a header line
            raise AvatarDmError(f"{args.input}:{lineno}: not a number: {cell!r}")
    result = analyze(values)
    print(
        json.dumps(
            {
                "original_len": result.dwt.original_len,
                "padded_len": result.dwt.padded_len,
                "levels": [
                    {"approx": list(approx), "detail": list(detail)}
                    for approx, detail in result.dwt.levels
                ],
                "ncp": result.ncp,
                "ncp_ratio": result.ncp_ratio,
            },
            indent=2,
        )
    )
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    port = int(os.environ.get("AVATARDM_PORT", args.port))
    assets = load_assets(args.ontology, args.model, args.lexicon)
    serve(port=port, host=args.host, assets=assets, static_dir=args.assets)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AvatarDmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
