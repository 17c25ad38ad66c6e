"""
ordlab command line.

    python backend/main.py [--fuel N] [--out DIR] [--trace] [--config FILE] <command> ...

Every command prints one JSON document on stdout and writes its artifacts below
``--out``. Exit codes: 0 on success, 1 on a pipeline error, 2 when ``verify``
finds a broken artifact.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import nullcontext
from itertools import islice
from typing import Callable, Dict, List, Optional

from meta import AVAILABLE_TEMPLATES, STANDARD_PRESENTATIONS, STANDARD_THEORIES
from src.config import Config
from src.errors import OrderError, OrdlabError, VerificationFailure
from src.lab import (
    AshKnightFamily, StageSequence, copy_machine, jump_inv_copy, jump_inv_omega_times, limit_decompose, limit_of,
    limit_to_stages, omega_machine,
)
from src.lab.ash_knight import DEFAULT_BOUNDS
from src.logic import evaluate, evaluate_window, goedel_decode, goedel_encode, is_sigma1, parse, substitute, to_text
from src.logic.formula import Num, complexity
from src.omega import ProofCertificate, prove_true, refute_false, replay, stammbaum_kb
from src.ordinals import parse_ordinal
from src.orders import (
    INF, PrefixEvidence, embed_check, explore_prefix, lprime, parse_program, prefix_iso_check, presentation_from_text,
    recursion_violations,
)
from src.orders.presentation import OrderPresentation
from src.pipeline import run_pipeline
from src.progressions import (
    CertificateBundle, NotationTerm, ProgramRegistry, build_ax_progression, notation_map_g, notation_ordinal,
    render_LO, render_TI_instance, render_WO, render_reflection_instance, rfn_case, stage_theory, use_registry,
    verify_bundle,
)
from src.progressions.reflection import TheorySpec, is_reflection_instance
from src.utils.console import log
from src.utils.trace import TraceWriter

ERROR_WIDTH = 100

COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], dict]] = {}
"""
Command handlers by subcommand name. A handler gets the parsed arguments and the merged
configuration and returns the JSON document printed on stdout.
"""


def command(name: str):
    def decorator(fn):
        COMMANDS[name] = fn
        return fn

    return decorator


# ---------------------------------------------------------------- helpers


def load_order(reference: str) -> OrderPresentation:
    """
    A standard presentation by name, or a presentation file.

    :raises OrderError: when the reference is neither
    """
    if reference in STANDARD_PRESENTATIONS:
        return STANDARD_PRESENTATIONS[reference]()
    if os.path.isfile(reference):
        with open(reference, "r", encoding="utf-8") as handle:
            return presentation_from_text(handle.read())
    known = ", ".join(sorted(STANDARD_PRESENTATIONS))
    raise OrderError(f"Unknown order <{reference}>", f"expected a presentation file or one of {known}")


def load_theory(name: str) -> TheorySpec:
    if name not in STANDARD_THEORIES:
        raise OrdlabError(f"Unknown theory <{name}>", "expected one of " + ", ".join(sorted(STANDARD_THEORIES)))
    return STANDARD_THEORIES[name]()


def element(raw: str) -> int:
    return INF if raw.upper() == "INF" else int(raw)


def numbers(raw: Optional[str]) -> List[int]:
    return [int(part) for part in raw.split(",") if part.strip()] if raw else []


def write_text(path: str, text: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text if text.endswith("\n") else text + "\n")
    return path


def write_json(path: str, data: dict) -> str:
    return write_text(path, json.dumps(data, indent=1, sort_keys=True))


def tracer(config: Config, name: str):
    """A trace file below the output directory when tracing is on, else nothing."""
    if not config.output.trace:
        return nullcontext(None)
    return TraceWriter(os.path.join(config.output.out, "traces", f"{name}.jsonl.zst"))


def _verdict(verdict) -> str:
    return verdict.value.value


# ---------------------------------------------------------------- formula


@command("formula")
def cmd_formula(args, config: Config) -> dict:
    free = [name for name in (args.free or "").split(",") if name]
    if args.action == "goedel" and args.text.strip().isdigit():
        f = goedel_decode(int(args.text))
        return {"code": args.text.strip(), "formula": to_text(f)}
    f = parse(args.text, free=free)
    result = {"formula": to_text(f), "complexity": complexity(f), "sigma1": is_sigma1(f)}
    if args.action == "goedel":
        result["code"] = str(goedel_encode(f))
    elif args.action == "eval":
        if free:
            raise OrdlabError("Only sentences can be evaluated", "free: " + ", ".join(free))
        result["verdict"] = _verdict(evaluate(f, config.fuel.fuel, config.fuel.program_fuel))
        result["window"] = _verdict(evaluate_window(f, config.fuel.fuel, config.fuel.program_fuel))
        result["fuel"] = config.fuel.fuel
    return result


# ---------------------------------------------------------------- skolem


@command("skolem")
def cmd_skolem(args, config: Config) -> dict:
    phi = parse(args.text)
    directory = os.path.join(config.output.out, "skolem")
    with tracer(config, "skolem") as trace:
        report = run_pipeline(phi, depth=args.bound, width=args.width, chain_length=args.chain, trace=trace)
    result = report.to_dict()
    result.update({"depth": args.bound, "width": args.width, "chain_length": args.chain,
                   "well_founded_evidence": report.well_founded_evidence})
    result["files"] = [
        write_text(os.path.join(directory, "presentation.txt"), report.presentation.to_text()),
        write_json(os.path.join(directory, "pipeline.json"), result),
    ]
    return result


# ---------------------------------------------------------------- omega


@command("omega")
def cmd_omega(args, config: Config) -> dict:
    psi = parse(args.text)
    directory = os.path.join(config.output.out, "omega")
    if args.action == "prove":
        certificate = prove_true(psi, config.fuel.fuel, depth=args.depth)
        if certificate is None:
            return {"psi": to_text(psi), "certificate": None}
        path = certificate.save(os.path.join(directory, "proof.certificate.json"))
        return {"psi": certificate.psi, "height": str(certificate.height), "bound": str(certificate.bound),
                "replay": replay(certificate).to_dict(), "certificate": path}
    if args.action == "refute":
        with tracer(config, "refute") as trace:
            stream = [sequent.to_list() for sequent in islice(refute_false(psi, config.fuel.fuel, trace), args.steps)]
        return {"psi": to_text(psi), "steps": len(stream), "sequents": stream}
    p = stammbaum_kb(psi)
    prefix = explore_prefix(p, args.bound)
    path = write_text(os.path.join(directory, "kb.presentation"), p.to_text())
    return {"psi": to_text(psi), "presentation": path, "prefix": prefix.to_dict()}


# ---------------------------------------------------------------- lab


def _stages_for(args, config: Config) -> StageSequence:
    if args.member is not None:
        approx = limit_decompose(parse_program(args.member), parse_program(args.nonmember or "0"))
        return limit_to_stages(approx, config.lab.exact_chain_limit)
    return StageSequence.from_presentation(load_order(args.order))


def _templates(evidence) -> Dict[str, bool]:
    return {name: check(evidence) for name, check in sorted(AVAILABLE_TEMPLATES.items())}


@command("lab")
def cmd_lab(args, config: Config) -> dict:
    stages_count = args.stages or config.lab.stages
    bound = args.bound or config.lab.bound
    directory = os.path.join(config.output.out, "lab")

    if args.action == "limit":
        if args.member is None:
            raise OrdlabError("lab limit needs --member", "a program of y, u, v and X")
        declared = numbers(args.declared) if args.declared is not None else None
        approx = limit_decompose(parse_program(args.member), parse_program(args.nonmember or "0"), declared_limit=declared)
        return limit_of(approx, bound, stages_count).to_dict()

    if args.action == "stages":
        stages = _stages_for(args, config)
        return {
            "stages": [f.export() for f in stages.prefix(stages_count)],
            "coherence_violations": [[i, issue] for i, issue in stages.coherence_violations(stages_count)],
        }

    if args.action == "jumpinv":
        stages = _stages_for(args, config)
        if args.mode == "copy":
            p = jump_inv_copy(stages)
            machine = copy_machine(stages)
        else:
            p = jump_inv_omega_times(stages)
            machine = omega_machine(stages)
        evidence = PrefixEvidence()
        for b in sorted({min(10, bound), bound}):
            evidence.add(b, explore_prefix(p, b))
        audit = machine.audit(stages_count)
        with tracer(config, f"jump-{args.mode}") as trace:
            if trace is not None:
                trace.extend(machine.trace.events)
        write_text(os.path.join(directory, f"jump-{args.mode}.presentation"), p.to_text())
        return {"mode": args.mode, "prefix": evidence.final.export(), "audit": [[s, issue] for s, issue in audit],
                "templates": _templates(evidence)}

    phi = parse(args.phi, free=[args.var])
    family = AshKnightFamily(phi, args.n, args.var)
    indices = numbers(args.indices) or [0]
    bounds = tuple(b for b in DEFAULT_BOUNDS if b < bound) + (bound,)
    found = family.explore_all(indices, bounds)
    family.export(os.path.join(directory, "ashknight"), indices)
    report = {}
    for i, evidence in sorted(found.items()):
        report[str(i)] = {
            "prefix_size": len(evidence.final),
            f"omega-pow-{args.n}": prefix_iso_check(evidence, f"omega-pow-{args.n}"),
            f"omega-pow-{args.n}-eta": len(evidence.snapshots) > 1 and prefix_iso_check(evidence, f"omega-pow-{args.n}-eta"),
        }
    return {"formula": to_text(phi), "n": args.n, "bounds": list(bounds), "indices": report}


# ---------------------------------------------------------------- order


@command("order")
def cmd_order(args, config: Config) -> dict:
    p = load_order(args.order)
    bound = args.bound or config.lab.bound
    if args.action == "explore":
        prefix = explore_prefix(p, bound)
        return {"name": p.name, "prefix": prefix.export(), "size": len(prefix)}
    if args.action == "check":
        evidence = PrefixEvidence()
        for b in numbers(args.bounds) or [bound]:
            evidence.add(b, explore_prefix(p, b))
        return {"name": p.name, "template": args.template, "consistent": prefix_iso_check(evidence, args.template)}
    if args.action == "lprime":
        q = lprime(p)
        path = write_text(os.path.join(config.output.out, "Lprime"), q.to_text())
        return {"name": q.name, "presentation": path}
    alpha = parse_ordinal(args.alpha)
    verdict = embed_check(p, args.a, alpha, bound)
    result = {"name": p.name, "a": args.a, "alpha": str(alpha), "verdict": _verdict(verdict)}
    if args.recursion:
        result["recursion_violations"] = [[a, str(beta)] for a, beta in recursion_violations(p, bound, [alpha])]
    return result


# ---------------------------------------------------------------- prog


@command("prog")
def cmd_prog(args, config: Config) -> dict:
    directory = args.bundle or os.path.join(config.output.out, "bundle")

    if args.action == "notation":
        term = NotationTerm.parse(args.a)
        ordinal = notation_ordinal(term, args.depth or config.fuel.depth)
        return {"notation": term.to_dict(), "ordinal": None if ordinal is None else str(ordinal)}

    t = load_theory(args.theory)
    if args.action == "rfn-instance":
        phi = parse(args.phi, free=[args.var])
        instance = render_reflection_instance(t, phi)
        code = goedel_encode(instance)
        return {"theory": t.to_dict(), "instance": to_text(instance), "code": str(code),
                "recognized": is_reflection_instance(code, goedel_encode(t.axiom))}

    p = load_order(args.order)
    bundle = CertificateBundle(p)
    if args.action == "ax-progression":
        delta = build_ax_progression(t, p)
        bundle.add_instance("ax-progression", delta)
        result = {"theory": t.to_dict(), "recognizer": to_text(delta), "sigma1": is_sigma1(delta)}
        if args.at is not None and args.stage is not None:
            phi = parse(args.phi or "x = x", free=[args.var])
            instance = render_reflection_instance(stage_theory(delta, args.stage), phi)
            membership = substitute(delta, {"x": Num(args.at), "y": Num(goedel_encode(instance))})
            result["membership"] = {"at": args.at, "stage": args.stage,
                                    "verdict": _verdict(evaluate_window(membership, config.fuel.fuel))}
    elif args.action == "ti":
        phi = parse(args.phi, free=[args.var])
        instance = render_TI_instance(p, phi, args.var, args.below)
        bundle.add_instance("ti", instance).add_instance("lo", render_LO(p)).add_instance("wo", render_WO(p))
        result = {"instance": to_text(instance)}
    else:
        x = element(args.x)
        depth = args.depth or config.fuel.depth
        term = notation_map_g(p, x)
        ordinal = notation_ordinal(term, depth)
        bundle.notation, bundle.ordinal, bundle.element, bundle.depth = term, ordinal, x, depth
        bundle.add_instance("rfn-case", rfn_case(term, t))
        result = {"notation": term.to_dict(), "ordinal": None if ordinal is None else str(ordinal)}
    result["manifest"] = bundle.write(directory)
    return result


# ---------------------------------------------------------------- verify


def _check_bundle(directory: str, failures: List[str]):
    failures.extend(f"{directory}: {name} does not match the manifest" for name in verify_bundle(directory))
    notation_path = os.path.join(directory, "notation.json")
    if not os.path.exists(notation_path):
        return
    with open(notation_path, "r", encoding="utf-8") as handle:
        stored = json.load(handle)
    if stored.get("element") is None:
        return
    with open(os.path.join(directory, "presentation.txt"), "r", encoding="utf-8") as handle:
        p = presentation_from_text(handle.read())
    term = notation_map_g(p, stored["element"])
    ordinal = notation_ordinal(term, stored["depth"])
    if str(term) != stored["term"] or (None if ordinal is None else str(ordinal)) != stored["ordinal"]:
        failures.append(f"{directory}: notation recomputes to {term} with ordinal {ordinal}")


def _check_pipeline(path: str, failures: List[str]):
    with open(path, "r", encoding="utf-8") as handle:
        stored = json.load(handle)
    report = run_pipeline(parse(stored["phi"]), stored["depth"], stored["width"], stored["chain_length"]).to_dict()
    if any(report[key] != stored[key] for key in ("presentation", "certificate", "branch", "chain")):
        failures.append(f"{path}: pipeline output differs on a rerun")
    chain = stored["chain"]
    p = presentation_from_text(stored["presentation"])
    if any(not p.less(b, a) for a, b in zip(chain, chain[1:])):
        failures.append(f"{path}: chain is not descending")


def _check_certificate(path: str, failures: List[str]):
    report = replay(ProofCertificate.load(path))
    failures.extend(f"{path}: {violation}" for violation in report.violations)


def _check_family(directory: str, failures: List[str]):
    with open(os.path.join(directory, "index.json"), "r", encoding="utf-8") as handle:
        listing = json.load(handle)
    family = AshKnightFamily(parse(listing["formula"], free=[listing["variable"]]), listing["n"], listing["variable"])
    for i, name in sorted(listing["files"].items()):
        with open(os.path.join(directory, name), "r", encoding="utf-8") as handle:
            if handle.read().strip() != family.presentation(int(i)).to_text():
                failures.append(f"{directory}/{name}: presentation differs on a rerun")


@command("verify")
def cmd_verify(args, config: Config) -> dict:
    """
    :raises VerificationFailure: when any artifact fails its check
    """
    root = args.directory or config.output.out
    checked, failures = [], []
    for directory, _, files in sorted(os.walk(root)):
        for name in sorted(files):
            path = os.path.join(directory, name)
            if name == "manifest.json":
                _check_bundle(directory, failures)
            elif name == "pipeline.json":
                _check_pipeline(path, failures)
            elif name.endswith(".certificate.json"):
                _check_certificate(path, failures)
            elif name == "index.json":
                _check_family(directory, failures)
            else:
                continue
            checked.append(path)
    if failures:
        raise VerificationFailure(f"{len(failures)} of {len(checked)} artifacts failed", "\n".join(failures))
    log("success", "Verify", f"{len(checked)} artifacts verified under {root}")
    return {"checked": checked, "ok": True}


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordlab", description="Computable orders, w-logic and reflection progressions.")
    parser.add_argument("--fuel", type=int, help="evaluation window")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--trace", action="store_true", default=None, help="write JSON-lines traces")
    parser.add_argument("--seed-free", action="store_true", default=None, help="assert that no randomness is used")
    parser.add_argument("--config", help="dotenv-style file with FUEL, OUT, TRACE, ... keys")
    parser.add_argument("--json-errors", action="store_true", help="print errors as JSON on stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    formula = sub.add_parser("formula", help="parse, normalize, encode or evaluate a formula")
    formula.add_argument("action", choices=["parse", "normalize", "goedel", "eval"])
    formula.add_argument("text")
    formula.add_argument("--free", help="comma separated names allowed to stay free")

    skolem = sub.add_parser("skolem", help="sentence to Kleene-Brouwer order")
    skolem.add_argument("text")
    skolem.add_argument("--bound", type=int, default=6, help="certificate depth")
    skolem.add_argument("--width", type=int, default=6)
    skolem.add_argument("--chain", type=int, default=10, help="descending chain length")

    omega = sub.add_parser("omega", help="w-logic proof search")
    omega.add_argument("action", choices=["prove", "refute", "kb"])
    omega.add_argument("text")
    omega.add_argument("--depth", type=int, default=200)
    omega.add_argument("--steps", type=int, default=20)
    omega.add_argument("--bound", type=int, default=40)

    lab = sub.add_parser("lab", help="stage constructions")
    lab.add_argument("action", choices=["limit", "stages", "jumpinv", "ashknight"])
    lab.add_argument("--n", type=int, default=1)
    lab.add_argument("--stages", type=int)
    lab.add_argument("--bound", type=int)
    lab.add_argument("--order", default="finite-2")
    lab.add_argument("--member", help="program of y, u, v, X certifying membership")
    lab.add_argument("--nonmember", help="program of y, u, v, X certifying non-membership")
    lab.add_argument("--declared", help="comma separated expected limit")
    lab.add_argument("--mode", choices=["omega", "copy"], default="omega")
    lab.add_argument("--phi", default="forall y. y = y")
    lab.add_argument("--var", default="x")
    lab.add_argument("--indices", help="comma separated family indices")

    order = sub.add_parser("order", help="explore and check order presentations")
    order.add_argument("action", choices=["explore", "check", "embed", "lprime"])
    order.add_argument("--order", required=True)
    order.add_argument("--bound", type=int)
    order.add_argument("--bounds", help="comma separated snapshot bounds for check")
    order.add_argument("--template", default="omega")
    order.add_argument("--a", type=int, default=0)
    order.add_argument("--alpha", default="1")
    order.add_argument("--recursion", action="store_true")

    prog = sub.add_parser("prog", help="reflection progressions and notations")
    prog.add_argument("action", choices=["rfn-instance", "ax-progression", "ti", "notation", "g-map"])
    prog.add_argument("--theory", default="Q0")
    prog.add_argument("--order", default="finite-1")
    prog.add_argument("--phi")
    prog.add_argument("--var", default="x")
    prog.add_argument("--x", default="INF")
    prog.add_argument("--a", type=int, default=1)
    prog.add_argument("--depth", type=int)
    prog.add_argument("--below", type=int)
    prog.add_argument("--at", type=int)
    prog.add_argument("--stage", type=int)
    prog.add_argument("--bundle", help="bundle directory")

    verify = sub.add_parser("verify", help="re-check emitted artifacts")
    verify.add_argument("directory", nargs="?")
    return parser


def load_config(args) -> Config:
    config = Config.from_file(args.config) if args.config else Config()
    for key, value in (("FUEL", args.fuel), ("OUT", args.out), ("TRACE", args.trace), ("SEED_FREE", args.seed_free)):
        if value is not None:
            config = config.with_value(key, value)
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        if config.output.seed_free:
            log("debug", "Config", "Seed-free run, every pipeline is deterministic")
        if args.command in ("prog", "verify"):
            use_registry(ProgramRegistry(config.registry.path))
        if args.command == "prog" and args.action in ("rfn-instance", "ti") and not args.phi:
            raise OrdlabError(f"prog {args.action} needs --phi")
        result = COMMANDS[args.command](args, config)
    except OrdlabError as exc:
        if args.json_errors:
            print(json.dumps(exc.to_json(), sort_keys=True))
        else:
            log("error", exc.component, exc.headline + (f": {exc.detail}" if exc.detail else ""), max_length=ERROR_WIDTH)
        return 2 if isinstance(exc, VerificationFailure) else 1
    print(json.dumps(result, indent=1, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
