"""Command-line front end.

Exit codes: 0 accepted, 2 rejected or undecided (with a report), 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .chains import ModulePresentation
from .gdense import Refuted, Unknown, Witness, matrix_criterion
from .groups import DEFAULT_MAX_COSETS, HomomorphismError, Overflow, todd_coxeter
from .homology import (GroupModel, GroupRingCoefficients, SpaceModel, TierRejection,
                       group_homology, hopf_check, parse_coefficients, space_homology)
from .parsing import ParseError, parse_group, parse_hom, parse_matrix, parse_space, parse_words
from .plus import (AssemblyError, CertificateError, NotKPerfect, Rejection, moore_space,
                   partial_completion, plus_from_hom, relatively_perfect)
from .rings import RingError

VERBS = ("homology", "cosets", "fiveterm", "relperf", "moore", "plus", "kcomplete", "gdense")
EXIT_OK, EXIT_ERROR, EXIT_REJECTED = 0, 1, 2


@dataclass
class RunConfig:
    verb: str
    inputs: list[str]
    ring: str = "Z"
    max_cosets: int = DEFAULT_MAX_COSETS
    budget: int = 3
    format: str = "text"
    jobs: int = 1
    subgroup: str = ""
    k: int = 1
    aspherical: bool = False

    def __post_init__(self):
        if self.verb not in VERBS:
            raise ValueError(f"unknown verb {self.verb!r}")
        if self.max_cosets < 1 or self.budget < 0 or self.jobs < 1 or self.k < 1:
            raise ValueError("budgets, k and jobs must be positive")
        needed = 2 if self.verb == "plus" else 1
        if len(self.inputs) < needed:
            raise ValueError(f"{self.verb} needs {needed} input(s)")


@dataclass
class Report:
    verb: str
    status: str  # accepted, rejected, unknown, error
    verdicts: dict[str, Any] = field(default_factory=dict)
    modules: dict[str, str] = field(default_factory=dict)
    ledger: dict | None = None
    details: dict[str, Any] = field(default_factory=dict)
    tier: str | None = None
    timing: float = 0.0

    @property
    def exit_code(self) -> int:
        return {"accepted": EXIT_OK, "error": EXIT_ERROR}.get(self.status, EXIT_REJECTED)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))

    def to_text(self) -> str:
        lines = [f"{self.verb}: {self.status}"]
        if self.tier:
            lines.append(f"  tier: {self.tier}")
        for k, v in self.modules.items():
            lines.append(f"  {k} = {v}")
        for k, v in self.verdicts.items():
            lines.append(f"  {k}: {v}")
        for k, v in self.details.items():
            if isinstance(v, list):
                lines.append(f"  {k}:")
                lines.extend(f"    {item}" for item in v)
            else:
                lines.append(f"  {k}: {v}")
        if self.ledger:
            lines.append("  ledger:")
            lines.append(f"    1-cells: {' '.join(self.ledger['1-cells']) or '-'}")
            for c in self.ledger["2-cells"]:
                lines.append(f"    2-cell {c['word']} ({c['provenance']})")
            lines.append(f"    3-cells: {len(self.ledger['3-cells'])}")
        lines.append(f"  time: {self.timing:.3f}s")
        return "\n".join(lines)


def _read(source: str) -> str:
    p = Path(source)
    if p.exists():
        return p.read_text()
    if any(ch in source for ch in "{[:") or source.strip().startswith(("group", "space", "hom")):
        return source
    raise FileNotFoundError(source)


def parse_inputs(config: RunConfig) -> dict[str, Any]:
    """Read and validate the typed inputs of one run."""
    v = config.verb
    text = _read(config.inputs[0])
    if v == "gdense":
        return {"matrix": parse_matrix(text)}
    if v == "plus":
        space = parse_space(text)
        X = SpaceModel(space.group, space.cells2, space.aspherical)
        hom = parse_hom(_read(config.inputs[1]), source=X.base)
        return {"space": X, "hom": hom}
    if v == "homology" and text.lstrip().startswith("space"):
        s = parse_space(text)
        return {"space": SpaceModel(s.group, s.cells2, s.aspherical)}
    P = parse_group(text)
    out: dict[str, Any] = {"group": P}
    if v in ("fiveterm", "relperf", "kcomplete"):
        out["subgroup"] = parse_words(config.subgroup, P.generators)
    return out


def _modules(prefix: str, mods: Sequence[ModulePresentation]) -> dict[str, str]:
    return {f"{prefix}{q}": str(m) for q, m in enumerate(mods)}


def _plus_report(verb: str, r, extra: dict | None = None) -> Report:
    if isinstance(r, Rejection):
        rep = Report(verb, "rejected", details={"reason": r.reason})
        if r.module is not None:
            rep.modules["obstruction"] = str(r.module)
        if r.hypotheses is not None:
            rep.verdicts.update({"H1 injective": r.hypotheses.h1_injective,
                                 "H2 surjective": r.hypotheses.h2_surjective,
                                 "gate": r.hypotheses.gate.kind})
        return rep
    rep = Report(verb, "accepted", ledger=r.ledger.as_dict(), tier="finite")
    rep.verdicts.update(r.certificates)
    rep.verdicts["finite"] = r.finite
    if r.hypotheses is not None:
        rep.verdicts["gate"] = r.hypotheses.gate.kind
    rep.modules.update(_modules("H(X)_", r.homology_X))
    rep.modules.update(_modules("H(Y)_", r.homology_Y))
    rep.details["coefficients"] = r.coefficients
    rep.details["Y cells"] = list(r.Y.cells)
    if extra:
        rep.details.update(extra)
    return rep


def _run_verb(config: RunConfig, inputs: dict[str, Any]) -> Report:
    v = config.verb
    if v == "cosets":
        t = todd_coxeter(inputs["group"], config.max_cosets)
        if isinstance(t, Overflow):
            return Report(v, "unknown", details={"overflow": t.budget})
        return Report(v, "accepted", verdicts={"order": t.order}, tier="finite")
    if v == "gdense":
        A = inputs["matrix"]
        verdict = matrix_criterion(A, config.k, A.ring, config.budget)
        rep = Report(v, "accepted" if isinstance(verdict, Witness) else
                     "rejected" if isinstance(verdict, Refuted) else "unknown",
                     details={"matrix": A.to_literal(), "det": A.ring.format(A.det())})
        rep.verdicts["verdict"] = verdict.kind
        if isinstance(verdict, Witness):
            rep.details["witness"] = verdict.B.to_literal()
        elif isinstance(verdict, Refuted):
            rep.details["cases"] = verdict.transcript()
        elif isinstance(verdict, Unknown):
            rep.details["searched"] = verdict.searched
        return rep
    coeffs = parse_coefficients(config.ring)
    if v == "homology":
        if "space" in inputs:
            X = inputs["space"]
            rep = Report(v, "accepted", tier="cellular")
            rep.modules.update(_modules("H", space_homology(X, coeffs)[:3]))
            try:
                h = hopf_check(X, coeffs, config.max_cosets)
            except TierRejection as exc:
                rep.details["hopf"] = f"not checked: {exc}"
            else:
                rep.verdicts["hopf exact"] = h.exact
                rep.modules.update({"hopf A": str(h.A), "hopf B": str(h.B), "hopf C": str(h.C)})
            return rep
        G = _group_model(inputs["group"], config)
        rep = Report(v, "accepted", tier=G.tier)
        rep.modules.update(_modules("H", [group_homology(G, coeffs, q) for q in range(3)]))
        if G.is_finite:
            rep.verdicts["order"] = G.order
        return rep
    if v in ("fiveterm", "relperf"):
        pi = _group_model(inputs["group"], config)
        ok, r = relatively_perfect(pi, inputs["subgroup"], config.max_cosets)
        status = "accepted" if (r.exact if v == "fiveterm" else ok) else "rejected"
        if v == "fiveterm" and not r.exact:
            status = "error"
        rep = Report(v, status, tier="/".join(r.tiers))
        rep.modules.update({"H2(pi)": str(r.H2_pi), "H2(pi/N)": str(r.H2_Q), "N/[pi,N]": str(r.middle),
                            "H1(pi)": str(r.H1_pi), "H1(pi/N)": str(r.H1_Q)})
        rep.verdicts.update({f"exact at {k}": b for k, b in r.joints.items()})
        rep.verdicts["relatively perfect"] = ok
        return rep
    if v == "moore":
        G = GroupModel.realize(inputs["group"], max_cosets=config.max_cosets)
        return _plus_report(v, moore_space(G, coeffs))
    if v == "plus":
        X, hom = inputs["space"], inputs["hom"]
        return _plus_report(v, plus_from_hom(X, hom.hom, hom.kernel, coeffs, config.max_cosets))
    if v == "kcomplete":
        pi = _group_model(inputs["group"], config)
        k = coeffs.field if isinstance(coeffs, GroupRingCoefficients) else coeffs
        try:
            c = partial_completion(pi, inputs["subgroup"], k, config.max_cosets)
        except NotKPerfect as exc:
            return Report(v, "rejected", modules={"H1(P;k)": str(exc.module)},
                          details={"reason": str(exc)})
        return _plus_report(v, c.result, {"quotient order": c.quotient_order, "H1(P;k)": str(c.h1_subgroup)})
    raise ValueError(f"unknown verb {v!r}")


def _group_model(P, config: RunConfig) -> GroupModel:
    if config.aspherical:
        return GroupModel.realize(P, aspherical=True)
    try:
        return GroupModel.realize(P, max_cosets=config.max_cosets)
    except TierRejection:
        if not P.relators:
            # free groups have aspherical presentation complexes
            return GroupModel.realize(P, aspherical=True)
        raise


def run(config: RunConfig) -> Report:
    """Parse, dispatch and time one run; failures become reports."""
    start = time.perf_counter()
    try:
        inputs = parse_inputs(config)
        rep = _run_verb(config, inputs)
    except TierRejection as exc:
        rep = Report(config.verb, "rejected", details={"tier rejection": str(exc)})
    except (ParseError, RingError, HomomorphismError, AssemblyError, CertificateError, OSError,
            ValueError, ArithmeticError) as exc:
        rep = Report(config.verb, "error", details={"error": f"{type(exc).__name__}: {exc}"})
    rep.timing = time.perf_counter() - start
    return rep


def _run_one(args: tuple[RunConfig, str | None]) -> Report:
    config, single = args
    if single is not None:
        config = RunConfig(**{**asdict(config), "inputs": [single], "jobs": 1})
    return run(config)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genplus", description=__doc__.splitlines()[0])
    p.add_argument("verb", choices=VERBS)
    p.add_argument("inputs", nargs="+", help="input files (or inline text)")
    p.add_argument("--ring", default="Z", help="coefficient ring token, e.g. Z, Q, Z/5, Z[1/6], Z[i], Z/2[G]")
    p.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    p.add_argument("--budget", type=int, default=3, help="coefficient bound for gdense search")
    p.add_argument("--format", choices=("text", "json", "json-like"), default="text")
    p.add_argument("--jobs", type=int, default=1, help="run several single-input fixtures in parallel")
    p.add_argument("--subgroup", default="", help="normal generators as words, e.g. 'a^2 b*a*b^-1'")
    p.add_argument("--aspherical", action="store_true",
                   help="treat the group presentation complex as aspherical instead of enumerating cosets")
    p.add_argument("-k", type=int, default=1, help="column count for gdense")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = "json" if args.format in ("json", "json-like") else "text"
    try:
        config = RunConfig(args.verb, list(args.inputs), args.ring, args.max_cosets, args.budget, fmt,
                           args.jobs, args.subgroup, args.k, args.aspherical)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.verb != "plus" and len(args.inputs) > 1:
        jobs = [(config, path) for path in args.inputs]
        if config.jobs > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                reports = list(pool.map(_run_one, jobs))
        else:
            reports = [_run_one(j) for j in jobs]
    else:
        reports = [run(config)]
    if fmt == "json":
        body = [json.loads(r.to_json()) for r in reports]
        print(json.dumps(body[0] if len(body) == 1 else body, sort_keys=True, indent=2))
    else:
        print("\n".join(r.to_text() for r in reports))
    for r in reports:
        if r.status == "error":
            print(f"error: {r.details.get('error', r.details)}", file=sys.stderr)
    return max(r.exit_code for r in reports)


if __name__ == "__main__":
    raise SystemExit(main())
