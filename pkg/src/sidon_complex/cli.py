"""Command-line front end.

Exit codes: 0 for success or a true answer, 1 for a computed false or an
unsatisfiable instance, 2 for bad input or an operational failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import acceptance
from . import cellcomplex as cx
from .errors import MalformedInputError, SidonComplexError
from .linkgraph import (
    build_link,
    canonical_heawood,
    canonical_mk,
    girth,
    is_isomorphic,
    polarity,
)
from .puzzle import (
    FaceLabelling,
    PeriodicSolution,
    check_disk,
    expand_periodic,
    face_vertices,
    find_periodic,
    hex_distance,
    render_disk,
    solve_disk,
)
from .rings import rings_from_collisions, rings_from_hexagons
from .sidon import (
    alternating_collisions,
    greedy_extend,
    n_double_zero,
    n_zero,
    verify_sidon,
    verify_sidon_mod,
)

DEFAULTS: dict[str, Any] = {
    "format": "text",
    "seed": acceptance.DEFAULT_SEED,
    "radius": None,
    "max_solutions": 1000,
    "max_period": 3.0,
    "count": 10,
    "p": 0,
    "vertex_type": 1,
    "center_colour": 1,
}


class Result:
    """What a command produced: a truth value, a JSON payload and a text rendering."""

    def __init__(self, ok: bool, payload: Any, text: str | None = None, dot: str | None = None):
        self.ok = ok
        self.payload = payload
        self.text = text if text is not None else json.dumps(payload, sort_keys=True)
        self.dot = dot


# parsing helpers -------------------------------------------------------------


def _ints(text: str | None, name: str) -> list[int]:
    if text is None:
        raise MalformedInputError(f"--{name} is required")
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise MalformedInputError(f"--{name}: expected comma-separated integers, got {text!r}") from exc


def _groups(text: str | None, name: str) -> list[list[int]] | None:
    if text is None:
        return None
    return [_ints(part, name) for part in str(text).split(";")]


def _spec_from_args(args) -> cx.ComplexSpec:
    if args.spec:
        return cx.ComplexSpec.from_json(_load_json(args.spec))
    if args.preset == "mk":
        return cx.mk_spec()
    if args.preset == "heawood":
        return cx.modular_spec((0, 1, 3), (7, 7, 7))
    seqs = _groups(args.seq, "seq")
    if seqs is None:
        raise MalformedInputError("give --seq, --spec or --preset")
    if len(seqs) == 1:
        seqs = seqs * 3
    if args.mod is None:
        if len({tuple(s) for s in seqs}) != 1:
            raise MalformedInputError("--mod is required when the three sequences differ")
        return cx.modular_spec(seqs[0])
    mods = _ints(args.mod, "mod")
    if len(mods) == 1:
        mods = mods * 3
    sigmas = _groups(args.sigma, "sigma")
    if sigmas is not None and len(sigmas) == 1:
        sigmas = sigmas * 3
    taus = _groups(args.tau, "tau")
    if len(seqs) != 3 or len(mods) != 3 or (sigmas and len(sigmas) != 3) or (taus and len(taus) != 3):
        raise MalformedInputError("a complex spec needs one or three sequences, moduli, sigmas and taus")
    return cx.ComplexSpec.make(seqs, mods, sigmas, taus)


def _link_from_args(args):
    seq = _ints(args.seq, "seq")
    N = _ints(args.mod, "mod")[0]
    sigma = _ints(args.sigma, "sigma") if args.sigma else None
    tau = _ints(args.tau, "tau") if args.tau else None
    return seq, N, sigma, tau


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc}") from exc


def _radius(args, default: int) -> int:
    r = default if args.radius is None else int(args.radius)
    if r < 0:
        raise MalformedInputError("--radius must be nonnegative")
    return r


def _positive(value, name: str) -> None:
    if value is not None and float(value) <= 0:
        raise MalformedInputError(f"--{name} must be positive")


# sidon ----------------------------------------------------------------------------


def sidon_verify(args) -> Result:
    ok = verify_sidon(_ints(args.terms or args.seq, "seq"))
    return Result(ok, {"sidon": ok}, "true" if ok else "false")


def sidon_verify_mod(args) -> Result:
    N = _ints(args.mod, "mod")[0]
    ok = verify_sidon_mod(_ints(args.terms or args.seq, "seq"), N)
    return Result(ok, {"sidon_mod": ok, "modulus": N}, "true" if ok else "false")


def sidon_extend(args) -> Result:
    seq = greedy_extend(_ints(args.terms or args.seq, "seq"), int(args.count))
    return Result(True, {"sequence": list(seq)}, ",".join(map(str, seq)))


def sidon_n0(args) -> Result:
    value = n_zero(_ints(args.terms or args.seq, "seq"))
    return Result(True, {"n0": value}, str(value))


def sidon_n00(args) -> Result:
    value = n_double_zero(_ints(args.terms or args.seq, "seq"))
    return Result(True, {"n00": value}, str(value))


def sidon_collisions(args) -> Result:
    N = _ints(args.mod, "mod")[0]
    pairs = alternating_collisions(_ints(args.terms or args.seq, "seq"), N)
    lines = [f"{p.residue}: {p.first} ~ {p.second}" for p in pairs]
    return Result(True, {"modulus": N, "pairs": [p.to_json() for p in pairs]}, "\n".join(lines) or "none")


# link ------------------------------------------------------------------------------


def link_build(args) -> Result:
    g = build_link(*_link_from_args(args))
    text = f"vertices: {g.order}, edges: {len(g.edges)}"
    return Result(True, g.to_json(), text, g.to_dot())


def link_girth(args) -> Result:
    gi = girth(build_link(*_link_from_args(args)))
    value = None if gi == float("inf") else int(gi)
    return Result(True, {"girth": value}, "inf" if value is None else str(value))


def link_iso(args) -> Result:
    g = build_link(*_link_from_args(args))
    targets = {"mk": canonical_mk, "heawood": canonical_heawood}
    if args.target not in targets:
        raise MalformedInputError("--target must be mk or heawood")
    witness = is_isomorphic(g, targets[args.target]())
    ok = witness is not None
    payload = {"isomorphic": ok, "witness": None if witness is None else [witness[v] for v in range(g.order)]}
    return Result(ok, payload, "true" if ok else "false")


def link_polarity(args) -> Result:
    g = build_link(*_link_from_args(args))
    a = polarity(g, int(args.p))
    payload = {
        "mapping": list(a.mapping),
        "preserves_edge_labels": a.preserves_edge_labels,
        "swaps_parity": a.swaps_parity,
    }
    return Result(True, payload, " ".join(map(str, a.mapping)))


def link_export(args) -> Result:
    g = build_link(*_link_from_args(args))
    return Result(True, g.to_json(), g.to_dot(), g.to_dot())


# rings ------------------------------------------------------------------------------


def rings_enum(args) -> Result:
    seq, N, sigma, tau = _link_from_args(args)
    rings = sorted(rings_from_collisions(seq, N, sigma, tau, int(args.vertex_type)))
    lines = [f"faces {list(r.faces)} types {list(r.neighbor_types)}" for r in rings]
    return Result(True, {"rings": [r.to_json() for r in rings]}, "\n".join(lines) or "none")


def rings_xcheck(args) -> Result:
    seq, N, sigma, tau = _link_from_args(args)
    vt = int(args.vertex_type)
    tau = tau or [c for c in (1, 2, 3) if c != vt]
    a = rings_from_collisions(seq, N, sigma, tau, vt)
    g = build_link(seq, N, sigma, tau)
    b = rings_from_hexagons(g, vt)
    from .linkgraph import hexagons

    pairs = len(alternating_collisions(seq, N))
    hexes = len(hexagons(g))
    ok = a == b
    payload = {"agree": ok, "hexagons": hexes, "pairs": pairs, "rings": len(a)}
    return Result(ok, payload, f"agree: {str(ok).lower()}, hexagons: {hexes}, pairs: {pairs}")


# puzzle ------------------------------------------------------------------------------


def _disk_radius(lab: FaceLabelling, center=(0, 0)) -> int:
    return max(hex_distance(p, center) for f in lab.labels for p in face_vertices(f))


def puzzle_check(args) -> Result:
    inst = _spec_from_args(args).puzzle_instance()
    lab = FaceLabelling.from_json(_load_json(args.file))
    if not lab.labels:
        raise MalformedInputError("empty labelling")
    R = _disk_radius(lab) if args.radius is None else int(args.radius)
    ok = check_disk(inst, lab, (0, 0), R)
    return Result(ok, {"valid": ok, "radius": R}, "true" if ok else "false")


def puzzle_solve(args) -> Result:
    _positive(args.max_solutions, "max-solutions")
    inst = _spec_from_args(args).puzzle_instance()
    R = _radius(args, 1)
    sols = solve_disk(inst, R, max_solutions=int(args.max_solutions))
    text = f"{len(sols)} solutions"
    if sols:
        text += "\n" + render_disk(sols[0])
    return Result(bool(sols), {"radius": R, "solutions": [s.to_json() for s in sols]}, text.rstrip())


def puzzle_periodic(args) -> Result:
    _positive(args.max_period, "max-period")
    inst = _spec_from_args(args).puzzle_instance()
    limit = None if args.max_solutions is None else int(args.max_solutions)
    sols = find_periodic(inst, float(args.max_period), limit)
    lines = [f"basis {list(s.basis[0])} {list(s.basis[1])}" for s in sols]
    text = "\n".join([f"{len(sols)} periodic solutions", *lines])
    return Result(bool(sols), {"solutions": [s.to_json() for s in sols]}, text)


def puzzle_expand(args) -> Result:
    sol = PeriodicSolution.from_json(_load_json(args.file))
    lab = expand_periodic(sol, _radius(args, 2))
    return Result(True, lab.to_json(), render_disk(lab).rstrip())


# complex ------------------------------------------------------------------------------


def _ball_text(ball: cx.CellComplexBall) -> str:
    return f"vertices: {ball.n_vertices}, edges: {len(ball.edge_faces)}, faces: {len(ball.faces)}"


def complex_build(args) -> Result:
    spec = _spec_from_args(args)
    ball = cx.build_ball(spec, _radius(args, 1), args.completion_seed, int(args.center_colour))
    return Result(True, ball.to_json(), _ball_text(ball), ball.to_dot())


def complex_verify(args) -> Result:
    spec = _spec_from_args(args)
    if args.file:
        ball = cx.CellComplexBall.from_json(_load_json(args.file))
    else:
        ball = cx.build_ball(spec, _radius(args, 2), args.completion_seed, int(args.center_colour))
    rep = cx.verify_ball(ball, spec)
    text = "ok" if rep.ok else "\n".join(rep.violations)
    return Result(rep.ok, rep.to_json(), text)


def complex_odd(args) -> Result:
    spec = _spec_from_args(args)
    ball = cx.build_ball(spec, _radius(args, 2), center_colour=int(args.center_colour))
    faces = [f for f, face in enumerate(ball.faces) if all(ball.is_interior(v) for v in face)]
    odd = {f: cx.triangle_is_odd(ball, f) for f in faces}
    ok = bool(faces) and all(odd.values())
    payload = {"faces": len(faces), "odd": sum(odd.values()), "all_odd": ok}
    return Result(ok, payload, f"interior faces: {len(faces)}, odd: {sum(odd.values())}")


def _sign_vector(text: str) -> tuple[str, str, str]:
    text = text.strip().replace("p", "+").replace("m", "-")
    if len(text) != 3 or set(text) - {"+", "-"}:
        raise MalformedInputError(f"sign vector must be three of '+'/'-', got {text!r}")
    return tuple(text)


def complex_signs(args) -> Result:
    import itertools

    spec = _spec_from_args(args)
    R = _radius(args, 2)
    if args.signs:
        vectors = [_sign_vector(s) for s in str(args.signs).split(",")]
        if len(vectors) != 2:
            raise MalformedInputError("--signs takes two vectors, e.g. --signs=+++,-++ or ppp,mpp")
        pairs = [tuple(vectors)]
    else:
        pairs = list(itertools.combinations(itertools.product("+-", repeat=3), 2))
    results = {"".join(a) + " " + "".join(b): cx.sign_variants_isomorphic(spec, a, b, R) for a, b in pairs}
    ok = all(results.values())
    lines = [f"{k}: {str(v).lower()}" for k, v in results.items()]
    return Result(ok, {"isomorphic": results, "all": ok}, "\n".join(lines))


def complex_embed(args) -> Result:
    spec = _spec_from_args(args)
    if args.file:
        disks = [FaceLabelling.from_json(_load_json(args.file))]
    else:
        disks = solve_disk(spec.puzzle_instance(), _radius(args, 2), max_solutions=int(args.max_solutions))
    if not disks:
        return Result(False, {"disks": 0, "embedded": 0}, "no disk solutions")
    R = max(_disk_radius(d) for d in disks)
    ball_radius = R + 1 if args.ball_radius is None else int(args.ball_radius)
    ball = cx.build_ball(spec, ball_radius, center_colour=int(args.center_colour))
    embedded = seeds = 0
    first = None
    for lab in disks:
        for seed in cx.star_seeds(ball, lab):
            seeds += 1
            emb = cx.embed_disk(ball, lab, seed)
            embedded += 1
            if first is None:
                first = {f"{x},{y}": w for (x, y), w in sorted(emb.items())}
    ok = seeds > 0 and embedded == seeds
    payload = {"disks": len(disks), "seeds": seeds, "embedded": embedded, "example": first}
    return Result(ok, payload, f"disks: {len(disks)}, embedded: {embedded}/{seeds}")


def complex_transitivity(args) -> Result:
    ok = cx.vertex_transitivity_check(_spec_from_args(args), _radius(args, 2))
    return Result(ok, {"transitive": ok}, "true" if ok else "false")


def complex_unique_ext(args) -> Result:
    from .linkgraph import automorphisms

    spec = _spec_from_args(args)
    auts = automorphisms(spec.link(1), respect_colours=True)
    rng = random.Random(int(args.seed))
    ident = [a for a in auts if a.is_identity()]
    others = [a for a in auts if not a.is_identity()]
    chosen = ident + rng.sample(others, min(len(others), max(0, int(args.count) - 1)))
    results = [cx.extension_uniqueness_check(spec, spec, _radius(args, 2), dict(enumerate(a.mapping))) for a in chosen]
    ok = all(results)
    return Result(ok, {"tested": len(results), "unique": sum(results)}, f"unique extensions: {sum(results)}/{len(results)}")


# suite ---------------------------------------------------------------------------------


def suite_acceptance(args) -> Result:
    outcomes = acceptance.run_all(int(args.seed))
    ok = all(o.passed for o in outcomes)
    text = "\n".join(o.line() for o in outcomes)
    return Result(ok, {"criteria": [o.to_json() for o in outcomes], "all_passed": ok}, text)


# wiring --------------------------------------------------------------------------------

COMMANDS: dict[str, dict[str, Callable[[argparse.Namespace], Result]]] = {
    "sidon": {
        "verify": sidon_verify,
        "verify-mod": sidon_verify_mod,
        "extend": sidon_extend,
        "n0": sidon_n0,
        "n00": sidon_n00,
        "collisions": sidon_collisions,
    },
    "link": {
        "build": link_build,
        "girth": link_girth,
        "iso": link_iso,
        "polarity": link_polarity,
        "export": link_export,
    },
    "rings": {"enum": rings_enum, "xcheck": rings_xcheck},
    "puzzle": {"check": puzzle_check, "solve": puzzle_solve, "periodic": puzzle_periodic, "expand": puzzle_expand},
    "complex": {
        "build": complex_build,
        "verify": complex_verify,
        "odd": complex_odd,
        "signs": complex_signs,
        "embed": complex_embed,
        "transitivity": complex_transitivity,
        "unique-ext": complex_unique_ext,
    },
    "suite": {"acceptance": suite_acceptance},
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seq", help="comma-separated terms; ';' separates three sequences")
    p.add_argument("--mod", help="modulus, or three comma-separated moduli")
    p.add_argument("--sigma", help="face labels of the terms; ';' separates three")
    p.add_argument("--tau", help="colours of even and odd link vertices; ';' separates three")
    p.add_argument("--spec", help="JSON complex spec file")
    p.add_argument("--preset", choices=["mk", "heawood"])
    p.add_argument("--radius", type=int)
    p.add_argument("--ball-radius", type=int)
    p.add_argument("--max-period", type=float)
    p.add_argument("--max-solutions", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--p", type=int, help="polarity index")
    p.add_argument("--target", default="mk")
    p.add_argument("--vertex-type", type=int)
    p.add_argument("--center-colour", type=int)
    p.add_argument("--completion-seed", type=int)
    p.add_argument("--signs", help="two sign vectors, e.g. --signs=+++,-++ (p/m also accepted)")
    p.add_argument("--format", choices=["json", "dot", "text"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--config", help="key=value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sidon-complex", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, verbs in COMMANDS.items():
        gp = groups.add_parser(group)
        vp = gp.add_subparsers(dest="verb", required=True)
        for verb in verbs:
            p = vp.add_parser(verb)
            p.add_argument("terms", nargs="?", help="sequence terms (sidon verbs)")
            p.add_argument("file", nargs="?", help="input JSON file")
            _common(p)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise MalformedInputError(f"cannot read config {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MalformedInputError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_defaults(args: argparse.Namespace) -> None:
    config = read_config(args.config) if args.config else {}
    for key, value in config.items():
        if not hasattr(args, key):
            raise MalformedInputError(f"unknown config key {key!r}")
        if getattr(args, key) is None:
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    if args.format not in ("json", "dot", "text"):
        raise MalformedInputError(f"unknown format {args.format!r}")
    for name in ("max_solutions", "max_period", "count"):
        _positive(getattr(args, name), name.replace("_", "-"))
    if args.group == "sidon" and args.file is None and args.terms and args.terms.endswith(".json"):
        args.file, args.terms = args.terms, None
    if args.group != "sidon" and args.terms is not None and args.file is None:
        args.file, args.terms = args.terms, None


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.payload, sort_keys=True)
    if fmt == "dot":
        if result.dot is None:
            raise MalformedInputError("this command has no DOT output")
        return result.dot.rstrip("\n")
    return result.text


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_defaults(args)
        result = COMMANDS[args.group][args.verb](args)
        out = render(result, args.format)
    except SidonComplexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(out + "\n")
    else:
        print(out)
    return 0 if result.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
