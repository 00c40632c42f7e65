"""
Subcommand handlers.

Each handler takes the parsed argparse namespace and returns either a
string written verbatim to stdout (rack files from `gen`) or a pair
(input descriptor, payload) that main wraps into a Report.
"""

import argparse
import logging
import random
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Tuple, Union

from rackgeom.api.parsers import (
    coset_spec_from_seed,
    emit_rack_json,
    emit_rack_text,
    parse_group_spec,
    parse_rack_file,
)
from rackgeom.core.config import settings
from rackgeom.core.errors import InvalidArgument
from rackgeom.models.cohomology import ComplexSpec, Theory
from rackgeom.services.cohomology_service import cohomology_service
from rackgeom.services.freequandle_service import freequandle_service
from rackgeom.services.geometry_service import geometry_service
from rackgeom.services.permgroup_service import permgroup_service, to_cycles
from rackgeom.services.rack_service import rack_service

logger = logging.getLogger(__name__)

CommandResult = Union[str, Tuple[Dict[str, Any], Dict[str, Any]]]


def _rack_input(args: argparse.Namespace) -> Dict[str, Any]:
    return {"file": args.file}


def _fraction(value: Fraction) -> str:
    return str(Fraction(value))


def gen(args: argparse.Namespace) -> CommandResult:
    kind = args.kind
    if kind in ("trivial", "dihedral", "cyclic"):
        if len(args.params) != 1 or not args.params[0].isdigit():
            raise InvalidArgument(f"gen {kind} takes one positive size")
        rack = getattr(rack_service, kind)(int(args.params[0]))
    elif kind == "product":
        if len(args.params) != 2:
            raise InvalidArgument("gen product takes two rack files")
        rack = rack_service.product(*(parse_rack_file(p) for p in args.params))
    elif kind in ("coset", "conj"):
        if len(args.params) != 1:
            raise InvalidArgument(f"gen {kind} takes one group spec file")
        seed = parse_group_spec(args.params[0])
        name = Path(args.params[0]).stem if args.params[0] != "-" else kind
        if kind == "coset":
            rack = rack_service.coset_rack(coset_spec_from_seed(seed, cap=args.cap), name=name).rack
        else:
            group = permgroup_service.generate(seed.degree, seed.generators, cap=args.cap)
            rack = rack_service.conjugation_quandle(group).model_copy(update={"name": name})
    else:
        raise InvalidArgument(f"unknown rack family {kind!r}")
    if args.text:
        return emit_rack_text(rack)
    return emit_rack_json(rack) + "\n"


def verify(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    payload = {
        "rack": True,
        "quandle": rack.is_quandle,
        "size": rack.size,
        "psi_conjugation": rack_service.psi_conjugation_holds(rack),
    }
    return _rack_input(args), payload


def components(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    decomposition = geometry_service.components(rack)
    payload = {
        "count": decomposition.count,
        "representatives": list(decomposition.representatives),
        "component_of": list(decomposition.component_of),
        "enveloping_abelian_rank": rack_service.enveloping_abelianization(rack).rank,
    }
    return _rack_input(args), payload


def metric(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    table = geometry_service.distance_table(rack)
    payload: Dict[str, Any] = {"diameters": list(table.diameters())}
    if not args.diameters:
        payload["component_sizes"] = [len(members) for members in table.members]
    if args.pairs:
        payload["components"] = {
            str(rep): {"members": list(members), "distances": [list(r) for r in matrix]}
            for rep, members, matrix in zip(table.representatives, table.members, table.matrices)
        }
    return _rack_input(args), payload


def inn(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    group = permgroup_service.inner_group(rack, cap=args.cap)
    payload: Dict[str, Any] = {"order": group.order}
    if args.norm:
        table = permgroup_service.word_norm(group, [rack.psi(x) for x in rack.elements])
        payload["norm_diameter"] = table.diameter
        payload["generating_set_size"] = len(table.generating_set)
    if args.isometries:
        payload["isometries"] = all(geometry_service.check_isometry(rack, g) for g in group.elements)
    return _rack_input(args), payload


def quotient_check(args: argparse.Namespace) -> CommandResult:
    spec = coset_spec_from_seed(parse_group_spec(args.groupspec), cap=args.cap)
    check = geometry_service.check_metric_quotient_equality(spec)
    payload = {
        "equal": check.equal,
        "group_order": spec.group.order,
        "reps": [
            {"s": to_cycles(s), "subgroup_order": len(permgroup_service.subgroup(spec.group, h).elements)}
            for s, h in spec.reps
        ],
        "rack_matrices": [[list(r) for r in m] for m in check.rack_matrices],
        "quotient_matrices": [[list(r) for r in m] for m in check.quotient_matrices],
    }
    return {"groupspec": args.groupspec}, payload


def extension(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    quotient = rack_service.canonical_quandle_quotient(rack)
    check = geometry_service.check_extension_lipschitz(rack)
    payload = {
        "quotient_size": quotient.quandle.size,
        "projection": list(quotient.projection),
        "lipschitz": check.lipschitz,
        "max_slack": check.max_slack,
    }
    return _rack_input(args), payload


def _complex_spec(args: argparse.Namespace) -> ComplexSpec:
    if args.max_degree < 1:
        raise InvalidArgument("--max-degree must be at least 1")
    return ComplexSpec(theory=Theory(args.theory), max_degree=args.max_degree)


def betti(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    spec = _complex_spec(args)
    numbers = cohomology_service.betti_numbers(rack, spec.max_degree, spec.theory)
    count = geometry_service.components(rack).count
    expected = [
        cohomology_service.expected_betti(count, k, spec.theory)
        for k in range(1, spec.max_degree + 1)
    ]
    payload = {
        "rack": rack.name or "rack",
        "theory": spec.theory.value,
        "betti": numbers,
        "expected": expected,
        "match": numbers == expected,
    }
    return {**_rack_input(args), "theory": spec.theory.value, "max_degree": spec.max_degree}, payload


def amenable_check(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    spec = _complex_spec(args)
    report = cohomology_service.verify_amenable_theorem(rack, spec.max_degree, spec.theory)
    payload = report.model_dump(mode="json")
    if args.seed is not None:
        payload["property_checks"] = _equivariance_checks(rack, min(spec.max_degree, 2), args)
    return (
        {**_rack_input(args), "theory": spec.theory.value, "max_degree": spec.max_degree},
        payload,
    )


def _equivariance_checks(rack, max_degree: int, args: argparse.Namespace) -> Dict[str, Any]:
    """Random cochains f and alpha in Inn: delta(alpha f) = alpha(delta f), P(delta f) = delta(P f)."""
    rng = random.Random(args.seed)
    group = permgroup_service.inner_group(rack, cap=args.cap)
    failures = 0
    for _ in range(args.samples):
        k = rng.randint(1, max_degree)
        f = cohomology_service.cochain(
            rack, k, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rack.size ** k)]
        )
        alpha = group.elements[rng.randrange(group.order)]
        df = cohomology_service.coboundary(rack, f)
        moved = cohomology_service.coboundary(rack, cohomology_service.act(rack, f, alpha))
        averaged = cohomology_service.coboundary(
            rack, cohomology_service.averaging_projection(rack, f, group)
        )
        if moved != cohomology_service.act(rack, df, alpha) or averaged != (
            cohomology_service.averaging_projection(rack, df, group)
        ):
            failures += 1
    if failures:
        logger.warning(f"{failures} of {args.samples} equivariance samples failed")
    return {"seed": args.seed, "samples": args.samples, "failures": failures, "passed": failures == 0}


def joyce(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    representation = rack_service.joyce_representation(rack, cap=args.cap)
    payload = {
        "inn_order": representation.spec.group.order,
        "representatives": list(representation.representatives),
        "isomorphism": list(representation.isomorphism),
        "verified": True,
    }
    return _rack_input(args), payload


def defect(args: argparse.Namespace) -> CommandResult:
    rack = parse_rack_file(args.file)
    value = geometry_service.delta_f_defect(rack)
    payload = {
        "connected": geometry_service.components(rack).count == 1,
        "defect": _fraction(value),
        "bounded_by_one": value <= 1,
    }
    return _rack_input(args), payload


def fq_distance(args: argparse.Namespace) -> CommandResult:
    target = freequandle_service.parse_element(args.target, args.generators)
    if args.source:
        source = freequandle_service.parse_element(args.source, args.generators)
    else:
        source = freequandle_service.basepoint(target.generator)
    bracket = freequandle_service.fq_distance(
        source, target, args.generators, args.radius, args.conjlen, args.fq_cap
    )
    payload = {
        "source": freequandle_service.format_element(source),
        "target": freequandle_service.format_element(target),
        **bracket.model_dump(),
    }
    if bracket.exact:
        payload["distance"] = bracket.upper
    return {"generators": args.generators}, payload


def fq_ball(args: argparse.Namespace) -> CommandResult:
    layers = freequandle_service.ball(args.generators, args.radius, args.conjlen, args.fq_cap)
    sizes = [0] * (max(layers.values(), default=0) + 1)
    for depth in layers.values():
        sizes[depth] += 1
    cumulative = [sum(sizes[: i + 1]) for i in range(len(sizes))]
    payload = {
        "size": len(layers),
        "layer_sizes": sizes,
        "cumulative_sizes": cumulative,
        "lower_diameter": freequandle_service.component_lower_diameter(
            args.generators, args.radius, 0, args.fq_cap
        ),
    }
    return {"generators": args.generators, "radius": args.radius, "conjlen": args.conjlen}, payload


def fq_quasimorphism(args: argparse.Namespace) -> CommandResult:
    if args.brooks:
        pattern = freequandle_service.parse_word(args.brooks, args.generators)
        f: Callable = lambda a: freequandle_service.hat_brooks(a, pattern)
        name = f"brooks({freequandle_service.format_word(pattern)})"
    else:
        f = freequandle_service.hat_phi
        name = "hat_phi"
    sample = freequandle_service.ball(args.generators, args.radius, args.conjlen, args.fq_cap)
    movers = freequandle_service.movers(args.generators, args.mover_len)
    value = freequandle_service.quasimorphism_defect(f, sample, movers)

    chain = []
    if args.generators >= 2:
        for m in range(args.chain + 1):
            element = freequandle_service.canonical((1, 2) * m, 1)
            chain.append({"element": freequandle_service.format_element(element), "value": f(element)})
    payload = {
        "function": name,
        "sample_size": len(sample),
        "movers": len(movers),
        "defect": _fraction(value),
        "chain": chain,
    }
    return {
        "generators": args.generators,
        "radius": args.radius,
        "conjlen": args.conjlen,
        "mover_len": args.mover_len,
    }, payload


def add_subcommands(parser: argparse.ArgumentParser) -> None:
    """Register every subcommand on the top-level parser."""
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a rack file")
    p.add_argument("kind", choices=["trivial", "dihedral", "cyclic", "product", "coset", "conj"])
    p.add_argument("params", nargs="+")
    p.add_argument("--text", action="store_true", help="emit the text format instead of JSON")
    p.set_defaults(handler=gen)

    for name, handler, help_text in (
        ("verify", verify, "check the rack axioms"),
        ("components", components, "connected components"),
        ("extension", extension, "canonical quandle quotient and its Lipschitz check"),
        ("joyce", joyce, "coset representation over Inn"),
        ("defect", defect, "defect of distance to basepoint"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        p.set_defaults(handler=handler)

    p = sub.add_parser("metric", help="rack metric per component")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--diameters", action="store_true", help="report only the diameters")
    group.add_argument("--pairs", action="store_true", help="add the distance matrix of every component")
    p.set_defaults(handler=metric)

    p = sub.add_parser("inn", help="inner automorphism group")
    p.add_argument("file")
    p.add_argument("--norm", action="store_true", help="conjugation-invariant word norm diameter")
    p.add_argument("--isometries", action="store_true", help="check every element is an isometry")
    p.set_defaults(handler=inn)

    p = sub.add_parser("quotient-check", help="rack metric against the quotient word metric")
    p.add_argument("groupspec")
    p.set_defaults(handler=quotient_check)

    for name, handler in (("betti", betti), ("amenable-check", amenable_check)):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--theory", choices=[t.value for t in Theory], default="rack")
        p.add_argument("--max-degree", type=int, default=3)
        if name == "amenable-check":
            p.add_argument(
                "--samples", type=int, default=20, help="random cochains checked when --seed is given"
            )
        p.set_defaults(handler=handler)

    fq = sub.add_parser("fq", help="free quandle computations")
    fq_sub = fq.add_subparsers(dest="fq_command", required=True)

    def fq_parser(name: str, handler, radius: int) -> argparse.ArgumentParser:
        q = fq_sub.add_parser(name)
        q.add_argument("--generators", type=int, default=2)
        q.add_argument("--radius", type=int, default=radius)
        q.add_argument("--conjlen", type=int, default=settings.FQ_CONJ_LEN)
        q.set_defaults(handler=handler)
        return q

    q = fq_parser("distance", fq_distance, settings.FQ_DISTANCE_RADIUS)
    q.add_argument("--target", required=True, help="element as WORD@GEN, e.g. y^3@x")
    q.add_argument("--source", help="defaults to the generator of the target")

    fq_parser("ball", fq_ball, settings.FQ_RADIUS)

    q = fq_parser("quasimorphism", fq_quasimorphism, settings.FQ_RADIUS)
    q.add_argument("--mover-len", type=int, default=2)
    q.add_argument("--brooks", metavar="PATTERN", help="use the Brooks counting function of PATTERN")
    q.add_argument("--chain", type=int, default=6, help="report f((xy)^m@x) for m up to this")
