"""structures, incidence, orbit and groups subcommands."""
import argparse
import logging

from api.exceptions import ValidationError
from api.models.enrichment_models import (
    GroupModel,
    GroupsResponse,
    IncidenceModel,
    IncidenceResponse,
    OrbitResponse,
    SignatureSplitModel,
    StructureListResponse,
)
from api.routes.output import CommandResult, enrichment_model, structure_model, table
from services.enrichments import enrichment_from_name, parse_enrichment
from services.incidence_service import incidence_closure
from services.settings import WorkbenchSettings
from services.structures import enumerate_structures
from services.symmetry_service import (
    GroupDescriptor,
    acting_group,
    is_normal_subgroup,
    orbit,
    pointwise_stabilizer_H,
    stabilizer_G,
)

logger = logging.getLogger(__name__)


def _group_model(group: GroupDescriptor) -> GroupModel:
    return GroupModel(elements=[g.to_json() for g in group.elements], label=group.label, order=group.order)


def structures_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    max_level = args.max_level or 2
    found = enumerate_structures(args.n, max_level)
    payload = StructureListResponse(n=args.n, max_level=max_level, count=len(found),
                                    structures=[structure_model(s) for s in found])
    rows = [{"structure": s.describe(), "signature": ",".join(map(str, s.signature)), "level": s.level}
            for s in found]
    return CommandResult(payload, table(rows, ["structure", "signature", "level"]))


def incidence_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    eta = parse_enrichment(args.enrichment, args.n)
    relations = incidence_closure(eta, settings.incidence_max_arity)
    payload = IncidenceResponse(
        enrichment=enrichment_model(eta),
        max_arity=settings.incidence_max_arity,
        count=len(relations),
        relations=[
            IncidenceModel(
                sigma=r.sigma.to_literal(),
                targets=[t.to_literal() for t in r.targets],
                description=r.describe(),
                split=SignatureSplitModel(**r.split.to_json()),
            )
            for r in relations
        ],
    )
    rows = [{"incidence": r.describe(), "p": ",".join(map(str, r.split.p)) or "points", "r": r.split.r}
            for r in relations]
    return CommandResult(payload, table(rows, ["incidence", "p", "r"]))


def orbit_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    eta = parse_enrichment(args.enrichment, args.n)
    images = orbit(eta)
    payload = OrbitResponse(enrichment=enrichment_model(eta), size=len(images),
                            orbit=[enrichment_model(image) for image in images])
    return CommandResult(payload, "\n".join(image.describe() for image in images))


def groups_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    if args.model:
        eta = enrichment_from_name(args.model, args.n)
    elif args.enrichment:
        eta = parse_enrichment(args.enrichment, args.n)
    else:
        raise ValidationError("groups needs --model or --enrichment", field="model")
    big, small = stabilizer_G(eta), pointwise_stabilizer_H(eta)
    acting = acting_group(eta)
    payload = GroupsResponse(
        enrichment=enrichment_model(eta),
        stabilizer=_group_model(big),
        pointwise=_group_model(small),
        normal=is_normal_subgroup(small, big),
        acting=acting.label,
        acting_representatives=[g.to_json() for g in acting.elements],
    )
    text = "\n".join([
        f"enrichment: {eta.describe()}",
        f"G: {big.label} ({', '.join(g.cycles() for g in big.elements)})",
        f"H: {small.label} ({', '.join(g.cycles() for g in small.elements)})",
        f"acting: {acting.label}",
    ])
    return CommandResult(payload, text)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("structures", parents=parents, help="enumerate canonical structures")
    parser.set_defaults(handler=structures_command)

    parser = subparsers.add_parser("incidence", parents=parents, help="list incidences among members")
    parser.add_argument("enrichment", help="JSON or R-notation")
    parser.set_defaults(handler=incidence_command)

    parser = subparsers.add_parser("orbit", parents=parents, help="distinct relabellings of an enrichment")
    parser.add_argument("enrichment", help="JSON or R-notation")
    parser.set_defaults(handler=orbit_command)

    parser = subparsers.add_parser("groups", parents=parents, help="G_η, H_η and the acting group")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--model", help="model in R-notation, e.g. max or R^1_123")
    source.add_argument("--enrichment", help="JSON or R-notation")
    parser.set_defaults(handler=groups_command)
