"""classify, classify-all, quotients and diagram subcommands."""
import argparse
import logging

from api.models.classification_models import (
    ClassificationResponse,
    ClassificationSummaryResponse,
    DiagramResponse,
    QuotientRowModel,
    QuotientTableResponse,
    RuleApplicationModel,
)
from api.routes.output import CommandResult, enrichment_model, table
from services.classification_service import ClassificationReport, ClassificationService
from services.enrichments import parse_enrichment
from services.rules import RuleApplication
from services.settings import WorkbenchSettings

logger = logging.getLogger(__name__)


def _step(application: RuleApplication) -> RuleApplicationModel:
    data = application.to_json()
    return RuleApplicationModel(description=application.describe(), **data)


def classification_response(report: ClassificationReport) -> ClassificationResponse:
    return ClassificationResponse(
        input=enrichment_model(report.input),
        verdict=report.status.value,
        model=report.model.text if report.model else None,
        permutation=report.permutation.to_json() if report.permutation else None,
        closure=enrichment_model(report.closure) if report.closure else None,
        trace=[_step(a) for a in report.trace],
        detector=report.detection.tag.value if report.detection else None,
        witness=report.detection.witness if report.detection else None,
        reduced=report.reduced,
    )


def classify_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    eta = parse_enrichment(args.enrichment, args.n)
    report = ClassificationService(settings).classify(eta)
    if report.is_admissible:
        lines = [f"{eta.describe()}: admissible, ≅ {report.model.text} via {report.permutation.cycles()}"]
        lines += [f"  {a.describe()}" for a in report.trace]
        if report.reduced:
            lines.append("  (reached by peeling levels ≥ 3)")
    else:
        lines = [f"{eta.describe()}: not admissible ({report.detection.tag.value}: {report.detection.witness})"]
    return CommandResult(classification_response(report), "\n".join(lines))


def classify_all_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    service = ClassificationService(settings)
    summary = service.classify_all(args.n, args.max_level or 2)
    certificates = service.certificates() if args.n == 3 else {}
    payload = ClassificationSummaryResponse(
        n=summary.n,
        max_level=summary.max_level,
        total=summary.total,
        classes=summary.classes,
        admissible=summary.admissible,
        non_admissible=summary.non_admissible,
        incomplete=summary.incomplete,
        by_model=summary.by_model,
        by_detector=summary.by_detector,
        certificates=certificates,
    )
    text = "\n".join([
        f"{summary.total} enrichments, {summary.classes} classes, "
        f"{summary.non_admissible} non-admissible, {summary.incomplete} incomplete",
        summary.to_frame().to_string(index=False),
    ])
    return CommandResult(payload, text)


def quotients_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    rows = ClassificationService(settings).quotient_table()
    payload = QuotientTableResponse(rows=[
        QuotientRowModel(
            model=row.model,
            group=row.group,
            quotient=row.quotient,
            group_verified=row.group_verified,
            invariant_status=row.invariant_status,
            dropped=[s.describe() for s in row.dropped],
            partial=row.partial,
        )
        for row in rows
    ])
    text_rows = [
        {
            "model": row.model,
            "group": row.group + (" (partial)" if row.partial else ""),
            "quotient": row.quotient,
            "status": row.invariant_status + (f" (drop {', '.join(s.describe() for s in row.dropped)})" if row.dropped else ""),
        }
        for row in rows
    ]
    return CommandResult(payload, table(text_rows, ["model", "group", "quotient", "status"]))


def diagram_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    graph = ClassificationService(settings).forgetful_diagram()
    payload = DiagramResponse(
        nodes=list(graph.nodes),
        edges=[list(edge) for edge in graph.edges],
        covering_edges=[list(edge) for edge in graph.covering_edges],
    )
    rows = [{"source": a, "target": b} for a, b in graph.covering_edges]
    return CommandResult(payload, table(rows, ["source", "target"]), dot=graph.to_dot())


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("classify", parents=parents, help="classify one enrichment")
    parser.add_argument("enrichment", help="JSON or R-notation")
    parser.set_defaults(handler=classify_command)

    parser = subparsers.add_parser("classify-all", parents=parents,
                                   help="classify every enrichment up to --max-level (default 2)")
    parser.set_defaults(handler=classify_all_command)

    parser = subparsers.add_parser("quotients", parents=parents, help="quotients by the acting groups")
    parser.set_defaults(handler=quotients_command)

    parser = subparsers.add_parser("diagram", parents=parents, help="forgetful morphisms between models")
    parser.set_defaults(handler=diagram_command)
