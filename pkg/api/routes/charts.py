"""verify-charts and residual subcommands."""
import argparse
import logging

from api.exceptions import ValidationError
from api.models.chart_models import ChartReportModel, IdealModel, ResidualResponse, VerifyChartsResponse
from api.routes.output import CommandResult, table
from services.chart_service import ChartService, ChartTarget, VerificationReport, WMode
from services.ideal_service import Ideal, colon_ideal, ideal_from_json
from services.settings import WorkbenchSettings

logger = logging.getLogger(__name__)


def report_model(report: VerificationReport) -> ChartReportModel:
    return ChartReportModel(
        target=report.target,
        dim=report.dim,
        mode=report.mode,
        variables=report.variables,
        rank=report.jacobian_rank,
        dimension=report.smooth_dimension,
        expected_dimension=report.expected_dimension,
        paper_contained=report.quoted_generators_contained,
        extras_absorbed=report.extra_generators_absorbed,
        free_variables=report.free_variables,
        expected_free_variables=report.expected_free_variables,
        free_variable_check=report.free_variable_check,
        replay_identities_hold=report.replay_identities_hold,
        computed_generators=report.computed_generators,
        quoted_generators=report.quoted_generators,
        missing_generators=report.missing_generators,
        unabsorbed_generators=report.unabsorbed_generators,
        notes=report.notes,
        passed=report.passed,
    )


def verify_charts_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    service = ChartService(settings)
    targets = list(ChartTarget) if args.target == "all" else [ChartTarget(args.target)]
    reports = [service.verify_chart(target, args.dim, WMode(args.mode)) for target in targets]
    models = [report_model(r) for r in reports]

    # a single target prints its report object directly
    payload = models[0] if len(models) == 1 else VerifyChartsResponse(reports=models)
    rows = [
        {
            "target": r.target,
            "dim": r.dim,
            "rank": r.jacobian_rank,
            "dimension": r.smooth_dimension,
            "contained": r.quoted_generators_contained,
            "free": " ".join(r.free_variables),
        }
        for r in reports
    ]
    return CommandResult(payload, table(rows, ["target", "dim", "rank", "dimension", "contained", "free"]))


def _ideal_model(ideal: Ideal) -> IdealModel:
    return IdealModel(**ideal.to_json())


def residual_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    first = ideal_from_json(args.ideal)
    second = ideal_from_json(args.by)
    unknown = [name for name in second.ring.names if name not in first.ring.names]
    if unknown:
        raise ValidationError(f"variables {unknown} of --by are not in the ring of --ideal", field="by")
    second = Ideal(first.ring, second.gens)
    colon = colon_ideal(first, second, settings)
    payload = ResidualResponse(ideal=_ideal_model(first), by=_ideal_model(second), colon=_ideal_model(colon))
    text = "(I : J) = (" + ", ".join(str(g) for g in colon.gens) + ")"
    return CommandResult(payload, text)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("verify-charts", parents=parents, help="verify the incidence-locus charts")
    parser.add_argument("--target", choices=[t.value for t in ChartTarget] + ["all"], default="all")
    parser.add_argument("--dim", type=int, default=2, help="dimension of X (≥ 3 only for R_12_123)")
    parser.add_argument("--mode", choices=[m.value for m in WMode], default=WMode.SUBSTITUTED.value)
    parser.set_defaults(handler=verify_charts_command)

    parser = subparsers.add_parser("residual", parents=parents, help="colon ideal (I : J)")
    parser.add_argument("--ideal", required=True, help='I as {"vars": [...], "gens": [...]}')
    parser.add_argument("--by", required=True, help='J as {"vars": [...], "gens": [...]}')
    parser.set_defaults(handler=residual_command)
