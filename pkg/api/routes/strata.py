"""strata and preimage subcommands."""
import argparse
import logging

from api.models.strata_models import PreimageResponse, StrataResponse, StratumConfigModel
from api.routes.output import CommandResult, enrichment_model, table
from services.enrichments import parse_enrichment
from services.settings import WorkbenchSettings
from services.strata_service import (
    StratumConfig,
    conf_space_size,
    consistent_conf_space,
    general_stratum,
    iter_conf_space,
    preimage_dot,
    preimage_strata,
    special_stratum,
)

logger = logging.getLogger(__name__)


def config_model(config: StratumConfig) -> StratumConfigModel:
    return StratumConfigModel(label=config.label(), **config.to_json())


def strata_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    eta = parse_enrichment(args.enrichment, args.n)
    if args.consistent:
        configs = consistent_conf_space(eta)
        total = len(configs)
    else:
        total = conf_space_size(eta)
        configs = []
        for config in iter_conf_space(eta):
            if args.limit and len(configs) >= args.limit:
                break
            configs.append(config)
    shown = configs[:args.limit] if args.limit else configs
    logger.debug(f"strata: {total} configs over {eta.describe()}, showing {len(shown)}")

    payload = StrataResponse(
        enrichment=enrichment_model(eta),
        total=total,
        consistent_only=args.consistent,
        general=config_model(general_stratum(eta)),
        special=config_model(special_stratum(eta)),
        shown=len(shown),
        configs=[config_model(c) for c in shown],
    )
    header = f"{eta.describe()}: {total} {'consistent ' if args.consistent else ''}configs"
    if len(shown) < total:
        header += f" (first {len(shown)} shown)"
    rows = [{"#": i, "config": c.label() or "(empty)"} for i, c in enumerate(shown)]
    return CommandResult(payload, header + "\n" + table(rows, ["#", "config"]))


def _source_config(text: str, source) -> StratumConfig:
    if text == "general":
        return general_stratum(source)
    if text == "special":
        return special_stratum(source)
    return StratumConfig.from_json(text, source)


def preimage_command(args: argparse.Namespace, settings: WorkbenchSettings) -> CommandResult:
    source = parse_enrichment(args.source, args.n)
    target = parse_enrichment(args.target, args.n)
    config = _source_config(args.config, source)
    preimages = preimage_strata(config, target)
    payload = PreimageResponse(
        source=enrichment_model(source),
        target=enrichment_model(target),
        config=config_model(config),
        count=len(preimages),
        preimages=[config_model(c) for c in preimages],
    )
    rows = [{"config": c.label() or "(empty)"} for c in preimages]
    text = f"{len(preimages)} configs over {target.describe()} restrict to [{config.label()}]\n" + table(rows, ["config"])
    return CommandResult(payload, text, dot=preimage_dot(config, preimages))


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("strata", parents=parents, help="list the stratification index set Conf(η)")
    parser.add_argument("enrichment", help="JSON or R-notation")
    parser.add_argument("--consistent", action="store_true", help="keep only configs passing the consistency filter")
    parser.add_argument("--limit", type=int, default=50, help="configs to list, 0 for all (default 50)")
    parser.set_defaults(handler=strata_command)

    parser = subparsers.add_parser("preimage", parents=parents, help="configs over η′ restricting to a config over η")
    parser.add_argument("--source", required=True, help="η, JSON or R-notation")
    parser.add_argument("--target", required=True, help="η′ ⊇ η, JSON or R-notation")
    parser.add_argument("--config", default="general", help="'general', 'special' or a config JSON document")
    parser.set_defaults(handler=preimage_command)
