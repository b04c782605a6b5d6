"""labelcheck command line: one subcommand per pipeline stage.

    python main.py ingest --input apps.jsonl --out corpus.jsonl
    python main.py fetch-policies --input urls.txt --out raw/
    python main.py clean --in raw/ --out docs.jsonl
    python main.py annotate --backend keyword --in docs.jsonl --out annotated.jsonl
    python main.py extract-practices --in annotated.jsonl --out practices.jsonl
    python main.py match --google g.jsonl --apple a.jsonl --out matches.jsonl --ambiguous amb.jsonl
    python main.py check-policy --labels corpus.jsonl --practices practices.jsonl --out report.jsonl
    python main.py check-cross --matches matches.jsonl --google g.jsonl --apple a.jsonl --out cross.jsonl
    python main.py diff --snapshots s1.jsonl s2.jsonl --out diff.jsonl
    python main.py report --apps corpus.jsonl --format json --out stats.json

Exit codes: 0 success, 1 usage error, 2 data error, 3 IO or network error.
"""

import argparse
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import requests
from loguru import logger
from pydantic import BaseModel, ValidationError

from annotator.backends import export_annotations, resolve_backend
from annotator.practices import annotate_many, extract_practices, load_practices, practices_row
from consistency.cross_platform import CrossReport, check_cross_pairs
from consistency.diffs import diff_snapshots
from consistency.policy_checks import ConsistencyReport, check_apple_label_vs_policy, check_google_label_vs_policy
from matcher.domains import configure_suffix_list, normalize_url, suffix_list_source
from matcher.linker import MatchResult, match_apps
from models.labels import validate_apple_label, validate_google_label
from models.policies import PolicyDocument, Rejection, RejectReason
from models.snapshots import load_snapshot, read_apps, serialize_labeled_app
from policies.classifier import is_policy, load_policy_scores
from policies.cleaner import clean_and_filter
from policies.extractor import extract_text
from policies.fetcher import FetchStatus, fetch_many, store_result
from reports.aggregate import aggregate, apply_download_filter
from reports.emit import FORMATS, emit_report
from taxonomy.enums import Platform
from utils.config import Settings, load_settings
from utils.errors import DataError, LabelcheckError, MalformedRecord, UsageError
from utils.json_utils import read_jsonl, write_jsonl
from utils.log import setup_logging

MANIFEST = "manifest.jsonl"

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 1, 2, 3


class CliParser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; here bad usage is exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


# ---------- helpers ----------
def sidecar(path: str | Path, suffix: str) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.{suffix}.jsonl")


def read_models(path: str | Path, model: type[BaseModel]) -> list:
    out = []
    for i, row in enumerate(read_jsonl(path), start=1):
        try:
            out.append(model.model_validate(row))
        except ValidationError as e:
            raise MalformedRecord(f"{path}:{i}: not a {model.__name__}: {e.errors()[0].get('msg')}") from e
    return out


def dump_models(path: str | Path, items) -> int:
    return write_jsonl(path, (i.model_dump(mode="json") for i in items))


def drop_weak_tags(doc: PolicyDocument, threshold: float) -> PolicyDocument:
    segments = tuple(
        s.model_copy(update={"annotations": frozenset(t for t in s.annotations if t.score >= threshold)})
        for s in doc.segments
    )
    return doc.model_copy(update={"segments": segments})


def read_lines(path: str | Path) -> list[str]:
    with open(path, "r", encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]


# ---------- stages ----------
def cmd_ingest(args, settings: Settings) -> int:
    logger.info(f"➡ Ingesting {args.input}")
    rejects: list[dict[str, Any]] = []
    apps = read_apps(args.input, rejects)

    valid = []
    for app in apps:
        if app.apple_label is not None:
            violations = validate_apple_label(app.apple_label)
        elif app.google_label is not None:
            violations = validate_google_label(app.google_label)
        else:
            violations = []
        if violations:
            logger.warning(f"⚠ {app.platform.value}:{app.app_id}: {len(violations)} label violation(s)")
            rejects.append({"app_id": app.app_id, "platform": app.platform.value, "type": "LabelViolation",
                            "violations": [v.model_dump() for v in violations]})
            continue
        valid.append(app)

    kept = apply_download_filter(valid, settings.download_floor)
    n = write_jsonl(args.out, (serialize_labeled_app(a) for a in kept))
    logger.info(f"✔ Saved {n} apps → {args.out}")

    rejects_path = args.rejects or sidecar(args.out, "rejects")
    write_jsonl(rejects_path, rejects)
    if rejects:
        logger.info(f"✔ Saved {len(rejects)} rejected line(s) → {rejects_path}")

    if args.urls:
        urls = sorted({a.record.policy_url for a in kept if a.record.policy_url})
        Path(args.urls).parent.mkdir(parents=True, exist_ok=True)
        Path(args.urls).write_text("".join(u + "\n" for u in urls), encoding="utf-8")
        logger.info(f"✔ Saved {len(urls)} policy URLs → {args.urls}")
    return EXIT_OK


def cmd_fetch(args, settings: Settings) -> int:
    urls = read_lines(args.input)
    logger.info(f"➡ Fetching {len(urls)} policies ({settings.jobs} worker(s), "
                f"{settings.min_interval_ms} ms per host)")
    results = fetch_many(urls, settings)
    os.makedirs(args.out, exist_ok=True)
    rows = [store_result(r, args.out) for r in results]
    write_jsonl(os.path.join(args.out, MANIFEST), rows)
    ok = sum(r.status is FetchStatus.ok for r in results)
    logger.info(f"✔ Fetched {ok}/{len(results)} policies → {args.out}")
    for status in FetchStatus:
        count = sum(r.status is status for r in results)
        if count and status is not FetchStatus.ok:
            logger.info(f"   {status.value}: {count}")
    return EXIT_OK


def _rejection_for(row: dict) -> Rejection:
    status = row.get("status")
    if status in (FetchStatus.non_html.value, FetchStatus.unsupported_format.value):
        reason = RejectReason.unsupported_format
    else:
        reason = RejectReason.fetch_failed
    return Rejection(source_url=row.get("url", ""), reason=reason, detail=str(status))


def cmd_clean(args, settings: Settings) -> int:
    manifest = os.path.join(args.input, MANIFEST)
    rows = list(read_jsonl(manifest))
    scores = load_policy_scores(args.policy_scores) if args.policy_scores else None
    logger.info(f"➡ Cleaning {len(rows)} fetched documents")

    docs: list[PolicyDocument] = []
    rejects: list[Rejection] = []
    for row in rows:
        url = row.get("url", "")
        if row.get("status") != FetchStatus.ok.value or not row.get("file"):
            rejects.append(_rejection_for(row))
            continue
        raw = Path(args.input, row["file"]).read_bytes()
        text = extract_text(raw, settings.link_density, settings.extractor, row.get("encoding"))
        result = clean_and_filter(text, url, settings)
        if isinstance(result, Rejection):
            rejects.append(result)
            continue
        verdict, score = is_policy(result, scores, settings.policy_threshold)
        if not verdict:
            rejects.append(Rejection(source_url=url, reason=RejectReason.not_policy, language=result.language,
                                     language_confidence=result.language_confidence,
                                     word_count=result.word_count, detail=f"score {score:.3f}"))
            continue
        docs.append(result.model_copy(update={"is_policy": True, "policy_score": score}))

    n = dump_models(args.out, docs)
    rejects_path = args.rejects or sidecar(args.out, "rejects")
    dump_models(rejects_path, rejects)
    logger.info(f"✔ Saved {n} policies → {args.out} ({len(rejects)} rejected → {rejects_path})")
    return EXIT_OK


def cmd_annotate(args, settings: Settings) -> int:
    backend = resolve_backend(args.backend)
    docs = read_models(args.input, PolicyDocument)
    logger.info(f"➡ Annotating {len(docs)} documents with {backend.name}@{backend.version}")
    annotated = annotate_many(docs, backend, settings.jobs)
    if args.threshold is not None:
        annotated = [drop_weak_tags(d, settings.threshold) for d in annotated]
    n = dump_models(args.out, annotated)
    logger.info(f"✔ Saved {n} annotated documents → {args.out}")
    if args.export:
        rows = export_annotations(annotated, args.export)
        logger.info(f"✔ Exported {rows} segment annotations → {args.export}")
    return EXIT_OK


def cmd_extract(args, settings: Settings) -> int:
    docs = read_models(args.input, PolicyDocument)
    logger.info(f"➡ Extracting practices from {len(docs)} documents (threshold {settings.threshold})")
    n = write_jsonl(args.out, (practices_row(d.source_url, extract_practices(d, settings.threshold)) for d in docs))
    logger.info(f"✔ Saved {n} practice sets → {args.out}")
    return EXIT_OK


def _records(path: str, platform: Platform):
    apps = read_apps(path)
    wrong = [a.app_id for a in apps if a.platform is not platform]
    if wrong:
        raise MalformedRecord(f"{path}: expected {platform.value} records only, got {wrong[0]!r}")
    return apps


def cmd_match(args, settings: Settings) -> int:
    google = [a.record for a in _records(args.google, Platform.google)]
    apple = [a.record for a in _records(args.apple, Platform.apple)]
    logger.info(f"➡ Matching {len(google)} google apps against {len(apple)} apple apps")
    logger.info(f"➡ First-level domains from the {suffix_list_source()}")
    outcome = match_apps(google, apple, settings.jobs)
    dump_models(args.out, outcome.matches)
    logger.info(f"✔ Saved {len(outcome.matches)} matches → {args.out}")
    ambiguous_path = args.ambiguous or sidecar(args.out, "ambiguous")
    dump_models(ambiguous_path, outcome.ambiguous)
    logger.info(f"✔ Saved {len(outcome.ambiguous)} ambiguity reports → {ambiguous_path}")
    return EXIT_OK


def _practices_for(url: str | None, practices: dict, normalized: dict):
    if not url:
        return None
    if url in practices:
        return practices[url]
    try:
        return normalized.get(normalize_url(url))
    except DataError:
        return None


def cmd_check_policy(args, settings: Settings) -> int:
    apps = read_apps(args.labels)
    practices = load_practices(args.practices)
    normalized = {}
    for url, p in practices.items():
        try:
            normalized.setdefault(normalize_url(url), p)
        except DataError:
            continue
    logger.info(f"➡ Checking {len(apps)} labels against {len(practices)} policies")

    reports: list[ConsistencyReport] = []
    skipped = 0
    for app in apps:
        found = _practices_for(app.record.policy_url, practices, normalized)
        if app.label is None or found is None:
            skipped += 1
            continue
        if app.platform is Platform.google:
            reports.append(check_google_label_vs_policy(app.google_label, found, app.app_id))
        else:
            reports.append(check_apple_label_vs_policy(app.apple_label, found, app.app_id))
    reports.sort(key=lambda r: (r.platform.value, r.app_id))
    n = dump_models(args.out, reports)
    inconsistent = sum(not r.consistent for r in reports)
    logger.info(f"✔ Saved {n} reports ({inconsistent} with findings, {skipped} apps without label or policy) → {args.out}")
    return EXIT_OK


def cmd_check_cross(args, settings: Settings) -> int:
    matches = read_models(args.matches, MatchResult)
    google = {a.app_id: a for a in _records(args.google, Platform.google)}
    apple = {a.app_id: a for a in _records(args.apple, Platform.apple)}
    logger.info(f"➡ Comparing labels of {len(matches)} cross-listed pairs")

    reports: list[CrossReport] = []
    for m in matches:
        g, a = google.get(m.google_app_id), apple.get(m.apple_app_id)
        if g is None or a is None or g.google_label is None or a.apple_label is None:
            logger.warning(f"⚠ {m.google_app_id} / {m.apple_app_id}: missing record or label, skipped")
            continue
        reports.append(check_cross_pairs(g.google_label, a.apple_label, m.google_app_id, m.apple_app_id))
    n = dump_models(args.out, reports)
    inconsistent = sum(not r.consistent for r in reports)
    logger.info(f"✔ Saved {n} cross-platform reports ({inconsistent} inconsistent) → {args.out}")
    return EXIT_OK


def cmd_diff(args, settings: Settings) -> int:
    series = [load_snapshot(p) for p in args.snapshots]
    logger.info(f"➡ Diffing {len(series)} snapshots")
    report = diff_snapshots(series)
    n = dump_models(args.out, report.findings)
    logger.info(f"✔ Saved {n} changes {report.counts()} → {args.out}")
    return EXIT_OK


def cmd_report(args, settings: Settings) -> int:
    apps = read_apps(args.apps)
    policy_reports = read_models(args.policy_reports, ConsistencyReport) if args.policy_reports else []
    cross_reports = read_models(args.cross_reports, CrossReport) if args.cross_reports else []
    stats = aggregate(apps, policy_reports, cross_reports, settings.download_floor)
    data = emit_report(stats, args.format)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_bytes(data)
        logger.info(f"✔ Saved {args.format} report → {args.out}")
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


# ---------- parser ----------
def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a global flag given before it
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value file mirroring every flag")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker threads")
    common.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                        help="TRACE, DEBUG, INFO, WARNING, ERROR")

    parser = CliParser(prog="labelcheck", description="Privacy label and privacy policy consistency toolkit",
                       parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("ingest", parents=[common], help="validate canonical JSONL and apply the download filter")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rejects")
    p.add_argument("--urls", help="write the kept apps' policy URLs here")
    p.add_argument("--download-floor", dest="download_floor", type=int)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("fetch-policies", parents=[common], help="politely download policy pages")
    p.add_argument("--input", required=True, help="file with one URL per line")
    p.add_argument("--out", required=True, help="directory for raw pages and manifest.jsonl")
    p.add_argument("--max-retries", dest="max_retries", type=int)
    p.add_argument("--min-interval-ms", dest="min_interval_ms", type=int)
    p.add_argument("--backoff-ms", dest="backoff_ms", type=int)
    p.add_argument("--timeout-s", dest="timeout_s", type=float)
    p.add_argument("--user-agent", dest="user_agent")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("clean", parents=[common], help="extract, gate and segment fetched pages")
    p.add_argument("--in", dest="input", required=True, help="directory written by fetch-policies")
    p.add_argument("--out", required=True)
    p.add_argument("--rejects")
    p.add_argument("--policy-scores", dest="policy_scores", help="JSONL {url, score} overriding the baseline")
    p.add_argument("--extractor", choices=["density", "trafilatura"])
    p.add_argument("--link-density", dest="link_density", type=float)
    p.add_argument("--merge-floor", dest="merge_floor", type=int)
    p.add_argument("--min-words", dest="min_words", type=int)
    p.add_argument("--policy-threshold", dest="policy_threshold", type=float)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("annotate", parents=[common], help="tag segments with taxonomy classes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", default="keyword", help="keyword, null or file:<path>")
    p.add_argument("--threshold", type=float, help="drop tags scoring below this")
    p.add_argument("--export", help="also write segment annotations as JSONL")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("extract-practices", parents=[common], help="fold segment tags into practice sets")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("match", parents=[common], help="find apps listed on both stores")
    p.add_argument("--google", required=True)
    p.add_argument("--apple", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ambiguous")
    p.add_argument("--suffix-list", dest="suffix_list", help="public suffix list file")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("check-policy", parents=[common], help="compare labels with policy practices")
    p.add_argument("--labels", required=True)
    p.add_argument("--practices", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_check_policy)

    p = sub.add_parser("check-cross", parents=[common], help="compare the two labels of matched apps")
    p.add_argument("--matches", required=True)
    p.add_argument("--google", required=True)
    p.add_argument("--apple", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_check_cross)

    p = sub.add_parser("diff", parents=[common], help="label changes across dated snapshots")
    p.add_argument("--snapshots", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("report", parents=[common], help="corpus-level aggregation")
    p.add_argument("--apps", required=True)
    p.add_argument("--policy-reports", dest="policy_reports")
    p.add_argument("--cross-reports", dest="cross_reports")
    p.add_argument("--format", choices=list(FORMATS), default="json")
    p.add_argument("--out")
    p.add_argument("--download-floor", dest="download_floor", type=int)
    p.set_defaults(func=cmd_report)
    return parser


def settings_from_args(args) -> Settings:
    overrides = {k: getattr(args, k) for k in Settings.model_fields if getattr(args, k, None) is not None}
    return load_settings(getattr(args, "config", None), overrides)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = settings_from_args(args)
        setup_logging(settings.log_level)
        configure_suffix_list(settings.suffix_list)
        return args.func(args, settings)
    except UsageError as e:
        logger.error(f"usage error: {e}")
        return EXIT_USAGE
    except LabelcheckError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except (OSError, requests.RequestException) as e:
        logger.error(f"IO error: {e}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
